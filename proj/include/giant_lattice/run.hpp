// run.hpp — executes one RunConfig and writes its CSV artifacts plus a
// manifest.json (resolved config, PRNG id, seeds, tool version, wall time and a
// SHA-256 for every file written).

#pragma once

#include "giant_lattice/config.hpp"
#include "giant_lattice/csv.hpp"
#include "giant_lattice/memory.hpp"
#include "giant_lattice/propagate.hpp"
#include "giant_lattice/spectrum.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace giant_lattice {

inline constexpr std::string_view kToolName = "giant-lattice-sim";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumeric = 3,
    kExitIo = 4,
};

struct Artifact {
    std::string file;  // relative to the output directory
    std::string sha256;
    std::size_t bytes = 0;
    std::size_t rows = 0;  // data rows, excluding the header
};

struct RunResult {
    int exit_code = kExitOk;
    std::filesystem::path output_dir;
    std::vector<Artifact> artifacts;
    std::string error_json;  // one-line machine-readable record when exit_code != 0
};

// Column layouts published to downstream consumers.
CsvWriter trajectory_table(const AmplitudeTrajectory<double>& traj);
CsvWriter transport_table(const AmplitudeTrajectory<double>& traj);
CsvWriter memory_table(const AmplitudeTrajectory<double>& traj, const MemoryReport<double>& report);
CsvWriter growth_table(const MemoryReport<double>& report);
CsvWriter sweep_table(const std::vector<SweepRow>& rows);
CsvWriter sweep_members_table(const std::vector<SweepRow>& rows);
CsvWriter spectrum_table(const SpectrumScan<double>& scan);
CsvWriter spectrum_ensemble_table(const SpectrumSpread& spread);

std::string sha256_hex(std::string_view data);

// Never throws for configuration, numeric or I/O problems: they are reported
// through exit_code/error_json (and error.json in the output directory when it
// can be created).
RunResult run(const RunConfig& cfg);

// Formats the machine-readable error record.
std::string error_record(int exit_code, std::string_view kind, std::string_view message);

}  // namespace giant_lattice
