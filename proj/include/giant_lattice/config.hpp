// config.hpp — run configuration documents.
//
// A configuration is a small INI-style text file with three sections:
//
//   [model]      L, omega0, omegaE, J, g | gm + gn, m, n   (sites 1-based)
//   [disorder]   W, seed, seeds
//   [run]        mode, dt, t_end, want_sites, parameter, values, W_values,
//                ipr, band_tol, threshold, measure, threads, output
//
// `key = value` per line; `#` or `;` starts a comment. Lists are comma
// separated; integer ranges may be written `a..b` (inclusive) and uniform real
// grids `start:stop:count`. Unknown sections or keys are rejected. See
// README.md for the full key reference.

#pragma once

#include "giant_lattice/memory.hpp"
#include "giant_lattice/model.hpp"
#include "giant_lattice/spectrum.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace giant_lattice {

enum class RunMode { Evolve, Transport, Memory, SweepN, Spectrum };

std::string_view to_string(RunMode mode);
std::optional<RunMode> parse_run_mode(std::string_view s);

struct DisorderConfig {
    double W = 0.0;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds;  // ensemble modes; empty means {seed}

    std::vector<std::uint64_t> ensemble() const { return seeds.empty() ? std::vector{seed} : seeds; }
};

struct RunSettings {
    RunMode mode = RunMode::Evolve;
    double dt = 0.01;
    double t_end = 40.0;
    bool want_sites = false;
    std::optional<SweepParameter> parameter;
    std::vector<double> values;    // spectrum sweep grid
    std::vector<double> W_values;  // sweep-n disorder strengths
    bool ipr = false;
    std::optional<double> band_tol;
    MemoryOptions memory;
    unsigned threads = 0;
    std::string output = "out";
};

struct RunConfig {
    ModelConfig model;
    DisorderConfig disorder;
    RunSettings run;

    // Cross-field checks; throws ConfigError naming the field.
    void validate() const;
};

// Parses and validates a document. Throws ConfigError with line/field
// diagnostics.
RunConfig parse_config(std::string_view text);

// Reads `path` and parses it. Throws IoError when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace giant_lattice
