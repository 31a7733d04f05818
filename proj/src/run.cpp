#include "giant_lattice/run.hpp"

#include "giant_lattice/errors.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <span>
#include <system_error>

namespace giant_lattice {

using nlohmann::ordered_json;

CsvWriter trajectory_table(const AmplitudeTrajectory<double>& traj) {
    CsvWriter csv{"t", "re_ce", "im_ce", "abs_ce", "pop_e"};
    for (Eigen::Index k = 0; k < traj.samples(); ++k) {
        const double a = traj.abs_ce(k);
        csv.cell(traj.times(k)).cell(traj.ce(k).real()).cell(traj.ce(k).imag()).cell(a).cell(a * a);
        csv.end_row();
    }
    return csv;
}

CsvWriter transport_table(const AmplitudeTrajectory<double>& traj) {
    const auto& grid = transport_grid(traj);
    std::vector<std::string> header{"t"};
    for (Eigen::Index j = 1; j <= grid.cols(); ++j) header.push_back(std::to_string(j));
    CsvWriter csv(header);
    for (Eigen::Index k = 0; k < grid.rows(); ++k) {
        csv.cell(traj.times(k));
        for (Eigen::Index j = 0; j < grid.cols(); ++j) csv.cell(grid(k, j));
        csv.end_row();
    }
    return csv;
}

CsvWriter memory_table(const AmplitudeTrajectory<double>& traj, const MemoryReport<double>& report) {
    CsvWriter csv{"t", "abs_ce", "nv", "n"};
    for (Eigen::Index k = 0; k < traj.samples(); ++k) {
        csv.cell(traj.times(k)).cell(traj.abs_ce(k)).cell(report.nv_cumulative(k)).cell(report.n_cumulative(k));
        csv.end_row();
    }
    return csv;
}

CsvWriter growth_table(const MemoryReport<double>& report) {
    CsvWriter csv{"t_start", "t_end"};
    for (const auto& w : report.growth_windows) {
        csv.cell(w.t_start).cell(w.t_end);
        csv.end_row();
    }
    return csv;
}

CsvWriter sweep_table(const std::vector<SweepRow>& rows) {
    CsvWriter csv{"W", "n_mean", "n_std", "n_min", "n_max", "num_seeds"};
    for (const auto& r : rows) {
        csv.cell(r.W).cell(r.n_mean).cell(r.n_std).cell(r.n_min).cell(r.n_max).cell(r.num_seeds);
        csv.end_row();
    }
    return csv;
}

CsvWriter sweep_members_table(const std::vector<SweepRow>& rows) {
    CsvWriter csv{"W", "seed", "n_final", "n_peak", "nv_final"};
    for (const auto& r : rows) {
        for (const auto& m : r.members) {
            csv.cell(r.W).cell(m.seed).cell(m.n_final).cell(m.n_peak).cell(m.nv_final);
            csv.end_row();
        }
    }
    return csv;
}

CsvWriter spectrum_table(const SpectrumScan<double>& scan) {
    CsvWriter csv{"param_value", "eig_index", "energy", "is_bound", "ipr"};
    for (std::size_t p = 0; p < scan.points(); ++p) {
        const auto& e = scan.eigenvalues[p];
        for (Eigen::Index k = 0; k < e.size(); ++k) {
            csv.cell(scan.values[p]).cell(static_cast<std::int64_t>(k)).cell(e(k));
            csv.cell(scan.bound_flags[p][static_cast<std::size_t>(k)] ? 1 : 0);
            if (scan.ipr) {
                csv.cell((*scan.ipr)[p](k));
            } else {
                csv.empty();
            }
            csv.end_row();
        }
    }
    return csv;
}

CsvWriter spectrum_ensemble_table(const SpectrumSpread& spread) {
    CsvWriter csv{"param_value", "eig_index", "energy_mean", "energy_std", "bound_fraction", "num_seeds"};
    for (std::size_t p = 0; p < spread.values.size(); ++p) {
        for (Eigen::Index k = 0; k < spread.mean[p].size(); ++k) {
            csv.cell(spread.values[p]).cell(static_cast<std::int64_t>(k));
            csv.cell(spread.mean[p](k)).cell(spread.stddev[p](k)).cell(spread.bound_fraction[p](k));
            csv.cell(spread.num_seeds);
            csv.end_row();
        }
    }
    return csv;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string error_record(int exit_code, std::string_view kind, std::string_view message) {
    ordered_json j;
    j["status"] = "error";
    j["exit_code"] = exit_code;
    j["kind"] = kind;
    j["message"] = message;
    return j.dump();
}

namespace {

ordered_json config_json(const RunConfig& cfg) {
    const auto& md = cfg.model;
    ordered_json j;
    j["model"] = {{"L", md.L},   {"omega0", md.omega0}, {"omegaE", md.omegaE}, {"J", md.J},
                  {"gm", md.gm}, {"gn", md.gn},         {"m", md.m},           {"n", md.n}};
    j["disorder"] = {{"W", cfg.disorder.W}, {"seed", cfg.disorder.seed}, {"seeds", cfg.disorder.seeds}};
    const auto& r = cfg.run;
    ordered_json run;
    run["mode"] = to_string(r.mode);
    run["dt"] = r.dt;
    run["t_end"] = r.t_end;
    run["want_sites"] = r.want_sites;
    run["parameter"] = r.parameter ? ordered_json(to_string(*r.parameter)) : ordered_json(nullptr);
    run["values"] = r.values;
    run["W_values"] = r.W_values;
    run["ipr"] = r.ipr;
    run["band_tol"] = r.band_tol ? ordered_json(*r.band_tol) : ordered_json(nullptr);
    run["threshold"] = r.memory.threshold;
    run["measure"] = r.memory.power == MeasurePower::Fourth ? "amplitude4" : "population";
    run["threads"] = r.threads;
    run["output"] = r.output;
    j["run"] = run;
    return j;
}

class ArtifactSink {
public:
    explicit ArtifactSink(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void put(const std::string& file, const CsvWriter& csv) {
        write_file(dir_ / file, csv.str());
        artifacts_.push_back({file, sha256_hex(csv.str()), csv.str().size(), csv.rows()});
    }

    const std::vector<Artifact>& artifacts() const { return artifacts_; }

private:
    std::filesystem::path dir_;
    std::vector<Artifact> artifacts_;
};

std::vector<double> time_grid(const RunConfig& cfg) {
    const auto t = uniform_grid<double>(cfg.run.dt, cfg.run.t_end);
    return {t.data(), t.data() + t.size()};
}

void execute(const RunConfig& cfg, ArtifactSink& sink) {
    const auto& md = cfg.model;
    const auto& r = cfg.run;
    switch (r.mode) {
        case RunMode::Evolve:
        case RunMode::Transport:
        case RunMode::Memory: {
            const auto dis = sample_disorder(md.L, cfg.disorder.W, cfg.disorder.seed);
            const auto H = build_hamiltonian<double>(md, dis);
            const auto times = time_grid(cfg);
            const auto traj = evolve_exact<double>(H, std::span<const double>(times), r.want_sites);
            sink.put("trajectory.csv", trajectory_table(traj));
            if (r.want_sites) sink.put("transport.csv", transport_table(traj));
            if (r.mode == RunMode::Memory) {
                const auto rep = analyze_memory(traj, r.memory);
                sink.put("memory.csv", memory_table(traj, rep));
                sink.put("growth_windows.csv", growth_table(rep));
            }
            break;
        }
        case RunMode::SweepN: {
            const auto times = time_grid(cfg);
            const auto seeds = cfg.disorder.ensemble();
            const auto rows = disorder_sweep_n(md, r.W_values, seeds, times, r.memory, r.threads);
            sink.put("sweep.csv", sweep_table(rows));
            sink.put("sweep_members.csv", sweep_members_table(rows));
            break;
        }
        case RunMode::Spectrum: {
            ScanOptions opts;
            opts.want_ipr = r.ipr;
            opts.tol = r.band_tol;
            opts.threads = r.threads;
            const auto dis = sample_disorder(md.L, cfg.disorder.W, cfg.disorder.seed);
            const auto scan = scan_spectrum<double>(md, dis, *r.parameter, r.values, opts);
            sink.put("spectrum.csv", spectrum_table(scan));
            if (cfg.disorder.seeds.size() > 1) {
                const auto spread =
                    scan_spectrum_ensemble(md, cfg.disorder.W, cfg.disorder.seeds, *r.parameter, r.values, opts);
                sink.put("spectrum_ensemble.csv", spectrum_ensemble_table(spread));
            }
            break;
        }
    }
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    RunResult result;
    result.output_dir = cfg.run.output;
    const auto started = std::chrono::steady_clock::now();

    auto fail = [&](int code, std::string_view kind, std::string_view msg) {
        result.exit_code = code;
        result.error_json = error_record(code, kind, msg);
        std::error_code ec;
        if (std::filesystem::is_directory(result.output_dir, ec)) {
            try {
                write_file(result.output_dir / "error.json", result.error_json + "\n");
            } catch (const IoError&) {
            }
        }
        return result;
    };

    try {
        cfg.validate();
        std::error_code ec;
        std::filesystem::create_directories(result.output_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + result.output_dir.string() + "': " + ec.message());
        std::filesystem::remove(result.output_dir / "error.json", ec);

        ArtifactSink sink(result.output_dir);
        execute(cfg, sink);
        result.artifacts = sink.artifacts();

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        ordered_json manifest;
        manifest["tool"] = kToolName;
        manifest["version"] = kToolVersion;
        manifest["mode"] = to_string(cfg.run.mode);
        manifest["prng"] = kPrngAlgorithm;
        manifest["seeds"] = cfg.disorder.ensemble();
        manifest["config"] = config_json(cfg);
        manifest["site_indexing"] = "1-based; basis index 0 is the atom";
        manifest["wall_time_s"] = wall;
        ordered_json files = ordered_json::array();
        for (const auto& a : result.artifacts) {
            files.push_back({{"file", a.file}, {"sha256", a.sha256}, {"bytes", a.bytes}, {"rows", a.rows}});
        }
        manifest["files"] = files;
        write_file(result.output_dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const ConfigError& e) {
        return fail(kExitConfig, "config", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(kExitConfig, "config", e.what());
    } catch (const IoError& e) {
        return fail(kExitIo, "io", e.what());
    } catch (const NumericError& e) {
        return fail(kExitNumeric, "numeric", e.what());
    } catch (const std::exception& e) {
        return fail(kExitNumeric, "numeric", e.what());
    }
    return result;
}

}  // namespace giant_lattice
