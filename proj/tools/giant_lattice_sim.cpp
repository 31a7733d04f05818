// giant-lattice-sim <config-path> [--out DIR] [--seed N] [--quiet]
//
// Exit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O failure.

#include "giant_lattice/config.hpp"
#include "giant_lattice/errors.hpp"
#include "giant_lattice/run.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace gl = giant_lattice;

namespace {

// A bare preset name (fig2a, fig5h, ...) resolves to the bundled presets.
std::filesystem::path resolve_config(const std::string& arg) {
    std::filesystem::path p(arg);
    if (std::filesystem::exists(p)) return p;
    std::filesystem::path preset = std::filesystem::path(GIANT_LATTICE_PRESET_DIR) / (arg + ".cfg");
    if (p.parent_path().empty() && std::filesystem::exists(preset)) return preset;
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Giant atom coupled to a disordered tight-binding lattice"};
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    app.add_option("config", config_path, "Configuration file (or preset name, e.g. fig2a)")->required();
    app.add_option("--out", out_dir, "Output directory (overrides run.output)");
    app.add_option("--seed", seed, "Disorder seed (overrides disorder.seed)");
    app.add_flag("--quiet", quiet, "Only report errors");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : gl::kExitConfig;
    }

    gl::RunConfig cfg;
    try {
        cfg = gl::load_config(resolve_config(config_path));
        if (out_dir) cfg.run.output = *out_dir;
        if (seed) cfg.disorder.seed = *seed;
    } catch (const gl::ConfigError& e) {
        std::cerr << gl::error_record(gl::kExitConfig, "config", e.what()) << '\n';
        return gl::kExitConfig;
    } catch (const gl::IoError& e) {
        std::cerr << gl::error_record(gl::kExitIo, "io", e.what()) << '\n';
        return gl::kExitIo;
    }

    const auto result = gl::run(cfg);
    if (result.exit_code != gl::kExitOk) {
        std::cerr << result.error_json << '\n';
        return result.exit_code;
    }
    if (!quiet) {
        std::cout << gl::to_string(cfg.run.mode) << " -> " << result.output_dir.string() << '\n';
        for (const auto& a : result.artifacts) {
            std::cout << "  " << a.file << "  " << a.rows << " rows  sha256:" << a.sha256.substr(0, 16) << '\n';
        }
        std::cout << "  manifest.json\n";
    }
    return gl::kExitOk;
}
