#include "giant_lattice/config.hpp"
#include "giant_lattice/run.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace gl = giant_lattice;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::path(TEST_SCRATCH_DIR) / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

gl::RunConfig config(const std::string& doc, const fs::path& out) {
    auto cfg = gl::parse_config(doc);
    cfg.run.output = out.string();
    return cfg;
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(GIANT_LATTICE_SIM) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("run") {

TEST_CASE("format_real keeps 17 significant digits") {
    CHECK(gl::format_real(0.1) == "0.10000000000000001");
    CHECK(gl::format_real(1.0) == "1");
    CHECK(std::stod(gl::format_real(2.0 / 3.0)) == 2.0 / 3.0);
}

TEST_CASE("CsvWriter enforces the column count and quotes text") {
    gl::CsvWriter csv{"a", "b"};
    csv.text("x,y").cell(1);
    csv.end_row();
    CHECK(csv.str() == "a,b\n\"x,y\",1\n");
    csv.cell(1.5);
    CHECK_THROWS_AS(csv.end_row(), std::logic_error);
}

TEST_CASE("sha256 of a known string") {
    CHECK(gl::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("evolve: trajectory starts from the excited atom") {
    const auto out = scratch("evolve");
    const auto res = gl::run(config("[run]\nmode = evolve\n", out));
    REQUIRE(res.exit_code == 0);
    const auto body = lines(slurp(out / "trajectory.csv"));
    REQUIRE(body.size() == 4002);
    CHECK(body[0] == "t,re_ce,im_ce,abs_ce,pop_e");
    CHECK(body[1] == "0,1,0,1,1");
    CHECK(fs::exists(out / "manifest.json"));
    CHECK_FALSE(fs::exists(out / "transport.csv"));
}

TEST_CASE("transport: grid header lists sites and rows match the trajectory") {
    const auto out = scratch("transport");
    const auto res =
        gl::run(config("[model]\nL = 20\nm = 8\nn = 12\n[run]\nmode = transport\ndt = 0.5\nt_end = 5\n", out));
    REQUIRE(res.exit_code == 0);
    const auto body = lines(slurp(out / "transport.csv"));
    REQUIRE(body.size() == 12);
    CHECK(body[0].rfind("t,1,2,3,", 0) == 0);
    CHECK(body[0].substr(body[0].size() - 3) == ",20");
    CHECK(body[1].rfind("0,0,0,", 0) == 0);
}

TEST_CASE("memory: columns and growth windows") {
    const auto out = scratch("memory");
    const auto res = gl::run(config("[model]\nm = 83\nn = 118\n[run]\nmode = memory\n", out));
    REQUIRE(res.exit_code == 0);
    const auto mem = lines(slurp(out / "memory.csv"));
    CHECK(mem[0] == "t,abs_ce,nv,n");
    CHECK(mem[1] == "0,1,0,0");
    const auto win = lines(slurp(out / "growth_windows.csv"));
    CHECK(win[0] == "t_start,t_end");
    CHECK(win.size() > 1);
}

TEST_CASE("spectrum: 161 detuning points x 201 levels") {
    const auto out = scratch("spectrum");
    const auto res =
        gl::run(config("[run]\nmode = spectrum\nparameter = detuning\nvalues = -4:4:161\n", out));
    REQUIRE(res.exit_code == 0);
    const auto body = lines(slurp(out / "spectrum.csv"));
    CHECK(body[0] == "param_value,eig_index,energy,is_bound,ipr");
    CHECK(body.size() == 1 + 161 * 201);
    CHECK(body[1].rfind("-4,0,", 0) == 0);
    CHECK(body[1].back() == ',');  // ipr not requested
    REQUIRE(res.artifacts.size() == 1);
    CHECK(res.artifacts[0].rows == 161 * 201);
}

TEST_CASE("spectrum: ensemble spread when several seeds are given") {
    const auto out = scratch("spectrum_ensemble");
    const auto res = gl::run(config(
        "[model]\nL = 30\nm = 10\nn = 14\n[disorder]\nW = 0.02\nseeds = 1..4\n[run]\nmode = spectrum\nparameter = "
        "coupling\nvalues = 0, 1\nipr = true\n",
        out));
    REQUIRE(res.exit_code == 0);
    const auto body = lines(slurp(out / "spectrum_ensemble.csv"));
    CHECK(body[0] == "param_value,eig_index,energy_mean,energy_std,bound_fraction,num_seeds");
    CHECK(body.size() == 1 + 2 * 31);
    CHECK(body[1].substr(body[1].size() - 2) == ",4");
}

TEST_CASE("sweep-n: one row per disorder strength") {
    const auto out = scratch("sweep");
    const auto res = gl::run(config(
        "[model]\nm = 83\nn = 118\n[disorder]\nseeds = 1..20\n[run]\nmode = sweep-n\nW_values = 0, 0.005, "
        "0.02\ndt = 0.1\n",
        out));
    REQUIRE(res.exit_code == 0);
    const auto body = lines(slurp(out / "sweep.csv"));
    REQUIRE(body.size() == 4);
    CHECK(body[0] == "W,n_mean,n_std,n_min,n_max,num_seeds");
    for (int r = 1; r <= 3; ++r) CHECK(body[r].substr(body[r].size() - 3) == ",20");
    CHECK(lines(slurp(out / "sweep_members.csv")).size() == 1 + 60);
}

TEST_CASE("manifest lists every file with its checksum") {
    const auto out = scratch("manifest");
    const auto res = gl::run(config("[disorder]\nW = 0.02\nseed = 9\n[run]\nmode = memory\nt_end = 5\n", out));
    REQUIRE(res.exit_code == 0);
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["prng"] == "splitmix64-counter/v1");
    CHECK(manifest["version"] == "0.1.0");
    CHECK(manifest["seeds"] == nlohmann::json::array({9}));
    CHECK(manifest["config"]["model"]["m"] == 99);
    CHECK(manifest["config"]["disorder"]["W"] == 0.02);
    CHECK(manifest.contains("wall_time_s"));
    std::size_t listed = 0;
    for (const auto& f : manifest["files"]) {
        const auto content = slurp(out / f["file"].get<std::string>());
        CHECK(f["sha256"] == gl::sha256_hex(content));
        CHECK(f["bytes"] == content.size());
        ++listed;
    }
    std::size_t on_disk = 0;
    for (const auto& e : fs::directory_iterator(out)) on_disk += e.path().extension() == ".csv";
    CHECK(listed == on_disk);
    CHECK(listed == 3);
}

TEST_CASE("identical configs give byte-identical CSV bodies") {
    const std::string doc = "[disorder]\nW = 0.02\nseed = 4\n[run]\nmode = memory\nwant_sites = true\nt_end = 10\n";
    const auto a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(gl::run(config(doc, a)).exit_code == 0);
    REQUIRE(gl::run(config(doc, b)).exit_code == 0);
    for (const char* f : {"trajectory.csv", "transport.csv", "memory.csv", "growth_windows.csv"}) {
        CAPTURE(f);
        CHECK(slurp(a / f) == slurp(b / f));
    }
}

TEST_CASE("run reports I/O failures with exit code 4") {
    const auto blocker = scratch("blocker");
    fs::create_directories(blocker.parent_path());
    std::ofstream(blocker) << "not a directory";
    const auto res = gl::run(config("[run]\nt_end = 1\n", blocker / "out"));
    CHECK(res.exit_code == gl::kExitIo);
    const auto err = nlohmann::json::parse(res.error_json);
    CHECK(err["kind"] == "io");
    CHECK(err["exit_code"] == 4);
}

TEST_CASE("run reports invalid configurations with exit code 2") {
    auto cfg = gl::parse_config("");
    const auto out = scratch("invalid");
    cfg.run.output = out.string();
    cfg.model.m = 150;  // bypasses the parser
    cfg.model.n = 120;
    fs::create_directories(out);
    const auto res = gl::run(cfg);
    CHECK(res.exit_code == gl::kExitConfig);
    CHECK(nlohmann::json::parse(slurp(out / "error.json"))["kind"] == "config");
}

TEST_CASE("cli: success, overrides and presets") {
    const auto dir = scratch("cli_ok");
    fs::create_directories(dir);
    std::ofstream(dir / "run.cfg") << "[disorder]\nW = 0.02\n[run]\nmode = evolve\nt_end = 2\n";
    CHECK(run_cli((dir / "run.cfg").string() + " --out " + (dir / "a").string() + " --seed 5 --quiet",
                  dir / "log_a") == 0);
    CHECK(slurp(dir / "log_a").empty());
    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest["config"]["disorder"]["seed"] == 5);
    CHECK(manifest["config"]["run"]["output"] == (dir / "a").string());

    CHECK(run_cli("fig5e --out " + (dir / "preset").string(), dir / "log_p") == 0);
    CHECK(fs::exists(dir / "preset" / "spectrum.csv"));
    CHECK(slurp(dir / "log_p").find("spectrum.csv") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
    const auto dir = scratch("cli_err");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.cfg") << "[model]\nm = 118\nn = 83\n";
    CHECK(run_cli((dir / "bad.cfg").string() + " --out " + (dir / "o").string(), dir / "log_bad") == 2);
    const auto err = nlohmann::json::parse(slurp(dir / "log_bad"));
    CHECK(err["kind"] == "config");
    CHECK(err["message"].get<std::string>().find("m < n") != std::string::npos);

    CHECK(run_cli((dir / "missing.cfg").string(), dir / "log_missing") == 4);
    CHECK(run_cli("", dir / "log_noargs") == 2);

    std::ofstream(dir / "ok.cfg") << "[run]\nt_end = 1\n";
    std::ofstream(dir / "file") << "x";
    CHECK(run_cli((dir / "ok.cfg").string() + " --out " + (dir / "file" / "sub").string(), dir / "log_io") == 4);
}

}
