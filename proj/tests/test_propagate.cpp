#include "giant_lattice/memory.hpp"
#include "giant_lattice/propagate.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

namespace gl = giant_lattice;
using testing::exact_run;
using testing::fig2a;
using testing::fig2b;
using testing::view;

TEST_SUITE("propagate") {

TEST_CASE("uniform_grid covers [0, t_end] inclusively") {
    const auto t = gl::uniform_grid<double>(0.01, 40.0);
    CHECK(t.size() == 4001);
    CHECK(t(0) == 0.0);
    CHECK(t(4000) == doctest::Approx(40.0));
    CHECK_THROWS_AS(gl::uniform_grid<double>(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("evolve_exact: decoupled atom stays excited") {
    auto cfg = fig2a();
    cfg.gm = cfg.gn = 0;
    const auto traj = exact_run(cfg, 0.0, 1, 0.1, 40.0);
    CHECK(traj.norm_drift <= 1e-12);
    for (Eigen::Index k = 0; k < traj.samples(); ++k) {
        CHECK(std::abs(traj.abs_ce(k) * traj.abs_ce(k) - 1.0) <= 1e-12);
    }
}

TEST_CASE("evolve_exact: initial condition and norm") {
    const auto traj = exact_run(fig2a(), 0.02, 3, 0.01, 40.0);
    CHECK(traj.times(0) == 0.0);
    CHECK(traj.abs_ce(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(traj.norm_drift <= 1e-10);
}

TEST_CASE("evolve_exact: unitarity out to t = 200") {
    auto cfg = testing::geometry(20, 170, 0.9);
    cfg.omegaE = 1.1;
    const auto traj = exact_run(cfg, 0.3, 8, 0.25, 200.0);
    CHECK(traj.norm_drift <= 1e-10);
}

TEST_CASE("evolve_exact: distant coupling points decay then revive") {
    // Measured behaviour of (83, 118): the population falls to ~0.012 before
    // the first photons return (flight time 35 sites / 2J = 17.5), then the
    // atom re-absorbs during [20, 40].
    const auto traj = exact_run(fig2b(), 0.0, 1, 0.01, 40.0);
    const auto pop = traj.population();
    double min_early = 1.0;
    for (Eigen::Index k = 0; k <= 2000; ++k) min_early = std::min(min_early, pop(k));
    CHECK(min_early < 0.02);
    CHECK(min_early > 0.01);
    const auto rep = gl::analyze_memory(traj);
    const double nv_late = rep.nv_cumulative(4000) - rep.nv_cumulative(2000);
    CHECK(nv_late > 1e-3);
    double max_late = 0;
    for (Eigen::Index k = 2000; k <= 4000; ++k) max_late = std::max(max_late, pop(k));
    CHECK(max_late > 0.1);
}

TEST_CASE("evolve_exact: single-point decay rate matches the golden rule") {
    auto cfg = fig2a();
    cfg.gn = 0;
    const auto traj = exact_run(cfg, 0.0, 1, 0.01, 10.0);
    const auto pop = traj.population();
    const double rate = gl::fit_decay_rate<double>(view(traj.times), view(pop), 1.0, 8.0);
    const double oracle = testing::golden_rule_rate(0.35, 1.0, 0.0);
    CHECK(oracle == doctest::Approx(0.1225));
    CHECK(std::abs(rate - oracle) / oracle < 0.10);
}

TEST_CASE("evolve_exact: linearity in the initial state") {
    auto cfg = fig2a();
    cfg.L = 40;
    cfg.m = 15;
    cfg.n = 22;
    const auto H = gl::build_hamiltonian(cfg, gl::sample_disorder(cfg.L, 0.1, 2));
    const auto t = gl::uniform_grid<double>(0.1, 10.0);
    const std::span<const double> ts(t.data(), static_cast<std::size_t>(t.size()));
    const auto full = gl::evolve_exact<double>(H, ts, gl::atom_excited<double>(H.rows()), true);
    const gl::Vector<std::complex<double>> half_state = 0.5 * gl::atom_excited<double>(H.rows());
    const auto half = gl::evolve_exact<double>(H, ts, half_state, true);
    CHECK((half.ce - 0.5 * full.ce).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((*half.sites - 0.25 * *full.sites).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("evolve_exact: input validation") {
    const auto cfg = fig2a();
    auto H = gl::build_hamiltonian(cfg, gl::clean_lattice(cfg.L));
    const gl::Vector<double> empty;
    CHECK_THROWS_AS(gl::evolve_exact<double>(H, empty), std::invalid_argument);
    gl::Vector<double> bad(3);
    bad << 0.0, 2.0, 1.0;
    CHECK_THROWS_AS(gl::evolve_exact<double>(H, bad), std::invalid_argument);
    gl::Vector<double> late(2);
    late << 1.0, 2.0;
    CHECK_THROWS_AS(gl::evolve_exact<double>(H, late), std::invalid_argument);
    H(3, 4) += 1e-9;
    gl::Vector<double> ok(2);
    ok << 0.0, 1.0;
    CHECK_THROWS_AS(gl::evolve_exact<double>(H, ok), std::invalid_argument);
}

TEST_CASE("evolve_rk4: agrees with the exact propagator") {
    const auto cfg = fig2a();
    const auto H = gl::build_hamiltonian(cfg, gl::clean_lattice(cfg.L));
    const auto rk = gl::evolve_rk4<double>(H, 1e-3, 10.0, 10);
    const auto ex = gl::evolve_exact<double>(H, rk.times);
    REQUIRE(rk.samples() == 1001);
    const double err = (rk.population() - ex.population()).cwiseAbs().maxCoeff();
    CHECK(err <= 1e-6);
    CHECK(rk.norm_drift <= 1e-8);
}

TEST_CASE("evolve_rk4: decoupled atom") {
    auto cfg = fig2a();
    cfg.gm = cfg.gn = 0;
    const auto H = gl::build_hamiltonian(cfg, gl::clean_lattice(cfg.L));
    const auto rk = gl::evolve_rk4<double>(H, 1e-3, 5.0, 100);
    CHECK((rk.population().array() - 1.0).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("evolve_rk4: fourth-order convergence") {
    // Two-run Richardson check against the exact trajectory.
    const auto cfg = fig2a();
    const auto H = gl::build_hamiltonian(cfg, gl::clean_lattice(cfg.L));
    auto error_at = [&](double dt, long every) {
        const auto rk = gl::evolve_rk4<double>(H, dt, 10.0, every);
        const auto ex = gl::evolve_exact<double>(H, rk.times);
        return (rk.ce - ex.ce).cwiseAbs().maxCoeff();
    };
    const double coarse = error_at(0.08, 5);
    const double fine = error_at(0.04, 10);
    const double ratio = coarse / fine;
    MESSAGE("RK4 error ratio for dt halving: " << ratio);
    CHECK(ratio > 13.0);
    CHECK(ratio < 19.0);
}

TEST_CASE("evolve_rk4: oversized step is a diagnostic failure") {
    const auto cfg = fig2a();
    const auto H = gl::build_hamiltonian(cfg, gl::clean_lattice(cfg.L));
    CHECK_THROWS_AS(gl::evolve_rk4<double>(H, 1.0, 50.0, 1), gl::NumericError);
    CHECK_THROWS_AS(gl::evolve_rk4<double>(H, 0.1, 0.05, 1), std::invalid_argument);
    CHECK_THROWS_AS(gl::evolve_rk4<double>(H, -0.1, 1.0, 1), std::invalid_argument);
}

TEST_CASE("transport_grid: vacuum start and population bookkeeping") {
    const auto traj = exact_run(fig2b(), 0.02, 4, 0.05, 60.0, true);
    const auto& grid = gl::transport_grid(traj);
    CHECK(grid.rows() == traj.samples());
    CHECK(grid.cols() == 200);
    CHECK(grid.row(0).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index k = 0; k < grid.rows(); ++k) {
        const double photons = grid.row(k).sum();
        CHECK(std::abs(photons - (1.0 - traj.abs_ce(k) * traj.abs_ce(k))) <= 1e-9);
    }
}

TEST_CASE("transport_grid: requires site amplitudes") {
    const auto traj = exact_run(fig2a(), 0.0, 1, 0.5, 5.0, false);
    CHECK_THROWS_AS(gl::transport_grid(traj), std::invalid_argument);
}

TEST_CASE("transport_grid: mirror symmetry about the coupling midpoint") {
    // Sites 99 and 102 of a 200-site chain are mirror images under j -> 201 - j.
    const auto traj = exact_run(fig2a(), 0.0, 1, 0.1, 100.0, true);
    const auto& grid = gl::transport_grid(traj);
    double worst = 0;
    for (Eigen::Index j = 0; j < 100; ++j) {
        worst = std::max(worst, (grid.col(j) - grid.col(199 - j)).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("transport_grid: wavefront travels at the maximal group velocity 2J") {
    const auto traj = exact_run(fig2a(), 0.0, 1, 0.1, 40.0, true);
    const auto& grid = gl::transport_grid(traj);
    // Outermost site (right of the pair) with population above 1e-4.
    gl::Vector<double> front(grid.rows());
    for (Eigen::Index k = 0; k < grid.rows(); ++k) {
        Eigen::Index outer = 0;
        for (Eigen::Index j = grid.cols() - 1; j >= 0; --j) {
            if (grid(k, j) > 1e-4) {
                outer = j + 1;
                break;
            }
        }
        front(k) = static_cast<double>(outer);
    }
    const double speed = testing::slope(view(traj.times), view(front), 5.0, 40.0);
    MESSAGE("front speed: " << speed);
    CHECK(speed == doctest::Approx(2.0).epsilon(0.05));
}

}
