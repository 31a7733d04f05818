#pragma once

#include "giant_lattice/model.hpp"
#include "giant_lattice/propagate.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace testing {

namespace gl = giant_lattice;

inline gl::ModelConfig geometry(std::size_t m, std::size_t n, double g = 0.35) {
    gl::ModelConfig c;
    c.m = m;
    c.n = n;
    c.gm = c.gn = g;
    return c;
}

inline gl::ModelConfig fig2a() { return geometry(99, 102); }
inline gl::ModelConfig fig2b() { return geometry(83, 118); }

template <typename Scalar>
std::span<const Scalar> view(const gl::Vector<Scalar>& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

inline gl::AmplitudeTrajectory<double> exact_run(const gl::ModelConfig& cfg, double W, std::uint64_t seed,
                                                 double dt, double t_end, bool sites = false) {
    const auto H = gl::build_hamiltonian<double>(cfg, gl::sample_disorder(cfg.L, W, seed));
    const auto t = gl::uniform_grid<double>(dt, t_end);
    return gl::evolve_exact<double>(H, t, sites);
}

// Fermi golden rule for one coupling point of strength g at detuning Delta
// from the centre of a cosine band of half-width 2J:
//   Gamma = 2 pi g^2 rho(omega_e),  rho(w) = 1 / (pi sqrt(4J^2 - Delta^2)).
inline double golden_rule_rate(double g, double J, double Delta) {
    const double pi = 3.14159265358979323846;
    const double rho = 1.0 / (pi * std::sqrt(4 * J * J - Delta * Delta));
    return 2 * pi * g * g * rho;
}

// Least-squares slope of y(t) over t in [lo, hi].
inline double slope(std::span<const double> t, std::span<const double> y, double lo, double hi) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < lo || t[k] > hi) continue;
        n += 1;
        sx += t[k];
        sy += y[k];
        sxx += t[k] * t[k];
        sxy += t[k] * y[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing
