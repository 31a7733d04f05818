// propagate.hpp — time evolution of the single-excitation amplitudes
//
//   i dC/dt = H C,   C(0) = e_0 (atom excited, lattice in vacuum).
//
// evolve_exact diagonalises H once and applies V exp(-iEt) V^T at every sample.
// evolve_rk4 integrates the same linear system with classic fourth-order
// Runge-Kutta; it exists to cross-check the exact propagator.

#pragma once

#include "giant_lattice/errors.hpp"
#include "giant_lattice/model.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace giant_lattice {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar = double>
struct AmplitudeTrajectory {
    using Complex = std::complex<Scalar>;

    Vector<Scalar> times;
    Vector<Complex> ce;                 // C_e(t)
    Vector<Scalar> abs_ce;              // |C_e(t)|
    std::optional<Matrix<Scalar>> sites;  // |C_j(t)|^2, rows = samples, cols = sites 1..L
    Scalar norm_drift = 0;              // max_t | |C(0)|^2 - |C(t)|^2 |

    Eigen::Index samples() const { return times.size(); }
    Vector<Scalar> population() const { return abs_ce.array().square().matrix(); }
};

// Grid 0, dt, 2dt, ..., N dt with N = floor(t_end / dt) (a relative slack of
// 1e-9 absorbs representation error, so t_end = 40, dt = 0.01 gives 4001 points).
template <typename Scalar = double>
Vector<Scalar> uniform_grid(Scalar dt, Scalar t_end) {
    if (!(dt > 0) || !std::isfinite(static_cast<double>(dt))) {
        throw std::invalid_argument("time grid: dt must be positive");
    }
    if (!(t_end >= 0) || !std::isfinite(static_cast<double>(t_end))) {
        throw std::invalid_argument("time grid: t_end must be >= 0");
    }
    const auto steps = static_cast<Eigen::Index>(std::floor(static_cast<double>(t_end / dt) + 1e-9));
    Vector<Scalar> t(steps + 1);
    for (Eigen::Index k = 0; k <= steps; ++k) t(k) = static_cast<Scalar>(k) * dt;
    return t;
}

namespace detail {

template <typename Scalar>
void check_hermitian(const Matrix<Scalar>& H) {
    if (H.rows() != H.cols() || H.rows() < 1) {
        throw std::invalid_argument("propagator: Hamiltonian must be square and non-empty");
    }
    if (symmetry_defect(H) > Scalar(1e-12)) {
        throw std::invalid_argument("propagator: Hamiltonian is not Hermitian");
    }
}

template <typename Scalar>
void check_time_grid(std::span<const Scalar> times) {
    if (times.empty()) throw std::invalid_argument("evolve_exact: empty time grid");
    if (times[0] != Scalar(0)) throw std::invalid_argument("evolve_exact: time grid must start at 0");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw std::invalid_argument("evolve_exact: time grid must be strictly increasing");
        }
    }
}

}  // namespace detail

template <typename Scalar>
Vector<std::complex<Scalar>> atom_excited(Eigen::Index dim) {
    Vector<std::complex<Scalar>> c = Vector<std::complex<Scalar>>::Zero(dim);
    c(0) = 1;
    return c;
}

// Exact propagation from an arbitrary initial state.
template <typename Scalar>
AmplitudeTrajectory<Scalar> evolve_exact(const Matrix<Scalar>& H, std::span<const Scalar> times,
                                         const Vector<std::complex<Scalar>>& initial, bool want_sites) {
    using Complex = std::complex<Scalar>;
    detail::check_hermitian(H);
    detail::check_time_grid(times);
    const Eigen::Index dim = H.rows();
    if (initial.size() != dim) throw std::invalid_argument("evolve_exact: initial state has wrong dimension");

    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(H);
    if (es.info() != Eigen::Success) throw NumericError("evolve_exact: eigendecomposition failed");
    const Vector<Scalar>& E = es.eigenvalues();
    const Matrix<Scalar>& V = es.eigenvectors();

    // Eigenbasis coefficients of the initial state.
    const Vector<Scalar> a_re = V.transpose() * initial.real();
    const Vector<Scalar> a_im = V.transpose() * initial.imag();
    const Scalar norm0 = initial.squaredNorm();

    const auto nt = static_cast<Eigen::Index>(times.size());
    AmplitudeTrajectory<Scalar> out;
    out.times = Eigen::Map<const Vector<Scalar>>(times.data(), nt);
    out.ce.resize(nt);
    out.abs_ce.resize(nt);
    if (want_sites) out.sites = Matrix<Scalar>(nt, dim - 1);

    constexpr Eigen::Index kChunk = 256;
    Matrix<Scalar> p_re(dim, kChunk), p_im(dim, kChunk);
    Matrix<Scalar> c_re, c_im;
    Scalar drift = 0;
    for (Eigen::Index t0 = 0; t0 < nt; t0 += kChunk) {
        const Eigen::Index cols = std::min(kChunk, nt - t0);
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Scalar t = times[static_cast<std::size_t>(t0 + c)];
            for (Eigen::Index k = 0; k < dim; ++k) {
                // (a_re + i a_im) * exp(-i E t)
                const Scalar cs = std::cos(E(k) * t);
                const Scalar sn = std::sin(E(k) * t);
                p_re(k, c) = a_re(k) * cs + a_im(k) * sn;
                p_im(k, c) = a_im(k) * cs - a_re(k) * sn;
            }
        }
        c_re.noalias() = V * p_re.leftCols(cols);
        c_im.noalias() = V * p_im.leftCols(cols);
        if (t0 == 0) {
            // t = 0 is the initial state itself, not its V V^T round trip
            c_re.col(0) = initial.real();
            c_im.col(0) = initial.imag();
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Eigen::Index row = t0 + c;
            out.ce(row) = Complex(c_re(0, c), c_im(0, c));
            out.abs_ce(row) = std::abs(out.ce(row));
            const Scalar norm = c_re.col(c).squaredNorm() + c_im.col(c).squaredNorm();
            drift = std::max(drift, std::abs(norm - norm0));
            if (want_sites) {
                out.sites->row(row) = (c_re.col(c).tail(dim - 1).array().square() +
                                       c_im.col(c).tail(dim - 1).array().square())
                                          .matrix()
                                          .transpose();
            }
        }
    }
    out.norm_drift = drift;
    return out;
}

template <typename Scalar>
AmplitudeTrajectory<Scalar> evolve_exact(const Matrix<Scalar>& H, std::span<const Scalar> times,
                                         bool want_sites = false) {
    return evolve_exact<Scalar>(H, times, atom_excited<Scalar>(H.rows()), want_sites);
}

template <typename Scalar>
AmplitudeTrajectory<Scalar> evolve_exact(const Matrix<Scalar>& H, const Vector<Scalar>& times,
                                         bool want_sites = false) {
    return evolve_exact<Scalar>(H, std::span<const Scalar>(times.data(), static_cast<std::size_t>(times.size())),
                                want_sites);
}

// Classic RK4 on dC/dt = -i H C with C split into real and imaginary parts:
// d(Re C)/dt = H Im C, d(Im C)/dt = -H Re C. Samples every `sample_every`
// steps, starting with t = 0. Throws NumericError once the norm drifts by more
// than `max_drift`.
template <typename Scalar>
AmplitudeTrajectory<Scalar> evolve_rk4(const Matrix<Scalar>& H, Scalar dt, Scalar t_end, long sample_every,
                                       bool want_sites = false, Scalar max_drift = Scalar(1e-4)) {
    using Complex = std::complex<Scalar>;
    detail::check_hermitian(H);
    if (!(dt > 0)) throw std::invalid_argument("evolve_rk4: dt must be positive");
    if (!(t_end >= dt)) throw std::invalid_argument("evolve_rk4: t_end must be >= dt");
    if (sample_every < 1) throw std::invalid_argument("evolve_rk4: sample_every must be >= 1");

    const Eigen::Index dim = H.rows();
    const Eigen::SparseMatrix<Scalar> Hs = H.sparseView();
    const auto steps = static_cast<long>(std::floor(static_cast<double>(t_end / dt) + 1e-9));
    const Eigen::Index nt = steps / sample_every + 1;

    AmplitudeTrajectory<Scalar> out;
    out.times.resize(nt);
    out.ce.resize(nt);
    out.abs_ce.resize(nt);
    if (want_sites) out.sites = Matrix<Scalar>(nt, dim - 1);

    Vector<Scalar> re = Vector<Scalar>::Zero(dim), im = Vector<Scalar>::Zero(dim);
    re(0) = 1;
    Vector<Scalar> k1r(dim), k1i(dim), k2r(dim), k2i(dim), k3r(dim), k3i(dim), k4r(dim), k4i(dim);
    Vector<Scalar> tr(dim), ti(dim);

    Scalar drift = 0;
    Eigen::Index row = 0;
    auto record = [&](long step) {
        const Scalar norm = re.squaredNorm() + im.squaredNorm();
        drift = std::max(drift, std::abs(norm - Scalar(1)));
        if (drift > max_drift) {
            throw NumericError("evolve_rk4: norm drift " + std::to_string(static_cast<double>(drift)) +
                               " exceeds " + std::to_string(static_cast<double>(max_drift)) +
                               "; reduce dt (currently " + std::to_string(static_cast<double>(dt)) + ")");
        }
        out.times(row) = static_cast<Scalar>(step) * dt;
        out.ce(row) = Complex(re(0), im(0));
        out.abs_ce(row) = std::abs(out.ce(row));
        if (want_sites) {
            out.sites->row(row) =
                (re.tail(dim - 1).array().square() + im.tail(dim - 1).array().square()).matrix().transpose();
        }
        ++row;
    };

    record(0);
    const Scalar half = dt / 2;
    for (long step = 1; step <= steps; ++step) {
        k1r.noalias() = Hs * im;
        k1i.noalias() = -(Hs * re);
        tr = re + half * k1r;
        ti = im + half * k1i;
        k2r.noalias() = Hs * ti;
        k2i.noalias() = -(Hs * tr);
        tr = re + half * k2r;
        ti = im + half * k2i;
        k3r.noalias() = Hs * ti;
        k3i.noalias() = -(Hs * tr);
        tr = re + dt * k3r;
        ti = im + dt * k3i;
        k4r.noalias() = Hs * ti;
        k4i.noalias() = -(Hs * tr);
        re += (dt / 6) * (k1r + 2 * k2r + 2 * k3r + k4r);
        im += (dt / 6) * (k1i + 2 * k2i + 2 * k3i + k4i);
        if (step % sample_every == 0) record(step);
    }
    out.norm_drift = drift;
    return out;
}

// Site-resolved photon population |C_j(t)|^2 (rows = samples, cols = sites).
template <typename Scalar>
const Matrix<Scalar>& transport_grid(const AmplitudeTrajectory<Scalar>& traj) {
    if (!traj.sites) throw std::invalid_argument("transport_grid: trajectory was computed without site amplitudes");
    return *traj.sites;
}

// Least-squares slope of -log p(t) over samples with t in [t_lo, t_hi].
template <typename Scalar>
Scalar fit_decay_rate(std::span<const Scalar> times, std::span<const Scalar> population, Scalar t_lo, Scalar t_hi) {
    if (times.size() != population.size()) throw std::invalid_argument("fit_decay_rate: size mismatch");
    Scalar n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_lo || times[k] > t_hi) continue;
        if (!(population[k] > 0)) throw std::invalid_argument("fit_decay_rate: non-positive population in window");
        const Scalar y = std::log(population[k]);
        n += 1;
        sx += times[k];
        sy += y;
        sxx += times[k] * times[k];
        sxy += times[k] * y;
    }
    if (n < 2) throw std::invalid_argument("fit_decay_rate: fewer than two samples in window");
    const Scalar denom = n * sxx - sx * sx;
    return -(n * sxy - sx * sy) / denom;
}

}  // namespace giant_lattice
