// memory.hpp — non-Markovianity of the atomic amplitude.
//
// The volume measure integrates d|C_e|^4/dt over the intervals where |C_e|
// grows. On a sampled trajectory the integral over growth regions is the sum
// of positive increments of |C_e|^4, which is exact for piecewise-monotone
// data. The normalised measure divides by the magnitude of the decrease
// integral accumulated so far:
//
//   N(t) = N_V(t) / (N_V(t) + 1 - |C_e(t)|^4),
//
// which tends to N_V / (N_V + 1) once the atom has fully decayed.

#pragma once

#include "giant_lattice/errors.hpp"
#include "giant_lattice/model.hpp"
#include "giant_lattice/parallel.hpp"
#include "giant_lattice/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace giant_lattice {

// Power p of |C_e| whose growth is integrated. The literal measure uses p = 4;
// p = 2 (population) is kept for sensitivity studies.
enum class MeasurePower { Fourth = 4, Second = 2 };

struct MemoryOptions {
    double threshold = 1e-12;  // minimum forward difference of |C_e| counted as growth
    MeasurePower power = MeasurePower::Fourth;
};

template <typename Scalar = double>
struct GrowthWindow {
    Scalar t_start;
    Scalar t_end;
};

namespace detail {

template <typename Scalar>
Scalar raise(Scalar a, MeasurePower p) {
    const Scalar a2 = a * a;
    return p == MeasurePower::Fourth ? a2 * a2 : a2;
}

template <typename Scalar>
void require_samples(std::span<const Scalar> abs_ce, const char* who) {
    if (abs_ce.size() < 2) throw std::invalid_argument(std::string(who) + ": need at least 2 samples");
}

}  // namespace detail

// Maximal runs of consecutive forward differences above `threshold`; window
// k spans [t_i, t_j] where the run covers differences i..j-1.
template <typename Scalar>
std::vector<GrowthWindow<Scalar>> segment_growth(std::span<const Scalar> times, std::span<const Scalar> abs_ce,
                                                 Scalar threshold = Scalar(1e-12)) {
    detail::require_samples(abs_ce, "segment_growth");
    if (times.size() != abs_ce.size()) throw std::invalid_argument("segment_growth: size mismatch");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw std::invalid_argument("segment_growth: grid not strictly increasing");
    }
    std::vector<GrowthWindow<Scalar>> windows;
    std::size_t start = 0;
    bool open = false;
    for (std::size_t i = 0; i + 1 < abs_ce.size(); ++i) {
        const bool rising = abs_ce[i + 1] - abs_ce[i] > threshold;
        if (rising && !open) {
            start = i;
            open = true;
        } else if (!rising && open) {
            windows.push_back({times[start], times[i]});
            open = false;
        }
    }
    if (open) windows.push_back({times[start], times.back()});
    return windows;
}

// Cumulative N_V at every sample; N_V(t_0) = 0.
template <typename Scalar>
Vector<Scalar> compute_nv(std::span<const Scalar> abs_ce, MeasurePower power = MeasurePower::Fourth) {
    detail::require_samples(abs_ce, "compute_nv");
    Vector<Scalar> nv(static_cast<Eigen::Index>(abs_ce.size()));
    nv(0) = 0;
    Scalar prev = detail::raise(abs_ce[0], power);
    for (std::size_t i = 1; i < abs_ce.size(); ++i) {
        const Scalar cur = detail::raise(abs_ce[i], power);
        const auto k = static_cast<Eigen::Index>(i);
        nv(k) = nv(k - 1) + std::max(Scalar(0), cur - prev);
        prev = cur;
    }
    return nv;
}

// Cumulative normalised measure; requires |C_e(0)| = 1.
template <typename Scalar>
Vector<Scalar> compute_n(std::span<const Scalar> abs_ce, MeasurePower power = MeasurePower::Fourth) {
    detail::require_samples(abs_ce, "compute_n");
    if (std::abs(abs_ce[0] - Scalar(1)) > Scalar(1e-9)) {
        throw std::invalid_argument("compute_n: trajectory must start from |C_e(0)| = 1");
    }
    const Vector<Scalar> nv = compute_nv(abs_ce, power);
    Vector<Scalar> n(nv.size());
    for (Eigen::Index k = 0; k < nv.size(); ++k) {
        const Scalar denom = nv(k) + Scalar(1) - detail::raise(abs_ce[static_cast<std::size_t>(k)], power);
        n(k) = denom < Scalar(1e-15) ? Scalar(0) : nv(k) / denom;
    }
    return n;
}

template <typename Scalar = double>
struct MemoryReport {
    std::vector<GrowthWindow<Scalar>> growth_windows;
    Vector<Scalar> nv_cumulative;
    Vector<Scalar> n_cumulative;
    Scalar nv_final = 0;
    Scalar n_final = 0;
    Scalar n_peak = 0;
};

template <typename Scalar>
MemoryReport<Scalar> analyze_memory(std::span<const Scalar> times, std::span<const Scalar> abs_ce,
                                    const MemoryOptions& opts = {}) {
    MemoryReport<Scalar> r;
    r.growth_windows = segment_growth(times, abs_ce, static_cast<Scalar>(opts.threshold));
    r.nv_cumulative = compute_nv(abs_ce, opts.power);
    r.n_cumulative = compute_n(abs_ce, opts.power);
    r.nv_final = r.nv_cumulative(r.nv_cumulative.size() - 1);
    r.n_final = r.n_cumulative(r.n_cumulative.size() - 1);
    r.n_peak = r.n_cumulative.maxCoeff();
    return r;
}

template <typename Scalar>
MemoryReport<Scalar> analyze_memory(const AmplitudeTrajectory<Scalar>& traj, const MemoryOptions& opts = {}) {
    const auto n = static_cast<std::size_t>(traj.samples());
    return analyze_memory<Scalar>(std::span<const Scalar>(traj.times.data(), n),
                                  std::span<const Scalar>(traj.abs_ce.data(), n), opts);
}

// ---------------------------------------------------------------------------
// Disorder ensembles

struct SweepMember {
    std::uint64_t seed = 0;
    double n_final = 0;
    double n_peak = 0;
    double nv_final = 0;
};

struct SweepRow {
    double W = 0;
    double n_mean = 0;
    double n_std = 0;  // sample standard deviation (n - 1); 0 for a single seed
    double n_min = 0;
    double n_max = 0;
    std::size_t num_seeds = 0;
    std::vector<SweepMember> members;  // in the order the seeds were given
};

// One exact trajectory per (W, seed); statistics of n_final per W. Members are
// aggregated in ascending seed order so the summary does not depend on how the
// seed list was ordered or how the work was scheduled.
inline std::vector<SweepRow> disorder_sweep_n(const ModelConfig& cfg, std::span<const double> W_values,
                                              std::span<const std::uint64_t> seeds, std::span<const double> times,
                                              const MemoryOptions& opts = {}, unsigned threads = 0) {
    if (W_values.empty()) throw std::invalid_argument("disorder_sweep_n: empty W list");
    if (seeds.empty()) throw std::invalid_argument("disorder_sweep_n: empty seed list");
    cfg.validate();

    const std::size_t ns = seeds.size();
    std::vector<SweepRow> rows(W_values.size());
    for (std::size_t w = 0; w < W_values.size(); ++w) {
        rows[w].W = W_values[w];
        rows[w].num_seeds = ns;
        rows[w].members.resize(ns);
    }

    parallel_for(
        W_values.size() * ns,
        [&](std::size_t job) {
            const std::size_t w = job / ns;
            const std::size_t s = job % ns;
            const double W = W_values[w];
            const std::uint64_t seed = seeds[s];
            try {
                const auto dis = sample_disorder(cfg.L, W, seed);
                const auto H = build_hamiltonian<double>(cfg, dis);
                const auto traj = evolve_exact<double>(H, times, false);
                const auto rep = analyze_memory(traj, opts);
                rows[w].members[s] = {seed, rep.n_final, rep.n_peak, rep.nv_final};
            } catch (const std::exception& e) {
                throw NumericError("disorder_sweep_n: W = " + std::to_string(W) + ", seed = " +
                                   std::to_string(seed) + ": " + e.what());
            }
        },
        threads);

    for (auto& row : rows) {
        std::vector<SweepMember> sorted = row.members;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const SweepMember& a, const SweepMember& b) { return a.seed < b.seed; });
        double sum = 0;
        row.n_min = sorted.front().n_final;
        row.n_max = sorted.front().n_final;
        for (const auto& m : sorted) {
            sum += m.n_final;
            row.n_min = std::min(row.n_min, m.n_final);
            row.n_max = std::max(row.n_max, m.n_final);
        }
        row.n_mean = sum / static_cast<double>(ns);
        double ss = 0;
        for (const auto& m : sorted) ss += (m.n_final - row.n_mean) * (m.n_final - row.n_mean);
        // Identical members can leave rounding residue in the mean.
        row.n_std = (ns > 1 && row.n_min != row.n_max) ? std::sqrt(ss / static_cast<double>(ns - 1)) : 0.0;
        if (row.n_min == row.n_max) row.n_mean = row.n_min;
    }
    return rows;
}

}  // namespace giant_lattice
