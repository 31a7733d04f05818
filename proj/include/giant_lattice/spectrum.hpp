// spectrum.hpp — single-excitation spectra across 1D parameter sweeps, with
// scattering-band / bound-state classification and eigenvector IPR.

#pragma once

#include "giant_lattice/errors.hpp"
#include "giant_lattice/model.hpp"
#include "giant_lattice/parallel.hpp"
#include "giant_lattice/propagate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace giant_lattice {

enum class SweepParameter {
    Detuning,  // Delta = omega0 - omegaE, varied through omegaE at fixed omega0
    Hopping,   // J itself, sign included
    Coupling,  // gm = gn = g
};

inline std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Detuning: return "detuning";
        case SweepParameter::Hopping: return "hopping";
        case SweepParameter::Coupling: return "coupling";
    }
    return "?";
}

inline std::optional<SweepParameter> parse_sweep_parameter(std::string_view s) {
    if (s == "detuning" || s == "Delta") return SweepParameter::Detuning;
    if (s == "hopping" || s == "J") return SweepParameter::Hopping;
    if (s == "coupling" || s == "g") return SweepParameter::Coupling;
    return std::nullopt;
}

// |E - omega0| > 2|J| + tol, i.e. outside the scattering band.
template <typename Scalar>
std::vector<bool> classify_bound_states(std::span<const Scalar> energies, Scalar omega0, Scalar J, Scalar tol) {
    const Scalar half_width = 2 * std::abs(J) + tol;
    std::vector<bool> flags(energies.size());
    for (std::size_t i = 0; i < energies.size(); ++i) flags[i] = std::abs(energies[i] - omega0) > half_width;
    return flags;
}

// Default classification tolerance: 1e-9 on a clean lattice, W otherwise
// (diagonal disorder moves no eigenvalue by more than W).
inline double default_band_tolerance(double W) { return W > 0 ? W : 1e-9; }

// Inverse participation ratio of the lattice part of an eigenvector (index 0
// is the atom and is dropped; the rest is renormalised). Returns nullopt for a
// state with no lattice weight.
template <typename Scalar>
std::optional<Scalar> eigenvector_ipr(std::span<const Scalar> v) {
    if (v.size() < 2) throw std::invalid_argument("eigenvector_ipr: need atom + at least one site");
    Scalar w2 = 0, w4 = 0;
    for (std::size_t a = 1; a < v.size(); ++a) {
        const Scalar p = v[a] * v[a];
        w2 += p;
        w4 += p * p;
    }
    if (!(w2 > std::numeric_limits<Scalar>::min() * 1e6)) return std::nullopt;
    return w4 / (w2 * w2);
}

template <typename Scalar = double>
struct SpectrumScan {
    SweepParameter parameter = SweepParameter::Detuning;
    std::vector<Scalar> values;
    Scalar omega0 = 2;
    std::vector<Scalar> hopping;                  // J used at each sweep point
    std::vector<Vector<Scalar>> eigenvalues;      // ascending, L + 1 each
    std::vector<std::vector<bool>> bound_flags;
    std::optional<std::vector<Vector<Scalar>>> ipr;  // NaN where the state has no lattice weight
    Scalar tol = 1e-9;

    std::size_t points() const { return values.size(); }
};

template <typename Scalar>
void classify_bound_states(SpectrumScan<Scalar>& scan, Scalar tol) {
    scan.tol = tol;
    scan.bound_flags.resize(scan.points());
    for (std::size_t p = 0; p < scan.points(); ++p) {
        const auto& e = scan.eigenvalues[p];
        scan.bound_flags[p] = classify_bound_states<Scalar>(
            std::span<const Scalar>(e.data(), static_cast<std::size_t>(e.size())), scan.omega0, scan.hopping[p], tol);
    }
}

struct ScanOptions {
    bool want_ipr = false;
    std::optional<double> tol;  // defaults to default_band_tolerance(dis.W)
    unsigned threads = 0;
};

// Model at one sweep point; the disorder realization is shared by all points.
inline ModelConfig sweep_point(const ModelConfig& cfg, SweepParameter parameter, double value, double& hopping) {
    ModelConfig c = cfg;
    hopping = cfg.J;
    switch (parameter) {
        case SweepParameter::Detuning: c.omegaE = cfg.omega0 - value; break;
        case SweepParameter::Hopping: hopping = value; break;
        case SweepParameter::Coupling:
            if (!(value >= 0)) throw std::invalid_argument("scan_spectrum: coupling g must be >= 0");
            c.gm = c.gn = value;
            break;
    }
    return c;
}

template <typename Scalar = double>
SpectrumScan<Scalar> scan_spectrum(const ModelConfig& cfg, const DisorderRealization& dis, SweepParameter parameter,
                                   std::span<const double> values, const ScanOptions& opts = {}) {
    if (values.empty()) throw std::invalid_argument("scan_spectrum: empty sweep grid");
    cfg.validate();
    if (dis.size() != cfg.L) throw std::invalid_argument("scan_spectrum: disorder length does not match L");

    SpectrumScan<Scalar> scan;
    scan.parameter = parameter;
    scan.values.assign(values.begin(), values.end());
    scan.omega0 = static_cast<Scalar>(cfg.omega0);
    scan.hopping.resize(values.size());
    scan.eigenvalues.resize(values.size());
    if (opts.want_ipr) scan.ipr = std::vector<Vector<Scalar>>(values.size());

    // Validate every point up front so errors do not depend on scheduling.
    std::vector<ModelConfig> point_cfg(values.size());
    for (std::size_t p = 0; p < values.size(); ++p) {
        double hop = 0;
        point_cfg[p] = sweep_point(cfg, parameter, values[p], hop);
        scan.hopping[p] = static_cast<Scalar>(hop);
    }

    parallel_for(
        values.size(),
        [&](std::size_t p) {
            const auto H = assemble_hamiltonian<Scalar>(point_cfg[p], dis, static_cast<double>(scan.hopping[p]));
            const auto mode = opts.want_ipr ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
            Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(H, mode);
            if (es.info() != Eigen::Success) {
                throw NumericError("scan_spectrum: eigensolver failed at " + std::string(to_string(parameter)) +
                                   " = " + std::to_string(values[p]));
            }
            scan.eigenvalues[p] = es.eigenvalues();
            if (opts.want_ipr) {
                const auto& V = es.eigenvectors();
                Vector<Scalar> ipr(V.cols());
                for (Eigen::Index k = 0; k < V.cols(); ++k) {
                    const auto r = eigenvector_ipr<Scalar>(
                        std::span<const Scalar>(V.col(k).data(), static_cast<std::size_t>(V.rows())));
                    ipr(k) = r.value_or(std::numeric_limits<Scalar>::quiet_NaN());
                }
                (*scan.ipr)[p] = std::move(ipr);
            }
        },
        opts.threads);

    classify_bound_states<Scalar>(scan, static_cast<Scalar>(opts.tol.value_or(default_band_tolerance(dis.W))));
    return scan;
}

// Per-eigenvalue spread of a sweep over an ensemble of disorder seeds.
struct SpectrumSpread {
    std::vector<double> values;
    std::vector<Vector<double>> mean;            // per point, per eigen index
    std::vector<Vector<double>> stddev;          // sample standard deviation
    std::vector<Vector<double>> bound_fraction;  // share of seeds flagging the index as bound
    std::size_t num_seeds = 0;
};

inline SpectrumSpread scan_spectrum_ensemble(const ModelConfig& cfg, double W, std::span<const std::uint64_t> seeds,
                                             SweepParameter parameter, std::span<const double> values,
                                             const ScanOptions& opts = {}) {
    if (seeds.empty()) throw std::invalid_argument("scan_spectrum_ensemble: empty seed list");
    ScanOptions inner = opts;
    inner.want_ipr = false;
    std::vector<SpectrumScan<double>> scans(seeds.size());
    parallel_for(
        seeds.size(),
        [&](std::size_t s) {
            ScanOptions serial = inner;
            serial.threads = 1;
            scans[s] = scan_spectrum<double>(cfg, sample_disorder(cfg.L, W, seeds[s]), parameter, values, serial);
        },
        opts.threads);

    SpectrumSpread out;
    out.values.assign(values.begin(), values.end());
    out.num_seeds = seeds.size();
    const auto dim = static_cast<Eigen::Index>(cfg.L + 1);
    const auto ns = static_cast<double>(seeds.size());
    for (std::size_t p = 0; p < values.size(); ++p) {
        Vector<double> sum = Vector<double>::Zero(dim), bound = Vector<double>::Zero(dim);
        for (const auto& sc : scans) {
            sum += sc.eigenvalues[p];
            for (Eigen::Index k = 0; k < dim; ++k) bound(k) += sc.bound_flags[p][static_cast<std::size_t>(k)] ? 1 : 0;
        }
        const Vector<double> mean = sum / ns;
        Vector<double> ss = Vector<double>::Zero(dim);
        for (const auto& sc : scans) ss += (sc.eigenvalues[p] - mean).array().square().matrix();
        out.mean.push_back(mean);
        out.stddev.push_back(seeds.size() > 1 ? (ss / (ns - 1)).cwiseSqrt().eval() : Vector<double>::Zero(dim).eval());
        out.bound_fraction.push_back(bound / ns);
    }
    return out;
}

}  // namespace giant_lattice
