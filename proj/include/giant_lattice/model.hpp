// model.hpp — atom + lattice configuration, on-site disorder sampling, and the
// single-excitation Hamiltonian.
//
// Basis ordering used throughout the library: index 0 is the excited atom,
// indices 1..L are the lattice sites. Site numbers in ModelConfig (m, n) are
// 1-based, so site j lives at basis index j.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace giant_lattice {

// All energies in units of the hopping J, all times in units of 1/J.
struct ModelConfig {
    std::size_t L = 200;
    double omega0 = 2.0;   // lattice mode frequency
    double omegaE = 2.0;   // atom transition frequency
    double J = 1.0;        // hopping
    double gm = 0.35;
    double gn = 0.35;
    std::size_t m = 99;    // 1-based coupling sites, m < n
    std::size_t n = 102;

    // Throws std::invalid_argument naming the offending field.
    void validate() const {
        if (L < 2) throw std::invalid_argument("L: lattice needs at least 2 sites");
        if (!(J > 0.0) || !std::isfinite(J)) throw std::invalid_argument("J: hopping must be positive");
        if (!(gm >= 0.0) || !std::isfinite(gm)) throw std::invalid_argument("gm: coupling must be >= 0");
        if (!(gn >= 0.0) || !std::isfinite(gn)) throw std::invalid_argument("gn: coupling must be >= 0");
        if (!std::isfinite(omega0)) throw std::invalid_argument("omega0: must be finite");
        if (!std::isfinite(omegaE)) throw std::invalid_argument("omegaE: must be finite");
        if (m < 1 || m > L) throw std::invalid_argument("m: coupling site out of range 1..L");
        if (n < 1 || n > L) throw std::invalid_argument("n: coupling site out of range 1..L");
        if (m >= n) throw std::invalid_argument("m, n: coupling sites must satisfy m < n");
    }

    double detuning() const { return omega0 - omegaE; }
};

// ---------------------------------------------------------------------------
// Random numbers
//
// Disorder offsets come from SplitMix64 (Steele, Lea, Flood 2014) used as a
// counter-based generator: draw j is mix(seed + (j + 1) * 0x9e3779b97f4a7c15).
// The top 53 bits map to a double in [0, 1). Both steps are fully specified
// integer arithmetic, so sequences are identical on every platform.

inline constexpr std::string_view kPrngAlgorithm = "splitmix64-counter/v1";

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64_mix(seed + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

inline constexpr double unit_interval(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

struct DisorderRealization {
    std::vector<double> deltas;
    double W = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const { return deltas.size(); }
};

// L i.i.d. offsets, uniform on [-W, W]. W = 0 gives exact zeros.
inline DisorderRealization sample_disorder(std::size_t L, double W, std::uint64_t seed) {
    if (L == 0) throw std::invalid_argument("sample_disorder: L must be positive");
    if (!(W >= 0.0) || !std::isfinite(W)) throw std::invalid_argument("sample_disorder: W must be >= 0");
    DisorderRealization out;
    out.W = W;
    out.seed = seed;
    out.deltas.resize(L, 0.0);
    if (W == 0.0) return out;
    for (std::size_t j = 0; j < L; ++j) {
        const double u = unit_interval(splitmix64_at(seed, j));
        out.deltas[j] = W * (2.0 * u - 1.0);
    }
    return out;
}

inline DisorderRealization clean_lattice(std::size_t L) { return sample_disorder(L, 0.0, 0); }

// ---------------------------------------------------------------------------
// Hamiltonian

template <typename Scalar>
using HamiltonianMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Assembles H without the J > 0 requirement (hopping sweeps pass any sign,
// including zero). Everything else is checked.
template <typename Scalar = double>
HamiltonianMatrix<Scalar> assemble_hamiltonian(const ModelConfig& cfg, const DisorderRealization& dis,
                                               double hopping) {
    if (dis.size() != cfg.L) {
        throw std::invalid_argument("build_hamiltonian: disorder has " + std::to_string(dis.size()) +
                                    " sites, config has L = " + std::to_string(cfg.L));
    }
    if (cfg.m < 1 || cfg.n > cfg.L || cfg.m >= cfg.n) {
        throw std::invalid_argument("build_hamiltonian: coupling sites must satisfy 1 <= m < n <= L");
    }
    const auto dim = static_cast<Eigen::Index>(cfg.L + 1);
    HamiltonianMatrix<Scalar> H = HamiltonianMatrix<Scalar>::Zero(dim, dim);

    H(0, 0) = static_cast<Scalar>(cfg.omegaE);
    for (Eigen::Index j = 1; j < dim; ++j) {
        H(j, j) = static_cast<Scalar>(cfg.omega0 + dis.deltas[static_cast<std::size_t>(j - 1)]);
    }
    // Open chain: no (1, L) bond.
    for (Eigen::Index j = 1; j + 1 < dim; ++j) {
        H(j, j + 1) = H(j + 1, j) = static_cast<Scalar>(-hopping);
    }
    const auto m = static_cast<Eigen::Index>(cfg.m);
    const auto n = static_cast<Eigen::Index>(cfg.n);
    H(0, m) = H(m, 0) = static_cast<Scalar>(cfg.gm);
    H(0, n) = H(n, 0) = static_cast<Scalar>(cfg.gn);
    return H;
}

template <typename Scalar = double>
HamiltonianMatrix<Scalar> build_hamiltonian(const ModelConfig& cfg, const DisorderRealization& dis) {
    cfg.validate();
    return assemble_hamiltonian<Scalar>(cfg, dis, cfg.J);
}

template <typename Derived>
typename Derived::RealScalar symmetry_defect(const Eigen::MatrixBase<Derived>& H) {
    return (H - H.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace giant_lattice
