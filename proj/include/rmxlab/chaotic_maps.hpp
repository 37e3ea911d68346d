#pragma once

// Quantized chaotic maps on an N-dimensional Hilbert space: the
// Balazs-Voros baker's map with half-integer (Saraceno) phases, the sawtooth
// map and the kicked Harper map.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "rmxlab/core.hpp"

namespace rmxlab {

enum class MapKind { baker, sawtooth, harper };

struct MapSpec {
    MapKind kind = MapKind::baker;
    Eigen::Index n_dim = 2;
    double kick = 0.0;  // k for sawtooth, gamma for harper; unused for baker
};

/// (F_M)_{jk} = M^{-1/2} exp(-2 pi i (j + 1/2)(k + 1/2) / M).
inline ComplexMatrix half_integer_dft(Eigen::Index m) {
    ComplexMatrix f(m, m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index k = 0; k < m; ++k) {
            const double arg = -kTwoPi * (static_cast<double>(j) + 0.5) * (static_cast<double>(k) + 0.5) /
                               static_cast<double>(m);
            f(j, k) = std::polar(scale, arg);
        }
    return f;
}

/// (F_N)_{m j} = N^{-1/2} exp(-2 pi i m j / N), rows labelled by momentum
/// m = -N/2 ... N/2 - 1 (row index m + N/2), columns by position j.
inline ComplexMatrix centered_dft(Eigen::Index n_dim) {
    ComplexMatrix f(n_dim, n_dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_dim));
    const Eigen::Index half = n_dim / 2;
    for (Eigen::Index row = 0; row < n_dim; ++row) {
        const auto mom = static_cast<double>(row - half);
        for (Eigen::Index j = 0; j < n_dim; ++j)
            f(row, j) = std::polar(scale, -kTwoPi * mom * static_cast<double>(j) / static_cast<double>(n_dim));
    }
    return f;
}

inline UnitaryOperator baker_map(Eigen::Index n_dim) {
    if (n_dim < 2 || n_dim % 2 != 0)
        throw DimensionError("baker's map needs an even dimension, got " + std::to_string(n_dim));
    const Eigen::Index half = n_dim / 2;
    const ComplexMatrix fh = half_integer_dft(half);
    ComplexMatrix block = ComplexMatrix::Zero(n_dim, n_dim);
    block.topLeftCorner(half, half) = fh;
    block.bottomRightCorner(half, half) = fh;
    return UnitaryOperator::trusted(half_integer_dft(n_dim).adjoint() * block);
}

namespace detail {

/// F^{-1} diag(momentum_phase) F diag(position_phase).
inline UnitaryOperator split_step(Eigen::Index n_dim, const ComplexVector& momentum_phase,
                                  const ComplexVector& position_phase) {
    const ComplexMatrix f = centered_dft(n_dim);
    ComplexMatrix u = f.adjoint() * momentum_phase.asDiagonal() * f * position_phase.asDiagonal();
    return UnitaryOperator::trusted(std::move(u));
}

}  // namespace detail

/// Kick exp(i k (theta_j - pi)^2 / 2) with theta_j = 2 pi j / N, followed by
/// free evolution exp(-i T m^2 / 2), T = 2 pi / N.
inline UnitaryOperator sawtooth_map(Eigen::Index n_dim, double k) {
    if (n_dim < 2) throw DimensionError("sawtooth map needs n_dim >= 2");
    const double nd = static_cast<double>(n_dim);
    const double period = kTwoPi / nd;
    ComplexVector kick(n_dim), free(n_dim);
    for (Eigen::Index j = 0; j < n_dim; ++j) {
        const double theta = kTwoPi * static_cast<double>(j) / nd - std::numbers::pi;
        kick(j) = std::polar(1.0, k * theta * theta / 2.0);
        const auto mom = static_cast<double>(j - n_dim / 2);
        free(j) = std::polar(1.0, -period * mom * mom / 2.0);
    }
    return detail::split_step(n_dim, free, kick);
}

/// Kicked Harper map with equal strength gamma in position and momentum.
inline UnitaryOperator harper_map(Eigen::Index n_dim, double gamma) {
    if (n_dim < 2) throw DimensionError("Harper map needs n_dim >= 2");
    const double nd = static_cast<double>(n_dim);
    ComplexVector dq(n_dim), dp(n_dim);
    for (Eigen::Index j = 0; j < n_dim; ++j) {
        dq(j) = std::polar(1.0, -gamma * std::cos(kTwoPi * static_cast<double>(j) / nd));
        const auto mom = static_cast<double>(j - n_dim / 2);
        dp(j) = std::polar(1.0, -gamma * std::cos(kTwoPi * mom / nd));
    }
    return detail::split_step(n_dim, dp, dq);
}

inline UnitaryOperator make_map(const MapSpec& spec) {
    switch (spec.kind) {
        case MapKind::baker: return baker_map(spec.n_dim);
        case MapKind::sawtooth: return sawtooth_map(spec.n_dim, spec.kick);
        case MapKind::harper: return harper_map(spec.n_dim, spec.kick);
    }
    throw std::invalid_argument("unknown map kind");
}

}  // namespace rmxlab
