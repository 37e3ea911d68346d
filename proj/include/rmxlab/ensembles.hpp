#pragma once

// Hurwitz-parameterized CUE sampling and the restricted-interval
// interpolating ensembles built on the same angle bookkeeping.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "rmxlab/core.hpp"
#include "rmxlab/rng.hpp"

namespace rmxlab {

/// Angles of a two-level rotation acting on basis indices i < j (1-based).
struct ElementaryRotationParams {
    Eigen::Index i = 1;
    Eigen::Index j = 2;
    double phi = 0.0;
    double psi = 0.0;
    double chi = 0.0;
};

/// Interval-shrinking factor in [0, 1]; 1 recovers the full CUE intervals.
class InterpolationParam {
public:
    explicit InterpolationParam(double delta) : delta_(delta) {
        if (!(delta >= 0.0 && delta <= 1.0))
            throw std::invalid_argument("interpolation parameter must lie in [0, 1], got " + std::to_string(delta));
    }
    double value() const { return delta_; }

private:
    double delta_;
};

namespace detail {

inline void check_rotation_indices(const ElementaryRotationParams& p, Eigen::Index n_dim) {
    if (!(p.i >= 1 && p.i < p.j && p.j <= n_dim))
        throw DimensionError("rotation indices (" + std::to_string(p.i) + ", " + std::to_string(p.j) +
                             ") invalid for dimension " + std::to_string(n_dim));
}

/// M <- M * E^{(i,j)}; touches only columns i and j.
inline void right_multiply_rotation(ComplexMatrix& m, const ElementaryRotationParams& p) {
    const Eigen::Index ci = p.i - 1;
    const Eigen::Index cj = p.j - 1;
    const double c = std::cos(p.phi);
    const double s = std::sin(p.phi);
    const Complex e_ii = std::polar(c, p.psi);
    const Complex e_ij = std::polar(s, p.chi);
    const Complex e_ji = -std::polar(s, -p.chi);
    const Complex e_jj = std::polar(c, -p.psi);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const Complex a = m(r, ci);
        const Complex b = m(r, cj);
        m(r, ci) = a * e_ii + b * e_ji;
        m(r, cj) = a * e_ij + b * e_jj;
    }
}

}  // namespace detail

inline UnitaryOperator elementary_rotation(const ElementaryRotationParams& p, Eigen::Index n_dim) {
    detail::check_rotation_indices(p, n_dim);
    ComplexMatrix m = ComplexMatrix::Identity(n_dim, n_dim);
    detail::right_multiply_rotation(m, p);
    return UnitaryOperator::trusted(std::move(m));
}

/// One factor slot in the ordered Hurwitz product
/// e^{i alpha} E_1 E_2 ... E_{N-1}, with
/// E_s = E^{(N-s, N-s+1)}(r = s-1) ... E^{(N-1, N)}(r = 0).
/// Only the r = 0 factor of each composite rotation carries a chi angle.
struct HurwitzSlot {
    Eigen::Index i;
    Eigen::Index j;
    Eigen::Index r;
    Eigen::Index s;
    bool carries_chi;
};

/// Visits the N(N-1)/2 factors in multiplication order (left to right).
template <class Visitor>
void for_each_hurwitz_slot(Eigen::Index n_dim, Visitor&& visit) {
    for (Eigen::Index s = 1; s <= n_dim - 1; ++s)
        for (Eigen::Index r = s - 1; r >= 0; --r)
            visit(HurwitzSlot{n_dim - 1 - r, n_dim - r, r, s, r == 0});
}

namespace detail {

/// e^{i alpha} E_1 ... E_{N-1} with every angle interval shrunk by delta.
inline ComplexMatrix hurwitz_product(Eigen::Index n_dim, double delta, RngStream& rng) {
    const double alpha = rng.uniform(0.0, kTwoPi * delta);
    ComplexMatrix m = ComplexMatrix::Identity(n_dim, n_dim);
    for_each_hurwitz_slot(n_dim, [&](const HurwitzSlot& slot) {
        const double xi = rng.uniform();
        ElementaryRotationParams p;
        p.i = slot.i;
        p.j = slot.j;
        p.phi = std::asin(delta * std::pow(xi, 1.0 / (2.0 * static_cast<double>(slot.r) + 2.0)));
        p.psi = rng.uniform(0.0, kTwoPi * delta);
        p.chi = slot.carries_chi ? rng.uniform(0.0, kTwoPi * delta) : 0.0;
        right_multiply_rotation(m, p);
    });
    m *= std::polar(1.0, alpha);
    return m;
}

}  // namespace detail

/// Haar-distributed N x N unitary from the Hurwitz parameterization.
inline UnitaryOperator sample_cue(Eigen::Index n_dim, RngStream& rng) {
    if (n_dim < 2) throw DimensionError("CUE sampling requires n_dim >= 2");
    return UnitaryOperator::trusted(detail::hurwitz_product(n_dim, 1.0, rng));
}

/// Diagonal unitary with i.i.d. phases uniform on [0, range_upper).
inline UnitaryOperator sample_diagonal_phases(Eigen::Index n_dim, double range_upper, RngStream& rng) {
    if (n_dim < 1) throw DimensionError("n_dim must be positive");
    if (!(range_upper >= 0.0 && range_upper <= kTwoPi))
        throw std::invalid_argument("phase range must lie in [0, 2pi]");
    ComplexMatrix m = ComplexMatrix::Zero(n_dim, n_dim);
    for (Eigen::Index k = 0; k < n_dim; ++k) m(k, k) = std::polar(1.0, rng.uniform(0.0, range_upper));
    return UnitaryOperator::trusted(std::move(m));
}

/// Hurwitz product with all intervals shrunk by delta, right-multiplied by a
/// diagonal matrix of phases uniform on [0, 2pi). delta = 0 gives a purely
/// diagonal random-phase matrix; delta = 1 is Haar.
inline UnitaryOperator sample_interpolating(Eigen::Index n_dim, InterpolationParam delta, RngStream& rng) {
    if (n_dim < 2) throw DimensionError("interpolating ensemble requires n_dim >= 2");
    ComplexMatrix m = detail::hurwitz_product(n_dim, delta.value(), rng);
    for (Eigen::Index k = 0; k < n_dim; ++k) m.col(k) *= std::polar(1.0, rng.uniform(0.0, kTwoPi));
    return UnitaryOperator::trusted(std::move(m));
}

}  // namespace rmxlab
