#pragma once

// Dense complex linear algebra shared by every other header: matrix and state
// types with their invariants, Kronecker products, state evolution and the
// spectral decomposition of unitary matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rmxlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kReconstructionTol = 1e-8;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Shapes or indices that do not fit together.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

/// Max-norm distance of U^dagger U from the identity.
inline double unitarity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    const auto n = m.rows();
    ComplexMatrix g = m.adjoint() * m;
    g -= ComplexMatrix::Identity(n, n);
    return g.cwiseAbs().maxCoeff();
}

/// Square matrix known to satisfy ||U^dagger U - I||_max <= kUnitarityTol.
class UnitaryOperator {
public:
    /// Validates unitarity; throws DimensionError or NumericalError.
    explicit UnitaryOperator(ComplexMatrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.rows() == 0)
            throw DimensionError("unitary operator must be a non-empty square matrix");
        if (!all_finite(m_)) throw NumericalError("unitary operator has non-finite entries");
        const double defect = unitarity_defect(m_);
        if (defect > kUnitarityTol)
            throw NumericalError("matrix fails unitarity check (defect " + std::to_string(defect) + ")");
    }

    /// Wraps a matrix that is unitary by construction (e.g. a product of
    /// unitary factors) without paying for the O(N^3) check.
    static UnitaryOperator trusted(ComplexMatrix m) { return UnitaryOperator(std::move(m), Trusted{}); }

    static UnitaryOperator identity(Eigen::Index n) { return trusted(ComplexMatrix::Identity(n, n)); }

    Eigen::Index dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }
    Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

    bool is_unitary(double tol = kUnitarityTol) const { return unitarity_defect(m_) <= tol; }

    UnitaryOperator adjoint() const { return trusted(m_.adjoint()); }

    friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
        if (a.dim() != b.dim()) throw DimensionError("operator product dimension mismatch");
        return trusted(a.m_ * b.m_);
    }

private:
    struct Trusted {};
    UnitaryOperator(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

    ComplexMatrix m_;
};

/// Unit-norm state vector in the computational basis. Basis index bit
/// (n - q) holds qubit q, so qubit 1 is the most significant bit.
class PureState {
public:
    explicit PureState(ComplexVector amps) : a_(std::move(amps)) {
        if (a_.size() == 0) throw DimensionError("state must have at least one amplitude");
        if (!a_.allFinite()) throw NumericalError("state has non-finite amplitudes");
        if (std::abs(a_.squaredNorm() - 1.0) > kNormTol)
            throw NumericalError("state is not normalized");
    }

    static PureState trusted(ComplexVector amps) { return PureState(std::move(amps), Trusted{}); }

    /// Normalizes any non-zero vector.
    static PureState normalized(ComplexVector amps) {
        const double nrm = amps.norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalError("cannot normalize zero vector");
        amps /= nrm;
        return trusted(std::move(amps));
    }

    static PureState basis(Eigen::Index n_dim, Eigen::Index k) {
        if (k < 0 || k >= n_dim) throw DimensionError("basis index out of range");
        ComplexVector v = ComplexVector::Zero(n_dim);
        v(k) = 1.0;
        return trusted(std::move(v));
    }

    Eigen::Index dim() const { return a_.size(); }
    const ComplexVector& amplitudes() const { return a_; }
    Complex operator[](Eigen::Index k) const { return a_(k); }

private:
    struct Trusted {};
    PureState(ComplexVector a, Trusted) : a_(std::move(a)) {}

    ComplexVector a_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline PureState apply(const UnitaryOperator& u, const PureState& psi) {
    if (u.dim() != psi.dim()) throw DimensionError("operator/state dimension mismatch");
    ComplexVector out = u.matrix() * psi.amplitudes();
    return PureState::trusted(std::move(out));
}

/// Number of qubits n with 2^n == n_dim; throws if n_dim is not a power of two.
inline int qubit_count(Eigen::Index n_dim) {
    if (n_dim < 1 || (n_dim & (n_dim - 1)) != 0)
        throw DimensionError("dimension " + std::to_string(n_dim) + " is not a power of two");
    int n = 0;
    while ((Eigen::Index{1} << n) < n_dim) ++n;
    return n;
}

/// Eigenphases in [0, 2pi) sorted ascending, with matching orthonormal
/// eigenvectors stored as columns.
struct SpectrumSample {
    std::vector<double> phases;
    ComplexMatrix eigenvectors;

    Eigen::Index dim() const { return eigenvectors.rows(); }
};

inline double canonical_phase(Complex z) {
    double th = std::arg(z);
    if (th < 0.0) th += kTwoPi;
    if (th >= kTwoPi) th -= kTwoPi;
    return th;
}

namespace detail {

inline double reconstruction_residual(const ComplexMatrix& u, const ComplexMatrix& v, const ComplexVector& lambda) {
    return (v * lambda.asDiagonal() * v.adjoint() - u).cwiseAbs().maxCoeff();
}

/// Eigenbasis of the Hermitian part of e^{-i beta} U, whose eigenvalues are
/// cos(theta - beta). Fast, but loses resolution when two phases straddle
/// beta symmetrically, so the caller must verify the reconstruction.
inline bool hermitian_eigenbasis(const ComplexMatrix& u, ComplexMatrix& v, ComplexVector& lambda) {
    const Complex w = std::polar(1.0, -0.5);
    const ComplexMatrix h = 0.5 * (w * u + std::conj(w) * u.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success) return false;
    v = es.eigenvectors();
    lambda = (v.adjoint() * u * v).diagonal();
    return reconstruction_residual(u, v, lambda) <= kReconstructionTol;
}

/// Complex Schur U = Z T Z^dagger. T is diagonal up to roundoff for a normal
/// matrix, so Z is an orthonormal eigenbasis even for degenerate phases.
inline bool schur_eigenbasis(const ComplexMatrix& u, ComplexMatrix& v, ComplexVector& lambda) {
    Eigen::ComplexSchur<ComplexMatrix> schur(u, true);
    if (schur.info() != Eigen::Success) return false;
    v = schur.matrixU();
    lambda = schur.matrixT().diagonal();
    return reconstruction_residual(u, v, lambda) <= kReconstructionTol;
}

}  // namespace detail

/// Eigenphases sorted in [0, 2pi) with orthonormal eigenvectors. Guarantees
/// ||U - V D V^dagger||_max <= kReconstructionTol or throws NumericalError.
inline SpectrumSample spectral_decompose(const UnitaryOperator& u) {
    const auto n = u.dim();
    ComplexMatrix z;
    ComplexVector lambda;
    if (!detail::hermitian_eigenbasis(u.matrix(), z, lambda) && !detail::schur_eigenbasis(u.matrix(), z, lambda))
        throw NumericalError("spectral decomposition failed to reach reconstruction tolerance");

    std::vector<double> raw(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) raw[static_cast<std::size_t>(k)] = canonical_phase(lambda(k));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return raw[std::size_t(a)] < raw[std::size_t(b)]; });

    SpectrumSample out;
    out.phases.reserve(static_cast<std::size_t>(n));
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.phases.push_back(raw[static_cast<std::size_t>(src)]);
        out.eigenvectors.col(k) = z.col(src);
    }
    return out;
}

}  // namespace rmxlab
