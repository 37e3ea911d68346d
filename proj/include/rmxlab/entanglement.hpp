#pragma once

// Entanglement measures on pure qubit-register states. Qubit 1 is the most
// significant bit of the basis index throughout.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "rmxlab/core.hpp"

namespace rmxlab {

inline constexpr double kDensityTol = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
        if (rho_.rows() != rho_.cols()) throw DimensionError("density matrix must be square");
        if (std::abs(rho_.trace() - Complex(1.0)) > kDensityTol) throw NumericalError("density matrix trace is not 1");
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kDensityTol)
            throw NumericalError("density matrix is not Hermitian");
    }

    const ComplexMatrix& matrix() const { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }

    /// Tr rho^2 = sum |rho_ij|^2 for Hermitian rho.
    double purity() const { return rho_.cwiseAbs2().sum(); }

private:
    ComplexMatrix rho_;
};

struct EntanglementReport {
    double q = 0.0;
    double concurrence_msq = 0.0;
    double linear_entropy_half = 0.0;
};

/// Partial trace onto the qubits in `keep` (1-based, in the given order; the
/// first listed qubit becomes the most significant bit of the result).
inline DensityMatrix reduced_density(const PureState& psi, std::span<const int> keep) {
    const int n = qubit_count(psi.dim());
    if (keep.empty()) throw DimensionError("reduced_density needs at least one qubit to keep");
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (int q : keep) {
        if (q < 1 || q > n || seen[static_cast<std::size_t>(q)])
            throw DimensionError("invalid qubit index set for " + std::to_string(n) + " qubits");
        seen[static_cast<std::size_t>(q)] = true;
    }
    std::vector<int> rest;
    for (int q = 1; q <= n; ++q)
        if (!seen[static_cast<std::size_t>(q)]) rest.push_back(q);

    const auto k = static_cast<int>(keep.size());
    const Eigen::Index d_keep = Eigen::Index{1} << k;
    const Eigen::Index d_rest = Eigen::Index{1} << (n - k);

    auto gather = [n](Eigen::Index x, std::span<const int> qubits) {
        Eigen::Index out = 0;
        for (int q : qubits) out = (out << 1) | ((x >> (n - q)) & 1);
        return out;
    };

    ComplexMatrix coeffs = ComplexMatrix::Zero(d_keep, d_rest);
    const auto& a = psi.amplitudes();
    for (Eigen::Index x = 0; x < psi.dim(); ++x) coeffs(gather(x, keep), gather(x, rest)) = a(x);
    return DensityMatrix(coeffs * coeffs.adjoint());
}

inline DensityMatrix reduced_density(const PureState& psi, std::initializer_list<int> keep) {
    return reduced_density(psi, std::span<const int>(keep.begin(), keep.size()));
}

namespace detail {

/// (p0, p1, coherence) of the reduced 2 x 2 matrix of qubit j.
struct QubitMarginal {
    double p0 = 0.0;
    double p1 = 0.0;
    Complex coh = 0.0;
};

inline QubitMarginal qubit_marginal(const ComplexVector& a, int qubit, int n_qubits) {
    const Eigen::Index stride = Eigen::Index{1} << (n_qubits - qubit);
    const Eigen::Index n_dim = a.size();
    QubitMarginal m;
    for (Eigen::Index base = 0; base < n_dim; base += 2 * stride) {
        for (Eigen::Index off = 0; off < stride; ++off) {
            const Complex c0 = a(base + off);
            const Complex c1 = a(base + off + stride);
            m.p0 += std::norm(c0);
            m.p1 += std::norm(c1);
            m.coh += c0 * std::conj(c1);
        }
    }
    return m;
}

}  // namespace detail

/// Tr rho_j^2 for qubit j, without forming the reduced matrix.
inline double qubit_purity(const ComplexVector& a, int qubit, int n_qubits) {
    const auto m = detail::qubit_marginal(a, qubit, n_qubits);
    return m.p0 * m.p0 + m.p1 * m.p1 + 2.0 * std::norm(m.coh);
}

/// Meyer-Wallach Q = 2 - (2/n) sum_j Tr rho_j^2 on raw amplitudes (assumed
/// normalized, length 2^n with n >= 1). Evaluated as (4/n) sum_j det rho_j,
/// which is exactly zero for product basis states instead of rounding noise.
inline double meyer_wallach_q(const ComplexVector& a) {
    const int n = qubit_count(a.size());
    if (n < 1) throw DimensionError("Meyer-Wallach Q needs at least one qubit");
    double det_sum = 0.0;
    for (int j = 1; j <= n; ++j) {
        const auto m = detail::qubit_marginal(a, j, n);
        det_sum += m.p0 * m.p1 - std::norm(m.coh);
    }
    return 4.0 / n * det_sum;
}

inline double meyer_wallach_q(const PureState& psi) {
    if (qubit_count(psi.dim()) < 2) throw DimensionError("Meyer-Wallach Q requires n >= 2 qubits");
    return meyer_wallach_q(psi.amplitudes());
}

/// Mean Q of Haar-random states: (N - 2) / (N + 1).
constexpr double q_cue_mean(long long n_dim) {
    return static_cast<double>(n_dim - 2) / static_cast<double>(n_dim + 1);
}

/// Two-qubit mixed-state concurrence max(0, l1 - l2 - l3 - l4), where l_i are
/// the decreasing square roots of the eigenvalues of
/// sqrt(rho) (sy x sy) rho* (sy x sy) sqrt(rho).
inline double concurrence(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw DimensionError("concurrence is defined for two-qubit states");
    Eigen::Matrix4cd r = rho.matrix();
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Eigen::Matrix4cd flipped = yy * r.conjugate() * yy;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es_rho(r);
    Eigen::Vector4d ev = es_rho.eigenvalues().cwiseMax(0.0);
    const Eigen::Matrix4cd sqrt_rho =
        es_rho.eigenvectors() * ev.cwiseSqrt().cast<Complex>().asDiagonal() * es_rho.eigenvectors().adjoint();
    Eigen::Matrix4cd m = sqrt_rho * flipped * sqrt_rho;
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
    Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(lam.data(), lam.data() + 4, std::greater<>());
    return std::clamp(lam(0) - lam(1) - lam(2) - lam(3), 0.0, 1.0);
}

/// Concurrence between qubits 1 and 2.
inline double concurrence_msq(const PureState& psi) {
    if (qubit_count(psi.dim()) < 2) throw DimensionError("concurrence needs at least two qubits");
    return concurrence(reduced_density(psi, {1, 2}));
}

/// Normalized linear entropy d/(d-1) (1 - Tr rho_A^2) of the first ceil(n/2)
/// qubits, d = 2^ceil(n/2).
inline double linear_entropy_half(const PureState& psi) {
    const int n = qubit_count(psi.dim());
    if (n < 2) throw DimensionError("half-register linear entropy needs at least two qubits");
    const int k = (n + 1) / 2;
    std::vector<int> keep(static_cast<std::size_t>(k));
    for (int q = 1; q <= k; ++q) keep[static_cast<std::size_t>(q - 1)] = q;
    const double d = static_cast<double>(Eigen::Index{1} << k);
    const double purity = reduced_density(psi, keep).purity();
    return std::clamp(d / (d - 1.0) * (1.0 - purity), 0.0, 1.0);
}

inline EntanglementReport entanglement_report(const PureState& psi) {
    return {meyer_wallach_q(psi), concurrence_msq(psi), linear_entropy_half(psi)};
}

/// Mean Q over the eigenvectors of a spectral decomposition.
inline double eigenvector_mean_q(const SpectrumSample& spec) {
    double sum = 0.0;
    for (Eigen::Index l = 0; l < spec.eigenvectors.cols(); ++l)
        sum += meyer_wallach_q(ComplexVector(spec.eigenvectors.col(l)));
    return sum / static_cast<double>(spec.eigenvectors.cols());
}

/// 2 <Q_eig> - 1: lower bound on the long-time average of Q under u.
inline double q_asymptotic_bound(const UnitaryOperator& u) {
    qubit_count(u.dim());
    return 2.0 * eigenvector_mean_q(spectral_decompose(u)) - 1.0;
}

/// Per-state term of the amplitude-moment estimator:
/// 4 (sum_{m <= N/2 < n} |c_m|^2 |c_n|^2 - sum_q |c_q|^2 |c_{q+N/2}|^2).
inline double amplitude_moment_term(const ComplexVector& c) {
    const Eigen::Index n_dim = c.size();
    if (n_dim < 2 || n_dim % 2 != 0) throw DimensionError("amplitude-moment estimator needs an even dimension");
    const Eigen::Index half = n_dim / 2;
    const Eigen::VectorXd p = c.cwiseAbs2();
    const double upper = p.head(half).sum();
    const double lower = p.tail(half).sum();
    const double paired = p.head(half).dot(p.tail(half));
    return 4.0 * (upper * lower - paired);
}

/// Ensemble mean of the amplitude-moment estimator. Equals the ensemble mean
/// of Q only when the ensemble is invariant under amplitude phase shifts and
/// qubit permutations.
inline double q_from_amplitude_moments(std::span<const PureState> states) {
    if (states.empty()) throw std::invalid_argument("amplitude-moment estimator needs at least one state");
    const auto n_dim = states.front().dim();
    double sum = 0.0;
    for (const auto& s : states) {
        if (s.dim() != n_dim) throw DimensionError("all states must share a dimension");
        sum += amplitude_moment_term(s.amplitudes());
    }
    return sum / static_cast<double>(states.size());
}

}  // namespace rmxlab
