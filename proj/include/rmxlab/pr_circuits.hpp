#pragma once

// Pseudo-random circuit operators: layers of independent single-qubit SU(2)
// rotations interleaved with a fixed nearest-neighbour sigma_z sigma_z
// coupling on an open chain.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "rmxlab/core.hpp"
#include "rmxlab/rng.hpp"

namespace rmxlab {

struct PrOperatorSpec {
    int n_qubits = 2;
    int m_iterations = 0;

    Eigen::Index n_dim() const { return Eigen::Index{1} << n_qubits; }
};

/// 3n(m+1) rotation angles plus one global phase.
constexpr std::uint64_t pr_parameter_count(const PrOperatorSpec& spec) {
    const auto n = static_cast<std::uint64_t>(spec.n_qubits);
    const auto m = static_cast<std::uint64_t>(spec.m_iterations);
    return 3 * n * (m + 1) + 1;
}

using Su2 = Eigen::Matrix2cd;

/// Haar rotation from the r = 0 Hurwitz block: phi = asin(sqrt(xi)),
/// psi and chi uniform on [0, 2pi).
inline Su2 sample_su2(RngStream& rng) {
    const double phi = std::asin(std::sqrt(rng.uniform()));
    const double psi = rng.uniform(0.0, kTwoPi);
    const double chi = rng.uniform(0.0, kTwoPi);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Su2 v;
    v << std::polar(c, psi), std::polar(s, chi), -std::polar(s, -chi), std::polar(c, -psi);
    return v;
}

/// Sum over bonds j = 1..n-1 of s_j s_{j+1}, s = +1 for |0>, -1 for |1>.
inline int zz_bond_sum(std::uint64_t basis_index, int n_qubits) {
    int total = 0;
    for (int j = 1; j < n_qubits; ++j) {
        const int bj = static_cast<int>((basis_index >> (n_qubits - j)) & 1u);
        const int bk = static_cast<int>((basis_index >> (n_qubits - j - 1)) & 1u);
        total += (bj == bk) ? 1 : -1;
    }
    return total;
}

/// Diagonal of exp(i pi/4 sum_j sigma_z^j sigma_z^{j+1}).
inline ComplexVector nn_coupling_phases(int n_qubits) {
    if (n_qubits < 2) throw DimensionError("nearest-neighbour coupling needs at least two qubits");
    const Eigen::Index n_dim = Eigen::Index{1} << n_qubits;
    ComplexVector d(n_dim);
    for (Eigen::Index b = 0; b < n_dim; ++b)
        d(b) = std::polar(1.0, std::numbers::pi / 4.0 * zz_bond_sum(static_cast<std::uint64_t>(b), n_qubits));
    return d;
}

inline UnitaryOperator nn_coupling(int n_qubits) {
    return UnitaryOperator::trusted(nn_coupling_phases(n_qubits).asDiagonal().toDenseMatrix());
}

/// M <- V_q M, where V_q acts on qubit q (1 = most significant bit).
inline void left_apply_qubit_gate(ComplexMatrix& m, const Su2& v, int qubit, int n_qubits) {
    const Eigen::Index stride = Eigen::Index{1} << (n_qubits - qubit);
    const Eigen::Index n_dim = m.rows();
    for (Eigen::Index base = 0; base < n_dim; base += 2 * stride) {
        for (Eigen::Index off = 0; off < stride; ++off) {
            const Eigen::Index r0 = base + off;
            const Eigen::Index r1 = r0 + stride;
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                const Complex a = m(r0, c);
                const Complex b = m(r1, c);
                m(r0, c) = v(0, 0) * a + v(0, 1) * b;
                m(r1, c) = v(1, 0) * a + v(1, 1) * b;
            }
        }
    }
}

/// U = e^{i alpha} R_{m+1} U_nnc R_m ... U_nnc R_1, each R_k a tensor product
/// of fresh single-qubit rotations. R_1 acts first on the state.
inline UnitaryOperator sample_pr_operator(const PrOperatorSpec& spec, RngStream& rng) {
    if (spec.n_qubits < 2) throw DimensionError("PR operators need at least two qubits");
    if (spec.m_iterations < 0) throw std::invalid_argument("PR iteration count must be non-negative");

    const int n = spec.n_qubits;
    const Eigen::Index n_dim = spec.n_dim();
    const double alpha = rng.uniform(0.0, kTwoPi);
    const ComplexVector coupling = nn_coupling_phases(n);

    ComplexMatrix m = ComplexMatrix::Identity(n_dim, n_dim);
    for (int layer = 0; layer <= spec.m_iterations; ++layer) {
        if (layer > 0) m = coupling.asDiagonal() * m;
        for (int q = 1; q <= n; ++q) left_apply_qubit_gate(m, sample_su2(rng), q, n);
    }
    m *= std::polar(1.0, alpha);
    return UnitaryOperator::trusted(std::move(m));
}

}  // namespace rmxlab
