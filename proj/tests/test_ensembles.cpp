#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rmxlab/ensembles.hpp"
#include "rmxlab/entanglement.hpp"
#include "rmxlab/spectral_stats.hpp"
#include "test_util.hpp"

using namespace rmxlab;

TEST(ElementaryRotation, ZeroAnglesGiveIdentity) {
    EXPECT_EQ(elementary_rotation({2, 5, 0.0, 0.0, 0.0}, 6).matrix(), ComplexMatrix::Identity(6, 6));
}

TEST(ElementaryRotation, PureRotationTwoByTwo) {
    const auto e = elementary_rotation({1, 2, std::numbers::pi / 2, 0.0, 0.0}, 2);
    EXPECT_NEAR(std::abs(e(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(e(0, 1) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(e(1, 0) + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(e(1, 1)), 0.0, 1e-15);
}

TEST(ElementaryRotation, EntriesFollowTwoLevelForm) {
    const double phi = 0.7, psi = 1.9, chi = 4.1;
    const auto e = elementary_rotation({3, 6, phi, psi, chi}, 8);
    EXPECT_NEAR(std::abs(e(2, 2) - std::polar(std::cos(phi), psi)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(e(2, 5) - std::polar(std::sin(phi), chi)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(e(5, 2) + std::polar(std::sin(phi), -chi)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(e(5, 5) - std::polar(std::cos(phi), -psi)), 0.0, 1e-15);
}

TEST(ElementaryRotation, RandomAnglesStructure) {
    auto rng = derive_stream(1, {});
    for (int trial = 0; trial < 20; ++trial) {
        ElementaryRotationParams p{2, 7, rng.uniform(0, std::numbers::pi / 2), rng.uniform(0, kTwoPi),
                                   rng.uniform(0, kTwoPi)};
        const auto e = elementary_rotation(p, 8);
        EXPECT_TRUE(UnitaryOperator(e.matrix()).is_unitary());
        int exact = 0;
        for (int k = 0; k < 8; ++k)
            for (int l = 0; l < 8; ++l) {
                const bool touched = (k == 1 || k == 6) && (l == 1 || l == 6);
                if (!touched && e(k, l) == Complex(k == l ? 1.0 : 0.0)) ++exact;
            }
        EXPECT_EQ(exact, 60);
    }
}

TEST(ElementaryRotation, RejectsBadIndices) {
    EXPECT_THROW(elementary_rotation({2, 2, 0, 0, 0}, 4), DimensionError);
    EXPECT_THROW(elementary_rotation({3, 2, 0, 0, 0}, 4), DimensionError);
    EXPECT_THROW(elementary_rotation({1, 5, 0, 0, 0}, 4), DimensionError);
    EXPECT_THROW(elementary_rotation({0, 2, 0, 0, 0}, 4), DimensionError);
}

TEST(HurwitzSlots, OrderMatchesCompositeRotations) {
    std::vector<HurwitzSlot> slots;
    for_each_hurwitz_slot(4, [&](const HurwitzSlot& s) { slots.push_back(s); });
    // E_1 = E(3,4)[r0]; E_2 = E(2,3)[r1] E(3,4)[r0]; E_3 = E(1,2)[r2] E(2,3)[r1] E(3,4)[r0]
    const std::vector<std::array<Eigen::Index, 4>> expect = {
        {3, 4, 0, 1}, {2, 3, 1, 2}, {3, 4, 0, 2}, {1, 2, 2, 3}, {2, 3, 1, 3}, {3, 4, 0, 3}};
    ASSERT_EQ(slots.size(), expect.size());
    for (std::size_t k = 0; k < slots.size(); ++k) {
        EXPECT_EQ(slots[k].i, expect[k][0]);
        EXPECT_EQ(slots[k].j, expect[k][1]);
        EXPECT_EQ(slots[k].r, expect[k][2]);
        EXPECT_EQ(slots[k].s, expect[k][3]);
        EXPECT_EQ(slots[k].carries_chi, slots[k].r == 0);
    }
}

TEST(HurwitzSlots, CountIsPairCount) {
    for (Eigen::Index n : {2, 5, 16}) {
        Eigen::Index count = 0;
        int chi_count = 0;
        for_each_hurwitz_slot(n, [&](const HurwitzSlot& s) {
            ++count;
            chi_count += s.carries_chi;
        });
        EXPECT_EQ(count, n * (n - 1) / 2);
        EXPECT_EQ(chi_count, n - 1);
    }
}

TEST(SampleCue, TwoByTwoIsPhaseTimesSingleRotation) {
    auto rng = derive_stream(2, {});
    auto replay = derive_stream(2, {});
    const auto u = sample_cue(2, rng);
    const double alpha = replay.uniform(0, kTwoPi);
    const double phi = std::asin(std::pow(replay.uniform(), 0.5));
    const double psi = replay.uniform(0, kTwoPi);
    const double chi = replay.uniform(0, kTwoPi);
    Eigen::Matrix2cd expect;
    expect << std::polar(std::cos(phi), psi), std::polar(std::sin(phi), chi), -std::polar(std::sin(phi), -chi),
        std::polar(std::cos(phi), -psi);
    expect *= std::polar(1.0, alpha);
    EXPECT_LE((u.matrix() - ComplexMatrix(expect)).cwiseAbs().maxCoeff(), 1e-15);
    // SU(2) times a phase: |det| = 1 and |u00| = |u11|.
    EXPECT_NEAR(std::abs(u.matrix().determinant()), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(u(0, 0)), std::abs(u(1, 1)), 1e-15);
}

TEST(SampleCue, AlwaysUnitary) {
    auto rng = derive_stream(3, {});
    for (Eigen::Index n : {2, 3, 7, 16, 64}) EXPECT_TRUE(sample_cue(n, rng).is_unitary()) << n;
}

TEST(SampleCue, FirstEntryMeanMatchesSphereOracle) {
    constexpr int kSamples = 10000;
    auto rng = derive_stream(4, {});
    std::mt19937_64 gen(4);
    std::vector<double> hurwitz, sphere;
    for (int s = 0; s < kSamples; ++s) {
        hurwitz.push_back(std::norm(sample_cue(16, rng)(0, 0)));
        sphere.push_back(std::norm(oracle::sphere_state(16, gen)(0)));
    }
    const auto a = oracle::mean_se(hurwitz);
    const auto b = oracle::mean_se(sphere);
    EXPECT_NEAR(a.mean, 1.0 / 16, 3 * a.se);
    EXPECT_NEAR(a.mean, b.mean, 3 * std::hypot(a.se, b.se));
}

TEST(SampleCue, TraceMomentsAreHaar) {
    // For Haar unitaries E|Tr U|^2 = 1 and E|Tr U|^4 = 2 (N >= 2).
    constexpr int kSamples = 8000;
    auto rng = derive_stream(5, {});
    std::vector<double> t2, t4;
    for (int s = 0; s < kSamples; ++s) {
        const double a = std::norm(sample_cue(6, rng).matrix().trace());
        t2.push_back(a);
        t4.push_back(a * a);
    }
    const auto m2 = oracle::mean_se(t2);
    const auto m4 = oracle::mean_se(t4);
    EXPECT_NEAR(m2.mean, 1.0, 3 * m2.se);
    EXPECT_NEAR(m4.mean, 2.0, 3 * m4.se);
}

TEST(SampleCue, EntryFourthMomentUniformAcrossMatrix) {
    // E|U_ij|^4 = 2 / (N (N + 1)) for every entry.
    constexpr int kSamples = 6000;
    constexpr int kN = 4;
    auto rng = derive_stream(6, {});
    std::vector<std::vector<double>> m4(kN * kN);
    for (int s = 0; s < kSamples; ++s) {
        const auto u = sample_cue(kN, rng);
        for (int i = 0; i < kN; ++i)
            for (int j = 0; j < kN; ++j) m4[std::size_t(i * kN + j)].push_back(std::pow(std::norm(u(i, j)), 2));
    }
    for (const auto& v : m4) {
        const auto ms = oracle::mean_se(v);
        EXPECT_NEAR(ms.mean, 2.0 / (kN * (kN + 1)), 4 * ms.se);
    }
}

TEST(SampleCue, EigenphaseDensityIsUniform) {
    constexpr int kN = 32;
    constexpr int kSamples = 200;
    auto rng = derive_stream(7, {});
    std::vector<double> counts;
    const double arc = kTwoPi * 3.0 / kN;  // L = 3
    for (int s = 0; s < kSamples; ++s) {
        const auto spec = spectral_decompose(sample_cue(kN, rng));
        const double start = rng.uniform(0, kTwoPi);
        counts.push_back(static_cast<double>(circular_count(spec.phases, kTwoPi, start, arc)));
    }
    const auto ms = oracle::mean_se(counts);
    EXPECT_NEAR(ms.mean, 3.0, 3 * ms.se);
}

namespace {

std::vector<double> nn_spacings(const SpectrumSample& s) {
    auto x = unfold(s.phases, s.dim());
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) out.push_back(x[k + 1] - x[k]);
    out.push_back(x.front() + static_cast<double>(s.dim()) - x.back());
    return out;
}

}  // namespace

TEST(SampleCue, SpacingsRejectPoissonAndMatchLargerN) {
    auto rng = derive_stream(8, {});
    std::vector<double> small, large;
    for (int s = 0; s < 60; ++s) {
        auto sp = nn_spacings(spectral_decompose(sample_cue(64, rng)));
        small.insert(small.end(), sp.begin(), sp.end());
    }
    for (int s = 0; s < 15; ++s) {
        auto sp = nn_spacings(spectral_decompose(sample_cue(256, rng)));
        large.insert(large.end(), sp.begin(), sp.end());
    }
    EXPECT_GT(ks_distance(small, ReferenceCdf::exponential_unit_mean()), 0.2);
    // Two-sample KS, 3840 vs 3840 draws: 99.9% critical value is about 0.044.
    EXPECT_LT(ks_distance(small, ReferenceCdf::custom_table(large)), 0.044);
}

TEST(SampleInterpolating, DeltaZeroIsExactlyDiagonal) {
    auto rng = derive_stream(9, {});
    for (Eigen::Index n : {2, 8, 33}) {
        const auto u = sample_interpolating(n, InterpolationParam(0.0), rng);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) EXPECT_NEAR(std::abs(u(i, j)), 1.0, 1e-15);
                else EXPECT_EQ(u(i, j), Complex(0.0));
            }
    }
}

TEST(SampleInterpolating, DeltaZeroNeverEntangles) {
    auto rng = derive_stream(10, {});
    const auto u = sample_interpolating(32, InterpolationParam(0.0), rng);
    ComplexMatrix p = u.matrix();
    for (int t = 1; t <= 8; ++t) {
        for (Eigen::Index k = 0; k < 32; ++k) EXPECT_EQ(meyer_wallach_q(ComplexVector(p.col(k))), 0.0);
        p = u.matrix() * p;
    }
}

TEST(SampleInterpolating, UnitaryAcrossDelta) {
    auto rng = derive_stream(11, {});
    for (double d : {0.0, 0.1, 0.5, 0.9, 0.98, 1.0}) EXPECT_TRUE(sample_interpolating(48, InterpolationParam(d), rng).is_unitary());
}

TEST(SampleInterpolating, DeltaOneMatchesCueElementLaw) {
    auto a = derive_stream(12, {1});
    auto b = derive_stream(12, {2});
    std::vector<double> interp, cue;
    for (int s = 0; s < 100; ++s) {
        auto x = matrix_element_amplitudes(sample_interpolating(32, InterpolationParam(1.0), a));
        auto y = matrix_element_amplitudes(sample_cue(32, b));
        interp.insert(interp.end(), x.begin(), x.end());
        cue.insert(cue.end(), y.begin(), y.end());
    }
    EXPECT_LE(ks_distance(interp, ReferenceCdf::custom_table(cue)), 0.01);
}

TEST(InterpolationParam, RejectsOutOfRange) {
    EXPECT_THROW(InterpolationParam(-0.01), std::invalid_argument);
    EXPECT_THROW(InterpolationParam(1.01), std::invalid_argument);
    EXPECT_THROW(InterpolationParam(std::nan("")), std::invalid_argument);
}

TEST(SampleDiagonalPhases, ZeroRangeIsIdentity) {
    auto rng = derive_stream(13, {});
    EXPECT_EQ(sample_diagonal_phases(5, 0.0, rng).matrix(), ComplexMatrix::Identity(5, 5));
}

TEST(SampleDiagonalPhases, UniformPhaseMean) {
    auto rng = derive_stream(14, {});
    std::vector<double> phases;
    for (int s = 0; s < 100000; ++s) {
        const auto u = sample_diagonal_phases(4, kTwoPi, rng);
        for (int k = 0; k < 4; ++k) phases.push_back(canonical_phase(u(k, k)));
    }
    const auto ms = oracle::mean_se(phases);
    EXPECT_NEAR(ms.mean, std::numbers::pi, 3 * ms.se);
}

TEST(SampleDiagonalPhases, ActsByPhaseOnBasisStates) {
    auto rng = derive_stream(15, {});
    const auto u = sample_diagonal_phases(8, kTwoPi, rng);
    for (Eigen::Index k = 0; k < 8; ++k) {
        const auto out = apply(u, PureState::basis(8, k));
        EXPECT_NEAR(std::abs(out[k]), 1.0, 1e-15);
        EXPECT_EQ(meyer_wallach_q(out), 0.0);
    }
}
