#pragma once

// Random-matrix statistics: unfolded number variance, eigenvector and
// matrix-element amplitude histograms, and Kolmogorov-Smirnov distances.

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmxlab/core.hpp"
#include "rmxlab/rng.hpp"

namespace rmxlab {

inline constexpr double kEulerGamma = 0.5772156649;

/// x_l = N theta_l / 2pi, so the unfolded spectrum has unit mean spacing.
inline std::vector<double> unfold(std::span<const double> phases, Eigen::Index n_dim) {
    std::vector<double> out;
    out.reserve(phases.size());
    const double scale = static_cast<double>(n_dim) / kTwoPi;
    for (double th : phases) out.push_back(th * scale);
    return out;
}

/// Large-N CUE number variance (ln(2 pi L) + 1 + gamma) / pi^2.
inline double cue_number_variance(double l) {
    if (!(l > 0.0)) throw std::invalid_argument("number variance needs L > 0");
    return (std::log(kTwoPi * l) + 1.0 + kEulerGamma) / (std::numbers::pi * std::numbers::pi);
}

/// Number of points of a sorted circular sequence on [0, period) falling in
/// the arc [start, start + len), with wrap-around.
inline std::size_t circular_count(std::span<const double> sorted, double period, double start, double len) {
    auto count_range = [&](double lo, double hi) {
        const auto a = std::lower_bound(sorted.begin(), sorted.end(), lo);
        const auto b = std::lower_bound(sorted.begin(), sorted.end(), hi);
        return static_cast<std::size_t>(b - a);
    };
    std::size_t full_turns = 0;
    while (len >= period) {
        ++full_turns;
        len -= period;
    }
    std::size_t total = full_turns * sorted.size();
    const double end = start + len;
    if (end <= period) {
        total += count_range(start, end);
    } else {
        total += count_range(start, period) + count_range(0.0, end - period);
    }
    return total;
}

/// One unfolded spectrum on the circle [0, period). Usually period = N, but a
/// Poisson control may carry a different number of points than its nominal
/// dimension.
struct UnfoldedSpectrum {
    std::vector<double> points;  // sorted, in [0, period)
    double period = 0.0;
};

inline UnfoldedSpectrum unfolded_spectrum(const SpectrumSample& s) {
    return {unfold(s.phases, s.dim()), static_cast<double>(s.dim())};
}

/// Poisson control: a Poisson(N)-distributed number of independent uniform
/// points on [0, N). The random count makes Sigma^2(L) = L exactly, unlike a
/// fixed count of N points whose variance is L (1 - L / N).
inline UnfoldedSpectrum poisson_spectrum(Eigen::Index n_dim, RngStream& rng) {
    if (n_dim < 1) throw DimensionError("Poisson control needs a positive dimension");
    const auto period = static_cast<double>(n_dim);
    UnfoldedSpectrum out{{}, period};
    const auto count = rng.poisson(period);
    out.points.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t k = 0; k < count; ++k) out.points.push_back(rng.uniform(0.0, period));
    std::sort(out.points.begin(), out.points.end());
    return out;
}

struct NumberVariancePoint {
    double l = 0.0;
    double sigma2 = 0.0;
};

/// Sigma^2(L) = <n(L)^2> - <n(L)>^2 pooled over 2N equally spaced window
/// starts per spectrum and over the ensemble.
inline std::vector<NumberVariancePoint> number_variance(std::span<const UnfoldedSpectrum> ensemble,
                                                        std::span<const double> l_grid) {
    if (ensemble.empty()) throw std::invalid_argument("number variance needs a non-empty ensemble");
    std::vector<NumberVariancePoint> out;
    out.reserve(l_grid.size());
    for (double l : l_grid) {
        if (!(l > 0.0)) throw std::invalid_argument("window length must be positive");
        double sum = 0.0;
        double sum_sq = 0.0;
        double windows = 0.0;
        for (const auto& spec : ensemble) {
            const auto n_starts = static_cast<std::size_t>(std::llround(2.0 * spec.period));
            const double step = spec.period / static_cast<double>(n_starts);
            for (std::size_t w = 0; w < n_starts; ++w) {
                const auto c = static_cast<double>(
                    circular_count(spec.points, spec.period, step * static_cast<double>(w), l));
                sum += c;
                sum_sq += c * c;
            }
            windows += static_cast<double>(n_starts);
        }
        const double mean = sum / windows;
        out.push_back({l, std::max(0.0, sum_sq / windows - mean * mean)});
    }
    return out;
}

inline std::vector<NumberVariancePoint> number_variance(std::span<const SpectrumSample> ensemble,
                                                        std::span<const double> l_grid) {
    std::vector<UnfoldedSpectrum> unfolded;
    unfolded.reserve(ensemble.size());
    for (const auto& s : ensemble) unfolded.push_back(unfolded_spectrum(s));
    return number_variance(std::span<const UnfoldedSpectrum>(unfolded), l_grid);
}

/// `count` log-spaced points in [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0 && hi >= lo) || count == 0) throw std::invalid_argument("invalid log grid");
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = lo;
        return g;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    return g;
}

inline std::vector<double> default_l_grid(Eigen::Index n_dim) {
    return log_grid(0.5, static_cast<double>(n_dim) / 4.0, 40);
}

struct HistogramSpec {
    double lo = 0.0;
    double hi = 10.0;
    std::size_t bins = 100;
};

/// Equal-width histogram; values past the upper edge are folded into the last
/// bin and also reported as `tail_mass`.
struct Histogram {
    std::vector<double> bin_edges;
    std::vector<double> counts;
    std::size_t n_samples = 0;
    double tail_count = 0.0;

    explicit Histogram(const HistogramSpec& spec = {}) : counts(spec.bins, 0.0) {
        if (spec.bins == 0 || !(spec.hi > spec.lo)) throw std::invalid_argument("invalid histogram spec");
        bin_edges.resize(spec.bins + 1);
        for (std::size_t i = 0; i <= spec.bins; ++i)
            bin_edges[i] = spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) / static_cast<double>(spec.bins);
    }

    std::size_t bins() const { return counts.size(); }
    double width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }

    void add(double v) {
        const double lo = bin_edges.front();
        const double hi = bin_edges.back();
        std::size_t idx;
        if (v >= hi) {
            idx = bins() - 1;
            tail_count += 1.0;
        } else if (v <= lo) {
            idx = 0;
        } else {
            idx = std::min(bins() - 1, static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins())));
        }
        counts[idx] += 1.0;
        ++n_samples;
    }

    /// Associative merge of histograms with identical binning.
    void merge(const Histogram& other) {
        if (other.bin_edges != bin_edges) throw std::invalid_argument("cannot merge histograms with different bins");
        for (std::size_t i = 0; i < bins(); ++i) counts[i] += other.counts[i];
        n_samples += other.n_samples;
        tail_count += other.tail_count;
    }

    std::vector<double> densities() const {
        std::vector<double> d(bins(), 0.0);
        if (n_samples == 0) return d;
        for (std::size_t i = 0; i < bins(); ++i) d[i] = counts[i] / (static_cast<double>(n_samples) * width(i));
        return d;
    }

    double tail_mass() const { return n_samples ? tail_count / static_cast<double>(n_samples) : 0.0; }
};

/// Bin-averaged e^{-y} density, with the last bin absorbing the tail to
/// match Histogram's folding.
inline std::vector<double> exponential_reference_density(const Histogram& h) {
    std::vector<double> d(h.bins());
    for (std::size_t i = 0; i < h.bins(); ++i) {
        const double a = std::exp(-std::max(0.0, h.bin_edges[i]));
        const double b = (i + 1 == h.bins()) ? 0.0 : std::exp(-std::max(0.0, h.bin_edges[i + 1]));
        d[i] = (a - b) / h.width(i);
    }
    return d;
}

/// Pooled y = N |c^l_k|^2 over all eigenvector components.
inline std::vector<double> eigenvector_amplitudes(const SpectrumSample& s) {
    const auto n = static_cast<double>(s.dim());
    std::vector<double> y;
    y.reserve(static_cast<std::size_t>(s.eigenvectors.size()));
    for (Eigen::Index l = 0; l < s.eigenvectors.cols(); ++l)
        for (Eigen::Index k = 0; k < s.eigenvectors.rows(); ++k) y.push_back(n * std::norm(s.eigenvectors(k, l)));
    return y;
}

/// Pooled x = N |U_ij|^2 over all entries.
inline std::vector<double> matrix_element_amplitudes(const UnitaryOperator& u) {
    const auto n = static_cast<double>(u.dim());
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(u.matrix().size()));
    for (Eigen::Index c = 0; c < u.dim(); ++c)
        for (Eigen::Index r = 0; r < u.dim(); ++r) x.push_back(n * std::norm(u(r, c)));
    return x;
}

inline Histogram eigenvector_amplitude_hist(std::span<const SpectrumSample> ensemble, const HistogramSpec& bins = {}) {
    if (ensemble.empty()) throw std::invalid_argument("eigenvector histogram needs a non-empty ensemble");
    Histogram h(bins);
    for (const auto& s : ensemble)
        for (double y : eigenvector_amplitudes(s)) h.add(y);
    return h;
}

inline Histogram matrix_element_hist(std::span<const UnitaryOperator> operators, const HistogramSpec& bins = {}) {
    if (operators.empty()) throw std::invalid_argument("matrix-element histogram needs at least one operator");
    Histogram h(bins);
    for (const auto& u : operators)
        for (double x : matrix_element_amplitudes(u)) h.add(x);
    return h;
}

/// Reference distribution for a KS comparison. `cdf_left` is the left limit
/// F(v-) and differs from `cdf` only at atoms of a discrete law.
struct ReferenceCdf {
    std::function<double(double)> cdf;
    std::function<double(double)> cdf_left;

    static ReferenceCdf exponential_unit_mean() {
        auto f = [](double v) { return v <= 0.0 ? 0.0 : 1.0 - std::exp(-v); };
        return {f, f};
    }

    static ReferenceCdf poisson_count(double mean) {
        auto f = [mean](double v) {
            if (v < 0.0) return 0.0;
            const auto kmax = static_cast<long>(std::floor(v));
            double term = std::exp(-mean);
            double acc = term;
            for (long k = 1; k <= kmax; ++k) {
                term *= mean / static_cast<double>(k);
                acc += term;
            }
            return std::min(acc, 1.0);
        };
        auto left = [f](double v) { return f(std::nextafter(v, -1e300)); };
        return {f, left};
    }

    /// Empirical CDF of a reference sample (two-sample comparison).
    static ReferenceCdf custom_table(std::vector<double> table) {
        if (table.empty()) throw std::invalid_argument("custom reference table is empty");
        std::sort(table.begin(), table.end());
        auto shared = std::make_shared<const std::vector<double>>(std::move(table));
        auto f = [shared](double v) {
            const auto& t = *shared;
            return static_cast<double>(std::upper_bound(t.begin(), t.end(), v) - t.begin()) /
                   static_cast<double>(t.size());
        };
        auto left = [shared](double v) {
            const auto& t = *shared;
            return static_cast<double>(std::lower_bound(t.begin(), t.end(), v) - t.begin()) /
                   static_cast<double>(t.size());
        };
        return {f, left};
    }
};

inline constexpr std::size_t kKsMinSamples = 100;

/// sup_v |F_emp(v) - F_ref(v)|, evaluated on both sides of every sample value.
inline double ks_distance(std::vector<double> samples, const ReferenceCdf& ref) {
    if (samples.size() < kKsMinSamples)
        throw std::invalid_argument("KS distance needs at least " + std::to_string(kKsMinSamples) + " samples");
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    double worst = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const double v = samples[i];
        const double below = static_cast<double>(i) / n;
        const double at = static_cast<double>(j) / n;
        worst = std::max({worst, std::abs(below - ref.cdf_left(v)), std::abs(at - ref.cdf(v))});
        i = j;
    }
    return worst;
}

}  // namespace rmxlab
