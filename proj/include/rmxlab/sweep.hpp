#pragma once

// Monte Carlo sweeps over operator ensembles: entanglement generation Q(t)
// from computational basis states and random-matrix statistics, serialized
// as CSV. Work is split per operator realization; every realization owns a
// stream derived from (seed, ensemble key, realization) and results are
// reduced in realization order, so output does not depend on worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "rmxlab/core.hpp"
#include "rmxlab/ensemble_spec.hpp"
#include "rmxlab/entanglement.hpp"
#include "rmxlab/parallel.hpp"
#include "rmxlab/spectral_stats.hpp"

namespace rmxlab {

struct StatsFlags {
    bool q_sweep = true;
    bool number_variance = false;
    bool eigvec_hist = false;
    bool matelem_hist = false;
    bool asy_bound = false;
};

struct SweepConfig {
    std::vector<EnsembleSpec> ensembles;
    int t_max = 10;
    int n_operators = 20;
    std::vector<Eigen::Index> initial_states;  // empty: all basis states
    std::uint64_t seed = 1;
    std::string output_prefix = "./";
    StatsFlags stats;
    HistogramSpec hist;
    unsigned workers = 0;  // 0: default_worker_count()

    void validate() const {
        if (ensembles.empty()) throw ConfigError("no ensembles configured");
        if (t_max < 1) throw ConfigError("t_max must be >= 1");
        if (n_operators < 1) throw ConfigError("n_operators must be >= 1");
        if (hist.bins == 0 || !(hist.hi > hist.lo)) throw ConfigError("invalid histogram binning");
        for (const auto& e : ensembles) {
            e.validate();
            for (auto k : initial_states)
                if (k < 0 || k >= e.n_dim())
                    throw ConfigError("initial state " + std::to_string(k) + " out of range for N=" +
                                      std::to_string(e.n_dim()));
        }
    }

    int realizations(const EnsembleSpec& e) const { return e.deterministic() ? 1 : n_operators; }

    std::vector<Eigen::Index> states_for(const EnsembleSpec& e) const {
        if (!initial_states.empty()) return initial_states;
        std::vector<Eigen::Index> all(static_cast<std::size_t>(e.n_dim()));
        for (Eigen::Index k = 0; k < e.n_dim(); ++k) all[static_cast<std::size_t>(k)] = k;
        return all;
    }
};

struct SweepRow {
    std::string ensemble;
    std::string param_name;
    double param_value = 0.0;
    int n_qubits = 0;
    Eigen::Index n_dim = 0;
    int t = 0;
    int n_ops = 0;
    int n_states = 0;
    double mean_q = 0.0;
    double std_q = 0.0;
    double abs_diff_cue = 0.0;
};

inline RngStream operator_stream(const SweepConfig& cfg, const EnsembleSpec& e, int realization) {
    return derive_stream(cfg.seed, e.stream_path(static_cast<std::uint64_t>(realization)));
}

/// Q of every configured basis state after t = 1..t_max applications of one
/// operator; q[(t - 1) * n_states + s].
struct QTrajectory {
    int n_states = 0;
    int t_max = 0;
    std::vector<double> q;

    double at(int t, int s) const { return q[static_cast<std::size_t>((t - 1) * n_states + s)]; }
};

inline QTrajectory q_trajectory(const UnitaryOperator& u, std::span<const Eigen::Index> states, int t_max) {
    const auto n_states = static_cast<Eigen::Index>(states.size());
    ComplexMatrix cols(u.dim(), n_states);
    for (Eigen::Index s = 0; s < n_states; ++s) cols.col(s) = u.matrix().col(states[static_cast<std::size_t>(s)]);

    QTrajectory traj{static_cast<int>(n_states), t_max, {}};
    traj.q.reserve(static_cast<std::size_t>(n_states * t_max));
    ComplexMatrix next(u.dim(), n_states);
    for (int t = 1; t <= t_max; ++t) {
        for (Eigen::Index s = 0; s < n_states; ++s) traj.q.push_back(meyer_wallach_q(ComplexVector(cols.col(s))));
        if (t < t_max) {
            next.noalias() = u.matrix() * cols;
            cols.swap(next);
        }
    }
    return traj;
}

/// Per-realization results for one ensemble grid point.
struct EnsembleRun {
    EnsembleSpec spec;
    std::vector<QTrajectory> trajectories;
    std::vector<double> asy_bounds;
};

inline EnsembleRun run_ensemble(const SweepConfig& cfg, const EnsembleSpec& e, bool with_q, bool with_bound) {
    const int n_real = cfg.realizations(e);
    const auto states = cfg.states_for(e);
    EnsembleRun run{e, std::vector<QTrajectory>(with_q ? n_real : 0), std::vector<double>(with_bound ? n_real : 0)};
    parallel_for(static_cast<std::size_t>(n_real), cfg.workers, [&](std::size_t r) {
        auto rng = operator_stream(cfg, e, static_cast<int>(r));
        const auto u = sample_operator(e, rng);
        if (with_q) run.trajectories[r] = q_trajectory(u, states, cfg.t_max);
        if (with_bound) run.asy_bounds[r] = q_asymptotic_bound(u);
    });
    return run;
}

/// Pools (operator, state) samples at each t, in realization order.
inline std::vector<SweepRow> aggregate_rows(const EnsembleRun& run) {
    std::vector<SweepRow> rows;
    if (run.trajectories.empty()) return rows;
    const auto& e = run.spec;
    const int t_max = run.trajectories.front().t_max;
    const int n_states = run.trajectories.front().n_states;
    const double cue = q_cue_mean(e.n_dim());
    for (int t = 1; t <= t_max; ++t) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& tr : run.trajectories)
            for (int s = 0; s < n_states; ++s) {
                sum += tr.at(t, s);
                ++count;
            }
        const double mean = sum / static_cast<double>(count);
        double ss = 0.0;
        for (const auto& tr : run.trajectories)
            for (int s = 0; s < n_states; ++s) {
                const double d = tr.at(t, s) - mean;
                ss += d * d;
            }
        SweepRow row;
        row.ensemble = std::string(ensemble_tag(e.kind));
        row.param_name = e.param_name();
        row.param_value = e.param_value();
        row.n_qubits = e.n_qubits;
        row.n_dim = e.n_dim();
        row.t = t;
        row.n_ops = static_cast<int>(run.trajectories.size());
        row.n_states = n_states;
        row.mean_q = mean;
        row.std_q = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) : 0.0;
        row.abs_diff_cue = std::abs(mean - cue);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void sort_rows(std::vector<SweepRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.ensemble, a.param_value, a.n_dim, a.t) < std::tie(b.ensemble, b.param_value, b.n_dim, b.t);
    });
}

inline std::vector<SweepRow> run_q_sweep(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<SweepRow> rows;
    for (const auto& e : cfg.ensembles) {
        auto part = aggregate_rows(run_ensemble(cfg, e, true, false));
        rows.insert(rows.end(), part.begin(), part.end());
    }
    sort_rows(rows);
    return rows;
}

// ---------------------------------------------------------------------------
// CSV output

inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline constexpr const char* kQSweepHeader =
    "ensemble,param_name,param_value,n_qubits,n_dim,t,n_ops,n_states,mean_q,std_q,abs_diff_cue";
inline constexpr const char* kNumberVarianceHeader = "ensemble,param_value,n_dim,L,sigma2,sigma2_cue";
inline constexpr const char* kHistHeader = "ensemble,param_value,n_dim,bin_lo,bin_hi,density,reference_density";
inline constexpr const char* kAsyBoundHeader = "ensemble,param_value,n_dim,q_asy_bound";

/// I/O failure carrying the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

inline std::string q_sweep_csv(std::vector<SweepRow> rows) {
    sort_rows(rows);
    std::ostringstream os;
    os << kQSweepHeader << '\n';
    for (const auto& r : rows)
        os << r.ensemble << ',' << r.param_name << ',' << format_real(r.param_value) << ',' << r.n_qubits << ','
           << r.n_dim << ',' << r.t << ',' << r.n_ops << ',' << r.n_states << ',' << format_real(r.mean_q) << ','
           << format_real(r.std_q) << ',' << format_real(r.abs_diff_cue) << '\n';
    return os.str();
}

inline void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    write_text(path, q_sweep_csv(rows));
}

struct NumberVarianceRow {
    std::string ensemble;
    double param_value;
    Eigen::Index n_dim;
    double l;
    double sigma2;
    double sigma2_cue;
};

struct HistRow {
    std::string ensemble;
    double param_value;
    Eigen::Index n_dim;
    double bin_lo;
    double bin_hi;
    double density;
    double reference_density;
};

struct AsyBoundRow {
    std::string ensemble;
    double param_value;
    Eigen::Index n_dim;
    double q_asy_bound;
};

/// Everything run_stats_sweep produces, before serialization.
struct StatsTables {
    std::vector<NumberVarianceRow> number_variance;
    std::vector<HistRow> eigvec_hist;
    std::vector<HistRow> matelem_hist;
    std::vector<AsyBoundRow> asy_bound;
};

namespace detail {

template <class Row>
void sort_stats(std::vector<Row>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.ensemble, a.param_value, a.n_dim) < std::tie(b.ensemble, b.param_value, b.n_dim);
    });
}

inline void append_hist(std::vector<HistRow>& out, const EnsembleSpec& e, const Histogram& h) {
    const auto dens = h.densities();
    const auto ref = exponential_reference_density(h);
    for (std::size_t i = 0; i < h.bins(); ++i)
        out.push_back({std::string(ensemble_tag(e.kind)), e.param_value(), e.n_dim(), h.bin_edges[i],
                       h.bin_edges[i + 1], dens[i], ref[i]});
}

}  // namespace detail

inline StatsTables compute_stats(const SweepConfig& cfg) {
    cfg.validate();
    StatsTables tables;
    const auto& f = cfg.stats;
    const bool need_spectra = f.number_variance || f.eigvec_hist;
    for (const auto& e : cfg.ensembles) {
        const int n_real = cfg.realizations(e);
        std::vector<SpectrumSample> spectra(need_spectra ? n_real : 0);
        std::vector<Histogram> mat_hists(f.matelem_hist ? n_real : 0, Histogram(cfg.hist));
        std::vector<double> bounds(f.asy_bound ? n_real : 0);
        parallel_for(static_cast<std::size_t>(n_real), cfg.workers, [&](std::size_t r) {
            auto rng = operator_stream(cfg, e, static_cast<int>(r));
            const auto u = sample_operator(e, rng);
            if (f.matelem_hist)
                for (double x : matrix_element_amplitudes(u)) mat_hists[r].add(x);
            if (need_spectra || f.asy_bound) {
                auto spec = spectral_decompose(u);
                if (f.asy_bound) bounds[r] = 2.0 * eigenvector_mean_q(spec) - 1.0;
                if (need_spectra) spectra[r] = std::move(spec);
            }
        });

        const std::string tag(ensemble_tag(e.kind));
        if (f.number_variance) {
            const auto grid = default_l_grid(e.n_dim());
            for (const auto& p : number_variance(std::span<const SpectrumSample>(spectra), grid))
                tables.number_variance.push_back(
                    {tag, e.param_value(), e.n_dim(), p.l, p.sigma2, cue_number_variance(p.l)});
        }
        if (f.eigvec_hist)
            detail::append_hist(tables.eigvec_hist, e,
                                eigenvector_amplitude_hist(std::span<const SpectrumSample>(spectra), cfg.hist));
        if (f.matelem_hist) {
            Histogram pooled(cfg.hist);
            for (const auto& h : mat_hists) pooled.merge(h);
            detail::append_hist(tables.matelem_hist, e, pooled);
        }
        if (f.asy_bound) {
            double sum = 0.0;
            for (double b : bounds) sum += b;
            tables.asy_bound.push_back({tag, e.param_value(), e.n_dim(), sum / static_cast<double>(bounds.size())});
        }
    }
    detail::sort_stats(tables.number_variance);
    detail::sort_stats(tables.eigvec_hist);
    detail::sort_stats(tables.matelem_hist);
    detail::sort_stats(tables.asy_bound);
    return tables;
}

inline std::string number_variance_csv(const std::vector<NumberVarianceRow>& rows) {
    std::ostringstream os;
    os << kNumberVarianceHeader << '\n';
    for (const auto& r : rows)
        os << r.ensemble << ',' << format_real(r.param_value) << ',' << r.n_dim << ',' << format_real(r.l) << ','
           << format_real(r.sigma2) << ',' << format_real(r.sigma2_cue) << '\n';
    return os.str();
}

inline std::string hist_csv(const std::vector<HistRow>& rows) {
    std::ostringstream os;
    os << kHistHeader << '\n';
    for (const auto& r : rows)
        os << r.ensemble << ',' << format_real(r.param_value) << ',' << r.n_dim << ',' << format_real(r.bin_lo) << ','
           << format_real(r.bin_hi) << ',' << format_real(r.density) << ',' << format_real(r.reference_density)
           << '\n';
    return os.str();
}

inline std::string asy_bound_csv(const std::vector<AsyBoundRow>& rows) {
    std::ostringstream os;
    os << kAsyBoundHeader << '\n';
    for (const auto& r : rows)
        os << r.ensemble << ',' << format_real(r.param_value) << ',' << r.n_dim << ',' << format_real(r.q_asy_bound)
           << '\n';
    return os.str();
}

inline std::filesystem::path output_path(const SweepConfig& cfg, const std::string& file) {
    return std::filesystem::path(cfg.output_prefix + file);
}

/// Writes q_sweep.csv (when enabled) under the configured prefix.
inline std::vector<SweepRow> run_and_write_q_sweep(const SweepConfig& cfg) {
    auto rows = run_q_sweep(cfg);
    write_csv(rows, output_path(cfg, "q_sweep.csv"));
    return rows;
}

/// Computes the enabled statistics and writes number_variance.csv,
/// eigvec_hist.csv, matelem_hist.csv and asy_bound.csv under the prefix.
inline StatsTables run_stats_sweep(const SweepConfig& cfg) {
    auto tables = compute_stats(cfg);
    const auto& f = cfg.stats;
    if (f.number_variance) write_text(output_path(cfg, "number_variance.csv"), number_variance_csv(tables.number_variance));
    if (f.eigvec_hist) write_text(output_path(cfg, "eigvec_hist.csv"), hist_csv(tables.eigvec_hist));
    if (f.matelem_hist) write_text(output_path(cfg, "matelem_hist.csv"), hist_csv(tables.matelem_hist));
    if (f.asy_bound) write_text(output_path(cfg, "asy_bound.csv"), asy_bound_csv(tables.asy_bound));
    return tables;
}

}  // namespace rmxlab
