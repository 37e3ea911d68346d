#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rmxlab/config.hpp"
#include "rmxlab/sweep.hpp"

using namespace rmxlab;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("rmxlab_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

SweepConfig small_config() {
    SweepConfig cfg;
    cfg.ensembles = {{EnsembleKind::interpolating, 4, 0.6}, {EnsembleKind::pr, 4, 3.0}, {EnsembleKind::cue, 3}};
    cfg.n_operators = 6;
    cfg.t_max = 5;
    cfg.seed = 77;
    return cfg;
}

}  // namespace

TEST(QSweep, DiagonalLimitNeverEntangles) {
    SweepConfig cfg;
    cfg.ensembles = {{EnsembleKind::interpolating, 5, 0.0}};
    cfg.n_operators = 4;
    cfg.t_max = 6;
    for (const auto& r : run_q_sweep(cfg)) {
        EXPECT_EQ(r.mean_q, 0.0);
        EXPECT_EQ(r.std_q, 0.0);
    }
}

TEST(QSweep, IndependentOfWorkerCount) {
    auto cfg = small_config();
    cfg.workers = 1;
    const auto one = q_sweep_csv(run_q_sweep(cfg));
    cfg.workers = 4;
    const auto four = q_sweep_csv(run_q_sweep(cfg));
    cfg.workers = 13;
    EXPECT_EQ(one, four);
    EXPECT_EQ(one, q_sweep_csv(run_q_sweep(cfg)));
}

TEST(QSweep, StreamsKeyedByParametersNotGridPosition) {
    // Reordering or extending the grid must not change a given ensemble's rows.
    auto cfg = small_config();
    cfg.ensembles = {{EnsembleKind::interpolating, 4, 0.6}};
    const auto alone = run_q_sweep(cfg);
    cfg.ensembles = {{EnsembleKind::cue, 4}, {EnsembleKind::interpolating, 4, 0.6}};
    std::vector<SweepRow> picked;
    for (const auto& r : run_q_sweep(cfg))
        if (r.ensemble == "interpolating") picked.push_back(r);
    EXPECT_EQ(q_sweep_csv(alone), q_sweep_csv(picked));
}

TEST(QSweep, AggregationMatchesDirectComputation) {
    auto cfg = small_config();
    cfg.ensembles = {{EnsembleKind::pr, 3, 2.0}};
    cfg.initial_states = {0, 5};
    const auto rows = run_q_sweep(cfg);
    ASSERT_EQ(rows.size(), 5u);

    // Oracle: sample each operator again and iterate the two states by hand.
    const auto& e = cfg.ensembles.front();
    std::vector<std::vector<double>> per_t(5);
    for (int r = 0; r < cfg.n_operators; ++r) {
        auto rng = operator_stream(cfg, e, r);
        const auto u = sample_operator(e, rng);
        for (Eigen::Index k : cfg.initial_states) {
            ComplexVector v = u.matrix().col(k);
            for (int t = 1; t <= 5; ++t) {
                per_t[std::size_t(t - 1)].push_back(meyer_wallach_q(v));
                v = u.matrix() * v;
            }
        }
    }
    for (int t = 1; t <= 5; ++t) {
        const auto& xs = per_t[std::size_t(t - 1)];
        double m = 0.0;
        for (double x : xs) m += x;
        m /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs) ss += (x - m) * (x - m);
        const auto& row = rows[std::size_t(t - 1)];
        EXPECT_EQ(row.t, t);
        EXPECT_EQ(row.n_ops, 6);
        EXPECT_EQ(row.n_states, 2);
        EXPECT_NEAR(row.mean_q, m, 1e-12);
        EXPECT_NEAR(row.std_q, std::sqrt(ss / static_cast<double>(xs.size() - 1)), 1e-12);
        EXPECT_NEAR(row.abs_diff_cue, std::abs(m - q_cue_mean(8)), 1e-12);
    }
}

TEST(QSweep, DeterministicMapRunsOnce) {
    SweepConfig cfg;
    cfg.ensembles = {{EnsembleKind::baker, 4}};
    cfg.n_operators = 9;
    cfg.t_max = 3;
    const auto rows = run_q_sweep(cfg);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows.front().n_ops, 1);
}

TEST(Csv, EmptyTableIsHeaderOnly) {
    EXPECT_EQ(q_sweep_csv({}), std::string(kQSweepHeader) + "\n");
    EXPECT_EQ(number_variance_csv({}), std::string(kNumberVarianceHeader) + "\n");
    EXPECT_EQ(hist_csv({}), std::string(kHistHeader) + "\n");
    EXPECT_EQ(asy_bound_csv({}), std::string(kAsyBoundHeader) + "\n");
}

TEST(Csv, RowRoundTrips) {
    SweepRow r{"pr", "m", 8.0, 8, 256, 3, 100, 256, 0.123456789012345, 0.01, 0.5};
    const auto text = q_sweep_csv({r});
    std::istringstream in(text);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    EXPECT_EQ(header, kQSweepHeader);
    EXPECT_EQ(line, "pr,m,8,8,256,3,100,256,0.123456789012,0.01,0.5");
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 11u);
    EXPECT_NEAR(std::stod(cells[8]), r.mean_q, 1e-11);
}

TEST(Csv, LargeTableByteIdentical) {
    std::vector<SweepRow> rows;
    for (int k = 0; k < 10000; ++k)
        rows.push_back({k % 2 ? "cue" : "pr", "m", double(k % 7), 8, 256, k, 1, 1, std::sin(k), std::cos(k), 0.0});
    const auto dir = scratch_dir("csv");
    write_csv(rows, dir / "a.csv");
    write_csv(rows, dir / "b.csv");
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
    EXPECT_EQ(slurp(dir / "a.csv"), q_sweep_csv(rows));
    std::filesystem::remove_all(dir);
}

TEST(Csv, UnwritablePathThrows) {
    const auto dir = scratch_dir("blocker");
    std::filesystem::create_directories(dir);
    write_text(dir / "file", "x");
    EXPECT_THROW(write_text(dir / "file" / "nested.csv", "y"), IoError);
    std::filesystem::remove_all(dir);
}

TEST(StatsSweep, WritesAllTablesWithHeaders) {
    SweepConfig cfg;
    cfg.ensembles = {{EnsembleKind::cue, 4}, {EnsembleKind::pr, 4, 2.0}};
    cfg.n_operators = 3;
    cfg.stats = {false, true, true, true, true};
    cfg.hist = {0.0, 5.0, 10};
    const auto dir = scratch_dir("stats");
    cfg.output_prefix = (dir / "run_").string();
    const auto tables = run_stats_sweep(cfg);
    EXPECT_EQ(tables.number_variance.size(), 2u * 40u);
    EXPECT_EQ(tables.eigvec_hist.size(), 2u * 10u);
    EXPECT_EQ(tables.matelem_hist.size(), 2u * 10u);
    ASSERT_EQ(tables.asy_bound.size(), 2u);
    for (const auto& [file, header] : std::vector<std::pair<std::string, std::string>>{
             {"number_variance.csv", kNumberVarianceHeader},
             {"eigvec_hist.csv", kHistHeader},
             {"matelem_hist.csv", kHistHeader},
             {"asy_bound.csv", kAsyBoundHeader}}) {
        const auto text = slurp(dir / ("run_" + file));
        EXPECT_EQ(text.substr(0, text.find('\n')), header) << file;
    }
    for (const auto& b : tables.asy_bound) {
        EXPECT_GE(b.q_asy_bound, -1.0);
        EXPECT_LE(b.q_asy_bound, 1.0);
    }
    std::filesystem::remove_all(dir);
}

TEST(StatsSweep, IndependentOfWorkerCount) {
    SweepConfig cfg;
    cfg.ensembles = {{EnsembleKind::interpolating, 4, 0.5}};
    cfg.n_operators = 5;
    cfg.stats = {false, true, true, true, true};
    cfg.workers = 1;
    const auto a = compute_stats(cfg);
    cfg.workers = 3;
    const auto b = compute_stats(cfg);
    EXPECT_EQ(number_variance_csv(a.number_variance), number_variance_csv(b.number_variance));
    EXPECT_EQ(hist_csv(a.matelem_hist), hist_csv(b.matelem_hist));
    EXPECT_EQ(hist_csv(a.eigvec_hist), hist_csv(b.eigvec_hist));
    EXPECT_EQ(asy_bound_csv(a.asy_bound), asy_bound_csv(b.asy_bound));
}

TEST(Config, ParsesGrid) {
    const auto cfg = parse_config(R"(
        # comment line
        ensemble = interpolating, pr, sawtooth
        n_qubits = 4, 5
        delta = 0.5, 0.9   # trailing comment
        m = 3
        k_saw = 0:5
        t_max = 7
        n_operators = 11
        initial_states = 0, 3
        seed = 99
        output = out/x_
        stats = q_sweep, asy_bound
    )");
    EXPECT_EQ(cfg.ensembles.size(), (2u + 1u + 1u) * 2u);
    EXPECT_EQ(cfg.t_max, 7);
    EXPECT_EQ(cfg.n_operators, 11);
    EXPECT_EQ(cfg.seed, 99u);
    EXPECT_EQ(cfg.output_prefix, "out/x_");
    EXPECT_EQ(cfg.initial_states, (std::vector<Eigen::Index>{0, 3}));
    EXPECT_TRUE(cfg.stats.q_sweep);
    EXPECT_TRUE(cfg.stats.asy_bound);
    EXPECT_FALSE(cfg.stats.number_variance);
    EXPECT_EQ(cfg.ensembles.back().kind, EnsembleKind::sawtooth);
    EXPECT_EQ(cfg.ensembles.back().kick_max, 5.0);
}

TEST(Config, RejectsMalformedInput) {
    EXPECT_THROW(parse_config("ensemble = cue\n"), ConfigError);                        // no n_qubits
    EXPECT_THROW(parse_config("ensemble = cue\nn_qubits = 4\nbogus = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("ensemble = nope\nn_qubits = 4\n"), ConfigError);
    EXPECT_THROW(parse_config("ensemble = interpolating\nn_qubits = 4\n"), ConfigError);  // no delta
    EXPECT_THROW(parse_config("ensemble = interpolating\nn_qubits = 4\ndelta = 1.5\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("ensemble = cue\nn_qubits = 4\nt_max = x\n"), ConfigError);
    EXPECT_THROW(parse_config("ensemble = cue\nn_qubits = 4\nt_max = 0\n"), ConfigError);
    EXPECT_THROW(parse_config("ensemble = cue\nn_qubits = 4\ninitial_states = 16\n"), ConfigError);
    EXPECT_THROW(parse_config("ensemble = sawtooth\nn_qubits = 4\nk_saw = 5:1\n"), ConfigError);
    EXPECT_THROW(parse_config("just some text\n"), ConfigError);
    EXPECT_THROW(parse_config("ensemble = cue\nn_qubits = 4\nstats = fancy\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/rmxlab.cfg"), IoError);
}

TEST(Presets, Contents) {
    for (const auto& name : preset_names()) EXPECT_NO_THROW(preset(name).validate()) << name;
    const auto f1 = preset("fig1_left");
    EXPECT_EQ(f1.ensembles.size(), 9u);
    EXPECT_EQ(f1.n_operators, 20);
    const auto f2 = preset("fig2_left");
    ASSERT_EQ(f2.ensembles.size(), 7u);
    EXPECT_EQ(f2.ensembles.back().param, 40.0);
    EXPECT_EQ(f2.n_operators, 100);
    const auto f3 = preset("fig3_stats");
    EXPECT_TRUE(f3.stats.number_variance && f3.stats.eigvec_hist && f3.stats.matelem_hist);
    EXPECT_THROW(preset("fig9"), ConfigError);
}
