// rmxlab command-line driver.
//
//   rmxlab sweep   --config <path>
//   rmxlab stats   --config <path>
//   rmxlab figure  <preset> --out <dir> [--seed S] [--ops K]
//   rmxlab selftest
//
// Exit codes: 0 success, 1 I/O or usage failure, 2 config error,
// 3 numerical failure.

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmxlab/rmxlab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void report(const rmxlab::SweepConfig& cfg, std::string_view what) {
    std::cerr << what << ": " << cfg.ensembles.size() << " ensemble(s), " << cfg.n_operators
              << " operator(s), t_max=" << cfg.t_max << ", seed=" << cfg.seed << ", workers="
              << (cfg.workers ? cfg.workers : rmxlab::default_worker_count()) << "\n";
}

void run_sweep(const rmxlab::SweepConfig& cfg) {
    report(cfg, "sweep");
    if (cfg.stats.q_sweep) {
        const auto rows = rmxlab::run_and_write_q_sweep(cfg);
        std::cerr << "wrote " << rmxlab::output_path(cfg, "q_sweep.csv").string() << " (" << rows.size()
                  << " rows)\n";
    }
    if (cfg.stats.asy_bound) {
        auto only_bound = cfg;
        only_bound.stats = {false, false, false, false, true};
        rmxlab::run_stats_sweep(only_bound);
        std::cerr << "wrote " << rmxlab::output_path(cfg, "asy_bound.csv").string() << "\n";
    }
}

void run_stats(rmxlab::SweepConfig cfg) {
    report(cfg, "stats");
    const bool any = cfg.stats.number_variance || cfg.stats.eigvec_hist || cfg.stats.matelem_hist ||
                     cfg.stats.asy_bound;
    if (!any) cfg.stats = {false, true, true, true, true};
    rmxlab::run_stats_sweep(cfg);
    std::cerr << "wrote statistics under prefix '" << cfg.output_prefix << "'\n";
}

struct Check {
    std::string name;
    std::function<bool()> pass;
};

int run_selftest() {
    using namespace rmxlab;
    const std::vector<Check> checks = {
        {"kron(sz, sz) is diag(1,-1,-1,1)",
         [] {
             ComplexMatrix sz = ComplexMatrix::Zero(2, 2);
             sz(0, 0) = 1.0;
             sz(1, 1) = -1.0;
             Eigen::Vector4cd d(1.0, -1.0, -1.0, 1.0);
             return (kron(sz, sz) - ComplexMatrix(d.asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
         }},
        {"CUE N=32 sample is unitary",
         [] {
             auto rng = derive_stream(7, {1});
             return sample_cue(32, rng).is_unitary();
         }},
        {"interpolating delta=0.5 N=32 sample is unitary",
         [] {
             auto rng = derive_stream(7, {2});
             return sample_interpolating(32, InterpolationParam(0.5), rng).is_unitary();
         }},
        {"PR n=5 m=4 sample is unitary",
         [] {
             auto rng = derive_stream(7, {3});
             return sample_pr_operator({5, 4}, rng).is_unitary();
         }},
        {"chaotic maps at N=64 are unitary",
         [] { return baker_map(64).is_unitary() && sawtooth_map(64, 2.5).is_unitary() && harper_map(64, 3.0).is_unitary(); }},
        {"Q(GHZ_4) = 1",
         [] {
             ComplexVector v = ComplexVector::Zero(16);
             v(0) = v(15) = 1.0 / std::sqrt(2.0);
             return std::abs(meyer_wallach_q(PureState::trusted(v)) - 1.0) < 1e-12;
         }},
        {"Q(W_3) = 8/9",
         [] {
             ComplexVector v = ComplexVector::Zero(8);
             v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
             return std::abs(meyer_wallach_q(PureState::trusted(v)) - 8.0 / 9.0) < 1e-12;
         }},
        {"spectral reconstruction of CUE N=64",
         [] {
             auto rng = derive_stream(7, {4});
             const auto u = sample_cue(64, rng);
             const auto s = spectral_decompose(u);
             ComplexVector lam(64);
             for (int k = 0; k < 64; ++k) lam(k) = std::polar(1.0, s.phases[std::size_t(k)]);
             return (s.eigenvectors * lam.asDiagonal() * s.eigenvectors.adjoint() - u.matrix()).cwiseAbs().maxCoeff() <=
                    kReconstructionTol;
         }},
        {"picket-fence number variance <= 0.25",
         [] {
             UnfoldedSpectrum comb{{}, 64.0};
             for (int k = 0; k < 64; ++k) comb.points.push_back(k + 0.5);
             const std::vector<double> grid = {0.3, 1.0, 2.5, 7.7, 16.0};
             for (auto p : number_variance(std::span<const UnfoldedSpectrum>(&comb, 1), grid))
                 if (p.sigma2 > 0.25) return false;
             return true;
         }},
        {"pr_parameter_count(8, 8) = 217", [] { return pr_parameter_count({8, 8}) == 217; }},
    };

    int failed = 0;
    for (const auto& c : checks) {
        bool ok = false;
        try {
            ok = c.pass();
        } catch (const std::exception& e) {
            std::cout << "  exception: " << e.what() << "\n";
        }
        std::cout << (ok ? "PASS  " : "FAIL  ") << c.name << "\n";
        if (!ok) ++failed;
    }
    std::cout << (checks.size() - static_cast<std::size_t>(failed)) << "/" << checks.size() << " checks passed\n";
    return failed ? kExitNumerical : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmxlab: entanglement generation and random-matrix statistics of nearly-random unitaries"};
    app.require_subcommand(1);

    std::string config_path;
    auto* sweep = app.add_subcommand("sweep", "Q(t) sweep driven by a key = value config file");
    sweep->add_option("--config", config_path, "config file")->required();

    auto* stats = app.add_subcommand("stats", "spectral and amplitude statistics driven by a config file");
    stats->add_option("--config", config_path, "config file")->required();

    std::string preset_name;
    std::string out_dir;
    std::uint64_t seed = 0;
    int ops = 0;
    auto* figure = app.add_subcommand("figure", "run a named figure preset");
    figure->add_option("preset", preset_name, "preset name")->required()->check(CLI::IsMember(rmxlab::preset_names()));
    figure->add_option("--out", out_dir, "output directory")->required();
    auto* seed_opt = figure->add_option("--seed", seed, "override the preset seed");
    auto* ops_opt = figure->add_option("--ops", ops, "override the number of operators per ensemble");

    auto* selftest = app.add_subcommand("selftest", "fast invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sweep) {
            run_sweep(rmxlab::load_config(config_path));
        } else if (*stats) {
            run_stats(rmxlab::load_config(config_path));
        } else if (*figure) {
            auto cfg = rmxlab::preset(preset_name);
            cfg.output_prefix = (std::filesystem::path(out_dir) / "").string();
            if (*seed_opt) cfg.seed = seed;
            if (*ops_opt) cfg.n_operators = ops;
            cfg.validate();
            const auto start = std::chrono::steady_clock::now();
            if (cfg.stats.q_sweep) run_sweep(cfg);
            else run_stats(cfg);
            const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
            std::cerr << preset_name << " finished in " << took.count() << " s\n";
        } else if (*selftest) {
            return run_selftest();
        }
    } catch (const rmxlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rmxlab::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const rmxlab::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const rmxlab::DimensionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
