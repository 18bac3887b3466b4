// bayeslms: run filter benchmarks, list algorithms, generate scenario CSVs.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bayeslms/experiment.hpp"
#include "bayeslms/synth.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

int list_algos() {
    for (const auto& a : bayeslms::list_algorithms()) {
        std::cout << a.name << "  " << a.summary << '\n';
        for (const auto& p : a.params) {
            std::cout << "    " << p.key << " = "
                      << (std::isnan(p.default_value) ? std::string("<scenario>")
                                                      : bayeslms::csv::format_double(p.default_value))
                      << "  " << p.doc << '\n';
        }
    }
    return 0;
}

struct RunOptions {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t workers = 0;
    std::vector<std::string> algos;
    std::vector<std::string> settings;
};

int run(const RunOptions& opt, const CLI::App& cmd) {
    auto cfg = bayeslms::load_config(opt.config);
    for (const auto& kv : opt.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw bayeslms::UsageError("--set expects key=value, got '" + kv + "'");
        }
        bayeslms::apply_setting(cfg, std::string(bayeslms::csv::trim(std::string_view(kv).substr(0, eq))),
                                std::string_view(kv).substr(eq + 1));
    }
    if (cmd.count("--out") > 0) {
        cfg.out_dir = opt.out;
    }
    if (cmd.count("--seed") > 0) {
        cfg.seed = opt.seed;
    }
    if (cmd.count("--workers") > 0) {
        cfg.workers = opt.workers;
    }
    if (!opt.algos.empty()) {
        cfg.algorithms.clear();
        for (const auto& a : opt.algos) {
            cfg.algorithms.push_back(bayeslms::parse_algorithm_spec(a));
        }
    }

    const auto res = bayeslms::run_experiment(cfg);
    std::cout << "trials=" << res.n_trials << " steps=" << res.n_steps << " window=" << res.window << " out="
              << cfg.out_dir << '\n';
    for (std::size_t a = 0; a < res.labels.size(); ++a) {
        std::cout << "  " << res.labels[a];
        if (res.has_truth) {
            std::cout << "  steady-state MSD " << bayeslms::steady_state_msd_db(res.msd(a), res.window) << " dB";
        }
        std::cout << '\n';
    }
    return 0;
}

struct GenOptions {
    std::string kind = "stationary";
    std::size_t m = 50;
    double snr_db = 20.0;
    double drift_var = 0.0;
    std::size_t n_steps = 10000;
    std::uint64_t seed = 1;
    std::string regressors = "iid";
    std::string out;
};

int gen(const GenOptions& opt) {
    const auto kind = opt.regressors == "shift" ? bayeslms::RegressorKind::shift : bayeslms::RegressorKind::iid;
    const auto sc = opt.kind == "stationary"
                        ? bayeslms::gen_stationary(opt.m, opt.snr_db, opt.n_steps, opt.seed)
                        : bayeslms::gen_random_walk(opt.m, opt.snr_db, opt.drift_var, opt.n_steps, opt.seed, kind);
    if (opt.out.empty() || opt.out == "-") {
        bayeslms::write_tracking_csv(std::cout, sc);
    } else {
        bayeslms::write_tracking_csv(opt.out, sc);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic LMS and adaptive-filter benchmarks"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run_cmd = app.add_subcommand("run", "run a Monte Carlo experiment from a config file");
    run_cmd->add_option("--config", run_opt.config, "key = value config file")->required();
    run_cmd->add_option("--out", run_opt.out, "output directory");
    run_cmd->add_option("--seed", run_opt.seed, "master seed");
    run_cmd->add_option("--workers", run_opt.workers, "worker threads (results do not depend on it)");
    run_cmd->add_option("--algo", run_opt.algos, "algorithm spec name[:key=value]..., repeatable");
    run_cmd->add_option("--set", run_opt.settings, "override a config key, key=value, repeatable");

    app.add_subcommand("list-algos", "list algorithms and their parameters");

    GenOptions gen_opt;
    auto* gen_cmd = app.add_subcommand("gen", "write a synthetic scenario as CSV");
    gen_cmd->add_option("--kind", gen_opt.kind, "stationary or randomwalk")
        ->check(CLI::IsMember({"stationary", "randomwalk"}));
    gen_cmd->add_option("--m", gen_opt.m, "filter length")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--snr-db", gen_opt.snr_db, "signal-to-noise ratio in dB");
    gen_cmd->add_option("--drift-var", gen_opt.drift_var, "random-walk drift variance")
        ->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--n-steps", gen_opt.n_steps, "number of samples")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen_opt.seed, "seed");
    gen_cmd->add_option("--regressors", gen_opt.regressors, "iid or shift")->check(CLI::IsMember({"iid", "shift"}));
    gen_cmd->add_option("--out", gen_opt.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (app.got_subcommand("list-algos")) {
            return list_algos();
        }
        if (app.got_subcommand("gen")) {
            return gen(gen_opt);
        }
        return run(run_opt, *run_cmd);
    } catch (const bayeslms::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
}
