// Monte Carlo benchmark driver: configuration, algorithm registry, trial
// execution and report emission (CSV tables and SVG charts).
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "bayeslms/baselines.hpp"
#include "bayeslms/csv.hpp"
#include "bayeslms/exact.hpp"
#include "bayeslms/metrics.hpp"
#include "bayeslms/problms.hpp"
#include "bayeslms/svg.hpp"
#include "bayeslms/synth.hpp"

namespace bayeslms {

/// Bad configuration, flag or algorithm name.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---- algorithm registry ----

struct ParamSchema {
    std::string key;
    /// NaN means "taken from the scenario".
    double default_value;
    std::string doc;
};

struct AlgorithmInfo {
    std::string name;
    std::string summary;
    std::vector<ParamSchema> params;
};

[[nodiscard]] inline const std::vector<AlgorithmInfo>& list_algorithms() {
    static const double from_scenario = std::numeric_limits<double>::quiet_NaN();
    static const std::vector<ParamSchema> bayes_params = {
        {"noise", from_scenario, "observation-noise variance assumed by the model"},
        {"drift", from_scenario, "drift variance assumed by the model"},
        {"prior_var", from_scenario, "prior variance (default: drift if > 0, else 1)"},
        {"lambda", 1.0, "forgetting factor of the transition, in (0, 1]"},
        {"misspec", from_scenario, "multiplier on the assumed noise variance (default: config misspec)"},
    };
    static const std::vector<AlgorithmInfo> registry = {
        {"lms", "fixed step-size LMS", {{"mu", 0.01, "step size"}}},
        {"nlms", "normalized LMS", {{"mu", 0.5, "step size"}, {"eps", 1e-8, "regularizer"}}},
        {"vss-nlms",
         "variable step-size NLMS (smoothed gradient)",
         {{"mu_max", 1.0, "maximum step size"},
          {"alpha", 0.95, "gradient smoothing factor"},
          {"c", 1e-4, "step-size saturation constant"},
          {"eps", 1e-8, "regularizer"}}},
        {"rls-classic",
         "exponentially weighted RLS",
         {{"lambda", 1.0, "forgetting factor"}, {"eps_inv", 0.01, "initial inverse correlation P0 = eps_inv I"}}},
        {"problms", "probabilistic LMS (isotropic posterior)", bayes_params},
        {"exact", "exact posterior recursion (RLS-equivalent Kalman filter)", bayes_params},
    };
    return registry;
}

[[nodiscard]] inline std::string algorithm_names() {
    std::string out;
    for (const auto& a : list_algorithms()) {
        out += (out.empty() ? "" : ", ") + a.name;
    }
    return out;
}

[[nodiscard]] inline const AlgorithmInfo& find_algorithm(std::string_view name) {
    for (const auto& a : list_algorithms()) {
        if (a.name == name) {
            return a;
        }
    }
    throw UsageError("unknown algorithm '" + std::string(name) + "' (available: " + algorithm_names() + ")");
}

/// One configured algorithm: `name[:key=value]...`, with the optional key
/// `label` naming its output column (default: the spec text itself).
struct AlgorithmSpec {
    std::string name;
    std::map<std::string, double> params;
    std::string label;

    [[nodiscard]] double get(const std::string& key) const {
        if (auto it = params.find(key); it != params.end()) {
            return it->second;
        }
        for (const auto& p : find_algorithm(name).params) {
            if (p.key == key) {
                return p.default_value;
            }
        }
        throw UsageError("algorithm '" + name + "' has no parameter '" + key + "'");
    }

    [[nodiscard]] bool is_bayesian() const { return name == "problms" || name == "exact"; }
    [[nodiscard]] bool reports_uncertainty() const { return name == "problms"; }
};

[[nodiscard]] inline AlgorithmSpec parse_algorithm_spec(std::string_view text) {
    text = csv::trim(text);
    AlgorithmSpec spec;
    std::size_t colon = text.find(':');
    spec.name = std::string(csv::trim(text.substr(0, colon)));
    const auto& info = find_algorithm(spec.name);
    while (colon != std::string_view::npos) {
        const std::size_t next = text.find(':', colon + 1);
        const auto item = text.substr(colon + 1, next == std::string_view::npos ? next : next - colon - 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("expected key=value in algorithm spec '" + std::string(text) + "'");
        }
        const std::string key(csv::trim(item.substr(0, eq)));
        const auto value = csv::trim(item.substr(eq + 1));
        if (key == "label") {
            spec.label = std::string(value);
        } else {
            const bool known = std::any_of(info.params.begin(), info.params.end(),
                                           [&](const ParamSchema& p) { return p.key == key; });
            double v = 0.0;
            if (!known) {
                throw UsageError("algorithm '" + spec.name + "' has no parameter '" + key + "'");
            }
            if (!csv::parse_double(value, v)) {
                throw UsageError("bad value '" + std::string(value) + "' for " + spec.name + ":" + key);
            }
            spec.params[key] = v;
        }
        colon = next;
    }
    if (spec.label.empty()) {
        spec.label = std::string(text);
    }
    return spec;
}

// ---- filters behind a common interface ----

struct Uncertainty {
    double step_size;
    double variance;
};

class AdaptiveFilter {
public:
    virtual ~AdaptiveFilter() = default;
    virtual void step(const RegressionSample& sample) = 0;
    [[nodiscard]] virtual const Vector& weights() const = 0;
    [[nodiscard]] virtual std::optional<Uncertainty> uncertainty() const { return std::nullopt; }
};

namespace detail {

class LmsFilter final : public AdaptiveFilter {
public:
    LmsFilter(std::size_t dim, double mu) : state_(make_lms_state(dim)), mu_(mu) {}
    void step(const RegressionSample& s) override { state_ = lms_step(state_, s, mu_); }
    [[nodiscard]] const Vector& weights() const override { return state_.weights; }

private:
    LmsState state_;
    double mu_;
};

class NlmsFilter final : public AdaptiveFilter {
public:
    NlmsFilter(std::size_t dim, double mu, double eps) : state_(make_lms_state(dim)), mu_(mu), eps_(eps) {}
    void step(const RegressionSample& s) override { state_ = nlms_step(state_, s, mu_, eps_); }
    [[nodiscard]] const Vector& weights() const override { return state_.weights; }

private:
    LmsState state_;
    double mu_;
    double eps_;
};

class VssNlmsFilter final : public AdaptiveFilter {
public:
    VssNlmsFilter(std::size_t dim, double mu_max, double alpha, double c, double eps)
        : state_(make_vss_nlms_state(dim)), mu_max_(mu_max), alpha_(alpha), c_(c), eps_(eps) {}
    void step(const RegressionSample& s) override { state_ = vss_nlms_step(state_, s, mu_max_, alpha_, c_, eps_); }
    [[nodiscard]] const Vector& weights() const override { return state_.weights; }

private:
    VssNlmsState state_;
    double mu_max_;
    double alpha_;
    double c_;
    double eps_;
};

class RlsFilter final : public AdaptiveFilter {
public:
    RlsFilter(std::size_t dim, double lam, double eps_inv) : state_(make_rls_state(dim, eps_inv)), lam_(lam) {}
    void step(const RegressionSample& s) override { state_ = rls_classic_step(state_, s, lam_); }
    [[nodiscard]] const Vector& weights() const override { return state_.weights; }

private:
    RlsState state_;
    double lam_;
};

class ProbLmsFilter final : public AdaptiveFilter {
public:
    explicit ProbLmsFilter(const SsmParams& params) : params_(params), state_(prior_iso(params)) {}
    void step(const RegressionSample& s) override {
        auto r = problms_step_ou(state_, s, params_);
        state_ = std::move(r.state);
        eta_ = r.detail.step_size();
    }
    [[nodiscard]] const Vector& weights() const override { return state_.mean; }
    [[nodiscard]] std::optional<Uncertainty> uncertainty() const override { return Uncertainty{eta_, state_.var}; }

private:
    SsmParams params_;
    IsoGaussianState state_;
    double eta_ = 0.0;
};

class ExactFilter final : public AdaptiveFilter {
public:
    explicit ExactFilter(const SsmParams& params) : params_(params), state_(prior_full(params)) {}
    void step(const RegressionSample& s) override { state_ = exact_step(state_, s, params_).state; }
    [[nodiscard]] const Vector& weights() const override { return state_.mean; }

private:
    SsmParams params_;
    FullGaussianState state_;
};

} // namespace detail

/// Model parameters assumed by a probabilistic filter. Unset entries come
/// from `model` (the scenario's generating parameters or config overrides).
[[nodiscard]] inline SsmParams assumed_params(const AlgorithmSpec& spec, const SsmParams& model,
                                              double default_misspec) {
    auto pick = [&](const char* key, double fallback) {
        const double v = spec.get(key);
        return std::isnan(v) ? fallback : v;
    };
    SsmParams p;
    p.dim = model.dim;
    p.obs_noise_var = pick("noise", model.obs_noise_var) * pick("misspec", default_misspec);
    p.drift_var = pick("drift", model.drift_var);
    p.prior_var = pick("prior_var", default_prior_var(p.drift_var));
    p.forgetting = pick("lambda", 1.0);
    try {
        return validate_params(p);
    } catch (const std::invalid_argument& e) {
        throw UsageError(spec.label + ": " + e.what());
    }
}

[[nodiscard]] inline std::unique_ptr<AdaptiveFilter> make_filter(const AlgorithmSpec& spec, const SsmParams& model,
                                                                 double default_misspec = 1.0) {
    const std::size_t dim = model.dim;
    if (spec.name == "lms") {
        return std::make_unique<detail::LmsFilter>(dim, spec.get("mu"));
    }
    if (spec.name == "nlms") {
        return std::make_unique<detail::NlmsFilter>(dim, spec.get("mu"), spec.get("eps"));
    }
    if (spec.name == "vss-nlms") {
        return std::make_unique<detail::VssNlmsFilter>(dim, spec.get("mu_max"), spec.get("alpha"), spec.get("c"),
                                                       spec.get("eps"));
    }
    if (spec.name == "rls-classic") {
        return std::make_unique<detail::RlsFilter>(dim, spec.get("lambda"), spec.get("eps_inv"));
    }
    if (spec.name == "problms") {
        return std::make_unique<detail::ProbLmsFilter>(assumed_params(spec, model, default_misspec));
    }
    if (spec.name == "exact") {
        return std::make_unique<detail::ExactFilter>(assumed_params(spec, model, default_misspec));
    }
    throw UsageError("unknown algorithm '" + spec.name + "' (available: " + algorithm_names() + ")");
}

// ---- configuration ----

enum class ScenarioKind { stationary, randomwalk, csv };

struct ExperimentConfig {
    ScenarioKind kind = ScenarioKind::stationary;
    std::size_t m = 50;
    double snr_db = 20.0;
    double drift_var = 0.0;
    std::size_t n_steps = 10000;
    std::size_t n_trials = 50;
    std::uint64_t seed = 1;
    std::string csv_path;
    RegressorKind regressors = RegressorKind::iid;
    std::vector<AlgorithmSpec> algorithms;
    /// Default multiplier on the noise variance assumed by problms/exact.
    double misspec = 1.0;
    std::string out_dir = "out";
    /// Steady-state window in steps; 0 selects the trailing 10%.
    std::size_t window = 0;
    std::size_t workers = 1;
    double band_width = 2.0;
    /// Model parameters for ingested data (synthetic runs use the generator's).
    std::optional<double> model_noise_var;
    std::optional<double> model_drift_var;
};

namespace detail {

template <typename T>
T parse_count(const std::string& key, std::string_view value) {
    long long v = 0;
    if (!csv::parse_long(value, v) || v < 0) {
        throw UsageError("bad value '" + std::string(value) + "' for '" + key + "'");
    }
    return static_cast<T>(v);
}

inline double parse_real(const std::string& key, std::string_view value) {
    double v = 0.0;
    if (!csv::parse_double(value, v) || !std::isfinite(v)) {
        throw UsageError("bad value '" + std::string(value) + "' for '" + key + "'");
    }
    return v;
}

inline std::vector<AlgorithmSpec> parse_algorithm_list(std::string_view value) {
    std::vector<AlgorithmSpec> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const auto item = csv::trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (!item.empty()) {
            out.push_back(parse_algorithm_spec(item));
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

} // namespace detail

/// Applies one `key = value` setting.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, std::string_view value) {
    value = csv::trim(value);
    if (key == "kind") {
        if (value == "stationary") {
            cfg.kind = ScenarioKind::stationary;
        } else if (value == "randomwalk") {
            cfg.kind = ScenarioKind::randomwalk;
        } else if (value == "csv") {
            cfg.kind = ScenarioKind::csv;
        } else {
            throw UsageError("kind must be stationary, randomwalk or csv");
        }
    } else if (key == "m") {
        cfg.m = detail::parse_count<std::size_t>(key, value);
    } else if (key == "snr_db") {
        cfg.snr_db = detail::parse_real(key, value);
    } else if (key == "drift_var") {
        cfg.drift_var = detail::parse_real(key, value);
    } else if (key == "n_steps") {
        cfg.n_steps = detail::parse_count<std::size_t>(key, value);
    } else if (key == "n_trials") {
        cfg.n_trials = detail::parse_count<std::size_t>(key, value);
    } else if (key == "seed") {
        cfg.seed = detail::parse_count<std::uint64_t>(key, value);
    } else if (key == "csv") {
        cfg.csv_path = std::string(value);
    } else if (key == "regressors") {
        if (value == "iid") {
            cfg.regressors = RegressorKind::iid;
        } else if (value == "shift") {
            cfg.regressors = RegressorKind::shift;
        } else {
            throw UsageError("regressors must be iid or shift");
        }
    } else if (key == "algos") {
        cfg.algorithms = detail::parse_algorithm_list(value);
    } else if (key == "misspec") {
        cfg.misspec = detail::parse_real(key, value);
    } else if (key == "out") {
        cfg.out_dir = std::string(value);
    } else if (key == "window") {
        cfg.window = detail::parse_count<std::size_t>(key, value);
    } else if (key == "workers") {
        cfg.workers = detail::parse_count<std::size_t>(key, value);
    } else if (key == "band_width") {
        cfg.band_width = detail::parse_real(key, value);
    } else if (key == "model_noise_var") {
        cfg.model_noise_var = detail::parse_real(key, value);
    } else if (key == "model_drift_var") {
        cfg.model_drift_var = detail::parse_real(key, value);
    } else {
        throw UsageError("unknown config key '" + key + "'");
    }
}

/// Flat `key = value` text; '#' starts a comment.
[[nodiscard]] inline ExperimentConfig parse_config(std::string_view text, ExperimentConfig cfg = {}) {
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto body = csv::trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            apply_setting(cfg, std::string(csv::trim(body.substr(0, eq))), body.substr(eq + 1));
        } catch (const UsageError& e) {
            throw UsageError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

[[nodiscard]] inline ExperimentConfig load_config(const std::string& path, ExperimentConfig cfg = {}) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw UsageError("cannot read config '" + path + "'");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), std::move(cfg));
}

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.n_trials < 1) {
        throw UsageError("n_trials must be >= 1");
    }
    if (cfg.kind != ScenarioKind::csv && (cfg.m < 1 || cfg.n_steps < 1)) {
        throw UsageError("m and n_steps must be >= 1");
    }
    if (cfg.kind == ScenarioKind::csv && cfg.csv_path.empty()) {
        throw UsageError("kind = csv needs a csv path");
    }
    if (cfg.algorithms.empty()) {
        throw UsageError("no algorithms configured");
    }
    if (!(cfg.misspec > 0.0)) {
        throw UsageError("misspec must be > 0");
    }
    if (!(cfg.band_width > 0.0)) {
        throw UsageError("band_width must be > 0");
    }
    if (!(cfg.drift_var >= 0.0)) {
        throw UsageError("drift_var must be >= 0");
    }
    std::vector<std::string> labels;
    for (const auto& a : cfg.algorithms) {
        if (std::find(labels.begin(), labels.end(), a.label) != labels.end()) {
            throw UsageError("duplicate algorithm label '" + a.label + "'");
        }
        labels.push_back(a.label);
    }
}

// ---- execution ----

/// Per-step traces of one algorithm over one trial (or their trial average).
struct AlgorithmTrace {
    std::vector<double> sq_deviation;  // empty without ground truth
    std::vector<double> sq_error;      // a priori (y - x^T w_{k-1})^2
    std::vector<double> step_size;     // uncertainty-reporting filters only
    std::vector<double> variance;
    std::vector<double> coverage;      // fraction of coordinates inside the band
};

/// Coefficient 0 of the first trial: truth and the uncertainty band.
struct BandTrace {
    std::string label;
    double width = 2.0;
    std::vector<double> truth;
    std::vector<double> mean;
    std::vector<double> sigma;
};

struct ExperimentResult {
    std::vector<std::string> labels;
    std::vector<AlgorithmTrace> mean_traces;
    std::vector<bool> has_uncertainty;
    std::size_t n_steps = 0;
    std::size_t n_trials = 0;
    std::size_t window = 0;
    bool has_truth = false;
    std::optional<BandTrace> band;

    [[nodiscard]] MsdCurve msd(std::size_t algo) const { return {mean_traces.at(algo).sq_deviation, n_trials}; }
    [[nodiscard]] std::size_t index_of(const std::string& label) const {
        const auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            throw std::out_of_range("no algorithm labelled '" + label + "'");
        }
        return static_cast<std::size_t>(it - labels.begin());
    }
};

namespace detail {

struct TrialOutput {
    std::vector<AlgorithmTrace> traces;
    std::optional<BandTrace> band;
};

inline void add_into(std::vector<double>& acc, const std::vector<double>& v, double scale = 1.0) {
    if (acc.empty()) {
        acc.assign(v.size(), 0.0);
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
        acc[k] += scale * v[k];
    }
}

// Runs every algorithm over the parts of one trial. Parts are independent
// real-valued streams (one, or two for a complex channel); squared errors add
// across parts, uncertainty statistics average.
inline TrialOutput run_trial(const ExperimentConfig& cfg, const std::vector<Scenario>& parts,
                             const SsmParams& model, bool keep_band) {
    TrialOutput out;
    const double part_scale = 1.0 / static_cast<double>(parts.size());
    bool band_taken = false;
    for (const auto& spec : cfg.algorithms) {
        AlgorithmTrace total;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            const Scenario& sc = parts[p];
            const std::size_t n = sc.size();
            auto filter = make_filter(spec, model, cfg.misspec);
            const bool unc = filter->uncertainty().has_value();
            const bool take_band = keep_band && unc && !band_taken && p == 0;

            AlgorithmTrace t;
            t.sq_error.resize(n);
            if (sc.has_truth()) {
                t.sq_deviation.resize(n);
            }
            if (unc) {
                t.step_size.resize(n);
                t.variance.resize(n);
                if (sc.has_truth()) {
                    t.coverage.resize(n);
                }
            }
            BandTrace band;
            for (std::size_t k = 0; k < n; ++k) {
                const auto& s = sc.samples[k];
                const double err = s.observation - s.regressor.dot(filter->weights());
                t.sq_error[k] = err * err;
                filter->step(s);
                const Vector& w = filter->weights();
                if (sc.has_truth()) {
                    t.sq_deviation[k] = (sc.truth[k] - w).squaredNorm();
                }
                if (unc) {
                    const auto u = *filter->uncertainty();
                    t.step_size[k] = u.step_size;
                    t.variance[k] = u.variance;
                    if (sc.has_truth()) {
                        const double half = cfg.band_width * std::sqrt(u.variance);
                        const auto hits = ((sc.truth[k] - w).array().abs() <= half).count();
                        t.coverage[k] = static_cast<double>(hits) / static_cast<double>(w.size());
                    }
                    if (take_band) {
                        band.truth.push_back(sc.has_truth() ? sc.truth[k][0] : std::nan(""));
                        band.mean.push_back(w[0]);
                        band.sigma.push_back(std::sqrt(u.variance));
                    }
                }
            }
            if (take_band) {
                band.label = spec.label;
                band.width = cfg.band_width;
                out.band = std::move(band);
                band_taken = true;
            }
            add_into(total.sq_error, t.sq_error);
            if (!t.sq_deviation.empty()) {
                add_into(total.sq_deviation, t.sq_deviation);
            }
            if (unc) {
                add_into(total.step_size, t.step_size, part_scale);
                add_into(total.variance, t.variance, part_scale);
                if (!t.coverage.empty()) {
                    add_into(total.coverage, t.coverage, part_scale);
                }
            }
        }
        out.traces.push_back(std::move(total));
    }
    return out;
}

} // namespace detail

/// Runs all trials and averages their traces in trial order, so the result
/// does not depend on the worker count.
[[nodiscard]] inline ExperimentResult simulate(const ExperimentConfig& cfg) {
    validate_config(cfg);

    std::vector<Scenario> csv_parts;
    std::size_t n_trials = cfg.n_trials;
    if (cfg.kind == ScenarioKind::csv) {
        csv_parts = load_tracking_parts(cfg.csv_path);
        n_trials = 1;
        const bool needs_model = std::any_of(cfg.algorithms.begin(), cfg.algorithms.end(), [](const AlgorithmSpec& a) {
            return a.is_bayesian() && std::isnan(a.get("noise"));
        });
        if (needs_model && !cfg.model_noise_var) {
            throw UsageError("kind = csv: set model_noise_var (or noise= per algorithm) for problms/exact");
        }
    }

    const auto model_for = [&](const Scenario& sc) {
        SsmParams model = sc.params_hint.value_or(make_params(1.0, 0.0, sc.dim()));
        if (cfg.model_noise_var) {
            model.obs_noise_var = *cfg.model_noise_var;
        }
        if (cfg.model_drift_var) {
            model.drift_var = *cfg.model_drift_var;
        }
        return model;
    };

    std::vector<detail::TrialOutput> outputs(n_trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_trials) {
                return;
            }
            try {
                std::vector<Scenario> parts;
                if (cfg.kind == ScenarioKind::csv) {
                    parts = csv_parts;
                } else {
                    const RegressorKind kind =
                        cfg.kind == ScenarioKind::stationary ? RegressorKind::iid : cfg.regressors;
                    const double drift = cfg.kind == ScenarioKind::stationary ? 0.0 : cfg.drift_var;
                    parts.push_back(gen_random_walk(cfg.m, cfg.snr_db, drift, cfg.n_steps,
                                                    trial_seed(cfg.seed, i), kind));
                }
                outputs[i] = detail::run_trial(cfg, parts, model_for(parts.front()), i == 0);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n_trials);
            }
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(cfg.workers, 1, n_trials);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    ExperimentResult res;
    res.n_trials = n_trials;
    res.n_steps = outputs.front().traces.front().sq_error.size();
    res.window = cfg.window == 0 ? default_steady_window(res.n_steps) : cfg.window;
    if (res.window > res.n_steps) {
        throw UsageError("window exceeds the number of steps");
    }
    res.has_truth = !outputs.front().traces.front().sq_deviation.empty();
    res.band = std::move(outputs.front().band);
    const double inv = 1.0 / static_cast<double>(n_trials);
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
        res.labels.push_back(cfg.algorithms[a].label);
        AlgorithmTrace mean;
        for (const auto& o : outputs) {
            const auto& t = o.traces[a];
            detail::add_into(mean.sq_error, t.sq_error, inv);
            if (!t.sq_deviation.empty()) {
                detail::add_into(mean.sq_deviation, t.sq_deviation, inv);
            }
            if (!t.step_size.empty()) {
                detail::add_into(mean.step_size, t.step_size, inv);
                detail::add_into(mean.variance, t.variance, inv);
            }
            if (!t.coverage.empty()) {
                detail::add_into(mean.coverage, t.coverage, inv);
            }
        }
        res.has_uncertainty.push_back(!mean.step_size.empty());
        res.mean_traces.push_back(std::move(mean));
    }
    return res;
}

// ---- reports ----

namespace detail {

inline std::ofstream open_report(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    return os;
}

inline std::string db_cell(double linear) { return csv::format_double(to_db(linear)); }

} // namespace detail

/// Files written by write_reports, relative to the output directory.
struct ReportFiles {
    std::vector<std::string> names;
};

inline ReportFiles write_reports(const ExperimentResult& res, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw DataError("cannot create output directory '" + out_dir + "'");
    }
    const fs::path dir(out_dir);
    ReportFiles files;
    const std::size_t na = res.labels.size();

    auto write_curve_table = [&](const std::string& name, auto member) {
        auto os = detail::open_report(dir / name);
        os << "step";
        for (const auto& l : res.labels) {
            os << ',' << l;
        }
        os << '\n';
        for (std::size_t k = 0; k < res.n_steps; ++k) {
            os << (k + 1);
            for (std::size_t a = 0; a < na; ++a) {
                os << ',' << detail::db_cell((res.mean_traces[a].*member)[k]);
            }
            os << '\n';
        }
        files.names.push_back(name);
    };

    if (res.has_truth) {
        write_curve_table("msd.csv", &AlgorithmTrace::sq_deviation);
    }
    write_curve_table("prediction_error.csv", &AlgorithmTrace::sq_error);

    {
        auto os = detail::open_report(dir / "summary.csv");
        os << "algorithm,steady_state_msd_db,final_msd_db,steady_state_prediction_error_db,window\n";
        for (std::size_t a = 0; a < na; ++a) {
            const auto& t = res.mean_traces[a];
            os << res.labels[a] << ',';
            if (res.has_truth) {
                os << csv::format_double(steady_state_msd_db(res.msd(a), res.window)) << ','
                   << detail::db_cell(t.sq_deviation.back());
            } else {
                os << ',';
            }
            os << ',' << csv::format_double(steady_state_msd_db({t.sq_error, res.n_trials}, res.window)) << ','
               << res.window << '\n';
        }
        files.names.push_back("summary.csv");
    }

    const bool any_unc = std::find(res.has_uncertainty.begin(), res.has_uncertainty.end(), true) !=
                         res.has_uncertainty.end();
    if (any_unc) {
        auto os = detail::open_report(dir / "uncertainty.csv");
        os << "step";
        for (std::size_t a = 0; a < na; ++a) {
            if (res.has_uncertainty[a]) {
                os << ',' << res.labels[a] << "_eta," << res.labels[a] << "_sigma2," << res.labels[a] << "_coverage";
            }
        }
        os << '\n';
        for (std::size_t k = 0; k < res.n_steps; ++k) {
            os << (k + 1);
            for (std::size_t a = 0; a < na; ++a) {
                if (!res.has_uncertainty[a]) {
                    continue;
                }
                const auto& t = res.mean_traces[a];
                os << ',' << csv::format_double(t.step_size[k]) << ',' << csv::format_double(t.variance[k]) << ',';
                if (!t.coverage.empty()) {
                    os << csv::format_double(t.coverage[k]);
                }
            }
            os << '\n';
        }
        files.names.push_back("uncertainty.csv");
    }

    {
        svg::Chart chart{res.has_truth ? "Mean-square deviation" : "A priori squared error", "step", "dB"};
        for (std::size_t a = 0; a < na; ++a) {
            const auto& src = res.has_truth ? res.mean_traces[a].sq_deviation : res.mean_traces[a].sq_error;
            svg::Series s{res.labels[a], {}, {}};
            for (std::size_t k = 0; k < src.size(); ++k) {
                s.x.push_back(static_cast<double>(k + 1));
                s.y.push_back(to_db(src[k]));
            }
            chart.series.push_back(std::move(s));
        }
        auto os = detail::open_report(dir / "msd.svg");
        os << svg::render(chart);
        files.names.push_back("msd.svg");
    }

    if (res.band) {
        const auto& b = *res.band;
        svg::Chart chart{"Coefficient 0, trial 0: " + b.label, "step", "value"};
        svg::Series truth{"truth", {}, {}};
        svg::Series est{b.label + " mean", {}, {}};
        svg::Band band{"mean +/- " + csv::format_double(b.width) + " sigma", {}, {}, {}};
        for (std::size_t k = 0; k < b.mean.size(); ++k) {
            const double x = static_cast<double>(k + 1);
            if (!std::isnan(b.truth[k])) {
                truth.x.push_back(x);
                truth.y.push_back(b.truth[k]);
            }
            est.x.push_back(x);
            est.y.push_back(b.mean[k]);
            band.x.push_back(x);
            band.lower.push_back(b.mean[k] - b.width * b.sigma[k]);
            band.upper.push_back(b.mean[k] + b.width * b.sigma[k]);
        }
        chart.bands.push_back(std::move(band));
        if (!truth.x.empty()) {
            chart.series.push_back(std::move(truth));
        }
        chart.series.push_back(std::move(est));
        auto os = detail::open_report(dir / "band.svg");
        os << svg::render(chart);
        files.names.push_back("band.svg");
    }
    return files;
}

/// simulate + write_reports into cfg.out_dir.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    auto res = simulate(cfg);
    write_reports(res, cfg.out_dir);
    return res;
}

} // namespace bayeslms
