// Benchmark metrics: mean-square deviation curves, steady-state MSD and
// uncertainty-band coverage. Curves stay in linear scale; dB only at reporting.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bayeslms/model.hpp"

namespace bayeslms {

struct MsdCurve {
    std::vector<double> per_step_msd;
    std::size_t n_trials = 0;
};

using Trajectory = std::vector<Vector>;

/// |truth_k - estimate_k|^2 per step.
[[nodiscard]] inline std::vector<double> squared_deviation_trace(const Trajectory& estimates,
                                                                 const Trajectory& truth) {
    if (estimates.size() != truth.size()) {
        throw std::invalid_argument("estimate and truth trajectories differ in length");
    }
    std::vector<double> out(estimates.size());
    for (std::size_t k = 0; k < estimates.size(); ++k) {
        if (estimates[k].size() != truth[k].size()) {
            throw std::invalid_argument("estimate and truth differ in dimension");
        }
        out[k] = (truth[k] - estimates[k]).squaredNorm();
    }
    return out;
}

/// Averages per-trial squared-deviation traces, summing in trial order.
[[nodiscard]] inline MsdCurve msd_from_traces(const std::vector<std::vector<double>>& traces) {
    if (traces.empty()) {
        throw std::invalid_argument("no trials");
    }
    MsdCurve curve{std::vector<double>(traces.front().size(), 0.0), traces.size()};
    for (const auto& t : traces) {
        if (t.size() != curve.per_step_msd.size()) {
            throw std::invalid_argument("trials differ in length");
        }
        for (std::size_t k = 0; k < t.size(); ++k) {
            curve.per_step_msd[k] += t[k];
        }
    }
    for (auto& v : curve.per_step_msd) {
        v /= static_cast<double>(traces.size());
    }
    return curve;
}

[[nodiscard]] inline MsdCurve msd_curve(const std::vector<Trajectory>& estimates,
                                        const std::vector<Trajectory>& truths) {
    if (estimates.size() != truths.size()) {
        throw std::invalid_argument("estimate and truth trial counts differ");
    }
    std::vector<std::vector<double>> traces;
    traces.reserve(estimates.size());
    for (std::size_t t = 0; t < estimates.size(); ++t) {
        traces.push_back(squared_deviation_trace(estimates[t], truths[t]));
    }
    return msd_from_traces(traces);
}

/// Trailing 10% of the run, at least one step.
[[nodiscard]] inline std::size_t default_steady_window(std::size_t n_steps) noexcept {
    return n_steps / 10 > 0 ? n_steps / 10 : 1;
}

[[nodiscard]] inline double to_db(double linear) { return 10.0 * std::log10(linear); }

/// 10 log10 of the mean of the last `window` entries.
[[nodiscard]] inline double steady_state_msd_db(const MsdCurve& curve, std::size_t window) {
    const auto& c = curve.per_step_msd;
    if (window == 0 || window > c.size()) {
        throw std::invalid_argument("steady-state window must be in [1, curve length]");
    }
    double sum = 0.0;
    for (std::size_t k = c.size() - window; k < c.size(); ++k) {
        sum += c[k];
    }
    return to_db(sum / static_cast<double>(window));
}

/// Fraction of (step, coordinate) pairs with |truth - mean| <= width * sigma.
[[nodiscard]] inline double coverage(const Trajectory& means, const std::vector<double>& vars,
                                     const Trajectory& truths, double width = 2.0) {
    if (!(width > 0.0)) {
        throw std::invalid_argument("coverage width must be > 0");
    }
    if (means.size() != vars.size() || means.size() != truths.size()) {
        throw std::invalid_argument("coverage inputs differ in length");
    }
    std::size_t hits = 0;
    std::size_t total = 0;
    for (std::size_t k = 0; k < means.size(); ++k) {
        if (means[k].size() != truths[k].size()) {
            throw std::invalid_argument("coverage inputs differ in dimension");
        }
        const double half = width * std::sqrt(vars[k]);
        hits += static_cast<std::size_t>(((truths[k] - means[k]).array().abs() <= half).count());
        total += static_cast<std::size_t>(means[k].size());
    }
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

} // namespace bayeslms
