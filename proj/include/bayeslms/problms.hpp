// Probabilistic LMS: filtering with the posterior constrained to the isotropic
// Gaussian family N(mu, sigma^2 I). The scalar gain of the update is a
// variable LMS step size and sigma^2 is a running uncertainty estimate.
//
// A step touches only vectors of length M; nothing here allocates or
// multiplies an M x M matrix.
#pragma once

#include <algorithm>
#include <utility>

#include "bayeslms/exact.hpp"
#include "bayeslms/model.hpp"

namespace bayeslms {

/// Lower bound on sigma^2; long stationary runs would otherwise underflow.
inline constexpr double kMinIsoVariance = 1e-300;

struct IsoStepResult {
    IsoGaussianState state;
    StepDetail detail;
};

namespace detail {

inline IsoStepResult iso_step(const IsoGaussianState& state, const RegressionSample& sample,
                              const SsmParams& params, double lam) {
    const Eigen::Index m = state.mean.size();
    if (static_cast<std::size_t>(m) != params.dim) {
        throw std::invalid_argument("state dimension does not match params.dim");
    }
    check_sample(sample, m);
    if (!state.mean.allFinite() || !std::isfinite(state.var)) {
        throw std::domain_error("non-finite state");
    }

    const Vector& x = sample.regressor;
    const double s = lam * lam * state.var + params.drift_var;
    const double energy = x.squaredNorm();
    const double denom = s * energy + params.obs_noise_var;
    const double eta = s / denom;
    const double innovation = sample.observation - lam * x.dot(state.mean);

    IsoStepResult out;
    out.state.mean = lam * state.mean + (eta * innovation) * x;
    // 1 - eta |x|^2 / M written without the subtraction, which cancels badly once
    // s |x|^2 dominates the noise.
    const double md = static_cast<double>(m);
    const double shrink = (s * energy * ((md - 1.0) / md) + params.obs_noise_var) / denom;
    out.state.var = std::max(shrink * s, kMinIsoVariance);
    out.detail.gain = eta;
    out.detail.innovation = innovation;
    out.detail.predicted_obs_var = denom;
    return out;
}

} // namespace detail

/// One step of the probabilistic LMS filter under the random-walk transition.
///
/// With s = sigma_{k-1}^2 + drift_var:
///   eta_k     = s / (s ||x_k||^2 + obs_noise_var)
///   mu_k      = mu_{k-1} + eta_k (y_k - x_k^T mu_{k-1}) x_k
///   sigma_k^2 = (1 - eta_k ||x_k||^2 / M) s
///
/// Requires params.forgetting == 1; use problms_step_ou otherwise.
[[nodiscard]] inline IsoStepResult problms_step(const IsoGaussianState& state,
                                                const RegressionSample& sample,
                                                const SsmParams& params) {
    if (params.forgetting != 1.0) {
        throw std::invalid_argument("problms_step requires forgetting == 1; use problms_step_ou");
    }
    return detail::iso_step(state, sample, params, 1.0);
}

/// Same update under the Ornstein-Uhlenbeck transition
/// w_k ~ N(lambda w_{k-1}, drift_var I): predictive mean lambda * mu and
/// s = lambda^2 sigma^2 + drift_var.
[[nodiscard]] inline IsoStepResult problms_step_ou(const IsoGaussianState& state,
                                                   const RegressionSample& sample,
                                                   const SsmParams& params) {
    if (!(params.forgetting > 0.0 && params.forgetting <= 1.0)) {
        throw std::invalid_argument("forgetting must lie in (0, 1]");
    }
    return detail::iso_step(state, sample, params, params.forgetting);
}

[[nodiscard]] inline Vector lms_map_estimate(const IsoGaussianState& state) { return state.mean; }

/// Per-coordinate band mean -/+ width * sigma.
[[nodiscard]] inline std::pair<Vector, Vector> predictive_band(const IsoGaussianState& state,
                                                               double width = 2.0) {
    if (!(width > 0.0)) {
        throw std::invalid_argument("band width must be > 0");
    }
    const double half = width * std::sqrt(state.var);
    return {state.mean.array() - half, state.mean.array() + half};
}

} // namespace bayeslms
