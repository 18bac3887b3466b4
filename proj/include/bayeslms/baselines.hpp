// Classical adaptive filters used as comparison points: fixed-step LMS, NLMS,
// variable step-size NLMS and exponentially weighted RLS.
#pragma once

#include <cmath>
#include <stdexcept>

#include "bayeslms/model.hpp"

namespace bayeslms {

struct LmsState {
    Vector weights;
};

struct VssNlmsState {
    Vector weights;
    /// Smoothed normalized gradient p_k.
    Vector smoothed;
    /// Step size used by the most recent update.
    double step = 0.0;
};

struct RlsState {
    Vector weights;
    /// Inverse correlation matrix P_k.
    Matrix inv_corr;
};

[[nodiscard]] inline LmsState make_lms_state(std::size_t dim) {
    return {Vector::Zero(static_cast<Eigen::Index>(dim))};
}

[[nodiscard]] inline VssNlmsState make_vss_nlms_state(std::size_t dim) {
    const auto m = static_cast<Eigen::Index>(dim);
    return {Vector::Zero(m), Vector::Zero(m), 0.0};
}

/// P_0 = eps_inv * I.
[[nodiscard]] inline RlsState make_rls_state(std::size_t dim, double eps_inv) {
    if (!(eps_inv > 0.0)) {
        throw std::invalid_argument("eps_inv must be > 0");
    }
    const auto m = static_cast<Eigen::Index>(dim);
    return {Vector::Zero(m), eps_inv * Matrix::Identity(m, m)};
}

/// w_k = w_{k-1} + mu e_k x_k.
[[nodiscard]] inline LmsState lms_step(const LmsState& state, const RegressionSample& sample, double mu) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("LMS step size must be > 0");
    }
    detail::check_sample(sample, state.weights.size());
    const double err = sample.observation - sample.regressor.dot(state.weights);
    return {state.weights + (mu * err) * sample.regressor};
}

/// w_k = w_{k-1} + mu / (eps + |x_k|^2) e_k x_k.
[[nodiscard]] inline LmsState nlms_step(const LmsState& state, const RegressionSample& sample, double mu,
                                        double eps = 1e-8) {
    if (!(mu > 0.0) || !(eps > 0.0)) {
        throw std::invalid_argument("NLMS requires mu > 0 and eps > 0");
    }
    detail::check_sample(sample, state.weights.size());
    const double err = sample.observation - sample.regressor.dot(state.weights);
    const double norm = eps + sample.regressor.squaredNorm();
    return {state.weights + (mu * err / norm) * sample.regressor};
}

/// Variable step-size NLMS driven by a smoothed normalized gradient:
///   p_k  = alpha p_{k-1} + (1 - alpha) x_k e_k / (eps + |x_k|^2)
///   mu_k = mu_max |p_k|^2 / (|p_k|^2 + c)
/// followed by an NLMS update with step mu_k.
[[nodiscard]] inline VssNlmsState vss_nlms_step(const VssNlmsState& state, const RegressionSample& sample,
                                                double mu_max, double alpha, double c, double eps = 1e-8) {
    if (!(mu_max > 0.0) || !(alpha >= 0.0 && alpha < 1.0) || !(c > 0.0) || !(eps > 0.0)) {
        throw std::invalid_argument("VSS-NLMS requires mu_max > 0, alpha in [0,1), c > 0, eps > 0");
    }
    detail::check_sample(sample, state.weights.size());
    const Vector& x = sample.regressor;
    const double err = sample.observation - x.dot(state.weights);
    const double norm = eps + x.squaredNorm();

    VssNlmsState out;
    out.smoothed = alpha * state.smoothed + ((1.0 - alpha) * err / norm) * x;
    const double p2 = out.smoothed.squaredNorm();
    out.step = mu_max * p2 / (p2 + c);
    out.weights = state.weights + (out.step * err / norm) * x;
    return out;
}

/// Exponentially weighted RLS:
///   g = P x / (lam + x^T P x);  w += g e;  P = (P - g x^T P) / lam
[[nodiscard]] inline RlsState rls_classic_step(const RlsState& state, const RegressionSample& sample,
                                               double lam = 1.0) {
    if (!(lam > 0.0 && lam <= 1.0)) {
        throw std::invalid_argument("RLS forgetting factor must lie in (0, 1]");
    }
    detail::check_sample(sample, state.weights.size());
    const Vector& x = sample.regressor;
    const Vector px = state.inv_corr * x;
    const double err = sample.observation - x.dot(state.weights);
    const Vector g = px / (lam + x.dot(px));

    RlsState out;
    out.weights = state.weights + err * g;
    out.inv_corr = (state.inv_corr - g * px.transpose()) / lam;
    out.inv_corr = 0.5 * (out.inv_corr + out.inv_corr.transpose()).eval();
    return out;
}

} // namespace bayeslms
