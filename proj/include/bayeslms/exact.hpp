// Exact posterior recursion for the random-walk model. Its MAP estimate is the
// RLS adaptive rule; the step costs O(M^2).
#pragma once

#include <variant>

#include <Eigen/Eigenvalues>

#include "bayeslms/model.hpp"

namespace bayeslms {

/// Diagnostics from one filtering step.
struct StepDetail {
    /// K_k (M x M) for exact steps, the scalar step size eta_k for isotropic ones.
    std::variant<Matrix, double> gain;
    /// y_k - x_k^T (predictive mean).
    double innovation = 0.0;
    /// Variance of y_k under the predictive distribution.
    double predicted_obs_var = 0.0;

    [[nodiscard]] double step_size() const { return std::get<double>(gain); }
    [[nodiscard]] const Matrix& gain_matrix() const { return std::get<Matrix>(gain); }
};

/// Symmetric to `sym_tol` (relative to the largest entry) and no eigenvalue
/// below -psd_tol * trace.
[[nodiscard]] inline bool is_valid_covariance(const Matrix& cov, double sym_tol = 1e-10,
                                              double psd_tol = 1e-10) {
    if (cov.rows() != cov.cols() || !cov.allFinite()) {
        return false;
    }
    const double scale = std::max(cov.cwiseAbs().maxCoeff(), 1e-300);
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale) {
        return false;
    }
    const Matrix sym = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -psd_tol * std::abs(cov.trace());
}

struct ExactStepResult {
    FullGaussianState state;
    StepDetail detail;
};

/// One predict/update step of the exact posterior.
///
/// Predictive: mean lambda * mu, covariance P = lambda^2 Sigma + drift_var * I.
/// Update with K = P / (x^T P x + obs_noise_var):
///   mu_k    = lambda * mu + K (y - x^T lambda mu) x
///   Sigma_k = (I - K x x^T) P
/// evaluated in rank-one form, then re-symmetrized.
[[nodiscard]] inline ExactStepResult exact_step(const FullGaussianState& state,
                                                const RegressionSample& sample,
                                                const SsmParams& params) {
    const Eigen::Index m = state.mean.size();
    if (state.cov.rows() != m || state.cov.cols() != m ||
        static_cast<std::size_t>(m) != params.dim) {
        throw std::invalid_argument("state dimension does not match params.dim");
    }
    detail::check_sample(sample, m);
    if (!state.mean.allFinite() || !state.cov.allFinite()) {
        throw std::domain_error("non-finite state");
    }

    const double lam = params.forgetting;
    const Vector& x = sample.regressor;

    Matrix pred_cov = (lam * lam) * state.cov;
    pred_cov.diagonal().array() += params.drift_var;
    Vector pred_mean = lam * state.mean;

    const Vector px = pred_cov * x;
    const double denom = x.dot(px) + params.obs_noise_var;
    const double innovation = sample.observation - x.dot(pred_mean);

    ExactStepResult out;
    out.state.mean = pred_mean + (innovation / denom) * px;
    // Joseph form (I - k x^T) P (I - k x^T)^T + R k k^T. Same value as P - px px^T / d,
    // but rounding in k enters at second order, so small posterior variances keep
    // their relative accuracy when x^T P x >> R.
    const Vector k = px / denom;
    Matrix cov = pred_cov;
    cov.noalias() -= k * px.transpose();
    const Vector cx = cov * x;
    cov.noalias() -= cx * k.transpose();
    cov.noalias() += (params.obs_noise_var * k) * k.transpose();
    out.state.cov = 0.5 * (cov + cov.transpose());
    out.detail.gain = Matrix(pred_cov / denom);
    out.detail.innovation = innovation;
    out.detail.predicted_obs_var = denom;
    return out;
}

/// The Gaussian mode, i.e. the mean; coincides with the RLS weights.
[[nodiscard]] inline Vector rls_map_estimate(const FullGaussianState& state) { return state.mean; }

} // namespace bayeslms
