// Linear-Gaussian random-walk state-space model: hyperparameters, priors and
// the Gaussian state types shared by every inference routine.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bayeslms {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised for malformed input files or data rows. Carries the offending line
/// number when one exists (0 otherwise).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Model hyperparameters.
///
/// Observations follow y_k = x_k^T w_k + n_k with n_k ~ N(0, obs_noise_var);
/// the weights follow w_k = forgetting * w_{k-1} + d_k with
/// d_k ~ N(0, drift_var * I). The prior is w_0 ~ N(0, prior_var * I).
struct SsmParams {
    double obs_noise_var = 1.0;
    double drift_var = 0.0;
    std::size_t dim = 1;
    double prior_var = 1.0;
    double forgetting = 1.0;

    bool operator==(const SsmParams&) const = default;
};

/// Prior variance used when none is given: the drift variance when the model
/// drifts, otherwise 1 (a zero-variance prior would never learn).
[[nodiscard]] inline double default_prior_var(double drift_var) noexcept {
    return drift_var > 0.0 ? drift_var : 1.0;
}

[[nodiscard]] inline SsmParams make_params(double obs_noise_var, double drift_var, std::size_t dim) {
    return SsmParams{obs_noise_var, drift_var, dim, default_prior_var(drift_var), 1.0};
}

/// Returns `params` unchanged or throws std::invalid_argument naming the
/// first violated constraint.
inline SsmParams validate_params(const SsmParams& params) {
    if (params.dim < 1) {
        throw std::invalid_argument("dim must be >= 1");
    }
    if (!(params.obs_noise_var > 0.0) || !std::isfinite(params.obs_noise_var)) {
        throw std::invalid_argument("obs_noise_var must be finite and > 0");
    }
    if (!(params.drift_var >= 0.0) || !std::isfinite(params.drift_var)) {
        throw std::invalid_argument("drift_var must be finite and >= 0");
    }
    if (!(params.prior_var > 0.0) || !std::isfinite(params.prior_var)) {
        throw std::invalid_argument("prior_var must be finite and > 0");
    }
    if (!(params.forgetting > 0.0 && params.forgetting <= 1.0)) {
        throw std::invalid_argument("forgetting must lie in (0, 1]");
    }
    return params;
}

/// One time step: regressor x_k and observation y_k.
struct RegressionSample {
    Vector regressor;
    double observation = 0.0;
};

/// Gaussian with a full covariance matrix.
struct GaussianFull {
    Vector mean;
    Matrix cov;
};

/// Gaussian with covariance var * I.
struct GaussianIso {
    Vector mean;
    double var = 1.0;
};

/// Exact posterior N(mu_k, Sigma_k).
using FullGaussianState = GaussianFull;
/// Isotropic approximate posterior N(mu_k, sigma_k^2 I).
using IsoGaussianState = GaussianIso;

[[nodiscard]] inline FullGaussianState prior_full(const SsmParams& params) {
    validate_params(params);
    const auto m = static_cast<Eigen::Index>(params.dim);
    return {Vector::Zero(m), params.prior_var * Matrix::Identity(m, m)};
}

[[nodiscard]] inline IsoGaussianState prior_iso(const SsmParams& params) {
    validate_params(params);
    return {Vector::Zero(static_cast<Eigen::Index>(params.dim)), params.prior_var};
}

namespace detail {

inline void check_sample(const RegressionSample& sample, Eigen::Index dim) {
    if (sample.regressor.size() != dim) {
        throw std::invalid_argument("regressor length " + std::to_string(sample.regressor.size()) +
                                    " does not match dimension " + std::to_string(dim));
    }
    if (!sample.regressor.allFinite() || !std::isfinite(sample.observation)) {
        throw std::domain_error("non-finite regressor or observation");
    }
}

} // namespace detail

} // namespace bayeslms
