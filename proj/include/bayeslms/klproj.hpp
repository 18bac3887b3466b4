// KL divergence from a full-covariance Gaussian to an isotropic one, and the
// closed-form isotropic projection that minimizes it.
#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "bayeslms/model.hpp"

namespace bayeslms {

/// Covariances with reciprocal condition number below this are rejected.
inline constexpr double kMinReciprocalCondition = 1e-12;

/// KL(p || q) for p = N(mu1, Sigma1), q = N(mu2, var I):
///   1/2 { -M + Tr(Sigma1)/var + |mu2 - mu1|^2/var + M ln(var) - ln det Sigma1 }
[[nodiscard]] inline double kl_full_to_iso(const GaussianFull& p, const GaussianIso& q) {
    const Eigen::Index m = p.mean.size();
    if (p.cov.rows() != m || p.cov.cols() != m || q.mean.size() != m) {
        throw std::invalid_argument("dimension mismatch in kl_full_to_iso");
    }
    if (!(q.var > 0.0)) {
        throw std::invalid_argument("isotropic variance must be > 0");
    }
    const Eigen::LLT<Matrix> llt(p.cov);
    if (llt.info() != Eigen::Success || !(llt.rcond() >= kMinReciprocalCondition)) {
        throw std::domain_error("covariance is singular or ill-conditioned");
    }
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const double dm = static_cast<double>(m);
    const double mahal = (q.mean - p.mean).squaredNorm() / q.var;
    return 0.5 * (-dm + p.cov.trace() / q.var + mahal + dm * std::log(q.var) - log_det);
}

/// argmin over isotropic q of KL(p || q): same mean, var = Tr(Sigma)/M.
[[nodiscard]] inline GaussianIso project_isotropic(const GaussianFull& p) {
    const Eigen::Index m = p.mean.size();
    if (p.cov.rows() != m || p.cov.cols() != m || m == 0) {
        throw std::invalid_argument("dimension mismatch in project_isotropic");
    }
    const double trace = p.cov.trace();
    if (!(trace > 0.0)) {
        throw std::domain_error("covariance trace must be > 0");
    }
    return {p.mean, trace / static_cast<double>(m)};
}

} // namespace bayeslms
