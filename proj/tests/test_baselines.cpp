#include <gtest/gtest.h>

#include "bayeslms/baselines.hpp"
#include "bayeslms/exact.hpp"
#include "bayeslms/problms.hpp"
#include "oracles.hpp"

using namespace bayeslms;

namespace {

Vector unit(Eigen::Index m, Eigen::Index i) {
    Vector v = Vector::Zero(m);
    v[i] = 1.0;
    return v;
}

} // namespace

TEST(LmsStep, ZeroErrorLeavesWeights) {
    LmsState s{Vector::Constant(3, 0.5)};
    const Vector x = Vector::Constant(3, 1.0);
    EXPECT_EQ(lms_step(s, {x, 1.5}, 0.1).weights, s.weights);
}

TEST(LmsStep, OneStep) {
    const auto s = lms_step(make_lms_state(4), {unit(4, 0), 1.0}, 0.01);
    EXPECT_DOUBLE_EQ(s.weights[0], 0.01);
    EXPECT_EQ(s.weights.tail(3), Vector::Zero(3));
    EXPECT_THROW((void)lms_step(make_lms_state(4), {unit(4, 0), 1.0}, 0.0), std::invalid_argument);
}

TEST(LmsStep, MatchesProbLmsMeanWithPinnedStep) {
    Rng rng(6);
    const double mu = 0.02;
    for (int i = 0; i < 100; ++i) {
        const Vector x = oracle::random_vector(5, rng);
        const Vector w = oracle::random_vector(5, rng);
        const double y = rng.normal();
        // Choose the isotropic variance so that eta == mu for this regressor.
        const double s = mu / (1.0 - mu * x.squaredNorm());
        if (s <= 0.0) {
            continue;
        }
        const SsmParams p{1.0, 0.0, 5, 1.0, 1.0};
        const auto prob = problms_step({w, s}, {x, y}, p);
        const auto lms = lms_step({w}, {x, y}, mu);
        EXPECT_NEAR(prob.detail.step_size(), mu, 1e-15);
        EXPECT_LT(oracle::rel_err(prob.state.mean, lms.weights), 1e-13);
    }
}

TEST(NlmsStep, ZeroRegressorLeavesWeights) {
    LmsState s{Vector::Constant(2, 0.3)};
    EXPECT_EQ(nlms_step(s, {Vector::Zero(2), 9.0}, 0.5).weights, s.weights);
}

TEST(NlmsStep, UnitStepInterpolatesTheSample) {
    Vector x(1);
    x << 2.0;
    const auto s = nlms_step(make_lms_state(1), {x, 4.0}, 1.0, 1e-300);
    EXPECT_DOUBLE_EQ(s.weights[0], 2.0);
    EXPECT_DOUBLE_EQ(4.0 - x.dot(s.weights), 0.0);
}

TEST(NlmsStep, UnitEnergyReducesToLms) {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        Vector x = oracle::random_vector(6, rng);
        x.normalize();
        const LmsState w{oracle::random_vector(6, rng)};
        const double y = rng.normal();
        EXPECT_LT(oracle::rel_err(nlms_step(w, {x, y}, 0.3, 1e-300).weights, lms_step(w, {x, y}, 0.3).weights),
                  1e-15);
    }
}

TEST(VssNlmsStep, ZeroErrorFromRest) {
    const Vector x = Vector::Constant(3, 1.0);
    const auto s = vss_nlms_step(make_vss_nlms_state(3), {x, 0.0}, 1.0, 0.95, 1e-4);
    EXPECT_EQ(s.smoothed, Vector::Zero(3));
    EXPECT_EQ(s.step, 0.0);
    EXPECT_EQ(s.weights, Vector::Zero(3));
}

TEST(VssNlmsStep, SaturatesAtMuMax) {
    VssNlmsState st = make_vss_nlms_state(2);
    st.smoothed = Vector::Constant(2, 1e3);
    const auto s = vss_nlms_step(st, {unit(2, 0), 1.0}, 0.8, 0.95, 1e-4);
    EXPECT_NEAR(s.step, 0.8, 1e-9);
    EXPECT_LT(s.step, 0.8);
}

TEST(VssNlmsStep, StepStaysInRange) {
    Rng rng(8);
    VssNlmsState s = make_vss_nlms_state(10);
    for (int k = 0; k < 20000; ++k) {
        s = vss_nlms_step(s, {oracle::random_vector(10, rng), rng.normal(0.0, 3.0)}, 1.0, 0.95, 1e-4);
        ASSERT_GE(s.step, 0.0);
        ASSERT_LT(s.step, 1.0);
    }
}

TEST(RlsClassicStep, ZeroRegressor) {
    RlsState s = make_rls_state(3, 0.5);
    s.weights = Vector::Constant(3, 0.2);
    const auto r = rls_classic_step(s, {Vector::Zero(3), 4.0}, 0.9);
    EXPECT_EQ(r.weights, s.weights);
    EXPECT_LT(oracle::rel_err(r.inv_corr, s.inv_corr / 0.9), 1e-15);
}

TEST(RlsClassicStep, EqualsExactRecursionWithoutDrift) {
    Rng rng(9);
    for (double noise : {1.0, 0.05}) {
        const double prior = 0.7;
        const SsmParams p{noise, 0.0, 4, prior, 1.0};
        auto full = prior_full(p);
        // Classic RLS carries Sigma / noise_var.
        RlsState rls = make_rls_state(4, prior / noise);
        for (int k = 0; k < 100; ++k) {
            const RegressionSample s{oracle::random_vector(4, rng), rng.normal()};
            full = exact_step(full, s, p).state;
            rls = rls_classic_step(rls, s, 1.0);
            ASSERT_LT(oracle::rel_err(rls.weights, full.mean), 1e-8);
        }
    }
}

TEST(RlsClassicStep, InverseCorrelationStaysPsd) {
    Rng rng(10);
    RlsState s = make_rls_state(5, 0.01);
    for (int k = 0; k < 10000; ++k) {
        s = rls_classic_step(s, {oracle::random_vector(5, rng), rng.normal()}, 0.999);
        ASSERT_TRUE(is_valid_covariance(s.inv_corr)) << "step " << k;
    }
}
