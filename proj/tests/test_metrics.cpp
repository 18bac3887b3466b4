#include <gtest/gtest.h>

#include <algorithm>

#include "bayeslms/metrics.hpp"
#include "bayeslms/problms.hpp"
#include "bayeslms/synth.hpp"
#include "oracles.hpp"

using namespace bayeslms;

namespace {

Trajectory constant_traj(std::size_t n, const Vector& v) { return Trajectory(n, v); }

} // namespace

TEST(MsdCurve, ZeroWhenEstimatesEqualTruth) {
    const Trajectory t = constant_traj(5, Vector::Constant(3, 0.4));
    const auto c = msd_curve({t, t}, {t, t});
    EXPECT_EQ(c.n_trials, 2U);
    for (double v : c.per_step_msd) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(MsdCurve, UnitNormTruthAgainstZero) {
    Vector w = Vector::Zero(4);
    w[2] = 1.0;
    const auto c = msd_curve({constant_traj(6, Vector::Zero(4))}, {constant_traj(6, w)});
    for (double v : c.per_step_msd) {
        EXPECT_EQ(v, 1.0);
    }
}

TEST(MsdCurve, AveragesTrials) {
    Vector one = Vector::Zero(1);
    one[0] = 1.0;
    Vector root3 = Vector::Zero(1);
    root3[0] = std::sqrt(3.0);
    const auto zero = constant_traj(1, Vector::Zero(1));
    const auto c = msd_curve({zero, zero}, {constant_traj(1, one), constant_traj(1, root3)});
    EXPECT_NEAR(c.per_step_msd[0], 2.0, 1e-15);
}

TEST(MsdCurve, ShapeMismatchThrows) {
    EXPECT_THROW((void)msd_curve({constant_traj(2, Vector::Zero(1))}, {constant_traj(3, Vector::Zero(1))}),
                 std::invalid_argument);
    EXPECT_THROW((void)msd_curve({}, {}), std::invalid_argument);
}

TEST(MsdCurve, InvariantToTrialOrder) {
    Rng rng(12);
    std::vector<Trajectory> est;
    std::vector<Trajectory> truth;
    for (int t = 0; t < 4; ++t) {
        Trajectory a;
        Trajectory b;
        for (int k = 0; k < 10; ++k) {
            a.push_back(oracle::random_vector(3, rng));
            b.push_back(oracle::random_vector(3, rng));
        }
        est.push_back(a);
        truth.push_back(b);
    }
    const auto c1 = msd_curve(est, truth);
    std::reverse(est.begin(), est.end());
    std::reverse(truth.begin(), truth.end());
    const auto c2 = msd_curve(est, truth);
    for (std::size_t k = 0; k < 10; ++k) {
        EXPECT_NEAR(c1.per_step_msd[k], c2.per_step_msd[k], 1e-14);
    }
}

TEST(SteadyStateMsd, Examples) {
    EXPECT_NEAR(steady_state_msd_db({std::vector<double>(50, 0.01), 1}, 10), -20.0, 1e-12);
    EXPECT_EQ(steady_state_msd_db({std::vector<double>(50, 1.0), 1}, 5), 0.0);
    EXPECT_NEAR(steady_state_msd_db({{5.0, 3.0, 0.1}, 1}, 1), -10.0, 1e-12);
    EXPECT_THROW((void)steady_state_msd_db({{1.0}, 1}, 0), std::invalid_argument);
    EXPECT_THROW((void)steady_state_msd_db({{1.0}, 1}, 2), std::invalid_argument);
    EXPECT_EQ(default_steady_window(10000), 1000U);
    EXPECT_EQ(default_steady_window(5), 1U);
}

TEST(Coverage, Extremes) {
    const Trajectory means = constant_traj(4, Vector::Zero(2));
    const Trajectory truths = constant_traj(4, Vector::Constant(2, 0.5));
    EXPECT_EQ(coverage(means, std::vector<double>(4, 1e6), truths, 2.0), 1.0);
    EXPECT_EQ(coverage(means, std::vector<double>(4, 0.0), truths, 2.0), 0.0);
    EXPECT_THROW((void)coverage(means, std::vector<double>(3, 1.0), truths), std::invalid_argument);
    EXPECT_THROW((void)coverage(means, std::vector<double>(4, 1.0), truths, 0.0), std::invalid_argument);
}

TEST(Coverage, MonotoneInWidth) {
    Rng rng(13);
    Trajectory means;
    Trajectory truths;
    std::vector<double> vars;
    for (int k = 0; k < 200; ++k) {
        means.push_back(oracle::random_vector(3, rng));
        truths.push_back(oracle::random_vector(3, rng));
        vars.push_back(rng.uniform(0.01, 2.0));
    }
    double prev = 0.0;
    for (double w = 0.1; w < 6.0; w += 0.1) {
        const double c = coverage(means, vars, truths, w);
        EXPECT_GE(c, prev);
        prev = c;
    }
}

TEST(Coverage, CalibratedForScalarModel) {
    const auto sc = gen_random_walk(1, 10.0, 1e-3, 100000, 321);
    SsmParams p = *sc.params_hint;
    p.prior_var = 1.0;
    auto s = prior_iso(p);
    Trajectory means;
    std::vector<double> vars;
    for (const auto& smp : sc.samples) {
        s = problms_step(s, smp, p).state;
        means.push_back(s.mean);
        vars.push_back(s.var);
    }
    const double c = coverage(means, vars, sc.truth, 2.0);
    EXPECT_GE(c, 0.93);
    EXPECT_LE(c, 0.97);
}
