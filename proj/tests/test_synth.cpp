#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bayeslms/synth.hpp"

using namespace bayeslms;

TEST(GenStationary, NoiseVarianceFromSnr) {
    const auto sc = gen_stationary(50, 20.0, 10, 1);
    ASSERT_TRUE(sc.params_hint.has_value());
    EXPECT_NEAR(sc.params_hint->obs_noise_var, 0.01, 1e-17);
    EXPECT_EQ(sc.params_hint->drift_var, 0.0);
    EXPECT_EQ(sc.params_hint->dim, 50U);
}

TEST(GenStationary, UnitNormConstantTruth) {
    const auto sc = gen_stationary(50, 20.0, 100, 2);
    EXPECT_NEAR(sc.truth[0].norm(), 1.0, 1e-12);
    EXPECT_LE(sc.truth[0].cwiseAbs().maxCoeff(), 1.0);
    for (const auto& w : sc.truth) {
        ASSERT_EQ(w, sc.truth[0]);
    }
    EXPECT_EQ(sc.truth.size(), sc.samples.size());
}

TEST(GenStationary, SameSeedSameScenario) {
    const auto a = gen_stationary(7, 10.0, 200, 42);
    const auto b = gen_stationary(7, 10.0, 200, 42);
    const auto c = gen_stationary(7, 10.0, 200, 43);
    std::ostringstream sa;
    std::ostringstream sb;
    std::ostringstream sc;
    write_tracking_csv(sa, a);
    write_tracking_csv(sb, b);
    write_tracking_csv(sc, c);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_NE(sa.str(), sc.str());
}

TEST(GenStationary, ObservationNoiseHasNominalVariance) {
    const auto sc = gen_stationary(5, 20.0, 100000, 3);
    double sum2 = 0.0;
    for (std::size_t k = 0; k < sc.size(); ++k) {
        const double r = sc.samples[k].observation - sc.samples[k].regressor.dot(sc.truth[k]);
        sum2 += r * r;
    }
    EXPECT_NEAR(sum2 / static_cast<double>(sc.size()), 0.01, 0.05 * 0.01);
}

TEST(GenRandomWalk, ZeroDriftIsStationary) {
    const auto rw = gen_random_walk(6, 20.0, 0.0, 300, 9);
    const auto st = gen_stationary(6, 20.0, 300, 9);
    for (std::size_t k = 0; k < rw.size(); ++k) {
        ASSERT_EQ(rw.truth[k], rw.truth[0]);
        ASSERT_EQ(rw.samples[k].regressor, st.samples[k].regressor);
        ASSERT_EQ(rw.samples[k].observation, st.samples[k].observation);
    }
}

TEST(GenRandomWalk, DisplacementFollowsRandomWalkLaw) {
    const std::size_t m = 4;
    const double drift = 1e-3;
    const std::size_t steps = 51;
    double acc = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const auto sc = gen_random_walk(m, 20.0, drift, steps, 1000 + t);
        acc += (sc.truth.back() - sc.truth.front()).squaredNorm();
    }
    const double expected = static_cast<double>(steps - 1) * static_cast<double>(m) * drift;
    EXPECT_NEAR(acc / trials, expected, 0.1 * expected);
}

TEST(GenRandomWalk, ShiftRegressorsAreATappedDelayLine) {
    const auto sc = gen_random_walk(5, 20.0, 1e-4, 100, 4, RegressorKind::shift);
    for (std::size_t k = 1; k < sc.size(); ++k) {
        const Vector& cur = sc.samples[k].regressor;
        const Vector& prev = sc.samples[k - 1].regressor;
        for (Eigen::Index j = 1; j < cur.size(); ++j) {
            ASSERT_EQ(cur[j], prev[j - 1]);
        }
    }
}

TEST(GenRandomWalk, RejectsBadSizes) {
    EXPECT_THROW((void)gen_random_walk(0, 20.0, 0.0, 10, 1), std::invalid_argument);
    EXPECT_THROW((void)gen_random_walk(3, 20.0, 0.0, 0, 1), std::invalid_argument);
    EXPECT_THROW((void)gen_random_walk(3, 20.0, -1.0, 10, 1), std::invalid_argument);
}

TEST(TrackingCsv, RoundTripsBitExactly) {
    const auto sc = gen_random_walk(2, 15.0, 1e-3, 3, 77);
    const auto path = (std::filesystem::temp_directory_path() / "bayeslms_roundtrip.csv").string();
    write_tracking_csv(path, sc);
    const auto back = load_tracking_csv(path);
    ASSERT_EQ(back.size(), 3U);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(back.samples[k].regressor, sc.samples[k].regressor);
        EXPECT_EQ(back.samples[k].observation, sc.samples[k].observation);
        EXPECT_EQ(back.truth[k], sc.truth[k]);
    }
    EXPECT_FALSE(back.params_hint.has_value());
    std::filesystem::remove(path);
}

TEST(TrackingCsv, ShortRowNamesItsLine) {
    const std::string text = "k, y, x_0, x_1\n0, 1.0, 0.5, 0.25\n1, 2.0, 0.5\n";
    try {
        (void)parse_tracking_csv(text);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_EQ(e.line(), 3U);
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos);
    }
}

TEST(TrackingCsv, TruthColumnsAreOptional) {
    const auto parts = parse_tracking_csv("k,y,x_0,x_1\n0,1,2,3\n1,4,5,6\n");
    ASSERT_EQ(parts.size(), 1U);
    EXPECT_FALSE(parts[0].has_truth());
    EXPECT_EQ(parts[0].size(), 2U);
    EXPECT_EQ(parts[0].samples[1].regressor[1], 6.0);
}

TEST(TrackingCsv, RejectsMalformedInput) {
    EXPECT_THROW((void)parse_tracking_csv(""), DataError);
    EXPECT_THROW((void)parse_tracking_csv("k,y\n0,1\n"), DataError);
    EXPECT_THROW((void)parse_tracking_csv("k,y,x_0,w_0,w_1\n0,1,2,3,4\n"), DataError);
    EXPECT_THROW((void)parse_tracking_csv("k,y,x_0\n0,abc,1\n"), DataError);
    EXPECT_THROW((void)parse_tracking_csv("k,y,x_0\n"), DataError);
    EXPECT_THROW((void)load_tracking_csv("/nonexistent/file.csv"), DataError);
}

TEST(TrackingCsv, ComplexFileSplitsIntoTwoRealScenarios) {
    const auto parts = parse_tracking_csv(
        "k,y_re,y_im,x_re_0,x_im_0,w_re_0,w_im_0\n"
        "0,1,2,3,4,5,6\n"
        "1,7,8,9,10,11,12\n");
    ASSERT_EQ(parts.size(), 2U);
    EXPECT_EQ(parts[0].samples[1].observation, 7.0);
    EXPECT_EQ(parts[1].samples[1].observation, 8.0);
    EXPECT_EQ(parts[0].samples[0].regressor[0], 3.0);
    EXPECT_EQ(parts[1].samples[0].regressor[0], 4.0);
    EXPECT_EQ(parts[0].truth[1][0], 11.0);
    EXPECT_EQ(parts[1].truth[1][0], 12.0);
}
