// Counts heap traffic inside single filter steps: the isotropic and LMS-family
// steps must allocate O(M) bytes, the exact and RLS steps O(M^2).
#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>

#include "bayeslms/baselines.hpp"
#include "bayeslms/exact.hpp"
#include "bayeslms/problms.hpp"
#include "oracles.hpp"

namespace {

std::atomic<std::size_t> g_bytes{0};
std::atomic<std::size_t> g_count{0};

} // namespace

// Eigen allocates through malloc, so count there (glibc allows interposition).
extern "C" void* __libc_malloc(std::size_t n);

extern "C" void* malloc(std::size_t n) {
    g_bytes += n;
    ++g_count;
    return __libc_malloc(n);
}

using namespace bayeslms;

namespace {

constexpr Eigen::Index kDim = 256;
constexpr std::size_t kVectorBytes = kDim * sizeof(double);
constexpr std::size_t kMatrixBytes = kDim * kDim * sizeof(double);

struct Measured {
    std::size_t bytes;
    std::size_t count;
};

template <typename F>
Measured measure(F&& f) {
    const std::size_t b0 = g_bytes.load();
    const std::size_t c0 = g_count.load();
    f();
    return {g_bytes.load() - b0, g_count.load() - c0};
}

} // namespace

TEST(Complexity, ProbLmsStepIsLinear) {
    Rng rng(1);
    const SsmParams p{0.1, 1e-4, kDim, 1.0, 1.0};
    const IsoGaussianState s{oracle::random_vector(kDim, rng), 0.5};
    const RegressionSample smp{oracle::random_vector(kDim, rng), 0.3};
    const auto m = measure([&] {
        auto r = problms_step(s, smp, p);
        auto q = problms_step_ou(r.state, smp, p);
        ASSERT_TRUE(std::isfinite(q.state.var));
    });
    EXPECT_LE(m.bytes, 4 * kVectorBytes);
    EXPECT_LE(m.count, 4U);
}

TEST(Complexity, LmsFamilyStepsAreLinear) {
    Rng rng(2);
    const RegressionSample smp{oracle::random_vector(kDim, rng), 0.3};
    const auto lms = make_lms_state(kDim);
    const auto vss = make_vss_nlms_state(kDim);
    const auto m = measure([&] {
        auto a = lms_step(lms, smp, 0.01);
        auto b = nlms_step(a, smp, 0.5);
        auto c = vss_nlms_step(vss, smp, 1.0, 0.95, 1e-4);
        ASSERT_TRUE(b.weights.allFinite() && c.weights.allFinite());
    });
    EXPECT_LE(m.bytes, 8 * kVectorBytes);
}

TEST(Complexity, ExactStepIsQuadratic) {
    Rng rng(3);
    const SsmParams p{0.1, 1e-4, kDim, 1.0, 1.0};
    const auto s = prior_full(p);
    const RegressionSample smp{oracle::random_vector(kDim, rng), 0.3};
    const auto m = measure([&] { (void)exact_step(s, smp, p); });
    EXPECT_GE(m.bytes, kMatrixBytes);
}
