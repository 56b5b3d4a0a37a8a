#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "supoly/hole.hpp"

using namespace supoly;

namespace {

// P(|alpha_0| >= r |alpha_1|) for independent |alpha|^2 ~ Exp(1), by trapezoid quadrature of
// int_0^inf e^{-x} P(|alpha_0|^2 >= r^2 x) dx.
double ratio_oracle(double r) {
    const int n = 200000;
    const double upper = 60.0;
    const double h = upper / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = i * h;
        const double f = std::exp(-x) * std::exp(-r * r * x);
        s += (i == 0 || i == n) ? 0.5 * f : f;
    }
    return s * h;
}

}  // namespace

TEST(HoleIndicator, Examples) {
    for (std::uint64_t t = 0; t < 20; ++t)
        EXPECT_TRUE(hole_indicator_m1(sample_polynomial({1, 0, 1}, t), 5.0));
    const auto z = SUPolynomial::monomial(1, 1, MultiIndex{1});
    for (double r : {1e-3, 1.0, 100.0}) EXPECT_FALSE(hole_indicator_m1(z, r));
    EXPECT_THROW(hole_indicator_m1(sample_polynomial({2, 2, 1}, 0), 1.0), DomainError);
}

TEST(HoleIndicator, BoundaryRootCountsAsHole) {
    // root exactly on |z| = 1 is outside the open disk
    const SUPolynomial psi({1, 1, 0}, {cplx{-1.0, 0.0}, cplx{1.0, 0.0}});
    EXPECT_TRUE(hole_indicator_m1(psi, 1.0));
}

TEST(HoleProbabilityMc, DegreeOneMatchesRatioOracle) {
    for (double r : {1.0, 2.0}) {
        const double want = ratio_oracle(r);
        EXPECT_NEAR(want, 1.0 / (1.0 + r * r), 1e-6);
        const auto est = hole_probability_mc({1, 1, 21}, r, 100000);
        EXPECT_NEAR(est.p_hat, want, 3.0 * est.standard_error) << "r=" << r;
        EXPECT_EQ(est.trials, 100000u);
        EXPECT_NEAR(est.standard_error, std::sqrt(est.p_hat * (1 - est.p_hat) / 1e5), 1e-15);
    }
}

TEST(HoleProbabilityMc, MonotoneInRadius) {
    std::uint64_t prev = ~0ull;
    for (double r : {0.2, 0.4, 0.6, 0.8}) {
        const auto est = hole_probability_mc({1, 6, 22}, r, 20000);
        EXPECT_LE(est.hits, prev);
        prev = est.hits;
    }
}

TEST(HoleProbabilityMc, ThreadCountIndependent) {
    const auto a = hole_probability_mc({1, 8, 23}, 0.3, 20000, 1);
    for (int th : {4, 16}) EXPECT_EQ(hole_probability_mc({1, 8, 23}, 0.3, 20000, th).hits, a.hits);
}

TEST(OmegaBound, DegreeOneExample) {
    const auto b = omega_lower_bound({1, 1, 0}, 1.0);
    EXPECT_NEAR(b.log_prob, -1.0 + std::log(1.0 - std::exp(-1.0)), 1e-14);
    EXPECT_NEAR(b.log_prob, -1.45868, 1e-5);
    EXPECT_EQ(b.term_count, 1u);
}

TEST(OmegaBound, DirectProductAtSmallDegree) {
    for (int m : {1, 2, 3}) {
        for (int N : {1, 2, 5}) {
            for (double r : {0.5, 1.0, 1.7}) {
                const auto table = index_table(m, N);
                double want = -1.0;
                for (std::size_t i = 1; i < table->size(); ++i) {
                    const double lam = std::exp(-table->half_log_weight(i)) * std::pow(N, -m) *
                                       std::pow(r, -table->degree(i));
                    want += std::log(1.0 - std::exp(-lam * lam));
                }
                const auto b = omega_lower_bound({m, N, 0}, r);
                EXPECT_NEAR(b.log_prob, want, 1e-10 * std::abs(want)) << m << " " << N << " " << r;
                EXPECT_EQ(b.term_count, table->size() - 1);
                EXPECT_LT(b.log_prob, 0.0);
            }
        }
    }
}

TEST(OmegaBound, TinyThresholdsStayAccurate) {
    // log(1 - e^{-x}) for x far below double epsilon
    EXPECT_NEAR(detail::log_one_minus_exp_neg(-700.0), -700.0, 1e-12);
    EXPECT_NEAR(detail::log_one_minus_exp_neg(std::log(1e-10)), std::log(1e-10) - 0.5e-10, 1e-15);
    EXPECT_NEAR(detail::log_one_minus_exp_neg(0.0), std::log(1.0 - std::exp(-1.0)), 1e-15);
    const auto b = omega_lower_bound({3, 200, 0}, 1.0);
    EXPECT_TRUE(std::isfinite(b.log_prob));
}

TEST(OmegaBound, DecreasesWithRadius) {
    double prev = 0.0;
    for (double r : {0.25, 0.5, 1.0, 2.0}) {
        const double v = omega_lower_bound({2, 10, 0}, r).log_prob;
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(OmegaBound, FittedSlopesFrozen) {
    // slopes of log(-log P(Omega)) on log N over N = 20..200 step 20, r = 1, from an
    // independent double-precision script
    const double frozen[] = {1.87502198, 2.81333413, 3.74346262};
    for (int m = 1; m <= 3; ++m) {
        std::vector<DecayPoint> pts;
        for (int N = 20; N <= 200; N += 20) pts.push_back({double(N), omega_lower_bound({m, N, 0}, 1.0).log_prob});
        EXPECT_NEAR(fit_decay_exponent(pts).beta, frozen[m - 1], 1e-6) << "m=" << m;
    }
}

TEST(OmegaBound, BelowMonteCarloHoleProbability) {
    for (int N : {2, 3}) {
        const double r = 0.5;
        const auto est = hole_probability_mc({1, N, 24}, r, 1000000);
        ASSERT_GT(est.hits, 0u);
        EXPECT_LE(std::exp(omega_lower_bound({1, N, 0}, r).log_prob), est.p_hat + 3.0 * est.standard_error);
    }
}

TEST(OmegaSanity, ContainmentIsExact) {
    for (int N : {2, 5, 10})
        for (double r : {0.5, 1.0}) EXPECT_EQ(sanity_check_omega({1, N, 25}, r, 1000), 1.0) << N << " " << r;
}

TEST(OmegaSanity, EdgeOfThreshold) {
    // N = 1, r = 1: lambda_1 = 1; alpha_1 = 0.999 lambda leaves the root just outside the disk
    const SUPolynomial psi({1, 1, 0}, {cplx{1.0, 0.0}, cplx{0.999, 0.0}});
    EXPECT_TRUE(hole_indicator_m1(psi, 1.0));
}

TEST(OmegaSanity, ConditionedDrawsRespectThresholds) {
    const EnsembleSpec spec{1, 12, 26};
    const auto table = index_table(1, 12);
    for (std::uint64_t t = 0; t < 200; ++t) {
        const auto psi = sample_omega_conditioned(spec, 0.7, t);
        EXPECT_GE(std::abs(psi.alpha()[0]), 1.0);
        for (std::size_t i = 1; i < table->size(); ++i)
            EXPECT_LT(std::abs(psi.alpha()[i]), std::exp(omega_log_threshold(1, 12, 0.7, table->at(i))));
    }
}

TEST(DecayFit, SyntheticExamples) {
    std::vector<DecayPoint> a;
    for (double N : {5.0, 10.0, 20.0, 40.0}) a.push_back({N, -0.1 * N * N});
    const auto fa = fit_decay_exponent(a);
    EXPECT_NEAR(fa.beta, 2.0, 1e-9);
    EXPECT_NEAR(fa.log_c, std::log(0.1), 1e-9);
    EXPECT_NEAR(fa.residual_rms, 0.0, 1e-9);

    std::vector<DecayPoint> b;
    for (double N : {5.0, 10.0, 20.0}) b.push_back({N, -0.01 * N * N * N});
    EXPECT_NEAR(fit_decay_exponent(b).beta, 3.0, 1e-9);
}

TEST(DecayFit, Errors) {
    EXPECT_THROW(DecayPoint::from_probability(5, 0.0), DomainError);
    EXPECT_THROW(DecayPoint::from_probability(5, 1.0), DomainError);
    EXPECT_THROW(fit_decay_exponent({{5, -1.0}, {10, -2.0}}), DomainError);
    EXPECT_THROW(fit_decay_exponent({{5, -1.0}, {5, -2.0}, {5, -3.0}}), DomainError);
    EXPECT_THROW(fit_decay_exponent({{5, -1.0}, {10, 0.0}, {20, -3.0}}), DomainError);
}

TEST(Deviation, WideWindowNeverViolated) {
    const auto d = deviation_experiment({1, 10, 27}, 1.0, 0.99, 10000);
    EXPECT_EQ(d.violations, 0u);
    EXPECT_EQ(d.frequency, 0.0);
}

TEST(Deviation, RareAtDegree40) {
    EXPECT_LT(deviation_experiment({1, 40, 28}, 1.0, 0.2, 10000).frequency, 0.01);
}

TEST(Deviation, Errors) {
    EXPECT_THROW(deviation_experiment({1, 10, 0}, 1.0, 1.0, 10), DomainError);
    EXPECT_THROW(deviation_experiment({2, 10, 0}, 1.0, 0.2, 10), DomainError);
}

TEST(JensenHeuristic, Threshold) {
    EXPECT_TRUE(jensen_hole_heuristic({0.1, 1.05, 0, 0, 0.1}));
    EXPECT_FALSE(jensen_hole_heuristic({0.3, 1.05, 0, 0, 0.1}));
}
