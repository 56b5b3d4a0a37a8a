#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "supoly/ensemble.hpp"
#include "supoly/random.hpp"

using namespace supoly;

// Known-answer vectors distributed with Random123 (kat_vectors, philox4x32 10 rounds).
TEST(Philox, KnownAnswers) {
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
              (Philox4x32Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (Philox4x32Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (Philox4x32Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Stream, DeterministicAndOrderIndependent) {
    Stream a(7, 3, 11), b(7, 3, 11);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next_block(), b.next_block());

    // a later trial does not depend on whether earlier trials were drawn
    const auto p1 = sample_polynomial({2, 5, 99}, 17);
    (void)sample_polynomial({2, 5, 99}, 16);
    const auto p2 = sample_polynomial({2, 5, 99}, 17);
    ASSERT_EQ(p1.alpha().size(), p2.alpha().size());
    for (std::size_t i = 0; i < p1.alpha().size(); ++i) EXPECT_EQ(p1.alpha()[i], p2.alpha()[i]);

    const auto p3 = sample_polynomial({2, 5, 99}, 18);
    EXPECT_NE(p1.alpha()[0], p3.alpha()[0]);
    EXPECT_NE(Stream(7, 3, 11).substream(1).next_block(), Stream(7, 3, 11).substream(2).next_block());
}

TEST(Stream, UniformInOpenInterval) {
    EXPECT_GT(Stream::to_open_unit(0), 0.0);
    EXPECT_LT(Stream::to_open_unit(~0ull), 1.0);
}

namespace {

// alpha_0 of an N = 0 polynomial for trials 0..n-1
std::vector<double> moduli(std::uint64_t n, std::uint64_t seed) {
    std::vector<double> out(n);
    for (std::uint64_t t = 0; t < n; ++t) out[t] = std::abs(sample_polynomial({1, 0, seed}, t).alpha()[0]);
    return out;
}

}  // namespace

TEST(ComplexGaussian, UnitSecondMoment) {
    const auto mods = moduli(1'000'000, 1);
    double s = 0.0, re = 0.0, im2 = 0.0;
    for (double a : mods) s += a * a;
    const double mean = s / static_cast<double>(mods.size());
    EXPECT_GE(mean, 0.997);
    EXPECT_LE(mean, 1.003);

    // real and imaginary parts each carry variance 1/2
    Stream st(5, 0);
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const auto z = st.complex_gaussian();
        re += z.real() * z.real();
        im2 += z.imag() * z.imag();
    }
    EXPECT_NEAR(re / n, 0.5, 0.01);
    EXPECT_NEAR(im2 / n, 0.5, 0.01);
}

TEST(ComplexGaussian, TailProbabilities) {
    const auto mods = moduli(1'000'000, 2);
    const double n = static_cast<double>(mods.size());
    for (double lambda : {0.5, 1.0, 2.0}) {
        const double upper = std::exp(-lambda * lambda);  // P(|a| >= lambda)
        const double lower = 1.0 - upper;                 // P(|a| <= lambda)
        const double se = std::sqrt(upper * lower / n);
        const double f_up = std::count_if(mods.begin(), mods.end(), [&](double a) { return a >= lambda; }) / n;
        const double f_lo = std::count_if(mods.begin(), mods.end(), [&](double a) { return a <= lambda; }) / n;
        EXPECT_NEAR(f_up, upper, 3 * se) << "lambda=" << lambda;
        EXPECT_NEAR(f_lo, lower, 3 * se) << "lambda=" << lambda;
        if (lambda == 1.0) {
            EXPECT_NEAR(f_up, std::exp(-1.0), 0.002);
        }
    }
}

TEST(SpherePoint, FirstCoordinateSquaredIsUniformForM2) {
    // For uniform z on S^3 in C^2, |z_1|^2 / r^2 ~ Uniform[0, 1].
    const int n = 100000;
    const double r = 1.7;
    Stream st(9, 0);
    std::vector<double> u(n);
    std::vector<cplx> z(2);
    for (int i = 0; i < n; ++i) {
        st.sphere_point(r, z);
        ASSERT_NEAR(std::sqrt(std::norm(z[0]) + std::norm(z[1])), r, 1e-12);
        u[static_cast<std::size_t>(i)] = std::norm(z[0]) / (r * r);
    }
    std::sort(u.begin(), u.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i)
        ks = std::max({ks, std::abs((i + 1.0) / n - u[static_cast<std::size_t>(i)]),
                       std::abs(u[static_cast<std::size_t>(i)] - static_cast<double>(i) / n)});
    EXPECT_LT(ks, 1.628 / std::sqrt(static_cast<double>(n)));  // 1% critical value
}
