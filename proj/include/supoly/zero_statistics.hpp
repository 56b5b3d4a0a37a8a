// zero_statistics.hpp: the unintegrated counting function n(r).
//
// For m = 1, n(r) is the number of roots in the open disk |z| < r and is
// computed exactly from roots_m1. For every m it is also estimated through
// the Jensen-type identity
//
//   int_r^{kr} n(t) dt/t = K * ( L(kr) - L(r) ),  L(s) = mean of log|psi| over S_s,
//
// and the monotonicity of n, which sandwiches the estimate between n(r) and n(kr).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "supoly/ensemble.hpp"
#include "supoly/errors.hpp"
#include "supoly/random.hpp"
#include "supoly/roots.hpp"

namespace supoly {

inline constexpr double kBoundaryTolerance = 1e-8;

/// #{roots with |z| < r}. Throws BoundaryAmbiguityError if a root lies within 1e-8 r of |z| = r.
inline int count_inside(const RootSet& roots, double r) {
    detail::require(r > 0.0, "radius must be positive");
    int count = 0;
    for (const auto& z : roots.roots) {
        const double a = std::abs(z);
        if (std::abs(a - r) <= kBoundaryTolerance * r)
            throw BoundaryAmbiguityError("root within tolerance of the counting circle", r);
        if (a < r) ++count;
    }
    return count;
}

inline int counting_exact_m1(const SUPolynomial& psi, double r) {
    detail::require(psi.m() == 1, "counting_exact_m1 requires m == 1");
    detail::require(r > 0.0, "radius must be positive");
    if (psi.N() == 0) {
        if (psi.alpha()[0] == cplx{0.0, 0.0}) throw DegeneratePolynomialError("zero polynomial");
        return 0;
    }
    return count_inside(roots_m1(psi), r);
}

inline double expected_counting(int N, double r) {
    detail::require(r > 0.0, "radius must be positive");
    const double r2 = r * r;
    return N * (r2 / (1.0 + r2));
}

struct SphereAverage {
    double radius = 0.0;
    std::uint64_t samples = 0;
    double mean_log_abs = 0.0;
    double standard_error = 0.0;
};

namespace detail {

// Running mean / variance (Welford).
struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double stderr_of_mean() const {
        return n < 2 ? 0.0 : std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

}  // namespace detail

/// Monte Carlo mean of log|psi| over the uniform probability measure on S_r.
inline SphereAverage sphere_log_average(const SUPolynomial& psi, double r, std::uint64_t n_samples,
                                        Stream& stream) {
    detail::require(r > 0.0, "radius must be positive");
    detail::require(n_samples >= 2, "need at least two sphere samples");
    std::vector<cplx> z(static_cast<std::size_t>(psi.m()));
    detail::Moments acc;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        stream.sphere_point(r, z);
        double v = log_abs(psi, z);
        if (!std::isfinite(v)) {
            stream.sphere_point(r, z);
            v = log_abs(psi, z);
            if (!std::isfinite(v)) throw NumericError("log|psi| not finite on two consecutive sphere samples");
        }
        acc.add(v);
    }
    return {r, n_samples, acc.mean, acc.stderr_of_mean()};
}

/// Lower bound for max over the closed ball B(0,r) of log|psi|: the max over sphere samples.
inline double max_log_on_ball(const SUPolynomial& psi, double r, std::uint64_t n_samples, Stream& stream) {
    detail::require(r > 0.0, "radius must be positive");
    detail::require(n_samples >= 1, "need at least one sample");
    std::vector<cplx> z(static_cast<std::size_t>(psi.m()));
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        stream.sphere_point(r, z);
        best = std::max(best, log_abs(psi, z));
    }
    return best;
}

struct CountingEstimate {
    double value = 0.0;
    double kappa = 0.0;
    double lower_anchor = 0.0;  // L(r)
    double upper_anchor = 0.0;  // L(kappa r)
    double stat_error = 0.0;
};

/**
 * Normalization K of the Jensen identity, fixed by the monomial psi(z) = z_1,
 * whose counting function is 1 at every radius. Computed once; the result
 * must be 1 or 2 (log|f| versus log|f|^2 convention) to within 1e-6.
 */
inline double jensen_constant() {
    static const double K = [] {
        const auto psi = SUPolynomial::monomial(1, 1, MultiIndex{1});
        Stream s(0, 0);
        const double r = 1.0;
        const double kappa = 2.0;
        const auto inner = sphere_log_average(psi, r, 4, s);
        const auto outer = sphere_log_average(psi, kappa * r, 4, s);
        const double raw = (outer.mean_log_abs - inner.mean_log_abs) / std::log(kappa);
        const double k = 1.0 / raw;
        if (!(std::abs(k - 1.0) < 1e-6 || std::abs(k - 2.0) < 1e-6))
            throw NumericError("Jensen normalization constant is neither 1 nor 2");
        return std::round(k);
    }();
    return K;
}

/**
 * K (L(kappa r) - L(r)) / log kappa, a value in [n(r), n(kappa r)] up to
 * stat_error. Both sphere averages use the same sample directions, so
 * stat_error is the standard error of the paired differences.
 */
inline CountingEstimate counting_jensen(const SUPolynomial& psi, double r, double kappa,
                                        std::uint64_t n_samples, Stream& stream) {
    detail::require(r > 0.0, "radius must be positive");
    detail::require(kappa > 1.0, "kappa must exceed 1");
    detail::require(n_samples >= 2, "need at least two sphere samples");
    const double K = jensen_constant();
    const auto m = static_cast<std::size_t>(psi.m());
    std::vector<cplx> u(m), zi(m), zo(m);
    detail::Moments inner, outer, diff;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        double li = 0.0, lo = 0.0;
        for (int attempt = 0;; ++attempt) {
            stream.sphere_point(1.0, u);
            for (std::size_t k = 0; k < m; ++k) {
                zi[k] = r * u[k];
                zo[k] = kappa * r * u[k];
            }
            li = log_abs(psi, zi);
            lo = log_abs(psi, zo);
            if (std::isfinite(li) && std::isfinite(lo)) break;
            if (attempt == 1) throw NumericError("log|psi| not finite on two consecutive sphere samples");
        }
        inner.add(li);
        outer.add(lo);
        diff.add(lo - li);
    }
    const double lk = std::log(kappa);
    return {K * diff.mean / lk, kappa, inner.mean, outer.mean, K * diff.stderr_of_mean() / lk};
}

/// Poisson kernel of the ball of radius r in C^m = R^{2m}: r^{2m-2}(r^2 - |zeta|^2)/|z - zeta|^{2m}.
inline double poisson_kernel(std::span<const cplx> zeta, std::span<const cplx> z, double r) {
    detail::require(zeta.size() == z.size() && !z.empty(), "points must share dimension m >= 1");
    detail::require(r > 0.0, "radius must be positive");
    const int m = static_cast<int>(z.size());
    double zeta_sq = 0.0, z_sq = 0.0, dist_sq = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        zeta_sq += std::norm(zeta[k]);
        z_sq += std::norm(z[k]);
        dist_sq += std::norm(z[k] - zeta[k]);
    }
    detail::require(zeta_sq < r * r, "poisson_kernel requires |zeta| < r");
    detail::require(std::abs(std::sqrt(z_sq) - r) <= 1e-12 * r, "poisson_kernel requires |z| = r");
    // r^{2m-2} / |z - zeta|^{2m} = (r^2 / dist^2)^{m-1} / dist^2
    return std::pow(r * r / dist_sq, m - 1) * (r * r - zeta_sq) / dist_sq;
}

inline double poisson_kernel(const ComplexPoint& zeta, const ComplexPoint& z, double r) {
    return poisson_kernel(zeta.coords(), z.coords(), r);
}

}  // namespace supoly
