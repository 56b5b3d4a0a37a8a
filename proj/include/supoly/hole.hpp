// hole.hpp: hole probabilities P(no zero of psi in B(0,r)).
//
// Three routes:
//   * Monte Carlo with exact root counting (m = 1 only);
//   * the explicit coefficient event
//       Omega = { |alpha_0| >= 1,  |alpha_j| < lambda_j for |j| > 0 },
//       lambda_j = (N choose j)^{-1/2} N^{-m} r^{-|j|},
//     which forces |alpha_0| > sum_{|j|>0} |alpha_j| sqrt(N choose j) r^{|j|} and hence a hole,
//     with probability exp(-1) prod_j (1 - exp(-lambda_j^2)) in closed form;
//   * a least-squares fit of log(-log p) against log N for the decay exponent.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "supoly/ensemble.hpp"
#include "supoly/errors.hpp"
#include "supoly/parallel.hpp"
#include "supoly/random.hpp"
#include "supoly/zero_statistics.hpp"

namespace supoly {

/// Relative radius nudge used when a root sits on the counting circle.
inline constexpr double kBoundaryRetryFactor = 1e-6;

/// True iff psi has no root in the open disk |z| < r (m = 1).
inline bool hole_indicator_m1(const SUPolynomial& psi, double r) {
    detail::require(psi.m() == 1, "hole_indicator_m1 requires m == 1");
    try {
        return counting_exact_m1(psi, r) == 0;
    } catch (const BoundaryAmbiguityError&) {
        // a root on |z| = r does not violate the open-ball hole event
        return counting_exact_m1(psi, r * (1.0 - kBoundaryRetryFactor)) == 0;
    }
}

struct HoleEstimate {
    EnsembleSpec spec;
    double radius = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double p_hat = 0.0;
    double standard_error = 0.0;
};

inline HoleEstimate make_hole_estimate(const EnsembleSpec& spec, double r, std::uint64_t trials,
                                       std::uint64_t hits) {
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    return {spec, r, trials, hits, p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

inline HoleEstimate hole_probability_mc(const EnsembleSpec& spec, double r, std::uint64_t trials,
                                        int threads = default_threads()) {
    spec.validate();
    detail::require(spec.m == 1, "Monte Carlo hole detection is exact only for m == 1");
    detail::require(r > 0.0, "radius must be positive");
    detail::require(trials >= 1, "need at least one trial");
    const auto hit = parallel_trials(trials, threads, [&](std::uint64_t t) -> std::uint8_t {
        return hole_indicator_m1(sample_polynomial(spec, t), r) ? 1 : 0;
    });
    std::uint64_t hits = 0;
    for (auto h : hit) hits += h;
    return make_hole_estimate(spec, r, trials, hits);
}

struct OmegaBound {
    EnsembleSpec spec;
    double radius = 0.0;
    double log_prob = 0.0;
    std::uint64_t term_count = 0;
};

namespace detail {

// log(1 - exp(-x)) for x = exp(log_x) > 0, accurate from x ~ 1e-300 up.
inline double log_one_minus_exp_neg(double log_x) {
    if (log_x < -20.0) {
        const double x = std::exp(log_x);
        // 1 - e^{-x} = x (1 - x/2 + ...)
        return log_x + std::log1p(-0.5 * x);
    }
    return std::log(-std::expm1(-std::exp(log_x)));
}

// Calls fn(entries, degree) for every multi-index with 0 < |j| <= N.
template <class Fn>
void for_each_nonzero_index(int m, int N, std::vector<int>& cur, int k, int remaining, int used, Fn& fn) {
    if (k == m) {
        if (used > 0) fn(cur, used);
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        cur[static_cast<std::size_t>(k)] = v;
        for_each_nonzero_index(m, N, cur, k + 1, remaining - v, used + v, fn);
    }
}

}  // namespace detail

/// log lambda_j = -(1/2) log(N choose j) - m log N - |j| log r.
inline double omega_log_threshold(int m, int N, double r, std::span<const int> j) {
    int deg = 0;
    for (int e : j) deg += e;
    return -0.5 * multinomial_log(N, j) - m * std::log(static_cast<double>(N)) - deg * std::log(r);
}

/// Exact log P(Omega) = -1 + sum_{0<|j|<=N} log(1 - exp(-lambda_j^2)).
inline OmegaBound omega_lower_bound(const EnsembleSpec& spec, double r) {
    spec.validate();
    detail::require(spec.N >= 1, "omega_lower_bound requires N >= 1");
    detail::require(r > 0.0, "radius must be positive");
    const int m = spec.m;
    const int N = spec.N;
    std::vector<double> lgam(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) lgam[static_cast<std::size_t>(k)] = std::lgamma(k + 1.0);
    const double base = -m * std::log(static_cast<double>(N));
    const double lr = std::log(r);

    double total = -1.0;  // P(|alpha_0| >= 1) = e^{-1}
    std::uint64_t terms = 0;
    std::vector<int> cur(static_cast<std::size_t>(m), 0);
    auto visit = [&](const std::vector<int>& j, int deg) {
        double ml = lgam[static_cast<std::size_t>(N)] - lgam[static_cast<std::size_t>(N - deg)];
        for (int e : j) ml -= lgam[static_cast<std::size_t>(e)];
        const double log_lambda = -0.5 * ml + base - deg * lr;
        total += detail::log_one_minus_exp_neg(2.0 * log_lambda);
        ++terms;
    };
    detail::for_each_nonzero_index(m, N, cur, 0, N, 0, visit);
    return {spec, r, total, terms};
}

/// One draw of alpha conditioned on Omega (m = 1 layout, but valid for any m).
inline SUPolynomial sample_omega_conditioned(const EnsembleSpec& spec, double r, std::uint64_t trial) {
    spec.validate();
    const auto table = index_table(spec.m, spec.N);
    std::vector<cplx> alpha(table->size());
    for (std::size_t i = 0; i < table->size(); ++i) {
        Stream s(spec.seed, trial, lanes::kCoefficientBase + static_cast<std::uint32_t>(i));
        s = s.substream(0x0E6A);
        const double u = s.uniform();
        const double angle = 2.0 * std::numbers::pi * s.uniform();
        double modulus_sq = 0.0;
        if (i == 0) {
            // |alpha_0|^2 ~ 1 + Exp(1) given |alpha_0| >= 1
            modulus_sq = 1.0 - std::log(u);
        } else {
            const double lam_sq = std::exp(2.0 * omega_log_threshold(spec.m, spec.N, r, table->at(i)));
            // inverse CDF of Exp(1) truncated to [0, lam_sq)
            modulus_sq = -std::log1p(u * std::expm1(-lam_sq));
            modulus_sq = std::min(modulus_sq, std::nextafter(lam_sq, 0.0));
        }
        alpha[i] = std::polar(std::sqrt(modulus_sq), angle);
    }
    return SUPolynomial(spec, std::move(alpha));
}

/// Fraction of Omega-conditioned draws that are holes; Omega is contained in the hole event.
inline double sanity_check_omega(const EnsembleSpec& spec, double r, std::uint64_t trials,
                                 int threads = default_threads()) {
    detail::require(spec.m == 1, "sanity_check_omega requires m == 1");
    detail::require(spec.N >= 1, "sanity_check_omega requires N >= 1");
    detail::require(trials >= 1, "need at least one trial");
    const auto ok = parallel_trials(trials, threads, [&](std::uint64_t t) -> std::uint8_t {
        return hole_indicator_m1(sample_omega_conditioned(spec, r, t), r) ? 1 : 0;
    });
    std::uint64_t holes = 0;
    for (auto h : ok) holes += h;
    return static_cast<double>(holes) / static_cast<double>(trials);
}

struct DecayPoint {
    double N = 0.0;
    double log_p = 0.0;  // natural log of the probability, strictly negative and finite

    static DecayPoint from_probability(double N, double p) {
        detail::require(p > 0.0 && p < 1.0, "decay fit requires p strictly inside (0, 1)");
        return {N, std::log(p)};
    }
};

struct DecayFit {
    std::vector<DecayPoint> points;
    double beta = 0.0;
    double log_c = 0.0;
    double residual_rms = 0.0;
};

/// Ordinary least squares of log(-log p) on log N.
inline DecayFit fit_decay_exponent(std::vector<DecayPoint> points) {
    detail::require(points.size() >= 3, "decay fit needs at least three points");
    const double n = static_cast<double>(points.size());
    std::vector<double> x, y;
    for (const auto& p : points) {
        detail::require(p.N > 0.0, "decay fit requires N > 0");
        detail::require(p.log_p < 0.0 && std::isfinite(p.log_p), "decay fit requires p strictly inside (0, 1)");
        x.push_back(std::log(p.N));
        y.push_back(std::log(-p.log_p));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    detail::require(sxx > 0.0, "decay fit needs at least two distinct N");
    DecayFit fit;
    fit.beta = sxy / sxx;
    fit.log_c = my - fit.beta * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double res = y[i] - (fit.log_c + fit.beta * x[i]);
        ss += res * res;
    }
    fit.residual_rms = std::sqrt(ss / n);
    fit.points = std::move(points);
    return fit;
}

/// Exact count with the open-disk convention; nudges r inward, then outward, off a boundary root.
inline int counting_with_retry(const SUPolynomial& psi, double r) {
    try {
        return counting_exact_m1(psi, r);
    } catch (const BoundaryAmbiguityError&) {
    }
    try {
        return counting_exact_m1(psi, r * (1.0 - kBoundaryRetryFactor));
    } catch (const BoundaryAmbiguityError&) {
    }
    return counting_exact_m1(psi, r * (1.0 + kBoundaryRetryFactor));
}

struct DeviationResult {
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    double frequency = 0.0;
};

/// Fraction of trials with |n(r) - N r^2/(1+r^2)| > Delta N (m = 1, exact counts).
inline DeviationResult deviation_experiment(const EnsembleSpec& spec, double r, double Delta,
                                            std::uint64_t trials, int threads = default_threads()) {
    spec.validate();
    detail::require(spec.m == 1, "deviation_experiment uses exact counting and requires m == 1");
    detail::require(Delta > 0.0 && Delta < 1.0, "Delta must lie in (0, 1)");
    detail::require(r > 0.0, "radius must be positive");
    detail::require(trials >= 1, "need at least one trial");
    const double center = expected_counting(spec.N, r);
    const double window = Delta * spec.N;
    const auto bad = parallel_trials(trials, threads, [&](std::uint64_t t) -> std::uint8_t {
        const int n = counting_with_retry(sample_polynomial(spec, t), r);
        return std::abs(n - center) > window ? 1 : 0;
    });
    std::uint64_t v = 0;
    for (auto b : bad) v += b;
    return {trials, v, static_cast<double>(v) / static_cast<double>(trials)};
}

/**
 * Heuristic hole indicator for any m: the Jensen counting estimate is
 * compatible with zero (value + 3 stat_error < 1/2). Not a decision procedure.
 */
inline bool jensen_hole_heuristic(const CountingEstimate& e) { return e.value + 3.0 * e.stat_error < 0.5; }

}  // namespace supoly
