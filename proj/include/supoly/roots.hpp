// roots.hpp: all roots of a one-variable SU(2) polynomial.
//
// Aberth-Ehrlich simultaneous iteration on the weighted coefficients, with a
// companion-matrix eigenvalue fallback, followed by guarded Newton polishing
// against the normalized residual |psi(z)| / (1 + |z|^2)^{N/2}.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "supoly/ensemble.hpp"
#include "supoly/errors.hpp"

namespace supoly {

struct RootOptions {
    double polish_tolerance = 1e-10;  // normalized residual target
    int polish_steps = 50;
    int aberth_sweeps = 200;
    /// Leading coefficients with |c| below this fraction of max|c| are dropped.
    double deficit_threshold = 1e-300;
};

struct RootSet {
    std::vector<cplx> roots;
    std::vector<double> residuals;  // normalized residual per root
    int degree_deficit = 0;         // roots at infinity
    bool used_fallback = false;
};

namespace detail {

// p(z) and p'(z) of sum c_k z^k by Horner.
inline void horner_with_derivative(std::span<const cplx> c, cplx z, cplx& p, cplx& dp) {
    p = c.back();
    dp = 0.0;
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[k];
    }
}

// Newton correction p(z)/p'(z); evaluated on the reversed polynomial in 1/z when |z| > 1.
inline cplx newton_ratio(std::span<const cplx> c, cplx z) {
    const int n = static_cast<int>(c.size()) - 1;
    if (std::abs(z) <= 1.0) {
        cplx p, dp;
        horner_with_derivative(c, z, p, dp);
        return p / dp;
    }
    // p(z) = z^n q(w), w = 1/z, q(w) = sum c_{n-k} w^k
    // p'(z)/p(z) = n/z - w^2 q'(w)/q(w)
    const cplx w = 1.0 / z;
    cplx q = c[0];
    cplx dq = 0.0;
    for (int k = 1; k <= n; ++k) {
        dq = dq * w + q;
        q = q * w + c[static_cast<std::size_t>(k)];
    }
    const cplx logderiv = static_cast<double>(n) * w - w * w * dq / q;
    return 1.0 / logderiv;
}

// |p(z)| / (1 + |z|^2)^{N/2} for the full-degree weighted coefficients.
inline double normalized_residual(std::span<const cplx> c, int N, cplx z) {
    const double r = std::abs(z);
    if (r <= 1.0) {
        cplx p = c.back();
        for (std::size_t k = c.size() - 1; k-- > 0;) p = p * z + c[k];
        return std::abs(p) * std::exp(-0.5 * N * std::log1p(r * r));
    }
    const cplx w = 1.0 / z;
    cplx q = c[0];
    for (std::size_t k = 1; k < c.size(); ++k) q = q * w + c[k];
    // |z|^n / (1+|z|^2)^{N/2}, with n = c.size()-1 <= N
    const double n = static_cast<double>(c.size() - 1);
    return std::abs(q) * std::exp(n * std::log(r) - 0.5 * N * std::log1p(r * r));
}

inline bool aberth(std::span<const cplx> c, std::vector<cplx>& z, int max_sweeps) {
    const std::size_t n = z.size();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool converged = true;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx ratio = newton_ratio(c, z[i]);
            if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag())) return false;
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                if (k != i) s += 1.0 / (z[i] - z[k]);
            const cplx step = ratio / (1.0 - ratio * s);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
            z[i] -= step;
            if (std::abs(step) > 1e-14 * (1.0 + std::abs(z[i]))) converged = false;
        }
        if (converged) return true;
    }
    return false;
}

inline std::vector<cplx> companion_roots(std::span<const cplx> c) {
    const int n = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
    if (solver.info() != Eigen::Success) throw NumericError("companion eigenvalue solve failed");
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

}  // namespace detail

/// All finite roots of psi (m = 1); roots at infinity are reported as degree_deficit.
inline RootSet roots_m1(const SUPolynomial& psi, const RootOptions& opt = {}) {
    detail::require(psi.m() == 1, "roots_m1 requires m == 1");
    detail::require(psi.N() >= 1, "roots_m1 requires N >= 1");
    const int N = psi.N();
    const auto full = psi.weighted_coefficients();
    double cmax = 0.0;
    for (const auto& c : full) cmax = std::max(cmax, std::abs(c));
    if (!(cmax >= 1e-300)) throw DegeneratePolynomialError("all coefficients are numerically zero");

    RootSet out;
    int top = N;
    while (top > 0 && std::abs(full[static_cast<std::size_t>(top)]) <= opt.deficit_threshold * cmax) --top;
    out.degree_deficit = N - top;
    int low = 0;
    while (low < top && full[static_cast<std::size_t>(low)] == cplx{0.0, 0.0}) ++low;
    out.roots.assign(static_cast<std::size_t>(low), cplx{0.0, 0.0});

    // remaining polynomial c[low..top], nonzero constant term
    std::span<const cplx> c(full.data() + low, static_cast<std::size_t>(top - low + 1));
    const int n = top - low;
    if (n == 1) {
        out.roots.push_back(-c[0] / c[1]);
    } else if (n > 1) {
        const double radius = std::pow(std::abs(c[0]) / std::abs(c.back()), 1.0 / n);
        std::vector<cplx> z(static_cast<std::size_t>(n));
        // deterministic, slightly irregular starting phases
        for (int k = 0; k < n; ++k)
            z[static_cast<std::size_t>(k)] =
                std::polar(radius, 2.0 * std::numbers::pi * (k + 0.25) / n + 0.4);
        if (!detail::aberth(c, z, opt.aberth_sweeps)) {
            z = detail::companion_roots(c);
            out.used_fallback = true;
        }
        out.roots.insert(out.roots.end(), z.begin(), z.end());
    }

    std::span<const cplx> cfull(full.data(), static_cast<std::size_t>(top + 1));
    out.residuals.reserve(out.roots.size());
    for (auto& root : out.roots) {
        double res = detail::normalized_residual(cfull, N, root);
        for (int step = 0; step < opt.polish_steps && res > opt.polish_tolerance; ++step) {
            const cplx cand = root - detail::newton_ratio(cfull, root);
            if (!std::isfinite(cand.real()) || !std::isfinite(cand.imag())) break;
            const double cres = detail::normalized_residual(cfull, N, cand);
            if (!(cres < res)) break;
            root = cand;
            res = cres;
        }
        out.residuals.push_back(res);
    }
    return out;
}

}  // namespace supoly
