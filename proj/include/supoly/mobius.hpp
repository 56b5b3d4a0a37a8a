// mobius.hpp: the invariant norm and the zeta-shifted orthonormal basis.
//
// For zeta in C, the polynomials
//
//   e'_j(z) = sqrt(N choose j) ((z_1 - zeta)/s)^{j_1} ((1 + conj(zeta) z_1)/s)^{N-|j|} z_2^{j_2} ... z_m^{j_m},
//   s = sqrt(1 + |zeta|^2),
//
// are orthonormal for the same norm as the monomial basis e_j = sqrt(N choose j) z^j.
// BasisTransform materializes the unitary change of basis alpha = M alpha'.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "supoly/ensemble.hpp"
#include "supoly/errors.hpp"
#include "supoly/random.hpp"

namespace supoly {

struct MobiusParameter {
    cplx zeta{0.0, 0.0};

    MobiusParameter() = default;
    explicit MobiusParameter(cplx z) : zeta(z) {
        detail::require(std::isfinite(z.real()) && std::isfinite(z.imag()), "zeta must be finite");
    }
};

namespace detail {
inline double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}
}  // namespace detail

/// Coordinates of e'_j in the monomial orthonormal basis e_i (graded lexicographic order).
inline std::vector<cplx> expand_shifted_basis(int m, int N, MobiusParameter zeta, const MultiIndex& j) {
    detail::require(j.dimension() == m, "multi-index dimension must equal m");
    detail::require(j.degree_total() <= N, "multi-index degree |j| exceeds N");
    const auto table = index_table(m, N);
    std::vector<cplx> out(table->size(), cplx{0.0, 0.0});

    const cplx zt = zeta.zeta;
    const double az = std::abs(zt);
    const double lz = az == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(az);
    const cplx minus_phase = az == 0.0 ? cplx{-1.0, 0.0} : -zt / az;  // phase of -zeta
    const cplx conj_phase = az == 0.0 ? cplx{1.0, 0.0} : std::conj(zt) / az;
    const int p = j[0];
    const int q = N - j.degree_total();
    const double log_s = 0.5 * std::log1p(az * az);
    const double log_weight_j = table->half_log_weight(table->position(j));

    std::vector<int> target(j.entries().begin(), j.entries().end());
    for (int a = 0; a <= p + q; ++a) {
        // coefficient of z_1^a in (z_1 - zeta)^p (1 + conj(zeta) z_1)^q / s^{p+q}
        cplx coef{0.0, 0.0};
        for (int b = std::max(0, a - q); b <= std::min(a, p); ++b) {
            const int c = a - b;
            const int zeta_power = (p - b) + c;
            if (zeta_power > 0 && az == 0.0) continue;
            const double logmag = detail::log_binomial(p, b) + detail::log_binomial(q, c) +
                                  (zeta_power > 0 ? zeta_power * lz : 0.0) - (p + q) * log_s;
            coef += std::exp(logmag) * std::pow(minus_phase, p - b) * std::pow(conj_phase, c);
        }
        if (coef == cplx{0.0, 0.0}) continue;
        target[0] = a;
        const std::size_t i = table->position(target);
        out[i] = coef * std::exp(log_weight_j - table->half_log_weight(i));
    }
    return out;
}

/// e'_j(z) / (1+|z|^2)^{N/2}, evaluated from the product formula (no expansion).
inline cplx shifted_basis_value(int N, MobiusParameter zeta, const MultiIndex& j, std::span<const cplx> z) {
    detail::require(static_cast<int>(z.size()) == j.dimension(), "point dimension must equal m");
    detail::require(j.degree_total() <= N, "multi-index degree |j| exceeds N");
    const cplx zt = zeta.zeta;
    const double s = std::sqrt(1.0 + std::norm(zt));
    double nsq = 0.0;
    for (const auto& c : z) nsq += std::norm(c);
    const double scale = 1.0 / std::sqrt(1.0 + nsq);
    // every factor carries one power of 1/sqrt(1+|z|^2), N factors in total
    const cplx w1 = (z[0] - zt) / s * scale;
    const cplx w0 = (1.0 + std::conj(zt) * z[0]) / s * scale;
    cplx v = std::exp(0.5 * multinomial_log(N, j)) * std::pow(w1, j[0]) * std::pow(w0, N - j.degree_total());
    for (std::size_t k = 1; k < z.size(); ++k) v *= std::pow(z[k] * scale, j[k]);
    return v;
}

/// alpha = matrix * alpha': alternate-basis coefficients to monomial-basis coefficients.
class BasisTransform {
public:
    BasisTransform(int m, int N, MobiusParameter zeta) : m_(m), N_(N), zeta_(zeta) {
        const auto table = index_table(m, N);
        const auto D = static_cast<Eigen::Index>(table->size());
        matrix_.resize(D, D);
        for (Eigen::Index col = 0; col < D; ++col) {
            const auto v = expand_shifted_basis(m, N, zeta, table->multi_index(static_cast<std::size_t>(col)));
            for (Eigen::Index row = 0; row < D; ++row) matrix_(row, col) = v[static_cast<std::size_t>(row)];
        }
    }

    int m() const noexcept { return m_; }
    int N() const noexcept { return N_; }
    MobiusParameter zeta() const noexcept { return zeta_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    Eigen::Index side() const noexcept { return matrix_.rows(); }

    /// max |M M^H - I|
    double unitarity_error() const {
        const Eigen::MatrixXcd g = matrix_ * matrix_.adjoint() - Eigen::MatrixXcd::Identity(side(), side());
        return g.cwiseAbs().maxCoeff();
    }

private:
    int m_;
    int N_;
    MobiusParameter zeta_;
    Eigen::MatrixXcd matrix_;
};

inline std::vector<cplx> transform_coefficients(std::span<const cplx> alpha_prime, const BasisTransform& t) {
    detail::require(static_cast<Eigen::Index>(alpha_prime.size()) == t.side(),
                    "coefficient vector length must match the transform");
    Eigen::Map<const Eigen::VectorXcd> in(alpha_prime.data(), t.side());
    const Eigen::VectorXcd res = t.matrix() * in;
    return {res.data(), res.data() + res.size()};
}

/// ||f||_N: the coefficient l2 norm, since the weighted monomials are orthonormal.
inline double norm_N(const SUPolynomial& f) {
    double s = 0.0;
    for (const auto& a : f.alpha()) s += std::norm(a);
    return std::sqrt(s);
}

struct NormEstimate {
    double norm = 0.0;            // estimate of ||f||_N
    double norm_sq = 0.0;         // estimate of ||f||_N^2
    double norm_sq_stderr = 0.0;  // standard error of norm_sq
};

/**
 * Monte Carlo value of the defining integral
 *
 *   ||f||^2 = (N+m)!/(N! pi^m) int |f|^2 (1+|z|^2)^{-(N+m+1)} dm(z)
 *           = binomial(N+m, m) E[ |f(z)|^2 / (1+|z|^2)^N ],
 *
 * z drawn from the Fubini-Study density proportional to (1+|z|^2)^{-(m+1)}.
 * Under that density t = |z|^2/(1+|z|^2) is Beta(m, 1), so t = U^{1/m}.
 */
inline NormEstimate norm_N_monte_carlo(const SUPolynomial& f, std::uint64_t samples, Stream& stream) {
    detail::require(samples >= 2, "need at least two samples");
    const int m = f.m();
    const double D = static_cast<double>(f.spec().coefficient_count());
    std::vector<cplx> z(static_cast<std::size_t>(m));
    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double t = std::pow(stream.uniform(), 1.0 / m);
        const double radius = std::sqrt(t / (1.0 - t));
        stream.sphere_point(radius, z);
        const double x = std::norm(evaluate_normalized(f, z));
        const double d = x - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (x - mean);
    }
    const double var = m2 / static_cast<double>(samples - 1);
    const double nsq = D * mean;
    return {std::sqrt(nsq), nsq, D * std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace supoly
