// ensemble.hpp: the Gaussian SU(m+1) polynomial ensemble
//
//   psi(z) = sum_{|j| <= N} alpha_j sqrt(N choose j) z^j,
//
// alpha_j i.i.d. standard complex Gaussian (E|alpha_j|^2 = 1), together with
// overflow-free evaluation of the projectively normalized value
// psi(z) / (1 + |z|^2)^{N/2}.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "supoly/errors.hpp"
#include "supoly/multi_index.hpp"
#include "supoly/random.hpp"

namespace supoly {

using cplx = std::complex<double>;

struct EnsembleSpec {
    int m = 1;
    int N = 0;
    std::uint64_t seed = 0;

    void validate() const {
        detail::require(m >= 1, "EnsembleSpec: m must be >= 1");
        detail::require(N >= 0, "EnsembleSpec: N must be >= 0");
    }
    std::uint64_t coefficient_count() const { return supoly::coefficient_count(m, N); }
};

/// A point z in C^m.
class ComplexPoint {
public:
    ComplexPoint() = default;
    explicit ComplexPoint(std::vector<cplx> coords) : coords_(std::move(coords)) {}
    ComplexPoint(std::initializer_list<cplx> coords) : coords_(coords) {}

    std::span<const cplx> coords() const noexcept { return coords_; }
    int dimension() const noexcept { return static_cast<int>(coords_.size()); }
    double norm_sq() const noexcept {
        double s = 0.0;
        for (const auto& c : coords_) s += std::norm(c);
        return s;
    }
    const cplx& operator[](std::size_t k) const { return coords_[k]; }

private:
    std::vector<cplx> coords_;
};

/// Value of the normalized polynomial as mantissa * exp(log_scale).
struct ScaledValue {
    double log_scale = 0.0;
    cplx mantissa{0.0, 0.0};

    cplx value() const { return mantissa * std::exp(log_scale); }
    double log_abs() const {
        const double a = std::abs(mantissa);
        return a == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(a) + log_scale;
    }
};

class SUPolynomial {
public:
    SUPolynomial(EnsembleSpec spec, std::vector<cplx> alpha)
        : spec_(spec), table_(index_table(spec.m, spec.N)), alpha_(std::move(alpha)) {
        spec_.validate();
        detail::require(alpha_.size() == table_->size(),
                        "coefficient vector length must equal binomial(N+m, m)");
        for (const auto& a : alpha_)
            detail::require(std::isfinite(a.real()) && std::isfinite(a.imag()), "non-finite coefficient");
    }

    /// value * sqrt(N choose j) z^j, every other coefficient zero.
    static SUPolynomial monomial(int m, int N, const MultiIndex& j, cplx value = 1.0) {
        const auto table = index_table(m, N);
        std::vector<cplx> alpha(table->size(), cplx{0.0, 0.0});
        alpha.at(table->position(j)) = value;
        return SUPolynomial({m, N, 0}, std::move(alpha));
    }

    const EnsembleSpec& spec() const noexcept { return spec_; }
    int m() const noexcept { return spec_.m; }
    int N() const noexcept { return spec_.N; }
    const IndexTable& table() const noexcept { return *table_; }
    std::span<const cplx> alpha() const noexcept { return alpha_; }
    cplx alpha(const MultiIndex& j) const { return alpha_[table_->position(j)]; }

    /// c_j = alpha_j * sqrt(N choose j), the ordinary monomial coefficients.
    std::vector<cplx> weighted_coefficients() const {
        std::vector<cplx> c(alpha_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = alpha_[i] * std::exp(table_->half_log_weight(i));
        return c;
    }

private:
    EnsembleSpec spec_;
    std::shared_ptr<const IndexTable> table_;
    std::vector<cplx> alpha_;
};

/// Draws alpha_j from the stream keyed by (spec.seed, trial, lane = coefficient position).
inline SUPolynomial sample_polynomial(const EnsembleSpec& spec, std::uint64_t trial) {
    spec.validate();
    const auto count = spec.coefficient_count();
    std::vector<cplx> alpha(count);
    for (std::size_t i = 0; i < count; ++i) {
        Stream s(spec.seed, trial, lanes::kCoefficientBase + static_cast<std::uint32_t>(i));
        alpha[i] = s.complex_gaussian();
    }
    return SUPolynomial(spec, std::move(alpha));
}

namespace detail {

// m = 1: term magnitudes follow the ratio
//   |t_j| / |t_{j-1}| = sqrt((N - j + 1) / j) * |z|,
// so they are generated by multiplication outward from the (near) maximal term.
inline ScaledValue scaled_sum_m1(const SUPolynomial& psi, cplx z) {
    const int N = psi.N();
    const auto alpha = psi.alpha();
    const double r = std::abs(z);
    if (r == 0.0) return {0.0, alpha[0]};
    const double lr = std::log(r);
    const double log_norm = -0.5 * N * std::log1p(r * r);
    const double r2 = r * r;
    int jref = static_cast<int>(std::floor((N + 1) * r2 / (1.0 + r2)));
    jref = std::clamp(jref, 0, N);
    const cplx ph = z / r;

    // phase^jref by repeated squaring keeps the error at O(log N) roundings
    cplx ph_ref{1.0, 0.0};
    {
        cplx base = ph;
        for (int e = jref; e > 0; e >>= 1) {
            if (e & 1) ph_ref *= base;
            base *= base;
        }
    }
    cplx sum = alpha[static_cast<std::size_t>(jref)] * ph_ref;
    double mag = 1.0;
    cplx phase = ph_ref;
    for (int j = jref + 1; j <= N; ++j) {
        mag *= std::sqrt(static_cast<double>(N - j + 1) / j) * r;
        phase *= ph;
        if (mag == 0.0) break;
        sum += alpha[static_cast<std::size_t>(j)] * (mag * phase);
    }
    mag = 1.0;
    const cplx ph_conj = std::conj(ph);
    phase = ph_ref;
    for (int j = jref; j >= 1; --j) {
        mag /= std::sqrt(static_cast<double>(N - j + 1) / j) * r;
        phase *= ph_conj;
        if (mag == 0.0) break;
        sum += alpha[static_cast<std::size_t>(j - 1)] * (mag * phase);
    }
    const double log_ref = psi.table().half_log_weight(static_cast<std::size_t>(jref)) + jref * lr + log_norm;
    return {log_ref, sum};
}

// General m: log-sum-exp over terms after factoring out the largest term magnitude.
inline ScaledValue scaled_sum_general(const SUPolynomial& psi, std::span<const cplx> z) {
    const int m = psi.m();
    const int N = psi.N();
    const auto& table = psi.table();
    const auto alpha = psi.alpha();
    double nsq = 0.0;
    for (const auto& c : z) nsq += std::norm(c);
    const double log_norm = -0.5 * N * std::log1p(nsq);

    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<double> lz(static_cast<std::size_t>(m));
    std::vector<cplx> phase_pow(static_cast<std::size_t>(m) * static_cast<std::size_t>(N + 1));
    for (int k = 0; k < m; ++k) {
        const double a = std::abs(z[static_cast<std::size_t>(k)]);
        lz[static_cast<std::size_t>(k)] = a == 0.0 ? kNegInf : std::log(a);
        const cplx ph = a == 0.0 ? cplx{1.0, 0.0} : z[static_cast<std::size_t>(k)] / a;
        cplx* row = phase_pow.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(N + 1);
        row[0] = 1.0;
        for (int e = 1; e <= N; ++e) row[e] = row[e - 1] * ph;
    }

    std::vector<double> logt(table.size());
    double top = kNegInf;
    for (std::size_t i = 0; i < table.size(); ++i) {
        double t = table.half_log_weight(i);
        const auto j = table.at(i);
        for (int k = 0; k < m; ++k) {
            const int e = j[static_cast<std::size_t>(k)];
            if (e == 0) continue;
            t += e * lz[static_cast<std::size_t>(k)];
        }
        logt[i] = t;
        if (alpha[i] != cplx{0.0, 0.0}) top = std::max(top, t);
    }
    if (top == kNegInf) return {0.0, cplx{0.0, 0.0}};

    cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (logt[i] == kNegInf || alpha[i] == cplx{0.0, 0.0}) continue;
        cplx ph{1.0, 0.0};
        const auto j = table.at(i);
        for (int k = 0; k < m; ++k)
            ph *= phase_pow[static_cast<std::size_t>(k) * static_cast<std::size_t>(N + 1) +
                            static_cast<std::size_t>(j[static_cast<std::size_t>(k)])];
        sum += alpha[i] * (std::exp(logt[i] - top) * ph);
    }
    return {top + log_norm, sum};
}

}  // namespace detail

/// psi(z) / (1 + |z|^2)^{N/2} in scaled form (never overflows).
inline ScaledValue evaluate_scaled(const SUPolynomial& psi, std::span<const cplx> z) {
    detail::require(static_cast<int>(z.size()) == psi.m(), "point dimension must equal m");
    if (psi.m() == 1) return detail::scaled_sum_m1(psi, z[0]);
    return detail::scaled_sum_general(psi, z);
}

inline cplx evaluate_normalized(const SUPolynomial& psi, std::span<const cplx> z) {
    return evaluate_scaled(psi, z).value();
}
inline cplx evaluate_normalized(const SUPolynomial& psi, const ComplexPoint& z) {
    return evaluate_normalized(psi, z.coords());
}

/// log|psi(z)|; -infinity at an exact zero.
inline double log_abs(const SUPolynomial& psi, std::span<const cplx> z) {
    double nsq = 0.0;
    for (const auto& c : z) nsq += std::norm(c);
    return evaluate_scaled(psi, z).log_abs() + 0.5 * psi.N() * std::log1p(nsq);
}
inline double log_abs(const SUPolynomial& psi, const ComplexPoint& z) { return log_abs(psi, z.coords()); }

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Coefficient dump: header `m N seed`, then `j_1 ... j_m re(alpha) im(alpha)` per line.
inline void write_coefficients(std::ostream& os, const SUPolynomial& psi) {
    os << psi.m() << ' ' << psi.N() << ' ' << psi.spec().seed << '\n';
    const auto& table = psi.table();
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (int e : table.at(i)) os << e << ' ';
        os << format_g17(psi.alpha()[i].real()) << ' ' << format_g17(psi.alpha()[i].imag()) << '\n';
    }
}

}  // namespace supoly
