// multi_index.hpp: multi-indices j = (j_1..j_m) with |j| <= N, their
// graded-lexicographic enumeration and log multinomial weights.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "supoly/errors.hpp"

namespace supoly {

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
        for (int e : entries_) detail::require(e >= 0, "multi-index entries must be nonnegative");
    }
    MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

    /// Unit multi-index e_k in dimension m, scaled by `power`.
    static MultiIndex unit(int m, int k, int power = 1) {
        std::vector<int> e(static_cast<std::size_t>(m), 0);
        e.at(static_cast<std::size_t>(k)) = power;
        return MultiIndex(std::move(e));
    }
    static MultiIndex zero(int m) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(m), 0)); }

    int dimension() const noexcept { return static_cast<int>(entries_.size()); }
    int degree_total() const noexcept { return std::accumulate(entries_.begin(), entries_.end(), 0); }
    std::span<const int> entries() const noexcept { return entries_; }
    int operator[](std::size_t k) const { return entries_[k]; }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<int> entries_;
};

/// Natural log of N! / (j_1! ... j_m! (N-|j|)!), via lgamma.
inline double multinomial_log(int N, std::span<const int> j) {
    detail::require(N >= 0, "degree must be nonnegative");
    int total = 0;
    double acc = std::lgamma(static_cast<double>(N) + 1.0);
    for (int e : j) {
        detail::require(e >= 0, "multi-index entries must be nonnegative");
        total += e;
        acc -= std::lgamma(static_cast<double>(e) + 1.0);
    }
    detail::require(total <= N, "multi-index degree |j| exceeds N");
    acc -= std::lgamma(static_cast<double>(N - total) + 1.0);
    return acc;
}

inline double multinomial_log(int N, const MultiIndex& j) { return multinomial_log(N, j.entries()); }

/// binomial(N+m, m) as an exact integer; throws if it does not fit in 64 bits.
inline std::uint64_t coefficient_count(int m, int N) {
    detail::require(m >= 1 && N >= 0, "need m >= 1 and N >= 0");
    // C(N+k, k) = C(N+k-1, k-1) (N+k) / k; after removing gcd(c, k), k divides N+k.
    std::uint64_t c = 1;
    for (int k = 1; k <= m; ++k) {
        const std::uint64_t g = std::gcd(c, static_cast<std::uint64_t>(k));
        const std::uint64_t q = static_cast<std::uint64_t>(N + k) / (static_cast<std::uint64_t>(k) / g);
        c /= g;
        if (c > std::numeric_limits<std::uint64_t>::max() / q)
            throw DomainError("coefficient count overflows 64 bits");
        c *= q;
    }
    return c;
}

/**
 * Flat table of every multi-index with |j| <= N, in graded lexicographic order:
 * ascending |j|, then ascending lexicographic order on (j_1, ..., j_m).
 * For m = 1 the table position equals the exponent.
 *
 * Also stores half_log_weight[i] = multinomial_log(N, j_i) / 2, the log of the
 * orthonormal basis weight sqrt(N choose j).
 */
class IndexTable {
public:
    IndexTable(int m, int N) : m_(m), N_(N) {
        detail::require(m >= 1, "ambient dimension m must be >= 1");
        detail::require(N >= 0, "degree N must be >= 0");
        const auto count = coefficient_count(m, N);
        entries_.reserve(count * static_cast<std::size_t>(m));
        std::vector<int> cur(static_cast<std::size_t>(m), 0);
        for (int d = 0; d <= N; ++d) emit(cur, 0, d);
        half_log_weight_.reserve(count);
        const double lgN = std::lgamma(N + 1.0);
        for (std::size_t i = 0; i < count; ++i) {
            double acc = lgN;
            int tot = 0;
            for (int e : at(i)) {
                acc -= std::lgamma(e + 1.0);
                tot += e;
            }
            acc -= std::lgamma(N - tot + 1.0);
            half_log_weight_.push_back(0.5 * acc);
            degree_.push_back(tot);
        }
    }

    int m() const noexcept { return m_; }
    int N() const noexcept { return N_; }
    std::size_t size() const noexcept { return degree_.size(); }

    std::span<const int> at(std::size_t i) const {
        return {entries_.data() + i * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
    }
    MultiIndex multi_index(std::size_t i) const {
        auto e = at(i);
        return MultiIndex(std::vector<int>(e.begin(), e.end()));
    }
    int degree(std::size_t i) const { return degree_[i]; }
    double half_log_weight(std::size_t i) const { return half_log_weight_[i]; }
    std::span<const double> half_log_weights() const noexcept { return half_log_weight_; }

    /// Position of j in the enumeration; throws if |j| > N or the dimension differs.
    std::size_t position(std::span<const int> j) const {
        detail::require(static_cast<int>(j.size()) == m_, "multi-index dimension mismatch");
        int d = 0;
        for (int e : j) {
            detail::require(e >= 0, "multi-index entries must be nonnegative");
            d += e;
        }
        detail::require(d <= N_, "multi-index degree |j| exceeds N");
        // Offset of the degree-d block, then rank of j inside the block.
        std::size_t pos = d == 0 ? 0 : static_cast<std::size_t>(coefficient_count(m_, d - 1));
        int rem = d;
        for (int k = 0; k < m_ - 1; ++k) {
            const int parts = m_ - k - 1;
            for (int v = 0; v < j[static_cast<std::size_t>(k)]; ++v)
                pos += compositions(rem - v, parts);
            rem -= j[static_cast<std::size_t>(k)];
        }
        return pos;
    }
    std::size_t position(const MultiIndex& j) const { return position(j.entries()); }

private:
    // Number of ways to write `total` as an ordered sum of `parts` nonnegative ints.
    static std::size_t compositions(int total, int parts) {
        if (total < 0) return 0;
        if (parts == 1) return 1;
        return static_cast<std::size_t>(coefficient_count(parts - 1, total));
    }

    void emit(std::vector<int>& cur, int k, int rem) {
        if (k == m_ - 1) {
            cur[static_cast<std::size_t>(k)] = rem;
            entries_.insert(entries_.end(), cur.begin(), cur.end());
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            cur[static_cast<std::size_t>(k)] = v;
            emit(cur, k + 1, rem - v);
        }
    }

    int m_;
    int N_;
    std::vector<int> entries_;
    std::vector<int> degree_;
    std::vector<double> half_log_weight_;
};

/// Shared, immutable table for (m, N); built once per process.
inline std::shared_ptr<const IndexTable> index_table(int m, int N) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const IndexTable>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{m, N}];
    if (!slot) slot = std::make_shared<const IndexTable>(m, N);
    return slot;
}

}  // namespace supoly
