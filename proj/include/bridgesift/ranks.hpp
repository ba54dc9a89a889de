#pragma once

// Ranks and order statistics of an increment vector. rank_k counts the
// entries <= x_k; ties are broken by original index (earlier index gets the
// smaller rank) and surfaced through tie_count, since downstream recovery
// assumes a.s.-distinct values and silent collisions must be observable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bridgesift {

struct RankSequence {
    std::vector<std::size_t> ranks; // 1-based; a permutation of {1..n}
    std::size_t tie_count = 0;      // entries that collide with an earlier entry
};

namespace detail {

inline void require_rankable(std::span<const double> x, const char* what) {
    if (x.empty()) throw std::domain_error(std::string(what) + ": empty input");
    for (double v : x)
        if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": non-finite entry");
}

} // namespace detail

// O(n log n) via argsort with index tie-break; equals the definitional
// counter sum_j 1(x_j <= x_k) on tie-free input.
inline RankSequence compute_ranks(std::span<const double> x) {
    detail::require_rankable(x, "compute_ranks");
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&x](std::size_t i, std::size_t j) {
        return x[i] < x[j] || (x[i] == x[j] && i < j);
    });
    RankSequence out;
    out.ranks.resize(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        out.ranks[order[pos]] = pos + 1;
        if (pos > 0 && x[order[pos]] == x[order[pos - 1]]) ++out.tie_count;
    }
    return out;
}

inline std::vector<double> order_statistics(std::span<const double> x) {
    detail::require_rankable(x, "order_statistics");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

// FNV-1a over the rank words; experiment logs use it to confirm that both
// schemes consumed the same rank sequence and that rank-only invariances hold.
inline std::uint64_t rank_sequence_hash(const RankSequence& rs) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (std::size_t r : rs.ranks) {
        std::uint64_t v = static_cast<std::uint64_t>(r);
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (v >> (8 * byte)) & 0xFFu;
            h *= 0x100000001B3ull;
        }
    }
    return h;
}

} // namespace bridgesift
