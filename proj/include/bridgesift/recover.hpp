#pragma once

// The two Brownian-bridge recovery schemes and the bridged sup-error metric.
//
// Quantile scheme: increment i is n^(-1/2) * Q(R_i / (n+1)) where R is the
// rank sequence of dx. Depends on dx only through its ranks, hence is
// bit-identical under dx -> a + c*dx for any a and c > 0. The increments
// over a full path cancel by quantile antisymmetry, so the terminal value
// is zero up to accumulation error (the path sum is compensated to keep
// that claim for n up to 1e6).
//
// Randomized scheme: increment i is the R_i-th order statistic of the
// auxiliary Brownian increments, i.e. a rank-preserving re-ordering; the
// multiset of path increments equals the multiset of aux_dw exactly.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bridgesift/kahan.hpp"
#include "bridgesift/levy.hpp"
#include "bridgesift/normal.hpp"
#include "bridgesift/ranks.hpp"

namespace bridgesift {

enum class Scheme { Randomized, Quantile };

inline const char* scheme_name(Scheme s) {
    return s == Scheme::Randomized ? "randomized" : "quantile";
}

struct RecoveryOutput {
    Scheme scheme = Scheme::Quantile;
    GridPath path;             // recovered process on {k/n}
    double terminal = 0.0;     // path.values[n]
    std::size_t tie_count = 0; // ties observed in the rank sequence
    std::uint64_t rank_hash = 0;
};

inline RecoveryOutput recover_quantile(std::span<const double> dx) {
    const RankSequence rs = compute_ranks(dx);
    const std::size_t n = dx.size();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double denom = static_cast<double>(n) + 1.0;

    RecoveryOutput out;
    out.scheme = Scheme::Quantile;
    out.tie_count = rs.tie_count;
    out.rank_hash = rank_sequence_hash(rs);
    out.path.values.reserve(n + 1);
    out.path.values.push_back(0.0);
    KahanSum acc;
    for (std::size_t k = 0; k < n; ++k) {
        acc.add(quantile(static_cast<double>(rs.ranks[k]) / denom));
        out.path.values.push_back(scale * acc.value());
    }
    out.terminal = out.path.values.back();
    return out;
}

inline RecoveryOutput recover_randomized(std::span<const double> dx, std::span<const double> aux_dw) {
    if (dx.size() != aux_dw.size())
        throw std::domain_error("recover_randomized: dx and aux_dw lengths differ");
    const RankSequence rs = compute_ranks(dx);
    const std::vector<double> sorted_aux = order_statistics(aux_dw);

    RecoveryOutput out;
    out.scheme = Scheme::Randomized;
    out.tie_count = rs.tie_count;
    out.rank_hash = rank_sequence_hash(rs);
    out.path.values.reserve(dx.size() + 1);
    out.path.values.push_back(0.0);
    KahanSum acc;
    for (std::size_t k = 0; k < dx.size(); ++k) {
        acc.add(sorted_aux[rs.ranks[k] - 1]);
        out.path.values.push_back(acc.value());
    }
    out.terminal = out.path.values.back();
    return out;
}

struct BridgeError {
    double sup_error = 0.0;
    std::size_t argmax_index = 0; // grid index in [0, n]
};

// Grid maximum of |W_{i/n} - What_{i/n} - (W_1 - What_1) * i/n|: the
// deviation after removing the straight line through the endpoint gap, so
// any linear-in-k difference between the paths drops out.
inline BridgeError bridge_error(std::span<const double> true_dw, const RecoveryOutput& recovered) {
    const std::size_t n = true_dw.size();
    if (recovered.path.values.size() != n + 1)
        throw std::domain_error("bridge_error: path length does not match increment count");
    const GridPath w = partial_sums(true_dw);
    const double gap = w.values[n] - recovered.path.values[n];
    const double inv_n = 1.0 / static_cast<double>(n);

    BridgeError out;
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * inv_n;
        const double dev = std::abs(w.values[i] - recovered.path.values[i] - gap * t);
        if (dev > out.sup_error) {
            out.sup_error = dev;
            out.argmax_index = i;
        }
    }
    return out;
}

} // namespace bridgesift
