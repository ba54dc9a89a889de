#pragma once

// Model specification and exact grid-increment simulation of X = Y + sigma*W
// on {k/n}. There is no time-discretization bias: every increment is drawn
// from its exact law (Gaussian 1/n-variance for W, Poisson(rate/n) jump
// counts, stable with the self-similar scale * n^(-1/alpha)). The true W
// increments are kept alongside dx as ground truth for error measurement.
//
// Draw order per stream: the n Brownian increments first, then the jump
// draws interval by interval.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bridgesift/kahan.hpp"
#include "bridgesift/rng.hpp"

namespace bridgesift {

struct GaussianJump {
    double mean = 0.0;
    double sd = 1.0;
};

// Jump of +a with probability p, -a with probability 1 - p.
struct TwoPointJump {
    double a = 1.0;
    double p = 0.5;
};

using JumpDist = std::variant<GaussianJump, TwoPointJump>;

struct NoJumps {};

struct CompoundPoissonJumps {
    double rate = 1.0;
    JumpDist dist = GaussianJump{};
};

struct SymmetricStableJumps {
    double alpha = 1.5;
    double scale = 1.0;
};

using JumpPart = std::variant<NoJumps, CompoundPoissonJumps, SymmetricStableJumps>;

struct LevyModel {
    double sigma = 1.0;
    double drift = 0.0;
    JumpPart jumps = NoJumps{};

    // Blumenthal-Getoor index of the jump part: 0 for none/compound Poisson
    // (finite activity), alpha for the symmetric stable component.
    double beta_star() const {
        if (const auto* st = std::get_if<SymmetricStableJumps>(&jumps)) return st->alpha;
        return 0.0;
    }

    void validate() const {
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw std::domain_error("model.sigma must be positive and finite");
        if (!std::isfinite(drift)) throw std::domain_error("model.drift must be finite");
        if (const auto* cp = std::get_if<CompoundPoissonJumps>(&jumps)) {
            if (!(cp->rate > 0.0) || !std::isfinite(cp->rate))
                throw std::domain_error("model.jump.rate must be positive and finite");
            if (const auto* g = std::get_if<GaussianJump>(&cp->dist)) {
                if (!std::isfinite(g->mean)) throw std::domain_error("model.jump.mean must be finite");
                if (!(g->sd >= 0.0) || !std::isfinite(g->sd))
                    throw std::domain_error("model.jump.sd must be non-negative and finite");
            } else {
                const auto& tp = std::get<TwoPointJump>(cp->dist);
                if (!std::isfinite(tp.a)) throw std::domain_error("model.jump.a must be finite");
                if (!(tp.p >= 0.0) || !(tp.p <= 1.0))
                    throw std::domain_error("model.jump.p must lie in [0, 1]");
            }
        } else if (const auto* st = std::get_if<SymmetricStableJumps>(&jumps)) {
            if (!(st->alpha > 0.0) || !(st->alpha < 2.0))
                throw std::domain_error("model.jump.alpha must lie in (0, 2)");
            if (!(st->scale > 0.0) || !std::isfinite(st->scale))
                throw std::domain_error("model.jump.scale must be positive and finite");
        }
    }
};

struct PathSample {
    std::size_t n = 0;
    std::vector<double> dx; // increments of X on {k/n}
    std::vector<double> dw; // true increments of W (ground truth)
    double w1 = 0.0;        // W_1 = sum of dw
};

// Discrete path on the grid {k/n}; values[0] = 0, values.size() = n + 1.
struct GridPath {
    std::vector<double> values;
    std::size_t n() const { return values.empty() ? 0 : values.size() - 1; }
};

inline GridPath partial_sums(std::span<const double> increments) {
    GridPath path;
    path.values.reserve(increments.size() + 1);
    path.values.push_back(0.0);
    KahanSum acc;
    for (double v : increments) {
        if (!std::isfinite(v)) throw std::domain_error("partial_sums: non-finite entry");
        acc.add(v);
        path.values.push_back(acc.value());
    }
    return path;
}

namespace detail {

inline double draw_jump(Stream& stream, const JumpDist& dist) {
    if (const auto* g = std::get_if<GaussianJump>(&dist))
        return g->mean + g->sd * stream.gaussian();
    const auto& tp = std::get<TwoPointJump>(dist);
    return stream.uniform_open01() < tp.p ? tp.a : -tp.a;
}

} // namespace detail

inline PathSample simulate(const LevyModel& model, std::size_t n, const SeedSpec& seed) {
    model.validate();
    if (n == 0) throw std::domain_error("simulate: n must be positive");

    Stream stream(seed);
    PathSample out;
    out.n = n;
    out.dw.resize(n);
    out.dx.resize(n);

    const double root_dt = 1.0 / std::sqrt(static_cast<double>(n));
    KahanSum wsum;
    for (std::size_t k = 0; k < n; ++k) {
        out.dw[k] = root_dt * stream.gaussian();
        wsum.add(out.dw[k]);
    }
    out.w1 = wsum.value();

    const double drift_dt = model.drift / static_cast<double>(n);
    if (std::holds_alternative<NoJumps>(model.jumps)) {
        for (std::size_t k = 0; k < n; ++k)
            out.dx[k] = model.sigma * out.dw[k] + drift_dt;
    } else if (const auto* cp = std::get_if<CompoundPoissonJumps>(&model.jumps)) {
        const double mean_per_cell = cp->rate / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint64_t count = stream.poisson(mean_per_cell);
            double jump = 0.0;
            for (std::uint64_t j = 0; j < count; ++j) jump += detail::draw_jump(stream, cp->dist);
            out.dx[k] = model.sigma * out.dw[k] + drift_dt + jump;
        }
    } else {
        const auto& st = std::get<SymmetricStableJumps>(model.jumps);
        const double cell_scale = st.scale * std::pow(static_cast<double>(n), -1.0 / st.alpha);
        for (std::size_t k = 0; k < n; ++k)
            out.dx[k] = model.sigma * out.dw[k] + drift_dt + stream.symmetric_stable(st.alpha, cell_scale);
    }
    return out;
}

} // namespace bridgesift
