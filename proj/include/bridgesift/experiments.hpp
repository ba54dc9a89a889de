#pragma once

// Monte Carlo sweep harness: simulate -> recover -> bridge error across a
// grid of n and a replicate count, aggregate per-n error quantiles, and fit
// the log-log convergence slope.
//
// Replicate r at grid value n draws its path from stream_hash(n, r) and the
// auxiliary Brownian stream (randomized scheme) from stream_hash(n, r, 1),
// so every replicate is reproducible in isolation and independent by
// construction. Workers pull task indices from an atomic counter and write
// into preassigned slots; aggregation is sort-then-quantile, so the result
// does not depend on the thread count or schedule.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bridgesift/levy.hpp"
#include "bridgesift/recover.hpp"
#include "bridgesift/rng.hpp"

namespace bridgesift {

struct SweepConfig {
    LevyModel model;
    std::vector<std::size_t> n_grid;
    std::size_t replicates = 1;
    std::vector<Scheme> schemes = {Scheme::Quantile};
    std::uint64_t master_seed = 0;
    unsigned threads = 0; // 0 = all hardware threads

    void validate() const {
        model.validate();
        if (n_grid.empty()) throw std::domain_error("sweep.n_grid must be non-empty");
        for (std::size_t i = 0; i < n_grid.size(); ++i) {
            if (n_grid[i] == 0) throw std::domain_error("sweep.n_grid entries must be positive");
            if (i > 0 && n_grid[i] <= n_grid[i - 1])
                throw std::domain_error("sweep.n_grid must be strictly increasing");
        }
        if (replicates == 0) throw std::domain_error("sweep.replicates must be positive");
        if (schemes.empty()) throw std::domain_error("sweep.schemes must be non-empty");
        if (schemes.size() > 2 || (schemes.size() == 2 && schemes[0] == schemes[1]))
            throw std::domain_error("sweep.schemes must list each scheme at most once");
    }
};

struct ReplicateRecord {
    Scheme scheme;
    std::size_t n = 0;
    std::size_t replicate = 0;
    double sup_error = 0.0;
    std::size_t argmax_index = 0;
};

struct PerNStats {
    std::size_t n = 0;
    double median_error = 0.0;
    double q90_error = 0.0;
};

struct RateFit {
    Scheme scheme = Scheme::Quantile;
    std::vector<PerNStats> per_n;
    std::optional<double> slope;
    std::optional<double> intercept;
    double theory_slope = 0.0;     // -1/2 + p/4 at p = max(beta* + 0.01, 0.01)
    double theory_slope_max = 0.0; // band end at p = 2
};

struct SweepResult {
    std::vector<RateFit> fits;             // one per requested scheme, in order
    std::vector<ReplicateRecord> records;  // scheme-major, then n, then replicate
    bool rank_hash_agreement = true;       // schemes consumed identical rank sequences
};

// Deterministic empirical quantile (linear interpolation between order
// statistics) of an already sorted vector.
inline double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::domain_error("sorted_quantile: empty input");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

// Ordinary least squares of ln(median_error) on ln(n). Absent when there
// are fewer than two rows or a non-positive error.
inline std::optional<std::pair<double, double>> fit_rate(std::span<const PerNStats> per_n) {
    if (per_n.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const PerNStats& row : per_n) {
        if (!(row.median_error > 0.0)) return std::nullopt;
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(row.median_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(per_n.size());
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;
    return std::make_pair(slope, intercept);
}

namespace detail {

struct TaskOutcome {
    double sup_error[2] = {0.0, 0.0}; // indexed by scheme order in config
    std::size_t argmax[2] = {0, 0};
    bool hash_agreement = true;
};

} // namespace detail

inline SweepResult run_sweep(const SweepConfig& config) {
    config.validate();
    const std::size_t n_count = config.n_grid.size();
    const std::size_t tasks = n_count * config.replicates;
    std::vector<detail::TaskOutcome> outcomes(tasks);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto worker = [&]() {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= tasks || failed.load()) break;
            const std::size_t n_idx = task / config.replicates;
            const std::size_t rep = task % config.replicates;
            const std::size_t n = config.n_grid[n_idx];
            const std::uint64_t path_stream = stream_hash(n, rep);
            try {
                const PathSample sample =
                    simulate(config.model, n, SeedSpec{config.master_seed, path_stream});
                detail::TaskOutcome& slot = outcomes[task];
                std::uint64_t hashes[2] = {0, 0};
                for (std::size_t s = 0; s < config.schemes.size(); ++s) {
                    RecoveryOutput rec;
                    if (config.schemes[s] == Scheme::Quantile) {
                        rec = recover_quantile(sample.dx);
                    } else {
                        std::vector<double> aux = gaussian_stream(
                            SeedSpec{config.master_seed, stream_hash(n, rep, 1)}, n);
                        const double root_dt = 1.0 / std::sqrt(static_cast<double>(n));
                        for (double& a : aux) a *= root_dt;
                        rec = recover_randomized(sample.dx, aux);
                    }
                    const BridgeError err = bridge_error(sample.dw, rec);
                    slot.sup_error[s] = err.sup_error;
                    slot.argmax[s] = err.argmax_index;
                    hashes[s] = rec.rank_hash;
                }
                if (config.schemes.size() == 2 && hashes[0] != hashes[1])
                    slot.hash_agreement = false;
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!failed.exchange(true)) {
                    try {
                        std::throw_with_nested(std::runtime_error(
                            "sweep replicate failed at n=" + std::to_string(n) +
                            " stream_id=" + std::to_string(path_stream)));
                    } catch (...) {
                        first_error = std::current_exception();
                    }
                }
            }
        }
    };

    unsigned thread_count = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
    if (thread_count == 0) thread_count = 1;
    thread_count = static_cast<unsigned>(
        std::min<std::size_t>(thread_count, std::max<std::size_t>(tasks, 1)));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failed.load()) std::rethrow_exception(first_error);

    SweepResult result;
    result.records.reserve(tasks * config.schemes.size());
    const double p_low = std::min(2.0, std::max(config.model.beta_star() + 0.01, 0.01));
    for (std::size_t s = 0; s < config.schemes.size(); ++s) {
        RateFit fit;
        fit.scheme = config.schemes[s];
        fit.theory_slope = -0.5 + p_low / 4.0;
        fit.theory_slope_max = -0.5 + 2.0 / 4.0;
        for (std::size_t n_idx = 0; n_idx < n_count; ++n_idx) {
            std::vector<double> errors(config.replicates);
            for (std::size_t rep = 0; rep < config.replicates; ++rep) {
                const detail::TaskOutcome& slot = outcomes[n_idx * config.replicates + rep];
                errors[rep] = slot.sup_error[s];
                result.records.push_back({config.schemes[s], config.n_grid[n_idx], rep,
                                          slot.sup_error[s], slot.argmax[s]});
            }
            std::sort(errors.begin(), errors.end());
            fit.per_n.push_back({config.n_grid[n_idx], sorted_quantile(errors, 0.5),
                                 sorted_quantile(errors, 0.9)});
        }
        if (const auto ols = fit_rate(fit.per_n)) {
            fit.slope = ols->first;
            fit.intercept = ols->second;
        }
        result.fits.push_back(std::move(fit));
    }
    for (const detail::TaskOutcome& slot : outcomes)
        if (!slot.hash_agreement) result.rank_hash_agreement = false;
    return result;
}

} // namespace bridgesift
