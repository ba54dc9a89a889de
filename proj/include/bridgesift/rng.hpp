#pragma once

// Seeded, splittable variate generation. A stream is an std::mt19937_64
// engine (bit-exact across platforms by the standard) keyed by a splitmix64
// hash of (master_seed, stream_id), so replicates can be farmed out to
// threads without any coordination and still reproduce byte-identically.
//
// Generation methods are fixed per release (they are part of the output
// contract, acceptance runs pin seeds):
//   uniforms   (x >> 11 + 1/2) * 2^-53, open interval (0, 1)
//   gaussian   inverse-CDF through quantile()
//   poisson    Knuth product-of-uniforms below mean 10, Hormann PTRS above
//   stable     Chambers-Mallows-Stuck, symmetric case
//   exponential -log(U)

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "bridgesift/normal.hpp"

namespace bridgesift {

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

// splitmix64 finalizer; the documented 64-bit mixer behind all stream keys.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t stream_key(const SeedSpec& seed) {
    return mix64(seed.master_seed + kGolden * (seed.stream_id + 1));
}

// Derived stream ids for replicate layouts, e.g. stream_hash(n, r) for the
// path at grid size n / replicate r and stream_hash(n, r, 1) for its
// auxiliary Brownian stream.
inline std::uint64_t stream_hash(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a + kGolden) ^ (b + kGolden));
}
inline std::uint64_t stream_hash(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(stream_hash(a, b) ^ (c + kGolden));
}

class Stream {
public:
    explicit Stream(const SeedSpec& seed) : engine_(stream_key(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1); never returns an endpoint.
    double uniform_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double gaussian() { return quantile(uniform_open01()); }

    double exponential() { return -std::log(uniform_open01()); }

    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0) || !std::isfinite(mean))
            throw std::domain_error("poisson: mean must be non-negative and finite");
        if (mean == 0.0) return 0;
        if (mean < 10.0) return poisson_knuth(mean);
        return poisson_ptrs(mean);
    }

    // Symmetric alpha-stable variate, scale parametrization
    // E exp(itX) = exp(-(scale*|t|)^alpha).
    double symmetric_stable(double alpha, double scale) {
        if (!(alpha > 0.0) || !(alpha < 2.0))
            throw std::domain_error("symmetric_stable: alpha must lie in (0, 2)");
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw std::domain_error("symmetric_stable: scale must be positive");
        const double theta = M_PI * (uniform_open01() - 0.5); // U(-pi/2, pi/2)
        const double w = exponential();
        const double ct = std::cos(theta);
        const double value = std::sin(alpha * theta) / std::pow(ct, 1.0 / alpha) *
                             std::pow(std::cos((1.0 - alpha) * theta) / w, (1.0 - alpha) / alpha);
        return scale * value;
    }

private:
    std::uint64_t poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = uniform_open01();
        while (p > limit) {
            ++k;
            p *= uniform_open01();
        }
        return k;
    }

    // Hormann (1993) transformed rejection with squeeze, valid for mean >= 10.
    std::uint64_t poisson_ptrs(double mean) {
        const double slam = std::sqrt(mean);
        const double llam = std::log(mean);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            const double u = uniform_open01() - 0.5;
            const double v = uniform_open01();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
                kf * llam - mean - std::lgamma(kf + 1.0)) {
                return static_cast<std::uint64_t>(kf);
            }
        }
    }

    std::mt19937_64 engine_;
};

// One-shot forms of the variate operations.
inline std::vector<double> gaussian_stream(const SeedSpec& seed, std::size_t count) {
    if (count == 0) throw std::domain_error("gaussian_stream: count must be positive");
    Stream s(seed);
    std::vector<double> out(count);
    for (double& x : out) x = s.gaussian();
    return out;
}

inline std::uint64_t poisson(const SeedSpec& seed, double mean) {
    Stream s(seed);
    return s.poisson(mean);
}

inline double symmetric_stable(const SeedSpec& seed, double alpha, double scale) {
    Stream s(seed);
    return s.symmetric_stable(alpha, scale);
}

} // namespace bridgesift
