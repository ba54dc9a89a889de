#pragma once

// Standard normal distribution function Phi, density phi, upper tail,
// and the quantile function Q = Phi^{-1}.
//
// Accuracy contracts:
//   phi       relative error <= 1e-14
//   cdf       absolute error <= 1e-15, cdf(-x) = 1 - cdf(x) to 1 ulp
//   quantile  |cdf(quantile(u)) - u| <= 1e-12 on [1e-10, 1 - 1e-10]
//
// quantile(u) and quantile(1-u) cancel bit-exactly: both sides of a
// complement pair are evaluated through the same tail representative
// (the complement c = 1 - v is exact for v in [1/2, 1], so the pair
// (u, fl(1-u)) maps to a single tail_quantile(c) call).

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bridgesift {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
inline constexpr double kSqrtHalfPi = 1.2533141373155002512078826424055226;

namespace detail {

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite argument");
}

} // namespace detail

// Density of the standard normal law. x^2 is formed in split precision so
// the relative error stays ~ulp even for large |x| (a bare x*x loses
// 0.5*x^2*eps through the exponent).
inline double phi(double x) {
    detail::require_finite(x, "phi");
    if (std::abs(x) > 40.0) return kInvSqrt2Pi * std::exp(-0.5 * x * x); // underflows to 0
    constexpr double split = 134217729.0; // 2^27 + 1
    const double t = x * split;
    const double xh = t - (t - x);
    const double xl = x - xh;
    return kInvSqrt2Pi * std::exp(-0.5 * xh * xh) * std::exp(-0.5 * xl * (x + xh));
}

// Upper tail P(Z > x). Well-scaled for large x (no cancellation), underflows
// to 0 beyond x ~ 38.5 like the tail itself.
inline double gaussian_tail(double x) {
    detail::require_finite(x, "gaussian_tail");
    return 0.5 * std::erfc(x * M_SQRT1_2);
}

// Distribution function P(Z <= x). Evaluated through the tail on the side
// that avoids cancellation; the reflection keeps cdf(-x) and 1 - cdf(x)
// within one ulp of each other.
inline double cdf(double x) {
    detail::require_finite(x, "cdf");
    if (x <= 0.0) return gaussian_tail(-x);
    return 1.0 - gaussian_tail(x);
}

namespace detail {

// Wichura's PPND16 rational approximations (central / intermediate / far
// branches), restated for the upper-tail parametrization: given the tail
// mass c in (0, 1/2], return x0 ~ Q(1 - c) >= 0 with ~1e-15 accuracy.
inline double tail_quantile_initial(double c) {
    if (c >= 0.075) {
        // central: |q| <= 0.425 with q = 1/2 - c
        const double q = 0.5 - c;
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }
    double r = std::sqrt(-std::log(c));
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
        return num / den;
    }
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    return num / den;
}

} // namespace detail

// Upper-tail quantile: the x >= 0 with P(Z > x) = c, for tail mass
// c in (0, 1/2]. One Halley step against gaussian_tail on top of the
// rational initial approximation.
inline double tail_quantile(double c) {
    if (!(c > 0.0) || !(c <= 0.5) || !std::isfinite(c))
        throw std::domain_error("tail_quantile: tail mass must lie in (0, 1/2]");
    if (c == 0.5) return 0.0;
    double x = detail::tail_quantile_initial(c);
    // Beyond ~37.5 the tail underflows and the initial approximation is
    // already at full precision; refine only where phi and the tail are
    // well-scaled.
    if (x < 37.0) {
        const double d = phi(x);
        const double e = gaussian_tail(x) - c;
        x += (e / d) / (1.0 - 0.5 * x * e / d);
    }
    return x;
}

// Quantile function Q(u) = Phi^{-1}(u), u in (0, 1).
inline double quantile(double u) {
    if (!(u > 0.0) || !(u < 1.0))
        throw std::domain_error("quantile: argument must lie in the open interval (0, 1)");
    if (u == 0.5) return 0.0;
    if (u > 0.5) return tail_quantile(1.0 - u); // exact complement (Sterbenz)
    const double v = 1.0 - u;
    if (v == 1.0) return -tail_quantile(u); // u below ~2^-54, complement saturates
    return -tail_quantile(1.0 - v);
}

// phi(q)/q - P(Z > q), the slack in the Mills-ratio inequality. Strictly
// positive for every q > 0. Evaluated in factored form phi(q) * g(q) so the
// sign survives even where the two terms nearly cancel; past q ~ 38.5 the
// true value drops below the smallest subnormal, and the result saturates
// at denorm_min instead of collapsing to an (incorrect) zero.
inline double mills_gap(double q) {
    if (!(q > 0.0) || !std::isfinite(q))
        throw std::domain_error("mills_gap: argument must be positive and finite");
    if (q < 1.0) return phi(q) / q - gaussian_tail(q);

    // mills ratio Phibar(q)/phi(q) = sqrt(pi/2) * erfcx(q / sqrt(2))
    const double s = q * M_SQRT1_2;
    double erfcx;
    if (s < 25.0) {
        erfcx = std::exp(s * s) * std::erfc(s);
    } else {
        // asymptotic series 1/(s sqrt(pi)) * (1 - 1/(2s^2) + 3/(2s^2)^2 - ...)
        const double inv2s2 = 1.0 / (2.0 * s * s);
        double term = 1.0, series = 1.0;
        for (int k = 1; k <= 10; ++k) {
            term *= -(2.0 * k - 1.0) * inv2s2;
            series += term;
            if (std::abs(term) < 1e-18) break;
        }
        erfcx = series / (s * std::sqrt(M_PI));
    }
    const double g = 1.0 / q - kSqrtHalfPi * erfcx; // positive, ~ q^-3
    const double gap = phi(q) * g;
    if (gap == 0.0 && g > 0.0) return std::numeric_limits<double>::denorm_min();
    return gap;
}

} // namespace bridgesift
