#pragma once

// Numeric verification of the explicit bounds behind the quantile recovery
// scheme:
//   - the grid-quantile L2 distance integral against its 3.73/n bound,
//   - the eta decomposition diagnostics (zero sum, n^-1 lnln n scaling),
//   - the empirical-quantile L2 distance of a sample,
//   - tail-inequality scanners (1-u <= sqrt(pi/2) phi(Q(u)), Mills gap > 0).
//
// The integrals are computed cellwise by adaptive Gauss-Kronrod quadrature.
// The first/last cells are improper (Q blows up at 0 and 1); each is
// integrated up to a 1e-13 margin and closed with the exact Gaussian-moment
// value of the remaining sliver, and the whole endpoint cell is
// cross-checked against the closed form q*phi(q) + tail(q) route.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bridgesift/kahan.hpp"
#include "bridgesift/levy.hpp"
#include "bridgesift/normal.hpp"
#include "bridgesift/quadrature.hpp"
#include "bridgesift/ranks.hpp"

namespace bridgesift {

namespace detail {

inline constexpr double kImproperMargin = 1e-13;

// int_{u: Q(u) > q} (Q(u) - c)^2 du for the upper sliver with tail mass
// tail_mass = P(Z > q): expand the square into Gaussian moments
// E[Z^2; Z > q] = q phi(q) + tail_mass and E[Z; Z > q] = phi(q).
inline double upper_sliver_analytic(double tail_mass, double c) {
    const double q = tail_quantile(tail_mass);
    const double m2 = q * phi(q) + tail_mass;
    const double m1 = phi(q);
    return std::max(0.0, m2 - 2.0 * c * m1 + c * c * tail_mass);
}

// Mirror image: int over {u < mass} near u = 0, where Q(u) < -q.
inline double lower_sliver_analytic(double mass, double c) {
    return upper_sliver_analytic(mass, -c);
}

// Exact value of int_a^b (Q(u) - c)^2 du through Gaussian moments; a = 0 and
// b = 1 are allowed (improper ends). Used as the independent cross-check for
// the endpoint cells.
inline double cell_integral_analytic(double a, double b, double c) {
    double m2 = b - a; // Phi(Q(b)) - Phi(Q(a)) contribution of E[Z^2]
    double m1 = 0.0;
    if (a > 0.0) {
        const double qa = quantile(a);
        m2 += qa * phi(qa);
        m1 += phi(qa);
    }
    if (b < 1.0) {
        const double qb = quantile(b);
        m2 -= qb * phi(qb);
        m1 -= phi(qb);
    }
    return m2 - 2.0 * c * m1 + c * c * (b - a);
}

// One cell of the step-function distance: int_a^b (Q(u) - c)^2 du with
// adaptive quadrature, improper ends closed analytically.
inline double cell_integral(double a, double b, double c, double abs_tol,
                            const char* caller) {
    double lo = a, hi = b, closed = 0.0;
    if (a == 0.0) {
        lo = kImproperMargin;
        closed += lower_sliver_analytic(kImproperMargin, c);
    }
    if (b == 1.0) {
        hi = 1.0 - kImproperMargin;
        closed += upper_sliver_analytic(kImproperMargin, c);
    }
    const auto integrand = [c](double u) {
        const double d = quantile(u) - c;
        return d * d;
    };
    const QuadratureResult qr = integrate_adaptive(integrand, lo, hi, abs_tol);
    if (!qr.converged)
        throw std::runtime_error(std::string(caller) + ": quadrature did not converge on cell [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "]");
    return qr.value + closed;
}

} // namespace detail

struct QuantileGridDistance {
    std::size_t n = 0;
    double integral = 0.0;
    double bound = 0.0; // 3.73 / n
    bool pass = false;
    // worst |quadrature - closed form| over the improper endpoint cells;
    // the two routes must agree to 1e-8
    double endpoint_cross_check = 0.0;
};

// int_0^1 (Q(u) - Q_n(u))^2 du where Q_n is the step function with value
// Q(k/(n+1)) on [(k-1)/n, k/n), checked against the 3.73/n bound.
inline QuantileGridDistance lemma1_check(std::size_t n) {
    if (n == 0) throw std::domain_error("lemma1_check: n must be positive");
    const double nd = static_cast<double>(n);
    const double cell_tol = 1e-12 / nd;
    KahanSum total;
    double cross_check = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double a = static_cast<double>(k - 1) / nd;
        const double b = (k == n) ? 1.0 : static_cast<double>(k) / nd;
        const double c = quantile(static_cast<double>(k) / (nd + 1.0));
        const double value = detail::cell_integral(a, b, c, cell_tol, "lemma1_check");
        if (a == 0.0 || b == 1.0) {
            const double analytic = detail::cell_integral_analytic(a, b, c);
            cross_check = std::max(cross_check, std::abs(value - analytic));
        }
        total.add(value);
    }
    QuantileGridDistance out;
    out.n = n;
    out.integral = total.value();
    out.bound = 3.73 / nd;
    out.pass = out.integral <= out.bound;
    out.endpoint_cross_check = cross_check;
    return out;
}

// int_0^1 (Q*_n(u) - Q(u))^2 du where Q*_n is the empirical quantile
// function of z (the step function through sorted(z)).
inline double empirical_quantile_l2(std::span<const double> z) {
    if (z.empty()) throw std::domain_error("empirical_quantile_l2: empty sample");
    const std::vector<double> sorted = order_statistics(z);
    const std::size_t n = sorted.size();
    const double nd = static_cast<double>(n);
    const double cell_tol = 1e-12 / nd;
    KahanSum total;
    for (std::size_t k = 1; k <= n; ++k) {
        const double a = static_cast<double>(k - 1) / nd;
        const double b = (k == n) ? 1.0 : static_cast<double>(k) / nd;
        total.add(detail::cell_integral(a, b, sorted[k - 1], cell_tol, "empirical_quantile_l2"));
    }
    return total.value();
}

struct EtaDiagnostics {
    std::size_t n = 0;
    double sum_eta = 0.0;
    double sum_eta_sq = 0.0;
    double normalized = 0.0; // sum_eta_sq * n / lnln n  (divisor 1 below n = 16)
};

// eta_k = dw_k - n^(-1/2) Q(R_k(dx)/(n+1)) - W_1/n: the per-increment
// residual of the quantile scheme against the true Brownian increments.
// Sums to zero by quantile antisymmetry whenever the ranks are tie-free.
inline EtaDiagnostics eta_diagnostics(const PathSample& sample) {
    const std::size_t n = sample.n;
    if (n < 3) throw std::domain_error("eta_diagnostics: n must be at least 3");
    if (sample.dx.size() != n || sample.dw.size() != n)
        throw std::domain_error("eta_diagnostics: inconsistent sample");
    const RankSequence rs = compute_ranks(sample.dx);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double mean_w = sample.w1 / static_cast<double>(n);
    const double denom = static_cast<double>(n) + 1.0;
    KahanSum sum, sum_sq;
    for (std::size_t k = 0; k < n; ++k) {
        const double eta =
            sample.dw[k] - scale * quantile(static_cast<double>(rs.ranks[k]) / denom) - mean_w;
        sum.add(eta);
        sum_sq.add(eta * eta);
    }
    EtaDiagnostics out;
    out.n = n;
    out.sum_eta = sum.value();
    out.sum_eta_sq = sum_sq.value();
    const double divisor = n < 16 ? 1.0 : std::log(std::log(static_cast<double>(n)));
    out.normalized = out.sum_eta_sq * static_cast<double>(n) / divisor;
    return out;
}

struct InequalityScan {
    std::size_t points = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0; // most positive LHS - RHS; <= 0 means all hold
};

// 1 - u <= sqrt(pi/2) phi(Q(u)) + slack on uniformly spaced u in (0.5, 1).
inline InequalityScan lemma3_scan(std::size_t points, double slack = 1e-12) {
    InequalityScan out;
    out.points = points;
    out.worst_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= points; ++i) {
        const double u = 0.5 + 0.5 * static_cast<double>(i) / (static_cast<double>(points) + 1.0);
        const double margin = (1.0 - u) - kSqrtHalfPi * phi(quantile(u)) - slack;
        out.worst_margin = std::max(out.worst_margin, margin);
        if (margin > 0.0) ++out.violations;
    }
    return out;
}

// mills_gap(q) > 0 on uniformly spaced q in (0, qmax].
inline InequalityScan mills_scan(std::size_t points, double qmax = 40.0) {
    InequalityScan out;
    out.points = points;
    out.worst_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= points; ++i) {
        const double q = qmax * static_cast<double>(i) / static_cast<double>(points);
        const double gap = mills_gap(q);
        out.worst_margin = std::max(out.worst_margin, -gap);
        if (!(gap > 0.0)) ++out.violations;
    }
    return out;
}

} // namespace bridgesift
