// SPDX-License-Identifier: Apache-2.0
//
// Closed-form lower bounds and reference curves.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "eulerlab/core.hpp"

namespace eulerlab {

/// exp(-14 |ln h|^{2/3}) for any h in (0, 1), without the (0, 1/22] range check.
inline double theorem5_rhs(double h) {
    if (!(h > 0.0 && h < 1.0)) throw DomainError("theorem5_rhs: h must lie in (0, 1)");
    return std::exp(-14.0 * std::pow(std::fabs(std::log(h)), 2.0 / 3.0));
}

/// ln of exp(-14 |ln h|^{2/3}) given ln h, usable far below double range.
inline double log_theorem5_rhs(double log_h) {
    if (!(log_h < 0.0)) throw DomainError("log_theorem5_rhs: ln h must be negative");
    return -14.0 * std::pow(-log_h, 2.0 / 3.0);
}

/// Lower bound on the weak error of the four-dimensional model, h in (0, 1/22].
inline double bound_theorem5(double h) {
    if (!(h > 0.0 && h <= 1.0 / 22.0))
        throw DomainError("bound_theorem5: h must lie in (0, 1/22]");
    return theorem5_rhs(h);
}

/// Largest admissible h: (pi/2) exp(-|max(sqrt(t) + x, 0)|^3).
inline double lemma33_h_max(double t, double x) {
    if (!(t > 0.0)) throw DomainError("lemma33: t must be positive");
    const double s = std::max(std::sqrt(t) + x, 0.0);
    return std::numbers::pi / 2.0 * std::exp(-s * s * s);
}

namespace detail {

inline double lemma33_exponent(double t, double x, double h) {
    if (!(t > 0.0) || !std::isfinite(x)) throw DomainError("lemma33: t must be positive");
    if (!(h > 0.0) || h > lemma33_h_max(t, x) * (1.0 + 1e-14))
        throw DomainError("lemma33: h outside (0, (pi/2) exp(-|max(sqrt t + x, 0)|^3)]");
    const double l = std::fabs(std::log(std::numbers::pi / (2.0 * h)));
    return std::pow(l, 2.0 / 3.0) + x * x;
}

}  // namespace detail

/// Lower bound on 1 - E[cos(h exp((x + W(t))^3))].
inline double bound_lemma33_first(double t, double x, double h) {
    return std::exp(-8.0 / t * detail::lemma33_exponent(t, x, h));
}

/*!
 * Lower bound on int_0^t E[1_{W(t) in A} (1 - cos(h e^{(x+W(s))^3}))] ds.
 * tail_factor is E[1_{W(t) in A} e^{-72 W(t)^2 / t}].
 */
inline double bound_lemma33_second(double t, double x, double h, double tail_factor) {
    if (!(tail_factor >= 0.0 && tail_factor <= 1.0))
        throw DomainError("bound_lemma33_second: tail_factor must lie in [0, 1]");
    return t / 3.0 * tail_factor * std::exp(-72.0 / t * detail::lemma33_exponent(t, x, h));
}

/// E[exp(-72 W(t)^2 / t)] = (1 + 144)^{-1/2}, the tail factor for A = R.
inline double tail_factor_full_line() { return 1.0 / std::sqrt(145.0); }

/*!
 * Reference curve of convergence order 0:
 * 1/(15 (ln N)^{1/3}) exp(-(1/2T) (ln N - (1/2T) (ln N)^{2/3})^{2/3}).
 */
inline double order0_reference(double n_steps, double horizon) {
    if (!(n_steps >= 2.0)) throw DomainError("order0_reference: N must be >= 2");
    if (!(horizon > 0.0)) throw DomainError("order0_reference: T must be positive");
    const double l = std::log(n_steps);
    const double a = 1.0 / (2.0 * horizon);
    const double inner = l - a * std::pow(l, 2.0 / 3.0);
    if (inner < 0.0) throw DomainError("order0_reference: negative inner term");
    return 1.0 / (15.0 * std::cbrt(l)) * std::exp(-a * std::pow(inner, 2.0 / 3.0));
}

/// Order-1/2 and order-1 guide lines 1/(15 sqrt N) and 1/(15 N).
inline double order_half_line(double n_steps) { return 1.0 / (15.0 * std::sqrt(n_steps)); }
inline double order_one_line(double n_steps) { return 1.0 / (15.0 * n_steps); }

}  // namespace eulerlab
