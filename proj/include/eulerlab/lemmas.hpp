// SPDX-License-Identifier: Apache-2.0
//
// Numerical verifiers for the auxiliary inequalities: signed oscillatory
// integrals, left-point integration of concave functions, and the mollifier
// left-sum overshoot.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "eulerlab/bounds.hpp"
#include "eulerlab/core.hpp"
#include "eulerlab/models.hpp"
#include "eulerlab/parallel.hpp"
#include "eulerlab/quadrature.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

using RealFn = std::function<double(double)>;

//---------------------------------------------------------------------------//
// Oscillatory integrals with a convex phase
//---------------------------------------------------------------------------//

/// phi convex and non-decreasing with e^{i phi(a)} = i; psi >= 0 non-increasing.
struct OscillatoryProblem {
    RealFn phi, dphi, d2phi;
    RealFn psi, dpsi;
};

/*!
 * Quadrature value of int_a^b cos(phi) psi, which the hypotheses force to be
 * <= 0. Hypotheses are checked on 1001 sample points.
 */
inline double check_lemma32(const OscillatoryProblem& p, double a, double b,
                            double tol = 1e-11) {
    if (!(a < b)) throw DomainError("check_lemma32: requires a < b");
    const double phase = std::remainder(p.phi(a) - std::numbers::pi / 2.0,
                                        2.0 * std::numbers::pi);
    if (std::fabs(phase) > 1e-9)
        throw PreconditionError("check_lemma32: phi(a) is not pi/2 modulo 2 pi");
    constexpr int samples = 1000;
    constexpr double slack = 1e-12;
    for (int i = 0; i <= samples; ++i) {
        const double x = a + (b - a) * i / samples;
        if (p.dphi(x) < -slack || p.d2phi(x) < -slack)
            throw PreconditionError("check_lemma32: phi must be non-decreasing and convex");
        if (p.dpsi(x) > slack || p.psi(x) < -slack)
            throw PreconditionError("check_lemma32: psi must be non-negative and non-increasing");
    }
    auto integrand = [&](double x) { return std::cos(p.phi(x)) * p.psi(x); };
    return adaptive_simpson(integrand, a, b, tol).value;
}

//---------------------------------------------------------------------------//
// Left-point integration of functions with non-increasing derivative
//---------------------------------------------------------------------------//

struct ConcaveProblem {
    RealFn psi, dpsi;
};

struct InequalitySides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/*!
 * lhs = int_0^b (psi(s) - psi(fl s)) ds with fl the floor on the h-grid,
 * rhs = (1/2)[psi'(0) h^2 + (psi(fl b - h) - psi(0)) h + psi'(fl b)(b - fl b)^2].
 */
inline InequalitySides check_lemma52(const ConcaveProblem& p, double b, double h,
                                     double tol = 1e-12) {
    if (!(b > 0.0)) throw DomainError("check_lemma52: b must be positive");
    if (!(h > 0.0 && h <= b)) throw DomainError("check_lemma52: h must lie in (0, b]");
    constexpr int samples = 1000;
    double prev = p.dpsi(0.0);
    for (int i = 1; i <= samples; ++i) {
        const double d = p.dpsi(b * i / samples);
        if (d > prev + 1e-12 * std::max(1.0, std::fabs(prev)))
            throw PreconditionError("check_lemma52: psi' must be non-increasing");
        prev = d;
    }
    const std::uint64_t n = floor_index(b, h);
    const double fb = static_cast<double>(n) * h;

    CompensatedSum stairs;
    for (std::uint64_t k = 0; k < n; ++k) stairs.add(h * p.psi(static_cast<double>(k) * h));
    stairs.add((b - fb) * p.psi(fb));
    const double integral = adaptive_simpson(p.psi, 0.0, b, tol).value;

    InequalitySides out;
    out.lhs = integral - stairs.value();
    out.rhs = 0.5 * (p.dpsi(0.0) * h * h + (p.psi(fb - h) - p.psi(0.0)) * h +
                     p.dpsi(fb) * (b - fb) * (b - fb));
    return out;
}

//---------------------------------------------------------------------------//
// Mollifier left sum
//---------------------------------------------------------------------------//

/*!
 * int_0^inf 1_[0,1)(fl s) mollifier(fl s) ds - C for h in (0, 1/8], i.e. the
 * left Riemann sum over cells starting in [0, 1) minus C. The sum is exact
 * up to compensated rounding.
 */
inline double check_lemma53(double h, double c = mollifier_integral()) {
    if (!(h > 0.0 && h <= 0.125))
        throw DomainError("check_lemma53: h must lie in (0, 1/8]");
    CompensatedSum sum;
    for (std::uint64_t k = 0;; ++k) {
        const double s = static_cast<double>(k) * h;
        if (!(s < 1.0)) break;
        sum.add(h * mollifier(s));
    }
    return sum.value() - c;
}

//---------------------------------------------------------------------------//
// Suites
//---------------------------------------------------------------------------//

struct SuiteReport {
    std::string name;
    std::uint64_t cases = 0;
    std::uint64_t violations = 0;
    double worst_margin = 0.0;  //!< most adverse (value - allowed); <= 0 when passing
    std::vector<std::string> failures;

    bool passed() const noexcept { return cases > 0 && violations == 0; }

    void record(bool ok, double margin, const std::string& detail) {
        ++cases;
        if (cases == 1 || margin > worst_margin) worst_margin = margin;
        if (!ok) {
            ++violations;
            if (failures.size() < 20) failures.push_back(detail);
        }
    }
};

/// gap in [h/20, 2h] for h = 2^-k, k in [k_min, k_max].
inline SuiteReport run_lemma53_suite(int k_min = 3, int k_max = 20,
                                     double c = mollifier_integral()) {
    SuiteReport r{"lemma53", 0, 0, 0.0, {}};
    for (int k = k_min; k <= k_max; ++k) {
        const double h = std::ldexp(1.0, -k);
        const double gap = check_lemma53(h, c);
        const bool ok = gap >= h / 20.0 && gap <= 2.0 * h;
        const double margin = std::max(h / 20.0 - gap, gap - 2.0 * h);
        std::ostringstream os;
        os.precision(17);
        os << "h=2^-" << k << " gap=" << gap << " not in [" << h / 20.0 << ", " << 2.0 * h << "]";
        r.record(ok, margin, os.str());
    }
    return r;
}

/// Random admissible instances: phi = pi/2 + c1 x + c2 x^2, psi = max(d0 - d1 x, 0).
inline SuiteReport run_lemma32_suite(std::uint64_t n_cases = 1000, SeedSpec seed = {32, 0},
                                     double threshold = 1e-9) {
    SuiteReport r{"lemma32", 0, 0, 0.0, {}};
    CounterRng rng(seed);
    for (std::uint64_t i = 0; i < n_cases; ++i) {
        const double c1 = 5.0 * rng.uniform();
        const double c2 = 5.0 * rng.uniform();
        const double d0 = 0.1 + 1.9 * rng.uniform();
        const double d1 = 2.0 * rng.uniform();
        const double b = 0.5 + 2.5 * rng.uniform();
        const double knee = d1 > 0.0 ? d0 / d1 : INFINITY;
        OscillatoryProblem p{
            [=](double x) { return std::numbers::pi / 2.0 + c1 * x + c2 * x * x; },
            [=](double x) { return c1 + 2.0 * c2 * x; },
            [=](double) { return 2.0 * c2; },
            [=](double x) { return std::max(d0 - d1 * x, 0.0); },
            [=](double x) { return x < knee ? -d1 : 0.0; }};
        const double v = check_lemma32(p, 0.0, b);
        std::ostringstream os;
        os.precision(17);
        os << "c1=" << c1 << " c2=" << c2 << " d0=" << d0 << " d1=" << d1 << " b=" << b
           << " value=" << v;
        r.record(v <= threshold, v - threshold, os.str());
    }
    return r;
}

/// Random psi = alpha s - beta s^2 + gamma sqrt(s + eps) + kappa ln(1 + s).
inline SuiteReport run_lemma52_suite(std::uint64_t n_cases = 1000, SeedSpec seed = {52, 0},
                                     double threshold = 1e-9) {
    SuiteReport r{"lemma52", 0, 0, 0.0, {}};
    CounterRng rng(seed);
    for (std::uint64_t i = 0; i < n_cases; ++i) {
        const double alpha = -2.0 + 4.0 * rng.uniform();
        const double beta = 2.0 * rng.uniform();
        const double gamma = rng.uniform();
        const double eps = 1e-3 + (1.0 - 1e-3) * rng.uniform();
        const double kappa = rng.uniform();
        const double b = 0.1 + 2.9 * rng.uniform();
        const double h = b * (1e-3 + (1.0 - 1e-3) * rng.uniform());
        ConcaveProblem p{
            [=](double s) {
                return alpha * s - beta * s * s + gamma * std::sqrt(s + eps) +
                       kappa * std::log1p(s);
            },
            [=](double s) {
                return alpha - 2.0 * beta * s + gamma / (2.0 * std::sqrt(s + eps)) +
                       kappa / (1.0 + s);
            }};
        const auto sides = check_lemma52(p, b, h);
        std::ostringstream os;
        os.precision(17);
        os << "alpha=" << alpha << " beta=" << beta << " gamma=" << gamma << " eps=" << eps
           << " kappa=" << kappa << " b=" << b << " h=" << h << " lhs=" << sides.lhs
           << " rhs=" << sides.rhs;
        const double margin = sides.lhs - sides.rhs - threshold;
        r.record(margin <= 0.0, margin, os.str());
    }
    return r;
}

/// 1 - E[cos(h exp((x + W(t))^3))] by Monte Carlo over W(t) = sqrt(t) Z.
inline McExpectation lemma33_left_side(double t, double x, double h, std::uint64_t n,
                                       SeedSpec seed, const Parallelism& par = {}) {
    const double st = std::sqrt(t);
    return gaussian_expectation_mc(
        [=](double z) { return 1.0 - oscillatory_cos(h, x + st * z); }, 2.0, n, seed, par);
}

/*!
 * Monte Carlo left side against the closed-form lower bound on the grid
 * t in {1/2, 1, 2}, x in {-1, 0, 1/2}, h = f * h_max(t, x) with
 * f in {1, 1e-2, 1e-4}. A case passes when lhs + 3 stderr >= bound.
 */
inline SuiteReport run_lemma33_suite(std::uint64_t n = 10'000'000, SeedSpec seed = {33, 0},
                                     const Parallelism& par = {}) {
    SuiteReport r{"lemma33", 0, 0, 0.0, {}};
    std::uint64_t stream = 0;
    for (double t : {0.5, 1.0, 2.0})
        for (double x : {-1.0, 0.0, 0.5})
            for (double f : {1.0, 1e-2, 1e-4}) {
                const double h = f * lemma33_h_max(t, x);
                const double bound = bound_lemma33_first(t, x, h);
                const auto lhs = lemma33_left_side(t, x, h, n, seed.with_stream(stream++), par);
                const double margin = bound - (lhs.mean + 3.0 * lhs.std_error);
                std::ostringstream os;
                os.precision(17);
                os << "t=" << t << " x=" << x << " h=" << h << " lhs=" << lhs.mean
                   << " stderr=" << lhs.std_error << " bound=" << bound;
                r.record(margin <= 0.0, margin, os.str());
            }
    return r;
}

}  // namespace eulerlab
