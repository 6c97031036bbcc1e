// SPDX-License-Identifier: Apache-2.0
//
// Deterministic 1-D quadrature and bounded-integrand Monte Carlo oracles.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "eulerlab/core.hpp"
#include "eulerlab/parallel.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::uint64_t evaluations = 0;
};

struct McExpectation {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

struct SimpsonState {
    const std::function<double(double)>& f;
    std::uint64_t evaluations = 0;
    double error = 0.0;
    bool depth_exhausted = false;
    int max_depth;
    int min_depth;

    double eval(double x) {
        ++evaluations;
        const double y = f(x);
        if (!std::isfinite(y))
            throw IntegrationError("adaptive_simpson: non-finite integrand at x=" +
                                   std::to_string(x));
        return y;
    }

    // fa, fm, fb are f at a, (a+b)/2, b; whole is the Simpson value on [a,b].
    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double diff = left + right - whole;
        if (depth >= min_depth && std::fabs(diff) <= 15.0 * tol) {
            error += std::fabs(diff) / 15.0;
            return left + right + diff / 15.0;
        }
        if (depth >= max_depth || !(m > a && b > m)) {
            depth_exhausted = true;
            error += std::fabs(diff) / 15.0;
            return left + right + diff / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace detail

/*!
 * Adaptive Simpson quadrature with Richardson extrapolation.
 *
 * Throws IntegrationError on a non-finite evaluation and ToleranceNotMet
 * (carrying the best estimate) when a panel hits max_depth before meeting
 * its share of the tolerance.
 */
inline QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                         double a, double b, double tol,
                                         int max_depth = 50, int min_depth = 4) {
    if (!(a <= b)) throw DomainError("adaptive_simpson: requires a <= b");
    if (!(tol > 0)) throw DomainError("adaptive_simpson: tol must be positive");
    if (a == b) return {0.0, 0.0, 0};
    detail::SimpsonState st{f, 0, 0.0, false, max_depth, min_depth};
    const double fa = st.eval(a);
    const double fm = st.eval(0.5 * (a + b));
    const double fb = st.eval(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double value = st.recurse(a, b, fa, fm, fb, whole, tol, 0);
    if (st.depth_exhausted)
        throw ToleranceNotMet("adaptive_simpson: recursion depth exhausted",
                              value, st.error);
    return {value, st.error, st.evaluations};
}

/// Composite Simpson rule on an even number of equal panels.
inline QuadratureResult composite_simpson(const std::function<double(double)>& f,
                                          double a, double b,
                                          std::uint64_t panels) {
    if (panels == 0 || panels % 2 != 0)
        throw DomainError("composite_simpson: panel count must be even and positive");
    if (!(a <= b)) throw DomainError("composite_simpson: requires a <= b");
    const double h = (b - a) / static_cast<double>(panels);
    CompensatedSum odd, even;
    for (std::uint64_t i = 1; i < panels; ++i) {
        const double y = f(a + static_cast<double>(i) * h);
        if (!std::isfinite(y))
            throw IntegrationError("composite_simpson: non-finite integrand");
        (i % 2 ? odd : even).add(y);
    }
    const double fa = f(a), fb = f(b);
    const double value =
        h / 3.0 * (fa + fb + 4.0 * odd.value() + 2.0 * even.value());
    return {value, 0.0, panels + 1};
}

//---------------------------------------------------------------------------//
// Monte Carlo oracles
//---------------------------------------------------------------------------//

/// Seed of sample i of an experiment keyed by base; distinct bases do not overlap.
inline SeedSpec sample_seed(SeedSpec base, std::uint64_t i) noexcept {
    auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    };
    return {mix(base.master_seed ^ mix(base.stream_id)), i};
}

namespace detail {

inline void check_bounded(double v, double bound, const char* who) {
    if (!std::isfinite(v) || std::fabs(v) > bound * (1.0 + 1e-12))
        throw IntegrationError(std::string(who) +
                               ": integrand non-finite or exceeds its bound");
}

inline McExpectation to_expectation(const RunningStats& s) {
    return {s.mean(), s.stderr_of_mean(), s.count()};
}

}  // namespace detail

/// E[g(Z)] for a standard normal Z and |g| <= bound.
inline McExpectation gaussian_expectation_mc(const std::function<double(double)>& g,
                                             double bound, std::uint64_t n,
                                             SeedSpec seed,
                                             const Parallelism& par = {}) {
    if (n < 10000) throw DomainError("gaussian_expectation_mc: n must be >= 1e4");
    if (!(bound > 0)) throw DomainError("gaussian_expectation_mc: bound must be positive");
    const CounterRng rng(sample_seed(seed, 0));
    const auto stats = reduce_chunks(
        n, par, RunningStats{}, [&](RunningStats& acc, std::uint64_t i) {
            const double v = g(rng.gaussian_at(i));
            detail::check_bounded(v, bound, "gaussian_expectation_mc");
            acc.add(v);
        });
    return detail::to_expectation(stats);
}

/// E[f(W)] over Brownian paths on grid, |f| <= bound.
inline McExpectation brownian_functional_mc(
    const std::function<double(const BrownianPath&)>& f, double bound,
    const TimeGrid& grid, std::uint64_t n, SeedSpec seed,
    const Parallelism& par = {}) {
    if (n == 0) throw DomainError("brownian_functional_mc: n must be positive");
    if (!(bound > 0)) throw DomainError("brownian_functional_mc: bound must be positive");
    const auto stats = reduce_chunks(
        n, par, RunningStats{}, [&](RunningStats& acc, std::uint64_t i) {
            const double v = f(sample_path(sample_seed(seed, i), grid));
            detail::check_bounded(v, bound, "brownian_functional_mc");
            acc.add(v);
        });
    return detail::to_expectation(stats);
}

}  // namespace eulerlab
