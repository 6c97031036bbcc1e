// SPDX-License-Identifier: Apache-2.0
//
// SDE models with smooth coefficients whose Kolmogorov semigroups lose
// regularity, together with their exact or semi-exact solution maps.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eulerlab/core.hpp"
#include "eulerlab/quadrature.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

//---------------------------------------------------------------------------//
// Special functions
//---------------------------------------------------------------------------//

/// exp(-1/(1-x^2)) on (-1, 1), zero elsewhere (including at +-1).
inline double mollifier(double x) noexcept {
    if (!(x > -1.0 && x < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

/// exp(-1/(x^2-1)) for x > 1, zero elsewhere.
inline double outer_bump(double x) noexcept {
    if (!(x > 1.0)) return 0.0;
    return std::exp(-1.0 / (x * x - 1.0));
}

/*!
 * cos(a * exp(y^3)).
 *
 * Exactly 1 when a == 0. The exponent is clamped at 700 so the phase stays
 * finite; past ~1e16 rad a double phase carries no information anyway.
 */
inline double oscillatory_cos(double a, double y) noexcept {
    if (a == 0.0) return 1.0;
    return std::cos(a * std::exp(std::min(y * y * y, 700.0)));
}

/// Tolerance used for every pinned quadrature constant.
inline constexpr double constant_tolerance = 1e-12;

/// Integral of the mollifier over [0, 1] (adaptive Simpson, tol 1e-12).
inline double mollifier_integral() {
    static const double value =
        adaptive_simpson(mollifier, 0.0, 1.0, constant_tolerance).value;
    return value;
}

/// Integral of outer_bump over [1, t].
inline double outer_bump_integral(double t) {
    if (t <= 1.0) return 0.0;
    return adaptive_simpson(outer_bump, 1.0, t, constant_tolerance).value;
}

/// Integral of the mollifier over [0, t].
inline double mollifier_integral_to(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return mollifier_integral();
    return adaptive_simpson(mollifier, 0.0, t, constant_tolerance).value;
}

//---------------------------------------------------------------------------//
// SdeModel
//---------------------------------------------------------------------------//

/// How much of the driving path an exact solver reads.
enum class PathUse {
    terminal_only,  //!< only W(t); a single-cell path on [0, t] suffices
    full_path,      //!< the whole path on the caller's grid
};

/// out = mu(x), both of length d.
using DriftFn = std::function<void(std::span<const double>, std::span<double>)>;
/// out = sigma(x), row-major d x m.
using DiffusionFn = std::function<void(std::span<const double>, std::span<double>)>;
/// X^{x0}(t) given one path per noise component.
using ExactSolverFn = std::function<StateVector(
    std::span<const BrownianPath>, const StateVector&, double)>;

struct SdeModel {
    std::string name;
    std::size_t dim = 0;
    std::size_t noise_dim = 0;
    DriftFn drift;
    DiffusionFn diffusion;
    /// sigma does not depend on the state.
    bool additive_noise = false;
    /// Noise columns that are not identically zero; others need no path.
    std::vector<bool> active_noise;
    std::optional<ExactSolverFn> exact_solver;
    PathUse exact_path_use = PathUse::full_path;
    bool taming_required = false;

    StateVector drift_at(const StateVector& x) const {
        check_dim(x);
        StateVector out(dim);
        drift(x.span(), out.span());
        return out;
    }

    std::vector<double> diffusion_at(const StateVector& x) const {
        check_dim(x);
        std::vector<double> out(dim * noise_dim, 0.0);
        diffusion(x.span(), out);
        return out;
    }

    StateVector exact(std::span<const BrownianPath> paths, const StateVector& x0,
                      double t) const {
        if (!exact_solver)
            throw UnsupportedModel("model '" + name + "' has no exact solver");
        check_dim(x0);
        if (paths.size() != noise_dim)
            throw DomainError("exact solver: one path per noise component required");
        return (*exact_solver)(paths, x0, t);
    }

    void check_dim(const StateVector& x) const {
        if (x.size() != dim)
            throw DomainError("model '" + name + "': state has dimension " +
                              std::to_string(x.size()) + ", expected " +
                              std::to_string(dim));
    }
};

namespace detail {

inline DiffusionFn constant_diffusion(std::vector<double> matrix) {
    return [matrix = std::move(matrix)](std::span<const double>,
                                        std::span<double> out) {
        std::copy(matrix.begin(), matrix.end(), out.begin());
    };
}

inline std::vector<bool> nonzero_columns(const std::vector<double>& matrix,
                                         std::size_t d, std::size_t m) {
    std::vector<bool> active(m, false);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (matrix[i * m + j] != 0.0) active[j] = true;
    return active;
}

/// Thread-safe memo for deterministic t -> value maps.
class TimeMemo {
  public:
    template <class F>
    std::vector<double> get(double t, F&& compute) {
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(t); it != cache_.end()) return it->second;
        }
        auto v = compute(t);
        std::lock_guard lock(mutex_);
        return cache_.emplace(t, std::move(v)).first->second;
    }

  private:
    std::mutex mutex_;
    std::map<double, std::vector<double>> cache_;
};

}  // namespace detail

//---------------------------------------------------------------------------//
// Multiplicative-noise model with a circle-preserving drift
//---------------------------------------------------------------------------//

/*!
 * dX1 = X1 X2 dt,  dX2 = -X1^2 dt + X2 dW.
 *
 * <x, mu(x)> = 0 everywhere. X1(t) = x1 exp(int_0^t X2(s) ds), so the line
 * x1 = 0 is invariant. The drift is superlinear; use the tamed scheme.
 */
inline SdeModel model_bsp1() {
    SdeModel m;
    m.name = "bsp1";
    m.dim = 2;
    m.noise_dim = 1;
    m.drift = [](std::span<const double> x, std::span<double> out) {
        out[0] = x[0] * x[1];
        out[1] = -x[0] * x[0];
    };
    m.diffusion = [](std::span<const double> x, std::span<double> out) {
        out[0] = 0.0;
        out[1] = x[1];
    };
    m.additive_noise = false;
    m.active_noise = {true};
    m.taming_required = true;
    return m;
}

//---------------------------------------------------------------------------//
// Degenerate additive noise with an oscillating drift
//---------------------------------------------------------------------------//

/*!
 * dX1 = cos(X3 exp(X2^3)) dt,  dX2 = sqrt(2) dW,  dX3 = 0.
 *
 * The exact solver integrates cos(x3 exp((x2 + sqrt(2) W(s))^3)) over the
 * supplied path with the trapezoid rule; t must be a point of the path grid.
 */
inline SdeModel model_ex2b() {
    SdeModel m;
    m.name = "ex2b";
    m.dim = 3;
    m.noise_dim = 1;
    m.drift = [](std::span<const double> x, std::span<double> out) {
        out[0] = oscillatory_cos(x[2], x[1]);
        out[1] = 0.0;
        out[2] = 0.0;
    };
    const std::vector<double> b{0.0, std::numbers::sqrt2, 0.0};
    m.diffusion = detail::constant_diffusion(b);
    m.additive_noise = true;
    m.active_noise = {true};
    m.exact_path_use = PathUse::full_path;
    m.exact_solver = [](std::span<const BrownianPath> paths, const StateVector& x0,
                        double t) {
        const BrownianPath& w = paths[0];
        if (t < 0.0 || t > w.grid().horizon())
            throw DomainError("ex2b exact solver: t outside the path horizon");
        const auto n = floor_index(t, w.grid().step());
        if (w.grid().time(n) != t)
            throw DomainError("ex2b exact solver: t must be a path grid point");
        const double h = w.grid().step();
        auto integrand = [&](std::uint64_t i) {
            return oscillatory_cos(x0[2], x0[1] + std::numbers::sqrt2 * w[i]);
        };
        double x1;
        if (x0[2] == 0.0) {
            x1 = x0[0] + t;
        } else {
            CompensatedSum sum;
            for (std::uint64_t i = 1; i < n; ++i) sum.add(integrand(i));
            const double ends = n > 0 ? 0.5 * (integrand(0) + integrand(n)) : 0.0;
            x1 = x0[0] + h * (sum.value() + ends);
        }
        return StateVector{x1, x0[1] + std::numbers::sqrt2 * w[n], x0[2]};
    };
    return m;
}

//---------------------------------------------------------------------------//
// Series drift
//---------------------------------------------------------------------------//

/*!
 * Truncation of the double series sum_n sum_{m in Z_n} 4^{-(n+|m|)}
 * cos((x3 - m/2^n) exp(x2^3)), where Z_0 = Z and Z_n are the odd integers
 * for n >= 1. tail_bound is the closed-form weight mass left out.
 */
struct SeriesDriftSpec {
    int n_max = 20;
    int m_max = 20;
    double tail_bound = 0.0;

    static SeriesDriftSpec make(int n_max = 20, int m_max = 20) {
        if (n_max < 0 || m_max < 0)
            throw DomainError("SeriesDriftSpec: truncation limits must be >= 0");
        return {n_max, m_max, tail_mass(n_max, m_max)};
    }

    /// Weight of term (n, m).
    static double weight(int n, int m) noexcept {
        return std::ldexp(1.0, -2 * (n + std::abs(m)));
    }

    /// Sum of all weights; equals 83/45.
    static constexpr double total_mass() noexcept { return 83.0 / 45.0; }

    static double tail_mass(int n_max, int m_max) noexcept {
        // n = 0 row: |m| > m_max over all integers.
        const double row0 = 2.0 / 3.0 * std::ldexp(1.0, -2 * m_max);
        // rows 1..n_max: odd |m| > m_max.
        const int first_odd = m_max % 2 == 0 ? m_max + 1 : m_max + 2;
        const double odd_tail = 16.0 / 15.0 * std::ldexp(1.0, -2 * first_odd);
        const double rows = (1.0 - std::ldexp(1.0, -2 * n_max)) / 3.0;
        const double middle = rows * 2.0 * odd_tail;
        // rows n > n_max, every odd m.
        const double deep = std::ldexp(1.0, -2 * n_max) / 3.0 * (8.0 / 15.0);
        return row0 + middle + deep;
    }

    /// Truncated first drift component at (x2, x3).
    double evaluate(double x2, double x3) const noexcept {
        const double amp = std::exp(std::min(x2 * x2 * x2, 700.0));
        double sum = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            const double shift = std::ldexp(1.0, -n);
            for (int m = -m_max; m <= m_max; ++m) {
                if (n > 0 && m % 2 == 0) continue;
                sum += weight(n, m) * std::cos((x3 - m * shift) * amp);
            }
        }
        return sum;
    }
};

/// dX = mu(X) dt + (0, 1, 0)^T dW with mu = (series, 0, 0).
inline SdeModel model_series3(SeriesDriftSpec spec = SeriesDriftSpec::make()) {
    SdeModel m;
    m.name = "series3";
    m.dim = 3;
    m.noise_dim = 1;
    m.drift = [spec](std::span<const double> x, std::span<double> out) {
        out[0] = spec.evaluate(x[1], x[2]);
        out[1] = 0.0;
        out[2] = 0.0;
    };
    m.diffusion = detail::constant_diffusion({0.0, 1.0, 0.0});
    m.additive_noise = true;
    m.active_noise = {true};
    return m;
}

//---------------------------------------------------------------------------//
// Four-dimensional model without a convergence rate for Euler's method
//---------------------------------------------------------------------------//

/// Drift of the four-dimensional model; shared with the closed-form Y1 evaluator.
inline void ex3_drift(std::span<const double> x, std::span<double> out,
                      double c) noexcept {
    out[0] = x[3] > 1.0 ? outer_bump(x[3]) * oscillatory_cos(x[2] - c, x[1]) : 0.0;
    out[1] = 0.0;
    out[2] = mollifier(x[3]);
    out[3] = 1.0;
}

/*!
 * mu(x) = (1_{x4>1} e^{-1/(x4^2-1)} cos((x3 - C) e^{x2^3}), 0, mollifier(x4), 1)
 * with C the mollifier integral over [0, 1], and B = e2 e2^T.
 *
 * The exact solver handles X(0) = 0: X4 = t, X3 = int_0^t mollifier,
 * X2 = W2(t) and X1 = int_1^t e^{-1/(s^2-1)} ds, because the cosine
 * argument vanishes once X3 reaches C.
 */
inline SdeModel model_ex3() {
    SdeModel m;
    m.name = "ex3";
    m.dim = 4;
    m.noise_dim = 4;
    const double c = mollifier_integral();
    m.drift = [c](std::span<const double> x, std::span<double> out) {
        ex3_drift(x, out, c);
    };
    std::vector<double> b(16, 0.0);
    b[1 * 4 + 1] = 1.0;
    m.active_noise = detail::nonzero_columns(b, 4, 4);
    m.diffusion = detail::constant_diffusion(std::move(b));
    m.additive_noise = true;
    m.exact_path_use = PathUse::terminal_only;
    auto memo = std::make_shared<detail::TimeMemo>();
    m.exact_solver = [memo](std::span<const BrownianPath> paths,
                            const StateVector& x0, double t) {
        for (double v : x0)
            if (v != 0.0)
                throw DomainError("ex3 exact solver: only X(0) = 0 is supported");
        if (t < 0.0) throw DomainError("ex3 exact solver: t must be >= 0");
        const auto det = memo->get(t, [](double s) {
            return std::vector<double>{outer_bump_integral(s),
                                       mollifier_integral_to(s)};
        });
        return StateVector{det[0], paths[1].at_time(t), det[1], t};
    };
    return m;
}

//---------------------------------------------------------------------------//
// Drift-free reference model
//---------------------------------------------------------------------------//

/// dX = B dW with a fixed full-rank 2x2 B; Euler reproduces it exactly.
inline SdeModel model_additive() {
    SdeModel m;
    m.name = "additive";
    m.dim = 2;
    m.noise_dim = 2;
    m.drift = [](std::span<const double>, std::span<double> out) {
        out[0] = 0.0;
        out[1] = 0.0;
    };
    const std::vector<double> b{1.0, 0.5, -0.25, 2.0};
    m.diffusion = detail::constant_diffusion(b);
    m.additive_noise = true;
    m.active_noise = {true, true};
    m.exact_path_use = PathUse::terminal_only;
    m.exact_solver = [b](std::span<const BrownianPath> paths, const StateVector& x0,
                         double t) {
        const double w0 = paths[0].at_time(t);
        const double w1 = paths[1].at_time(t);
        return StateVector{x0[0] + (b[0] * w0 + b[1] * w1),
                           x0[1] + (b[2] * w0 + b[3] * w1)};
    };
    return m;
}

/// Registry lookup: "bsp1", "ex2b", "series3", "ex3", "additive".
inline SdeModel model_by_name(const std::string& name) {
    if (name == "bsp1") return model_bsp1();
    if (name == "ex2b") return model_ex2b();
    if (name == "series3") return model_series3();
    if (name == "ex3") return model_ex3();
    if (name == "additive") return model_additive();
    throw DomainError("unknown model '" + name + "'");
}

inline std::vector<std::string> model_names() {
    return {"bsp1", "ex2b", "series3", "ex3", "additive"};
}

//---------------------------------------------------------------------------//
// Compactly supported test functions
//---------------------------------------------------------------------------//

/// Smooth step: 0 for u <= 0, 1 for u >= 1.
inline double smooth_step(double u) noexcept {
    auto f = [](double v) { return v > 0.0 ? std::exp(-1.0 / v) : 0.0; };
    const double a = f(u);
    const double b = f(1.0 - u);
    return a / (a + b);
}

/// Plateau equal to 1 on [-c, c] and 0 outside [-c-1, c+1].
inline double plateau(double x, double c) noexcept {
    return smooth_step(c + 1.0 - std::fabs(x));
}

/*!
 * phi(x) = x1 * prod_i plateau(x_i, c): smooth, compactly supported, equal
 * to x1 on the cube of half-width c.
 */
inline std::function<double(const StateVector&)> bump_test_function(double c) {
    if (!(c > 0)) throw DomainError("bump_test_function: c must be positive");
    return [c](const StateVector& x) {
        double v = x[0];
        for (double xi : x) v *= plateau(xi, c);
        return v;
    };
}

}  // namespace eulerlab
