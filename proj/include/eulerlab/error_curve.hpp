// SPDX-License-Identifier: Apache-2.0
//
// Weak and strong Euler errors against an exact solver under common-path
// coupling.
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "eulerlab/core.hpp"
#include "eulerlab/euler.hpp"
#include "eulerlab/models.hpp"
#include "eulerlab/parallel.hpp"
#include "eulerlab/quadrature.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

struct ErrorRow {
    std::uint64_t steps = 0;  //!< N = T / h
    double h = 0.0;
    int level = 0;
    double weak_error = 0.0;    //!< || mean(X(T) - Y(T)) ||
    double weak_stderr = 0.0;   //!< delta-method standard error of weak_error
    double strong_error = 0.0;  //!< mean || X(T) - Y(T) ||
    double strong_stderr = 0.0;
    double blown_up_fraction = 0.0;
    std::uint64_t samples_used = 0;
    std::vector<double> mean_difference;  //!< per component
};

struct ErrorCurve {
    std::string model;
    double horizon = 0.0;
    std::uint64_t n_samples = 0;
    std::vector<ErrorRow> rows;
};

struct ErrorCurveOptions {
    StateVector x0;  //!< empty means the origin
    Scheme scheme = Scheme::plain;
    /// Level of the path handed to a full-path exact solver; -1 = finest Euler level.
    int exact_level = -1;
    double blow_up_threshold = 1e10;
    Parallelism parallelism;
};

namespace detail {

struct LevelAccumulator {
    RunningCovariance difference;
    RunningStats norm;
    std::uint64_t blown = 0;

    void merge(const LevelAccumulator& o) {
        difference.merge(o.difference);
        norm.merge(o.norm);
        blown += o.blown;
    }
};

struct CurveAccumulator {
    std::vector<LevelAccumulator> levels;
    void merge(const CurveAccumulator& o) {
        for (std::size_t i = 0; i < levels.size(); ++i) levels[i].merge(o.levels[i]);
    }
};

}  // namespace detail

/*!
 * Weak and strong errors of Euler's method on each requested level.
 *
 * Every sample draws one Brownian path on the finest level. The path is
 * streamed once: each Euler level advances whenever the fine index crosses
 * one of its grid points, so all levels and the exact solution see the same
 * path (identical to sampling it and subsampling per level). Deterministic
 * in (seed, levels, n_samples) for any thread count.
 */
inline ErrorCurve weak_strong_errors(const SdeModel& model, double horizon,
                                     std::vector<int> levels,
                                     std::uint64_t n_samples, SeedSpec seed,
                                     const ErrorCurveOptions& opts = {}) {
    if (!model.exact_solver)
        throw UnsupportedModel("weak_strong_errors: model '" + model.name +
                               "' has no exact solver");
    if (levels.empty()) throw DomainError("weak_strong_errors: no levels given");
    if (n_samples == 0) throw DomainError("weak_strong_errors: n_samples must be positive");
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (int k : levels) TimeGrid(horizon, k);  // validates

    const StateVector x0 = opts.x0.size() ? opts.x0 : StateVector(model.dim, 0.0);
    model.check_dim(x0);
    const bool full_path = model.exact_path_use == PathUse::full_path;
    const int exact_level = full_path ? (opts.exact_level < 0 ? levels.back() : opts.exact_level) : 0;
    const int fine_level = std::max(levels.back(), exact_level);
    const TimeGrid fine(horizon, fine_level);
    const TimeGrid exact_grid(horizon, exact_level);
    const std::uint64_t exact_stride = std::uint64_t{1} << (fine_level - exact_level);
    const std::size_t m = model.noise_dim;
    const std::size_t d = model.dim;
    const std::size_t n_levels = levels.size();
    const double sqrt_h = std::sqrt(fine.step());
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < m; ++j)
        if (model.active_noise[j]) active.push_back(j);

    detail::CurveAccumulator init;
    init.levels.resize(n_levels);
    for (auto& l : init.levels) l.difference = RunningCovariance(d);

    auto body = [&](detail::CurveAccumulator& acc, std::uint64_t sample) {
        const SeedSpec s = sample_seed(seed, sample);
        std::vector<CounterRng> rngs;
        rngs.reserve(m);
        for (std::size_t j = 0; j < m; ++j) rngs.emplace_back(s, static_cast<std::uint32_t>(j));
        std::vector<double> pending(m, 0.0);

        std::vector<EulerStepper> steppers;
        steppers.reserve(n_levels);
        for (int k : levels)
            steppers.emplace_back(model, x0, TimeGrid(horizon, k).step(), opts.scheme,
                                  opts.blow_up_threshold);
        // shift[l] = fine_level - level; level l steps when ctz(idx) >= shift[l].
        std::vector<int> shift(n_levels);
        for (std::size_t l = 0; l < n_levels; ++l) shift[l] = fine_level - levels[l];

        std::vector<double> w(m, 0.0);
        // W at each level's last grid point; the additive stepper ignores it.
        const bool need_prev = !model.additive_noise;
        std::vector<double> w_prev(need_prev ? n_levels * m : 0, 0.0);
        std::vector<std::vector<double>> exact_values(m);
        for (std::size_t j = 0; j < m; ++j) {
            exact_values[j].reserve(exact_grid.step_count() + 1);
            exact_values[j].push_back(0.0);
        }

        const std::uint64_t n_fine = fine.step_count();
        std::array<double, 2> z{};
        for (std::uint64_t i = 0; i < n_fine; ++i) {
            for (std::size_t j : active) {
                if ((i & 1) == 0) {
                    z = rngs[j].gaussian_pair_at(i >> 1);
                    pending[j] = z[1];
                    w[j] += sqrt_h * z[0];
                } else {
                    w[j] += sqrt_h * pending[j];
                }
            }
            const std::uint64_t idx = i + 1;
            const int tz = std::countr_zero(idx);
            // levels are ascending, so the finest (smallest shift) is last
            for (std::size_t l = n_levels; l-- > 0;) {
                if (shift[l] > tz) break;
                if (need_prev) {
                    const std::span<double> prev(w_prev.data() + l * m, m);
                    steppers[l].step(prev, w);
                    std::copy(w.begin(), w.end(), prev.begin());
                } else {
                    steppers[l].step(w, w);
                }
            }
            if (idx % exact_stride == 0)
                for (std::size_t j = 0; j < m; ++j) exact_values[j].push_back(w[j]);
        }

        std::vector<BrownianPath> paths;
        paths.reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            if (full_path) {
                paths.emplace_back(exact_grid, std::move(exact_values[j]),
                                   static_cast<std::uint32_t>(j));
            } else {
                paths.emplace_back(TimeGrid(horizon, 0),
                                   std::vector<double>{0.0, w[j]},
                                   static_cast<std::uint32_t>(j));
            }
        }
        const StateVector exact = model.exact(paths, x0, horizon);

        std::vector<double> diff(d);
        for (std::size_t l = 0; l < n_levels; ++l) {
            auto& la = acc.levels[l];
            if (steppers[l].blown_up()) {
                ++la.blown;
                continue;
            }
            const auto y = steppers[l].state();
            for (std::size_t i = 0; i < d; ++i) diff[i] = exact[i] - y[i];
            la.difference.add(diff);
            la.norm.add(StateVector::euclidean_norm(diff));
        }
    };

    const auto total = reduce_chunks(n_samples, opts.parallelism, init, body);

    ErrorCurve curve{model.name, horizon, n_samples, {}};
    for (std::size_t l = 0; l < n_levels; ++l) {
        const auto& la = total.levels[l];
        const TimeGrid g(horizon, levels[l]);
        ErrorRow row;
        row.level = levels[l];
        row.steps = g.step_count();
        row.h = g.step();
        row.samples_used = la.difference.count();
        row.blown_up_fraction =
            static_cast<double>(la.blown) / static_cast<double>(n_samples);
        row.mean_difference = la.difference.mean();
        row.weak_error = StateVector::euclidean_norm(row.mean_difference);
        const double n_used = static_cast<double>(std::max<std::uint64_t>(1, row.samples_used));
        double var = 0.0;
        if (row.weak_error > 0.0) {
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    var += row.mean_difference[i] * row.mean_difference[j] *
                           la.difference.covariance(i, j);
            var /= row.weak_error * row.weak_error;
        } else {
            for (std::size_t i = 0; i < d; ++i) var += la.difference.covariance(i, i);
        }
        row.weak_stderr = std::sqrt(std::max(0.0, var) / n_used);
        row.strong_error = la.norm.mean();
        row.strong_stderr = la.norm.stderr_of_mean();
        curve.rows.push_back(std::move(row));
    }
    return curve;
}

}  // namespace eulerlab
