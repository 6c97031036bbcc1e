// SPDX-License-Identifier: Apache-2.0
//
// Empirical regularity probes: Hölder increments of x -> E[phi(X^x(t))] and
// difference quotients in the initial value of the multiplicative model.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "eulerlab/core.hpp"
#include "eulerlab/euler.hpp"
#include "eulerlab/models.hpp"
#include "eulerlab/parallel.hpp"
#include "eulerlab/quadrature.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

/// Terminal Euler state without storing the trajectory; nullopt on blow-up.
inline std::optional<StateVector> euler_terminal(const SdeModel& model,
                                                 const StateVector& x0,
                                                 std::span<const BrownianPath> paths,
                                                 const EulerConfig& cfg) {
    const auto strides = detail::path_strides(model, paths, cfg.grid);
    const std::size_t m = model.noise_dim;
    EulerStepper stepper(model, x0, cfg.grid.step(), cfg.scheme, cfg.blow_up_threshold);
    std::vector<double> w0(m), w1(m);
    for (std::uint64_t n = 0; n < cfg.grid.step_count() && !stepper.blown_up(); ++n) {
        for (std::size_t j = 0; j < m; ++j) {
            w0[j] = paths[j][n * strides[j]];
            w1[j] = paths[j][(n + 1) * strides[j]];
        }
        stepper.step(w0, w1);
    }
    if (stepper.blown_up()) return std::nullopt;
    return StateVector(stepper.state());
}

/// One path per noise component on grid; inactive components get the zero path.
inline std::vector<BrownianPath> sample_model_paths(const SdeModel& model, SeedSpec seed,
                                                    const TimeGrid& grid) {
    std::vector<BrownianPath> paths;
    paths.reserve(model.noise_dim);
    for (std::size_t j = 0; j < model.noise_dim; ++j) {
        const auto comp = static_cast<std::uint32_t>(j);
        paths.push_back(model.active_noise[j] ? sample_path(seed, grid, comp)
                                              : BrownianPath::zero(grid, comp));
    }
    return paths;
}

/// Least-squares slope of ln y against ln x over entries with y > 0.
inline double log_log_slope(std::span<const double> x, std::span<const double> y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::nan("");
    const double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

//---------------------------------------------------------------------------//
// Hölder probe
//---------------------------------------------------------------------------//

struct HolderProbe {
    StateVector base_point;
    StateVector direction;  //!< unit length
    std::vector<double> deltas;      //!< strictly decreasing
    std::vector<double> increments;  //!< |E[phi(X^{x+delta dir})] - E[phi(X^x)]|
    std::vector<double> stderrs;
    double fitted_alpha = 0.0;  //!< slope of ln increment against ln delta

    /// increment(delta) / delta^alpha, one entry per delta.
    std::vector<double> scaled(double alpha) const {
        std::vector<double> out(deltas.size());
        for (std::size_t i = 0; i < deltas.size(); ++i)
            out[i] = increments[i] / std::pow(deltas[i], alpha);
        return out;
    }
};

struct HolderOptions {
    int path_level = 8;  //!< Brownian grid on [0, t]
    bool use_euler = false;  //!< Euler on the path grid instead of the exact solver
    Parallelism parallelism;
};

/*!
 * For each delta, estimates |E[phi(X^{x + delta dir}(t))] - E[phi(X^x(t))]|
 * with common paths for all perturbations, and fits the log-log slope.
 */
inline HolderProbe holder_probe(const SdeModel& model, const StateVector& x,
                                const StateVector& direction, double t,
                                const std::function<double(const StateVector&)>& phi,
                                std::vector<double> deltas, std::uint64_t n_samples,
                                SeedSpec seed, const HolderOptions& opts = {}) {
    model.check_dim(x);
    model.check_dim(direction);
    if (!opts.use_euler && !model.exact_solver)
        throw UnsupportedModel("holder_probe: model '" + model.name + "' has no exact solver");
    if (deltas.size() < 4) throw DomainError("holder_probe: at least 4 deltas required");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw DomainError("holder_probe: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw DomainError("holder_probe: deltas must be strictly decreasing");
    }
    const double dn = direction.norm();
    if (!(dn > 0.0)) throw DomainError("holder_probe: direction must be non-zero");
    StateVector dir(model.dim);
    for (std::size_t i = 0; i < model.dim; ++i) dir[i] = direction[i] / dn;

    const TimeGrid grid(t, opts.path_level);
    const EulerConfig cfg(grid);
    const std::size_t nd = deltas.size();

    auto solve = [&](const std::vector<BrownianPath>& paths, const StateVector& x0) {
        if (!opts.use_euler) return model.exact(paths, x0, t);
        auto y = euler_terminal(model, x0, paths, cfg);
        if (!y) throw IntegrationError("holder_probe: Euler trajectory blew up");
        return *y;
    };

    struct Acc {
        std::vector<RunningStats> stats;
        void merge(const Acc& o) {
            for (std::size_t i = 0; i < stats.size(); ++i) stats[i].merge(o.stats[i]);
        }
    };
    const auto total = reduce_chunks(
        n_samples, opts.parallelism, Acc{std::vector<RunningStats>(nd)},
        [&](Acc& acc, std::uint64_t i) {
            const auto paths = sample_model_paths(model, sample_seed(seed, i), grid);
            const double base = phi(solve(paths, x));
            for (std::size_t k = 0; k < nd; ++k) {
                StateVector xp = x;
                for (std::size_t c = 0; c < model.dim; ++c) xp[c] += deltas[k] * dir[c];
                acc.stats[k].add(phi(solve(paths, xp)) - base);
            }
        });

    HolderProbe probe{x, dir, deltas, {}, {}, 0.0};
    for (const auto& s : total.stats) {
        probe.increments.push_back(std::fabs(s.mean()));
        probe.stderrs.push_back(s.stderr_of_mean());
    }
    probe.fitted_alpha = log_log_slope(probe.deltas, probe.increments);
    return probe;
}

//---------------------------------------------------------------------------//
// Difference-quotient probe for the multiplicative model
//---------------------------------------------------------------------------//

struct LipschitzRow {
    double h = 0.0;                 //!< initial value of X1
    double truncated_mean = 0.0;    //!< mean of min(X1(t)/h, cap)
    double truncated_stderr = 0.0;
    double median = 0.0;
    double flagged_fraction = 0.0;  //!< blown-up paths, counted at the cap
};

struct LipschitzOptions {
    int level = 10;  //!< Euler grid on [0, t]
    double cap = 1e6;
    Scheme scheme = Scheme::tamed;
    double blow_up_threshold = 1e10;
    Parallelism parallelism;
};

/*!
 * E[X1^{(h, x2)}(t)] / h for each h, computed with Euler on bsp1 with common
 * paths. X1^{(0, x2)} vanishes identically, so this is the difference
 * quotient in x1 at 0. Only truncated statistics are reported: the
 * untruncated expectation diverges as h -> 0.
 */
inline std::vector<LipschitzRow> lipschitz_blowup_probe(double t, double x2,
                                                        const std::vector<double>& h_list,
                                                        std::uint64_t n_samples, SeedSpec seed,
                                                        const LipschitzOptions& opts = {}) {
    if (!(x2 > 0.0)) throw DomainError("lipschitz_blowup_probe: x2 must be positive");
    if (n_samples == 0) throw DomainError("lipschitz_blowup_probe: n_samples must be positive");
    for (double h : h_list)
        if (!(h > 0.0)) throw DomainError("lipschitz_blowup_probe: h must be positive");
    const SdeModel model = model_bsp1();
    const TimeGrid grid(t, opts.level);
    const EulerConfig cfg(grid, opts.scheme, opts.blow_up_threshold);
    const std::size_t nh = h_list.size();

    struct Acc {
        std::vector<std::vector<double>> ratios;
        std::vector<std::uint64_t> flagged;
    };
    const Acc init{std::vector<std::vector<double>>(nh), std::vector<std::uint64_t>(nh, 0)};
    const auto parts = map_chunks(
        n_samples, opts.parallelism, init, [&](Acc& acc, std::uint64_t i) {
            const auto paths = sample_model_paths(model, sample_seed(seed, i), grid);
            for (std::size_t k = 0; k < nh; ++k) {
                const auto y = euler_terminal(model, StateVector{h_list[k], x2}, paths, cfg);
                double r = opts.cap;
                if (y)
                    r = std::clamp((*y)[0] / h_list[k], -opts.cap, opts.cap);
                else
                    ++acc.flagged[k];
                acc.ratios[k].push_back(r);
            }
        });

    std::vector<LipschitzRow> rows(nh);
    for (std::size_t k = 0; k < nh; ++k) {
        RunningStats stats;
        std::vector<double> all;
        all.reserve(n_samples);
        std::uint64_t flagged = 0;
        for (const auto& p : parts) {
            for (double r : p.ratios[k]) stats.add(r);
            all.insert(all.end(), p.ratios[k].begin(), p.ratios[k].end());
            flagged += p.flagged[k];
        }
        std::sort(all.begin(), all.end());
        const std::size_t n = all.size();
        rows[k].h = h_list[k];
        rows[k].truncated_mean = stats.mean();
        rows[k].truncated_stderr = stats.stderr_of_mean();
        rows[k].median = n % 2 ? all[n / 2] : 0.5 * (all[n / 2 - 1] + all[n / 2]);
        rows[k].flagged_fraction = static_cast<double>(flagged) / static_cast<double>(n);
    }
    return rows;
}

/// Pathwise pieces of X1(t)/x1 = exp(int X2): Euler ratio, prod(1 + X2 h), exp(sum X2 h).
struct ProductIdentity {
    double euler_ratio = 0.0;
    double product = 0.0;
    double exponential = 0.0;
};

/// Plain-Euler check of the exponential representation of X1 on one path.
inline ProductIdentity bsp1_product_identity(const BrownianPath& path, double x1, double x2) {
    const SdeModel model = model_bsp1();
    const EulerConfig cfg(path.grid());
    const std::vector<BrownianPath> paths{path};
    const auto traj = euler_run(model, StateVector{x1, x2}, paths, cfg);
    if (traj.blow_up_index()) throw IntegrationError("bsp1_product_identity: blow-up");
    const double h = cfg.grid.step();
    double prod = 1.0, sum = 0.0;
    for (std::size_t n = 0; n + 1 < traj.size(); ++n) {
        prod *= 1.0 + traj.state(n)[1] * h;
        sum += traj.state(n)[1] * h;
    }
    return {traj.state(traj.size() - 1)[0] / x1, prod, std::exp(sum)};
}

}  // namespace eulerlab
