// SPDX-License-Identifier: Apache-2.0
//
// Euler-Maruyama stepping, trajectories, off-grid evaluation and the closed
// piecewise form of the first component of the four-dimensional model.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eulerlab/core.hpp"
#include "eulerlab/models.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

enum class Scheme { plain, tamed };

struct EulerConfig {
    TimeGrid grid;
    Scheme scheme = Scheme::plain;
    double blow_up_threshold = 1e10;

    EulerConfig(TimeGrid g, Scheme s = Scheme::plain, double threshold = 1e10)
        : grid(g), scheme(s), blow_up_threshold(threshold) {
        if (!(threshold > 0))
            throw DomainError("EulerConfig: blow-up threshold must be positive");
    }
};

/*!
 * One-cell Euler-Maruyama update for a fixed model and step size.
 *
 * With additive noise the state is kept as D_n + B W(t_n), where D_n
 * accumulates x0 and the drift increments. This is the same recursion as
 * Y_{n+1} = Y_n + mu h + B dW but reproduces x0 + B W(t_n) exactly when the
 * drift vanishes.
 */
class EulerStepper {
  public:
    EulerStepper(const SdeModel& model, const StateVector& x0, double h,
                 Scheme scheme, double threshold)
        : model_(&model),
          h_(h),
          scheme_(scheme),
          threshold_(threshold),
          state_(x0.begin(), x0.end()),
          drift_acc_(x0.begin(), x0.end()),
          mu_(model.dim, 0.0),
          sigma_(model.dim * model.noise_dim, 0.0) {
        model.check_dim(x0);
        if (model.active_noise.size() != model.noise_dim)
            throw DomainError("EulerStepper: active_noise has wrong length");
        for (std::size_t j = 0; j < model.noise_dim; ++j)
            if (model.active_noise[j]) active_.push_back(j);
        if (model.additive_noise) model.diffusion(x0.span(), sigma_);
        blown_up_ = !within_threshold();
    }

    /// Advance one cell; w_begin/w_end hold W at its endpoints per component.
    bool step(std::span<const double> w_begin, std::span<const double> w_end) {
        if (blown_up_) return false;
        const std::size_t d = model_->dim;
        const std::size_t m = model_->noise_dim;
        model_->drift(state_, mu_);
        double scale = 1.0;
        if (scheme_ == Scheme::tamed) {
            const double norm = StateVector::euclidean_norm(mu_);
            scale = 1.0 / (1.0 + h_ * norm);
        }
        if (model_->additive_noise) {
            for (std::size_t i = 0; i < d; ++i) {
                drift_acc_[i] += (scale * mu_[i]) * h_;
                double noise = 0.0;
                for (std::size_t j : active_) noise += sigma_[i * m + j] * w_end[j];
                state_[i] = drift_acc_[i] + noise;
            }
        } else {
            model_->diffusion(state_, sigma_);
            for (std::size_t i = 0; i < d; ++i) {
                double noise = 0.0;
                for (std::size_t j : active_)
                    noise += sigma_[i * m + j] * (w_end[j] - w_begin[j]);
                next_[i] = state_[i] + (scale * mu_[i]) * h_ + noise;
            }
            next_.swap(state_);
        }
        blown_up_ = !within_threshold();
        return !blown_up_;
    }

    std::span<const double> state() const noexcept { return state_; }
    bool blown_up() const noexcept { return blown_up_; }

  private:
    bool within_threshold() const noexcept {
        double s = 0.0;
        for (double v : state_) {
            if (!std::isfinite(v)) return false;
            s += v * v;
        }
        return std::sqrt(s) <= threshold_;
    }

    const SdeModel* model_;
    double h_;
    Scheme scheme_;
    double threshold_;
    std::vector<double> state_;
    std::vector<double> drift_acc_;
    std::vector<double> mu_;
    std::vector<double> sigma_;
    std::vector<std::size_t> active_;
    std::vector<double> next_ = std::vector<double>(model_->dim, 0.0);
    bool blown_up_ = false;
};

/*!
 * Grid states of an Euler run. When blow_up_index is set, states hold the
 * points before the first threshold crossing and nothing after.
 */
class Trajectory {
  public:
    Trajectory(TimeGrid grid, std::size_t dim) : grid_(grid), dim_(dim) {}

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return states_.size() / dim_; }
    std::span<const double> state(std::size_t i) const noexcept {
        return std::span<const double>(states_).subspan(i * dim_, dim_);
    }
    StateVector state_vector(std::size_t i) const { return StateVector(state(i)); }
    std::optional<std::uint64_t> blow_up_index() const noexcept { return blow_up_; }

    void push(std::span<const double> x) { states_.insert(states_.end(), x.begin(), x.end()); }
    void flag_blow_up(std::uint64_t i) noexcept { blow_up_ = i; }

  private:
    TimeGrid grid_;
    std::size_t dim_;
    std::vector<double> states_;
    std::optional<std::uint64_t> blow_up_;
};

namespace detail {

/// Stride of each path relative to the Euler grid, after validation.
inline std::vector<std::uint64_t> path_strides(const SdeModel& model,
                                               std::span<const BrownianPath> paths,
                                               const TimeGrid& grid) {
    if (paths.size() != model.noise_dim)
        throw DomainError("euler_run: one Brownian path per noise component required");
    std::vector<std::uint64_t> strides(paths.size());
    for (std::size_t j = 0; j < paths.size(); ++j) {
        const TimeGrid& pg = paths[j].grid();
        if (pg.horizon() != grid.horizon() || pg.level() < grid.level())
            throw DomainError("euler_run: path grid must be the Euler grid or finer");
        strides[j] = std::uint64_t{1} << (pg.level() - grid.level());
    }
    return strides;
}

}  // namespace detail

/// Euler-Maruyama trajectory on cfg.grid; finer paths are read at grid points.
inline Trajectory euler_run(const SdeModel& model, const StateVector& x0,
                            std::span<const BrownianPath> paths,
                            const EulerConfig& cfg) {
    const auto strides = detail::path_strides(model, paths, cfg.grid);
    const std::size_t m = model.noise_dim;
    EulerStepper stepper(model, x0, cfg.grid.step(), cfg.scheme,
                         cfg.blow_up_threshold);
    Trajectory traj(cfg.grid, model.dim);
    if (stepper.blown_up()) {
        traj.flag_blow_up(0);
        return traj;
    }
    traj.push(stepper.state());
    std::vector<double> w0(m), w1(m);
    for (std::uint64_t n = 0; n < cfg.grid.step_count(); ++n) {
        for (std::size_t j = 0; j < m; ++j) {
            w0[j] = paths[j][n * strides[j]];
            w1[j] = paths[j][(n + 1) * strides[j]];
        }
        if (!stepper.step(w0, w1)) {
            traj.flag_blow_up(n + 1);
            return traj;
        }
        traj.push(stepper.state());
    }
    return traj;
}

/*!
 * Euler process between grid points:
 * Y(t) = Y(fl t) + mu~(Y(fl t)) (t - fl t) + sigma(Y(fl t)) (W(t) - W(fl t)),
 * with fl t the floor of t on the Euler grid. t must be a point of every
 * path grid.
 */
inline StateVector euler_at(const Trajectory& traj, const SdeModel& model,
                            std::span<const BrownianPath> paths,
                            const EulerConfig& cfg, double t) {
    const auto fl = floor_h(t, cfg.grid);
    if (fl.index > cfg.grid.step_count())
        throw DomainError("euler_at: t beyond the grid horizon");
    if (fl.index >= traj.size())
        throw DomainError("euler_at: trajectory blew up before t");
    StateVector y = traj.state_vector(fl.index);
    const double dt = t - fl.time();
    if (dt == 0.0) return y;
    StateVector mu = model.drift_at(y);
    double scale = 1.0;
    if (cfg.scheme == Scheme::tamed) scale = 1.0 / (1.0 + cfg.grid.step() * mu.norm());
    const auto sigma = model.diffusion_at(y);
    const std::size_t m = model.noise_dim;
    StateVector out(model.dim);
    for (std::size_t i = 0; i < model.dim; ++i) {
        double noise = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (!model.active_noise[j]) continue;
            noise += sigma[i * m + j] * (paths[j].at_time(t) - paths[j].at_time(fl.time()));
        }
        out[i] = y[i] + scale * mu[i] * dt + noise;
    }
    return out;
}

/*!
 * First component of the Euler approximation of the four-dimensional model
 * started at 0, evaluated in closed piecewise form.
 *
 * The inner integral over [0, inf) of the frozen mollifier is the finite
 * left sum g_h = sum_{kh<1} h * mollifier(kh); the outer integrand is
 * constant on each cell, so
 *   Y1(t) = sum_{1 < kh, (k+1)h <= t} h e(kh) cos((g_h - C) e^{W(kh)^3})
 *         + partial cell,
 * with e the outer bump. Summation order matches the stepper so that both
 * routes agree to the last bit. path is W2 on the grid or finer.
 */
inline double euler_y1_representation(const TimeGrid& grid, const BrownianPath& path,
                                      double t) {
    if (t < 1.0) return 0.0;
    if (t > grid.horizon()) throw DomainError("euler_y1_representation: t beyond horizon");
    if (path.grid().horizon() != grid.horizon() || path.grid().level() < grid.level())
        throw DomainError("euler_y1_representation: path grid must be the Euler grid or finer");
    const std::uint64_t stride = std::uint64_t{1} << (path.grid().level() - grid.level());
    const double h = grid.step();
    const double c = mollifier_integral();

    // Inner integral: exact left sum over the cells starting in [0, 1).
    double inner = 0.0;
    for (std::uint64_t k = 0; grid.time(k) < 1.0; ++k) inner += mollifier(grid.time(k)) * h;
    const double g = inner - c;

    const auto fl = floor_h(t, grid);
    double y1 = 0.0;
    auto integrand = [&](std::uint64_t k) {
        const double tk = grid.time(k);
        return tk > 1.0 ? outer_bump(tk) * oscillatory_cos(g, path[k * stride]) : 0.0;
    };
    for (std::uint64_t k = 0; k < fl.index; ++k) y1 += integrand(k) * h;
    const double partial = t - fl.time();
    if (partial > 0.0) y1 += integrand(fl.index) * partial;
    return y1;
}

}  // namespace eulerlab
