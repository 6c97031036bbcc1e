// SPDX-License-Identifier: Apache-2.0
//
// Shared domain types: dyadic time grids, floor-to-grid arithmetic and the
// state vector used by every model and scheme.
#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eulerlab {

//---------------------------------------------------------------------------//
// Errors
//---------------------------------------------------------------------------//

/// Argument outside the documented domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A precondition that was checked by sampling failed (e.g. monotonicity).
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite values where the contract promises finiteness.
class IntegrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of recursion depth; carries its best estimate.
class ToleranceNotMet : public std::runtime_error {
  public:
    ToleranceNotMet(const std::string& what, double best_estimate,
                    double error_estimate)
        : std::runtime_error(what),
          best_estimate_(best_estimate),
          error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

  private:
    double best_estimate_;
    double error_estimate_;
};

/// Operation needs a capability the model does not provide.
class UnsupportedModel : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

//---------------------------------------------------------------------------//
// TimeGrid
//---------------------------------------------------------------------------//

/*!
 * Uniform grid on [0, T] with 2^K cells.
 *
 * Grid points are addressed by integer index; times are derived as i*h and
 * never used to identify a point.
 */
class TimeGrid {
  public:
    static constexpr int max_level = 40;

    TimeGrid(double horizon, int level) : horizon_(horizon), level_(level) {
        if (!(horizon > 0) || !std::isfinite(horizon))
            throw DomainError("TimeGrid: horizon must be positive and finite");
        if (level < 0 || level > max_level)
            throw DomainError("TimeGrid: level must lie in [0, 40]");
        step_ = std::ldexp(horizon, -level);
    }

    double horizon() const noexcept { return horizon_; }
    int level() const noexcept { return level_; }
    double step() const noexcept { return step_; }
    std::uint64_t step_count() const noexcept {
        return std::uint64_t{1} << level_;
    }
    double time(std::uint64_t i) const noexcept {
        return static_cast<double>(i) * step_;
    }

    bool operator==(const TimeGrid&) const = default;

  private:
    double horizon_;
    int level_;
    double step_;
};

//---------------------------------------------------------------------------//
// Floor to grid
//---------------------------------------------------------------------------//

/// Largest n with n*step <= t, for an arbitrary positive step.
inline std::uint64_t floor_index(double t, double step) {
    if (!(t >= 0) || !std::isfinite(t))
        throw DomainError("floor_index: t must be finite and non-negative");
    if (!(step > 0) || !std::isfinite(step))
        throw DomainError("floor_index: step must be positive");
    auto n = static_cast<std::uint64_t>(std::floor(t / step));
    // t/step is rounded; repair the off-by-one cases in both directions.
    while (n > 0 && static_cast<double>(n) * step > t) --n;
    while (static_cast<double>(n + 1) * step <= t) ++n;
    return n;
}

/// Grid index representing the floor of a time on a given grid.
struct FloorIndex {
    TimeGrid grid;
    std::uint64_t index;

    double time() const noexcept { return grid.time(index); }
};

inline FloorIndex floor_h(double t, const TimeGrid& grid) {
    return FloorIndex{grid, floor_index(t, grid.step())};
}

/*!
 * Index injection from a coarse grid into a fine grid on the same horizon.
 *
 * Entry i is the fine index of coarse point i, i.e. i * 2^(fine.K - coarse.K).
 */
inline std::vector<std::uint64_t> subsample_indices(const TimeGrid& fine,
                                                    const TimeGrid& coarse) {
    if (fine.horizon() != coarse.horizon())
        throw DomainError("subsample_indices: horizons differ");
    if (coarse.level() > fine.level())
        throw DomainError("subsample_indices: coarse grid is finer than fine grid");
    const int shift = fine.level() - coarse.level();
    std::vector<std::uint64_t> map(coarse.step_count() + 1);
    for (std::uint64_t i = 0; i < map.size(); ++i) map[i] = i << shift;
    return map;
}

//---------------------------------------------------------------------------//
// StateVector
//---------------------------------------------------------------------------//

/// Point of R^d. Length is fixed at construction.
class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(std::size_t dim, double fill = 0.0)
        : values_(dim, fill) {}
    StateVector(std::initializer_list<double> init) : values_(init) {}
    explicit StateVector(std::span<const double> values)
        : values_(values.begin(), values.end()) {}

    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    std::span<double> span() noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    bool all_finite() const noexcept {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double norm() const noexcept { return euclidean_norm(values_); }

    static double euclidean_norm(std::span<const double> v) noexcept {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    }

    bool operator==(const StateVector&) const = default;

  private:
    std::vector<double> values_;
};

}  // namespace eulerlab
