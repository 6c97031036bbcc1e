// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random numbers keyed by (master seed, stream, component,
// draw index), standard normal variates by inverse CDF, and Brownian paths
// on dyadic grids.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "eulerlab/core.hpp"

namespace eulerlab {

//---------------------------------------------------------------------------//
/*!
 * Philox-4x32-10 block function (Salmon et al., Random123).
 *
 * Stateless: maps a 128-bit counter and a 64-bit key to 128 random bits.
 */
class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

//---------------------------------------------------------------------------//
// Uniform and Gaussian transforms
//---------------------------------------------------------------------------//

/// Top 52 bits of x mapped to the open interval (0, 1), symmetric about 1/2.
/// With 53 bits the largest value would round up to 1.
constexpr double uniform_from_bits(std::uint64_t x) noexcept {
    return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

/*!
 * Standard normal quantile, Wichura's AS241 (PPND16).
 *
 * Relative accuracy about 1e-16 over (0, 1). Exact zero at 1/2 and odd
 * symmetry Phi^-1(1-u) = -Phi^-1(u) whenever 1-u is representable.
 */
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("inverse_normal_cdf: p must lie in (0, 1)");
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return q < 0.0 ? -val : val;
}

//---------------------------------------------------------------------------//
// Seeds and generators
//---------------------------------------------------------------------------//

/// Identifies one independent stream, typically one Monte Carlo sample.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    SeedSpec with_stream(std::uint64_t stream) const noexcept {
        return {master_seed, stream};
    }
    bool operator==(const SeedSpec&) const = default;
};

/*!
 * Random-access generator over one (seed, component) stream.
 *
 * Draw i is a pure function of (master_seed, stream_id, component, i); the
 * sequential interface only tracks a position.
 */
class CounterRng {
  public:
    explicit CounterRng(SeedSpec seed, std::uint32_t component = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed.master_seed),
               static_cast<std::uint32_t>(seed.master_seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(seed.stream_id)),
          stream_hi_(static_cast<std::uint32_t>(seed.stream_id >> 32)),
          component_(component) {}

    std::uint64_t bits_at(std::uint64_t draw) const noexcept {
        const auto out = Philox4x32::generate(counter(draw >> 1), key_);
        const std::size_t half = (draw & 1u) * 2;
        return (std::uint64_t{out[half]} << 32) | out[half + 1];
    }

    double uniform_at(std::uint64_t draw) const noexcept {
        return uniform_from_bits(bits_at(draw));
    }
    double gaussian_at(std::uint64_t draw) const {
        return inverse_normal_cdf(uniform_at(draw));
    }
    /// Draws 2 block and 2 block + 1 from a single generator call.
    std::array<double, 2> gaussian_pair_at(std::uint64_t block) const {
        const auto out = Philox4x32::generate(counter(block), key_);
        return {inverse_normal_cdf(uniform_from_bits((std::uint64_t{out[0]} << 32) | out[1])),
                inverse_normal_cdf(uniform_from_bits((std::uint64_t{out[2]} << 32) | out[3]))};
    }

    std::uint64_t next_bits() noexcept { return bits_at(position_++); }
    double uniform() noexcept { return uniform_at(position_++); }
    double gaussian() { return gaussian_at(position_++); }

    std::uint64_t position() const noexcept { return position_; }

  private:
    Philox4x32::Counter counter(std::uint64_t block) const noexcept {
        return {static_cast<std::uint32_t>(block),
                static_cast<std::uint32_t>(block >> 32) ^ (component_ << 16), stream_lo_,
                stream_hi_};
    }

    Philox4x32::Key key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint32_t component_;
    std::uint64_t position_ = 0;
};

/// One standard normal variate from a generator.
inline double gaussian(CounterRng& rng) { return rng.gaussian(); }

//---------------------------------------------------------------------------//
// Brownian paths
//---------------------------------------------------------------------------//

/// Brownian trajectory sampled at every point of a grid; values[0] == 0.
class BrownianPath {
  public:
    BrownianPath(TimeGrid grid, std::vector<double> values,
                 std::uint32_t component = 0)
        : grid_(grid), values_(std::move(values)), component_(component) {
        if (values_.size() != grid_.step_count() + 1)
            throw DomainError("BrownianPath: value count must be 2^K + 1");
        if (values_.front() != 0.0)
            throw DomainError("BrownianPath: path must start at 0");
    }

    /// Identically zero path, used for noise components with zero loading.
    static BrownianPath zero(TimeGrid grid, std::uint32_t component = 0) {
        return BrownianPath(grid, std::vector<double>(grid.step_count() + 1, 0.0),
                            component);
    }

    const TimeGrid& grid() const noexcept { return grid_; }
    std::uint32_t component() const noexcept { return component_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::uint64_t i) const noexcept { return values_[i]; }
    double terminal() const noexcept { return values_.back(); }

    /// Value at a time that must be a point of this path's grid.
    double at_time(double t) const {
        const auto idx = floor_index(t, grid_.step());
        if (idx > grid_.step_count() || grid_.time(idx) != t)
            throw DomainError("BrownianPath::at_time: t is not a grid point");
        return values_[idx];
    }

  private:
    TimeGrid grid_;
    std::vector<double> values_;
    std::uint32_t component_;
};

/// Cumulative sum of 2^K independent N(0, h) increments; draw i feeds cell i.
inline BrownianPath sample_path(SeedSpec seed, const TimeGrid& grid,
                                std::uint32_t component = 0) {
    if (grid.step_count() > (std::uint64_t{1} << 40))
        throw DomainError("sample_path: grid too fine");
    const CounterRng rng(seed, component);
    const double sqrt_h = std::sqrt(grid.step());
    std::vector<double> values(grid.step_count() + 1);
    values[0] = 0.0;
    for (std::uint64_t i = 0; i < grid.step_count(); ++i)
        values[i + 1] = values[i] + sqrt_h * rng.gaussian_at(i);
    return BrownianPath(grid, std::move(values), component);
}

/// Restriction of a path to a coarser grid on the same horizon.
inline BrownianPath subsample(const BrownianPath& path, const TimeGrid& coarse) {
    const auto map = subsample_indices(path.grid(), coarse);
    std::vector<double> values(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) values[i] = path[map[i]];
    return BrownianPath(coarse, std::move(values), path.component());
}

}  // namespace eulerlab
