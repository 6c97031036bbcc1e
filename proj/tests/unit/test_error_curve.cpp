#include <gtest/gtest.h>

#include <cmath>

#include "eulerlab/error_curve.hpp"
#include "eulerlab/probes.hpp"

using namespace eulerlab;

namespace {

// Geometric Brownian motion: multiplicative noise with a closed-form solution.
SdeModel gbm(double a, double b) {
    SdeModel m;
    m.name = "gbm";
    m.dim = 1;
    m.noise_dim = 1;
    m.drift = [a](std::span<const double> x, std::span<double> out) { out[0] = a * x[0]; };
    m.diffusion = [b](std::span<const double> x, std::span<double> out) { out[0] = b * x[0]; };
    m.active_noise = {true};
    m.exact_path_use = PathUse::terminal_only;
    m.exact_solver = [a, b](std::span<const BrownianPath> p, const StateVector& x0, double t) {
        return StateVector{x0[0] * std::exp((a - 0.5 * b * b) * t + b * p[0].at_time(t))};
    };
    return m;
}

// Per-level errors from explicitly sampled and subsampled paths, two-pass moments.
struct OracleRow {
    std::vector<double> mean_diff;
    double weak = 0.0, strong = 0.0;
};

std::vector<OracleRow> oracle_curve(const SdeModel& model, double horizon,
                                    const std::vector<int>& levels, std::uint64_t n,
                                    SeedSpec seed, const StateVector& x0, Scheme scheme) {
    const int fine_level = levels.back();
    const TimeGrid fine(horizon, fine_level);
    std::vector<std::vector<std::vector<double>>> diffs(levels.size());
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto paths = sample_model_paths(model, sample_seed(seed, i), fine);
        const auto exact = model.exact(paths, x0, horizon);
        for (std::size_t l = 0; l < levels.size(); ++l) {
            const TimeGrid g(horizon, levels[l]);
            std::vector<BrownianPath> coarse;
            for (const auto& p : paths) coarse.push_back(subsample(p, g));
            const auto y = euler_terminal(model, x0, coarse, EulerConfig(g, scheme));
            std::vector<double> d(model.dim);
            for (std::size_t c = 0; c < model.dim; ++c) d[c] = exact[c] - (*y)[c];
            diffs[l].push_back(d);
        }
    }
    std::vector<OracleRow> out;
    for (const auto& rows : diffs) {
        OracleRow r;
        r.mean_diff.assign(model.dim, 0.0);
        for (const auto& d : rows) {
            double s = 0.0;
            for (std::size_t c = 0; c < d.size(); ++c) {
                r.mean_diff[c] += d[c] / static_cast<double>(n);
                s += d[c] * d[c];
            }
            r.strong += std::sqrt(s) / static_cast<double>(n);
        }
        r.weak = StateVector::euclidean_norm(r.mean_diff);
        out.push_back(r);
    }
    return out;
}

ErrorCurveOptions starting_at(StateVector x0) {
    ErrorCurveOptions o;
    o.x0 = std::move(x0);
    return o;
}

}  // namespace

TEST(WeakStrongErrors, DriftFreeModelIsExactOnEveryLevel) {
    const auto curve = weak_strong_errors(model_additive(), 2.0, {0, 1, 2, 5, 9}, 1000, {1, 0},
                                          starting_at(StateVector{0.5, -1.0}));
    ASSERT_EQ(curve.rows.size(), 5u);
    for (const auto& r : curve.rows) {
        EXPECT_EQ(r.weak_error, 0.0);
        EXPECT_EQ(r.strong_error, 0.0);
        EXPECT_EQ(r.samples_used, 1000u);
    }
}

TEST(WeakStrongErrors, Ex2bWithZeroFrequencyIsExact) {
    ErrorCurveOptions opts;
    opts.x0 = {0.0, 0.5, 0.0};
    const auto curve = weak_strong_errors(model_ex2b(), 1.0, {2, 4, 6}, 500, {2, 0}, opts);
    for (const auto& r : curve.rows) {
        EXPECT_LE(r.weak_error, 1e-15);
        EXPECT_LE(r.strong_error, 1e-15);
    }
}

TEST(WeakStrongErrors, Preconditions) {
    EXPECT_THROW(weak_strong_errors(model_bsp1(), 1.0, {1}, 10, {}), UnsupportedModel);
    EXPECT_THROW(weak_strong_errors(model_series3(), 1.0, {1}, 10, {}), UnsupportedModel);
    EXPECT_THROW(weak_strong_errors(model_ex3(), 2.0, {}, 10, {}), DomainError);
    EXPECT_THROW(weak_strong_errors(model_ex3(), 2.0, {1}, 0, {}), DomainError);
    EXPECT_THROW(weak_strong_errors(model_ex3(), 2.0, {41}, 10, {}), DomainError);
    ErrorCurveOptions bad;
    bad.x0 = {0.0, 0.0};
    EXPECT_THROW(weak_strong_errors(model_ex3(), 2.0, {1}, 10, {}, bad), DomainError);
}

TEST(WeakStrongErrors, RowsAreSortedDyadicAndWellFormed) {
    const auto curve = weak_strong_errors(model_ex3(), 2.0, {6, 2, 4, 2}, 600, {3, 0});
    ASSERT_EQ(curve.rows.size(), 3u);
    EXPECT_EQ(curve.model, "ex3");
    EXPECT_EQ(curve.n_samples, 600u);
    int expect_k = 2;
    for (const auto& r : curve.rows) {
        EXPECT_EQ(r.level, expect_k);
        EXPECT_EQ(r.steps, std::uint64_t{1} << expect_k);
        EXPECT_EQ(r.h, 2.0 / static_cast<double>(r.steps));
        EXPECT_GE(r.weak_stderr, 0.0);
        EXPECT_GE(r.strong_stderr, 0.0);
        EXPECT_EQ(r.blown_up_fraction, 0.0);
        EXPECT_EQ(r.mean_difference.size(), 4u);
        expect_k += 2;
    }
}

TEST(WeakStrongErrors, StrongDominatesWeakOnEveryRow) {
    const auto curve = weak_strong_errors(model_ex3(), 2.0, {1, 2, 3, 4, 5, 6, 7, 8}, 2000, {4, 0});
    for (const auto& r : curve.rows) EXPECT_GE(r.strong_error, r.weak_error * (1 - 1e-12));
    const auto g = weak_strong_errors(gbm(0.3, 0.8), 1.0, {1, 3, 5}, 2000, {4, 1},
                                      starting_at(StateVector{1.0}));
    for (const auto& r : g.rows) EXPECT_GE(r.strong_error, r.weak_error * (1 - 1e-12));
}

TEST(WeakStrongErrors, StrongErrorNonIncreasingWithinNoise) {
    const auto curve = weak_strong_errors(model_ex3(), 2.0, {3, 4, 5, 6, 7, 8, 9, 10}, 2000, {5, 0});
    for (std::size_t i = 1; i < curve.rows.size(); ++i) {
        const auto& a = curve.rows[i - 1];
        const auto& b = curve.rows[i];
        EXPECT_LE(b.strong_error, a.strong_error + 3.0 * std::hypot(a.strong_stderr, b.strong_stderr))
            << b.level;
    }
}

TEST(WeakStrongErrors, IndependentOfThreadCount) {
    ErrorCurveOptions one, many;
    one.parallelism = Parallelism{1, 512};
    many.parallelism = Parallelism{5, 512};
    const auto a = weak_strong_errors(model_ex3(), 2.0, {2, 5, 7}, 3001, {6, 0}, one);
    const auto b = weak_strong_errors(model_ex3(), 2.0, {2, 5, 7}, 3001, {6, 0}, many);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].weak_error, b.rows[i].weak_error);
        EXPECT_EQ(a.rows[i].weak_stderr, b.rows[i].weak_stderr);
        EXPECT_EQ(a.rows[i].strong_error, b.rows[i].strong_error);
        EXPECT_EQ(a.rows[i].mean_difference, b.rows[i].mean_difference);
    }
}

TEST(WeakStrongErrors, StreamingCouplingMatchesExplicitSubsampling) {
    const std::vector<int> levels{1, 3, 6};
    {
        const auto curve = weak_strong_errors(model_ex3(), 2.0, levels, 300, {7, 0});
        const auto oracle = oracle_curve(model_ex3(), 2.0, levels, 300, {7, 0},
                                         StateVector(4, 0.0), Scheme::plain);
        for (std::size_t l = 0; l < levels.size(); ++l) {
            EXPECT_NEAR(curve.rows[l].weak_error, oracle[l].weak, 1e-12);
            EXPECT_NEAR(curve.rows[l].strong_error, oracle[l].strong, 1e-12);
            for (std::size_t c = 0; c < 4; ++c)
                EXPECT_NEAR(curve.rows[l].mean_difference[c], oracle[l].mean_diff[c], 1e-12);
        }
    }
    {
        ErrorCurveOptions opts;
        opts.x0 = {0.0, 0.4, 1.3};
        opts.exact_level = 8;
        const auto model = model_ex2b();
        const auto curve = weak_strong_errors(model, 1.0, levels, 200, {7, 1}, opts);
        // The oracle reads the exact solution on the level-8 path.
        const TimeGrid fine(1.0, 8);
        std::vector<double> mean(3, 0.0);
        double strong = 0.0;
        for (std::uint64_t i = 0; i < 200; ++i) {
            const auto paths = sample_model_paths(model, sample_seed({7, 1}, i), fine);
            const auto x = model.exact(paths, opts.x0, 1.0);
            const auto y = euler_terminal(model, opts.x0, paths, EulerConfig(TimeGrid(1.0, 3)));
            double s = 0.0;
            for (int c = 0; c < 3; ++c) {
                mean[c] += (x[c] - (*y)[c]) / 200.0;
                s += (x[c] - (*y)[c]) * (x[c] - (*y)[c]);
            }
            strong += std::sqrt(s) / 200.0;
        }
        EXPECT_NEAR(curve.rows[1].weak_error, StateVector::euclidean_norm(mean), 1e-12);
        EXPECT_NEAR(curve.rows[1].strong_error, strong, 1e-12);
    }
    {
        ErrorCurveOptions opts;
        opts.x0 = {1.0};
        const auto model = gbm(0.3, 0.8);
        const auto curve = weak_strong_errors(model, 1.0, levels, 300, {7, 2}, opts);
        const auto oracle = oracle_curve(model, 1.0, levels, 300, {7, 2}, opts.x0, Scheme::plain);
        for (std::size_t l = 0; l < levels.size(); ++l) {
            EXPECT_NEAR(curve.rows[l].weak_error, oracle[l].weak, 1e-12);
            EXPECT_NEAR(curve.rows[l].strong_error, oracle[l].strong, 1e-12);
        }
    }
}

TEST(WeakStrongErrors, GbmMeanDifferenceMatchesClosedForm) {
    ErrorCurveOptions opts;
    opts.x0 = {1.0};
    const auto curve = weak_strong_errors(gbm(0.5, 0.2), 1.0, {2, 3, 4, 5}, 20'000, {8, 0}, opts);
    // Weak error of Euler on GBM is x0 e^{at} - x0 (1 + a h)^N up to MC noise.
    for (const auto& r : curve.rows) {
        const double expect = std::exp(0.5) - std::pow(1.0 + 0.5 * r.h, double(r.steps));
        EXPECT_NEAR(r.mean_difference[0], expect, 4.0 * r.weak_stderr + 1e-12) << r.level;
    }
}
