#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eulerlab/core.hpp"

using namespace eulerlab;

TEST(TimeGrid, StepIsHorizonOverPowerOfTwo) {
    const TimeGrid g(2.0, 5);
    EXPECT_EQ(g.step_count(), 32u);
    EXPECT_EQ(g.step(), 2.0 / 32.0);
    EXPECT_EQ(g.time(32), 2.0);
    EXPECT_EQ(g.time(0), 0.0);
}

TEST(TimeGrid, RejectsBadArguments) {
    EXPECT_THROW(TimeGrid(0.0, 3), DomainError);
    EXPECT_THROW(TimeGrid(-1.0, 3), DomainError);
    EXPECT_THROW(TimeGrid(INFINITY, 3), DomainError);
    EXPECT_THROW(TimeGrid(1.0, -1), DomainError);
    EXPECT_THROW(TimeGrid(1.0, 41), DomainError);
    EXPECT_NO_THROW(TimeGrid(1.0, 40));
}

TEST(FloorIndex, ExamplesForArbitraryStep) {
    EXPECT_EQ(floor_index(2.0, 0.3), 6u);
    EXPECT_NEAR(6 * 0.3, 1.8, 1e-15);
    EXPECT_EQ(floor_index(0.0, 0.3), 0u);
    EXPECT_EQ(floor_index(0.0, 1e-9), 0u);
}

TEST(FloorIndex, GridPointIsItsOwnFloor) {
    const TimeGrid g(2.0, 10);
    for (std::uint64_t n : {0ull, 1ull, 17ull, 512ull, 1023ull, 1024ull})
        EXPECT_EQ(floor_h(g.time(n), g).index, n);
}

TEST(FloorIndex, NonDyadicGridPointsAreFixedPoints) {
    // n * 0.1 is not exactly representable; the floor must still return n.
    for (std::uint64_t n = 0; n < 2000; ++n) {
        const double t = static_cast<double>(n) * 0.1;
        EXPECT_EQ(floor_index(t, 0.1), n) << n;
    }
}

TEST(FloorIndex, RejectsNegativeAndNonFinite) {
    const TimeGrid g(1.0, 3);
    EXPECT_THROW(floor_h(-1e-300, g), DomainError);
    EXPECT_THROW(floor_h(NAN, g), DomainError);
    EXPECT_THROW(floor_index(1.0, 0.0), DomainError);
}

TEST(FloorIndex, BracketAndIdempotenceOnRandomTimes) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> t_dist(0.0, 5.0);
    std::uniform_real_distribution<double> h_dist(1e-4, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const double t = t_dist(gen);
        const double h = h_dist(gen);
        const auto n = floor_index(t, h);
        const double fl = static_cast<double>(n) * h;
        EXPECT_LE(fl, t);
        EXPECT_GT(static_cast<double>(n + 1) * h, t);
        EXPECT_EQ(floor_index(fl, h), n);
    }
    for (int k = 0; k <= 20; ++k) {
        const TimeGrid g(3.0, k);
        for (int i = 0; i < 200; ++i) {
            const double t = t_dist(gen);
            const auto f = floor_h(t, g);
            EXPECT_LE(f.time(), t);
            EXPECT_LT(t, f.time() + g.step());
            EXPECT_EQ(floor_h(f.time(), g).index, f.index);
        }
    }
}

TEST(SubsampleIndices, Examples) {
    const TimeGrid f3(1.0, 3), c1(1.0, 1), f2(1.0, 2), c0(1.0, 0);
    EXPECT_EQ(subsample_indices(f3, c1), (std::vector<std::uint64_t>{0, 4, 8}));
    EXPECT_EQ(subsample_indices(f2, c0), (std::vector<std::uint64_t>{0, 4}));
    const auto id = subsample_indices(f3, f3);
    for (std::uint64_t i = 0; i < id.size(); ++i) EXPECT_EQ(id[i], i);
    EXPECT_EQ(id.size(), 9u);
}

TEST(SubsampleIndices, Errors) {
    EXPECT_THROW(subsample_indices(TimeGrid(1.0, 3), TimeGrid(2.0, 1)), DomainError);
    EXPECT_THROW(subsample_indices(TimeGrid(1.0, 1), TimeGrid(1.0, 3)), DomainError);
}

TEST(SubsampleIndices, ComposesAcrossThreeLevels) {
    for (int k2 = 0; k2 <= 8; ++k2)
        for (int k1 = 0; k1 <= k2; ++k1)
            for (int k0 = 0; k0 <= k1; ++k0) {
                const TimeGrid g2(2.0, k2), g1(2.0, k1), g0(2.0, k0);
                const auto direct = subsample_indices(g2, g0);
                const auto a = subsample_indices(g1, g0);
                const auto b = subsample_indices(g2, g1);
                for (std::size_t i = 0; i < direct.size(); ++i)
                    ASSERT_EQ(direct[i], b[a[i]]);
            }
}

TEST(StateVector, Basics) {
    StateVector v{3.0, 4.0};
    EXPECT_EQ(v.size(), 2u);
    EXPECT_DOUBLE_EQ(v.norm(), 5.0);
    EXPECT_TRUE(v.all_finite());
    v[1] = NAN;
    EXPECT_FALSE(v.all_finite());
    StateVector w(3, 1.5);
    EXPECT_EQ(w, (StateVector{1.5, 1.5, 1.5}));
    const double raw[] = {1.0, 2.0};
    EXPECT_EQ(StateVector(std::span<const double>(raw)), (StateVector{1.0, 2.0}));
    EXPECT_FALSE(StateVector({1.0, INFINITY}).all_finite());
}
