#include <doctest.h>

#include <stdexcept>

#include "pathlik/partition.hpp"

using pathlik::Partition;
using pathlik::dyadic_grid;

TEST_CASE("dyadic grid at level 0 is a single interval") {
    const Partition p = dyadic_grid(0, 1.0);
    REQUIRE(p.size() == 2);
    CHECK(p.time(0) == 0.0);
    CHECK(p.time(1) == 1.0);
    CHECK(p.intervals() == 1);
    CHECK(p.level() == 0);
}

TEST_CASE("dyadic grid level 2 on [0,1]") {
    const Partition p = dyadic_grid(2, 1.0);
    REQUIRE(p.size() == 5);
    const std::vector<double> expected{0.0, 0.25, 0.5, 0.75, 1.0};
    CHECK(p.times() == expected);
    CHECK(p.mesh() == 0.25);
    CHECK(p.is_homogeneous());
}

TEST_CASE("dyadic grid level 1 on [0,3] has 6 half-width intervals") {
    const Partition p = dyadic_grid(1, 3.0);
    CHECK(p.intervals() == 6);
    for (int k = 0; k < p.intervals(); ++k) CHECK(p.spacing(k) == 0.5);
    CHECK(p.horizon() == 3.0);
}

TEST_CASE("dyadic grid rejects non-integer interval counts") {
    CHECK_THROWS_AS(dyadic_grid(0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(dyadic_grid(1, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(dyadic_grid(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(dyadic_grid(2, -1.0), std::invalid_argument);
    CHECK_NOTHROW(dyadic_grid(1, 1.5));  // 3 intervals, integral
}

TEST_CASE("partition invariants") {
    CHECK_THROWS_AS(Partition({0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({0.0, 1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("containment is exact and reflexive") {
    const Partition fine = dyadic_grid(3, 1.0);
    const Partition coarse = dyadic_grid(1, 1.0);
    CHECK(fine.contains(coarse));
    CHECK(fine.contains(fine));
    CHECK_FALSE(coarse.contains(fine));

    const Partition offgrid({0.0, 0.3, 1.0});
    CHECK_FALSE(fine.contains(offgrid));
}

TEST_CASE("homogeneous constructor") {
    const Partition p = Partition::homogeneous(0.5, 4);
    CHECK(p.horizon() == 2.0);
    CHECK(p.intervals() == 4);
    CHECK(p.is_homogeneous());
    CHECK_THROWS_AS(Partition::homogeneous(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(Partition::homogeneous(0.5, 0), std::invalid_argument);
}
