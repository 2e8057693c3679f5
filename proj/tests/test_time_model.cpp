#include <stdexcept>

#include "doctest.h"
#include "evgrid/errors.hpp"
#include "evgrid/time_model.hpp"

using namespace evgrid;

namespace {
constexpr double kStart0700 = 7 * 60.0;
}

TEST_CASE("slot midpoints") {
    TimeGrid grid(kStart0700, 60, 12);
    CHECK(grid.slot_midpoint(0) == doctest::Approx(7 * 60.0 + 6.0));   // 07:06
    CHECK(grid.slot_midpoint(10) == doctest::Approx(9 * 60.0 + 6.0));  // 09:06
    CHECK_THROWS_AS(grid.slot_midpoint(60), std::out_of_range);
    CHECK_THROWS_AS(grid.slot_midpoint(-1), std::out_of_range);
}

TEST_CASE("grid construction validation") {
    CHECK_THROWS_AS(TimeGrid(0.0, 0, 12), InvalidInput);
    CHECK_THROWS_AS(TimeGrid(0.0, 60, 0), InvalidInput);
}

TEST_CASE("build_bounds over the full horizon") {
    TimeGrid grid(kStart0700, 60, 12);
    auto b = build_bounds(grid, 0.0, 24 * 60.0, 6.6, -10.0);
    CHECK(b.available_count() == 60);
    for (int k = 0; k < 60; ++k) {
        CHECK(b.upper[k] == 6.6);
        CHECK(b.lower[k] == -10.0);
    }
}

TEST_CASE("build_bounds window [09:00, 12:00)") {
    TimeGrid grid(kStart0700, 60, 12);
    double w0 = 9 * 60.0, w1 = 12 * 60.0;
    auto b = build_bounds(grid, w0, w1, 6.6, -10.0);

    // oracle: enumerate all 60 midpoints independently
    int expected_count = 0;
    for (int k = 0; k < 60; ++k) {
        double mid = kStart0700 + (k + 0.5) * 12.0;
        bool in = mid >= w0 && mid < w1;
        if (in) ++expected_count;
        CHECK(static_cast<bool>(b.available[k]) == in);
    }
    CHECK(expected_count == 15);
    CHECK(b.available_count() == 15);
    CHECK_FALSE(b.available[9]);   // 08:54
    CHECK(b.available[10]);
    CHECK(b.available[24]);
    CHECK_FALSE(b.available[25]);  // 12:06
}

TEST_CASE("empty window and invalid rate specs") {
    TimeGrid grid(kStart0700, 60, 12);
    auto b = build_bounds(grid, 12 * 60.0, 9 * 60.0, 6.6, -10.0);
    CHECK(b.available_count() == 0);

    CHECK_THROWS_AS(build_bounds(grid, 0.0, 100.0, -1.0, -10.0), InvalidInput);
    CHECK_THROWS_AS(build_bounds(grid, 0.0, 100.0, 6.6, 1.0), InvalidInput);
}

TEST_CASE("bounds invariant: sign pattern matches availability") {
    TimeGrid grid(kStart0700, 48, 15);
    for (int offset = 0; offset < 10; ++offset) {
        double w0 = 8 * 60.0 + 7.0 * offset;
        double w1 = w0 + 200.0;
        auto b = build_bounds(grid, w0, w1, 7.2, -3.3);
        for (int k = 0; k < grid.slot_count; ++k) {
            CHECK(b.lower[k] <= 0.0);
            CHECK(b.upper[k] >= 0.0);
            if (b.available[k]) {
                CHECK(b.upper[k] == 7.2);
                CHECK(b.lower[k] == -3.3);
            } else {
                CHECK(b.upper[k] == 0.0);
                CHECK(b.lower[k] == 0.0);
            }
        }
    }
}

TEST_CASE("shifting the window by one slot shifts the mask by one slot") {
    TimeGrid grid(kStart0700, 60, 12);
    auto base = build_bounds(grid, 9 * 60.0, 12 * 60.0, 5.0, -5.0);
    auto shifted = build_bounds(grid, 9 * 60.0 + 12.0, 12 * 60.0 + 12.0, 5.0, -5.0);
    for (int k = 0; k + 1 < 60; ++k)
        CHECK(shifted.available[k + 1] == base.available[k]);
}
