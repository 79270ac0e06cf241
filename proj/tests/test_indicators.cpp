#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greenprior/errors.hpp"
#include "greenprior/indicators.hpp"
#include "support/support.hpp"

using namespace greenprior;

namespace {

RasterGrid random_mask(gp_test::Rng& rng, std::int64_t n, double cell, double density) {
    RasterGrid g(rng.uniform(-500, 500), rng.uniform(-500, 500), cell, n, n);
    for (auto& v : g.values()) v = rng.chance(density) ? 1.0 : 0.0;
    return g;
}

} // namespace

TEST_CASE("build_greenspace_mask") {
    const PointCloud ground{{0, 0, 1, PointClass::ground}, {40, 40, 1, PointClass::ground}};
    const auto none = build_greenspace_mask(ground, {}, MaskMode::baseline);
    CHECK(none.green_pixels() == 0);

    PointCloud one = ground;
    one.push_back({12, 12, 3, PointClass::vegetation});
    const auto single = build_greenspace_mask(one, {}, MaskMode::baseline);
    CHECK(single.green_pixels() == 1);

    // A 10 x 10 m potential roof aligned with the 5 m pixels.
    std::vector<Point2> roof;
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c) roof.push_back({20.5 + c, 20.5 + r});
    const auto base = build_greenspace_mask(one, roof, MaskMode::baseline);
    const auto greened = build_greenspace_mask(one, roof, MaskMode::greened);
    CHECK(greened.green_pixels() - base.green_pixels() == 4);
    CHECK(greened.grid().same_frame(base.grid()));
}

TEST_CASE("mask frame snaps outward") {
    const PointCloud pc{{3, 7, 0, PointClass::ground}, {22, 13, 0, PointClass::ground}};
    const auto f = mask_frame(pc, std::vector<Point2>{{-1, 2}}, 5.0);
    CHECK(f.origin_x() == -5.0);
    CHECK(f.origin_y() == 0.0);
    CHECK(f.origin_x() + f.ncols() * 5.0 > 22.0);
    CHECK(f.origin_y() + f.nrows() * 5.0 > 13.0);
}

TEST_CASE("greenspace masks must be binary") {
    RasterGrid g(0, 0, 5, 2, 2);
    g.set(0, 0, 0.5);
    CHECK_THROWS_AS(GreenspaceMask{g}, ValidationError);
}

TEST_CASE("greenspace_coverage saturation and emptiness") {
    RasterGrid g(-600, -600, 5, 240, 240, 1.0);
    const GreenspaceMask full(g);
    CHECK(std::abs(greenspace_coverage(full, 0, 0) - 1.0) <= 0.01);
    const GreenspaceMask empty(g.like(0.0));
    CHECK(greenspace_coverage(empty, 0, 0) == 0.0);
    // Outside the extent nothing is green.
    CHECK(greenspace_coverage(full, 5000, 5000) == 0.0);
}

TEST_CASE("greenspace_coverage of a half plane") {
    RasterGrid g(-600, -600, 5, 240, 240, 0.0);
    for (std::int64_t r = 0; r < g.nrows(); ++r)
        for (std::int64_t c = 120; c < g.ncols(); ++c) g.set(r, c, 1.0);
    const GreenspaceMask half(g);
    const double gc = greenspace_coverage(half, 0, 0);
    CHECK(std::abs(gc - 0.5) <= 0.01);
    CHECK(gc == gp_test::naive_coverage(g, 0, 0, 500));
}

TEST_CASE("greenspace_coverage equals the pixel-scan oracle") {
    gp_test::Rng rng(1);
    for (int m = 0; m < 5; ++m) {
        const auto g = random_mask(rng, 200, 5.0, rng.uniform(0.05, 0.9));
        const GreenspaceMask mask(g);
        for (int q = 0; q < 100; ++q) {
            const double x = g.origin_x() + rng.uniform(-100, 1100);
            const double y = g.origin_y() + rng.uniform(-100, 1100);
            const double radius = q % 2 ? 500.0 : rng.uniform(3, 400);
            CHECK(std::abs(greenspace_coverage(mask, x, y, radius) -
                           gp_test::naive_coverage(g, x, y, radius)) <= 1e-12);
        }
    }
}

TEST_CASE("greenspace_coverage on pixel-center radii") {
    // Queries at pixel centers with radii equal to exact center distances
    // exercise the boundary of the disk test.
    RasterGrid g(0, 0, 5, 50, 50, 1.0);
    const GreenspaceMask mask(g);
    for (double r : {5.0, 25.0, std::hypot(15.0, 20.0), std::hypot(5.0, 10.0)}) {
        CHECK(greenspace_coverage(mask, 127.5, 127.5, r) ==
              gp_test::naive_coverage(g, 127.5, 127.5, r));
    }
}

TEST_CASE("greened coverage is never below baseline") {
    gp_test::Rng rng(4);
    PointCloud pc;
    std::vector<Point2> roofs;
    for (int i = 0; i < 3000; ++i)
        pc.push_back({rng.uniform(0, 800), rng.uniform(0, 800), 1, PointClass::vegetation});
    for (int i = 0; i < 2000; ++i) roofs.push_back({rng.uniform(0, 800), rng.uniform(0, 800)});
    const auto frame = mask_frame(pc, roofs, 5.0);
    const auto base = build_greenspace_mask(pc, roofs, MaskMode::baseline, frame);
    const auto green = build_greenspace_mask(pc, roofs, MaskMode::greened, frame);
    for (int q = 0; q < 200; ++q) {
        const double x = rng.uniform(-100, 900);
        const double y = rng.uniform(-100, 900);
        CHECK(greenspace_coverage(green, x, y, 200) >= greenspace_coverage(base, x, y, 200));
    }
}

TEST_CASE("roof_coverage_rate") {
    RasterGrid g(0, 0, 1, 10, 10, 0.0);
    for (std::int64_t c = 0; c < 10; ++c) g.set(0, c, 1.0);
    const GreenspaceMask mask(g);
    const std::vector<Point2> cells{{1.5, 1.5}, {8.5, 8.5}};
    const double a = greenspace_coverage(mask, 1.5, 1.5, 3);
    const double b = greenspace_coverage(mask, 8.5, 8.5, 3);
    CHECK(roof_coverage_rate(cells, mask, 3) == doctest::Approx((a + b) / 2));
    CHECK(roof_coverage_rate(std::vector<Point2>{{1.5, 1.5}}, mask, 3) == a);
    CHECK_THROWS_AS(roof_coverage_rate({}, mask, 3), ValidationError);
}

TEST_CASE("distance_indicator") {
    CHECK(distance_indicator(0) == 1.0);
    CHECK(distance_indicator(500) == 0.0);
    CHECK(distance_indicator(900) == 0.0);
    CHECK(distance_indicator(250) == doctest::Approx(0.5));
    CHECK(distance_indicator(10, 20) == doctest::Approx(0.5));
    CHECK_THROWS_AS(distance_indicator(-1), ValidationError);
}

TEST_CASE("category_indicator") {
    CHECK(category_indicator(BuildingCategory::private_owned) == 0.5);
    CHECK(category_indicator(BuildingCategory::public_owned) == 1.0);
    CHECK(category_indicator(BuildingCategory::miscellaneous) == 0.75);
}

TEST_CASE("sample_surface_at_building") {
    const RasterGrid seven(0, 0, 10, 5, 5, 7.0);
    CHECK(sample_surface_at_building(seven, Polygon::rectangle(5, 5, 35, 25)) == 7.0);

    RasterGrid two(0, 0, 10, 1, 2);
    two.set(0, 0, 4);
    two.set(0, 1, 6);
    CHECK(sample_surface_at_building(two, Polygon::rectangle(0, 0, 20, 10)) == doctest::Approx(5.0));

    RasterGrid three(0, 0, 10, 2, 2, 3.0);
    three.set(1, 1, 9.0);
    CHECK(sample_surface_at_building(three, Polygon::rectangle(1, 1, 3, 3)) == 3.0);

    CHECK_THROWS_AS(sample_surface_at_building(seven, Polygon::rectangle(100, 100, 110, 110)),
                    ComputationError);
    RasterGrid gap(0, 0, 10, 1, 1);
    gap.set_nodata(0, 0);
    CHECK_THROWS_AS(sample_surface_at_building(gap, Polygon::rectangle(1, 1, 3, 3)),
                    ComputationError);

    // Nodata cells inside the footprint are skipped.
    RasterGrid partial(0, 0, 10, 1, 2);
    partial.set(0, 0, 8);
    partial.set_nodata(0, 1);
    CHECK(sample_surface_at_building(partial, Polygon::rectangle(0, 0, 20, 10)) == 8.0);
}

TEST_CASE("combine_seasonal_temperature") {
    CHECK(combine_seasonal_temperature({0.3, 0.3, 0.3, 0.3}) == doctest::Approx(0.3));
    CHECK(combine_seasonal_temperature({0, 1, 1, 0}) == doctest::Approx(0.8));
    CHECK(combine_seasonal_temperature({1, 0, 0, 1}) == doctest::Approx(0.2));
    gp_test::Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
        const SeasonalTemps t{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        const double v = combine_seasonal_temperature(t);
        const auto [lo, hi] = std::minmax({t.spring, t.summer, t.autumn, t.winter});
        CHECK(v >= lo - 1e-15);
        CHECK(v <= hi + 1e-15);
    }
}

TEST_CASE("season calendar") {
    const auto s = SeasonCalendar::standard();
    CHECK_NOTHROW(s.validate());
    CHECK(s.season_of(3) == 0);
    CHECK(s.season_of(5) == 0);
    CHECK(s.season_of(6) == 1);
    CHECK(s.season_of(8) == 1);
    CHECK(s.season_of(9) == 2);
    CHECK(s.season_of(11) == 2);
    CHECK(s.season_of(12) == 3);
    CHECK(s.season_of(1) == 3);
    CHECK(s.season_of(2) == 3);

    SeasonCalendar missing = s;
    missing.months[3] = {12, 1};
    CHECK_THROWS_AS(missing.validate(), ValidationError);
    SeasonCalendar twice = s;
    twice.months[0].push_back(6);
    CHECK_THROWS_AS(twice.validate(), ValidationError);
    SeasonCalendar bad = s;
    bad.months[0].push_back(13);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("min_max_normalize") {
    const std::vector<double> v{10, 20, 30};
    CHECK(min_max_normalize(v, Direction::positive) == std::vector<double>{0, 0.5, 1});
    CHECK(min_max_normalize(v, Direction::negative) == std::vector<double>{1, 0.5, 0});
    const std::vector<double> c{7, 7, 7};
    CHECK(min_max_normalize(c, Direction::positive) == std::vector<double>{0.5, 0.5, 0.5});
    CHECK(min_max_normalize({}, Direction::positive).empty());
}

TEST_CASE("normalization preserves or reverses the raw order") {
    gp_test::Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> raw;
        for (int i = 0; i < 30; ++i) raw.push_back(rng.uniform(-1e4, 1e4));
        const auto pos = min_max_normalize(raw, Direction::positive);
        const auto neg = min_max_normalize(raw, Direction::negative);
        for (std::size_t i = 0; i < raw.size(); ++i)
            for (std::size_t j = 0; j < raw.size(); ++j) {
                if (raw[i] < raw[j]) {
                    CHECK(pos[i] < pos[j]);
                    CHECK(neg[i] > neg[j]);
                }
            }
        for (std::size_t i = 0; i < raw.size(); ++i) {
            CHECK(pos[i] >= 0.0);
            CHECK(pos[i] <= 1.0);
        }
    }
}

TEST_CASE("normalize_indicators") {
    std::vector<RawIndicators> raw(3);
    raw[0] = {0.1, 1.0, 0.5, 20000, {20, 30, 28, 15}, 2000};
    raw[1] = {0.3, 0.4, 1.0, 40000, {22, 32, 29, 16}, 2200};
    raw[2] = {0.2, 0.0, 0.75, 30000, {21, 31, 30, 17}, 2400};
    const auto out = normalize_indicators(raw);
    REQUIRE(out.size() == 3);
    CHECK(out[0].greenspace == 1.0);
    CHECK(out[1].greenspace == 0.0);
    CHECK(out[2].greenspace == doctest::Approx(0.5));
    CHECK(out[1].road == 0.4);
    CHECK(out[2].category == 0.75);
    CHECK(out[0].income == 1.0);
    CHECK(out[1].income == 0.0);
    CHECK(out[0].precipitation == 0.0);
    CHECK(out[2].precipitation == 1.0);
    // Seasons: spring {0, 1, .5}, summer {0, 1, .5}, autumn {0, .5, 1}, winter {0, .5, 1}.
    CHECK(out[0].temperature == doctest::Approx(0.0));
    CHECK(out[1].temperature == doctest::Approx((1 + 4 + 4 * 0.5 + 0.5) / 10));
    CHECK(out[2].temperature == doctest::Approx((0.5 + 4 * 0.5 + 4 + 1) / 10));
    for (const auto& v : out)
        for (double x : v.as_array()) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
        }
    CHECK(normalize_indicators({}).empty());
}
