#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "greenprior/ingest.hpp"
#include "greenprior/synth.hpp"
#include "support/support.hpp"

using namespace greenprior;
namespace fs = std::filesystem;

TEST_CASE("synthetic city honours its generation parameters") {
    SyntheticCitySpec spec;
    spec.buildings = 20;
    const auto city = generate_city(spec);
    CHECK(city.buildings.size() == 20);
    CHECK(city.truth.size() == 20);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < city.truth.size(); ++i) {
        const auto& t = city.truth[i];
        CHECK(t.id == city.buildings[i].id);
        ids.insert(t.id);
        const bool flat_enough = t.roof_type == RoofType::flat || t.roof_type == RoofType::shed;
        CHECK(t.potential == (flat_enough && t.age_years <= 60));
        CHECK(t.footprint_area_m2 == doctest::Approx(city.buildings[i].footprint.area()));
        if (t.roof_type == RoofType::gabled) CHECK(t.pitch_deg >= 15.0);
        if (t.roof_type == RoofType::flat) CHECK(t.pitch_deg == 0.0);
    }
    CHECK(ids.size() == 20);
    CHECK_FALSE(city.roads.empty());
    CHECK_FALSE(city.precipitation.empty());
    for (const auto& t : city.temperature) {
        std::size_t gaps = 0;
        for (double v : t.values()) gaps += std::isnan(v) ? 1 : 0;
        CHECK(gaps > 0);
    }
}

TEST_CASE("the default city mixes every roof class") {
    const auto city = generate_city({});
    CHECK(city.buildings.size() >= 50);
    std::set<RoofType> types;
    bool old = false;
    for (const auto& t : city.truth) {
        types.insert(t.roof_type);
        old = old || t.age_years > 60;
    }
    CHECK(types.size() == 4);
    CHECK(old);
}

TEST_CASE("synthetic output is byte identical per seed") {
    gp_test::ScratchDir dir("synth");
    SyntheticCitySpec spec;
    spec.buildings = 12;
    write_city(generate_city(spec), dir / "a");
    write_city(generate_city(spec), dir / "b");
    spec.seed = 43;
    write_city(generate_city(spec), dir / "c");
    std::size_t files = 0;
    bool any_difference = false;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const auto name = entry.path().filename();
        CHECK(read_text_file(entry.path()) == read_text_file(dir / "b" / name.string()));
        any_difference = any_difference ||
                         read_text_file(entry.path()) != read_text_file(dir / "c" / name.string());
        ++files;
    }
    CHECK(files == 12);
    CHECK(any_difference);

    const auto truth = read_ground_truth(dir / "a" / "ground_truth.csv");
    CHECK(truth.size() == 12);
    const auto city = generate_city({.buildings = 12});
    for (std::size_t i = 0; i < truth.size(); ++i) {
        CHECK(truth[i].id == city.truth[i].id);
        CHECK(truth[i].potential == city.truth[i].potential);
        CHECK(truth[i].roof_type == city.truth[i].roof_type);
    }
}

TEST_CASE("an empty synthetic city is still a valid dataset") {
    gp_test::ScratchDir dir("synth_empty");
    SyntheticCitySpec spec;
    spec.buildings = 0;
    const auto city = generate_city(spec);
    CHECK(city.buildings.empty());
    write_city(city, dir.path());
    CHECK(read_footprints(dir / "footprints.geojson").empty());
    CHECK(read_ground_truth(dir / "ground_truth.csv").empty());
    CHECK(fs::exists(dir / "greenprior.cfg"));
}
