#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>

#include "greenprior/config.hpp"
#include "greenprior/errors.hpp"
#include "greenprior/ingest.hpp"
#include "greenprior/pipeline.hpp"
#include "greenprior/synth.hpp"
#include "support/support.hpp"

using namespace greenprior;
namespace fs = std::filesystem;

namespace {

using Stage = std::string (*)(const PipelineConfig&);
constexpr Stage stages[] = {run_extract, run_indicators, run_prioritize, run_benefits, run_report};

PipelineConfig synthesize(const fs::path& dir, const SyntheticCitySpec& spec = {}) {
    write_city(generate_city(spec), dir);
    auto cfg = load_config(dir / std::string(synthetic_config_name));
    cfg.validate_inputs();
    return cfg;
}

void run_all(const PipelineConfig& cfg) {
    for (auto stage : stages) stage(cfg);
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir))
        out[e.path().filename().string()] = read_text_file(e.path());
    return out;
}

std::map<std::string, std::string> read_csv_pairs(const fs::path& path) {
    std::map<std::string, std::string> out;
    const std::string text = read_text_file(path);
    std::size_t pos = text.find('\n') + 1;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl - pos);
        const auto comma = line.find(',');
        out[line.substr(0, comma)] = line.substr(comma + 1);
        pos = nl + 1;
    }
    return out;
}

} // namespace

TEST_CASE("seed 42 outputs match the golden files") {
    gp_test::ScratchDir dir("golden");
    const auto cfg = synthesize(dir.path());
    run_all(cfg);
    const auto got = snapshot(cfg.out_dir);
    const fs::path golden = GREENPRIOR_GOLDEN_DIR;

    if (std::getenv("GREENPRIOR_UPDATE_GOLDEN")) {
        fs::create_directories(golden);
        for (const auto& e : fs::directory_iterator(golden)) fs::remove(e.path());
        for (const auto& [name, text] : got) write_text_file(golden / name, text);
        MESSAGE("golden files rewritten in " << golden.string());
        return;
    }

    const auto expected = snapshot(golden);
    REQUIRE_MESSAGE(!expected.empty(), "no golden files; rerun with GREENPRIOR_UPDATE_GOLDEN=1");
    std::set<std::string> got_names;
    std::set<std::string> expected_names;
    for (const auto& [k, v] : got) got_names.insert(k);
    for (const auto& [k, v] : expected) expected_names.insert(k);
    CHECK(got_names == expected_names);
    for (const auto& [name, text] : expected) {
        INFO("artifact " << name);
        const auto it = got.find(name);
        if (it != got.end()) CHECK(it->second == text);
    }
}

TEST_CASE("every stage is idempotent") {
    gp_test::ScratchDir dir("idem");
    const auto cfg = synthesize(dir.path(), {.buildings = 16});
    run_all(cfg);
    const auto first = snapshot(cfg.out_dir);
    for (auto stage : stages) {
        stage(cfg);
        CHECK(snapshot(cfg.out_dir) == first);
    }
}

TEST_CASE("stages report the earliest missing upstream artifact") {
    gp_test::ScratchDir dir("order");
    const auto cfg = synthesize(dir.path(), {.buildings = 8});
    auto expect_producer = [&](Stage stage, const std::string& producer) {
        try {
            stage(cfg);
            FAIL("expected a missing artifact error");
        } catch (const MissingArtifactError& e) {
            CHECK_MESSAGE(std::string(e.what()).find("greenprior " + producer) != std::string::npos,
                          e.what());
        }
    };
    for (auto stage : {run_indicators, run_prioritize, run_benefits, run_report})
        expect_producer(stage, "extract");
    run_extract(cfg);
    for (auto stage : {run_prioritize, run_benefits, run_report}) expect_producer(stage, "indicators");
    run_indicators(cfg);
    expect_producer(run_report, "prioritize");
}

TEST_CASE("extraction recovers the generator's potential flags") {
    gp_test::ScratchDir dir("truth");
    const auto cfg = synthesize(dir.path());
    run_extract(cfg);
    const auto truth = read_ground_truth(dir / "ground_truth.csv");
    const auto roofs = read_csv_pairs(cfg.out_dir / "roofs.csv");
    REQUIRE(roofs.size() == truth.size());
    for (const auto& t : truth) {
        INFO("building " << t.id);
        CHECK(roofs.at(t.id).substr(0, 1) == (t.potential ? "1" : "0"));
    }
}

TEST_CASE("benefits with injected city aggregates") {
    gp_test::ScratchDir dir("inject");
    auto cfg = synthesize(dir.path(), {.buildings = 10});
    cfg.override_greenable_area_m2 = 63.9e6;
    cfg.override_energy_kwh = 2.33e8;
    run_extract(cfg);
    run_indicators(cfg);
    run_benefits(cfg);
    const auto b = read_csv_pairs(cfg.out_dir / "benefits.csv");
    CHECK(std::stod(b.at("c_v_kg")) / 1000 == doctest::Approx(93294).epsilon(0.005));
    CHECK(std::stod(b.at("c_e_kg")) / 1000 == doctest::Approx(182905).epsilon(0.005));
    CHECK(std::stod(b.at("c_total_kg")) / 1e6 == doctest::Approx(276).epsilon(0.005));
    CHECK(std::stod(b.at("value_total_hkd")) / 1e6 == doctest::Approx(318).epsilon(0.005));
    CHECK(b.at("greenable_area_source") == "override");
    const std::string section = read_text_file(cfg.out_dir / "section_benefits.md");
    for (const char* s : {"93 kt", "183 kt", "276 kt", "HK$318"})
        CHECK_MESSAGE(section.find(s) != std::string::npos, s);
}

TEST_CASE("a single building older than the age limit has no potential") {
    gp_test::ScratchDir dir("old");
    auto city = generate_city({.buildings = 1});
    city.buildings[0].age_years = 61;
    write_city(city, dir.path());
    auto cfg = load_config(dir / std::string(synthetic_config_name));
    const std::string summary = run_extract(cfg);
    CHECK(summary.find("0 of 1") != std::string::npos);
    CHECK(read_csv_pairs(cfg.out_dir / "roofs.csv").at("b001").substr(0, 5) == "0,age");
}

TEST_CASE("a cloud without building points is a computation error") {
    gp_test::ScratchDir dir("nobuild");
    auto city = generate_city({.buildings = 2});
    std::erase_if(city.points, [](const Point3& p) { return p.cls == PointClass::building; });
    write_city(city, dir.path());
    const auto cfg = load_config(dir / std::string(synthetic_config_name));
    CHECK_THROWS_AS(run_extract(cfg), NoBuildingPointsError);
}

TEST_CASE("the pipeline handles a city without potential buildings") {
    gp_test::ScratchDir dir("nopot");
    auto city = generate_city({.buildings = 6});
    for (auto& b : city.buildings) b.age_years = 90;
    write_city(city, dir.path());
    const auto cfg = load_config(dir / std::string(synthetic_config_name));
    run_all(cfg);
    CHECK(read_text_file(cfg.out_dir / "priorities.csv").find('\n') + 1 ==
          read_text_file(cfg.out_dir / "priorities.csv").size());
    CHECK(read_csv_pairs(cfg.out_dir / "benefits.csv").at("c_total_kg") == "0.000000");
}
