// greenprior: command-line driver for the roof greening pipeline.
//
//   greenprior synth --out <dir> [--seed <n>] [--buildings <n>]
//   greenprior extract|indicators|prioritize|benefits|report --config <file>
//              [--out <dir>] [--scheme equal|entropy|cv|critic] [--cell <m>]
//
// Exit codes: 0 success, 1 validation error, 2 I/O error, 3 computation error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>

#include "greenprior/config.hpp"
#include "greenprior/errors.hpp"
#include "greenprior/pipeline.hpp"
#include "greenprior/synth.hpp"

namespace {

struct StageOptions {
    std::string config;
    std::string out;
    std::string scheme;
    std::optional<double> cell;
};

greenprior::PipelineConfig prepare(const StageOptions& o) {
    greenprior::PipelineConfig cfg = greenprior::load_config(o.config);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (!o.scheme.empty()) cfg.scheme = *greenprior::weighting_scheme_from_string(o.scheme);
    if (o.cell) cfg.roofs.dsm_cell = *o.cell;
    cfg.validate_parameters();
    cfg.validate_inputs();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Roof greening potential, priority and benefit assessment"};
    app.require_subcommand(1);

    greenprior::SyntheticCitySpec synth_spec;
    std::string synth_out = "synthetic";
    auto* synth = app.add_subcommand("synth", "Generate the seeded synthetic city");
    synth->add_option("--out", synth_out, "Dataset directory")->capture_default_str();
    synth->add_option("--seed", synth_spec.seed, "Random seed")->capture_default_str();
    synth->add_option("--buildings", synth_spec.buildings, "Number of buildings")->capture_default_str();

    StageOptions stage;
    using Runner = std::function<std::string(const greenprior::PipelineConfig&)>;
    const std::vector<std::tuple<const char*, const char*, Runner>> stages = {
        {"extract", "Extract roofs and decide greening potential", greenprior::run_extract},
        {"indicators", "Compute the six greening indicators", greenprior::run_indicators},
        {"prioritize", "Weight indicators into priorities and rank buildings", greenprior::run_prioritize},
        {"benefits", "Account exposure, carbon, energy and value", greenprior::run_benefits},
        {"report", "Assemble report.md from the stage sections", greenprior::run_report},
    };
    std::vector<std::pair<CLI::App*, Runner>> stage_apps;
    for (const auto& [name, help, runner] : stages) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", stage.config, "Pipeline config file")->required();
        sub->add_option("--out", stage.out, "Output directory (overrides 'out')");
        sub->add_option("--scheme", stage.scheme, "Active weighting scheme")
            ->check(CLI::IsMember({"equal", "entropy", "cv", "critic"}));
        sub->add_option("--cell", stage.cell, "Roof raster cell size in m (overrides 'dsm_cell')");
        stage_apps.emplace_back(sub, runner);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*synth) {
            const auto city = greenprior::generate_city(synth_spec);
            greenprior::write_city(city, synth_out);
            std::size_t potential = 0;
            for (const auto& t : city.truth) potential += t.potential ? 1 : 0;
            std::cout << "synth: " << city.buildings.size() << " buildings (" << potential
                      << " with potential), " << city.points.size() << " points written to "
                      << synth_out << '\n';
            return 0;
        }
        for (const auto& [sub, runner] : stage_apps) {
            if (!*sub) continue;
            const auto cfg = prepare(stage);
            std::cout << runner(cfg) << '\n';
            return 0;
        }
    } catch (const greenprior::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
