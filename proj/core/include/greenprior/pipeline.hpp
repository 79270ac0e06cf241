#pragma once

// Staged pipeline. Every stage reads its inputs (and the artifacts of the
// stages before it) and writes its own artifacts plus a markdown section
// into the output directory. Stages are deterministic: rerunning a stage
// on unchanged inputs rewrites byte-identical files.
//
//   extract     roofs.csv, segments.csv, roof_cells.csv, section_extract.md
//   indicators  mask_baseline.asc, mask_greened.asc, precipitation.asc,
//               income.asc, temp_<season>_filled.asc, indicators.csv,
//               section_indicators.md
//   prioritize  weights.csv, priorities.csv, buildings.csv,
//               buildings.geojson, section_prioritize.md
//   benefits    benefits.csv, section_benefits.md
//   report      report.md

#include <string>

#include "greenprior/config.hpp"

namespace greenprior {

/// Each returns a one-line summary for the console.
std::string run_extract(const PipelineConfig& cfg);
std::string run_indicators(const PipelineConfig& cfg);
std::string run_prioritize(const PipelineConfig& cfg);
std::string run_benefits(const PipelineConfig& cfg);
std::string run_report(const PipelineConfig& cfg);

} // namespace greenprior
