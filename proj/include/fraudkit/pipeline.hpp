#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraudkit/config.hpp"
#include "fraudkit/metrics.hpp"

namespace fraudkit {

// Per-stage seeds are the master seed plus a fixed offset, so any stage can be
// re-run in isolation with a known seed.
namespace seed_offset {
inline constexpr std::uint64_t kGenerate = 1;
inline constexpr std::uint64_t kUndersample = 2;
inline constexpr std::uint64_t kSplit = 3;
inline constexpr std::uint64_t kTrainBase = 10;  // + model index in kAllModelKinds
}  // namespace seed_offset

struct PipelineResult {
    std::vector<EvalReport> reports;
    std::string manifest_json;               // exact bytes of <out>/manifest.json
    std::vector<std::string> written_files;  // paths of every artifact
    std::vector<std::string> warnings;
};

// Runs load -> undersample -> scale -> correlate -> outlier-filter -> split ->
// train -> evaluate and writes subsample.csv, correlation.csv, per-model
// model/roc files, report.{table,json,csv} and manifest.json into
// config.out_dir. Any stage failure removes the artifacts written so far and
// rethrows with the stage name attached.
PipelineResult run_pipeline(const PipelineConfig& config);

// Text summary of the configured input: n, d, class balance, per-feature
// min/max/mean/stddev, and the missing-value check.
std::string inspect_input(const PipelineConfig& config);
std::string inspect_csv(const std::string& path, const std::string& label_column);

// Re-render report output from a previously written manifest.
std::string render_report_from_manifest(const std::string& manifest_path, ReportFormat format);

}  // namespace fraudkit
