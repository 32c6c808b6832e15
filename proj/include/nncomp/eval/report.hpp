#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nncomp/eval/experiment.hpp"

namespace nncomp::eval {

// "84.69 ± 0.33": accuracy as percent, two decimals, population std.
std::string format_mean_std(double mean, double stddev);

// Per-seed accuracies, one row per (cell, seed):
//   model,context,time,corruption,seed,accuracy
// Accuracy keeps full precision so mean/std are recomputable from the file.
void write_report_csv(const std::filesystem::path& path, const std::vector<CellResult>& results);

// Per-cell aggregates: model,context,time,corruption,mean,std (percent).
void write_summary_csv(const std::filesystem::path& path, const std::vector<CellResult>& results);

// Human-readable rendition of the results table: one block per time
// aspect, rows per model, columns context x corruption.
std::string render_summary_table(const std::vector<CellResult>& results);

struct ReportRow {
    std::string model, context, time, corruption;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
};

std::vector<ReportRow> load_report_rows(const std::filesystem::path& path);

}  // namespace nncomp::eval
