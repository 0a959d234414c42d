#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "codelineage/corpus.hpp"
#include "codelineage/cparse/ast.hpp"
#include "codelineage/cparse/lexer.hpp"

namespace codelineage::metrics {

struct ScaleMetrics {
  std::uint64_t sloc = 0;
  std::uint64_t file_count = 0;
  double function_points = 0.0;
};

struct CocomoParams {
  double a = 2.4;
  double b = 1.05;
};

struct CocomoEstimate {
  double effort_pm = 0.0;
  double dev_time_months = 0.0;
  double team_size = 0.0;
};

struct QualityMetrics {
  double comment_to_code = 0.0;
  double mean_cyclomatic = 0.0;  // 0 when the specimen has no functions
  std::uint64_t total_exec_paths = 0;  // saturating
  double total_exec_paths_log10 = 0.0;
};

// Backfiring ratios: SLOC per function point.
using FpRatioTable = std::map<Language, double>;
FpRatioTable default_fp_ratios();

struct LineCounts {
  std::uint64_t code_lines = 0;
  std::uint64_t comment_lines = 0;
};

// A line counts as code when any non-comment, non-whitespace token touches
// it; as a comment line when it holds non-blank comment text and no code.
LineCounts classify_lines(const std::vector<cparse::Token>& tokens);
LineCounts classify_lines(const SourceFile& file);

std::uint64_t count_sloc(const SourceFile& file);
double comment_ratio(const SourceFile& file);
double comment_ratio(const LineCounts& counts);

double estimate_function_points(const ScaleMetrics& scale, Language lang, const FpRatioTable& ratios = default_fp_ratios());

double cocomo_effort(std::uint64_t sloc_total, const CocomoParams& params = {});
double cocomo_dev_time(double effort_pm);
double cocomo_team_size(double effort_pm, double dev_time_months);
CocomoEstimate cocomo(std::uint64_t sloc_total, const CocomoParams& params = {});

std::uint32_t cyclomatic_complexity(const cparse::AstNode& body);

inline constexpr std::uint64_t kPathSaturation = (std::uint64_t{1} << 63) - 1;

struct PathCount {
  std::uint64_t value = 1;  // saturates at kPathSaturation
  double log10 = 0.0;       // exact log10 of the unsaturated count
};

// NPATH-style count over the statement tree.
PathCount execution_paths(const cparse::AstNode& body);

PathCount saturating_sum(PathCount a, PathCount b);
PathCount saturating_product(PathCount a, PathCount b);

struct SpecimenMetrics {
  std::string specimen_id;
  int year = 0;
  ScaleMetrics scale;
  std::optional<double> function_points;  // absent when the language has no ratio
  CocomoEstimate cocomo;
  QualityMetrics quality;
  std::vector<std::uint32_t> cyclomatic_per_function;
  // Security and dependency columns; filled when the inputs are available.
  std::optional<std::uint64_t> cwe_findings;
  std::optional<std::uint64_t> syscalls;
  std::optional<std::uint64_t> apis;
};

struct YearlySeries {
  std::string metric_name;
  std::map<int, double> points;  // normalized to [0, 1]
  std::map<int, double> raw;     // per-year mean
};

struct YearValue {
  int year = 0;
  double value = 0.0;
};

// Mean per year, then min-max normalized across years. A constant series
// normalizes to 0.5. Throws Error(EmptyCorpus) on empty input.
YearlySeries aggregate_yearly(const std::string& metric_name, const std::vector<YearValue>& values);

template <typename Extract>
YearlySeries aggregate_yearly(const std::string& metric_name, const std::vector<SpecimenMetrics>& specimens,
                              Extract&& extract) {
  std::vector<YearValue> values;
  values.reserve(specimens.size());
  for (const auto& s : specimens) {
    if (auto v = extract(s)) values.push_back({s.year, *v});
  }
  return aggregate_yearly(metric_name, values);
}

}  // namespace codelineage::metrics
