#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codelineage/clones.hpp"
#include "codelineage/metrics.hpp"
#include "codelineage/scan.hpp"

namespace codelineage {

struct PipelineConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path output_dir = "out";
  clones::CloneConfig clones;
  metrics::CocomoParams cocomo;
  metrics::FpRatioTable fp_ratios = metrics::default_fp_ratios();
  std::vector<scan::Period> periods;
  std::size_t top_k = 3;
  std::filesystem::path lexicon_dir;
  std::filesystem::path syscall_list;
  std::filesystem::path api_list;
  std::optional<std::filesystem::path> cwe_report;
  int max_depth = 3;
  unsigned threads = 1;

  // Shipped data directory: $CODELINEAGE_DATA if set, else the source tree.
  static std::filesystem::path default_data_dir();
  static PipelineConfig defaults();
};

inline constexpr std::string_view kDefaultPeriods = "1976-1995,1996-2000,2001-2005,2006-2010,2011-2015,2016-2020,2021-2025";

// `key = value` lines; `[section]` headers prefix keys with "section.".
// Values are quoted strings, numbers or booleans; '#' starts a comment.
// Relative paths resolve against `base_dir`. Unknown keys throw Error(Config).
void apply_config_text(PipelineConfig& cfg, std::string_view text, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

// Sets one key with the same parsing and range rules as the file form.
void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value,
                      const std::filesystem::path& base_dir);

// Throws Error(Config) on an out-of-range value.
void validate(const PipelineConfig& cfg);

// CODELINEAGE_THREADS, when set to a positive integer.
std::optional<unsigned> threads_from_env();

// Canonical key = value text of every setting that affects artifact
// contents; thread count and output directory are excluded.
std::string canonical_config(const PipelineConfig& cfg);
std::string config_digest(const PipelineConfig& cfg);

}  // namespace codelineage
