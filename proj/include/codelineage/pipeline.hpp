#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "codelineage/clones.hpp"
#include "codelineage/config.hpp"
#include "codelineage/corpus.hpp"
#include "codelineage/cparse/functions.hpp"
#include "codelineage/genealogy.hpp"
#include "codelineage/metrics.hpp"
#include "codelineage/scan.hpp"
#include "codelineage/tags.hpp"

namespace codelineage::pipeline {

genealogy::RunMeta run_meta(const PipelineConfig& cfg);

// Functions of every specimen, ordered by (specimen id, file, position).
struct ParsedCorpus {
  std::vector<cparse::FunctionUnit> functions;
  std::vector<metrics::LineCounts> lines;  // per specimen
  std::vector<std::size_t> diagnostics;    // per specimen
};

ParsedCorpus parse_corpus(const Corpus& corpus, unsigned threads);

struct ScanResult {
  scan::ListKind kind = scan::ListKind::Api;
  std::vector<scan::ScanHit> hits;
  std::vector<scan::PeriodRanking> rows;
};

ScanResult run_scan(const Corpus& corpus, const scan::IdentifierList& list, const std::vector<scan::Period>& periods,
                    std::size_t top_k, unsigned threads);

// Optional inputs fill the security and dependency columns.
std::vector<metrics::SpecimenMetrics> compute_metrics(const Corpus& corpus, const ParsedCorpus& parsed,
                                                      const PipelineConfig& cfg,
                                                      const std::vector<scan::CweFinding>* cwe = nullptr,
                                                      const ScanResult* syscalls = nullptr,
                                                      const ScanResult* apis = nullptr);

std::vector<metrics::YearlySeries> yearly_series(const std::vector<metrics::SpecimenMetrics>& specimens);

std::string metrics_csv(const std::vector<metrics::SpecimenMetrics>& specimens, const genealogy::RunMeta& meta);
nlohmann::ordered_json metrics_json(const std::vector<metrics::SpecimenMetrics>& specimens,
                                    const genealogy::RunMeta& meta);

std::vector<clones::CloneInput> clone_inputs(const ParsedCorpus& parsed);
// Clones oriented by specimen date.
std::vector<clones::ReuseEdge> detect_clones(const Corpus& corpus, const std::vector<clones::CloneInput>& inputs,
                                             const PipelineConfig& cfg);
std::string clones_jsonl(const std::vector<clones::ReuseEdge>& edges, const genealogy::RunMeta& meta);

genealogy::FunctionTags tag_functions(const ParsedCorpus& parsed, const tags::Lexicon& lexicon, unsigned threads);
std::string tags_jsonl(const ParsedCorpus& parsed, const genealogy::FunctionTags& tags,
                       const genealogy::RunMeta& meta);

nlohmann::ordered_json scan_json(const std::vector<ScanResult>& results, const genealogy::RunMeta& meta);

// Every artifact of a full run, written under cfg.output_dir:
// corpus.json, metrics.csv, metrics.json, clones.jsonl, functions.jsonl,
// scan.json, genealogy.json and category_<slot>.json for all eight slots.
struct RunSummary {
  std::size_t specimens = 0;
  std::size_t functions = 0;
  std::size_t reuse_edges = 0;
  std::size_t specimen_edges = 0;
  std::vector<std::filesystem::path> artifacts;
};

RunSummary run_pipeline(const PipelineConfig& cfg);

}  // namespace codelineage::pipeline
