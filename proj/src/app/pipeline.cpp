#include "codelineage/pipeline.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "codelineage/error.hpp"
#include "codelineage/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace codelineage::pipeline {

genealogy::RunMeta run_meta(const PipelineConfig& cfg) { return {CODELINEAGE_VERSION, config_digest(cfg)}; }

ParsedCorpus parse_corpus(const Corpus& corpus, unsigned threads) {
  struct PerSpecimen {
    std::vector<cparse::FunctionUnit> functions;
    metrics::LineCounts lines;
    std::size_t diagnostics = 0;
  };
  std::vector<PerSpecimen> per(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    const Specimen& s = corpus.specimens[i];
    auto& out = per[i];
    for (const auto& f : s.files) {
      const auto lexed = cparse::lex(f.text);
      const auto counts = metrics::classify_lines(lexed.tokens);
      out.lines.code_lines += counts.code_lines;
      out.lines.comment_lines += counts.comment_lines;
      auto extracted = cparse::extract_functions(lexed.tokens, f.rel_path.generic_string(), s.id);
      out.diagnostics += lexed.diagnostics.size() + extracted.diagnostics.size();
      std::move(extracted.units.begin(), extracted.units.end(), std::back_inserter(out.functions));
    }
  });
  ParsedCorpus parsed;
  for (auto& p : per) {
    std::move(p.functions.begin(), p.functions.end(), std::back_inserter(parsed.functions));
    parsed.lines.push_back(p.lines);
    parsed.diagnostics.push_back(p.diagnostics);
  }
  return parsed;
}

ScanResult run_scan(const Corpus& corpus, const scan::IdentifierList& list, const std::vector<scan::Period>& periods,
                    std::size_t top_k, unsigned threads) {
  ScanResult r;
  r.kind = list.kind;
  r.hits = scan::scan_corpus(corpus, list, threads);
  r.rows = scan::top_k_by_period(corpus, r.hits, top_k, periods);
  return r;
}

namespace {

std::map<std::string, std::uint64_t> distinct_per_specimen(const ScanResult& r) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& h : r.hits)
    if (h.specimen_presence) ++out[h.specimen_id];
  return out;
}

std::string num(double v) { return fmt::format("{}", v); }

template <typename T>
std::string opt(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string("NA");
}

template <typename T>
ordered_json opt_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string meta_line(const genealogy::RunMeta& meta) {
  return fmt::format("# codelineage {} config {}\n", meta.tool_version, meta.config_digest);
}

}  // namespace

std::vector<metrics::SpecimenMetrics> compute_metrics(const Corpus& corpus, const ParsedCorpus& parsed,
                                                      const PipelineConfig& cfg,
                                                      const std::vector<scan::CweFinding>* cwe,
                                                      const ScanResult* syscalls, const ScanResult* apis) {
  std::map<std::string, std::uint64_t> cwe_counts, sys_counts, api_counts;
  if (cwe != nullptr)
    for (const auto& f : *cwe) ++cwe_counts[f.specimen_id];
  if (syscalls != nullptr) sys_counts = distinct_per_specimen(*syscalls);
  if (apis != nullptr) api_counts = distinct_per_specimen(*apis);

  std::vector<metrics::SpecimenMetrics> out;
  out.reserve(corpus.size());
  std::size_t fn = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Specimen& s = corpus.specimens[i];
    metrics::SpecimenMetrics m;
    m.specimen_id = s.id;
    m.year = s.date.year;
    m.scale.sloc = parsed.lines[i].code_lines;
    m.scale.file_count = s.files.size();
    if (auto it = cfg.fp_ratios.find(s.language); it != cfg.fp_ratios.end()) {
      m.scale.function_points = metrics::estimate_function_points(m.scale, s.language, cfg.fp_ratios);
      m.function_points = m.scale.function_points;
    }
    m.cocomo = metrics::cocomo(m.scale.sloc, cfg.cocomo);
    m.quality.comment_to_code = metrics::comment_ratio(parsed.lines[i]);
    metrics::PathCount paths{0, -std::numeric_limits<double>::infinity()};
    double cc_sum = 0.0;
    for (; fn < parsed.functions.size() && parsed.functions[fn].specimen_id == s.id; ++fn) {
      const auto& unit = parsed.functions[fn];
      const auto cc = metrics::cyclomatic_complexity(unit.body_ast);
      m.cyclomatic_per_function.push_back(cc);
      cc_sum += cc;
      paths = metrics::saturating_sum(paths, metrics::execution_paths(unit.body_ast));
    }
    if (!m.cyclomatic_per_function.empty()) {
      m.quality.mean_cyclomatic = cc_sum / static_cast<double>(m.cyclomatic_per_function.size());
      m.quality.total_exec_paths = paths.value;
      m.quality.total_exec_paths_log10 = paths.log10;
    }
    if (cwe != nullptr) m.cwe_findings = cwe_counts[s.id];
    if (syscalls != nullptr) m.syscalls = sys_counts[s.id];
    if (apis != nullptr) m.apis = api_counts[s.id];
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<metrics::YearlySeries> yearly_series(const std::vector<metrics::SpecimenMetrics>& specimens) {
  using M = metrics::SpecimenMetrics;
  using Extract = std::optional<double> (*)(const M&);
  static const std::pair<const char*, Extract> kMetrics[] = {
      {"sloc", [](const M& m) -> std::optional<double> { return static_cast<double>(m.scale.sloc); }},
      {"files", [](const M& m) -> std::optional<double> { return static_cast<double>(m.scale.file_count); }},
      {"function_points", [](const M& m) { return m.function_points; }},
      {"effort_pm", [](const M& m) -> std::optional<double> { return m.cocomo.effort_pm; }},
      {"dev_time_months", [](const M& m) -> std::optional<double> { return m.cocomo.dev_time_months; }},
      {"team_size", [](const M& m) -> std::optional<double> { return m.cocomo.team_size; }},
      {"comment_ratio", [](const M& m) -> std::optional<double> { return m.quality.comment_to_code; }},
      {"mean_cyclomatic",
       [](const M& m) -> std::optional<double> {
         if (m.cyclomatic_per_function.empty()) return std::nullopt;
         return m.quality.mean_cyclomatic;
       }},
      {"exec_paths_log10",
       [](const M& m) -> std::optional<double> {
         if (m.cyclomatic_per_function.empty()) return std::nullopt;
         return m.quality.total_exec_paths_log10;
       }},
      {"cwe_findings",
       [](const M& m) -> std::optional<double> {
         if (!m.cwe_findings) return std::nullopt;
         return static_cast<double>(*m.cwe_findings);
       }},
      {"syscalls",
       [](const M& m) -> std::optional<double> {
         if (!m.syscalls) return std::nullopt;
         return static_cast<double>(*m.syscalls);
       }},
      {"apis",
       [](const M& m) -> std::optional<double> {
         if (!m.apis) return std::nullopt;
         return static_cast<double>(*m.apis);
       }},
  };
  std::vector<metrics::YearlySeries> out;
  for (const auto& [name, extract] : kMetrics) {
    std::vector<metrics::YearValue> values;
    for (const auto& s : specimens)
      if (auto v = extract(s)) values.push_back({s.year, *v});
    if (!values.empty()) out.push_back(metrics::aggregate_yearly(name, values));
  }
  return out;
}

std::string metrics_csv(const std::vector<metrics::SpecimenMetrics>& specimens, const genealogy::RunMeta& meta) {
  std::string out = meta_line(meta);
  out +=
      "id,year,sloc,files,function_points,effort_pm,dev_time_months,team_size,comment_ratio,mean_cyclomatic,"
      "exec_paths,exec_paths_log10,cwe_findings,syscalls,apis\n";
  for (const auto& m : specimens) {
    const bool has_fns = !m.cyclomatic_per_function.empty();
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", m.specimen_id, m.year, m.scale.sloc,
                       m.scale.file_count, opt(m.function_points), num(m.cocomo.effort_pm),
                       num(m.cocomo.dev_time_months), num(m.cocomo.team_size), num(m.quality.comment_to_code),
                       num(m.quality.mean_cyclomatic), has_fns ? std::to_string(m.quality.total_exec_paths) : "0",
                       has_fns ? num(m.quality.total_exec_paths_log10) : "NA", opt(m.cwe_findings), opt(m.syscalls),
                       opt(m.apis));
  }
  return out;
}

ordered_json metrics_json(const std::vector<metrics::SpecimenMetrics>& specimens, const genealogy::RunMeta& meta) {
  ordered_json doc;
  doc["schema"] = genealogy::kSchemaVersion;
  doc["meta"] = genealogy::meta_json(meta);
  ordered_json rows = ordered_json::array();
  for (const auto& m : specimens) {
    const bool has_fns = !m.cyclomatic_per_function.empty();
    ordered_json j;
    j["id"] = m.specimen_id;
    j["year"] = m.year;
    j["sloc"] = m.scale.sloc;
    j["files"] = m.scale.file_count;
    j["function_points"] = opt_json(m.function_points);
    j["effort_pm"] = m.cocomo.effort_pm;
    j["dev_time_months"] = m.cocomo.dev_time_months;
    j["team_size"] = m.cocomo.team_size;
    j["comment_ratio"] = m.quality.comment_to_code;
    j["mean_cyclomatic"] = m.quality.mean_cyclomatic;
    j["cyclomatic"] = m.cyclomatic_per_function;
    j["exec_paths"] = m.quality.total_exec_paths;
    j["exec_paths_log10"] = has_fns ? ordered_json(m.quality.total_exec_paths_log10) : ordered_json(nullptr);
    j["cwe_findings"] = opt_json(m.cwe_findings);
    j["syscalls"] = opt_json(m.syscalls);
    j["apis"] = opt_json(m.apis);
    rows.push_back(std::move(j));
  }
  doc["specimens"] = std::move(rows);
  ordered_json series = ordered_json::array();
  if (!specimens.empty()) {
    for (const auto& s : yearly_series(specimens)) {
      ordered_json j;
      j["metric"] = s.metric_name;
      ordered_json raw = ordered_json::object(), points = ordered_json::object();
      for (const auto& [y, v] : s.raw) raw[std::to_string(y)] = v;
      for (const auto& [y, v] : s.points) points[std::to_string(y)] = v;
      j["raw"] = std::move(raw);
      j["normalized"] = std::move(points);
      series.push_back(std::move(j));
    }
  }
  doc["series"] = std::move(series);
  return doc;
}

std::vector<clones::CloneInput> clone_inputs(const ParsedCorpus& parsed) {
  std::vector<clones::CloneInput> out;
  out.reserve(parsed.functions.size());
  for (const auto& f : parsed.functions) out.push_back(clones::make_clone_input(f));
  return out;
}

std::vector<clones::ReuseEdge> detect_clones(const Corpus& corpus, const std::vector<clones::CloneInput>& inputs,
                                             const PipelineConfig& cfg) {
  clones::CloneConfig cc = cfg.clones;
  cc.corpus_specimens = corpus.size();
  cc.threads = cfg.threads;
  auto edges = clones::find_clones(inputs, cc);
  genealogy::orient_edges(edges, corpus);
  return edges;
}

std::string clones_jsonl(const std::vector<clones::ReuseEdge>& edges, const genealogy::RunMeta& meta) {
  std::string out = ordered_json{{"meta", genealogy::meta_json(meta)}}.dump() + "\n";
  for (const auto& e : edges) {
    ordered_json j;
    j["src_specimen"] = e.src_specimen;
    j["src_fn"] = e.src_name;
    j["src_file"] = e.src_file;
    j["src_line"] = e.src_line;
    j["dst_specimen"] = e.dst_specimen;
    j["dst_fn"] = e.dst_name;
    j["dst_file"] = e.dst_file;
    j["dst_line"] = e.dst_line;
    j["similarity"] = e.similarity;
    j["weight"] = e.weight;
    j["ambiguous_direction"] = e.ambiguous_direction;
    out += j.dump() + "\n";
  }
  return out;
}

genealogy::FunctionTags tag_functions(const ParsedCorpus& parsed, const tags::Lexicon& lexicon, unsigned threads) {
  const tags::FrequencyKeywordExtractor extractor(lexicon);
  genealogy::FunctionTags out(parsed.functions.size());
  parallel_for(parsed.functions.size(), threads, [&](std::size_t i) {
    out[i] = tags::normalize_tags(tags::extract_raw_tags(parsed.functions[i], extractor), lexicon).tags();
  });
  return out;
}

std::string tags_jsonl(const ParsedCorpus& parsed, const genealogy::FunctionTags& tags,
                       const genealogy::RunMeta& meta) {
  std::string out = ordered_json{{"meta", genealogy::meta_json(meta)}}.dump() + "\n";
  for (std::size_t i = 0; i < parsed.functions.size(); ++i) {
    const auto& f = parsed.functions[i];
    ordered_json j;
    j["specimen"] = f.specimen_id;
    j["file"] = f.file;
    j["name"] = f.name;
    j["start_line"] = f.start_line;
    j["end_line"] = f.end_line;
    j["tokens"] = f.tokens.size();
    j["tags"] = i < tags.size() ? tags[i] : std::vector<std::string>{};
    out += j.dump() + "\n";
  }
  return out;
}

ordered_json scan_json(const std::vector<ScanResult>& results, const genealogy::RunMeta& meta) {
  ordered_json doc;
  doc["schema"] = genealogy::kSchemaVersion;
  doc["meta"] = genealogy::meta_json(meta);
  ordered_json lists = ordered_json::array();
  for (const auto& r : results) {
    ordered_json j;
    j["kind"] = std::string(scan::list_kind_name(r.kind));
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
      ordered_json rj;
      rj["period"] = row.period.label();
      ordered_json top = ordered_json::array();
      for (const auto& t : row.top) top.push_back({{"identifier", t.identifier}, {"specimens", t.specimens}});
      rj["top"] = std::move(top);
      rj["row"] = scan::format_row(row);
      rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    ordered_json hits = ordered_json::array();
    for (const auto& h : r.hits)
      hits.push_back({{"specimen", h.specimen_id}, {"identifier", h.identifier}, {"count", h.occurrence_count}});
    j["hits"] = std::move(hits);
    lists.push_back(std::move(j));
  }
  doc["lists"] = std::move(lists);
  return doc;
}

RunSummary run_pipeline(const PipelineConfig& cfg) {
  validate(cfg);
  const auto meta = run_meta(cfg);
  const unsigned threads = cfg.threads;
  const Corpus corpus = load_corpus(cfg.corpus_path, threads);
  const tags::Lexicon lexicon = tags::Lexicon::load(tags::LexiconPaths::in_directory(cfg.lexicon_dir));
  const auto syscall_list = scan::load_identifier_list(cfg.syscall_list, scan::ListKind::Syscall);
  const auto api_list = scan::load_identifier_list(cfg.api_list, scan::ListKind::Api);

  const ParsedCorpus parsed = parse_corpus(corpus, threads);
  const ScanResult sys = run_scan(corpus, syscall_list, cfg.periods, cfg.top_k, threads);
  const ScanResult api = run_scan(corpus, api_list, cfg.periods, cfg.top_k, threads);
  std::optional<scan::CweReport> report;
  if (cfg.cwe_report) report = scan::ingest_cwe_findings(*cfg.cwe_report, corpus);
  const auto specimen_metrics =
      compute_metrics(corpus, parsed, cfg, report ? &report->findings : nullptr, &sys, &api);

  const auto inputs = clone_inputs(parsed);
  const auto edges = detect_clones(corpus, inputs, cfg);
  const auto fn_tags = tag_functions(parsed, lexicon, threads);
  const auto g = genealogy::build_genealogy(corpus, genealogy::aggregate_to_specimens(edges, &fn_tags));
  std::vector<genealogy::CategoryView> views;
  for (LabelSlot slot : kLabelSlots) views.push_back(genealogy::build_category_view(g, slot));

  RunSummary summary;
  const fs::path& out = cfg.output_dir;
  auto write = [&](const std::string& name, const std::string& text) {
    genealogy::write_text_file(out / name, text);
    summary.artifacts.push_back(out / name);
  };
  ordered_json corpus_doc;
  corpus_doc["schema"] = genealogy::kSchemaVersion;
  corpus_doc["meta"] = genealogy::meta_json(meta);
  corpus_doc["specimens"] = corpus_json(corpus);
  write("corpus.json", genealogy::to_text(corpus_doc));
  write("metrics.csv", metrics_csv(specimen_metrics, meta));
  write("metrics.json", genealogy::to_text(metrics_json(specimen_metrics, meta)));
  write("clones.jsonl", clones_jsonl(edges, meta));
  write("functions.jsonl", tags_jsonl(parsed, fn_tags, meta));
  write("scan.json", genealogy::to_text(scan_json({sys, api}, meta)));
  if (report) {
    ordered_json doc;
    doc["schema"] = genealogy::kSchemaVersion;
    doc["meta"] = genealogy::meta_json(meta);
    auto findings = [](const std::vector<scan::CweFinding>& list) {
      ordered_json arr = ordered_json::array();
      for (const auto& f : list)
        arr.push_back({{"specimen", f.specimen_id}, {"cwe", f.cwe_id}, {"file", f.file}, {"line", f.line},
                       {"message", f.message}});
      return arr;
    };
    doc["findings"] = findings(report->findings);
    doc["unattributed"] = findings(report->unattributed);
    write("cwe.json", genealogy::to_text(doc));
  }
  write("genealogy.json", genealogy::to_text(genealogy::genealogy_json(g, meta)));
  for (const auto& v : views)
    write(fmt::format("category_{}.json", label_slot_name(v.slot)), genealogy::to_text(genealogy::category_json(v, meta)));

  summary.specimens = corpus.size();
  summary.functions = parsed.functions.size();
  summary.reuse_edges = edges.size();
  summary.specimen_edges = g.edges.size();
  return summary;
}

}  // namespace codelineage::pipeline
