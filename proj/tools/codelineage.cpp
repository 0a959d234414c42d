#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "codelineage/config.hpp"
#include "codelineage/error.hpp"
#include "codelineage/pipeline.hpp"
#include "codelineage/server.hpp"

namespace fs = std::filesystem;
using namespace codelineage;

namespace {

struct Common {
  std::optional<std::string> config;
  std::optional<unsigned> threads;
  std::optional<std::string> corpus;
};

void add_common(CLI::App* cmd, Common& c, bool needs_corpus = true) {
  cmd->add_option("--config", c.config, "Configuration file (key = value)");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  if (needs_corpus) cmd->add_option("--corpus", c.corpus, "Path to corpus.json");
}

// Config file, then CODELINEAGE_THREADS, then flags.
PipelineConfig resolve(const Common& c) {
  PipelineConfig cfg = c.config ? load_config(*c.config) : PipelineConfig::defaults();
  if (auto env = threads_from_env()) cfg.threads = *env;
  if (c.threads) cfg.threads = *c.threads;
  if (c.corpus) cfg.corpus_path = *c.corpus;
  return cfg;
}

void require_corpus(const PipelineConfig& cfg) {
  if (cfg.corpus_path.empty()) throw Error(ErrorKind::Config, "no corpus given (use --corpus or the corpus key)");
}

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (!out) {
    std::cout << text;
    return;
  }
  genealogy::write_text_file(*out, text);
}

std::vector<std::string> read_ids(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot read {}", path.string()));
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(b, e - b + 1));
  }
  return ids;
}

ViewServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source-code lineage analysis for timestamped specimen corpora"};
  app.set_version_flag("--version", CODELINEAGE_VERSION);
  app.require_subcommand(1);

  // ingest
  Common ingest_c;
  std::optional<std::string> ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Load a corpus and print its serialized form");
  add_common(ingest, ingest_c);
  ingest->add_option("--out", ingest_out, "Output file (default stdout)");

  // metrics
  Common metrics_c;
  std::optional<std::string> metrics_out, metrics_report;
  std::optional<double> cocomo_a, cocomo_b;
  auto* metrics_cmd = app.add_subcommand("metrics", "Per-specimen metrics CSV and yearly series JSON");
  add_common(metrics_cmd, metrics_c);
  metrics_cmd->add_option("--out", metrics_out, "Directory for metrics.csv and metrics.json (default: CSV to stdout)");
  metrics_cmd->add_option("--cwe-report", metrics_report, "Analyzer report (XML or CSV) for the CWE column");
  metrics_cmd->add_option("--cocomo-a", cocomo_a, "COCOMO coefficient a");
  metrics_cmd->add_option("--cocomo-b", cocomo_b, "COCOMO exponent b");

  // clones
  Common clones_c;
  std::optional<std::string> clones_out;
  std::optional<double> threshold, max_fraction;
  std::optional<std::size_t> min_tokens;
  auto* clones_cmd = app.add_subcommand("clones", "Cross-specimen function clones as JSON Lines");
  add_common(clones_cmd, clones_c);
  clones_cmd->add_option("--threshold", threshold, "Similarity threshold in (0, 1]");
  clones_cmd->add_option("--min-tokens", min_tokens, "Minimum function size in tokens");
  clones_cmd->add_option("--max-fraction", max_fraction, "Ubiquity cut as a fraction of specimens");
  clones_cmd->add_option("--out", clones_out, "Output file (default stdout)");

  // tags
  Common tags_c;
  std::optional<std::string> tags_out, lexicon_dir;
  auto* tags_cmd = app.add_subcommand("tags", "Normalized function tags as JSON Lines");
  add_common(tags_cmd, tags_c);
  tags_cmd->add_option("--lexicon", lexicon_dir, "Directory with words.txt, abbrev.tsv, whitelist.txt, blacklist.txt");
  tags_cmd->add_option("--out", tags_out, "Output file (default stdout)");

  // scan
  Common scan_c;
  std::string scan_kind = "api";
  std::optional<std::string> scan_list, scan_periods;
  std::optional<std::size_t> scan_top;
  auto* scan_cmd = app.add_subcommand("scan", "Top identifiers per period");
  add_common(scan_cmd, scan_c);
  scan_cmd->add_option("--kind", scan_kind, "syscall or api")->check(CLI::IsMember({"syscall", "api"}));
  scan_cmd->add_option("--list", scan_list, "Identifier list file");
  scan_cmd->add_option("--periods", scan_periods, "Comma-separated year ranges, e.g. 1976-1995,1996-2000");
  scan_cmd->add_option("--top", scan_top, "Identifiers per period");

  // enrich
  Common enrich_c;
  std::string derived_file;
  std::optional<std::string> enrich_report;
  int cwe_id = 0;
  auto* enrich = app.add_subcommand("enrich", "CWE enrichment of a derived specimen set");
  add_common(enrich, enrich_c);
  enrich->add_option("--derived", derived_file, "File listing derived specimen ids")->required();
  enrich->add_option("--cwe", cwe_id, "CWE number")->required()->check(CLI::PositiveNumber);
  enrich->add_option("--report", enrich_report, "Analyzer report (XML or CSV)");

  // genealogy
  Common gen_c;
  std::vector<std::string> labels;
  std::optional<int> max_depth;
  std::optional<std::string> gen_out, focus;
  auto* gen = app.add_subcommand("genealogy", "Build the genealogy and export view JSON");
  add_common(gen, gen_c);
  gen->add_option("--label", labels, "Label slot(s) to export category views for (default: all)");
  gen->add_option("--max-depth", max_depth, "Lineage depth for --focus")->check(CLI::NonNegativeNumber);
  gen->add_option("--out", gen_out, "Export directory");
  gen->add_option("--focus", focus, "Print the lineage of this specimen");

  // run
  Common run_c;
  std::optional<std::string> run_out;
  auto* run = app.add_subcommand("run", "Full pipeline; writes every artifact");
  add_common(run, run_c);
  run->add_option("--out", run_out, "Output directory");

  // serve
  std::string serve_dir, serve_host = "127.0.0.1";
  int serve_port = 8080;
  std::optional<int> serve_depth;
  std::optional<std::string> ui_dir;
  auto* serve = app.add_subcommand("serve", "Serve an export directory over HTTP");
  serve->add_option("--dir", serve_dir, "Export directory")->required();
  serve->add_option("--port", serve_port, "Port");
  serve->add_option("--host", serve_host, "Bind address");
  serve->add_option("--ui", ui_dir, "Static UI directory mounted at /");
  serve->add_option("--depth", serve_depth, "Default lineage depth")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      PipelineConfig cfg = resolve(ingest_c);
      require_corpus(cfg);
      const Corpus corpus = load_corpus(cfg.corpus_path, cfg.threads);
      emit(ingest_out, genealogy::to_text(corpus_json(corpus)));
    } else if (*metrics_cmd) {
      PipelineConfig cfg = resolve(metrics_c);
      if (cocomo_a) cfg.cocomo.a = *cocomo_a;
      if (cocomo_b) cfg.cocomo.b = *cocomo_b;
      if (metrics_report) cfg.cwe_report = *metrics_report;
      require_corpus(cfg);
      validate(cfg);
      const auto meta = pipeline::run_meta(cfg);
      const Corpus corpus = load_corpus(cfg.corpus_path, cfg.threads);
      const auto parsed = pipeline::parse_corpus(corpus, cfg.threads);
      const auto sys = pipeline::run_scan(corpus, scan::load_identifier_list(cfg.syscall_list, scan::ListKind::Syscall),
                                          cfg.periods, cfg.top_k, cfg.threads);
      const auto api = pipeline::run_scan(corpus, scan::load_identifier_list(cfg.api_list, scan::ListKind::Api),
                                          cfg.periods, cfg.top_k, cfg.threads);
      std::optional<scan::CweReport> report;
      if (cfg.cwe_report) report = scan::ingest_cwe_findings(*cfg.cwe_report, corpus);
      const auto rows =
          pipeline::compute_metrics(corpus, parsed, cfg, report ? &report->findings : nullptr, &sys, &api);
      if (metrics_out) {
        genealogy::write_text_file(fs::path(*metrics_out) / "metrics.csv", pipeline::metrics_csv(rows, meta));
        genealogy::write_text_file(fs::path(*metrics_out) / "metrics.json",
                                   genealogy::to_text(pipeline::metrics_json(rows, meta)));
      } else {
        std::cout << pipeline::metrics_csv(rows, meta);
      }
    } else if (*clones_cmd) {
      PipelineConfig cfg = resolve(clones_c);
      if (threshold) cfg.clones.threshold = *threshold;
      if (min_tokens) cfg.clones.min_tokens = *min_tokens;
      if (max_fraction) cfg.clones.max_specimen_fraction = *max_fraction;
      require_corpus(cfg);
      validate(cfg);
      const Corpus corpus = load_corpus(cfg.corpus_path, cfg.threads);
      const auto parsed = pipeline::parse_corpus(corpus, cfg.threads);
      const auto edges = pipeline::detect_clones(corpus, pipeline::clone_inputs(parsed), cfg);
      emit(clones_out, pipeline::clones_jsonl(edges, pipeline::run_meta(cfg)));
    } else if (*tags_cmd) {
      PipelineConfig cfg = resolve(tags_c);
      if (lexicon_dir) cfg.lexicon_dir = *lexicon_dir;
      require_corpus(cfg);
      validate(cfg);
      const auto lexicon = tags::Lexicon::load(tags::LexiconPaths::in_directory(cfg.lexicon_dir));
      const Corpus corpus = load_corpus(cfg.corpus_path, cfg.threads);
      const auto parsed = pipeline::parse_corpus(corpus, cfg.threads);
      const auto fn_tags = pipeline::tag_functions(parsed, lexicon, cfg.threads);
      emit(tags_out, pipeline::tags_jsonl(parsed, fn_tags, pipeline::run_meta(cfg)));
    } else if (*scan_cmd) {
      PipelineConfig cfg = resolve(scan_c);
      const auto kind = scan::parse_list_kind(scan_kind);
      if (scan_periods) cfg.periods = scan::parse_periods(*scan_periods);
      if (scan_top) cfg.top_k = *scan_top;
      require_corpus(cfg);
      validate(cfg);
      const fs::path list_path = scan_list ? fs::path(*scan_list)
                                           : (kind == scan::ListKind::Syscall ? cfg.syscall_list : cfg.api_list);
      const auto list = scan::load_identifier_list(list_path, kind);
      const Corpus corpus = load_corpus(cfg.corpus_path, cfg.threads);
      const auto result = pipeline::run_scan(corpus, list, cfg.periods, cfg.top_k, cfg.threads);
      for (const auto& row : result.rows) std::cout << scan::format_row(row) << "\n";
    } else if (*enrich) {
      PipelineConfig cfg = resolve(enrich_c);
      if (enrich_report) cfg.cwe_report = *enrich_report;
      require_corpus(cfg);
      validate(cfg);
      if (!cfg.cwe_report) throw Error(ErrorKind::Config, "enrich needs --report or scan.cwe_report");
      const Corpus corpus = load_corpus(cfg.corpus_path, cfg.threads);
      const auto report = scan::ingest_cwe_findings(*cfg.cwe_report, corpus);
      const auto r = scan::cwe_enrichment(read_ids(derived_file), corpus, report.findings, cwe_id);
      nlohmann::ordered_json j;
      j["cwe"] = r.cwe_id;
      j["derived_hits"] = r.derived_hits;
      j["derived_total"] = r.derived_total;
      j["derived_rate"] = r.derived_rate;
      j["overall_hits"] = r.overall_hits;
      j["overall_total"] = r.overall_total;
      j["overall_rate"] = r.overall_rate;
      j["p_value"] = r.p_value;
      j["unattributed_findings"] = report.unattributed.size();
      std::cout << genealogy::to_text(j);
    } else if (*gen) {
      PipelineConfig cfg = resolve(gen_c);
      if (max_depth) cfg.max_depth = *max_depth;
      if (gen_out) cfg.output_dir = *gen_out;
      require_corpus(cfg);
      validate(cfg);
      std::vector<LabelSlot> slots;
      for (const auto& l : labels) slots.push_back(require_label_slot(l));
      if (slots.empty()) slots.assign(kLabelSlots.begin(), kLabelSlots.end());
      const auto meta = pipeline::run_meta(cfg);
      const auto lexicon = tags::Lexicon::load(tags::LexiconPaths::in_directory(cfg.lexicon_dir));
      const Corpus corpus = load_corpus(cfg.corpus_path, cfg.threads);
      const auto parsed = pipeline::parse_corpus(corpus, cfg.threads);
      const auto edges = pipeline::detect_clones(corpus, pipeline::clone_inputs(parsed), cfg);
      const auto fn_tags = pipeline::tag_functions(parsed, lexicon, cfg.threads);
      const auto g = genealogy::build_genealogy(corpus, genealogy::aggregate_to_specimens(edges, &fn_tags));
      std::vector<genealogy::CategoryView> views;
      for (LabelSlot s : slots) views.push_back(genealogy::build_category_view(g, s));
      genealogy::export_view_json(g, views, meta, cfg.output_dir);
      if (focus)
        std::cout << genealogy::to_text(genealogy::lineage_json(genealogy::lineage_of(g, *focus, cfg.max_depth), g));
    } else if (*run) {
      PipelineConfig cfg = resolve(run_c);
      if (run_out) cfg.output_dir = *run_out;
      require_corpus(cfg);
      const auto summary = pipeline::run_pipeline(cfg);
      std::cerr << fmt::format("{} specimens, {} functions, {} reuse edges, {} specimen edges -> {}\n",
                               summary.specimens, summary.functions, summary.reuse_edges, summary.specimen_edges,
                               cfg.output_dir.string());
    } else if (*serve) {
      ServerOptions opts;
      opts.export_dir = serve_dir;
      opts.host = serve_host;
      opts.port = serve_port;
      if (ui_dir) opts.ui_dir = fs::path(*ui_dir);
      if (serve_depth) opts.default_depth = *serve_depth;
      ViewServer server(opts);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << fmt::format("serving {} on http://{}:{}\n", serve_dir, serve_host, serve_port);
      if (!server.listen()) throw Error(ErrorKind::Io, fmt::format("cannot bind {}:{}", serve_host, serve_port));
      g_server = nullptr;
    }
  } catch (const Error& e) {
    std::cerr << fmt::format("codelineage: {}: {}\n", error_kind_name(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << fmt::format("codelineage: {}\n", e.what());
    return 1;
  }
  return 0;
}
