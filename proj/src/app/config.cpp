#include "codelineage/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "codelineage/error.hpp"

namespace fs = std::filesystem;

namespace codelineage {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
    return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

double to_double(std::string_view key, std::string_view v) {
  const std::string s(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) config_error(fmt::format("{}: '{}' is not a number", key, v));
  return d;
}

long long to_int(std::string_view key, std::string_view v) {
  long long x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
    config_error(fmt::format("{}: '{}' is not an integer", key, v));
  return x;
}

fs::path to_path(std::string_view v, const fs::path& base_dir) {
  fs::path p(unquote(v));
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.lexically_normal();
}

// Strips a trailing comment that is outside quotes.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string format_double(double d) { return fmt::format("{}", d); }

}  // namespace

fs::path PipelineConfig::default_data_dir() {
  if (const char* env = std::getenv("CODELINEAGE_DATA"); env != nullptr && *env != '\0') return env;
#ifdef CODELINEAGE_DATA_DIR
  return CODELINEAGE_DATA_DIR;
#else
  return "data";
#endif
}

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig cfg;
  const fs::path data = default_data_dir();
  cfg.lexicon_dir = data / "lexicon";
  cfg.syscall_list = data / "lists" / "syscalls.txt";
  cfg.api_list = data / "lists" / "apis.txt";
  cfg.periods = scan::parse_periods(kDefaultPeriods);
  return cfg;
}

void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view raw, const fs::path& base_dir) {
  const std::string_view value = trim(raw);
  const std::string text = unquote(value);
  auto positive_int = [&](long long lo) {
    const long long x = to_int(key, text);
    if (x < lo) config_error(fmt::format("{} must be at least {}", key, lo));
    return x;
  };
  if (key == "corpus") cfg.corpus_path = to_path(value, base_dir);
  else if (key == "output_dir") cfg.output_dir = to_path(value, base_dir);
  else if (key == "threads") cfg.threads = static_cast<unsigned>(positive_int(1));
  else if (key == "clone.threshold") cfg.clones.threshold = to_double(key, text);
  else if (key == "clone.min_tokens") cfg.clones.min_tokens = static_cast<std::size_t>(positive_int(1));
  else if (key == "clone.max_specimen_fraction") cfg.clones.max_specimen_fraction = to_double(key, text);
  else if (key == "clone.projections") cfg.clones.projections = static_cast<std::size_t>(positive_int(1));
  else if (key == "clone.bucket_width") cfg.clones.bucket_width = to_double(key, text);
  else if (key == "clone.seed") cfg.clones.seed = static_cast<std::uint64_t>(positive_int(0));
  else if (key == "cocomo.a") cfg.cocomo.a = to_double(key, text);
  else if (key == "cocomo.b") cfg.cocomo.b = to_double(key, text);
  else if (key == "fp.c") cfg.fp_ratios[Language::C] = to_double(key, text);
  else if (key == "fp.cpp") cfg.fp_ratios[Language::Cpp] = to_double(key, text);
  else if (key == "fp.other") cfg.fp_ratios[Language::Other] = to_double(key, text);
  else if (key == "scan.periods") cfg.periods = scan::parse_periods(text);
  else if (key == "scan.top_k") cfg.top_k = static_cast<std::size_t>(positive_int(1));
  else if (key == "scan.syscall_list") cfg.syscall_list = to_path(value, base_dir);
  else if (key == "scan.api_list") cfg.api_list = to_path(value, base_dir);
  else if (key == "scan.cwe_report") cfg.cwe_report = to_path(value, base_dir);
  else if (key == "tags.lexicon_dir") cfg.lexicon_dir = to_path(value, base_dir);
  else if (key == "lineage.max_depth") cfg.max_depth = static_cast<int>(positive_int(0));
  else config_error(fmt::format("unknown config key '{}'", key));
}

void apply_config_text(PipelineConfig& cfg, std::string_view text, const fs::path& base_dir) {
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_error(fmt::format("config line {}: malformed section header", line_no));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error(fmt::format("config line {}: expected key = value", line_no));
    const std::string_view key = trim(line.substr(0, eq));
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    set_config_value(cfg, full, line.substr(eq + 1), base_dir);
  }
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error(fmt::format("cannot read config {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  PipelineConfig cfg = PipelineConfig::defaults();
  apply_config_text(cfg, buf.str(), path.parent_path());
  return cfg;
}

void validate(const PipelineConfig& cfg) {
  clones::validate(cfg.clones);
  if (!(cfg.cocomo.a > 0.0) || !(cfg.cocomo.b > 0.0)) config_error("cocomo.a and cocomo.b must be positive");
  for (const auto& [lang, ratio] : cfg.fp_ratios)
    if (!(ratio > 0.0)) config_error(fmt::format("function-point ratio for {} must be positive", language_name(lang)));
  if (cfg.periods.empty()) config_error("at least one scan period is required");
  if (cfg.top_k < 1) config_error("scan.top_k must be at least 1");
  if (cfg.max_depth < 0) config_error("lineage.max_depth must not be negative");
  if (cfg.threads < 1) config_error("threads must be at least 1");
}

std::optional<unsigned> threads_from_env() {
  const char* env = std::getenv("CODELINEAGE_THREADS");
  if (env == nullptr || *env == '\0') return std::nullopt;
  const std::string_view v(env);
  unsigned n = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc{} || ptr != v.data() + v.size() || n == 0)
    config_error(fmt::format("CODELINEAGE_THREADS='{}' is not a positive integer", v));
  return n;
}

std::string canonical_config(const PipelineConfig& cfg) {
  std::string out;
  auto line = [&](std::string_view k, const std::string& v) { out += fmt::format("{} = {}\n", k, v); };
  line("clone.bucket_width", format_double(cfg.clones.bucket_width));
  line("clone.max_specimen_fraction", format_double(cfg.clones.max_specimen_fraction));
  line("clone.min_tokens", std::to_string(cfg.clones.min_tokens));
  line("clone.projections", std::to_string(cfg.clones.projections));
  line("clone.seed", std::to_string(cfg.clones.seed));
  line("clone.threshold", format_double(cfg.clones.threshold));
  line("cocomo.a", format_double(cfg.cocomo.a));
  line("cocomo.b", format_double(cfg.cocomo.b));
  line("corpus", cfg.corpus_path.generic_string());
  for (const auto& [lang, ratio] : cfg.fp_ratios) {
    const char* suffix = lang == Language::C ? "c" : lang == Language::Cpp ? "cpp" : "other";
    line(fmt::format("fp.{}", suffix), format_double(ratio));
  }
  line("lineage.max_depth", std::to_string(cfg.max_depth));
  line("scan.api_list", cfg.api_list.generic_string());
  line("scan.cwe_report", cfg.cwe_report ? cfg.cwe_report->generic_string() : "");
  std::string periods;
  for (const auto& p : cfg.periods) periods += (periods.empty() ? "" : ",") + fmt::format("{}-{}", p.first_year, p.last_year);
  line("scan.periods", periods);
  line("scan.syscall_list", cfg.syscall_list.generic_string());
  line("scan.top_k", std::to_string(cfg.top_k));
  line("tags.lexicon_dir", cfg.lexicon_dir.generic_string());
  return out;
}

std::string config_digest(const PipelineConfig& cfg) { return to_hex(sha256(canonical_config(cfg))).substr(0, 16); }

}  // namespace codelineage
