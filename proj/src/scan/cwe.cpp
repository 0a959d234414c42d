#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "codelineage/error.hpp"
#include "codelineage/scan.hpp"

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace codelineage::scan {

namespace {

struct RawRecord {
  std::string file;
  int line = 0;
  int cwe = 0;
  std::string message;
};

int to_int(std::string_view s, int fallback) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.rfind("CWE-", 0) == 0 || s.rfind("cwe-", 0) == 0) s.remove_prefix(4);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return fallback;
  return v;
}

void collect_xml(const pt::ptree& node, std::vector<RawRecord>& out) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>") continue;
    if (name == "error") {
      RawRecord r;
      r.cwe = to_int(child.get<std::string>("<xmlattr>.cwe", ""), 0);
      r.file = child.get<std::string>("<xmlattr>.file", "");
      r.line = to_int(child.get<std::string>("<xmlattr>.line", ""), 0);
      r.message = child.get<std::string>("<xmlattr>.msg", child.get<std::string>("<xmlattr>.message", ""));
      if (r.file.empty()) {
        if (auto loc = child.get_child_optional("location")) {
          r.file = loc->get<std::string>("<xmlattr>.file", "");
          r.line = to_int(loc->get<std::string>("<xmlattr>.line", ""), 0);
        }
      }
      out.push_back(std::move(r));
      continue;
    }
    collect_xml(child, out);
  }
}

std::vector<RawRecord> parse_xml(std::string_view content) {
  pt::ptree tree;
  std::istringstream in{std::string(content)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorKind::ReportParse, fmt::format("malformed XML report: {}", e.what()));
  }
  std::vector<RawRecord> out;
  collect_xml(tree, out);
  return out;
}

// RFC 4180 fields; quotes may wrap commas, newlines and doubled quotes.
std::vector<std::vector<std::string>> csv_rows(std::string_view content) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else if (c != '\r') {
      field.push_back(c);
      any = true;
    }
  }
  if (quoted) throw Error(ErrorKind::ReportParse, "unterminated quoted field in CSV report");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RawRecord> parse_csv(std::string_view content) {
  std::vector<RawRecord> out;
  auto rows = csv_rows(content);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i == 0 && !r.empty() && r[0] == "file") continue;
    if (r.size() < 3)
      throw Error(ErrorKind::ReportParse, fmt::format("CSV report row {} has {} fields, expected 4", i + 1, r.size()));
    RawRecord rec;
    rec.file = r[0];
    rec.line = to_int(r[1], -1);
    rec.cwe = to_int(r[2], -1);
    if (rec.line < 0 || rec.cwe < 0)
      throw Error(ErrorKind::ReportParse, fmt::format("CSV report row {}: line and cwe must be integers", i + 1));
    if (r.size() > 3) rec.message = r[3];
    out.push_back(std::move(rec));
  }
  return out;
}

bool starts_with_path(const fs::path& path, const fs::path& root) {
  auto p = path.begin();
  for (auto r = root.begin(); r != root.end(); ++r, ++p) {
    if (r->empty()) continue;
    if (p == path.end() || *p != *r) return false;
  }
  return true;
}

}  // namespace

std::optional<std::pair<std::string, std::string>> attribute_path(std::string_view file, const Corpus& corpus) {
  std::string norm(file);
  for (auto& c : norm)
    if (c == '\\') c = '/';
  const fs::path path = fs::path(norm).lexically_normal();
  if (path.empty()) return std::nullopt;
  if (path.is_absolute()) {
    const Specimen* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& s : corpus.specimens) {
      const fs::path root = fs::absolute(s.root_path).lexically_normal();
      const std::size_t len = std::distance(root.begin(), root.end());
      if (starts_with_path(path, root) && len > best_len) {
        best = &s;
        best_len = len;
      }
    }
    if (best == nullptr) return std::nullopt;
    return std::pair{best->id, path.lexically_relative(fs::absolute(best->root_path).lexically_normal()).generic_string()};
  }
  auto it = path.begin();
  if (*it == ".") ++it;
  if (it == path.end()) return std::nullopt;
  const std::string head = it->string();
  fs::path rest;
  for (auto r = std::next(it); r != path.end(); ++r) rest /= *r;
  if (const Specimen* s = corpus.find(head)) return std::pair{s->id, rest.generic_string()};
  for (const auto& s : corpus.specimens) {
    fs::path root = s.root_path.lexically_normal();
    if (root.filename().empty()) root = root.parent_path();
    if (root.filename() == head) return std::pair{s.id, rest.generic_string()};
  }
  return std::nullopt;
}

CweReport parse_cwe_report(std::string_view content, const Corpus& corpus) {
  std::size_t first = content.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  std::vector<RawRecord> records;
  if (first == std::string_view::npos) return {};
  records = content[first] == '<' ? parse_xml(content) : parse_csv(content);
  CweReport report;
  for (auto& r : records) {
    if (r.cwe <= 0) continue;
    CweFinding f{"", r.cwe, r.file, r.line, std::move(r.message)};
    if (auto owner = attribute_path(r.file, corpus)) {
      f.specimen_id = owner->first;
      f.file = owner->second;
      report.findings.push_back(std::move(f));
    } else {
      report.unattributed.push_back(std::move(f));
    }
  }
  return report;
}

CweReport ingest_cwe_findings(const fs::path& report_path, const Corpus& corpus) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot read CWE report {}", report_path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cwe_report(buf.str(), corpus);
}

}  // namespace codelineage::scan
