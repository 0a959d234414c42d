#include "codelineage/scan.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "codelineage/error.hpp"
#include "codelineage/parallel.hpp"

namespace codelineage::scan {

std::string_view list_kind_name(ListKind kind) noexcept { return kind == ListKind::Syscall ? "syscall" : "api"; }

ListKind parse_list_kind(std::string_view text) {
  if (text == "syscall") return ListKind::Syscall;
  if (text == "api") return ListKind::Api;
  throw Error(ErrorKind::Config, fmt::format("unknown list kind '{}' (expected syscall or api)", text));
}

std::string fold_identifier(std::string_view name) {
  if (name == "Sleep") return "sleep";
  return std::string(name);
}

IdentifierList make_identifier_list(ListKind kind, const std::vector<std::string>& names) {
  IdentifierList list;
  list.kind = kind;
  for (const auto& n : names)
    if (!n.empty()) list.names.insert(fold_identifier(n));
  if (list.names.empty()) throw Error(ErrorKind::EmptyList, fmt::format("{} list is empty", list_kind_name(kind)));
  return list;
}

IdentifierList load_identifier_list(const std::filesystem::path& path, ListKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot read identifier list {}", path.string()));
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    names.push_back(line.substr(b, e - b + 1));
  }
  if (names.empty()) throw Error(ErrorKind::EmptyList, fmt::format("identifier list {} is empty", path.string()));
  return make_identifier_list(kind, names);
}

namespace {

void count_tokens(const std::vector<cparse::Token>& tokens, const IdentifierList& list,
                  std::map<std::string, std::uint64_t>& counts) {
  for (const auto& t : tokens) {
    if (t.kind != cparse::TokenKind::Identifier) continue;
    std::string folded = fold_identifier(t.text);
    if (list.names.count(folded)) ++counts[std::move(folded)];
  }
}

std::vector<ScanHit> to_hits(std::string_view specimen_id, ListKind kind,
                             const std::map<std::string, std::uint64_t>& counts) {
  std::vector<ScanHit> hits;
  hits.reserve(counts.size());
  for (const auto& [name, n] : counts) hits.push_back({std::string(specimen_id), name, kind, n, true});
  return hits;
}

}  // namespace

std::vector<ScanHit> scan_tokens(std::string_view specimen_id, const std::vector<cparse::Token>& tokens,
                                 const IdentifierList& list) {
  std::map<std::string, std::uint64_t> counts;
  count_tokens(tokens, list, counts);
  return to_hits(specimen_id, list.kind, counts);
}

std::vector<ScanHit> scan_specimen(const Specimen& specimen, const IdentifierList& list) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& f : specimen.files) count_tokens(cparse::lex(f.text).tokens, list, counts);
  return to_hits(specimen.id, list.kind, counts);
}

std::vector<ScanHit> scan_corpus(const Corpus& corpus, const IdentifierList& list, unsigned threads) {
  std::vector<std::vector<ScanHit>> per(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) { per[i] = scan_specimen(corpus.specimens[i], list); });
  std::vector<ScanHit> out;
  for (auto& v : per) std::move(v.begin(), v.end(), std::back_inserter(out));
  return out;
}

std::string Period::label() const {
  return first_year == last_year ? fmt::format("{}", first_year) : fmt::format("{}-{}", first_year, last_year);
}

std::vector<Period> parse_periods(std::string_view text) {
  auto bad = [&](std::string_view why) {
    return Error(ErrorKind::Config, fmt::format("invalid periods '{}': {}", text, why));
  };
  auto year = [&](std::string_view s) {
    int y = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), y);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) throw bad(fmt::format("'{}' is not a year", s));
    return y;
  };
  std::vector<Period> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw bad("empty period");
    Period p;
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      p.first_year = p.last_year = year(item);
    } else {
      p.first_year = year(item.substr(0, dash));
      p.last_year = year(item.substr(dash + 1));
    }
    if (p.first_year > p.last_year) throw bad(fmt::format("{} is reversed", item));
    if (!out.empty() && p.first_year <= out.back().last_year) throw bad("periods must be disjoint and ascending");
    out.push_back(p);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<PeriodRanking> top_k_by_period(const Corpus& corpus, const std::vector<ScanHit>& hits, std::size_t k,
                                           const std::vector<Period>& periods) {
  std::vector<std::map<std::string, std::set<std::string>>> users(periods.size());
  for (const auto& h : hits) {
    if (!h.specimen_presence || h.occurrence_count == 0) continue;
    const Specimen* s = corpus.find(h.specimen_id);
    if (s == nullptr) continue;
    for (std::size_t p = 0; p < periods.size(); ++p)
      if (periods[p].contains(s->date.year)) users[p][h.identifier].insert(h.specimen_id);
  }
  std::vector<PeriodRanking> out;
  for (std::size_t p = 0; p < periods.size(); ++p) {
    PeriodRanking row;
    row.period = periods[p];
    for (const auto& [name, ids] : users[p]) row.top.push_back({name, ids.size()});
    std::stable_sort(row.top.begin(), row.top.end(),
                     [](const auto& a, const auto& b) { return a.specimens > b.specimens; });
    if (row.top.size() > k) row.top.resize(k);
    out.push_back(std::move(row));
  }
  return out;
}

std::string format_row(const PeriodRanking& row) {
  std::string out = row.period.label();
  for (const auto& r : row.top) out += fmt::format(" & {} ({})", r.identifier, r.specimens);
  return out;
}

}  // namespace codelineage::scan
