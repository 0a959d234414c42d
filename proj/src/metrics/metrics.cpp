#include "codelineage/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "codelineage/error.hpp"

namespace codelineage::metrics {

using cparse::AstNode;
using cparse::NodeKind;
using cparse::Token;
using cparse::TokenKind;

FpRatioTable default_fp_ratios() { return {{Language::C, 97.0}, {Language::Cpp, 50.0}}; }

LineCounts classify_lines(const std::vector<Token>& tokens) {
  // Per line: bit 0 = code, bit 1 = comment text.
  std::vector<std::uint8_t> marks;
  auto mark = [&](int line, std::uint8_t bit) {
    if (line < 1) return;
    if (static_cast<std::size_t>(line) > marks.size()) marks.resize(static_cast<std::size_t>(line), 0);
    marks[static_cast<std::size_t>(line) - 1] |= bit;
  };
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::Whitespace) continue;
    if (t.kind != TokenKind::Comment) {
      for (int l = t.line, e = t.end_line(); l <= e; ++l) mark(l, 1);
      continue;
    }
    int line = t.line;
    bool has_text = false;
    for (char c : t.text) {
      if (c == '\n') {
        if (has_text) mark(line, 2);
        ++line;
        has_text = false;
      } else if (c != ' ' && c != '\t' && c != '\r' && c != '\f' && c != '\v') {
        has_text = true;
      }
    }
    if (has_text) mark(line, 2);
  }
  LineCounts out;
  for (auto m : marks) {
    if (m & 1) ++out.code_lines;
    else if (m & 2) ++out.comment_lines;
  }
  return out;
}

LineCounts classify_lines(const SourceFile& file) { return classify_lines(cparse::lex(file.text).tokens); }

std::uint64_t count_sloc(const SourceFile& file) { return classify_lines(file).code_lines; }

double comment_ratio(const LineCounts& counts) {
  return static_cast<double>(counts.comment_lines) / static_cast<double>(std::max<std::uint64_t>(counts.code_lines, 1));
}

double comment_ratio(const SourceFile& file) { return comment_ratio(classify_lines(file)); }

double estimate_function_points(const ScaleMetrics& scale, Language lang, const FpRatioTable& ratios) {
  auto it = ratios.find(lang);
  if (it == ratios.end() || !(it->second > 0.0))
    throw Error(ErrorKind::UnknownLanguageRatio,
                fmt::format("no function-point ratio for language {}", language_name(lang)));
  return static_cast<double>(scale.sloc) / it->second;
}

double cocomo_effort(std::uint64_t sloc_total, const CocomoParams& params) {
  if (sloc_total == 0) return 0.0;
  return params.a * std::pow(static_cast<double>(sloc_total) / 1000.0, params.b);
}

double cocomo_dev_time(double effort_pm) {
  if (effort_pm <= 0.0) return 0.0;
  return 2.5 * std::pow(effort_pm, 0.38);
}

double cocomo_team_size(double effort_pm, double dev_time_months) {
  if (effort_pm == 0.0 && dev_time_months == 0.0) return 0.0;
  if (dev_time_months == 0.0) throw Error(ErrorKind::DivisionByZero, "team size: development time is zero");
  return effort_pm / dev_time_months;
}

CocomoEstimate cocomo(std::uint64_t sloc_total, const CocomoParams& params) {
  CocomoEstimate e;
  e.effort_pm = cocomo_effort(sloc_total, params);
  e.dev_time_months = cocomo_dev_time(e.effort_pm);
  e.team_size = cocomo_team_size(e.effort_pm, e.dev_time_months);
  return e;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_decision(const AstNode& n) {
  switch (n.kind) {
    case NodeKind::IfS:
    case NodeKind::WhileS:
    case NodeKind::DoS:
    case NodeKind::ForS:
    case NodeKind::SwitchCase:
    case NodeKind::LogicalAnd:
    case NodeKind::LogicalOr:
      return true;
    case NodeKind::CondE:
      return n.is_ternary();
    default:
      return false;
  }
}

std::uint32_t count_decisions(const AstNode& n) {
  std::uint32_t c = is_decision(n) ? 1 : 0;
  for (const auto& child : n.children) c += count_decisions(child);
  return c;
}

// Count of &&, || and ?: in an expression subtree.
std::uint64_t expr_complexity(const AstNode& n) {
  std::uint64_t c = (n.kind == NodeKind::LogicalAnd || n.kind == NodeKind::LogicalOr || n.is_ternary()) ? 1 : 0;
  for (const auto& child : n.children) c += expr_complexity(child);
  return c;
}

PathCount from_count(std::uint64_t n) {
  PathCount p;
  p.value = std::min(n, kPathSaturation);
  p.log10 = n == 0 ? kNegInf : std::log10(static_cast<double>(n));
  return p;
}

PathCount with_conditions(PathCount p, std::uint64_t extra) {
  return extra == 0 ? p : saturating_sum(p, from_count(extra));
}

PathCount statement_paths(const AstNode& n);

PathCount sequence_paths(const std::vector<AstNode>& stmts, std::size_t begin, std::size_t end) {
  PathCount acc;
  for (std::size_t i = begin; i < end; ++i) acc = saturating_product(acc, statement_paths(stmts[i]));
  return acc;
}

bool is_default_label(const AstNode& s) { return s.kind == NodeKind::Other && s.op == "default"; }
bool is_label(const AstNode& s) { return s.kind == NodeKind::SwitchCase || is_default_label(s); }

PathCount switch_paths(const AstNode& sw) {
  const bool has_body = sw.flags & cparse::kHasBody;
  const std::size_t conds = sw.children.size() - (has_body ? 1 : 0);
  std::uint64_t ec = 0;
  for (std::size_t i = 0; i < conds; ++i) ec += expr_complexity(sw.children[i]);
  if (!has_body) return with_conditions(PathCount{}, ec);
  const AstNode& body = sw.children.back();
  if (body.kind != NodeKind::Block) return with_conditions(saturating_sum(statement_paths(body), PathCount{}), ec);

  // Each label opens a segment running to the next label; adjacent labels
  // share a segment but still add one path each.
  const auto& stmts = body.children;
  PathCount total{0, kNegInf};
  bool any_label = false;
  bool has_default = false;
  std::size_t i = 0;
  while (i < stmts.size() && !is_label(stmts[i])) ++i;  // unreachable prefix
  while (i < stmts.size()) {
    std::size_t j = i;
    while (j < stmts.size() && is_label(stmts[j])) {
      if (is_default_label(stmts[j])) has_default = true;
      ++j;
    }
    std::size_t k = j;
    while (k < stmts.size() && !is_label(stmts[k])) ++k;
    const PathCount seg = sequence_paths(stmts, j, k);
    for (std::size_t l = i; l < j; ++l) total = saturating_sum(total, seg);
    any_label = true;
    i = k;
  }
  if (!any_label) total = PathCount{};
  else if (!has_default) total = saturating_sum(total, PathCount{});
  return with_conditions(total, ec);
}

PathCount statement_paths(const AstNode& n) {
  switch (n.kind) {
    case NodeKind::Block:
      return sequence_paths(n.children, 0, n.children.size());
    case NodeKind::IfS: {
      const bool has_body = n.flags & cparse::kHasBody;
      const bool has_else = n.flags & cparse::kHasElse;
      const std::size_t conds = n.children.size() - (has_body ? 1 : 0) - (has_else ? 1 : 0);
      std::uint64_t ec = 0;
      for (std::size_t i = 0; i < conds; ++i) ec += expr_complexity(n.children[i]);
      const PathCount then_p = has_body ? statement_paths(n.children[conds]) : PathCount{};
      const PathCount else_p = has_else ? statement_paths(n.children.back()) : PathCount{};
      return with_conditions(saturating_sum(then_p, else_p), ec);
    }
    case NodeKind::WhileS:
    case NodeKind::ForS:
    case NodeKind::DoS: {
      const bool has_body = n.flags & cparse::kHasBody;
      const std::size_t body_idx = n.kind == NodeKind::DoS ? 0 : n.children.size() - 1;
      std::uint64_t ec = 0;
      PathCount body;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (has_body && i == body_idx) body = statement_paths(n.children[i]);
        else ec += expr_complexity(n.children[i]);
      }
      return with_conditions(saturating_sum(body, PathCount{}), ec);
    }
    case NodeKind::SwitchCase:
      // A case label nested below the switch body's top level.
      return with_conditions(from_count(2), expr_complexity(n));
    case NodeKind::Other:
      if (n.is_switch()) return switch_paths(n);
      if (n.op == "try" && !n.children.empty()) {
        PathCount acc{0, kNegInf};
        for (const auto& c : n.children) acc = saturating_sum(acc, statement_paths(c));
        return acc;
      }
      return from_count(1 + expr_complexity(n));
    default:
      return from_count(1 + expr_complexity(n));
  }
}

}  // namespace

PathCount saturating_sum(PathCount a, PathCount b) {
  PathCount r;
  r.value = (a.value > kPathSaturation - b.value) ? kPathSaturation : a.value + b.value;
  if (a.log10 == kNegInf) {
    r.log10 = b.log10;
  } else if (b.log10 == kNegInf) {
    r.log10 = a.log10;
  } else {
    const double hi = std::max(a.log10, b.log10), lo = std::min(a.log10, b.log10);
    r.log10 = hi + std::log10(1.0 + std::pow(10.0, lo - hi));
  }
  return r;
}

PathCount saturating_product(PathCount a, PathCount b) {
  PathCount r;
  if (a.value == 0 || b.value == 0) r.value = 0;
  else if (a.value > kPathSaturation / b.value) r.value = kPathSaturation;
  else r.value = a.value * b.value;
  r.log10 = (a.value == 0 || b.value == 0) ? kNegInf : a.log10 + b.log10;
  return r;
}

std::uint32_t cyclomatic_complexity(const AstNode& body) { return 1 + count_decisions(body); }

PathCount execution_paths(const AstNode& body) { return statement_paths(body); }

YearlySeries aggregate_yearly(const std::string& metric_name, const std::vector<YearValue>& values) {
  if (values.empty()) throw Error(ErrorKind::EmptyCorpus, fmt::format("{}: no specimens to aggregate", metric_name));
  std::map<int, std::pair<double, std::size_t>> sums;
  for (const auto& v : values) {
    auto& s = sums[v.year];
    s.first += v.value;
    ++s.second;
  }
  YearlySeries out;
  out.metric_name = metric_name;
  for (const auto& [year, s] : sums) out.raw[year] = s.first / static_cast<double>(s.second);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& [year, v] : out.raw) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (const auto& [year, v] : out.raw) out.points[year] = hi > lo ? (v - lo) / (hi - lo) : 0.5;
  return out;
}

}  // namespace codelineage::metrics
