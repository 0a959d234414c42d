#include "codelineage/cparse/functions.hpp"

#include <algorithm>
#include <optional>

#include <fmt/format.h>

namespace codelineage::cparse {

namespace {

using Tokens = std::vector<Token>;

// Index of the bracket matching tokens[open], or nullopt.
std::optional<std::size_t> match_close(const Tokens& t, std::size_t open, std::string_view o, std::string_view c) {
  int depth = 0;
  for (std::size_t i = open; i < t.size(); ++i) {
    if (t[i].punct(o)) {
      ++depth;
    } else if (t[i].punct(c)) {
      if (--depth == 0) return i;
    }
  }
  return std::nullopt;
}

bool is_scope_opener(const Tokens& t, std::size_t begin, std::size_t brace) {
  if (begin >= brace) return false;
  std::size_t i = begin;
  if (t[i].keyword("inline")) ++i;
  if (i < brace && t[i].keyword("namespace")) {
    for (++i; i < brace; ++i)
      if (t[i].kind != TokenKind::Identifier && !t[i].punct("::")) return false;
    return true;
  }
  return t[begin].keyword("extern") && brace - begin == 2 && t[begin + 1].kind == TokenKind::StringLiteral;
}

bool is_paren_group_prefix_skippable(const Token& tok) {
  static constexpr std::string_view kSkip[] = {"__attribute__", "__declspec", "alignas", "decltype", "throw",
                                               "noexcept",      "sizeof",     "__asm__", "asm",      "_Pragma"};
  for (auto s : kSkip)
    if (tok.text == s) return true;
  return false;
}

struct Header {
  std::string name;
};

// Decides whether tokens [begin, brace) form a function definition header
// and returns the function name.
std::optional<Header> function_header(const Tokens& t, std::size_t begin, std::size_t brace) {
  struct Group {
    std::size_t open, close;
  };
  std::vector<Group> groups;
  std::optional<std::size_t> init_colon;
  for (std::size_t i = begin; i < brace; ++i) {
    if (t[i].punct("(")) {
      auto close = match_close(t, i, "(", ")");
      if (!close || *close >= brace) return std::nullopt;
      groups.push_back({i, *close});
      i = *close;
      continue;
    }
    if (t[i].punct("=") && !(i > begin && t[i - 1].keyword("operator"))) return std::nullopt;
    if (t[i].punct(":") && !init_colon) {
      if (groups.empty()) return std::nullopt;  // class X : public Y {
      init_colon = i;
    }
  }
  const std::size_t region_end = init_colon.value_or(brace);
  for (auto g = groups.rbegin(); g != groups.rend(); ++g) {
    if (g->close >= region_end || g->open == begin) continue;
    const Token& prev = t[g->open - 1];
    std::string name;
    if (prev.kind == TokenKind::Identifier && !is_paren_group_prefix_skippable(prev)) {
      name = prev.text;
    } else if (prev.kind == TokenKind::Punct || prev.kind == TokenKind::Keyword) {
      // operator overloads: `operator ==`, `operator ()`, `operator new`
      std::size_t k = g->open;
      while (k > begin && !t[k - 1].keyword("operator") && g->open - k < 3) --k;
      if (k > begin && t[k - 1].keyword("operator")) {
        name = "operator";
        for (std::size_t m = k; m < g->open; ++m) name += t[m].text;
      } else {
        continue;
      }
    } else {
      continue;
    }
    // Between the parameter list and the region end only qualifiers are allowed.
    for (std::size_t i = g->close + 1; i < region_end; ++i) {
      const Token& q = t[i];
      if (q.kind == TokenKind::Identifier || q.kind == TokenKind::Keyword) continue;
      if (q.punct("&") || q.punct("&&") || q.punct("->") || q.punct("::") || q.punct("*") || q.punct("<") ||
          q.punct(">") || q.punct(",") || q.punct("[") || q.punct("]"))
        continue;
      if (q.punct("(")) {
        auto close = match_close(t, i, "(", ")");
        if (!close) return std::nullopt;
        i = *close;
        continue;
      }
      return std::nullopt;
    }
    return Header{std::move(name)};
  }
  return std::nullopt;
}

std::vector<std::string> comment_blocks(const Tokens& all, std::size_t begin_offset, std::size_t end_offset) {
  std::vector<std::string> blocks;
  int last_line_comment_line = -2;
  for (const auto& tok : all) {
    if (tok.offset < begin_offset) continue;
    if (tok.offset >= end_offset) break;
    if (tok.kind != TokenKind::Comment) continue;
    const bool line_comment = tok.text.rfind("//", 0) == 0;
    if (line_comment && tok.line == last_line_comment_line + 1 && !blocks.empty()) {
      blocks.back() += '\n';
      blocks.back() += tok.text;
    } else {
      blocks.push_back(tok.text);
    }
    last_line_comment_line = line_comment ? tok.line : -2;
  }
  return blocks;
}

// Start of the comment block directly above a declaration: comments
// separated from it and from each other by at most one line break.
std::size_t leading_comment_offset(const Tokens& all, std::size_t decl_offset) {
  auto it = std::lower_bound(all.begin(), all.end(), decl_offset,
                             [](const Token& t, std::size_t off) { return t.offset < off; });
  std::size_t start = decl_offset;
  while (it != all.begin()) {
    --it;
    if (it->kind == TokenKind::Whitespace) {
      if (std::count(it->text.begin(), it->text.end(), '\n') > 1) break;
      continue;
    }
    if (it->kind != TokenKind::Comment) break;
    start = it->offset;
  }
  return start;
}

}  // namespace

ExtractResult extract_functions(const SourceFile& file, std::string_view specimen_id) {
  auto lexed = lex(file.text);
  auto result = extract_functions(lexed.tokens, file.rel_path.generic_string(), specimen_id);
  result.diagnostics.insert(result.diagnostics.begin(), lexed.diagnostics.begin(), lexed.diagnostics.end());
  return result;
}

ExtractResult extract_functions(const Tokens& all_tokens, std::string_view file_name, std::string_view specimen_id) {
  ExtractResult out;
  const Tokens sig = significant_tokens(all_tokens);
  std::size_t decl_start = 0;
  int scope_depth = 0;
  std::size_t i = 0;
  while (i < sig.size()) {
    const Token& t = sig[i];
    if (t.punct(";")) {
      decl_start = ++i;
      continue;
    }
    if (t.punct("}")) {
      if (scope_depth == 0) {
        out.diagnostics.push_back({t.line, fmt::format("{}: unmatched '}}'; extraction stopped", file_name)});
        break;
      }
      --scope_depth;
      decl_start = ++i;
      continue;
    }
    if (t.punct("(")) {
      auto close = match_close(sig, i, "(", ")");
      i = close ? *close + 1 : i + 1;
      continue;
    }
    if (!t.punct("{")) {
      ++i;
      continue;
    }
    if (is_scope_opener(sig, decl_start, i)) {
      ++scope_depth;
      decl_start = ++i;
      continue;
    }
    auto close = match_close(sig, i, "{", "}");
    if (!close) {
      out.diagnostics.push_back({t.line, fmt::format("{}: unmatched '{{'; extraction stopped", file_name)});
      break;
    }
    if (auto header = function_header(sig, decl_start, i)) {
      FunctionUnit unit;
      unit.specimen_id = std::string(specimen_id);
      unit.file = std::string(file_name);
      unit.name = std::move(header->name);
      unit.start_line = sig[decl_start].line;
      unit.end_line = sig[*close].line;
      unit.tokens.assign(sig.begin() + static_cast<std::ptrdiff_t>(decl_start),
                         sig.begin() + static_cast<std::ptrdiff_t>(*close) + 1);
      unit.comments = comment_blocks(all_tokens, leading_comment_offset(all_tokens, sig[decl_start].offset),
                                     sig[*close].offset + 1);
      unit.body_ast = build_ast(unit);
      out.units.push_back(std::move(unit));
      decl_start = *close + 1;
    }
    i = *close + 1;
  }
  return out;
}

AstNode build_ast(const FunctionUnit& unit) {
  // The body is the brace group closed by the last token.
  const auto& t = unit.tokens;
  if (t.empty() || !t.back().punct("}")) {
    AstNode empty;
    empty.kind = NodeKind::Block;
    return empty;
  }
  int depth = 0;
  for (std::size_t i = t.size(); i-- > 0;) {
    if (t[i].punct("}")) ++depth;
    else if (t[i].punct("{") && --depth == 0) return parse_body(t, i);
  }
  AstNode empty;
  empty.kind = NodeKind::Block;
  return empty;
}

}  // namespace codelineage::cparse
