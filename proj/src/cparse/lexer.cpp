#include "codelineage/cparse/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fmt/format.h>
#include <unordered_set>

namespace codelineage::cparse {

namespace {

const std::unordered_set<std::string_view>& keyword_set() {
  static const std::unordered_set<std::string_view> kKeywords = {
      "alignas", "alignof", "asm", "auto", "bool", "break", "case", "catch", "char", "char8_t", "char16_t",
      "char32_t", "class", "const", "consteval", "constexpr", "constinit", "const_cast", "continue", "co_await",
      "co_return", "co_yield", "decltype", "default", "delete", "do", "double", "dynamic_cast", "else", "enum",
      "explicit", "export", "extern", "false", "float", "for", "friend", "goto", "if", "inline", "int", "long",
      "mutable", "namespace", "new", "noexcept", "nullptr", "operator", "private", "protected", "public",
      "register", "reinterpret_cast", "restrict", "return", "short", "signed", "sizeof", "static",
      "static_assert", "static_cast", "struct", "switch", "template", "this", "thread_local", "throw", "true",
      "try", "typedef", "typeid", "typename", "union", "unsigned", "using", "virtual", "void", "volatile",
      "wchar_t", "while", "_Alignas", "_Alignof", "_Atomic", "_Bool", "_Complex", "_Generic", "_Imaginary",
      "_Noreturn", "_Static_assert", "_Thread_local"};
  return kKeywords;
}

// Longest match first.
constexpr std::array<std::string_view, 27> kMultiPunct = {
    ">>=", "<<=", "...", "->*", "<=>", "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==",
    "!=",  "&&",  "||",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "##", ".*"};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  LexResult run() {
    while (pos_ < src_.size()) step();
    return std::move(out_);
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  bool line_has_token_ = false;  // a non-trivia token seen on the current logical line
  bool in_directive_ = false;
  LexResult out_;

  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void emit(TokenKind kind, std::size_t begin) {
    Token t;
    t.kind = kind;
    t.text = std::string(src_.substr(begin, pos_ - begin));
    t.offset = begin;
    t.line = line_;
    for (char c : t.text)
      if (c == '\n') ++line_;
    if (kind != TokenKind::Whitespace && kind != TokenKind::Comment) line_has_token_ = true;
    out_.tokens.push_back(std::move(t));
  }

  void diag(int line, std::string msg) { out_.diagnostics.push_back({line, std::move(msg)}); }

  void step() {
    const std::size_t begin = pos_;
    const auto c = static_cast<unsigned char>(peek());

    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
        (c == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n')))) {
      lex_whitespace();
      emit(TokenKind::Whitespace, begin);
      return;
    }
    if (c == '/' && peek(1) == '/') {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      emit(TokenKind::Comment, begin);
      return;
    }
    if (c == '/' && peek(1) == '*') {
      const int start_line = line_;
      const auto end = src_.find("*/", pos_ + 2);
      if (end == std::string_view::npos) {
        pos_ = src_.size();
        diag(start_line, "unterminated block comment");
      } else {
        pos_ = end + 2;
      }
      emit(TokenKind::Comment, begin);
      return;
    }
    if (ident_start(c)) {
      if (try_prefixed_literal()) return;
      while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const auto word = src_.substr(begin, pos_ - begin);
      emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, begin);
      return;
    }
    if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number();
      emit(TokenKind::NumberLiteral, begin);
      return;
    }
    if (c == '"') {
      lex_quoted('"');
      emit(TokenKind::StringLiteral, begin);
      return;
    }
    if (c == '\'') {
      lex_quoted('\'');
      emit(TokenKind::CharLiteral, begin);
      return;
    }
    if (c == '#' && !line_has_token_) in_directive_ = true;
    for (auto p : kMultiPunct) {
      if (src_.substr(pos_, p.size()) == p) {
        pos_ += p.size();
        emit(TokenKind::Punct, begin);
        return;
      }
    }
    // Single byte, or one whole UTF-8 sequence for stray non-ASCII.
    ++pos_;
    emit(TokenKind::Punct, begin);
  }

  void lex_whitespace() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        // A newline ends a directive unless spliced with a backslash.
        const bool spliced = pos_ > 0 && (src_[pos_ - 1] == '\\' || (src_[pos_ - 1] == '\r' && pos_ > 1 && src_[pos_ - 2] == '\\'));
        if (!spliced) {
          in_directive_ = false;
          line_has_token_ = false;
        }
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
      } else if (c == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void lex_number() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if ((c == 'e' || c == 'E' || c == 'p' || c == 'P') && (peek(1) == '+' || peek(1) == '-')) {
        pos_ += 2;
      } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
        ++pos_;
      } else if (c == '\'' && std::isalnum(static_cast<unsigned char>(peek(1)))) {
        ++pos_;  // digit separator
      } else {
        break;
      }
    }
  }

  // pos_ is at the opening quote.
  void lex_quoted(char quote) {
    const int start_line = line_;
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ = std::min(pos_ + 2, src_.size());
        continue;
      }
      if (c == quote) {
        ++pos_;
        return;
      }
      if (c == '\n' && in_directive_) {
        diag(start_line, fmt::format("unterminated {} literal in directive", quote == '"' ? "string" : "character"));
        return;
      }
      ++pos_;
    }
    diag(start_line, fmt::format("unterminated {} literal", quote == '"' ? "string" : "character"));
  }

  // L"..", u8"..", R"d(..)d", LR"..", etc. Returns false when the identifier
  // at pos_ is not a literal prefix.
  bool try_prefixed_literal() {
    const std::size_t begin = pos_;
    static constexpr std::array<std::string_view, 10> kPrefixes = {"u8R", "LR", "uR", "UR", "R", "u8", "L", "u", "U", ""};
    for (auto prefix : kPrefixes) {
      if (prefix.empty()) break;
      if (src_.substr(pos_, prefix.size()) != prefix) continue;
      const char q = peek(prefix.size());
      if (q != '"' && q != '\'') continue;
      const bool raw = prefix.back() == 'R';
      if (raw && q == '"') {
        pos_ += prefix.size();
        lex_raw_string();
        emit(TokenKind::StringLiteral, begin);
        return true;
      }
      if (raw) continue;
      pos_ += prefix.size();
      lex_quoted(q);
      emit(q == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral, begin);
      return true;
    }
    return false;
  }

  void lex_raw_string() {
    const int start_line = line_;
    ++pos_;  // opening quote
    const auto paren = src_.find('(', pos_);
    if (paren == std::string_view::npos || paren - pos_ > 16) {
      // Not a well-formed raw string; treat as an ordinary string body.
      --pos_;
      lex_quoted('"');
      return;
    }
    const std::string closing = ")" + std::string(src_.substr(pos_, paren - pos_)) + "\"";
    const auto end = src_.find(closing, paren + 1);
    if (end == std::string_view::npos) {
      pos_ = src_.size();
      diag(start_line, "unterminated raw string literal");
      return;
    }
    pos_ = end + closing.size();
  }
};

}  // namespace

std::string_view token_kind_name(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::NumberLiteral: return "NumberLiteral";
    case TokenKind::StringLiteral: return "StringLiteral";
    case TokenKind::CharLiteral: return "CharLiteral";
    case TokenKind::Punct: return "Punct";
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::Comment: return "Comment";
    case TokenKind::Whitespace: return "Whitespace";
  }
  return "Punct";
}

int Token::end_line() const { return line + static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

bool is_keyword(std::string_view word) noexcept { return keyword_set().count(word) != 0; }

LexResult lex(std::string_view source) { return Lexer(source).run(); }

std::vector<Token> significant_tokens(const std::vector<Token>& tokens) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  bool at_line_start = true;
  bool in_directive = false;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::Whitespace) {
      for (std::size_t i = 0; i < t.text.size(); ++i) {
        if (t.text[i] != '\n') continue;
        const bool spliced = (i > 0 && t.text[i - 1] == '\\') || (i > 1 && t.text[i - 1] == '\r' && t.text[i - 2] == '\\');
        if (!spliced) {
          in_directive = false;
          at_line_start = true;
        }
      }
      continue;
    }
    if (t.kind == TokenKind::Comment) continue;
    if (at_line_start && t.punct("#")) in_directive = true;
    at_line_start = false;
    if (!in_directive) out.push_back(t);
  }
  return out;
}

}  // namespace codelineage::cparse
