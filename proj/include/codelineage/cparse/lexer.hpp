#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace codelineage::cparse {

enum class TokenKind { Identifier, NumberLiteral, StringLiteral, CharLiteral, Punct, Keyword, Comment, Whitespace };

std::string_view token_kind_name(TokenKind kind) noexcept;

struct Token {
  TokenKind kind = TokenKind::Punct;
  std::string text;
  int line = 1;             // 1-based line of the first byte
  std::size_t offset = 0;   // byte offset of the first byte

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool punct(std::string_view t) const { return kind == TokenKind::Punct && text == t; }
  bool keyword(std::string_view t) const { return kind == TokenKind::Keyword && text == t; }
  bool trivia() const { return kind == TokenKind::Comment || kind == TokenKind::Whitespace; }
  // Line of the last byte of the token.
  int end_line() const;
};

struct Diagnostic {
  int line = 0;
  std::string message;
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
};

bool is_keyword(std::string_view word) noexcept;

// Lossless: concatenating every token's text reproduces `source` exactly.
// Unterminated comments and literals run to end of input (or end of line
// inside a preprocessor directive) and are reported as diagnostics.
LexResult lex(std::string_view source);

// Significant tokens: everything except comments, whitespace and the tokens
// of preprocessor directive lines (#include, #define, #if, ...).
std::vector<Token> significant_tokens(const std::vector<Token>& tokens);

}  // namespace codelineage::cparse
