#include <doctest.h>

#include <random>

#include "codelineage/cparse/lexer.hpp"

using namespace codelineage::cparse;

namespace {

std::vector<std::pair<TokenKind, std::string>> shape(const LexResult& r) {
  std::vector<std::pair<TokenKind, std::string>> out;
  for (const auto& t : r.tokens) out.emplace_back(t.kind, t.text);
  return out;
}

std::string join(const std::vector<Token>& tokens) {
  std::string s;
  for (const auto& t : tokens) s += t.text;
  return s;
}

}  // namespace

TEST_SUITE("lexer") {
  TEST_CASE("empty input") { CHECK(lex("").tokens.empty()); }

  TEST_CASE("assignment with trailing line comment") {
    auto r = lex("x=1; // hi");
    std::vector<std::pair<TokenKind, std::string>> want{{TokenKind::Identifier, "x"},  {TokenKind::Punct, "="},
                                                        {TokenKind::NumberLiteral, "1"}, {TokenKind::Punct, ";"},
                                                        {TokenKind::Whitespace, " "},  {TokenKind::Comment, "// hi"}};
    CHECK(shape(r) == want);
    CHECK(r.diagnostics.empty());
  }

  TEST_CASE("block comment then keyword") {
    auto r = lex("/* a */int i;");
    std::vector<std::pair<TokenKind, std::string>> want{{TokenKind::Comment, "/* a */"},
                                                        {TokenKind::Keyword, "int"},
                                                        {TokenKind::Whitespace, " "},
                                                        {TokenKind::Identifier, "i"},
                                                        {TokenKind::Punct, ";"}};
    CHECK(shape(r) == want);
  }

  TEST_CASE("literals and multi-character punctuators") {
    auto r = lex("a->b <<= 0x1fUL; c = 'x' + L\"w\\\"s\"; d = 1.5e-3f; e && f || g;");
    std::vector<std::string> texts;
    for (const auto& t : significant_tokens(r.tokens)) texts.push_back(t.text);
    std::vector<std::string> want{"a", "->", "b", "<<=", "0x1fUL", ";", "c", "=", "'x'", "+", "L\"w\\\"s\"", ";",
                                  "d", "=",  "1.5e-3f", ";", "e", "&&", "f", "||", "g", ";"};
    CHECK(texts == want);
  }

  TEST_CASE("line numbers") {
    auto r = lex("int a;\n/* x\ny */ b\n");
    auto sig = significant_tokens(r.tokens);
    REQUIRE(sig.size() == 4);
    CHECK(sig[0].line == 1);
    CHECK(sig[3].line == 3);
    for (const auto& t : r.tokens)
      if (t.kind == TokenKind::Comment) {
        CHECK(t.line == 2);
        CHECK(t.end_line() == 3);
      }
  }

  TEST_CASE("preprocessor lines are not significant") {
    auto r = lex("#include <stdio.h>\n#define X(a) \\\n  (a+1)\nint y;\n");
    auto sig = significant_tokens(r.tokens);
    REQUIRE(sig.size() == 3);
    CHECK(sig[0].keyword("int"));
    CHECK(sig[0].line == 4);
  }

  TEST_CASE("unterminated constructs are diagnosed") {
    CHECK_FALSE(lex("/* open").diagnostics.empty());
    CHECK_FALSE(lex("s = \"open").diagnostics.empty());
    CHECK(join(lex("s = \"open\nnext").tokens) == "s = \"open\nnext");
  }

  TEST_CASE("lossless on random bytes") {
    std::mt19937_64 rng(7);
    const std::string alphabet = "ab1 \t\n/*\"'\\#{}();<>=+-&|?:.,xX0e_";
    for (int round = 0; round < 2000; ++round) {
      std::string s;
      const int len = std::uniform_int_distribution<int>(0, 80)(rng);
      for (int i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
      auto r = lex(s);
      REQUIRE(join(r.tokens) == s);
      std::size_t off = 0;
      for (const auto& t : r.tokens) {
        CHECK(t.offset == off);
        CHECK_FALSE(t.text.empty());
        off += t.text.size();
      }
    }
  }

  TEST_CASE("keywords") {
    CHECK(is_keyword("while"));
    CHECK(is_keyword("namespace"));
    CHECK_FALSE(is_keyword("Sleep"));
  }
}
