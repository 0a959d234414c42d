#include <doctest.h>

#include <random>

#include "codelineage/cparse/functions.hpp"

using namespace codelineage::cparse;

namespace {

AstNode body(const std::string& src) {
  auto toks = significant_tokens(lex(src).tokens);
  return parse_body(toks, 0);
}

std::size_t count_kind(const AstNode& n, NodeKind k) {
  std::size_t c = n.kind == k ? 1 : 0;
  for (const auto& ch : n.children) c += count_kind(ch, k);
  return c;
}

}  // namespace

TEST_SUITE("ast") {
  TEST_CASE("assignment statement") { CHECK(to_sexpr(body("{ x = 1; }")) == "block[expr_s[assign_e[id,lit]]]"); }

  TEST_CASE("empty body") {
    auto b = body("{ }");
    CHECK(b.kind == NodeKind::Block);
    CHECK(b.children.empty());
  }

  TEST_CASE("for loop inventory") {
    auto b = body("{ for(i=0;i<n;i++) a[i]=0; }");
    CHECK(count_kind(b, NodeKind::ForS) == 1);
    CHECK(count_kind(b, NodeKind::ArrayE) == 1);
    CHECK(count_kind(b, NodeKind::IncrE) == 1);
    CHECK(count_kind(b, NodeKind::AssignE) >= 1);
    CHECK(count_kind(b, NodeKind::CondE) >= 1);
  }

  TEST_CASE("if with else carries flags") {
    auto b = body("{ if (a) x = 1; else y = 2; }");
    REQUIRE(b.children.size() == 1);
    const auto& s = b.children[0];
    CHECK(s.kind == NodeKind::IfS);
    CHECK((s.flags & kHasBody));
    CHECK((s.flags & kHasElse));
    CHECK(s.children.size() == 3);
  }

  TEST_CASE("switch layout") {
    auto b = body("{ switch (k) { case 1: f(); break; default: g(); } }");
    REQUIRE(b.children.size() == 1);
    const auto& sw = b.children[0];
    CHECK(sw.is_switch());
    REQUIRE(sw.children.size() == 2);
    const auto& blk = sw.children[1];
    CHECK(blk.children[0].kind == NodeKind::SwitchCase);
    CHECK(count_kind(blk, NodeKind::CallE) == 2);
  }

  TEST_CASE("logical operators and ternary") {
    auto b = body("{ r = a && b || c ? 1 : 2; }");
    CHECK(count_kind(b, NodeKind::LogicalAnd) == 1);
    CHECK(count_kind(b, NodeKind::LogicalOr) == 1);
    std::size_t ternaries = 0;
    std::function<void(const AstNode&)> walk = [&](const AstNode& n) {
      if (n.is_ternary()) ++ternaries;
      for (const auto& c : n.children) walk(c);
    };
    walk(b);
    CHECK(ternaries == 1);
  }

  TEST_CASE("declarations, returns and calls") {
    auto b = body("{ int x = f(1), y; return x; }");
    CHECK(count_kind(b, NodeKind::Decl) >= 1);
    CHECK(count_kind(b, NodeKind::ReturnS) == 1);
    CHECK(count_kind(b, NodeKind::CallE) == 1);
  }

  TEST_CASE("deterministic") {
    const std::string src = "{ while (i < n) { if (a[i]) break; i++; } do { x--; } while (x); }";
    CHECK(to_sexpr(body(src)) == to_sexpr(body(src)));
  }

  TEST_CASE("total on arbitrary token soup") {
    std::mt19937_64 rng(11);
    const std::vector<std::string> atoms{"{", "}", "(", ")", ";", "if", "else", "for", "while", "do", "switch",
                                         "case", ":", "default", "x", "1", "=", "?", "&&", "[", "]", "return",
                                         "int", ",", "++", "try", "catch", "goto", "L"};
    for (int round = 0; round < 3000; ++round) {
      std::string s = "{";
      const int len = std::uniform_int_distribution<int>(0, 40)(rng);
      for (int i = 0; i < len; ++i) s += " " + atoms[rng() % atoms.size()];
      s += " }";
      auto toks = significant_tokens(lex(s).tokens);
      CHECK_NOTHROW(parse_body(toks, 0));
    }
  }
}
