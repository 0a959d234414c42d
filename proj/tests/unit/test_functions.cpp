#include <doctest.h>

#include "codelineage/cparse/functions.hpp"
#include "test_support.hpp"

using namespace codelineage;
using namespace codelineage::cparse;

namespace {

ExtractResult extract(const std::string& text, Language lang = Language::C) {
  return extract_functions(SourceFile::from_bytes("f.c", lang, text), "spec");
}

}  // namespace

TEST_SUITE("functions") {
  TEST_CASE("single definition") {
    auto r = extract("int main(){return 0;}");
    REQUIRE(r.units.size() == 1);
    CHECK(r.units[0].name == "main");
    CHECK(r.units[0].start_line == 1);
    CHECK(r.units[0].end_line == 1);
    CHECK(r.units[0].tokens.front().text == "int");
    CHECK(r.units[0].tokens.back().text == "}");
    CHECK(r.units[0].specimen_id == "spec");
  }

  TEST_CASE("prototype only") { CHECK(extract("int f(int);").units.empty()); }

  TEST_CASE("three definitions with a nested initializer") {
    auto text = testsupport::read_file(testsupport::fixture("cparse/three_defs.c"));
    auto r = extract(text);
    REQUIRE(r.units.size() == 3);
    CHECK(r.units[0].name == "table_sum");
    CHECK(r.units[0].start_line == 7);
    CHECK(r.units[0].end_line == 16);
    CHECK(r.units[1].name == "origin_distance");
    CHECK(r.units[1].start_line == 18);
    CHECK(r.units[1].end_line == 18);
    CHECK(r.units[2].name == "main");
    CHECK(r.units[2].start_line == 20);
    CHECK(r.units[2].end_line == 25);
    CHECK(r.diagnostics.empty());
  }

  TEST_CASE("struct bodies and initializers are not functions") {
    auto r = extract("struct s { int a; };\nint t[] = { 1, 2 };\nstatic void g(void) { }\n");
    REQUIRE(r.units.size() == 1);
    CHECK(r.units[0].name == "g");
  }

  TEST_CASE("namespaces, extern C and methods") {
    auto r = extract(
        "namespace n {\nint a() { return 1; }\n}\nextern \"C\" {\nvoid b(void) {}\n}\n"
        "class K { void inl() {} };\nint K::m(int x) const { return x; }\n",
        Language::Cpp);
    std::vector<std::string> names;
    for (const auto& u : r.units) names.push_back(u.name);
    CHECK(std::find(names.begin(), names.end(), "a") != names.end());
    CHECK(std::find(names.begin(), names.end(), "b") != names.end());
    CHECK(std::find(names.begin(), names.end(), "inl") == names.end());
  }

  TEST_CASE("comments above and inside the span are collected") {
    auto r = extract("// far\n\n// above\nint f(void)\n{\n  // one\n  // two\n  return 0; /* three */\n}\n");
    REQUIRE(r.units.size() == 1);
    REQUIRE(r.units[0].comments.size() == 3);
    CHECK(r.units[0].comments[0] == "// above");
    CHECK(r.units[0].comments[1].find("one") != std::string::npos);
    CHECK(r.units[0].comments[1].find("two") != std::string::npos);
    CHECK(r.units[0].comments[2].find("three") != std::string::npos);
  }

  TEST_CASE("unmatched brace stops extraction with a diagnostic") {
    auto r = extract("int f(void) { return 0; }\nint g(void) { if (1) {\n");
    CHECK(r.units.size() == 1);
    CHECK_FALSE(r.diagnostics.empty());
  }

  TEST_CASE("units carry their body AST") {
    auto r = extract("int f(void) { x = 1; }");
    REQUIRE(r.units.size() == 1);
    CHECK(to_sexpr(r.units[0].body_ast) == "block[expr_s[assign_e[id,lit]]]");
  }
}
