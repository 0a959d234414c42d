#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "codelineage/cparse/functions.hpp"
#include "codelineage/error.hpp"
#include "codelineage/metrics.hpp"
#include "test_support.hpp"

using namespace codelineage;
using namespace codelineage::metrics;

namespace {

SourceFile src(const std::string& text) { return SourceFile::from_bytes("t.c", Language::C, text); }

cparse::AstNode fn_body(const std::string& text) {
  auto r = cparse::extract_functions(src(text), "s");
  REQUIRE(r.units.size() == 1);
  return r.units[0].body_ast;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("sloc examples") {
    CHECK(count_sloc(src("int x;\n\n// c\n")) == 1);
    CHECK(count_sloc(src("x=1; /* c */\n")) == 1);
    CHECK(count_sloc(src("")) == 0);
  }

  TEST_CASE("comment ratio examples") {
    CHECK(comment_ratio(src("// a\n// b\n// c\n// d\n// e\n")) == 5.0);
    CHECK(comment_ratio(src("a;\nb;\nc;\nd;\n// x\n/* y */\n")) == 0.5);
    CHECK(comment_ratio(LineCounts{0, 0}) == 0.0);
  }

  TEST_CASE("function points") {
    CHECK(estimate_function_points({0, 0, 0}, Language::C) == 0.0);
    CHECK(estimate_function_points({970, 1, 0}, Language::C) == 10.0);
    CHECK(estimate_function_points({100, 1, 0}, Language::Cpp) == 2.0);
    CHECK_THROWS_AS(estimate_function_points({100, 1, 0}, Language::Other), Error);
  }

  TEST_CASE("cocomo examples") {
    CHECK(cocomo_effort(1000) == doctest::Approx(2.4).epsilon(1e-15));
    CHECK(cocomo_effort(0) == 0.0);
    CHECK(cocomo_effort(10000) == doctest::Approx(26.928442903247122).epsilon(1e-13));
    CHECK(cocomo_dev_time(1.0) == 2.5);
    CHECK(cocomo_dev_time(0.0) == 0.0);
    CHECK(cocomo_team_size(2.5, 2.5) == 1.0);
    CHECK(cocomo_team_size(0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(cocomo_team_size(1.0, 0.0), Error);
    auto e = cocomo(10000);
    CHECK(e.team_size * e.dev_time_months == doctest::Approx(e.effort_pm).epsilon(1e-14));
  }

  TEST_CASE("cyclomatic examples") {
    CHECK(cyclomatic_complexity(fn_body("void f(void) { a = 1; b = 2; }")) == 1);
    CHECK(cyclomatic_complexity(fn_body("void f(void) { if (a) b = 2; }")) == 2);
    CHECK(cyclomatic_complexity(fn_body("void f(void) { if (a) b = 2; while (c) d(); e = a && b; }")) == 4);
  }

  TEST_CASE("execution path examples") {
    CHECK(execution_paths(fn_body("void f(void) { a = 1; b = 2; }")).value == 1);
    CHECK(execution_paths(fn_body("void f(void) { if (a) x(); if (b) y(); }")).value == 4);
    CHECK(execution_paths(fn_body("void f(void) { for (i = 0; i < n; i++) { if (a[i]) c++; } }")).value == 3);
    CHECK(execution_paths(fn_body("void f(void) { }")).value == 1);
  }

  TEST_CASE("execution paths saturate and keep log10") {
    std::string body = "void f(void) {";
    for (int i = 0; i < 80; ++i) body += " if (a) x();";
    body += " }";
    auto p = execution_paths(fn_body(body));
    CHECK(p.value == kPathSaturation);
    CHECK(p.log10 == doctest::Approx(80 * std::log10(2.0)).epsilon(1e-12));

    PathCount big{kPathSaturation, 20.0};
    CHECK(saturating_sum(big, PathCount{}).value == kPathSaturation);
    CHECK(saturating_product(big, PathCount{2, std::log10(2.0)}).value == kPathSaturation);
    CHECK(saturating_product(PathCount{3, std::log10(3.0)}, PathCount{5, std::log10(5.0)}).value == 15);
  }

  TEST_CASE("twenty-file fixture suite") {
    auto expected = nlohmann::json::parse(testsupport::read_file(testsupport::fixture("metrics/expected.json")));
    REQUIRE(expected.size() == 20);
    for (const auto& [name, want] : expected.items()) {
      CAPTURE(name);
      auto file = src(testsupport::read_file(testsupport::fixture("metrics/" + name)));
      auto lines = classify_lines(file);
      CHECK(count_sloc(file) == want["sloc"].get<std::uint64_t>());
      CHECK(lines.comment_lines == want["comment_lines"].get<std::uint64_t>());
      const double ratio = want["comment_lines"].get<double>() / std::max(1.0, want["sloc"].get<double>());
      CHECK(comment_ratio(file) == doctest::Approx(ratio));
      auto units = cparse::extract_functions(file, "s").units;
      REQUIRE(units.size() == 1);
      CHECK(cyclomatic_complexity(units[0].body_ast) == want["cyclomatic"].get<std::uint32_t>());
      CHECK(execution_paths(units[0].body_ast).value == want["paths"].get<std::uint64_t>());
    }
  }

  TEST_CASE("yearly aggregation") {
    auto one = aggregate_yearly("x", std::vector<YearValue>{{2001, 7.0}});
    CHECK(one.points.at(2001) == 0.5);
    auto two = aggregate_yearly("x", std::vector<YearValue>{{2001, 10.0}, {2005, 30.0}});
    CHECK(two.points.at(2001) == 0.0);
    CHECK(two.points.at(2005) == 1.0);
    CHECK_THROWS_AS(aggregate_yearly("x", std::vector<YearValue>{}), Error);

    // Six specimens across three years; means worked out by hand:
    // 2001: (2+4)/2 = 3, 2005: (9+6+3)/3 = 6, 2010: 12.
    auto six = aggregate_yearly(
        "x", std::vector<YearValue>{{2001, 2}, {2005, 9}, {2001, 4}, {2010, 12}, {2005, 6}, {2005, 3}});
    CHECK(six.raw.at(2001) == 3.0);
    CHECK(six.raw.at(2005) == 6.0);
    CHECK(six.raw.at(2010) == 12.0);
    CHECK(six.points.at(2001) == 0.0);
    CHECK(six.points.at(2005) == doctest::Approx(1.0 / 3.0));
    CHECK(six.points.at(2010) == 1.0);
  }
}
