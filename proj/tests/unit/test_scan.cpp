#include <doctest.h>

#include <fstream>

#include "codelineage/config.hpp"
#include "codelineage/error.hpp"
#include "codelineage/scan.hpp"
#include "corpus_builder.hpp"
#include "test_support.hpp"

using namespace codelineage;
using namespace codelineage::scan;
using testsupport::make_corpus;
using testsupport::make_specimen;

TEST_SUITE("scan") {
  TEST_CASE("list loading deduplicates and skips comments") {
    testsupport::TempDir dir("list");
    testsupport::write_file(dir.path() / "l.txt", "sleep\nsleep\nsend\n");
    CHECK(load_identifier_list(dir.path() / "l.txt", ListKind::Api).names.size() == 2);
    testsupport::write_file(dir.path() / "e.txt", "");
    CHECK_THROWS_AS(load_identifier_list(dir.path() / "e.txt", ListKind::Api), Error);
    testsupport::write_file(dir.path() / "c.txt", "# only\n\n   \n");
    try {
      load_identifier_list(dir.path() / "c.txt", ListKind::Api);
      FAIL("expected EmptyList");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EmptyList);
    }
    try {
      load_identifier_list(dir.path() / "missing.txt", ListKind::Api);
      FAIL("expected Io");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Io);
    }
  }

  TEST_CASE("shipped lists match a line-count oracle") {
    for (auto [file, kind] : {std::pair{"apis.txt", ListKind::Api}, std::pair{"syscalls.txt", ListKind::Syscall}}) {
      const auto path = PipelineConfig::default_data_dir() / "lists" / file;
      std::ifstream in(path);
      std::set<std::string> names;
      for (std::string line; std::getline(in, line);) {
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        names.insert(line == "Sleep" ? "sleep" : line);
      }
      CHECK(load_identifier_list(path, kind).names.size() == names.size());
    }
  }

  TEST_CASE("Sleep folds, other names stay case-sensitive") {
    CHECK(fold_identifier("Sleep") == "sleep");
    CHECK(fold_identifier("sleep") == "sleep");
    CHECK(fold_identifier("Send") == "Send");
    auto list = make_identifier_list(ListKind::Api, {"sleep", "send", "CloseHandle"});
    auto hits = scan_tokens("s", cparse::lex("Sleep(1000); sendmail(x); Send(1);").tokens, list);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].identifier == "sleep");
    CHECK(hits[0].occurrence_count == 1);
    CHECK(hits[0].specimen_presence);
  }

  TEST_CASE("comments and strings never match") {
    auto list = make_identifier_list(ListKind::Api, {"CloseHandle"});
    CHECK(scan_tokens("s", cparse::lex("// CloseHandle\n/* CloseHandle */ x = \"CloseHandle\";").tokens, list)
              .empty());
  }

  TEST_CASE("counts across files") {
    auto s = make_specimen("a", "2001-01-01",
                           {{"a.c", "void f(){ CloseHandle(h); CloseHandle(g); }"}, {"b.c", "void g(){ CloseHandle(h); }"}});
    auto hits = scan_specimen(s, make_identifier_list(ListKind::Api, {"CloseHandle"}));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].occurrence_count == 3);
    CHECK(hits[0].specimen_presence);
  }

  TEST_CASE("adding a file never lowers counts") {
    auto list = make_identifier_list(ListKind::Api, {"send", "recv"});
    auto s = make_specimen("a", "2001-01-01", {{"a.c", "void f(){ send(1); recv(2); }"}});
    auto before = scan_specimen(s, list);
    s.files.push_back(SourceFile::from_bytes("b.c", Language::C, "void g(){ send(3); }"));
    auto after = scan_specimen(s, list);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(after[i].occurrence_count >= before[i].occurrence_count);
  }

  TEST_CASE("periods") {
    auto p = parse_periods("1976-1995,1996-2000,2001");
    REQUIRE(p.size() == 3);
    CHECK(p[0] == Period{1976, 1995});
    CHECK(p[2] == Period{2001, 2001});
    CHECK(p[2].label() == "2001");
    CHECK_THROWS_AS(parse_periods("2000-1990"), Error);
    CHECK_THROWS_AS(parse_periods("1990-2000,1995-2005"), Error);
    CHECK_THROWS_AS(parse_periods("2001-2005,1990-1995"), Error);
    CHECK_THROWS_AS(parse_periods("abc"), Error);
    CHECK(parse_periods(kDefaultPeriods).size() == 7);
  }

  TEST_CASE("single specimen ranking") {
    auto c = make_corpus({make_specimen("a", "1980-01-01", {{"a.c", "void f(){ bind(s); }"}})});
    auto list = make_identifier_list(ListKind::Api, {"bind", "send"});
    auto rows = top_k_by_period(c, scan_corpus(c, list), 3, parse_periods("1976-1995"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].top == std::vector<RankedIdentifier>{{"bind", 1}});
    CHECK(format_row(rows[0]) == "1976-1995 & bind (1)");
  }

  TEST_CASE("ranking by presence with alphabetical ties") {
    auto c = make_corpus({
        make_specimen("a", "2016-01-01", {{"a.c", "void f(){ Sleep(1); send(1); send(2); send(3); }"}}),
        make_specimen("b", "2017-01-01", {{"b.c", "void f(){ Sleep(1); send(1); }"}}),
        make_specimen("c", "2018-01-01", {{"c.c", "void f(){ sleep(1); recv(1); bind(1); }"}}),
        make_specimen("d", "2030-01-01", {{"d.c", "void f(){ recv(1); recv(2); }"}}),
    });
    auto list = make_identifier_list(ListKind::Api, {"sleep", "send", "recv", "bind"});
    auto hits = scan_corpus(c, list, 2);
    auto rows = top_k_by_period(c, hits, 3, parse_periods("2016-2020"));
    REQUIRE(rows.size() == 1);
    CHECK(format_row(rows[0]) == "2016-2020 & sleep (3) & send (2) & bind (1)");
    std::reverse(hits.begin(), hits.end());
    CHECK(format_row(top_k_by_period(c, hits, 3, parse_periods("2016-2020"))[0]) == format_row(rows[0]));
  }
}
