#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>

#include "codelineage/error.hpp"
#include "test_support.hpp"

using namespace codelineage;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(CODELINEAGE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::pair<int, std::string> capture(const std::string& args) {
  const std::string cmd = std::string(CODELINEAGE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("empty corpus exits zero") {
    testsupport::TempDir dir("cli-empty");
    testsupport::write_file(dir.path() / "corpus.json", "[]");
    CHECK(run("run --corpus " + q(dir.path() / "corpus.json") + " --out " + q(dir.path() / "out")) == 0);
    CHECK(std::filesystem::exists(dir.path() / "out" / "genealogy.json"));
  }

  TEST_CASE("error kinds become exit codes") {
    testsupport::TempDir dir("cli-err");
    testsupport::write_file(dir.path() / "dup.json",
                            "[{\"id\":\"w\",\"path\":\"a\",\"date\":\"2001-01-01\",\"language\":\"C\"},"
                            "{\"id\":\"w\",\"path\":\"b\",\"date\":\"2001-01-01\",\"language\":\"C\"}]");
    CHECK(run("ingest --corpus " + q(dir.path() / "dup.json")) == exit_code_for(ErrorKind::DuplicateSpecimenId));
    testsupport::write_file(dir.path() / "bad.toml", "[clone]\nthreshold = 1.5\n");
    CHECK(run("clones --config " + q(dir.path() / "bad.toml") + " --corpus " +
              q(testsupport::fixture("corpus/corpus.json"))) == exit_code_for(ErrorKind::Config));
    CHECK(run("clones --threshold 1.5 --corpus " + q(testsupport::fixture("corpus/corpus.json"))) ==
          exit_code_for(ErrorKind::Config));
    testsupport::write_file(dir.path() / "unknown.toml", "colour = 1\n");
    CHECK(run("run --config " + q(dir.path() / "unknown.toml")) == exit_code_for(ErrorKind::Config));
    testsupport::write_file(dir.path() / "ids.txt", "ghost\n");
    CHECK(run("enrich --corpus " + q(testsupport::fixture("corpus/corpus.json")) + " --derived " +
              q(dir.path() / "ids.txt") + " --cwe 467 --report " + q(testsupport::fixture("cwe/report.xml"))) ==
          exit_code_for(ErrorKind::UnknownSpecimen));
    CHECK(run("genealogy --corpus " + q(testsupport::fixture("corpus/corpus.json")) + " --label colour --out " +
              q(dir.path() / "g")) == exit_code_for(ErrorKind::UnknownLabelSlot));
  }

  TEST_CASE("environment threads are validated") {
    CHECK(run("ingest --corpus " + q(testsupport::fixture("corpus/corpus.json"))) == 0);
    const std::string cmd = "CODELINEAGE_THREADS=bogus " + std::string(CODELINEAGE_CLI) + " ingest --corpus " +
                            q(testsupport::fixture("corpus/corpus.json")) + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == exit_code_for(ErrorKind::Config));
  }

  TEST_CASE("subcommands produce output") {
    testsupport::TempDir dir("cli-out");
    const auto corpus = q(testsupport::fixture("corpus/corpus.json"));
    auto [code, out] = capture("scan --corpus " + corpus + " --kind api --periods 2001-2005,2016-2020,2021-2025");
    CHECK(code == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 3);
    CHECK(out.rfind("2001-2005 & ", 0) == 0);
    CHECK(out.find("\n2016-2020 & ") != std::string::npos);
    CHECK(run("clones --corpus " + corpus + " --out " + q(dir.path() / "clones.jsonl")) == 0);
    CHECK(testsupport::read_file(dir.path() / "clones.jsonl").find("spread_usb") != std::string::npos);
    CHECK(run("tags --corpus " + corpus + " --out " + q(dir.path() / "tags.jsonl")) == 0);
    CHECK(testsupport::read_file(dir.path() / "tags.jsonl").find("grab_start") != std::string::npos);
    CHECK(run("metrics --corpus " + corpus + " --out " + q(dir.path() / "m")) == 0);
    CHECK(std::filesystem::exists(dir.path() / "m" / "metrics.csv"));
    CHECK(run("genealogy --corpus " + corpus + " --label class --out " + q(dir.path() / "g")) == 0);
    CHECK(std::filesystem::exists(dir.path() / "g" / "category_class.json"));
  }
}
