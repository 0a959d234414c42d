#include <doctest.h>

#include <fstream>
#include <random>
#include <regex>

#include "codelineage/corpus.hpp"
#include "codelineage/cparse/functions.hpp"
#include "codelineage/error.hpp"
#include "codelineage/tags.hpp"
#include "test_support.hpp"

using namespace codelineage;
using namespace codelineage::tags;

namespace {

const Lexicon& lex() { return testsupport::shipped_lexicon(); }

std::vector<std::string> normalize(std::vector<std::string> texts) {
  std::vector<RawTag> raw;
  for (auto& t : texts) raw.push_back({t, TagSource::FunctionName});
  return normalize_tags(raw, lex()).tags();
}

std::vector<std::string> sample_words(std::size_t n) {
  std::ifstream in(PipelineConfig::default_data_dir() / "lexicon" / "words.txt");
  std::vector<std::string> all;
  for (std::string w; std::getline(in, w);)
    if (w.size() >= 3 && lex().accept(w) == w && !lex().is_abbreviation(w)) all.push_back(w);
  std::mt19937_64 rng(3);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(n, all.size()));
  return all;
}

}  // namespace

TEST_SUITE("tags") {
  TEST_CASE("splitting") {
    CHECK(split_identifier("grabStart") == std::vector<std::string>{"grab", "Start"});
    CHECK(split_identifier("cpu_speed") == std::vector<std::string>{"cpu", "speed"});
    CHECK(split_identifier("HTTPServer2go") == std::vector<std::string>{"HTTP", "Server", "2", "go"});
    CHECK(split_identifier("__a--b__") == std::vector<std::string>{"a", "b"});
    CHECK(split_identifier("").empty());
  }

  TEST_CASE("normalization examples") {
    CHECK(normalize({"grabStart"}) == std::vector<std::string>{"grab", "start"});
    CHECK(normalize({"cpu_speed", "cnt"}) == std::vector<std::string>{"count", "cpu", "speed"});
    CHECK(normalize({"xZq9", "the"}).empty());
    CHECK(normalize({"sendingFiles"}) == std::vector<std::string>{"file", "send"});
  }

  TEST_CASE("provenance is unioned across duplicates") {
    auto set = normalize_tags({{"window", TagSource::Comment}, {"hWindow", TagSource::VariableName}}, lex());
    REQUIRE(set.contains("window"));
    CHECK(set.provenance.at("window") == std::set<TagSource>{TagSource::VariableName, TagSource::Comment});
  }

  TEST_CASE("raw tags from a function") {
    auto file = SourceFile::from_bytes("f.c", Language::C,
                                       "int f(int a, int b)\n{\n  RegOpenKeyA(\"HKEY_LOCAL_MACHINE\\\\SOFTWARE\\\\Run\");\n"
                                       "  CopyFileA(\"C:\\\\Windows\\\\evil.exe\", \"plain text\");\n  return a + b;\n}\n");
    auto units = cparse::extract_functions(file, "s").units;
    REQUIRE(units.size() == 1);
    FrequencyKeywordExtractor kw(lex());
    auto raw = extract_raw_tags(units[0], kw);
    std::vector<RawTag> want{{"f", TagSource::FunctionName},
                             {"a", TagSource::VariableName},
                             {"b", TagSource::VariableName},
                             {"HKEY_LOCAL_MACHINE\\\\SOFTWARE\\\\Run", TagSource::RegistryPath},
                             {"C:\\\\Windows\\\\evil.exe", TagSource::FilePath}};
    CHECK(raw == want);
    auto set = normalize_tags(raw, lex());
    CHECK(set.contains("machine"));
    CHECK(set.contains("software"));
    CHECK(set.contains("run"));
    CHECK_FALSE(set.contains("f"));
  }

  TEST_CASE("grab_start fixture") {
    auto corpus = load_corpus(testsupport::fixture("corpus/corpus.json"));
    FrequencyKeywordExtractor kw(lex());
    bool found = false;
    for (const auto& f : corpus.find("x0r_usb")->files) {
      for (const auto& u : cparse::extract_functions(f, "x0r_usb").units) {
        if (u.name != "grab_start") continue;
        found = true;
        auto set = normalize_tags(extract_raw_tags(u, kw), lex());
        for (const char* t : {"grab", "start", "window", "send"}) {
          CAPTURE(t);
          CHECK(set.contains(t));
        }
      }
    }
    CHECK(found);
  }

  TEST_CASE("comment keywords") {
    FrequencyKeywordExtractor kw(lex(), 3);
    CHECK(kw.keywords("the file and the file, then a key; key file") ==
          std::vector<std::string>{"file", "key"});
    CHECK(kw.keywords("").empty());
  }

  TEST_CASE("path patterns") {
    CHECK(is_registry_path("HKEY_CURRENT_USER\\\\Software"));
    CHECK(is_registry_path("SOFTWARE\\\\Microsoft"));
    CHECK_FALSE(is_registry_path("hello"));
    CHECK(is_file_path("C:\\\\temp\\\\a.txt"));
    CHECK(is_file_path("%APPDATA%\\\\x"));
    CHECK(is_file_path("svchost.exe"));
    CHECK(is_file_path("/tmp/x"));
    CHECK_FALSE(is_file_path("send it"));
    CHECK(literal_contents("L\"abc\"") == "abc");
    CHECK(literal_contents("R\"x(a\"b)x\"") == "a\"b");
  }

  TEST_CASE("lexicon validation") {
    CHECK_THROWS_AS(Lexicon::from_entries({"count"}, {{"cnt", "count"}, {"count", "tally"}}, {}, {}), Error);
    CHECK_THROWS_AS(Lexicon::from_entries({"count"}, {{"cnt", "count"}}, {"cnt"}, {}), Error);
    testsupport::TempDir dir("lex");
    CHECK_THROWS_AS(Lexicon::load(LexiconPaths::in_directory(dir.path())), Error);
    testsupport::write_file(dir.path() / "words.txt", "alpha\n");
    testsupport::write_file(dir.path() / "abbrev.tsv", "no tab here\n");
    testsupport::write_file(dir.path() / "whitelist.txt", "");
    testsupport::write_file(dir.path() / "blacklist.txt", "");
    CHECK_THROWS_AS(Lexicon::load(LexiconPaths::in_directory(dir.path())), Error);
  }

  TEST_CASE("accept uses inflection stripping") {
    CHECK(lex().accept("windows") == std::optional<std::string>("window"));
    CHECK(lex().accept("sending") == std::optional<std::string>("send"));
    CHECK(lex().accept("the") == std::nullopt);
    CHECK(lex().accept("cpu") == std::optional<std::string>("cpu"));
  }

  TEST_CASE("properties over random raw tags") {
    auto words = sample_words(400);
    std::mt19937_64 rng(21);
    const std::regex lower("^[a-z]+$");
    for (int round = 0; round < 300; ++round) {
      auto raw = testsupport::random_raw_tags(rng, words);
      auto set = normalize_tags(raw, lex());
      std::vector<RawTag> again;
      for (const auto& [tag, sources] : set.provenance)
        for (auto s : sources) again.push_back({tag, s});
      CHECK(normalize_tags(again, lex()) == set);
      auto shuffled = raw;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      CHECK(normalize_tags(shuffled, lex()) == set);
      for (const auto& t : set.tags()) {
        CHECK(std::regex_match(t, lower));
        CHECK((lex().is_word(t) || lex().whitelisted(t)));
        CHECK_FALSE(lex().blacklisted(t));
      }
    }
  }

  TEST_CASE("two dictionary words joined in camelCase split back") {
    auto words = sample_words(300);
    for (std::size_t i = 0; i + 1 < words.size(); i += 2) {
      std::string w2 = words[i + 1];
      w2[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w2[0])));
      auto got = normalize({words[i] + w2});
      std::vector<std::string> want{words[i], words[i + 1]};
      std::sort(want.begin(), want.end());
      want.erase(std::unique(want.begin(), want.end()), want.end());
      CAPTURE(words[i] + w2);
      CHECK(got == want);
    }
  }
}
