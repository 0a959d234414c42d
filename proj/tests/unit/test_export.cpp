#include <doctest.h>

#include "codelineage/config.hpp"
#include "codelineage/error.hpp"
#include "codelineage/genealogy.hpp"
#include "codelineage/pipeline.hpp"
#include "test_support.hpp"

using namespace codelineage;
using namespace codelineage::genealogy;
using nlohmann::json;

namespace {

const RunMeta kMeta{"0.0.0-test", "0123456789abcdef"};

Genealogy fixture_genealogy() {
  auto cfg = PipelineConfig::defaults();
  auto corpus = load_corpus(testsupport::fixture("corpus/corpus.json"));
  auto parsed = pipeline::parse_corpus(corpus, 1);
  auto inputs = pipeline::clone_inputs(parsed);
  auto edges = pipeline::detect_clones(corpus, inputs, cfg);
  auto tags = pipeline::tag_functions(parsed, testsupport::shipped_lexicon(), 1);
  return build_genealogy(corpus, aggregate_to_specimens(edges, &tags));
}

// Structural check of a genealogy document against the documented schema.
void check_genealogy_schema(const json& doc) {
  REQUIRE(doc.is_object());
  CHECK(doc.at("schema") == 1);
  CHECK(doc.at("meta").at("tool") == "codelineage");
  CHECK(doc.at("meta").at("version").is_string());
  CHECK(doc.at("meta").at("config_digest").is_string());
  REQUIRE(doc.at("nodes").is_array());
  REQUIRE(doc.at("edges").is_array());
  std::set<std::string> ids;
  for (const auto& n : doc["nodes"]) {
    CHECK(n.at("id").is_string());
    CHECK(n.at("name").is_string());
    CHECK(Date::parse(n.at("date").get<std::string>()).has_value());
    CHECK(n.at("year").get<int>() == Date::parse(n["date"].get<std::string>())->year);
    const auto& labels = n.at("labels");
    CHECK(labels.size() == 8);
    for (LabelSlot slot : kLabelSlots) {
      const auto& v = labels.at(std::string(label_slot_name(slot)));
      if (slot == LabelSlot::Fud) CHECK((v.is_null() || v.is_boolean()));
      else CHECK((v.is_null() || v.is_array()));
    }
    ids.insert(n["id"].get<std::string>());
  }
  for (const auto& e : doc["edges"]) {
    CHECK(ids.count(e.at("src").get<std::string>()) == 1);
    CHECK(ids.count(e.at("dst").get<std::string>()) == 1);
    CHECK(e.at("weight").is_number_unsigned());
    CHECK(e.at("ambiguous_direction").is_boolean());
    std::uint64_t sum = 0;
    for (const auto& p : e.at("function_pairs")) {
      for (const char* k : {"src_fn", "src_file", "dst_fn", "dst_file"}) CHECK(p.at(k).is_string());
      CHECK(p.at("similarity").is_number());
      CHECK(p.at("src_tags").is_array());
      sum += p.at("weight").get<std::uint64_t>();
    }
    CHECK(sum == e["weight"].get<std::uint64_t>());
  }
}

}  // namespace

TEST_SUITE("export") {
  TEST_CASE("empty genealogy exports empty arrays") {
    auto doc = genealogy_json(Genealogy{}, kMeta);
    CHECK(doc["nodes"].empty());
    CHECK(doc["edges"].empty());
    check_genealogy_schema(json::parse(to_text(doc)));
    CHECK(to_text(doc).back() == '\n');
  }

  TEST_CASE("fixture genealogy validates and round-trips") {
    auto g = fixture_genealogy();
    REQUIRE(g.nodes.size() == 3);
    REQUIRE(g.edges.size() == 2);
    auto text = to_text(genealogy_json(g, kMeta));
    auto doc = json::parse(text);
    check_genealogy_schema(doc);
    auto back = import_genealogy_json(doc);
    CHECK(back == g);
    CHECK(to_text(genealogy_json(back, kMeta)) == text);
  }

  TEST_CASE("key order is stable") {
    auto text = to_text(genealogy_json(fixture_genealogy(), kMeta));
    CHECK(text.find("\"schema\"") < text.find("\"meta\""));
    CHECK(text.find("\"meta\"") < text.find("\"nodes\""));
    CHECK(text.find("\"nodes\"") < text.find("\"edges\""));
  }

  TEST_CASE("schema mismatch is rejected") {
    CHECK_THROWS_AS(import_genealogy_json(json::parse("{\"schema\": 2, \"nodes\": [], \"edges\": []}")), Error);
    CHECK_THROWS_AS(import_genealogy_json(json::parse("[]")), Error);
  }

  TEST_CASE("category and lineage documents") {
    auto g = fixture_genealogy();
    auto cat = category_json(build_category_view(g, LabelSlot::Class), kMeta);
    CHECK(cat["schema"] == 1);
    CHECK(cat["label_slot"] == "class");
    CHECK(cat["categories"].size() == 3);
    CHECK(cat["matrix"].size() == 3);
    auto lin = lineage_json(lineage_of(g, "botnet_a", 2), g);
    CHECK(lin["focus"]["id"] == "botnet_a");
    CHECK(lin["focus"]["year"] == 2016);
    CHECK(lin["ancestors"].size() == 1);
    CHECK(lin["ancestors"][0]["id"] == "x0r_usb");
    CHECK(lin["descendants"][0]["id"] == "kernelhub");
    CHECK(lin["descendants"][0]["direct_weight"].is_number());
  }

  TEST_CASE("export writes every view") {
    testsupport::TempDir dir("export");
    auto g = fixture_genealogy();
    std::vector<CategoryView> views;
    for (LabelSlot s : kLabelSlots) views.push_back(build_category_view(g, s));
    export_view_json(g, views, kMeta, dir.path());
    CHECK(std::filesystem::exists(dir.path() / "genealogy.json"));
    for (LabelSlot s : kLabelSlots)
      CHECK(std::filesystem::exists(dir.path() / ("category_" + std::string(label_slot_name(s)) + ".json")));
    testsupport::write_file(dir.path() / "plain", "x");
    CHECK_THROWS_AS(write_text_file(dir.path() / "plain" / "y.json", "x"), Error);
  }
}
