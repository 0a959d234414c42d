#include <fstream>

#include <fmt/format.h>

#include "codelineage/error.hpp"
#include "codelineage/genealogy.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace codelineage::genealogy {

namespace {

// Every slot present; unresolved slots are null.
ordered_json node_labels(const LabelSet& labels) {
  ordered_json j = ordered_json::object();
  for (LabelSlot slot : kLabelSlots) {
    const std::string key(label_slot_name(slot));
    const auto& v = labels.get(slot);
    if (!v) j[key] = nullptr;
    else if (slot == LabelSlot::Fud && v->size() == 1) j[key] = v->front() == "true";
    else j[key] = *v;
  }
  return j;
}

ordered_json pair_json(const FunctionPair& p) {
  ordered_json j;
  j["src_fn"] = p.src_fn;
  j["src_file"] = p.src_file;
  j["src_line"] = p.src_line;
  j["dst_fn"] = p.dst_fn;
  j["dst_file"] = p.dst_file;
  j["dst_line"] = p.dst_line;
  j["similarity"] = p.similarity;
  j["weight"] = p.weight;
  j["src_tags"] = p.src_tags;
  j["dst_tags"] = p.dst_tags;
  return j;
}

ordered_json entry_json(const LineageEntry& e, const Genealogy& g) {
  ordered_json j;
  j["id"] = e.id;
  const Node* n = g.find(e.id);
  j["year"] = n != nullptr ? n->date.year : 0;
  j["depth"] = e.depth;
  j["path_weight"] = e.path_weight;
  j["direct_weight"] = e.direct_weight ? ordered_json(*e.direct_weight) : ordered_json(nullptr);
  return j;
}

[[noreturn]] void schema_error(const std::string& msg) {
  throw Error(ErrorKind::ManifestParse, fmt::format("genealogy.json: {}", msg));
}

}  // namespace

ordered_json meta_json(const RunMeta& meta) {
  ordered_json j;
  j["tool"] = "codelineage";
  j["version"] = meta.tool_version;
  j["config_digest"] = meta.config_digest;
  return j;
}

ordered_json genealogy_json(const Genealogy& g, const RunMeta& meta) {
  ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["meta"] = meta_json(meta);
  ordered_json nodes = ordered_json::array();
  for (const auto& n : g.nodes) {
    ordered_json j;
    j["id"] = n.id;
    j["name"] = n.name;
    j["date"] = n.date.to_string();
    j["year"] = n.date.year;
    j["labels"] = node_labels(n.labels);
    nodes.push_back(std::move(j));
  }
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.edges) {
    ordered_json j;
    j["src"] = e.src_id;
    j["dst"] = e.dst_id;
    j["weight"] = e.weight;
    j["ambiguous_direction"] = e.ambiguous_direction;
    ordered_json pairs = ordered_json::array();
    for (const auto& p : e.function_pairs) pairs.push_back(pair_json(p));
    j["function_pairs"] = std::move(pairs);
    edges.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc;
}

ordered_json category_json(const CategoryView& view, const RunMeta& meta) {
  ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["meta"] = meta_json(meta);
  doc["label_slot"] = std::string(label_slot_name(view.slot));
  doc["years"] = view.years;
  ordered_json cats = ordered_json::array();
  for (std::size_t c = 0; c < view.categories.size(); ++c) {
    ordered_json j;
    j["value"] = view.categories[c];
    j["specimens"] = view.specimen_totals[c];
    ordered_json per_year = ordered_json::object();
    for (const auto& [year, n] : view.specimens_per_year[c]) per_year[std::to_string(year)] = n;
    j["per_year"] = std::move(per_year);
    cats.push_back(std::move(j));
  }
  doc["categories"] = std::move(cats);
  doc["matrix"] = view.matrix;
  return doc;
}

ordered_json lineage_json(const LineageView& view, const Genealogy& g) {
  ordered_json doc;
  doc["schema"] = kSchemaVersion;
  ordered_json focus;
  focus["id"] = view.focus_id;
  const Node* n = g.find(view.focus_id);
  focus["year"] = n != nullptr ? n->date.year : 0;
  doc["focus"] = std::move(focus);
  doc["max_depth"] = view.max_depth;
  ordered_json anc = ordered_json::array(), desc = ordered_json::array(), detail = ordered_json::array();
  for (const auto& e : view.ancestors) anc.push_back(entry_json(e, g));
  for (const auto& e : view.descendants) desc.push_back(entry_json(e, g));
  for (const auto& d : view.function_detail) {
    ordered_json j;
    j["src"] = d.src_id;
    j["dst"] = d.dst_id;
    j.update(pair_json(d.pair));
    detail.push_back(std::move(j));
  }
  doc["ancestors"] = std::move(anc);
  doc["descendants"] = std::move(desc);
  doc["function_detail"] = std::move(detail);
  return doc;
}

Genealogy import_genealogy_json(const json& doc) {
  if (!doc.is_object()) schema_error("document is not an object");
  if (doc.value("schema", 0) != kSchemaVersion) schema_error(fmt::format("expected schema {}", kSchemaVersion));
  Genealogy g;
  try {
    for (const auto& j : doc.at("nodes")) {
      Node n;
      n.id = j.at("id").get<std::string>();
      n.name = j.at("name").get<std::string>();
      auto date = Date::parse(j.at("date").get<std::string>());
      if (!date) schema_error(fmt::format("node '{}' has an invalid date", n.id));
      n.date = *date;
      n.labels = labels_from_json(j.at("labels"), n.id);
      g.nodes.push_back(std::move(n));
    }
    for (const auto& j : doc.at("edges")) {
      SpecimenEdge e;
      e.src_id = j.at("src").get<std::string>();
      e.dst_id = j.at("dst").get<std::string>();
      e.weight = j.at("weight").get<std::uint64_t>();
      e.ambiguous_direction = j.at("ambiguous_direction").get<bool>();
      for (const auto& p : j.at("function_pairs")) {
        e.function_pairs.push_back({p.at("src_fn").get<std::string>(), p.at("src_file").get<std::string>(),
                                    p.at("src_line").get<int>(), p.at("dst_fn").get<std::string>(),
                                    p.at("dst_file").get<std::string>(), p.at("dst_line").get<int>(),
                                    p.at("similarity").get<double>(), p.at("weight").get<std::uint64_t>(),
                                    p.at("src_tags").get<std::vector<std::string>>(),
                                    p.at("dst_tags").get<std::vector<std::string>>()});
      }
      g.edges.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    schema_error(e.what());
  }
  std::sort(g.nodes.begin(), g.nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  return g;
}

std::string to_text(const ordered_json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const fs::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, fmt::format("cannot write {}", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::Io, fmt::format("write to {} failed", path.string()));
}

void export_view_json(const Genealogy& g, const std::vector<CategoryView>& views, const RunMeta& meta,
                      const fs::path& out_dir) {
  write_text_file(out_dir / "genealogy.json", to_text(genealogy_json(g, meta)));
  for (const auto& v : views)
    write_text_file(out_dir / fmt::format("category_{}.json", label_slot_name(v.slot)), to_text(category_json(v, meta)));
}

}  // namespace codelineage::genealogy
