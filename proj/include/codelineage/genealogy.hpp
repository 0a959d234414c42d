#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "codelineage/clones.hpp"
#include "codelineage/corpus.hpp"

namespace codelineage::genealogy {

struct FunctionPair {
  std::string src_fn;
  std::string src_file;
  int src_line = 0;
  std::string dst_fn;
  std::string dst_file;
  int dst_line = 0;
  double similarity = 0.0;
  std::uint64_t weight = 0;
  std::vector<std::string> src_tags;
  std::vector<std::string> dst_tags;
  friend bool operator==(const FunctionPair&, const FunctionPair&) = default;
};

struct SpecimenEdge {
  std::string src_id;
  std::string dst_id;
  std::uint64_t weight = 0;  // exact sum of the pair weights
  bool ambiguous_direction = false;
  std::vector<FunctionPair> function_pairs;
  friend bool operator==(const SpecimenEdge&, const SpecimenEdge&) = default;
};

struct Node {
  std::string id;
  std::string name;
  Date date;
  LabelSet labels;
  friend bool operator==(const Node&, const Node&) = default;
};

struct Genealogy {
  std::vector<Node> nodes;          // sorted by id
  std::vector<SpecimenEdge> edges;  // sorted by (src_id, dst_id)

  const Node* find(std::string_view id) const;
  std::uint64_t total_weight() const;
  friend bool operator==(const Genealogy&, const Genealogy&) = default;
};

struct Orientation {
  bool swapped = false;    // true when b is the source
  bool ambiguous = false;  // same date, resolved by id
};

// Earlier date is the source; on equal dates the lexicographically smaller
// id is, and the edge is flagged.
Orientation orient(const Date& date_a, std::string_view id_a, const Date& date_b, std::string_view id_b);

// Orients every edge by its specimens' dates and re-sorts. Throws
// Error(UnknownSpecimen) for an edge endpoint outside the corpus.
void orient_edges(std::vector<clones::ReuseEdge>& edges, const Corpus& corpus);

// Tags per function, indexed like the clone inputs; may be null.
using FunctionTags = std::vector<std::vector<std::string>>;

// Groups oriented reuse edges by specimen pair. Output sorted by (src, dst).
std::vector<SpecimenEdge> aggregate_to_specimens(const std::vector<clones::ReuseEdge>& edges,
                                                 const FunctionTags* tags = nullptr);

Genealogy build_genealogy(const Corpus& corpus, std::vector<SpecimenEdge> edges);

// Kahn's algorithm over the edges; nullopt when a cycle exists.
std::optional<std::vector<std::string>> topological_order(const Genealogy& g);

inline constexpr std::string_view kUnresolved = "unresolved";

struct CategoryView {
  LabelSlot slot = LabelSlot::Class;
  std::vector<std::string> categories;                        // sorted
  std::vector<int> years;                                     // sorted, every node year
  std::vector<std::map<int, std::uint64_t>> specimens_per_year;  // per category
  std::vector<std::uint64_t> specimen_totals;                 // per category
  std::vector<std::vector<std::uint64_t>> matrix;             // [src category][dst category]
};

// Values of `slot` for a node; missing or empty slots give {"unresolved"}.
std::vector<std::string> category_values(const Node& node, LabelSlot slot);

CategoryView build_category_view(const Genealogy& g, LabelSlot slot);
// Throws Error(UnknownLabelSlot) for an unrecognized slot name.
CategoryView build_category_view(const Genealogy& g, std::string_view slot_name);

struct LineageEntry {
  std::string id;
  int depth = 0;                              // fewest hops from the focus
  std::uint64_t path_weight = 0;              // best bottleneck within max_depth hops
  std::optional<std::uint64_t> direct_weight;  // depth-1 entries only
  friend bool operator==(const LineageEntry&, const LineageEntry&) = default;
};

struct FunctionDetail {
  std::string src_id;
  std::string dst_id;
  FunctionPair pair;
};

struct LineageView {
  std::string focus_id;
  int max_depth = 0;
  // Depth ascending; direct parents/children by direct weight, deeper
  // entries by path weight; ties by id.
  std::vector<LineageEntry> ancestors;
  std::vector<LineageEntry> descendants;
  std::vector<FunctionDetail> function_detail;
};

// Throws Error(UnknownSpecimen) or Error(Config) for a negative depth.
LineageView lineage_of(const Genealogy& g, std::string_view focus_id, int max_depth);

// ---- export ---------------------------------------------------------------

inline constexpr int kSchemaVersion = 1;

struct RunMeta {
  std::string tool_version;
  std::string config_digest;
};

nlohmann::ordered_json meta_json(const RunMeta& meta);
nlohmann::ordered_json genealogy_json(const Genealogy& g, const RunMeta& meta);
nlohmann::ordered_json category_json(const CategoryView& view, const RunMeta& meta);
nlohmann::ordered_json lineage_json(const LineageView& view, const Genealogy& g);

// Inverse of genealogy_json. Throws Error(ManifestParse) on schema mismatch.
Genealogy import_genealogy_json(const nlohmann::json& doc);

// Two-space indented JSON with a trailing newline.
std::string to_text(const nlohmann::ordered_json& doc);

// Writes genealogy.json and category_<slot>.json for each view.
void export_view_json(const Genealogy& g, const std::vector<CategoryView>& views, const RunMeta& meta,
                      const std::filesystem::path& out_dir);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace codelineage::genealogy
