#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "codelineage/cparse/ast.hpp"
#include "codelineage/cparse/functions.hpp"

namespace codelineage::clones {

// Node-kind frequencies in the order id, lit, assign_e, incr_e, array_e,
// cond_e, expr_s, decl, for_s.
struct CharacteristicVector {
  std::array<std::uint32_t, cparse::kVectorKinds> counts{};
  std::uint64_t node_total = 0;

  double norm() const;
  bool is_zero() const;
  CharacteristicVector& operator+=(const CharacteristicVector& other);
  friend bool operator==(const CharacteristicVector&, const CharacteristicVector&) = default;
};

CharacteristicVector one_hot(cparse::NodeKind kind);
CharacteristicVector characteristic_vector(const cparse::AstNode& ast);

// Calls visit(node, vector) for every node, children before parents.
void visit_subtree_vectors(const cparse::AstNode& ast,
                           const std::function<void(const cparse::AstNode&, const CharacteristicVector&)>& visit);

std::uint64_t squared_distance(const CharacteristicVector& a, const CharacteristicVector& b);

inline constexpr double kSimilarityEpsilon = 1e-12;

// 1 - |a-b| / (|a| + |b| + eps), clamped to [0, 1].
double similarity(const CharacteristicVector& a, const CharacteristicVector& b);

struct CloneConfig {
  double threshold = 0.95;
  std::size_t min_tokens = 30;
  double max_specimen_fraction = 0.5;
  // Specimen count used for the ubiquity cut; 0 means the number of distinct
  // specimens among the inputs.
  std::size_t corpus_specimens = 0;
  unsigned threads = 1;
  std::size_t projections = 4;
  double bucket_width = 4.0;
  std::uint64_t seed = 0x5eedc0de;
};

// Throws Error(Config) when a field is outside its documented range.
void validate(const CloneConfig& cfg);

struct CloneInput {
  std::string specimen_id;
  std::string file;
  std::string name;
  int start_line = 0;
  std::size_t token_count = 0;
  CharacteristicVector vector;
};

CloneInput make_clone_input(const cparse::FunctionUnit& unit);

// A cross-specimen clone pair. `src`/`dst` index the input list; find_clones
// puts the lexicographically smaller specimen id first. Temporal orientation
// happens in the genealogy stage.
struct ReuseEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::string src_specimen;
  std::string dst_specimen;
  std::string src_name;
  std::string dst_name;
  std::string src_file;
  std::string dst_file;
  int src_line = 0;
  int dst_line = 0;
  double similarity = 0.0;
  std::uint64_t weight = 0;  // node_total of the smaller function
  bool ambiguous_direction = false;
};

bool edge_order(const ReuseEdge& a, const ReuseEdge& b);
void sort_edges(std::vector<ReuseEdge>& edges);

// Functions below min_tokens and zero vectors never match. A function is
// ubiquitous when the number of specimens holding it or a near copy exceeds
// max_specimen_fraction of the corpus and is above two; ubiquitous functions
// are dropped. The result equals all-pairs verification.
std::vector<ReuseEdge> find_clones(const std::vector<CloneInput>& functions, const CloneConfig& cfg);

// Shared by find_clones and callers that want the pre-filter eligibility.
bool eligible(const CloneInput& fn, const CloneConfig& cfg);

}  // namespace codelineage::clones
