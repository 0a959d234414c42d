#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace codelineage::cparse {

// The first nine kinds are the structural categories counted by
// characteristic vectors; the rest support control-flow metrics.
enum class NodeKind : std::uint8_t {
  Id,
  Lit,
  AssignE,
  IncrE,
  ArrayE,
  CondE,
  ExprS,
  Decl,
  ForS,
  IfS,
  WhileS,
  DoS,
  SwitchCase,
  LogicalAnd,
  LogicalOr,
  CallE,
  ReturnS,
  Block,
  Other,
};

inline constexpr std::size_t kVectorKinds = 9;

std::string_view node_kind_name(NodeKind kind) noexcept;

// Flag bits recording which optional children a node carries.
enum NodeFlags : std::uint8_t {
  kNone = 0,
  kForInit = 1 << 0,
  kForCond = 1 << 1,
  kForStep = 1 << 2,
  kHasBody = 1 << 3,
  kHasElse = 1 << 4,
};

struct AstNode {
  NodeKind kind = NodeKind::Other;
  std::uint8_t flags = kNone;
  // Operator or keyword text for expression/statement nodes that need it:
  // "?" marks a ternary cond_e, "switch" marks a switch statement (kind Other),
  // "default" / "label" mark labels.
  std::string op;
  // Half-open range of significant token indices covered by this node.
  std::uint32_t first = 0;
  std::uint32_t last = 0;
  std::vector<AstNode> children;

  bool is_ternary() const { return kind == NodeKind::CondE && op == "?"; }
  bool is_switch() const { return kind == NodeKind::Other && op == "switch"; }
};

std::size_t count_nodes(const AstNode& node);

// Compact structural form, e.g. "block[expr_s[assign_e[id,lit]]]".
std::string to_sexpr(const AstNode& node);

}  // namespace codelineage::cparse
