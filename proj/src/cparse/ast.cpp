#include "codelineage/cparse/ast.hpp"

namespace codelineage::cparse {

std::string_view node_kind_name(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Id: return "id";
    case NodeKind::Lit: return "lit";
    case NodeKind::AssignE: return "assign_e";
    case NodeKind::IncrE: return "incr_e";
    case NodeKind::ArrayE: return "array_e";
    case NodeKind::CondE: return "cond_e";
    case NodeKind::ExprS: return "expr_s";
    case NodeKind::Decl: return "decl";
    case NodeKind::ForS: return "for_s";
    case NodeKind::IfS: return "if_s";
    case NodeKind::WhileS: return "while_s";
    case NodeKind::DoS: return "do_s";
    case NodeKind::SwitchCase: return "switch_case";
    case NodeKind::LogicalAnd: return "logical_and";
    case NodeKind::LogicalOr: return "logical_or";
    case NodeKind::CallE: return "call_e";
    case NodeKind::ReturnS: return "return_s";
    case NodeKind::Block: return "block";
    case NodeKind::Other: return "other";
  }
  return "other";
}

std::size_t count_nodes(const AstNode& node) {
  std::size_t n = 1;
  for (const auto& c : node.children) n += count_nodes(c);
  return n;
}

namespace {
void write_sexpr(const AstNode& node, std::string& out) {
  out += node_kind_name(node.kind);
  if (node.children.empty()) return;
  out += '[';
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (i) out += ',';
    write_sexpr(node.children[i], out);
  }
  out += ']';
}
}  // namespace

std::string to_sexpr(const AstNode& node) {
  std::string out;
  write_sexpr(node, out);
  return out;
}

}  // namespace codelineage::cparse
