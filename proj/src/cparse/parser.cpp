#include <optional>
#include <unordered_set>

#include "codelineage/cparse/functions.hpp"

namespace codelineage::cparse {

namespace {

using Tokens = std::vector<Token>;
using MaybeNode = std::optional<AstNode>;

constexpr int kMaxDepth = 200;

const std::unordered_set<std::string_view>& type_keywords() {
  static const std::unordered_set<std::string_view> kTypes = {
      "void",     "char",     "short",     "int",       "long",     "float",    "double",       "signed",
      "unsigned", "bool",     "_Bool",     "wchar_t",   "char8_t",  "char16_t", "char32_t",     "auto",
      "const",    "volatile", "static",    "extern",    "register", "struct",   "union",        "enum",
      "class",    "typedef",  "inline",    "constexpr", "typename", "mutable",  "thread_local", "_Atomic",
      "restrict", "_Complex", "constinit", "consteval", "_Thread_local"};
  return kTypes;
}

bool is_type_keyword(const Token& t) { return t.kind == TokenKind::Keyword && type_keywords().count(t.text) != 0; }

bool is_assign_op(const Token& t) {
  static constexpr std::string_view kOps[] = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="};
  if (t.kind != TokenKind::Punct) return false;
  for (auto op : kOps)
    if (t.text == op) return true;
  return false;
}

int binary_precedence(const Token& t) {
  if (t.kind != TokenKind::Punct) return -1;
  const auto& s = t.text;
  if (s == "||") return 1;
  if (s == "&&") return 2;
  if (s == "|") return 3;
  if (s == "^") return 4;
  if (s == "&") return 5;
  if (s == "==" || s == "!=") return 6;
  if (s == "<" || s == ">" || s == "<=" || s == ">=" || s == "<=>") return 7;
  if (s == "<<" || s == ">>") return 8;
  if (s == "+" || s == "-") return 9;
  if (s == "*" || s == "/" || s == "%") return 10;
  if (s == ".*" || s == "->*") return 11;
  return -1;
}

bool is_closer(const Token& t) {
  return t.punct(")") || t.punct("]") || t.punct("}") || t.punct(";") || t.punct(":") || t.punct(",");
}

class Parser {
 public:
  Parser(const Tokens& t, std::size_t begin, std::size_t end) : t_(t), pos_(begin), end_(end) {}

  AstNode block() {
    AstNode node = make(NodeKind::Block, pos_);
    ++pos_;  // '{'
    while (!at_end() && !cur().punct("}")) node.children.push_back(statement());
    if (!at_end()) ++pos_;  // '}'
    return finish(std::move(node));
  }

 private:
  const Tokens& t_;
  std::size_t pos_;
  std::size_t end_;
  int depth_ = 0;

  struct DepthGuard {
    explicit DepthGuard(int& d) : d_(d) { ++d_; }
    ~DepthGuard() { --d_; }
    int& d_;
  };

  bool at_end() const { return pos_ >= end_; }
  const Token& cur() const { return t_[pos_]; }
  const Token* peek(std::size_t k) const { return pos_ + k < end_ ? &t_[pos_ + k] : nullptr; }
  bool cur_punct(std::string_view s) const { return !at_end() && cur().punct(s); }
  bool cur_keyword(std::string_view s) const { return !at_end() && cur().keyword(s); }

  AstNode make(NodeKind kind, std::size_t first, std::string op = {}) const {
    AstNode n;
    n.kind = kind;
    n.first = static_cast<std::uint32_t>(first);
    n.last = n.first;
    n.op = std::move(op);
    return n;
  }

  AstNode finish(AstNode node) const {
    node.last = static_cast<std::uint32_t>(pos_);
    return node;
  }

  AstNode leaf(NodeKind kind, std::string op = {}) {
    AstNode n = make(kind, pos_, std::move(op));
    ++pos_;
    return finish(std::move(n));
  }

  // Skips one balanced bracket group starting at pos_ (which must be an opener).
  void skip_group() {
    int depth = 0;
    while (!at_end()) {
      const Token& tok = cur();
      if (tok.punct("(") || tok.punct("[") || tok.punct("{")) ++depth;
      else if (tok.punct(")") || tok.punct("]") || tok.punct("}")) --depth;
      ++pos_;
      if (depth <= 0) return;
    }
  }

  AstNode skipped_group(std::string op) {
    AstNode n = make(NodeKind::Other, pos_, std::move(op));
    skip_group();
    return finish(std::move(n));
  }

  // Recovery: consume up to and including the next ';' at nesting depth 0,
  // stopping before an unbalanced '}'. Returns an `other` leaf for skipped
  // non-';' tokens, or nullopt if nothing but ';' (or nothing) was skipped.
  MaybeNode skip_to_semicolon() {
    const std::size_t start = pos_;
    while (!at_end()) {
      const Token& tok = cur();
      if (tok.punct(";")) break;
      if (tok.punct("}")) break;
      if (tok.punct("(") || tok.punct("[") || tok.punct("{")) {
        skip_group();
        continue;
      }
      ++pos_;
    }
    MaybeNode junk;
    if (pos_ > start) {
      AstNode n = make(NodeKind::Other, start);
      junk = finish(std::move(n));
    }
    if (cur_punct(";")) ++pos_;
    return junk;
  }

  void end_statement(AstNode& node) {
    if (cur_punct(";")) {
      ++pos_;
      return;
    }
    if (auto junk = skip_to_semicolon()) node.children.push_back(std::move(*junk));
  }

  bool expect(std::string_view s) {
    if (cur_punct(s)) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Skip to the matching closer of an already-consumed opener, collecting junk.
  void close_paren(AstNode& owner) {
    if (expect(")")) return;
    const std::size_t start = pos_;
    int depth = 1;
    while (!at_end()) {
      const Token& tok = cur();
      if (tok.punct("(")) ++depth;
      else if (tok.punct(")") && --depth == 0) break;
      else if (tok.punct("{") || tok.punct("}") || tok.punct(";")) break;
      ++pos_;
    }
    if (pos_ > start) {
      AstNode junk = make(NodeKind::Other, start);
      owner.children.push_back(finish(std::move(junk)));
    }
    expect(")");
  }

  // ---------------------------------------------------------------- statements

  AstNode statement() {
    DepthGuard guard(depth_);
    const std::size_t start = pos_;
    if (depth_ > kMaxDepth) {
      AstNode n = make(NodeKind::Other, start);
      if (auto junk = skip_to_semicolon()) n.children.push_back(std::move(*junk));
      if (pos_ == start) ++pos_;
      return finish(std::move(n));
    }
    AstNode node = statement_inner();
    if (pos_ == start) {
      // Guarantee progress on stray tokens.
      ++pos_;
      node = make(NodeKind::Other, start);
      node = finish(std::move(node));
    }
    return node;
  }

  AstNode statement_inner() {
    const Token& tok = cur();
    if (tok.punct("{")) return block();
    if (tok.punct(";")) return leaf(NodeKind::Other, ";");
    if (tok.kind == TokenKind::Keyword) {
      const auto& k = tok.text;
      if (k == "if") return if_statement();
      if (k == "while") return while_statement();
      if (k == "do") return do_statement();
      if (k == "for") return for_statement();
      if (k == "switch") return switch_statement();
      if (k == "return" || k == "co_return") return return_statement();
      if (k == "case") return case_label();
      if (k == "default" && peek(1) && peek(1)->punct(":")) {
        AstNode n = make(NodeKind::Other, pos_, "default");
        pos_ += 2;
        return finish(std::move(n));
      }
      if (k == "break" || k == "continue" || k == "goto") {
        AstNode n = make(NodeKind::Other, pos_, k);
        skip_to_semicolon();
        return finish(std::move(n));
      }
      if (k == "try") return try_statement();
      if (k == "else") return leaf(NodeKind::Other, "else");
      if (k == "asm") return asm_statement();
    }
    if (tok.kind == TokenKind::Identifier) {
      if ((tok.text == "__asm" || tok.text == "_asm" || tok.text == "__asm__")) return asm_statement();
      if (peek(1) && peek(1)->punct(":")) {
        AstNode n = make(NodeKind::Other, pos_, "label");
        pos_ += 2;
        return finish(std::move(n));
      }
    }
    if (is_declaration_start()) return declaration(true);
    AstNode node = make(NodeKind::ExprS, pos_);
    if (auto e = expression()) node.children.push_back(std::move(*e));
    end_statement(node);
    return finish(std::move(node));
  }

  AstNode asm_statement() {
    AstNode n = make(NodeKind::Other, pos_, "asm");
    ++pos_;
    while (cur_keyword("volatile") || (!at_end() && cur().text == "__volatile__")) ++pos_;
    if (cur_punct("{") || cur_punct("(")) {
      skip_group();
      expect(";");
    } else {
      // MSVC line form: `__asm mov eax, 1` runs to end of line.
      const int line = pos_ > 0 ? t_[pos_ - 1].line : 0;
      while (!at_end() && cur().line == line && !cur().punct("}")) {
        if (cur().punct(";")) {
          ++pos_;
          break;
        }
        ++pos_;
      }
    }
    return finish(std::move(n));
  }

  // Appends the parenthesized condition (expression or declaration) to owner.
  void parenthesized_condition(AstNode& owner) {
    if (!expect("(")) return;
    if (is_declaration_start()) {
      owner.children.push_back(declaration(false));
    } else if (auto e = expression()) {
      owner.children.push_back(std::move(*e));
    }
    close_paren(owner);
  }

  AstNode if_statement() {
    AstNode node = make(NodeKind::IfS, pos_);
    ++pos_;
    if (cur_keyword("constexpr")) ++pos_;
    parenthesized_condition(node);
    if (!at_end() && !cur().punct("}")) {
      node.children.push_back(statement());
      node.flags |= kHasBody;
    }
    if (cur_keyword("else")) {
      ++pos_;
      if (!at_end() && !cur().punct("}")) {
        node.children.push_back(statement());
        node.flags |= kHasElse;
      }
    }
    return finish(std::move(node));
  }

  AstNode while_statement() {
    AstNode node = make(NodeKind::WhileS, pos_);
    ++pos_;
    parenthesized_condition(node);
    if (!at_end() && !cur().punct("}")) {
      node.children.push_back(statement());
      node.flags |= kHasBody;
    }
    return finish(std::move(node));
  }

  AstNode do_statement() {
    AstNode node = make(NodeKind::DoS, pos_);
    ++pos_;
    if (!at_end() && !cur().punct("}")) {
      node.children.push_back(statement());
      node.flags |= kHasBody;
    }
    if (cur_keyword("while")) {
      ++pos_;
      parenthesized_condition(node);
    }
    end_statement(node);
    return finish(std::move(node));
  }

  AstNode for_statement() {
    AstNode node = make(NodeKind::ForS, pos_);
    ++pos_;
    if (!expect("(")) return finish(std::move(node));
    // Range-based for: `for (decl : range)`.
    if (range_for_colon()) {
      AstNode header = make(NodeKind::Other, pos_, "range");
      while (!at_end() && !cur().punct(")")) {
        if (cur().punct("(") || cur().punct("[") || cur().punct("{")) skip_group();
        else ++pos_;
      }
      node.children.push_back(finish(std::move(header)));
      expect(")");
    } else {
      if (!cur_punct(";")) {
        if (is_declaration_start()) {
          node.children.push_back(declaration(false));
        } else if (auto e = expression()) {
          node.children.push_back(std::move(*e));
        }
        node.flags |= kForInit;
      }
      expect(";");
      if (!cur_punct(";")) {
        if (auto e = expression()) {
          node.children.push_back(std::move(*e));
          node.flags |= kForCond;
        }
      }
      expect(";");
      if (!cur_punct(")")) {
        if (auto e = expression()) {
          node.children.push_back(std::move(*e));
          node.flags |= kForStep;
        }
      }
      close_paren(node);
    }
    if (!at_end() && !cur().punct("}")) {
      node.children.push_back(statement());
      node.flags |= kHasBody;
    }
    return finish(std::move(node));
  }

  bool range_for_colon() const {
    int depth = 0;
    for (std::size_t i = pos_; i < end_; ++i) {
      const Token& tok = t_[i];
      if (tok.punct("(") || tok.punct("[") || tok.punct("{")) ++depth;
      else if (tok.punct(")") || tok.punct("]") || tok.punct("}")) {
        if (depth == 0) return false;
        --depth;
      } else if (depth == 0 && tok.punct(";")) {
        return false;
      } else if (depth == 0 && tok.punct(":")) {
        return true;
      }
    }
    return false;
  }

  AstNode switch_statement() {
    AstNode node = make(NodeKind::Other, pos_, "switch");
    ++pos_;
    parenthesized_condition(node);
    if (!at_end() && !cur().punct("}")) {
      node.children.push_back(statement());
      node.flags |= kHasBody;
    }
    return finish(std::move(node));
  }

  AstNode case_label() {
    AstNode node = make(NodeKind::SwitchCase, pos_);
    ++pos_;
    if (auto e = conditional()) node.children.push_back(std::move(*e));
    // GNU case ranges and anything else up to the colon.
    const std::size_t junk_start = pos_;
    while (!at_end() && !cur().punct(":") && !cur().punct(";") && !cur().punct("}") && !cur().punct("{")) ++pos_;
    if (pos_ > junk_start) {
      AstNode junk = make(NodeKind::Other, junk_start);
      node.children.push_back(finish(std::move(junk)));
    }
    expect(":");
    return finish(std::move(node));
  }

  AstNode return_statement() {
    AstNode node = make(NodeKind::ReturnS, pos_);
    ++pos_;
    if (!cur_punct(";")) {
      if (auto e = expression()) node.children.push_back(std::move(*e));
    }
    end_statement(node);
    return finish(std::move(node));
  }

  AstNode try_statement() {
    AstNode node = make(NodeKind::Other, pos_, "try");
    ++pos_;
    if (cur_punct("{")) node.children.push_back(block());
    while (cur_keyword("catch")) {
      ++pos_;
      if (cur_punct("(")) skip_group();
      if (cur_punct("{")) node.children.push_back(block());
    }
    return finish(std::move(node));
  }

  // -------------------------------------------------------------- declarations

  // Position just after a type-name starting at i (Ident (:: Ident)* [<...>]),
  // or i if there is none.
  std::size_t scan_type_name(std::size_t i) const {
    if (i < end_ && t_[i].punct("::")) ++i;
    if (i >= end_ || t_[i].kind != TokenKind::Identifier) return i;
    ++i;
    for (;;) {
      if (i + 1 < end_ && t_[i].punct("::") && t_[i + 1].kind == TokenKind::Identifier) {
        i += 2;
        continue;
      }
      if (i < end_ && t_[i].punct("<")) {
        int depth = 0;
        std::size_t k = i;
        for (; k < end_; ++k) {
          if (t_[k].punct("<")) ++depth;
          else if (t_[k].punct(">") && --depth == 0) break;
          else if (t_[k].punct(">>") && (depth -= 2) <= 0) break;
          else if (t_[k].punct(";") || t_[k].punct("{") || t_[k].punct("}") || t_[k].punct("&&") ||
                   t_[k].punct("||"))
            return i;
        }
        if (k >= end_) return i;
        i = k + 1;
        continue;
      }
      return i;
    }
  }

  bool is_declaration_start() const {
    if (at_end()) return false;
    const Token& tok = cur();
    if (is_type_keyword(tok)) return true;
    if (tok.kind != TokenKind::Identifier && !tok.punct("::")) return false;
    std::size_t i = scan_type_name(pos_);
    if (i == pos_ || i >= end_) return false;
    if (t_[i].kind == TokenKind::Identifier) return true;
    if (t_[i].keyword("const") || t_[i].keyword("volatile")) return true;
    if (t_[i].punct("*") || t_[i].punct("&")) {
      while (i < end_ && (t_[i].punct("*") || t_[i].punct("&") || t_[i].keyword("const"))) ++i;
      if (i + 1 >= end_ || t_[i].kind != TokenKind::Identifier) return false;
      const Token& after = t_[i + 1];
      return after.punct("=") || after.punct(";") || after.punct(",") || after.punct("[") || after.punct(")");
    }
    return false;
  }

  AstNode declaration(bool with_semicolon) {
    AstNode node = make(NodeKind::Decl, pos_);
    // Specifiers and the type.
    bool have_type_name = false;
    while (!at_end()) {
      const Token& tok = cur();
      if (tok.keyword("struct") || tok.keyword("union") || tok.keyword("enum") || tok.keyword("class")) {
        ++pos_;
        if (!at_end() && cur().kind == TokenKind::Identifier) node.children.push_back(leaf(NodeKind::Id));
        if (cur_punct("{")) node.children.push_back(skipped_group("aggregate"));
        have_type_name = true;
        continue;
      }
      if (is_type_keyword(tok)) {
        if (tok.text != "const" && tok.text != "volatile" && tok.text != "static" && tok.text != "extern" &&
            tok.text != "register" && tok.text != "inline" && tok.text != "typedef" && tok.text != "constexpr" &&
            tok.text != "mutable" && tok.text != "thread_local")
          have_type_name = true;
        ++pos_;
        continue;
      }
      if (!have_type_name && (tok.kind == TokenKind::Identifier || tok.punct("::"))) {
        const std::size_t end = scan_type_name(pos_);
        if (end > pos_) {
          AstNode type = make(NodeKind::Id, pos_);
          pos_ = end;
          node.children.push_back(finish(std::move(type)));
          have_type_name = true;
          // Further identifiers directly followed by another identifier are
          // calling-convention or annotation macros (WINAPI, CALLBACK, ...).
          while (peek(1) && cur().kind == TokenKind::Identifier && peek(1)->kind == TokenKind::Identifier)
            node.children.push_back(leaf(NodeKind::Id));
          continue;
        }
      }
      break;
    }
    // Declarators.
    while (!at_end() && !cur().punct(";") && !cur().punct("}")) {
      if (!with_semicolon && (cur().punct(")") || cur().punct(":"))) break;
      const std::size_t before = pos_;
      declarator(node);
      if (cur_punct(",")) {
        ++pos_;
        continue;
      }
      if (pos_ == before) break;
      break;
    }
    if (with_semicolon) end_statement(node);
    return finish(std::move(node));
  }

  void declarator(AstNode& decl) {
    while (!at_end() && (cur().punct("*") || cur().punct("&") || cur().punct("&&") || cur().keyword("const") ||
                         cur().keyword("volatile") || cur().keyword("restrict")))
      ++pos_;
    if (cur_punct("(")) {
      // Function pointer or parenthesized declarator.
      decl.children.push_back(skipped_group("declarator"));
      if (cur_punct("(")) skip_group();
    } else if (!at_end() && cur().kind == TokenKind::Identifier) {
      AstNode id = make(NodeKind::Id, pos_);
      ++pos_;
      while (peek(1) && cur().punct("::") && peek(1)->kind == TokenKind::Identifier) pos_ += 2;
      decl.children.push_back(finish(std::move(id)));
    }
    for (;;) {
      if (cur_punct("[")) {
        ++pos_;
        if (!cur_punct("]")) {
          if (auto e = expression()) decl.children.push_back(std::move(*e));
        }
        if (!expect("]")) {
          while (!at_end() && !cur().punct("]") && !cur().punct(";") && !cur().punct("}")) ++pos_;
          expect("]");
        }
        continue;
      }
      if (cur_punct("(")) {
        // Constructor arguments or a local prototype.
        ++pos_;
        while (!at_end() && !cur().punct(")")) {
          const std::size_t before = pos_;
          if (auto e = assignment()) decl.children.push_back(std::move(*e));
          if (!expect(",") && pos_ == before) break;
        }
        close_paren(decl);
        continue;
      }
      break;
    }
    if (cur_punct(":") && peek(1) && peek(1)->kind == TokenKind::NumberLiteral) {
      pos_ += 2;  // bit-field width
    }
    while (!at_end() && (cur().keyword("const") || cur().keyword("noexcept") || cur().keyword("override"))) ++pos_;
    if (cur_punct("=")) {
      ++pos_;
      if (cur_punct("{")) decl.children.push_back(brace_list());
      else if (auto e = assignment()) decl.children.push_back(std::move(*e));
    } else if (cur_punct("{")) {
      decl.children.push_back(brace_list());
    }
  }

  AstNode brace_list() {
    DepthGuard guard(depth_);
    if (depth_ > kMaxDepth) return skipped_group("{}");
    AstNode node = make(NodeKind::Other, pos_, "{}");
    ++pos_;
    while (!at_end() && !cur().punct("}")) {
      const std::size_t before = pos_;
      if (cur_punct("{")) {
        node.children.push_back(brace_list());
      } else if (cur_punct(".") || cur_punct("[")) {
        // Designated initializer: .field = value / [idx] = value
        while (!at_end() && !cur().punct("=") && !cur().punct(",") && !cur().punct("}")) {
          if (cur().punct("[")) skip_group();
          else ++pos_;
        }
        expect("=");
        if (cur_punct("{")) node.children.push_back(brace_list());
        else if (auto e = assignment()) node.children.push_back(std::move(*e));
      } else if (auto e = assignment()) {
        node.children.push_back(std::move(*e));
      }
      if (expect(",")) continue;
      if (pos_ == before || cur_punct(";")) {
        if (cur_punct(";")) break;
        ++pos_;
      }
    }
    expect("}");
    return finish(std::move(node));
  }

  // --------------------------------------------------------------- expressions

  MaybeNode expression() {
    const std::size_t start = pos_;
    MaybeNode first = assignment();
    if (!first || !cur_punct(",")) return first;
    AstNode comma = make(NodeKind::Other, start, ",");
    comma.children.push_back(std::move(*first));
    while (cur_punct(",")) {
      ++pos_;
      if (auto e = assignment()) comma.children.push_back(std::move(*e));
      else break;
    }
    return finish(std::move(comma));
  }

  MaybeNode assignment() {
    DepthGuard guard(depth_);
    if (depth_ > kMaxDepth) return overflow_leaf();
    const std::size_t start = pos_;
    MaybeNode lhs = conditional();
    if (!lhs || at_end() || !is_assign_op(cur())) return lhs;
    AstNode node = make(NodeKind::AssignE, start, cur().text);
    ++pos_;
    node.children.push_back(std::move(*lhs));
    if (cur_punct("{")) node.children.push_back(brace_list());
    else if (auto rhs = assignment()) node.children.push_back(std::move(*rhs));
    return finish(std::move(node));
  }

  MaybeNode conditional() {
    const std::size_t start = pos_;
    MaybeNode cond = binary(1);
    if (!cond || !cur_punct("?")) return cond;
    AstNode node = make(NodeKind::CondE, start, "?");
    ++pos_;
    node.children.push_back(std::move(*cond));
    if (auto a = expression()) node.children.push_back(std::move(*a));
    if (expect(":")) {
      if (auto b = assignment()) node.children.push_back(std::move(*b));
    }
    return finish(std::move(node));
  }

  static NodeKind binary_kind(const std::string& op) {
    if (op == "||") return NodeKind::LogicalOr;
    if (op == "&&") return NodeKind::LogicalAnd;
    if (op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=" || op == "<=>")
      return NodeKind::CondE;
    return NodeKind::Other;
  }

  MaybeNode binary(int min_prec) {
    const std::size_t start = pos_;
    MaybeNode lhs = unary();
    if (!lhs) return lhs;
    for (;;) {
      if (at_end()) return lhs;
      const int prec = binary_precedence(cur());
      if (prec < min_prec) return lhs;
      AstNode node = make(binary_kind(cur().text), start, cur().text);
      ++pos_;
      node.children.push_back(std::move(*lhs));
      if (auto rhs = binary(prec + 1)) node.children.push_back(std::move(*rhs));
      lhs = finish(std::move(node));
    }
  }

  bool looks_like_cast() const {
    // pos_ at '('
    std::size_t i = pos_ + 1;
    if (i >= end_) return false;
    bool type_kw = false;
    if (is_type_keyword(t_[i])) {
      type_kw = true;
      while (i < end_ && (is_type_keyword(t_[i]) || t_[i].kind == TokenKind::Identifier)) ++i;
    } else {
      const std::size_t j = scan_type_name(i);
      if (j == i) return false;
      i = j;
    }
    bool stars = false;
    while (i < end_ && (t_[i].punct("*") || t_[i].punct("&") || t_[i].keyword("const"))) {
      stars = true;
      ++i;
    }
    if (i >= end_ || !t_[i].punct(")")) return false;
    if (type_kw || stars) return i + 1 < end_ && !is_closer(t_[i + 1]);
    // `(name) x`: only a cast when followed by something that starts an operand
    // and cannot continue an expression.
    if (i + 1 >= end_) return false;
    const Token& next = t_[i + 1];
    return next.kind == TokenKind::Identifier || next.kind == TokenKind::NumberLiteral ||
           next.kind == TokenKind::StringLiteral || next.kind == TokenKind::CharLiteral || next.punct("(") ||
           next.punct("!") || next.punct("~") || next.keyword("sizeof");
  }

  std::size_t matching_paren(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < end_; ++i) {
      if (t_[i].punct("(")) ++depth;
      else if (t_[i].punct(")") && --depth == 0) return i;
    }
    return end_;
  }

  MaybeNode unary() {
    DepthGuard guard(depth_);
    if (depth_ > kMaxDepth) return overflow_leaf();
    if (at_end()) return std::nullopt;
    const std::size_t start = pos_;
    const Token& tok = cur();
    if (tok.punct("++") || tok.punct("--")) {
      AstNode node = make(NodeKind::IncrE, start, tok.text);
      ++pos_;
      if (auto e = unary()) node.children.push_back(std::move(*e));
      return finish(std::move(node));
    }
    if (tok.punct("-") || tok.punct("+") || tok.punct("!") || tok.punct("~") || tok.punct("*") || tok.punct("&") ||
        tok.punct("&&") || tok.keyword("co_await")) {
      AstNode node = make(NodeKind::Other, start, tok.text);
      ++pos_;
      if (auto e = unary()) node.children.push_back(std::move(*e));
      return finish(std::move(node));
    }
    if (tok.keyword("sizeof") || tok.keyword("alignof") || tok.keyword("_Alignof")) {
      AstNode node = make(NodeKind::Other, start, tok.text);
      ++pos_;
      if (cur_punct("(") && (looks_like_type_in_parens())) {
        skip_group();
      } else if (auto e = unary()) {
        node.children.push_back(std::move(*e));
      }
      return finish(std::move(node));
    }
    if (tok.keyword("new") || tok.keyword("delete") || tok.keyword("throw")) {
      AstNode node = make(NodeKind::Other, start, tok.text);
      ++pos_;
      if (cur_punct("[")) skip_group();
      if (tok.text != "delete") {
        // Allocated type and constructor arguments.
        const std::size_t type_end = scan_type_name(pos_);
        if (type_end > pos_) pos_ = type_end;
        else while (!at_end() && is_type_keyword(cur())) ++pos_;
        while (cur_punct("*")) ++pos_;
        if (cur_punct("[") || cur_punct("(") || cur_punct("{")) skip_group();
        if (tok.text == "throw" && !at_end() && !is_closer(cur())) {
          if (auto e = assignment()) node.children.push_back(std::move(*e));
        }
      } else if (auto e = unary()) {
        node.children.push_back(std::move(*e));
      }
      return finish(std::move(node));
    }
    if (tok.punct("(") && looks_like_cast()) {
      AstNode node = make(NodeKind::Other, start, "cast");
      pos_ = matching_paren(pos_) + 1;
      if (cur_punct("{")) node.children.push_back(brace_list());  // compound literal
      else if (auto e = unary()) node.children.push_back(std::move(*e));
      return finish(std::move(node));
    }
    return postfix();
  }

  bool looks_like_type_in_parens() const {
    std::size_t i = pos_ + 1;
    if (i >= end_) return false;
    if (is_type_keyword(t_[i])) return true;
    const std::size_t j = scan_type_name(i);
    if (j == i) return false;
    std::size_t k = j;
    while (k < end_ && (t_[k].punct("*") || t_[k].punct("&"))) ++k;
    return k < end_ && t_[k].punct(")");
  }

  MaybeNode postfix() {
    const std::size_t start = pos_;
    MaybeNode base = primary();
    if (!base) return base;
    for (;;) {
      if (at_end()) return base;
      const Token& tok = cur();
      if (tok.punct("[")) {
        AstNode node = make(NodeKind::ArrayE, start);
        ++pos_;
        node.children.push_back(std::move(*base));
        if (auto idx = expression()) node.children.push_back(std::move(*idx));
        if (!expect("]")) {
          while (!at_end() && !cur().punct("]") && !cur().punct(";") && !cur().punct("}")) ++pos_;
          expect("]");
        }
        base = finish(std::move(node));
      } else if (tok.punct("(")) {
        AstNode node = make(NodeKind::CallE, start);
        ++pos_;
        node.children.push_back(std::move(*base));
        while (!at_end() && !cur().punct(")")) {
          const std::size_t before = pos_;
          if (cur_punct("{")) node.children.push_back(brace_list());
          else if (auto arg = assignment()) node.children.push_back(std::move(*arg));
          if (!expect(",") && pos_ == before) break;
        }
        close_paren(node);
        base = finish(std::move(node));
      } else if (tok.punct(".") || tok.punct("->")) {
        AstNode node = make(NodeKind::Other, start, tok.text);
        ++pos_;
        node.children.push_back(std::move(*base));
        if (cur_keyword("template")) ++pos_;
        if (!at_end() && cur().kind == TokenKind::Identifier) node.children.push_back(leaf(NodeKind::Id));
        else if (cur_punct("~") && peek(1) && peek(1)->kind == TokenKind::Identifier) pos_ += 2;
        base = finish(std::move(node));
      } else if (tok.punct("++") || tok.punct("--")) {
        AstNode node = make(NodeKind::IncrE, start, tok.text);
        ++pos_;
        node.children.push_back(std::move(*base));
        base = finish(std::move(node));
      } else {
        return base;
      }
    }
  }

  MaybeNode primary() {
    if (at_end()) return std::nullopt;
    const Token& tok = cur();
    switch (tok.kind) {
      case TokenKind::Identifier: {
        AstNode id = make(NodeKind::Id, pos_);
        ++pos_;
        while (peek(1) && cur().punct("::") && peek(1)->kind == TokenKind::Identifier) pos_ += 2;
        return finish(std::move(id));
      }
      case TokenKind::NumberLiteral:
      case TokenKind::CharLiteral:
        return leaf(NodeKind::Lit);
      case TokenKind::StringLiteral: {
        AstNode lit = make(NodeKind::Lit, pos_);
        // Adjacent literals concatenate; macro names between them (TEXT, PRIu64) are absorbed.
        while (!at_end() && cur().kind == TokenKind::StringLiteral) ++pos_;
        return finish(std::move(lit));
      }
      case TokenKind::Keyword:
        if (tok.text == "true" || tok.text == "false" || tok.text == "nullptr") return leaf(NodeKind::Lit);
        if (tok.text == "this") return leaf(NodeKind::Other, "this");
        if ((is_type_keyword(tok) || tok.text == "decltype") && peek(1) && peek(1)->punct("(")) {
          // Functional cast `int(x)` / decltype(x).
          AstNode node = make(NodeKind::Other, pos_, tok.text);
          ++pos_;
          ++pos_;
          if (auto e = expression()) node.children.push_back(std::move(*e));
          close_paren(node);
          return finish(std::move(node));
        }
        if (tok.text == "static_cast" || tok.text == "dynamic_cast" || tok.text == "reinterpret_cast" ||
            tok.text == "const_cast") {
          AstNode node = make(NodeKind::Other, pos_, "cast");
          ++pos_;
          if (cur_punct("<")) {
            int depth = 0;
            while (!at_end()) {
              if (cur().punct("<")) ++depth;
              else if (cur().punct(">") && --depth == 0) { ++pos_; break; }
              else if (cur().punct(">>") && (depth -= 2) <= 0) { ++pos_; break; }
              else if (cur().punct(";")) break;
              ++pos_;
            }
          }
          if (expect("(")) {
            if (auto e = expression()) node.children.push_back(std::move(*e));
            close_paren(node);
          }
          return finish(std::move(node));
        }
        return leaf(NodeKind::Other, tok.text);
      case TokenKind::Punct:
        if (tok.punct("(")) {
          if (peek(1) && peek(1)->punct("{")) return skipped_group("stmt-expr");
          const std::size_t open = pos_;
          ++pos_;
          MaybeNode inner = expression();
          if (!inner) {
            AstNode empty = make(NodeKind::Other, open, "()");
            close_paren(empty);
            return finish(std::move(empty));
          }
          if (!expect(")")) {
            AstNode wrap = make(NodeKind::Other, open, "()");
            wrap.children.push_back(std::move(*inner));
            close_paren(wrap);
            return finish(std::move(wrap));
          }
          return inner;
        }
        if (tok.punct("{")) return brace_list();
        if (tok.punct("[")) {
          // Lambda: capture list, optional parameters, body.
          AstNode node = make(NodeKind::Other, pos_, "lambda");
          skip_group();
          if (cur_punct("(")) skip_group();
          while (!at_end() && !cur().punct("{") && !is_closer(cur())) ++pos_;
          if (cur_punct("{")) skip_group();
          return finish(std::move(node));
        }
        if (tok.punct("::")) {
          AstNode id = make(NodeKind::Id, pos_);
          if (peek(1) && peek(1)->kind == TokenKind::Identifier) {
            pos_ += 1;
            return primary_after_scope(std::move(id));
          }
          ++pos_;
          return finish(std::move(id));
        }
        if (is_closer(tok) || tok.punct("?") || is_assign_op(tok) || binary_precedence(tok) > 0) return std::nullopt;
        return leaf(NodeKind::Other, tok.text);
      default:
        return leaf(NodeKind::Other);
    }
  }

  MaybeNode primary_after_scope(AstNode id) {
    ++pos_;
    while (peek(1) && cur().punct("::") && peek(1)->kind == TokenKind::Identifier) pos_ += 2;
    return finish(std::move(id));
  }

  MaybeNode overflow_leaf() {
    if (at_end()) return std::nullopt;
    AstNode n = make(NodeKind::Other, pos_, "deep");
    int depth = 0;
    while (!at_end()) {
      const Token& tok = cur();
      if (tok.punct("(") || tok.punct("[") || tok.punct("{")) ++depth;
      else if (tok.punct(")") || tok.punct("]") || tok.punct("}")) {
        if (depth == 0) break;
        --depth;
      } else if (depth == 0 && (tok.punct(";") || tok.punct(","))) {
        break;
      }
      ++pos_;
    }
    if (pos_ == n.first) return std::nullopt;
    return finish(std::move(n));
  }
};

}  // namespace

AstNode parse_body(const std::vector<Token>& tokens, std::size_t open_brace) {
  if (open_brace >= tokens.size() || !tokens[open_brace].punct("{")) {
    AstNode empty;
    empty.kind = NodeKind::Block;
    return empty;
  }
  int depth = 0;
  std::size_t end = tokens.size();
  for (std::size_t i = open_brace; i < tokens.size(); ++i) {
    if (tokens[i].punct("{")) ++depth;
    else if (tokens[i].punct("}") && --depth == 0) {
      end = i + 1;
      break;
    }
  }
  return Parser(tokens, open_brace, end).block();
}

}  // namespace codelineage::cparse
