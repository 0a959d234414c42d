#pragma once

#include <string>
#include <vector>

#include "codelineage/corpus.hpp"
#include "codelineage/cparse/ast.hpp"
#include "codelineage/cparse/lexer.hpp"

namespace codelineage::cparse {

struct FunctionUnit {
  std::string specimen_id;
  std::string file;  // generic relative path
  std::string name;
  int start_line = 0;
  int end_line = 0;
  // Significant tokens from the start of the definition through the closing brace.
  std::vector<Token> tokens;
  AstNode body_ast;
  // Comment blocks directly above and inside the span; consecutive line
  // comments are merged.
  std::vector<std::string> comments;
};

struct ExtractResult {
  std::vector<FunctionUnit> units;
  std::vector<Diagnostic> diagnostics;
};

// One unit per `name ( ... ) { ... }` definition found at file scope or
// inside namespace / extern "C" blocks. Prototypes, class bodies and
// initializers are skipped. An unmatched brace ends extraction for the file.
// Each unit carries its body AST.
ExtractResult extract_functions(const SourceFile& file, std::string_view specimen_id);
ExtractResult extract_functions(const std::vector<Token>& all_tokens, std::string_view file_name,
                                std::string_view specimen_id);

// Total: never throws on any token sequence; unknown regions become `other`.
AstNode build_ast(const FunctionUnit& unit);
// Parses a brace-delimited body starting at tokens[0] == "{".
AstNode parse_body(const std::vector<Token>& tokens, std::size_t open_brace);

}  // namespace codelineage::cparse
