#pragma once

#include <stdexcept>
#include <string>

namespace codelineage {

// Every failure the toolkit reports maps to one of these, and each maps to a
// distinct process exit code in the CLI.
enum class ErrorKind {
  ManifestParse,
  DuplicateSpecimenId,
  MissingTimestamp,
  UnknownLabelSlot,
  UnknownLanguageRatio,
  EmptyCorpus,
  Config,
  LexiconLoad,
  EmptyList,
  ReportParse,
  EmptyDerivedSet,
  UnknownSpecimen,
  DivisionByZero,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind) noexcept;
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace codelineage
