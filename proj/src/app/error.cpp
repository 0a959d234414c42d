#include "codelineage/error.hpp"

namespace codelineage {

const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ManifestParse: return "ManifestParseError";
    case ErrorKind::DuplicateSpecimenId: return "DuplicateSpecimenId";
    case ErrorKind::MissingTimestamp: return "MissingTimestamp";
    case ErrorKind::UnknownLabelSlot: return "UnknownLabelSlot";
    case ErrorKind::UnknownLanguageRatio: return "UnknownLanguageRatio";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::LexiconLoad: return "LexiconLoadError";
    case ErrorKind::EmptyList: return "EmptyListError";
    case ErrorKind::ReportParse: return "ReportParseError";
    case ErrorKind::EmptyDerivedSet: return "EmptyDerivedSet";
    case ErrorKind::UnknownSpecimen: return "UnknownSpecimen";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ManifestParse: return 10;
    case ErrorKind::DuplicateSpecimenId: return 11;
    case ErrorKind::MissingTimestamp: return 12;
    case ErrorKind::UnknownLabelSlot: return 13;
    case ErrorKind::UnknownLanguageRatio: return 14;
    case ErrorKind::EmptyCorpus: return 15;
    case ErrorKind::Config: return 20;
    case ErrorKind::LexiconLoad: return 30;
    case ErrorKind::EmptyList: return 40;
    case ErrorKind::ReportParse: return 41;
    case ErrorKind::EmptyDerivedSet: return 42;
    case ErrorKind::UnknownSpecimen: return 50;
    case ErrorKind::DivisionByZero: return 51;
    case ErrorKind::Io: return 60;
  }
  return 1;
}

}  // namespace codelineage
