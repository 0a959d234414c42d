#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "codelineage/corpus.hpp"
#include "codelineage/cparse/lexer.hpp"

namespace codelineage::scan {

enum class ListKind { Syscall, Api };

std::string_view list_kind_name(ListKind kind) noexcept;
// Accepts "syscall" and "api"; throws Error(Config) otherwise.
ListKind parse_list_kind(std::string_view text);

struct IdentifierList {
  ListKind kind = ListKind::Api;
  std::set<std::string> names;  // folded form
};

// "Sleep" and "sleep" fold to "sleep"; every other name is case-sensitive.
std::string fold_identifier(std::string_view name);

// One name per line; blank lines and '#' comments skipped. Throws
// Error(EmptyList) when no names remain, Error(Io) when unreadable.
IdentifierList load_identifier_list(const std::filesystem::path& path, ListKind kind);
IdentifierList make_identifier_list(ListKind kind, const std::vector<std::string>& names);

struct ScanHit {
  std::string specimen_id;
  std::string identifier;  // folded form
  ListKind kind = ListKind::Api;
  std::uint64_t occurrence_count = 0;
  bool specimen_presence = false;
};

// Identifier tokens only; comments, strings and keywords never match.
// One hit per matched identifier, sorted by identifier.
std::vector<ScanHit> scan_tokens(std::string_view specimen_id, const std::vector<cparse::Token>& tokens,
                                 const IdentifierList& list);
std::vector<ScanHit> scan_specimen(const Specimen& specimen, const IdentifierList& list);
std::vector<ScanHit> scan_corpus(const Corpus& corpus, const IdentifierList& list, unsigned threads = 1);

struct Period {
  int first_year = 0;
  int last_year = 0;

  bool contains(int year) const { return year >= first_year && year <= last_year; }
  std::string label() const;
  friend bool operator==(const Period&, const Period&) = default;
};

// "1976-1995,1996-2000"; a bare year is a one-year period. Throws
// Error(Config) for malformed, reversed, overlapping or unordered periods.
std::vector<Period> parse_periods(std::string_view text);

struct RankedIdentifier {
  std::string identifier;
  std::size_t specimens = 0;
  friend bool operator==(const RankedIdentifier&, const RankedIdentifier&) = default;
};

struct PeriodRanking {
  Period period;
  std::vector<RankedIdentifier> top;
};

// Ranks identifiers by the number of specimens in the period that use them,
// ties alphabetical. Specimens outside every period are ignored.
std::vector<PeriodRanking> top_k_by_period(const Corpus& corpus, const std::vector<ScanHit>& hits, std::size_t k,
                                           const std::vector<Period>& periods);

// "1976-1995 & bind (1) & connect (1)"
std::string format_row(const PeriodRanking& row);

// --- CWE findings --------------------------------------------------------

struct CweFinding {
  std::string specimen_id;
  int cwe_id = 0;
  std::string file;  // relative to the specimen root once attributed
  int line = 0;
  std::string message;
  friend bool operator==(const CweFinding&, const CweFinding&) = default;
};

struct CweReport {
  std::vector<CweFinding> findings;
  std::vector<CweFinding> unattributed;  // specimen_id empty
};

// XML (`<error cwe=".." file=".." line="..">` or nested `<location>`) or
// CSV (file,line,cwe,message). The format is sniffed from the content.
// Records without a positive cwe are skipped. Throws Error(ReportParse).
CweReport parse_cwe_report(std::string_view content, const Corpus& corpus);
CweReport ingest_cwe_findings(const std::filesystem::path& report_path, const Corpus& corpus);

// Specimen owning `file`: absolute paths by root prefix, relative paths by a
// first component equal to the specimen id or its root directory name.
// Returns the specimen id and the path inside it, or nothing.
std::optional<std::pair<std::string, std::string>> attribute_path(std::string_view file, const Corpus& corpus);

// --- enrichment ----------------------------------------------------------

// Two-sided Fisher exact test for [[a, b], [c, d]]: the total probability of
// tables with the same margins that are no more likely than the observed one.
double fisher_exact_two_sided(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

struct EnrichmentResult {
  int cwe_id = 0;
  std::uint64_t derived_hits = 0;
  std::uint64_t derived_total = 0;
  std::uint64_t overall_hits = 0;
  std::uint64_t overall_total = 0;
  double derived_rate = 0.0;
  double overall_rate = 0.0;
  double p_value = 1.0;
};

// The comparison group is every corpus specimen outside the derived set.
// Throws Error(EmptyDerivedSet) or Error(UnknownSpecimen).
EnrichmentResult cwe_enrichment(const std::vector<std::string>& derived_ids, const Corpus& corpus,
                                const std::vector<CweFinding>& findings, int cwe_id);

// Same statistic from presence counts alone.
EnrichmentResult enrichment_from_counts(int cwe_id, std::uint64_t derived_hits, std::uint64_t derived_total,
                                        std::uint64_t overall_hits, std::uint64_t overall_total);

}  // namespace codelineage::scan
