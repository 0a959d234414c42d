#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "codelineage/cparse/functions.hpp"

namespace codelineage::tags {

enum class TagSource { FunctionName, VariableName, Comment, RegistryPath, FilePath };

std::string_view tag_source_name(TagSource source) noexcept;

struct RawTag {
  std::string text;
  TagSource source = TagSource::FunctionName;

  friend bool operator==(const RawTag&, const RawTag&) = default;
};

struct TagSet {
  std::map<std::string, std::set<TagSource>> provenance;  // sorted by tag

  std::vector<std::string> tags() const;
  bool contains(std::string_view tag) const { return provenance.find(std::string(tag)) != provenance.end(); }
  std::size_t size() const { return provenance.size(); }
  bool empty() const { return provenance.empty(); }
  friend bool operator==(const TagSet&, const TagSet&) = default;
};

struct LexiconPaths {
  std::filesystem::path words;
  std::filesystem::path abbreviations;
  std::filesystem::path whitelist;
  std::filesystem::path blacklist;

  // words.txt, abbrev.tsv, whitelist.txt and blacklist.txt under `dir`.
  static LexiconPaths in_directory(const std::filesystem::path& dir);
};

class Lexicon {
 public:
  // Throws Error(LexiconLoad) on unreadable files, malformed abbreviation
  // lines, or an expansion word that is itself an abbreviation.
  static Lexicon load(const LexiconPaths& paths);
  static Lexicon from_entries(std::vector<std::string> words, std::vector<std::pair<std::string, std::string>> abbrevs,
                              std::vector<std::string> whitelist, std::vector<std::string> blacklist);

  bool is_word(std::string_view w) const { return words_.count(std::string(w)) != 0; }
  bool whitelisted(std::string_view w) const { return whitelist_.count(std::string(w)) != 0; }
  bool blacklisted(std::string_view w) const { return blacklist_.count(std::string(w)) != 0; }
  bool is_abbreviation(std::string_view w) const { return abbrevs_.count(std::string(w)) != 0; }
  // Expansion words for a lowercase abbreviation, or nullptr.
  const std::vector<std::string>* expansion(std::string_view w) const;

  // Step 4: the accepted form of a lowercase word, trying inflection
  // stripping when the word itself is not accepted.
  std::optional<std::string> accept(std::string_view w) const;

  std::size_t word_count() const { return words_.size(); }

 private:
  void validate() const;
  bool acceptable_lemma(const std::string& w) const;

  std::unordered_set<std::string> words_;
  std::unordered_map<std::string, std::vector<std::string>> abbrevs_;
  std::unordered_set<std::string> whitelist_;
  std::unordered_set<std::string> blacklist_;
};

// Comment keyword extraction strategy. Only the frequency method ships.
class CommentKeywordExtractor {
 public:
  virtual ~CommentKeywordExtractor() = default;
  virtual std::vector<std::string> keywords(std::string_view comment) const = 0;
};

// Top-k most frequent words of a comment block, skipping stopwords and
// words under three letters; ties break alphabetically.
class FrequencyKeywordExtractor final : public CommentKeywordExtractor {
 public:
  FrequencyKeywordExtractor(const Lexicon& lexicon, std::size_t top_k = 5) : lexicon_(lexicon), top_k_(top_k) {}
  std::vector<std::string> keywords(std::string_view comment) const override;

 private:
  const Lexicon& lexicon_;
  std::size_t top_k_;
};

bool is_registry_path(std::string_view literal);
bool is_file_path(std::string_view literal);
// Unquoted, unprefixed contents of a string literal token; escapes kept.
std::string literal_contents(std::string_view token_text);

std::vector<RawTag> extract_raw_tags(const cparse::FunctionUnit& unit, const CommentKeywordExtractor& comments);

// Step 1: camelCase, digit and symbol boundaries.
std::vector<std::string> split_identifier(std::string_view text);

// Steps 1-5 in order; the result does not depend on input order.
TagSet normalize_tags(const std::vector<RawTag>& raw, const Lexicon& lexicon);

}  // namespace codelineage::tags
