#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace codelineage {

// Calendar day, UTC. Intra-day ordering is not modelled.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  static std::optional<Date> parse(std::string_view iso);
  std::string to_string() const;

  friend auto operator<=>(const Date&, const Date&) = default;
};

enum class Language { C, Cpp, Other };

std::string_view language_name(Language lang) noexcept;
std::optional<Language> parse_language(std::string_view text) noexcept;

enum class LabelSlot { File, Family, Vulnerability, Behavior, Class, Pack, Fud, Unknown };

inline constexpr std::array<LabelSlot, 8> kLabelSlots = {
    LabelSlot::File,  LabelSlot::Family, LabelSlot::Vulnerability, LabelSlot::Behavior,
    LabelSlot::Class, LabelSlot::Pack,   LabelSlot::Fud,           LabelSlot::Unknown};

std::string_view label_slot_name(LabelSlot slot) noexcept;
std::optional<LabelSlot> parse_label_slot(std::string_view name) noexcept;
// Throws Error(UnknownLabelSlot).
LabelSlot require_label_slot(std::string_view name);

// Eight label slots. An absent slot means the label could not be resolved,
// which is different from a resolved slot holding no values. The fud slot
// holds a single "true" or "false" value when resolved.
class LabelSet {
 public:
  using Values = std::vector<std::string>;

  const std::optional<Values>& get(LabelSlot slot) const { return slots_[index(slot)]; }
  void set(LabelSlot slot, Values values) { slots_[index(slot)] = std::move(values); }
  void clear(LabelSlot slot) { slots_[index(slot)].reset(); }
  bool resolved(LabelSlot slot) const { return slots_[index(slot)].has_value(); }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  static std::size_t index(LabelSlot slot) { return static_cast<std::size_t>(slot); }
  std::array<std::optional<Values>, 8> slots_;
};

using Sha256 = std::array<std::uint8_t, 32>;
std::string to_hex(const Sha256& digest);
Sha256 sha256(std::string_view bytes);

struct SourceFile {
  std::filesystem::path rel_path;
  Language language = Language::C;
  std::size_t byte_len = 0;
  Sha256 content_digest{};
  // Byte offsets of line starts in `text`; always begins with 0.
  std::vector<std::size_t> line_index;
  // File bytes decoded as UTF-8, invalid sequences replaced by U+FFFD.
  std::string text;

  static SourceFile from_bytes(std::filesystem::path rel_path, Language lang, std::string_view bytes);
};

struct Specimen {
  std::string id;
  std::string name;
  std::filesystem::path root_path;
  Date date;
  Language language = Language::C;
  LabelSet labels;
  std::vector<SourceFile> files;
};

struct Corpus {
  std::vector<Specimen> specimens;  // sorted by id

  const Specimen* find(std::string_view id) const;
  std::size_t size() const { return specimens.size(); }
  bool empty() const { return specimens.empty(); }
};

bool is_logic_file(const std::filesystem::path& rel_path, Language lang);

std::string decode_utf8_lossy(std::string_view bytes);

// Reads a corpus.json manifest (array of specimen records). Specimen paths
// are resolved relative to the manifest's directory. Symlinks are skipped.
Corpus load_corpus(const std::filesystem::path& manifest_path, unsigned threads = 1);

// Parses the manifest records without touching the file system beyond path
// resolution; files stay empty.
std::vector<Specimen> parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir);

nlohmann::ordered_json labels_to_json(const LabelSet& labels);
// Inverse of labels_to_json; null slot values count as unresolved.
LabelSet labels_from_json(const nlohmann::json& j, const std::string& context);
// Manifest-shaped records (reloadable with load_corpus from `base_dir`).
nlohmann::ordered_json manifest_json(const Corpus& corpus, const std::filesystem::path& base_dir);
// Full serialization including per-file digests and sizes.
nlohmann::ordered_json corpus_json(const Corpus& corpus);

}  // namespace codelineage
