#include "codelineage/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "codelineage/error.hpp"
#include "codelineage/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace codelineage {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

[[noreturn]] void manifest_error(const std::string& msg) { throw Error(ErrorKind::ManifestParse, msg); }

}  // namespace

std::optional<Date> Date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  Date d;
  if (!parse_int(iso.substr(0, 4), d.year) || !parse_int(iso.substr(5, 2), d.month) ||
      !parse_int(iso.substr(8, 2), d.day))
    return std::nullopt;
  if (d.month < 1 || d.month > 12) return std::nullopt;
  if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
  return d;
}

std::string Date::to_string() const { return fmt::format("{:04d}-{:02d}-{:02d}", year, month, day); }

std::string_view language_name(Language lang) noexcept {
  switch (lang) {
    case Language::C: return "C";
    case Language::Cpp: return "C++";
    case Language::Other: return "Other";
  }
  return "Other";
}

std::optional<Language> parse_language(std::string_view text) noexcept {
  const std::string t = lower_ascii(text);
  if (t == "c") return Language::C;
  if (t == "c++" || t == "cpp" || t == "cxx") return Language::Cpp;
  if (t == "other") return Language::Other;
  return std::nullopt;
}

std::string_view label_slot_name(LabelSlot slot) noexcept {
  switch (slot) {
    case LabelSlot::File: return "file";
    case LabelSlot::Family: return "family";
    case LabelSlot::Vulnerability: return "vulnerability";
    case LabelSlot::Behavior: return "behavior";
    case LabelSlot::Class: return "class";
    case LabelSlot::Pack: return "pack";
    case LabelSlot::Fud: return "fud";
    case LabelSlot::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<LabelSlot> parse_label_slot(std::string_view name) noexcept {
  for (LabelSlot s : kLabelSlots)
    if (label_slot_name(s) == name) return s;
  return std::nullopt;
}

LabelSlot require_label_slot(std::string_view name) {
  if (auto s = parse_label_slot(name)) return *s;
  throw Error(ErrorKind::UnknownLabelSlot, fmt::format("unknown label slot '{}'", name));
}

std::string to_hex(const Sha256& digest) {
  std::string out;
  out.reserve(64);
  for (auto b : digest) out += fmt::format("{:02x}", b);
  return out;
}

Sha256 sha256(std::string_view bytes) {
  Sha256 out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size())
    throw Error(ErrorKind::Io, "sha256 digest failed");
  return out;
}

std::string decode_utf8_lossy(std::string_view in) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(in.size());
  const auto* s = reinterpret_cast<const unsigned char*>(in.data());
  const std::size_t n = in.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = s[i];
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) { len = 2; cp = c & 0x1F; }
    else if ((c & 0xF0) == 0xE0) { len = 3; cp = c & 0x0F; }
    else if ((c & 0xF8) == 0xF0) { len = 4; cp = c & 0x07; }
    bool ok = len != 0 && i + len <= n;
    for (std::size_t k = 1; ok && k < len; ++k) {
      if ((s[i + k] & 0xC0) != 0x80) ok = false;
      else cp = (cp << 6) | (s[i + k] & 0x3F);
    }
    // Reject overlongs, surrogates and out-of-range code points.
    if (ok) {
      if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
          (cp >= 0xD800 && cp <= 0xDFFF))
        ok = false;
    }
    if (ok) {
      out.append(in.substr(i, len));
      i += len;
    } else {
      out.append(kReplacement);
      ++i;
    }
  }
  return out;
}

SourceFile SourceFile::from_bytes(fs::path rel_path, Language lang, std::string_view bytes) {
  SourceFile f;
  f.rel_path = std::move(rel_path);
  f.language = lang;
  f.byte_len = bytes.size();
  f.content_digest = sha256(bytes);
  f.text = decode_utf8_lossy(bytes);
  f.line_index.push_back(0);
  for (std::size_t i = 0; i < f.text.size(); ++i)
    if (f.text[i] == '\n' && i + 1 < f.text.size()) f.line_index.push_back(i + 1);
  return f;
}

const Specimen* Corpus::find(std::string_view id) const {
  auto it = std::lower_bound(specimens.begin(), specimens.end(), id,
                             [](const Specimen& s, std::string_view key) { return s.id < key; });
  return it != specimens.end() && it->id == id ? &*it : nullptr;
}

bool is_logic_file(const fs::path& rel_path, Language lang) {
  static const std::set<std::string> kCFamily = {".c", ".cc", ".cpp", ".cxx", ".h", ".hh", ".hpp", ".hxx"};
  if (lang == Language::Other) return false;
  return kCFamily.count(lower_ascii(rel_path.extension().string())) != 0;
}

namespace {

LabelSet parse_labels(const json& j, const std::string& id) {
  LabelSet labels;
  if (j.is_null()) return labels;
  if (!j.is_object()) manifest_error(fmt::format("specimen '{}': labels must be an object", id));
  for (const auto& [key, value] : j.items()) {
    auto slot = parse_label_slot(key);
    if (!slot) throw Error(ErrorKind::UnknownLabelSlot, fmt::format("specimen '{}': unknown label slot '{}'", id, key));
    if (value.is_null()) continue;
    LabelSet::Values values;
    if (*slot == LabelSlot::Fud) {
      if (!value.is_boolean()) manifest_error(fmt::format("specimen '{}': fud must be a boolean", id));
      values.push_back(value.get<bool>() ? "true" : "false");
    } else if (value.is_string()) {
      values.push_back(value.get<std::string>());
    } else if (value.is_array()) {
      for (const auto& v : value) {
        if (!v.is_string()) manifest_error(fmt::format("specimen '{}': label '{}' values must be strings", id, key));
        values.push_back(v.get<std::string>());
      }
    } else {
      manifest_error(fmt::format("specimen '{}': label '{}' must be a string or array", id, key));
    }
    labels.set(*slot, std::move(values));
  }
  return labels;
}

std::string require_string(const json& rec, const char* key, std::size_t index) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_string())
    manifest_error(fmt::format("specimen record {}: missing string field '{}'", index, key));
  return it->get<std::string>();
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot read {}", p.string()));
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void enumerate_files(Specimen& spec) {
  std::error_code ec;
  if (!fs::is_directory(spec.root_path, ec))
    throw Error(ErrorKind::Io, fmt::format("specimen '{}': {} is not a directory", spec.id, spec.root_path.string()));
  std::vector<fs::path> rels;
  fs::recursive_directory_iterator it(spec.root_path, fs::directory_options::skip_permission_denied, ec), end;
  if (ec) throw Error(ErrorKind::Io, fmt::format("specimen '{}': {}", spec.id, ec.message()));
  for (; it != end; it.increment(ec)) {
    if (ec) throw Error(ErrorKind::Io, fmt::format("specimen '{}': {}", spec.id, ec.message()));
    const auto status = it->symlink_status(ec);
    if (fs::is_symlink(status)) {
      if (it->is_directory(ec)) it.disable_recursion_pending();
      continue;
    }
    if (!fs::is_regular_file(status)) continue;
    fs::path rel = fs::relative(it->path(), spec.root_path).lexically_normal();
    if (is_logic_file(rel, spec.language)) rels.push_back(std::move(rel));
  }
  std::sort(rels.begin(), rels.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  spec.files.clear();
  spec.files.reserve(rels.size());
  for (auto& rel : rels) {
    const std::string bytes = read_bytes(spec.root_path / rel);
    const Language lang = spec.language;
    spec.files.push_back(SourceFile::from_bytes(std::move(rel), lang, bytes));
  }
}

}  // namespace

std::vector<Specimen> parse_manifest(const json& doc, const fs::path& base_dir) {
  if (!doc.is_array()) manifest_error("manifest must be a JSON array of specimen records");
  std::vector<Specimen> out;
  std::set<std::string> seen;
  std::size_t index = 0;
  for (const auto& rec : doc) {
    if (!rec.is_object()) manifest_error(fmt::format("specimen record {} is not an object", index));
    Specimen s;
    s.id = require_string(rec, "id", index);
    if (s.id.empty()) manifest_error(fmt::format("specimen record {}: empty id", index));
    if (!seen.insert(s.id).second)
      throw Error(ErrorKind::DuplicateSpecimenId, fmt::format("duplicate specimen id '{}'", s.id));
    s.name = rec.contains("name") && rec["name"].is_string() ? rec["name"].get<std::string>() : s.id;
    s.root_path = (base_dir / require_string(rec, "path", index)).lexically_normal();

    auto date_it = rec.find("date");
    if (date_it == rec.end() || date_it->is_null())
      throw Error(ErrorKind::MissingTimestamp, fmt::format("specimen '{}': missing date", s.id));
    if (!date_it->is_string()) manifest_error(fmt::format("specimen '{}': date must be a string", s.id));
    auto date = Date::parse(date_it->get<std::string>());
    if (!date) manifest_error(fmt::format("specimen '{}': invalid date '{}'", s.id, date_it->get<std::string>()));
    s.date = *date;

    const std::string lang = require_string(rec, "language", index);
    auto parsed = parse_language(lang);
    if (!parsed) manifest_error(fmt::format("specimen '{}': unknown language '{}'", s.id, lang));
    s.language = *parsed;

    if (auto lab = rec.find("labels"); lab != rec.end()) s.labels = parse_labels(*lab, s.id);
    out.push_back(std::move(s));
    ++index;
  }
  std::sort(out.begin(), out.end(), [](const Specimen& a, const Specimen& b) { return a.id < b.id; });
  return out;
}

Corpus load_corpus(const fs::path& manifest_path, unsigned threads) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open manifest {}", manifest_path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    manifest_error(fmt::format("{}: {}", manifest_path.string(), e.what()));
  }
  Corpus corpus;
  corpus.specimens = parse_manifest(doc, manifest_path.parent_path());
  parallel_for(corpus.specimens.size(), threads, [&](std::size_t i) { enumerate_files(corpus.specimens[i]); });
  return corpus;
}

LabelSet labels_from_json(const json& j, const std::string& context) { return parse_labels(j, context); }

ordered_json labels_to_json(const LabelSet& labels) {
  ordered_json j = ordered_json::object();
  for (LabelSlot slot : kLabelSlots) {
    const auto& v = labels.get(slot);
    if (!v) continue;
    if (slot == LabelSlot::Fud && v->size() == 1)
      j[std::string(label_slot_name(slot))] = (v->front() == "true");
    else
      j[std::string(label_slot_name(slot))] = *v;
  }
  return j;
}

ordered_json manifest_json(const Corpus& corpus, const fs::path& base_dir) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : corpus.specimens) {
    ordered_json rec;
    rec["id"] = s.id;
    rec["name"] = s.name;
    rec["path"] = s.root_path.lexically_relative(base_dir).generic_string();
    rec["date"] = s.date.to_string();
    rec["language"] = std::string(language_name(s.language));
    rec["labels"] = labels_to_json(s.labels);
    arr.push_back(std::move(rec));
  }
  return arr;
}

ordered_json corpus_json(const Corpus& corpus) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : corpus.specimens) {
    ordered_json rec;
    rec["id"] = s.id;
    rec["name"] = s.name;
    rec["date"] = s.date.to_string();
    rec["language"] = std::string(language_name(s.language));
    rec["labels"] = labels_to_json(s.labels);
    ordered_json files = ordered_json::array();
    for (const auto& f : s.files) {
      ordered_json fj;
      fj["path"] = f.rel_path.generic_string();
      fj["bytes"] = f.byte_len;
      fj["lines"] = f.line_index.size();
      fj["sha256"] = to_hex(f.content_digest);
      files.push_back(std::move(fj));
    }
    rec["files"] = std::move(files);
    arr.push_back(std::move(rec));
  }
  return arr;
}

}  // namespace codelineage
