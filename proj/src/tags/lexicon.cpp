#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "codelineage/error.hpp"
#include "codelineage/tags.hpp"

namespace codelineage::tags {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::vector<std::string> read_entries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::LexiconLoad, fmt::format("cannot read lexicon file {}", path.string()));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    out.push_back(std::move(entry));
  }
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// Candidate base forms in rule order.
std::vector<std::string> strip_inflection(const std::string& w) {
  std::vector<std::string> out;
  auto stem = [&](std::size_t n) { return w.substr(0, w.size() - n); };
  if (ends_with(w, "ies")) out.push_back(stem(3) + "y");
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is")) out.push_back(stem(1));
  if (ends_with(w, "es")) out.push_back(stem(2));
  if (ends_with(w, "ing") && w.size() > 4) {
    const std::string s = stem(3);
    out.push_back(s);
    out.push_back(s + "e");
    if (s.size() >= 2 && s.back() == s[s.size() - 2]) out.push_back(s.substr(0, s.size() - 1));
  }
  if (ends_with(w, "ied")) out.push_back(stem(3) + "y");
  if (ends_with(w, "ed") && w.size() > 3) {
    const std::string s = stem(2);
    out.push_back(s);
    if (!s.empty() && !is_vowel(s.back())) out.push_back(s + "e");
    if (s.size() >= 2 && s.back() == s[s.size() - 2]) out.push_back(s.substr(0, s.size() - 1));
  }
  return out;
}

}  // namespace

LexiconPaths LexiconPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "words.txt", dir / "abbrev.tsv", dir / "whitelist.txt", dir / "blacklist.txt"};
}

Lexicon Lexicon::load(const LexiconPaths& paths) {
  std::vector<std::pair<std::string, std::string>> abbrevs;
  for (const auto& line : read_entries(paths.abbreviations)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorKind::LexiconLoad,
                  fmt::format("{}: expected abbreviation<TAB>expansion, got '{}'", paths.abbreviations.string(), line));
    abbrevs.emplace_back(trim(line.substr(0, tab)), trim(line.substr(tab + 1)));
  }
  return from_entries(read_entries(paths.words), std::move(abbrevs), read_entries(paths.whitelist),
                      read_entries(paths.blacklist));
}

Lexicon Lexicon::from_entries(std::vector<std::string> words, std::vector<std::pair<std::string, std::string>> abbrevs,
                              std::vector<std::string> whitelist, std::vector<std::string> blacklist) {
  Lexicon lex;
  for (auto& w : words) lex.words_.insert(lower(w));
  for (auto& w : whitelist) lex.whitelist_.insert(lower(w));
  for (auto& w : blacklist) lex.blacklist_.insert(lower(w));
  for (auto& [key, value] : abbrevs) {
    std::vector<std::string> expansion;
    std::istringstream parts{lower(value)};
    std::string part;
    while (parts >> part) expansion.push_back(part);
    if (key.empty() || expansion.empty())
      throw Error(ErrorKind::LexiconLoad, fmt::format("empty abbreviation entry '{}'", key));
    lex.abbrevs_[lower(key)] = std::move(expansion);
  }
  lex.validate();
  return lex;
}

void Lexicon::validate() const {
  for (const auto& [key, expansion] : abbrevs_) {
    for (const auto& w : expansion) {
      if (abbrevs_.count(w))
        throw Error(ErrorKind::LexiconLoad,
                    fmt::format("expansion of '{}' contains '{}', which is itself an abbreviation", key, w));
    }
    if (whitelist_.count(key))
      throw Error(ErrorKind::LexiconLoad, fmt::format("'{}' is both whitelisted and an abbreviation", key));
  }
}

const std::vector<std::string>* Lexicon::expansion(std::string_view w) const {
  auto it = abbrevs_.find(std::string(w));
  return it == abbrevs_.end() ? nullptr : &it->second;
}

bool Lexicon::acceptable_lemma(const std::string& w) const {
  return w.size() >= 3 && (is_word(w) || whitelisted(w)) && !blacklisted(w) && !is_abbreviation(w);
}

std::optional<std::string> Lexicon::accept(std::string_view word) const {
  const std::string w(word);
  if (w.empty() || blacklisted(w)) return std::nullopt;
  if (whitelisted(w)) return w;
  if (w.size() >= 3 && is_word(w)) return w;
  // Strip inflections until a form is accepted or nothing changes.
  std::vector<std::string> frontier{w};
  for (int round = 0; round < 3 && !frontier.empty(); ++round) {
    std::vector<std::string> next;
    for (const auto& form : frontier) {
      for (auto& cand : strip_inflection(form)) {
        if (acceptable_lemma(cand)) return cand;
        if (cand.size() >= 3) next.push_back(std::move(cand));
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

}  // namespace codelineage::tags
