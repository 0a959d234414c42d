#include "codelineage/tags.hpp"

#include <algorithm>
#include <regex>

namespace codelineage::tags {

using cparse::TokenKind;

std::string_view tag_source_name(TagSource source) noexcept {
  switch (source) {
    case TagSource::FunctionName: return "function_name";
    case TagSource::VariableName: return "variable_name";
    case TagSource::Comment: return "comment";
    case TagSource::RegistryPath: return "registry_path";
    case TagSource::FilePath: return "file_path";
  }
  return "unknown";
}

std::vector<std::string> TagSet::tags() const {
  std::vector<std::string> out;
  out.reserve(provenance.size());
  for (const auto& [tag, sources] : provenance) out.push_back(tag);
  return out;
}

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_upper(c) || is_lower(c) || is_digit(c); }

char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

std::vector<std::string> comment_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (is_upper(c) || is_lower(c)) {
      cur.push_back(to_lower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

std::vector<std::string> FrequencyKeywordExtractor::keywords(std::string_view comment) const {
  std::map<std::string, std::size_t> freq;
  for (auto& w : comment_words(comment)) {
    if (w.size() < 3 || lexicon_.blacklisted(w)) continue;
    ++freq[w];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > top_k_) ranked.resize(top_k_);
  std::vector<std::string> out;
  for (auto& [w, n] : ranked) out.push_back(std::move(w));
  return out;
}

bool is_registry_path(std::string_view literal) {
  static const std::regex re(R"((^|[^A-Za-z0-9_])(HKEY_[A-Za-z_]+|HK(LM|CU|CR|CC|U))([^A-Za-z0-9_]|$)|SOFTWARE\\)",
                             std::regex::icase);
  return std::regex_search(literal.begin(), literal.end(), re);
}

bool is_file_path(std::string_view literal) {
  static const std::regex drive(R"(^[A-Za-z]:(\\|/))");
  static const std::regex env(R"(^%[A-Za-z_][A-Za-z0-9_]*%(\\|/))");
  static const std::regex unc(R"(^\\\\\\\\)");
  static const std::regex unix_root(R"(^/(etc|tmp|usr|var|proc|dev|bin|home|root|sys)(/|$))");
  static const std::regex extension(
      R"(^[^\s"]*[A-Za-z0-9_]\.(exe|dll|sys|bat|cmd|ini|tmp|log|dat|vbs|ps1|lnk|scr|inf|cfg)$)", std::regex::icase);
  const std::string s(literal);
  return std::regex_search(s, drive) || std::regex_search(s, env) || std::regex_search(s, unc) ||
         std::regex_search(s, unix_root) || std::regex_search(s, extension);
}

std::string literal_contents(std::string_view text) {
  const auto quote = text.find('"');
  if (quote == std::string_view::npos) return std::string(text);
  const bool raw = quote > 0 && text[quote - 1] == 'R';
  std::string_view body = text.substr(quote + 1);
  if (raw) {
    const auto open = body.find('(');
    if (open == std::string_view::npos) return std::string(body);
    const std::string_view delim = body.substr(0, open);
    body = body.substr(open + 1);
    const std::string closing = ")" + std::string(delim) + "\"";
    if (body.size() >= closing.size() && body.substr(body.size() - closing.size()) == closing)
      body.remove_suffix(closing.size());
    return std::string(body);
  }
  if (!body.empty() && body.back() == '"') body.remove_suffix(1);
  return std::string(body);
}

std::vector<RawTag> extract_raw_tags(const cparse::FunctionUnit& unit, const CommentKeywordExtractor& comments) {
  std::vector<RawTag> out;
  auto add = [&](std::string text, TagSource source) {
    if (text.empty()) return;
    RawTag tag{std::move(text), source};
    if (std::find(out.begin(), out.end(), tag) == out.end()) out.push_back(std::move(tag));
  };
  add(unit.name, TagSource::FunctionName);
  const auto& toks = unit.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (t.kind == TokenKind::Identifier) {
      if (t.text == unit.name) continue;
      if (i + 1 < toks.size() && toks[i + 1].punct("(")) continue;
      add(t.text, TagSource::VariableName);
    } else if (t.kind == TokenKind::StringLiteral) {
      std::string body = literal_contents(t.text);
      if (is_registry_path(body)) add(std::move(body), TagSource::RegistryPath);
      else if (is_file_path(body)) add(std::move(body), TagSource::FilePath);
    }
  }
  for (const auto& block : unit.comments)
    for (auto& w : comments.keywords(block)) add(std::move(w), TagSource::Comment);
  return out;
}

std::vector<std::string> split_identifier(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (!is_alnum(c)) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const char prev = cur.back();
      const bool boundary =
          (is_lower(prev) && is_upper(c)) || (is_digit(prev) != is_digit(c)) ||
          (is_upper(prev) && is_upper(c) && i + 1 < text.size() && is_lower(text[i + 1]));
      if (boundary) flush();
    }
    cur.push_back(c);
  }
  flush();
  return out;
}

TagSet normalize_tags(const std::vector<RawTag>& raw, const Lexicon& lexicon) {
  TagSet out;
  for (const auto& tag : raw) {
    for (const auto& piece : split_identifier(tag.text)) {  // 1
      std::string low;
      for (char c : piece) low.push_back(to_lower(c));
      std::vector<std::string> expanded;
      if (const auto* exp = lexicon.expansion(low)) expanded = *exp;  // 2
      else expanded.push_back(low);
      for (const auto& word : expanded) {
        std::string clean;  // 3
        for (char c : word)
          if (is_upper(c) || is_lower(c)) clean.push_back(to_lower(c));
        if (auto accepted = lexicon.accept(clean)) out.provenance[*accepted].insert(tag.source);  // 4, 5
      }
    }
  }
  return out;
}

}  // namespace codelineage::tags
