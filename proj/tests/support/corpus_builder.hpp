#pragma once

#include <string>
#include <utility>
#include <vector>

#include "codelineage/corpus.hpp"

namespace testsupport {

// In-memory specimen with the given files; dates as YYYY-MM-DD.
inline codelineage::Specimen make_specimen(const std::string& id, const std::string& date,
                                           std::vector<std::pair<std::string, std::string>> files,
                                           codelineage::Language lang = codelineage::Language::C) {
  codelineage::Specimen s;
  s.id = id;
  s.name = id;
  s.root_path = "/corpus/" + id;
  s.date = *codelineage::Date::parse(date);
  s.language = lang;
  for (auto& [path, text] : files) s.files.push_back(codelineage::SourceFile::from_bytes(path, lang, text));
  return s;
}

inline codelineage::Corpus make_corpus(std::vector<codelineage::Specimen> specimens) {
  codelineage::Corpus c;
  c.specimens = std::move(specimens);
  std::sort(c.specimens.begin(), c.specimens.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return c;
}

}  // namespace testsupport
