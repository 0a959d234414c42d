#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "codelineage/clones.hpp"
#include "codelineage/config.hpp"
#include "codelineage/cparse/ast.hpp"
#include "codelineage/genealogy.hpp"
#include "codelineage/tags.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& rel) { return fs::path(CODELINEAGE_FIXTURES) / rel; }

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() / ("codelineage-" + tag + "-" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

inline const codelineage::tags::Lexicon& shipped_lexicon() {
  static const auto lex = codelineage::tags::Lexicon::load(codelineage::tags::LexiconPaths::in_directory(
      codelineage::PipelineConfig::default_data_dir() / "lexicon"));
  return lex;
}

// Random tree over every node kind, depth-limited.
inline codelineage::cparse::AstNode random_ast(std::mt19937_64& rng, int depth = 0) {
  using codelineage::cparse::AstNode;
  using codelineage::cparse::NodeKind;
  AstNode n;
  n.kind = static_cast<NodeKind>(std::uniform_int_distribution<int>(0, static_cast<int>(NodeKind::Other))(rng));
  const int max_children = depth >= 6 ? 0 : 4;
  const int kids = std::uniform_int_distribution<int>(0, max_children)(rng);
  for (int i = 0; i < kids; ++i) n.children.push_back(random_ast(rng, depth + 1));
  return n;
}

// Direct post-order count, independent of the library's vector builder.
inline std::array<std::uint64_t, codelineage::cparse::kVectorKinds> count_kinds(
    const codelineage::cparse::AstNode& n) {
  std::array<std::uint64_t, codelineage::cparse::kVectorKinds> out{};
  const auto k = static_cast<std::size_t>(n.kind);
  if (k < out.size()) ++out[k];
  for (const auto& c : n.children) {
    auto sub = count_kinds(c);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += sub[i];
  }
  return out;
}

using EdgeKey = std::tuple<std::string, std::string, int, std::string, std::string, int>;

inline EdgeKey edge_key(const codelineage::clones::ReuseEdge& e) {
  return {e.src_specimen, e.src_file, e.src_line, e.dst_specimen, e.dst_file, e.dst_line};
}

// All-pairs clone verification with the ubiquity cut, written without the
// index: every eligible cross-specimen pair is compared.
inline std::set<EdgeKey> brute_force_clones(const std::vector<codelineage::clones::CloneInput>& fns,
                                            const codelineage::clones::CloneConfig& cfg) {
  using codelineage::clones::similarity;
  const auto n = fns.size();
  std::vector<bool> ok(n);
  for (std::size_t i = 0; i < n; ++i)
    ok[i] = fns[i].token_count >= cfg.min_tokens && fns[i].vector.node_total > 0 &&
            std::any_of(fns[i].vector.counts.begin(), fns[i].vector.counts.end(), [](auto c) { return c != 0; });
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::set<std::string>> holders(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!ok[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!ok[j] || fns[i].specimen_id == fns[j].specimen_id) continue;
      if (similarity(fns[i].vector, fns[j].vector) >= cfg.threshold) {
        pairs.emplace_back(i, j);
        holders[i].insert(fns[j].specimen_id);
        holders[j].insert(fns[i].specimen_id);
      }
    }
  }
  std::size_t specimens = cfg.corpus_specimens;
  if (specimens == 0) {
    std::set<std::string> ids;
    for (const auto& f : fns) ids.insert(f.specimen_id);
    specimens = ids.size();
  }
  auto dropped = [&](std::size_t i) {
    const double h = static_cast<double>(holders[i].size() + 1);
    return h > cfg.max_specimen_fraction * static_cast<double>(specimens) && h > 2;
  };
  std::set<EdgeKey> out;
  for (auto [i, j] : pairs) {
    if (dropped(i) || dropped(j)) continue;
    std::size_t a = i, b = j;
    if (fns[b].specimen_id < fns[a].specimen_id) std::swap(a, b);
    out.insert({fns[a].specimen_id, fns[a].file, fns[a].start_line, fns[b].specimen_id, fns[b].file,
                fns[b].start_line});
  }
  return out;
}

// Raw tags mixing dictionary words, abbreviations, stopwords, junk and
// every splitting boundary.
inline std::vector<codelineage::tags::RawTag> random_raw_tags(std::mt19937_64& rng,
                                                              const std::vector<std::string>& words) {
  using codelineage::tags::RawTag;
  using codelineage::tags::TagSource;
  static const std::vector<std::string> extras{"cnt",  "buf",   "num",  "the",   "and",    "xZq9", "cpu",
                                               "HKEY", "ptr",   "str",  "sending", "files", "Sleep", "tmp",
                                               "url",  "Http",  "dll",  "qq",    "a",      "I",    "zzxj"};
  std::uniform_int_distribution<int> count(0, 12);
  std::vector<RawTag> out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    std::string text;
    const int parts = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int p = 0; p < parts; ++p) {
      std::string w = (rng() % 3 == 0) ? extras[rng() % extras.size()] : words[rng() % words.size()];
      switch (rng() % 6) {
        case 0: if (!w.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0]))); break;
        case 1: for (auto& c : w) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c))); break;
        case 2: w += std::to_string(rng() % 100); break;
        default: break;
      }
      if (p > 0) {
        static const std::vector<std::string> seps{"_", "", "-", "::", ".", "\\", " ", "$"};
        text += seps[rng() % seps.size()];
      }
      text += w;
    }
    out.push_back({text, static_cast<TagSource>(rng() % 5)});
  }
  return out;
}

struct PathOracle {
  int depth = 0;
  std::uint64_t bottleneck = 0;
  std::optional<std::uint64_t> direct;
};

// Enumerates every simple path of at most max_depth hops from focus along
// (forward ? outgoing : incoming) edges.
inline std::map<std::string, PathOracle> enumerate_paths(const codelineage::genealogy::Genealogy& g,
                                                         const std::string& focus, int max_depth, bool forward) {
  std::map<std::string, std::vector<std::pair<std::string, std::uint64_t>>> adj;
  for (const auto& e : g.edges) {
    if (forward) adj[e.src_id].emplace_back(e.dst_id, e.weight);
    else adj[e.dst_id].emplace_back(e.src_id, e.weight);
  }
  std::map<std::string, PathOracle> out;
  std::vector<std::string> stack{focus};
  auto walk = [&](auto&& self, const std::string& at, int hops, std::uint64_t bottleneck) -> void {
    if (hops == max_depth) return;
    for (const auto& [next, w] : adj[at]) {
      if (std::find(stack.begin(), stack.end(), next) != stack.end()) continue;
      const std::uint64_t b = hops == 0 ? w : std::min(bottleneck, w);
      auto [it, fresh] = out.try_emplace(next, PathOracle{hops + 1, b, std::nullopt});
      if (!fresh) {
        it->second.depth = std::min(it->second.depth, hops + 1);
        it->second.bottleneck = std::max(it->second.bottleneck, b);
      }
      if (hops == 0) it->second.direct = w;
      stack.push_back(next);
      self(self, next, hops + 1, b);
      stack.pop_back();
    }
  };
  walk(walk, focus, 0, 0);
  return out;
}

}  // namespace testsupport
