#include "codelineage/clones.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>

#include "codelineage/error.hpp"
#include "codelineage/parallel.hpp"
#include "codelineage/simd/kernels.hpp"

namespace codelineage::clones {

using cparse::AstNode;
using cparse::NodeKind;

double CharacteristicVector::norm() const {
  std::uint64_t sq = 0;
  for (auto c : counts) sq += std::uint64_t{c} * c;
  return std::sqrt(static_cast<double>(sq));
}

bool CharacteristicVector::is_zero() const {
  return std::all_of(counts.begin(), counts.end(), [](std::uint32_t c) { return c == 0; });
}

CharacteristicVector& CharacteristicVector::operator+=(const CharacteristicVector& other) {
  for (std::size_t d = 0; d < counts.size(); ++d) counts[d] += other.counts[d];
  node_total += other.node_total;
  return *this;
}

CharacteristicVector one_hot(NodeKind kind) {
  CharacteristicVector v;
  const auto k = static_cast<std::size_t>(kind);
  if (k < cparse::kVectorKinds) v.counts[k] = 1;
  v.node_total = 1;
  return v;
}

namespace {

CharacteristicVector accumulate(const AstNode& node,
                                const std::function<void(const AstNode&, const CharacteristicVector&)>* visit) {
  CharacteristicVector v = one_hot(node.kind);
  for (const auto& child : node.children) v += accumulate(child, visit);
  if (visit != nullptr) (*visit)(node, v);
  return v;
}

}  // namespace

CharacteristicVector characteristic_vector(const AstNode& ast) { return accumulate(ast, nullptr); }

void visit_subtree_vectors(const AstNode& ast,
                           const std::function<void(const AstNode&, const CharacteristicVector&)>& visit) {
  accumulate(ast, &visit);
}

std::uint64_t squared_distance(const CharacteristicVector& a, const CharacteristicVector& b) {
  std::uint64_t sq = 0;
  for (std::size_t d = 0; d < a.counts.size(); ++d) {
    const std::int64_t diff = std::int64_t{a.counts[d]} - std::int64_t{b.counts[d]};
    sq += static_cast<std::uint64_t>(diff * diff);
  }
  return sq;
}

double similarity(const CharacteristicVector& a, const CharacteristicVector& b) {
  const double dist = std::sqrt(static_cast<double>(squared_distance(a, b)));
  const double s = 1.0 - dist / (a.norm() + b.norm() + kSimilarityEpsilon);
  return std::clamp(s, 0.0, 1.0);
}

void validate(const CloneConfig& cfg) {
  if (!(cfg.threshold > 0.0 && cfg.threshold <= 1.0))
    throw Error(ErrorKind::Config, fmt::format("clone threshold {} is outside (0, 1]", cfg.threshold));
  if (cfg.min_tokens < 1) throw Error(ErrorKind::Config, "min_tokens must be at least 1");
  if (!(cfg.max_specimen_fraction > 0.0 && cfg.max_specimen_fraction <= 1.0))
    throw Error(ErrorKind::Config,
                fmt::format("max_specimen_fraction {} is outside (0, 1]", cfg.max_specimen_fraction));
  if (cfg.projections < 1) throw Error(ErrorKind::Config, "projections must be at least 1");
  if (!(cfg.bucket_width > 0.0)) throw Error(ErrorKind::Config, "bucket_width must be positive");
}

CloneInput make_clone_input(const cparse::FunctionUnit& unit) {
  CloneInput in;
  in.specimen_id = unit.specimen_id;
  in.file = unit.file;
  in.name = unit.name;
  in.start_line = unit.start_line;
  in.token_count = unit.tokens.size();
  in.vector = characteristic_vector(unit.body_ast);
  return in;
}

bool edge_order(const ReuseEdge& a, const ReuseEdge& b) {
  return std::tie(a.src_specimen, a.dst_specimen, a.src_name, a.dst_name, a.src_file, a.src_line, a.dst_file,
                  a.dst_line) < std::tie(b.src_specimen, b.dst_specimen, b.src_name, b.dst_name, b.src_file,
                                         b.src_line, b.dst_file, b.dst_line);
}

void sort_edges(std::vector<ReuseEdge>& edges) { std::sort(edges.begin(), edges.end(), edge_order); }

bool eligible(const CloneInput& fn, const CloneConfig& cfg) {
  return fn.token_count >= cfg.min_tokens && !fn.vector.is_zero();
}

namespace {

struct Projection {
  std::array<double, simd::kDims> dir{};
  double offset = 0.0;
  double dir_norm = 0.0;
};

// p-stable (Gaussian) projections. Each query probes every bucket that can
// hold a vector within the similarity radius, so recall is exact.
class LshIndex {
 public:
  LshIndex(const std::vector<const CharacteristicVector*>& vectors, const CloneConfig& cfg)
      : cfg_(cfg), kernels_(simd::active_kernels()) {
    const std::size_t n = vectors.size();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    proj_.resize(cfg.projections);
    for (auto& p : proj_) {
      double sq = 0.0;
      for (auto& a : p.dir) {
        a = gauss(rng);
        sq += a * a;
      }
      p.dir_norm = std::sqrt(sq);
      p.offset = unit(rng);
    }

    simd::VectorBlock block(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < simd::kDims; ++d) block.set(i, d, vectors[i]->counts[d]);
    std::vector<std::vector<double>> values(proj_.size(), std::vector<double>(n));
    for (std::size_t k = 0; k < proj_.size(); ++k)
      kernels_.project(block.data(), block.stride(), n, proj_[k].dir.data(), values[k].data());

    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::vector<std::int64_t> raw_keys(n);
    for (std::size_t i = 0; i < n; ++i) raw_keys[i] = key(0, values[0][i]);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(raw_keys[a], values[0][a], a) < std::tie(raw_keys[b], values[0][b], b);
    });

    sorted_ = simd::VectorBlock(n);
    keys_.resize(n);
    proj_values_.assign(proj_.size(), std::vector<double>(n));
    position_.resize(n);
    norms_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t i = order_[s];
      position_[i] = s;
      keys_[s] = raw_keys[i];
      for (std::size_t d = 0; d < simd::kDims; ++d) sorted_.set(s, d, vectors[i]->counts[d]);
      for (std::size_t k = 0; k < proj_.size(); ++k) proj_values_[k][s] = values[k][i];
      norms_[s] = vectors[i]->norm();
    }
  }

  // Original indices of every vector whose similarity to `i` could reach the
  // threshold. Superset of the true neighbours.
  std::vector<std::size_t> candidates(std::size_t i) const {
    const std::size_t s = position_[i];
    const double t = cfg_.threshold;
    const double r = (1.0 - t) * (2.0 * norms_[s] + kSimilarityEpsilon) / t;
    const double scale = 2.0 * norms_[s] + r + 1.0;
    auto reach = [&](std::size_t k) { return proj_[k].dir_norm * r + 1e-9 * proj_[k].dir_norm * scale; };

    const double p0 = proj_values_[0][s];
    const double rho0 = reach(0);
    const auto lo = std::lower_bound(keys_.begin(), keys_.end(), key(0, p0 - rho0)) - keys_.begin();
    const auto hi = std::upper_bound(keys_.begin(), keys_.end(), key(0, p0 + rho0)) - keys_.begin();
    const auto count = static_cast<std::size_t>(hi - lo);

    std::array<double, simd::kDims> query{};
    for (std::size_t d = 0; d < simd::kDims; ++d) query[d] = sorted_.row(d)[s];
    std::vector<double> dist2(count);
    kernels_.squared_distance(sorted_.data() + lo, sorted_.stride(), count, query.data(), dist2.data());
    const double r_slack = r + 1e-9 * scale;
    const double limit = r_slack * r_slack;

    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < count; ++c) {
      const std::size_t j = static_cast<std::size_t>(lo) + c;
      if (j == s || dist2[c] > limit) continue;
      bool keep = true;
      for (std::size_t k = 1; k < proj_.size() && keep; ++k)
        keep = std::abs(proj_values_[k][j] - proj_values_[k][s]) <= reach(k);
      if (keep) out.push_back(order_[j]);
    }
    return out;
  }

 private:
  std::int64_t key(std::size_t k, double value) const {
    return static_cast<std::int64_t>(std::floor(value / cfg_.bucket_width + proj_[k].offset));
  }

  const CloneConfig& cfg_;
  const simd::Kernels& kernels_;
  std::vector<Projection> proj_;
  std::vector<std::size_t> order_;     // sorted position -> original index
  std::vector<std::size_t> position_;  // original index -> sorted position
  std::vector<std::int64_t> keys_;
  std::vector<std::vector<double>> proj_values_;
  std::vector<double> norms_;
  simd::VectorBlock sorted_;
};

}  // namespace

std::vector<ReuseEdge> find_clones(const std::vector<CloneInput>& functions, const CloneConfig& cfg) {
  validate(cfg);
  std::vector<std::size_t> pool;
  std::vector<const CharacteristicVector*> vectors;
  for (std::size_t i = 0; i < functions.size(); ++i) {
    if (!eligible(functions[i], cfg)) continue;
    pool.push_back(i);
    vectors.push_back(&functions[i].vector);
  }
  if (pool.empty()) return {};

  const LshIndex index(vectors, cfg);
  std::vector<std::vector<std::pair<std::size_t, double>>> matches(pool.size());
  parallel_for(pool.size(), cfg.threads, [&](std::size_t e) {
    const CloneInput& a = functions[pool[e]];
    for (std::size_t f : index.candidates(e)) {
      if (f <= e) continue;
      const CloneInput& b = functions[pool[f]];
      if (a.specimen_id == b.specimen_id) continue;
      const double s = similarity(a.vector, b.vector);
      if (s >= cfg.threshold) matches[e].emplace_back(f, s);
    }
  });

  // Ubiquity: specimens holding the function or a near copy of it.
  std::vector<std::set<std::string_view>> seen(pool.size());
  for (std::size_t e = 0; e < pool.size(); ++e) {
    for (const auto& [f, s] : matches[e]) {
      seen[e].insert(functions[pool[f]].specimen_id);
      seen[f].insert(functions[pool[e]].specimen_id);
    }
  }
  std::size_t specimens = cfg.corpus_specimens;
  if (specimens == 0) {
    std::set<std::string_view> ids;
    for (const auto& fn : functions) ids.insert(fn.specimen_id);
    specimens = ids.size();
  }
  std::vector<bool> ubiquitous(pool.size());
  for (std::size_t e = 0; e < pool.size(); ++e) {
    const std::size_t holders = seen[e].size() + 1;
    ubiquitous[e] = static_cast<double>(holders) > cfg.max_specimen_fraction * static_cast<double>(specimens) &&
                    holders > 2;
  }

  std::vector<ReuseEdge> edges;
  for (std::size_t e = 0; e < pool.size(); ++e) {
    if (ubiquitous[e]) continue;
    for (const auto& [f, s] : matches[e]) {
      if (ubiquitous[f]) continue;
      std::size_t src = pool[e], dst = pool[f];
      if (functions[dst].specimen_id < functions[src].specimen_id) std::swap(src, dst);
      const CloneInput& a = functions[src];
      const CloneInput& b = functions[dst];
      ReuseEdge edge;
      edge.src = src;
      edge.dst = dst;
      edge.src_specimen = a.specimen_id;
      edge.dst_specimen = b.specimen_id;
      edge.src_name = a.name;
      edge.dst_name = b.name;
      edge.src_file = a.file;
      edge.dst_file = b.file;
      edge.src_line = a.start_line;
      edge.dst_line = b.start_line;
      edge.similarity = s;
      edge.weight = std::min(a.vector.node_total, b.vector.node_total);
      edges.push_back(std::move(edge));
    }
  }
  sort_edges(edges);
  return edges;
}

}  // namespace codelineage::clones
