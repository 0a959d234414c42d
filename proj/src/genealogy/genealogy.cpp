#include "codelineage/genealogy.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "codelineage/error.hpp"

namespace codelineage::genealogy {

const Node* Genealogy::find(std::string_view id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id, [](const Node& n, std::string_view v) { return n.id < v; });
  return it != nodes.end() && it->id == id ? &*it : nullptr;
}

std::uint64_t Genealogy::total_weight() const {
  std::uint64_t sum = 0;
  for (const auto& e : edges) sum += e.weight;
  return sum;
}

Orientation orient(const Date& date_a, std::string_view id_a, const Date& date_b, std::string_view id_b) {
  if (date_a != date_b) return {date_b < date_a, false};
  return {id_b < id_a, true};
}

void orient_edges(std::vector<clones::ReuseEdge>& edges, const Corpus& corpus) {
  for (auto& e : edges) {
    const Specimen* a = corpus.find(e.src_specimen);
    const Specimen* b = corpus.find(e.dst_specimen);
    if (a == nullptr || b == nullptr)
      throw Error(ErrorKind::UnknownSpecimen,
                  fmt::format("reuse edge {} -> {} names a specimen outside the corpus", e.src_specimen, e.dst_specimen));
    const Orientation o = orient(a->date, a->id, b->date, b->id);
    if (o.swapped) {
      std::swap(e.src, e.dst);
      std::swap(e.src_specimen, e.dst_specimen);
      std::swap(e.src_name, e.dst_name);
      std::swap(e.src_file, e.dst_file);
      std::swap(e.src_line, e.dst_line);
    }
    e.ambiguous_direction = o.ambiguous;
  }
  clones::sort_edges(edges);
}

std::vector<SpecimenEdge> aggregate_to_specimens(const std::vector<clones::ReuseEdge>& edges, const FunctionTags* tags) {
  std::map<std::pair<std::string, std::string>, SpecimenEdge> grouped;
  auto tags_of = [&](std::size_t fn) -> std::vector<std::string> {
    if (tags == nullptr || fn >= tags->size()) return {};
    return (*tags)[fn];
  };
  for (const auto& e : edges) {
    auto& se = grouped[{e.src_specimen, e.dst_specimen}];
    se.src_id = e.src_specimen;
    se.dst_id = e.dst_specimen;
    se.weight += e.weight;
    se.ambiguous_direction = se.ambiguous_direction || e.ambiguous_direction;
    se.function_pairs.push_back({e.src_name, e.src_file, e.src_line, e.dst_name, e.dst_file, e.dst_line, e.similarity,
                                 e.weight, tags_of(e.src), tags_of(e.dst)});
  }
  std::vector<SpecimenEdge> out;
  out.reserve(grouped.size());
  for (auto& [key, se] : grouped) {
    std::sort(se.function_pairs.begin(), se.function_pairs.end(), [](const FunctionPair& a, const FunctionPair& b) {
      return std::tie(a.src_fn, a.dst_fn, a.src_file, a.src_line, a.dst_file, a.dst_line) <
             std::tie(b.src_fn, b.dst_fn, b.src_file, b.src_line, b.dst_file, b.dst_line);
    });
    out.push_back(std::move(se));
  }
  return out;
}

Genealogy build_genealogy(const Corpus& corpus, std::vector<SpecimenEdge> edges) {
  Genealogy g;
  g.nodes.reserve(corpus.size());
  for (const auto& s : corpus.specimens) g.nodes.push_back({s.id, s.name, s.date, s.labels});
  for (const auto& e : edges) {
    if (g.find(e.src_id) == nullptr || g.find(e.dst_id) == nullptr)
      throw Error(ErrorKind::UnknownSpecimen, fmt::format("edge {} -> {} names an unknown specimen", e.src_id, e.dst_id));
  }
  std::sort(edges.begin(), edges.end(),
            [](const SpecimenEdge& a, const SpecimenEdge& b) { return std::tie(a.src_id, a.dst_id) < std::tie(b.src_id, b.dst_id); });
  g.edges = std::move(edges);
  return g;
}

std::optional<std::vector<std::string>> topological_order(const Genealogy& g) {
  std::map<std::string_view, std::size_t> indegree;
  std::map<std::string_view, std::vector<std::string_view>> out_edges;
  for (const auto& n : g.nodes) indegree[n.id] = 0;
  for (const auto& e : g.edges) {
    ++indegree[e.dst_id];
    indegree.try_emplace(e.src_id, 0);
    out_edges[e.src_id].push_back(e.dst_id);
  }
  std::priority_queue<std::string_view, std::vector<std::string_view>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree)
    if (deg == 0) ready.push(id);
  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::string_view id = ready.top();
    ready.pop();
    order.emplace_back(id);
    for (auto next : out_edges[id])
      if (--indegree[next] == 0) ready.push(next);
  }
  if (order.size() != indegree.size()) return std::nullopt;
  return order;
}

std::vector<std::string> category_values(const Node& node, LabelSlot slot) {
  const auto& v = node.labels.get(slot);
  if (!v || v->empty()) return {std::string(kUnresolved)};
  std::vector<std::string> out(*v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CategoryView build_category_view(const Genealogy& g, LabelSlot slot) {
  CategoryView view;
  view.slot = slot;
  std::set<std::string> cats;
  std::set<int> years;
  for (const auto& n : g.nodes) {
    for (auto& v : category_values(n, slot)) cats.insert(std::move(v));
    years.insert(n.date.year);
  }
  view.categories.assign(cats.begin(), cats.end());
  view.years.assign(years.begin(), years.end());
  const std::size_t k = view.categories.size();
  auto index = [&](const std::string& v) {
    return static_cast<std::size_t>(std::lower_bound(view.categories.begin(), view.categories.end(), v) -
                                    view.categories.begin());
  };
  view.specimens_per_year.assign(k, {});
  view.specimen_totals.assign(k, 0);
  view.matrix.assign(k, std::vector<std::uint64_t>(k, 0));
  for (const auto& n : g.nodes) {
    for (const auto& v : category_values(n, slot)) {
      const std::size_t c = index(v);
      ++view.specimens_per_year[c][n.date.year];
      ++view.specimen_totals[c];
    }
  }
  for (const auto& e : g.edges) {
    const auto src = category_values(*g.find(e.src_id), slot);
    const auto dst = category_values(*g.find(e.dst_id), slot);
    for (const auto& s : src)
      for (const auto& d : dst) view.matrix[index(s)][index(d)] += e.weight;
  }
  return view;
}

CategoryView build_category_view(const Genealogy& g, std::string_view slot_name) {
  return build_category_view(g, require_label_slot(slot_name));
}

namespace {

struct Arc {
  std::string_view to;
  std::uint64_t weight;
};

std::vector<LineageEntry> walk(const std::map<std::string_view, std::vector<Arc>>& adj, std::string_view focus,
                               int max_depth) {
  auto arcs = [&](std::string_view id) -> const std::vector<Arc>& {
    static const std::vector<Arc> kNone;
    auto it = adj.find(id);
    return it == adj.end() ? kNone : it->second;
  };
  // Fewest hops.
  std::map<std::string_view, int> depth{{focus, 0}};
  std::vector<std::string_view> frontier{focus};
  for (int d = 1; d <= max_depth && !frontier.empty(); ++d) {
    std::vector<std::string_view> next;
    for (auto u : frontier)
      for (const auto& a : arcs(u))
        if (depth.emplace(a.to, d).second) next.push_back(a.to);
    frontier = std::move(next);
  }
  // Bottleneck over paths of exactly k hops, maximized over k <= max_depth.
  constexpr auto kInf = std::numeric_limits<std::uint64_t>::max();
  std::map<std::string_view, std::uint64_t> layer{{focus, kInf}}, best;
  for (int k = 1; k <= max_depth && !layer.empty(); ++k) {
    std::map<std::string_view, std::uint64_t> next;
    for (const auto& [u, w] : layer) {
      for (const auto& a : arcs(u)) {
        const std::uint64_t b = std::min(w, a.weight);
        auto [it, fresh] = next.emplace(a.to, b);
        if (!fresh) it->second = std::max(it->second, b);
      }
    }
    for (const auto& [v, w] : next) {
      auto [it, fresh] = best.emplace(v, w);
      if (!fresh) it->second = std::max(it->second, w);
    }
    layer = std::move(next);
  }
  std::vector<LineageEntry> out;
  for (const auto& [id, d] : depth) {
    if (d == 0) continue;
    LineageEntry e{std::string(id), d, best.at(id), std::nullopt};
    if (d == 1) {
      for (const auto& a : arcs(focus))
        if (a.to == id) e.direct_weight = a.weight;
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const LineageEntry& a, const LineageEntry& b) {
    if (a.depth != b.depth) return a.depth < b.depth;
    const auto wa = a.direct_weight.value_or(a.path_weight), wb = b.direct_weight.value_or(b.path_weight);
    if (wa != wb) return wa > wb;
    return a.id < b.id;
  });
  return out;
}

}  // namespace

LineageView lineage_of(const Genealogy& g, std::string_view focus_id, int max_depth) {
  if (g.find(focus_id) == nullptr)
    throw Error(ErrorKind::UnknownSpecimen, fmt::format("unknown specimen '{}'", focus_id));
  if (max_depth < 0) throw Error(ErrorKind::Config, fmt::format("lineage depth {} is negative", max_depth));
  std::map<std::string_view, std::vector<Arc>> up, down;
  for (const auto& e : g.edges) {
    down[e.src_id].push_back({e.dst_id, e.weight});
    up[e.dst_id].push_back({e.src_id, e.weight});
  }
  LineageView view;
  view.focus_id = std::string(focus_id);
  view.max_depth = max_depth;
  view.ancestors = walk(up, focus_id, max_depth);
  view.descendants = walk(down, focus_id, max_depth);
  for (const auto& e : g.edges) {
    if (e.src_id != focus_id && e.dst_id != focus_id) continue;
    for (const auto& p : e.function_pairs) view.function_detail.push_back({e.src_id, e.dst_id, p});
  }
  return view;
}

}  // namespace codelineage::genealogy
