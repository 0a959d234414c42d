#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "codelineage/error.hpp"
#include "codelineage/scan.hpp"

namespace codelineage::scan {

double fisher_exact_two_sided(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  const std::uint64_t r1 = a + b, r2 = c + d, c1 = a + c;
  const std::uint64_t lo = c1 > r2 ? c1 - r2 : 0;
  const std::uint64_t hi = std::min(r1, c1);
  if (lo == hi) return 1.0;

  // Hypergeometric weights relative to the mode, via the pmf ratio
  // f(x+1)/f(x) = (r1-x)(c1-x) / ((x+1)(r2-c1+x+1)).
  const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
  auto ratio = [&](std::uint64_t x) {
    return (static_cast<double>(r1 - x) * static_cast<double>(c1 - x)) /
           (static_cast<double>(x + 1) * static_cast<double>(r2 - c1 + x + 1));
  };
  std::uint64_t mode = lo;
  while (mode < hi && ratio(mode) > 1.0) ++mode;
  std::vector<double> w(n);
  w[mode - lo] = 1.0;
  for (std::uint64_t x = mode; x < hi; ++x) w[x + 1 - lo] = w[x - lo] * ratio(x);
  for (std::uint64_t x = mode; x > lo; --x) w[x - 1 - lo] = w[x - lo] / ratio(x - 1);

  const double observed = w[a - lo] * (1.0 + 1e-7);
  // Sum small terms first.
  std::vector<double> sorted = w;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0, tail = 0.0;
  for (double v : sorted) {
    total += v;
    if (v <= observed) tail += v;
  }
  return std::clamp(tail / total, 0.0, 1.0);
}

EnrichmentResult enrichment_from_counts(int cwe_id, std::uint64_t derived_hits, std::uint64_t derived_total,
                                        std::uint64_t overall_hits, std::uint64_t overall_total) {
  if (derived_total == 0) throw Error(ErrorKind::EmptyDerivedSet, "derived set is empty");
  EnrichmentResult r;
  r.cwe_id = cwe_id;
  r.derived_hits = derived_hits;
  r.derived_total = derived_total;
  r.overall_hits = overall_hits;
  r.overall_total = overall_total;
  r.derived_rate = static_cast<double>(derived_hits) / static_cast<double>(derived_total);
  r.overall_rate = overall_total == 0 ? 0.0 : static_cast<double>(overall_hits) / static_cast<double>(overall_total);
  r.p_value = fisher_exact_two_sided(derived_hits, derived_total - derived_hits, overall_hits,
                                     overall_total - overall_hits);
  return r;
}

EnrichmentResult cwe_enrichment(const std::vector<std::string>& derived_ids, const Corpus& corpus,
                                const std::vector<CweFinding>& findings, int cwe_id) {
  if (derived_ids.empty()) throw Error(ErrorKind::EmptyDerivedSet, "derived set is empty");
  std::set<std::string> derived;
  for (const auto& id : derived_ids) {
    if (corpus.find(id) == nullptr)
      throw Error(ErrorKind::UnknownSpecimen, fmt::format("derived specimen '{}' is not in the corpus", id));
    derived.insert(id);
  }
  std::set<std::string> affected;
  for (const auto& f : findings)
    if (f.cwe_id == cwe_id && !f.specimen_id.empty()) affected.insert(f.specimen_id);
  std::uint64_t dh = 0, oh = 0, ot = 0;
  for (const auto& s : corpus.specimens) {
    const bool hit = affected.count(s.id) != 0;
    if (derived.count(s.id)) {
      dh += hit;
    } else {
      ++ot;
      oh += hit;
    }
  }
  return enrichment_from_counts(cwe_id, dh, derived.size(), oh, ot);
}

}  // namespace codelineage::scan
