#include "seqlab/filtered_complex.hpp"

#include <algorithm>
#include <stdexcept>

#include "seqlab/errors.hpp"

namespace seqlab {

bool operator==(const Generator& a, const Generator& b) {
  return a.name == b.name && a.degree == b.degree && a.level == b.level;
}

std::optional<std::size_t> FilteredComplex::find(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == name) return i;
  return std::nullopt;
}

std::size_t FilteredComplex::index_of(const std::string& name) const {
  auto i = find(name);
  if (!i) throw std::out_of_range("unknown generator '" + name + "'");
  return *i;
}

namespace {

void add_to(SparseMatrix& m, std::size_t src, std::size_t dst, const NovikovScalar& s) {
  auto key = std::make_pair(src, dst);
  auto it = m.find(key);
  if (it == m.end()) {
    if (!s.is_zero()) m.emplace(key, s);
    return;
  }
  it->second += s;
  if (it->second.is_zero()) m.erase(it);
}

std::string entry_name(const std::vector<Generator>& src, const std::vector<Generator>& dst, std::size_t s,
                       std::size_t t) {
  return "(" + src[s].name + " -> " + dst[t].name + ")";
}

}  // namespace

void FilteredComplex::add_entry(std::size_t src, std::size_t dst, const NovikovScalar& s) {
  add_to(differential, src, dst, s);
}

std::set<int> FilteredComplex::degrees() const {
  std::set<int> out;
  for (const auto& g : generators) out.insert(g.degree);
  return out;
}

void FilteredMap::add_entry(std::size_t src, std::size_t dst, const NovikovScalar& s) {
  add_to(matrix, src, dst, s);
}

FilteredMap differential_map(const FilteredComplex& c) {
  return FilteredMap{c.generators, c.generators, c.differential, 1};
}

Rational effective_order(const Generator& src, const Generator& dst, const Term& t) {
  return t.energy + dst.level - src.level;
}

SparseMatrix normalized_entries(const std::vector<Generator>& source, const std::vector<Generator>& target,
                                const SparseMatrix& m) {
  SparseMatrix out;
  for (const auto& [key, s] : m) out.emplace(key, s.shifted(target[key.second].level - source[key.first].level));
  return out;
}

SparseMatrix compose_normalized(const FilteredMap& g, const FilteredMap& f, const std::optional<Rational>& cap) {
  auto nf = normalized_entries(f.source, f.target, f.matrix);
  auto ng = normalized_entries(g.source, g.target, g.matrix);
  // Index g by source for the inner sum.
  std::map<std::size_t, std::vector<std::pair<std::size_t, const NovikovScalar*>>> g_by_src;
  for (const auto& [key, s] : ng) g_by_src[key.first].emplace_back(key.second, &s);
  SparseMatrix out;
  for (const auto& [key, s] : nf) {
    auto it = g_by_src.find(key.second);
    if (it == g_by_src.end()) continue;
    for (const auto& [dst, gs] : it->second) {
      NovikovScalar prod = cap ? (*gs * s).truncated(*cap) : *gs * s;
      add_to(out, key.first, dst, prod);
    }
  }
  if (cap)
    for (auto& [key, s] : out) s = s.truncated(*cap);
  return out;
}

CheckReport check_complex(const FilteredComplex& c) {
  CheckReport report;
  std::set<std::string> names;
  for (const auto& g : c.generators)
    if (!names.insert(g.name).second) report.violations.push_back({"names", "duplicate generator " + g.name});

  for (const auto& [key, s] : c.differential) {
    const auto& src = c.generators.at(key.first);
    const auto& dst = c.generators.at(key.second);
    for (const auto& t : s.terms()) {
      if (dst.degree + t.e2 != src.degree + 1)
        report.violations.push_back({"degree", entry_name(c.generators, c.generators, key.first, key.second) +
                                                   " term " + NovikovScalar({t}).to_text()});
      if (effective_order(src, dst, t) < 0)
        report.violations.push_back({"filtration", entry_name(c.generators, c.generators, key.first, key.second) +
                                                       " order " + to_string(effective_order(src, dst, t))});
    }
  }

  auto d = differential_map(c);
  auto sq = compose_normalized(d, d, c.cap);
  for (const auto& [key, s] : sq)
    report.violations.push_back(
        {"square", entry_name(c.generators, c.generators, key.first, key.second) + " = " + s.to_text()});
  return report;
}

FilteredComplex leading_part(const FilteredComplex& c) {
  FilteredComplex out{c.generators, {}, c.cap};
  for (const auto& [key, s] : c.differential) {
    std::vector<Term> keep;
    for (const auto& t : s.terms())
      if (effective_order(c.generators[key.first], c.generators[key.second], t) == 0) keep.push_back(t);
    if (!keep.empty()) out.add_entry(key.first, key.second, NovikovScalar(keep));
  }
  return out;
}

std::vector<std::size_t> generators_in_degree(const FilteredComplex& c, int p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c.generators.size(); ++i)
    if (c.generators[i].degree == p) out.push_back(i);
  return out;
}

QMatrix residue_matrix(const FilteredComplex& c, int p) {
  auto cols = generators_in_degree(c, p);
  auto rows = generators_in_degree(c, p + 1);
  std::map<std::size_t, std::size_t> col_pos, row_pos;
  for (std::size_t i = 0; i < cols.size(); ++i) col_pos[cols[i]] = i;
  for (std::size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = i;
  QMatrix m = zero_matrix(rows.size(), cols.size());
  for (const auto& [key, s] : c.differential) {
    const auto& src = c.generators[key.first];
    const auto& dst = c.generators[key.second];
    for (const auto& t : s.terms()) {
      if (effective_order(src, dst, t) != 0) continue;
      if (t.e2 != 0) throw Unsupported("order-zero term with an e-power at " + src.name + " -> " + dst.name);
      if (src.degree == p && dst.degree == p + 1) m[row_pos.at(key.second)][col_pos.at(key.first)] += t.coeff;
    }
  }
  return m;
}

bool OrderInterval::contains(const Rational& x) const {
  if (lo_closed ? x < lo : x <= lo) return false;
  if (hi && (hi_closed ? x > *hi : x >= *hi)) return false;
  return true;
}

std::set<Rational> realized_orders(const FilteredComplex& c) {
  std::set<Rational> out;
  for (const auto& [key, s] : c.differential)
    for (const auto& t : s.terms()) out.insert(effective_order(c.generators[key.first], c.generators[key.second], t));
  return out;
}

bool gap_check(const FilteredComplex& c, const OrderInterval& interval) {
  for (const auto& r : realized_orders(c))
    if (interval.contains(r)) return false;
  return true;
}

std::optional<Rational> map_order_or_inf(const FilteredMap& f) {
  std::optional<Rational> best;
  for (const auto& [key, s] : f.matrix)
    for (const auto& t : s.terms()) {
      Rational o = effective_order(f.source[key.first], f.target[key.second], t);
      if (!best || o < *best) best = o;
    }
  return best;
}

Rational map_order(const FilteredMap& f) {
  auto o = map_order_or_inf(f);
  if (!o) throw ZeroMap("order of the zero map is +infinity");
  return *o;
}

SplitMap split_by_threshold(const FilteredMap& f, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("split threshold must be positive");
  SplitMap out{{f.source, f.target, {}, f.degree}, {f.source, f.target, {}, f.degree}};
  for (const auto& [key, s] : f.matrix) {
    std::vector<Term> low, high;
    for (const auto& t : s.terms())
      (effective_order(f.source[key.first], f.target[key.second], t) < eps ? low : high).push_back(t);
    if (!low.empty()) out.low.add_entry(key.first, key.second, NovikovScalar(low, s.cap()));
    if (!high.empty()) out.high.add_entry(key.first, key.second, NovikovScalar(high, s.cap()));
  }
  return out;
}

FilteredMap compose(const FilteredMap& g, const FilteredMap& f) {
  FilteredMap out{f.source, g.target, {}, f.degree + g.degree};
  std::map<std::size_t, std::vector<std::pair<std::size_t, const NovikovScalar*>>> g_by_src;
  for (const auto& [key, s] : g.matrix) g_by_src[key.first].emplace_back(key.second, &s);
  for (const auto& [key, s] : f.matrix) {
    auto it = g_by_src.find(key.second);
    if (it == g_by_src.end()) continue;
    for (const auto& [dst, gs] : it->second) out.add_entry(key.first, dst, *gs * s);
  }
  return out;
}

FilteredMap add_maps(const FilteredMap& a, const FilteredMap& b) {
  FilteredMap out = a;
  for (const auto& [key, s] : b.matrix) out.add_entry(key.first, key.second, s);
  return out;
}

FilteredMap scale_map(const FilteredMap& f, const NovikovScalar& unit) {
  FilteredMap out{f.source, f.target, {}, f.degree};
  for (const auto& [key, s] : f.matrix) out.add_entry(key.first, key.second, unit * s);
  return out;
}

AnchoredBasis normalize_anchored(const AnchoredGeneratorSet& gens) {
  std::map<std::string, const Decoration*> first;
  for (const auto& d : gens.decorations) {
    auto [it, fresh] = first.emplace(d.point, &d);
    if (fresh) continue;
    const Decoration& ref = *it->second;
    PiGroupElement diff{d.action - ref.action, d.maslov - ref.maslov};
    if ((d.maslov - ref.maslov) % 2 != 0)
      throw InconsistentEquivalence("decorations of " + d.point + " differ by an odd index shift");
    if (!gens.pi.contains(diff))
      throw InconsistentEquivalence("decorations of " + d.point + " differ by (" + to_string(diff.energy) + ", " +
                                    std::to_string(diff.maslov) + "), not a deck transformation");
  }
  AnchoredBasis out;
  std::map<std::string, std::size_t> index;
  for (const auto& [name, dec] : first) {
    int deg = ((dec->maslov % 2) + 2) % 2;
    index[name] = out.basis.generators.size();
    out.basis.generators.push_back(Generator{name, deg, 0});
  }
  for (const auto& d : gens.decorations) {
    std::size_t i = index.at(d.point);
    out.generator_of.push_back(i);
    out.embedding.push_back(NovikovScalar::monomial(1, d.action, d.maslov - out.basis.generators[i].degree));
  }
  return out;
}

}  // namespace seqlab
