#include "seqlab/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "seqlab/elimination.hpp"
#include "seqlab/errors.hpp"

namespace seqlab {

std::optional<Rational> detect_gap(const FilteredComplex& c) {
  std::optional<Rational> best;
  for (const auto& o : realized_orders(c))
    if (o > 0 && (!best || o < *best)) best = o;
  return best;
}

FiltrationScheme default_scheme(const FilteredComplex& c) {
  auto gap = detect_gap(c);
  return FiltrationScheme{gap ? Rational(*gap / 2) : Rational(1)};
}

Rational lattice_step(const FilteredComplex& c, const std::vector<Rational>& extra) {
  Rational g = 0;
  for (const auto& [key, s] : normalized_entries(c.generators, c.generators, c.differential))
    for (const auto& t : s.terms()) g = rational_gcd(g, t.energy);
  for (const auto& x : extra) g = rational_gcd(g, x);
  return g == 0 ? Rational(1) : g;
}

std::size_t SpectralPage::rank(int p, int q) const {
  auto it = cells.find({p, q});
  return it == cells.end() ? 0 : it->second.size();
}

std::size_t SpectralPage::total_rank() const {
  std::size_t n = 0;
  for (const auto& [key, v] : cells) n += v.size();
  return n;
}

std::map<std::pair<int, int>, std::size_t> SpectralPage::parity_ranks() const {
  std::map<std::pair<int, int>, std::size_t> out;
  for (const auto& [key, v] : cells) out[{((key.first % 2) + 2) % 2, key.second}] += v.size();
  return out;
}

namespace {

using Column = std::map<std::size_t, Rational>;  // position -> coefficient

struct Pair {
  std::size_t birth;  // element index of the lower end (the pivot row)
  std::size_t death;  // element index of the reduced column
  int length;         // layer difference
  Rational coeff;
};

void validate(const FilteredComplex& c) {
  auto report = check_complex(c);
  if (!report.ok())
    throw NotAComplex(report.violations.front().kind + " violation " + report.violations.front().witness);
  for (const auto& [key, s] : c.differential)
    if (!s.e_free()) throw Unsupported("spectral pages need differentials without e-powers");
}

SpectralPage make_page(int r, const std::vector<PageElement>& elements, const std::vector<bool>& essential,
                       const std::vector<Pair>& pairs) {
  SpectralPage page;
  page.r = r;
  std::vector<bool> alive = essential;
  for (const auto& pr : pairs)
    if (pr.length + 1 >= r) {
      alive[pr.birth] = true;
      alive[pr.death] = true;
      if (pr.length + 1 == r) page.differential.push_back({pr.death, pr.birth, pr.coeff});
    }
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (alive[i]) page.cells[{elements[i].degree, elements[i].layer}].push_back(i);
  // Cells not hit still exist with rank zero only implicitly.
  return page;
}

}  // namespace

SpectralResult compute_pages(const FilteredComplex& c, const FiltrationScheme& scheme, std::optional<int> r_max) {
  validate(c);
  const Rational& l0 = scheme.lambda0;
  if (l0 <= 0) throw NotGapped("filtration step must be positive");
  auto gap = detect_gap(c);
  if (gap && l0 >= *gap)
    throw NotGapped("filtration step " + to_string(l0) + " is not below the gap " + to_string(*gap));
  int rmax = r_max ? *r_max : std::max(1, static_cast<int>(floor_div(c.cap / l0).get_si()));
  if (rmax < 1) throw std::invalid_argument("r_max must be at least 1");
  if (rmax * l0 > c.cap)
    throw CapTooSmall("pages up to " + std::to_string(rmax) + " need cap >= " + to_string(rmax * l0));

  SpectralResult out;
  out.scheme = scheme;
  out.step = lattice_step(c, {l0, c.cap});
  const Rational& h = out.step;
  const long steps = Integer(c.cap / h).get_si();
  out.layers = static_cast<int>(ceil_div(c.cap / l0).get_si());

  // Elements (g, j) laid out generator-major.
  std::vector<std::size_t> index_base(c.size());
  for (std::size_t g = 0; g < c.size(); ++g) {
    index_base[g] = out.elements.size();
    for (long j = 0; j < steps; ++j) {
      Rational e = h * j;
      out.elements.push_back(
          PageElement{g, c.generators[g].degree, static_cast<int>(floor_div(e / l0).get_si()), e});
    }
  }
  const std::size_t N = out.elements.size();

  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    const auto& el = out.elements[i];
    return std::tuple<int, int, const std::string&, const Rational&>(
        out.layers - 1 - el.layer, -el.degree, c.generators[el.generator].name, el.energy);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  std::vector<std::size_t> pos(N);
  for (std::size_t k = 0; k < N; ++k) pos[order[k]] = k;

  // Columns of delta in filtration order.
  std::vector<Column> cols(N);
  for (const auto& [key2, s] : normalized_entries(c.generators, c.generators, c.differential)) {
    for (const auto& t : s.terms()) {
      Rational shift = t.energy / h;
      long js = Integer(shift).get_si();
      for (long j = 0; j + js < steps; ++j) {
        std::size_t from = index_base[key2.first] + static_cast<std::size_t>(j);
        std::size_t to = index_base[key2.second] + static_cast<std::size_t>(j + js);
        cols[pos[from]][pos[to]] += t.coeff;
      }
    }
  }
  for (auto& col : cols)
    for (auto it = col.begin(); it != col.end();) it = it->second == 0 ? col.erase(it) : std::next(it);

  // Standard column reduction.
  std::vector<std::optional<std::size_t>> owner(N);  // low position -> column position
  std::vector<Pair> pairs;
  std::vector<bool> is_low(N, false);
  for (std::size_t j = 0; j < N; ++j) {
    auto& col = cols[j];
    while (!col.empty()) {
      std::size_t low = col.rbegin()->first;
      if (!owner[low]) break;
      const auto& other = cols[*owner[low]];
      Rational f = col.rbegin()->second / other.rbegin()->second;
      for (const auto& [row, v] : other) {
        auto& slot = col[row];
        slot -= f * v;
        if (slot == 0) col.erase(row);
      }
    }
    if (col.empty()) continue;
    std::size_t low = col.rbegin()->first;
    owner[low] = j;
    is_low[low] = true;
    std::size_t birth = order[low], death = order[j];
    pairs.push_back(Pair{birth, death, out.elements[birth].layer - out.elements[death].layer, col.rbegin()->second});
  }
  std::vector<bool> essential(N, false);
  for (std::size_t k = 0; k < N; ++k)
    if (cols[k].empty() && !is_low[k]) essential[order[k]] = true;

  int r0 = 1;
  for (const auto& pr : pairs) r0 = std::max(r0, pr.length + 2);
  out.stabilized_at = r0;
  for (int r = 1; r <= rmax; ++r) out.pages.push_back(make_page(r, out.elements, essential, pairs));
  out.limit = make_page(r0, out.elements, essential, {});
  out.limit.r = r0;
  return out;
}

int stabilization(const FilteredComplex& c, const SpectralResult& s) {
  if (s.stabilized_at > static_cast<int>(s.pages.size()))
    throw NotStabilized("pages keep changing up to E_" + std::to_string(s.stabilized_at) + ", computed only " +
                        std::to_string(s.pages.size()));
  TruncatedHomology th(c, c.cap, s.step);
  for (int p : c.degrees())
    for (int q = 0; q < s.layers; ++q) {
      std::size_t expect = th.filtered_dim(p, s.scheme.lambda0 * q) - th.filtered_dim(p, s.scheme.lambda0 * (q + 1));
      if (s.limit.rank(p, q) != expect)
        throw std::logic_error("limit page disagrees with filtered homology at (" + std::to_string(p) + ", " +
                               std::to_string(q) + ")");
    }
  return s.stabilized_at;
}

InjectionReport injection_check(const SpectralResult& s, int p, int q, int r) {
  InjectionReport rep;
  if (r < 1 || r >= static_cast<int>(s.pages.size())) throw std::out_of_range("page index outside computed range");
  rep.applicable = q - r + 2 <= 0;
  const auto& here = s.pages[static_cast<std::size_t>(r - 1)];
  const auto& next = s.pages[static_cast<std::size_t>(r)];
  rep.rank_here = here.rank(p, q);
  rep.rank_next = next.rank(p, q);
  if (!rep.applicable) return rep;
  // The map is induced by inclusion of cycles; it is injective iff no
  // arrow of the current page lands in (p, q).
  for (const auto& a : here.differential) {
    const auto& to = s.elements[a.to];
    if (to.degree == p && to.layer == q) rep.injective = false;
  }
  if (rep.rank_next > rep.rank_here) rep.injective = false;
  return rep;
}

std::map<int, std::size_t> residue_homology(const FilteredComplex& c) {
  std::map<int, std::size_t> out;
  std::map<int, std::size_t> ranks;
  for (int p : c.degrees()) ranks[p] = rank(residue_matrix(c, p));
  for (int p : c.degrees()) {
    std::size_t in = ranks.count(p - 1) ? ranks[p - 1] : 0;
    out[p] = generators_in_degree(c, p).size() - ranks[p] - in;
  }
  return out;
}

bool vanishing_criterion(const FilteredComplex& c) {
  auto report = check_complex(c);
  if (!report.ok())
    throw NotAComplex(report.violations.front().kind + " violation " + report.violations.front().witness);
  auto hbar = residue_homology(c);
  bool acyclic = std::all_of(hbar.begin(), hbar.end(), [](const auto& kv) { return kv.second == 0; });
  if (!acyclic) return false;
  for (const auto& [p, dim] : field_homology(c))
    if (dim != 0) throw std::logic_error("residue complex acyclic but field elimination finds homology");
  TruncatedHomology th(c, c.cap, lattice_step(c, {c.cap}));
  for (int p : c.degrees())
    if (th.total_dim(p) != 0) throw std::logic_error("residue complex acyclic but truncated homology is nonzero");
  return true;
}

}  // namespace seqlab
