#include "seqlab/elimination.hpp"

#include <algorithm>

#include "seqlab/errors.hpp"

namespace seqlab {

std::vector<Rational> smith_invariants(NMatrix m, const Rational& W) {
  for (auto& row : m)
    for (auto& x : row) {
      if (!x.is_zero() && *x.valuation() < 0) throw DomainError("negative valuation in ring elimination");
      x = x.truncated(W);
    }
  std::vector<Rational> out;
  std::vector<std::size_t> rows(m.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  std::vector<std::size_t> cols(m.empty() ? 0 : m.front().size());
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;

  while (!rows.empty() && !cols.empty()) {
    std::optional<Rational> best;
    std::size_t br = 0, bc = 0;
    for (std::size_t jc = 0; jc < cols.size(); ++jc)
      for (std::size_t ir = 0; ir < rows.size(); ++ir) {
        const auto& x = m[rows[ir]][cols[jc]];
        if (x.is_zero()) continue;
        if (!best || *x.valuation() < *best) {
          best = x.valuation();
          br = ir;
          bc = jc;
        }
      }
    if (!best) break;
    out.push_back(*best);
    const std::size_t r = rows[br], c = cols[bc];
    NovikovScalar inv = nov_invert(m[r][c], W);
    for (std::size_t ir = 0; ir < rows.size(); ++ir) {
      if (ir == br) continue;
      auto& row = m[rows[ir]];
      if (row[c].is_zero()) continue;
      NovikovScalar f = (row[c] * inv).truncated(W);
      for (std::size_t jc = 0; jc < cols.size(); ++jc) {
        std::size_t j = cols[jc];
        if (m[r][j].is_zero()) continue;
        row[j] = (row[j] - f * m[r][j]).truncated(W);
      }
      row[c] = NovikovScalar();
    }
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(br));
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(bc));
  }
  return out;
}

std::size_t field_rank(const NMatrix& m, const Rational& W) {
  std::optional<Rational> least;
  for (const auto& row : m)
    for (const auto& x : row)
      if (!x.is_zero() && (!least || *x.valuation() < *least)) least = x.valuation();
  if (!least) return 0;
  NMatrix shifted = m;
  for (auto& row : shifted)
    for (auto& x : row) x = x.uncapped().shifted(-*least);
  return smith_invariants(std::move(shifted), W).size();
}

std::vector<std::size_t> degree_basis(const FilteredComplex& c, int p) {
  auto idx = generators_in_degree(c, p);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return c.generators[a].name < c.generators[b].name; });
  return idx;
}

NMatrix degree_matrix(const FilteredComplex& c, int p) {
  auto cols = degree_basis(c, p);
  auto rows = degree_basis(c, p + 1);
  std::map<std::size_t, std::size_t> col_pos, row_pos;
  for (std::size_t i = 0; i < cols.size(); ++i) col_pos[cols[i]] = i;
  for (std::size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = i;
  NMatrix m(rows.size(), std::vector<NovikovScalar>(cols.size()));
  auto normalized = normalized_entries(c.generators, c.generators, c.differential);
  for (const auto& [key, s] : normalized) {
    if (!s.e_free()) throw Unsupported("differential terms with e-powers are not supported here");
    auto ci = col_pos.find(key.first);
    auto ri = row_pos.find(key.second);
    if (ci == col_pos.end() || ri == row_pos.end()) continue;
    m[ri->second][ci->second] = s.truncated(c.cap);
  }
  return m;
}

TruncatedHomology::TruncatedHomology(const FilteredComplex& c, const Rational& W, const Rational& step)
    : W_(W), step_(step) {
  for (int p : c.degrees()) {
    dims_[p] = generators_in_degree(c, p).size();
    auto m = degree_matrix(c, p);
    for (auto& row : m)
      for (auto& x : row) x = x.uncapped().truncated(W);
    inv_[p] = smith_invariants(std::move(m), W);
  }
}

const std::vector<Rational>& TruncatedHomology::invariants(int p) const {
  static const std::vector<Rational> none;
  auto it = inv_.find(p);
  return it == inv_.end() ? none : it->second;
}

std::size_t TruncatedHomology::lattice_count(const Rational& lo) const {
  Rational start = lo < 0 ? Rational(0) : lo;
  if (start >= W_) return 0;
  // Lattice points j*step in [start, W).
  Rational first = ceil_div(start / step_);
  Rational last = ceil_div(W_ / step_);  // exclusive
  return static_cast<std::size_t>(Integer(last - first).get_ui());
}

std::size_t TruncatedHomology::filtered_dim(int p, const Rational& t) const {
  auto it = dims_.find(p);
  if (it == dims_.end()) return 0;
  const std::size_t n = it->second;
  const auto& out = invariants(p);
  const auto& in = invariants(p - 1);
  std::size_t z = (n - out.size()) * lattice_count(t);
  for (const auto& b : out) z += lattice_count(std::max(t, Rational(W_ - b)));
  std::size_t bnd = 0;
  for (const auto& a : in) bnd += lattice_count(std::max(a, t));
  return z - bnd;
}

std::size_t TruncatedHomology::field_dim(int p) const {
  auto it = dims_.find(p);
  if (it == dims_.end()) return 0;
  return it->second - invariants(p).size() - invariants(p - 1).size();
}

std::map<int, std::size_t> field_homology(const FilteredComplex& c) {
  std::map<int, std::size_t> out;
  std::map<int, std::size_t> ranks;
  for (int p : c.degrees()) ranks[p] = field_rank(degree_matrix(c, p), c.cap);
  for (int p : c.degrees()) {
    std::size_t r_in = ranks.count(p - 1) ? ranks[p - 1] : 0;
    out[p] = generators_in_degree(c, p).size() - ranks[p] - r_in;
  }
  return out;
}

}  // namespace seqlab
