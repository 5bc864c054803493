#pragma once

// Reference computations written independently of the library internals.
// They only read the public data structures.

#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "seqlab/filtered_complex.hpp"

namespace oracle {

using seqlab::Rational;
using Mat = std::vector<std::vector<Rational>>;

inline std::size_t rank(Mat m) {
  std::size_t r = 0;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

inline Rational order_of(const seqlab::Generator& s, const seqlab::Generator& t, const seqlab::Term& term) {
  return term.energy + t.level - s.level;
}

/// Q-ranks of the homology of the order-zero part, per degree.
inline std::map<int, std::size_t> residue_homology(const seqlab::FilteredComplex& c) {
  std::set<int> degs;
  for (const auto& g : c.generators) degs.insert(g.degree);
  auto block = [&](int p) {
    std::vector<std::size_t> src, dst;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.generators[i].degree == p) src.push_back(i);
      if (c.generators[i].degree == p + 1) dst.push_back(i);
    }
    Mat m(dst.size(), std::vector<Rational>(src.size()));
    for (std::size_t a = 0; a < dst.size(); ++a)
      for (std::size_t b = 0; b < src.size(); ++b) {
        auto it = c.differential.find({src[b], dst[a]});
        if (it == c.differential.end()) continue;
        for (const auto& t : it->second.terms())
          if (order_of(c.generators[src[b]], c.generators[dst[a]], t) == 0) m[a][b] += t.coeff;
      }
    return rank(m);
  };
  std::map<int, std::size_t> out;
  for (int p : degs) {
    std::size_t n = 0;
    for (const auto& g : c.generators) n += g.degree == p;
    out[p] = n - block(p) - block(p - 1);
  }
  return out;
}

/// The finite Q-space C / T^cap spanned by g T^{j step}, with its differential.
struct TruncatedSpace {
  std::vector<int> degree;
  std::vector<Rational> energy;
  Mat d;  // d[target][source]
};

inline TruncatedSpace truncated_space(const seqlab::FilteredComplex& c, const Rational& step) {
  TruncatedSpace v;
  Rational steps_q = c.cap / step;
  if (steps_q.get_den() != 1) throw std::logic_error("step must divide the cap");
  const long steps = steps_q.get_num().get_si();
  for (std::size_t g = 0; g < c.size(); ++g)
    for (long j = 0; j < steps; ++j) {
      v.degree.push_back(c.generators[g].degree);
      v.energy.push_back(step * j);
    }
  const std::size_t n = v.degree.size();
  v.d.assign(n, std::vector<Rational>(n));
  for (const auto& [key, s] : c.differential)
    for (const auto& t : s.terms()) {
      Rational e = order_of(c.generators[key.first], c.generators[key.second], t);
      Rational shift_q = e / step;
      if (shift_q.get_den() != 1) throw std::logic_error("step must divide every energy");
      long shift = shift_q.get_num().get_si();
      for (long j = 0; j + shift < steps; ++j)
        v.d[key.second * static_cast<std::size_t>(steps) + static_cast<std::size_t>(j + shift)]
           [key.first * static_cast<std::size_t>(steps) + static_cast<std::size_t>(j)] += t.coeff;
    }
  return v;
}

inline std::vector<std::size_t> concat_rows(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// dim of the image of H^p(F^t V) in H^p(V).
inline std::size_t filtered_homology_dim(const TruncatedSpace& v, int p, const Rational& t) {
  const std::size_t n = v.degree.size();
  std::vector<std::size_t> here_in, prev, next_all, here_out;
  for (std::size_t i = 0; i < n; ++i) {
    if (v.degree[i] == p && v.energy[i] >= t) here_in.push_back(i);
    if (v.degree[i] == p && v.energy[i] < t) here_out.push_back(i);
    if (v.degree[i] == p - 1) prev.push_back(i);
    if (v.degree[i] == p + 1) next_all.push_back(i);
  }
  auto sub = [&](const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    Mat m(rows.size(), std::vector<Rational>(cols.size()));
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) m[a][b] = v.d[rows[a]][cols[b]];
    return m;
  };
  // Z cap F^t: kernel of d on the filtered coordinates.
  std::size_t z = here_in.size() - rank(sub(next_all, here_in));
  // B cap F^t: image of d from degree p-1 whose components below t vanish.
  std::size_t b = rank(sub(concat_rows(here_in, here_out), prev)) - rank(sub(here_out, prev));
  return z - b;
}

/// Ranks of H^p over the Novikov field. Once the cap exceeds every torsion
/// energy, dim H^p(C / T^W) grows by exactly the free rank per lattice step.
inline std::map<int, std::size_t> field_homology_by_growth(const seqlab::FilteredComplex& c, const Rational& step) {
  seqlab::FilteredComplex lower = c;
  lower.cap = c.cap - step;
  auto top = truncated_space(c, step), below = truncated_space(lower, step);
  std::map<int, std::size_t> out;
  for (const auto& g : c.generators)
    out[g.degree] = filtered_homology_dim(top, g.degree, 0) - filtered_homology_dim(below, g.degree, 0);
  return out;
}

/// Doubled Robbin-Salamon index of t -> diag(e^{i theta_k(t)}) R^n relative to R^n,
/// for linear angle paths, by counting crossings theta_k in pi Z.
inline int rotation_rs_doubled(const std::vector<double>& start, const std::vector<double>& end) {
  int total = 0;
  const double pi = 3.14159265358979323846;
  for (std::size_t k = 0; k < start.size(); ++k) {
    double a = start[k] / pi, b = end[k] / pi;
    if (a == b) continue;
    int sign = b > a ? 1 : -1;
    double lo = std::min(a, b), hi = std::max(a, b);
    for (long m = static_cast<long>(std::ceil(lo - 1e-12)); m <= static_cast<long>(std::floor(hi + 1e-12)); ++m) {
      bool at_end = std::abs(m - lo) < 1e-9 || std::abs(m - hi) < 1e-9;
      total += sign * (at_end ? 1 : 2);
    }
  }
  return total;
}

}  // namespace oracle
