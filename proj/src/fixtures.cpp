#include "seqlab/fixtures.hpp"

#include <random>

#include "seqlab/errors.hpp"

namespace seqlab {

namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Rational half(int k) {
  Rational r(k, 2);
  r.canonicalize();
  return r;
}

// Nonzero small rational; mostly integers.
Rational coefficient(Rng& rng) {
  int num = uniform(rng, 1, 3) * (coin(rng, 0.5) ? 1 : -1);
  return coin(rng, 0.25) ? half(num) : Rational(num);
}

NovikovScalar mono(const Rational& c, const Rational& e) { return NovikovScalar::monomial(c, e); }

void add_to(SparseMatrix& m, std::size_t s, std::size_t t, const NovikovScalar& v) {
  auto it = m.find({s, t});
  if (it == m.end()) {
    if (!v.is_zero()) m.emplace(std::make_pair(s, t), v);
    return;
  }
  it->second += v;
  if (it->second.is_zero()) m.erase(it);
}

// g o f for level-free matrices; every product truncated at `cap`.
SparseMatrix mul(const SparseMatrix& g, const SparseMatrix& f, const Rational& cap) {
  std::multimap<std::size_t, std::pair<std::size_t, const NovikovScalar*>> by_src;
  for (const auto& [key, s] : g) by_src.emplace(key.first, std::make_pair(key.second, &s));
  SparseMatrix out;
  for (const auto& [key, fs] : f) {
    auto [lo, hi] = by_src.equal_range(key.second);
    for (auto it = lo; it != hi; ++it)
      add_to(out, key.first, it->second.first, (*it->second.second * fs).truncated(cap).uncapped());
  }
  return out;
}

SparseMatrix plus(SparseMatrix a, const SparseMatrix& b, const Rational& sign = 1) {
  for (const auto& [key, s] : b) add_to(a, key.first, key.second, s.scaled(sign));
  return a;
}

SparseMatrix identity(std::size_t n) {
  SparseMatrix id;
  for (std::size_t i = 0; i < n; ++i) id[{i, i}] = NovikovScalar::constant(1);
  return id;
}

// (I + N)^{-1} for N of positive order.
SparseMatrix unipotent_inverse(const SparseMatrix& n, std::size_t dim, const Rational& cap) {
  SparseMatrix minus_n = plus({}, n, -1);
  SparseMatrix sum = identity(dim), power = identity(dim);
  while (true) {
    power = mul(minus_n, power, cap);
    if (power.empty()) return sum;
    sum = plus(sum, power);
  }
}

// Level-free entries to entries between generators with levels.
SparseMatrix with_levels(const SparseMatrix& m, const std::vector<Generator>& src, const std::vector<Generator>& dst) {
  SparseMatrix out;
  for (const auto& [key, s] : m) add_to(out, key.first, key.second, s.shifted(src[key.first].level - dst[key.second].level));
  return out;
}

SparseMatrix truncate(const SparseMatrix& m, const Rational& cap) {
  SparseMatrix out;
  for (const auto& [key, s] : m) add_to(out, key.first, key.second, s.truncated(cap).uncapped());
  return out;
}

// Random degree-preserving N with orders drawn from `orders`.
SparseMatrix random_nilpotent(Rng& rng, const std::vector<Generator>& gens, const std::vector<Rational>& orders,
                              double density) {
  SparseMatrix n;
  for (std::size_t s = 0; s < gens.size(); ++s)
    for (std::size_t t = 0; t < gens.size(); ++t)
      if (s != t && gens[s].degree == gens[t].degree && coin(rng, density))
        add_to(n, s, t, mono(coefficient(rng), orders[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(orders.size()) - 1))]));
  return n;
}

// Pairs generators of degree p with generators of degree p + 1.
SparseMatrix random_pairing(Rng& rng, const std::vector<Generator>& gens, const std::vector<Rational>& energies,
                            double pair_prob, std::vector<bool>* isolated = nullptr) {
  SparseMatrix d;
  std::vector<bool> used(gens.size(), false);
  for (std::size_t s = 0; s < gens.size(); ++s) {
    if (used[s] || !coin(rng, pair_prob)) continue;
    for (std::size_t t = 0; t < gens.size(); ++t)
      if (!used[t] && t != s && gens[t].degree == gens[s].degree + 1) {
        used[s] = used[t] = true;
        Rational e = energies[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(energies.size()) - 1))];
        add_to(d, s, t, mono(coefficient(rng), e));
        break;
      }
  }
  if (isolated) {
    isolated->assign(gens.size(), false);
    for (std::size_t i = 0; i < gens.size(); ++i) (*isolated)[i] = !used[i];
  }
  return d;
}

FilteredComplex conjugated(Rng& rng, std::vector<Generator> gens, SparseMatrix d, const Rational& cap) {
  SparseMatrix n = random_nilpotent(rng, gens, {half(1), half(2), half(3)}, 0.25);
  SparseMatrix p = plus(identity(gens.size()), n);
  SparseMatrix pinv = unipotent_inverse(n, gens.size(), cap);
  SparseMatrix delta = mul(p, mul(d, pinv, cap), cap);
  FilteredComplex c;
  c.generators = std::move(gens);
  c.cap = cap;
  c.differential = with_levels(delta, c.generators, c.generators);
  return c;
}

}  // namespace

FilteredComplex random_gapped_complex(std::uint64_t seed, int max_generators) {
  Rng rng(seed);
  int count = uniform(rng, std::min(4, max_generators), max_generators);
  std::vector<Generator> gens;
  for (int i = 0; i < count; ++i)
    gens.push_back({"g" + std::to_string(i), uniform(rng, 0, 2), half(uniform(rng, 0, 4))});
  SparseMatrix d = random_pairing(rng, gens, {0, 0, half(1), half(2), half(3), half(4)}, 0.7);
  // Bars reach energy 2; a cap of 4 keeps two filtration steps of room above
  // them, so the pages settle within cap / lambda0.
  return conjugated(rng, std::move(gens), std::move(d), 4);
}

FilteredComplex random_perturbed_acyclic(std::uint64_t seed, int max_generators) {
  Rng rng(seed);
  int pairs = uniform(rng, 1, std::max(1, max_generators / 2));
  std::vector<Generator> gens;
  SparseMatrix d;
  for (int i = 0; i < pairs; ++i) {
    int p = uniform(rng, 0, 1);
    std::size_t s = gens.size();
    gens.push_back({"x" + std::to_string(i), p, half(uniform(rng, 0, 4))});
    gens.push_back({"y" + std::to_string(i), p + 1, half(uniform(rng, 0, 4))});
    NovikovScalar unit = NovikovScalar::constant(coefficient(rng));
    if (coin(rng, 0.5)) unit += mono(coefficient(rng), half(uniform(rng, 1, 4)));
    add_to(d, s, s + 1, unit);
  }
  return conjugated(rng, std::move(gens), std::move(d), 3);
}

TriangleData random_triangle(std::uint64_t seed, bool split) {
  Rng rng(seed);
  const Rational cap = 10;
  std::vector<Generator> gp, gpp;
  int np = uniform(rng, 2, 5), npp = uniform(rng, 2, 5);
  for (int i = 0; i < np; ++i) gp.push_back({"a" + std::to_string(i), uniform(rng, 0, 2), 5 + half(uniform(rng, 0, 2))});
  for (int i = 0; i < npp; ++i) gpp.push_back({"z" + std::to_string(i), uniform(rng, 0, 2), half(uniform(rng, 0, 2))});

  std::vector<bool> iso_p, iso_pp;
  const std::vector<Rational> energies{0, 0, 3, 4};
  SparseMatrix dp = random_pairing(rng, gp, energies, 0.6, &iso_p);
  SparseMatrix dpp = random_pairing(rng, gpp, energies, 0.6, &iso_pp);

  // C = C' + C'': indices 0..np-1 copy C', np.. copy C''.
  std::vector<Generator> gc;
  for (const auto& g : gp) gc.push_back({"p" + g.name, g.degree, g.level});
  for (const auto& g : gpp) gc.push_back({"q" + g.name, g.degree, g.level});
  const std::size_t off = gp.size();

  // Twisting k: C'' -> C' of degree 1, with d'k + kd'' = 0.
  SparseMatrix k;
  if (!split) {
    SparseMatrix w;
    for (std::size_t s = 0; s < gpp.size(); ++s)
      for (std::size_t t = 0; t < gp.size(); ++t) {
        if (gpp[s].degree == gp[t].degree && coin(rng, 0.3)) add_to(w, s, t, mono(coefficient(rng), uniform(rng, 2, 3)));
        if (iso_pp[s] && iso_p[t] && gp[t].degree == gpp[s].degree + 1 && coin(rng, 0.6))
          add_to(k, s, t, mono(coefficient(rng), uniform(rng, 2, 3)));
      }
    k = plus(k, mul(dp, w, cap));
    k = plus(k, mul(w, dpp, cap), -1);
  }

  SparseMatrix dc;
  for (const auto& [key, s] : dp) add_to(dc, key.first, key.second, s);
  for (const auto& [key, s] : dpp) add_to(dc, key.first + off, key.second + off, s);
  for (const auto& [key, s] : k) add_to(dc, key.first + off, key.second, s);

  auto sign = [](int deg) { return Rational(deg % 2 == 0 ? 1 : -1); };
  SparseMatrix b, c;
  for (std::size_t i = 0; i < gp.size(); ++i) add_to(b, i, i, NovikovScalar::constant(sign(gp[i].degree)));
  for (std::size_t j = 0; j < gpp.size(); ++j) add_to(c, j + off, j, NovikovScalar::constant(sign(gpp[j].degree)));

  SparseMatrix h;
  if (!split) {
    // u: C -> C'' of degree -1 shifts c by a null-homotopic term; h = -u b.
    SparseMatrix u;
    for (std::size_t s = 0; s < gc.size(); ++s)
      for (std::size_t t = 0; t < gpp.size(); ++t)
        if (gpp[t].degree == gc[s].degree - 1 && coin(rng, 0.3)) {
          Rational order = s < off ? Rational(uniform(rng, 6, 7)) : Rational(uniform(rng, 2, 3));
          add_to(u, s, t, mono(coefficient(rng), order));
        }
    c = plus(c, mul(dpp, u, cap));
    c = plus(c, mul(u, dc, cap), -1);
    h = plus({}, mul(u, b, cap), -1);

    SparseMatrix n = random_nilpotent(rng, gc, {2, 3}, 0.2);
    SparseMatrix p = plus(identity(gc.size()), n);
    SparseMatrix pinv = unipotent_inverse(n, gc.size(), cap);
    dc = mul(p, mul(dc, pinv, cap), cap);
    b = mul(p, b, cap);
    c = mul(c, pinv, cap);
  }

  TriangleData t;
  t.eps = 1;
  t.cprime = FilteredComplex{gp, with_levels(truncate(dp, cap), gp, gp), cap};
  t.c = FilteredComplex{gc, with_levels(truncate(dc, cap), gc, gc), cap};
  t.cdoubleprime = FilteredComplex{gpp, with_levels(truncate(dpp, cap), gpp, gpp), cap};
  t.b = FilteredMap{gp, gc, with_levels(truncate(b, cap), gp, gc), 0};
  t.cmap = FilteredMap{gc, gpp, with_levels(truncate(c, cap), gc, gpp), 0};
  t.h = FilteredMap{gp, gpp, with_levels(truncate(h, cap), gp, gpp), -1};
  return t;
}

AInftyData associative_toy(std::uint64_t seed) {
  Rng rng(seed);
  const int m = uniform(rng, 1, 3);
  std::vector<Rational> lvl(static_cast<std::size_t>(m));
  for (auto& l : lvl) l = half(uniform(rng, 0, 2));
  AInftyData a;
  a.k_max = 3;
  a.cap = 4;
  std::vector<std::vector<Rational>> scale(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      scale[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = coefficient(rng);
      a.generators.push_back({"e" + std::to_string(i) + std::to_string(j), 0,
                              lvl[static_cast<std::size_t>(i)] - lvl[static_cast<std::size_t>(j)]});
    }
  auto idx = [&](int i, int j) { return static_cast<std::size_t>(i * m + j); };
  auto s = [&](int i, int j) { return scale[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        a.add({idx(i, j), idx(j, k)}, idx(i, k), NovikovScalar::constant(s(i, j) * s(j, k) / s(i, k)));
  return a;
}

namespace {

// x_i in degree 1, y_i in degree 2, m_1 = L invertible, m_2 : x x -> y.
AInftyData base_toy(Rng& rng, int m) {
  AInftyData a;
  a.k_max = 3;
  a.cap = 4;
  for (int i = 0; i < m; ++i) a.generators.push_back({"x" + std::to_string(i), 1, 0});
  for (int i = 0; i < m; ++i) a.generators.push_back({"y" + std::to_string(i), 2, 0});
  // Unit lower-triangular times a diagonal keeps L invertible.
  for (int j = 0; j < m; ++j) {
    a.add({static_cast<std::size_t>(j)}, static_cast<std::size_t>(m + j), NovikovScalar::constant(coefficient(rng)));
    for (int i = j + 1; i < m; ++i)
      if (coin(rng, 0.5))
        a.add({static_cast<std::size_t>(j)}, static_cast<std::size_t>(m + i), NovikovScalar::constant(coefficient(rng)));
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        if (coin(rng, 0.3))
          a.add({static_cast<std::size_t>(i), static_cast<std::size_t>(j)}, static_cast<std::size_t>(m + k),
                NovikovScalar::constant(coefficient(rng)));
  return a;
}

Element planted_element(Rng& rng, int m) {
  Element c;
  for (int i = 0; i < m; ++i)
    if (coin(rng, 0.8) || c.empty())
      c[static_cast<std::size_t>(i)] = mono(coefficient(rng), half(uniform(rng, 1, 3)));
  return c;
}

}  // namespace

McToy solvable_toy(std::uint64_t seed) {
  Rng rng(seed);
  int m = uniform(rng, 1, 3);
  AInftyData base = base_toy(rng, m);
  Element c = planted_element(rng, m);
  McToy toy;
  toy.algebra = deform(base, BoundingCochain{c});
  toy.planted = scale_element(c, NovikovScalar::constant(-1));
  return toy;
}

McToy obstructed_toy(std::uint64_t seed) {
  Rng rng(seed);
  int m = uniform(rng, 1, 3);
  AInftyData base = base_toy(rng, m);
  base.generators.push_back({"z", 2, 0});
  const std::size_t z = base.generators.size() - 1;
  McToy toy;
  toy.obstructed = true;
  toy.level = half(uniform(rng, 1, 6));
  toy.obstruction_generator = z;
  toy.obstruction_coeff = coefficient(rng);
  base.add({}, z, mono(toy.obstruction_coeff, toy.level));
  Element c = planted_element(rng, m);
  toy.algebra = deform(base, BoundingCochain{c});
  toy.planted = scale_element(c, NovikovScalar::constant(-1));
  return toy;
}

const std::vector<std::string>& fixture_kinds() {
  static const std::vector<std::string> kinds{"gapped-complex",  "perturbed-acyclic", "triangle",
                                              "ainfty-assoc",    "ainfty-solvable",   "ainfty-obstructed"};
  return kinds;
}

Json generate_fixture(const std::string& kind, std::uint64_t seed) {
  if (kind == "gapped-complex") return write_complex(random_gapped_complex(seed));
  if (kind == "perturbed-acyclic") return write_complex(random_perturbed_acyclic(seed));
  if (kind == "triangle") return write_triangle(random_triangle(seed));
  if (kind == "ainfty-assoc") return write_ainfty(associative_toy(seed));
  if (kind == "ainfty-solvable") return write_ainfty(solvable_toy(seed).algebra);
  if (kind == "ainfty-obstructed") return write_ainfty(obstructed_toy(seed).algebra);
  throw InputError("", "unknown fixture kind '" + kind + "'");
}

}  // namespace seqlab
