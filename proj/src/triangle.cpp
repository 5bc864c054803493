#include "seqlab/triangle.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "seqlab/errors.hpp"
#include "seqlab/spectral.hpp"

namespace seqlab {

namespace {

std::vector<Generator> prefixed(const std::vector<Generator>& gens, const std::string& prefix, int shift) {
  std::vector<Generator> out;
  for (const auto& g : gens) out.push_back(Generator{prefix + g.name, g.degree + shift, g.level});
  return out;
}

void place(SparseMatrix& into, const SparseMatrix& from, std::size_t src_off, std::size_t dst_off) {
  for (const auto& [key, s] : from) {
    auto k = std::make_pair(key.first + src_off, key.second + dst_off);
    auto it = into.find(k);
    if (it == into.end())
      into.emplace(k, s);
    else
      it->second += s;
  }
}

std::vector<std::size_t> name_ordered(const std::vector<Generator>& gens, int degree) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (gens[i].degree == degree) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return gens[a].name < gens[b].name; });
  return idx;
}

std::size_t rank_of(const NMatrix& m, const Rational& W) { return field_rank(m, W); }

std::size_t homology_dim(const FilteredComplex& c, int k, const Rational& W) {
  std::size_t n = generators_in_degree(c, k).size();
  std::size_t out = rank_of(degree_matrix(c, k), W);
  std::size_t in = rank_of(degree_matrix(c, k - 1), W);
  return n - out - in;
}

NMatrix block(const NMatrix& tl, const NMatrix& tr, const NMatrix& bl, const NMatrix& br) {
  // Row counts come from the left blocks' heights or right when a block is empty.
  std::size_t top = std::max(tl.size(), tr.size());
  std::size_t bottom = std::max(bl.size(), br.size());
  std::size_t left = tl.empty() ? (bl.empty() ? 0 : bl.front().size()) : tl.front().size();
  std::size_t right = tr.empty() ? (br.empty() ? 0 : br.front().size()) : tr.front().size();
  NMatrix m(top + bottom, std::vector<NovikovScalar>(left + right));
  auto put = [&](const NMatrix& b, std::size_t r0, std::size_t c0) {
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b[i].size(); ++j) m[r0 + i][c0 + j] = b[i][j];
  };
  put(tl, 0, 0);
  put(tr, 0, left);
  put(bl, top, 0);
  put(br, top, left);
  return m;
}

NMatrix zeros(std::size_t r, std::size_t c) { return NMatrix(r, std::vector<NovikovScalar>(c)); }

QMatrix residue_of_map(const FilteredMap& f, int k) {
  auto cols = name_ordered(f.source, k);
  auto rows = name_ordered(f.target, k + f.degree);
  std::map<std::size_t, std::size_t> cp, rp;
  for (std::size_t i = 0; i < cols.size(); ++i) cp[cols[i]] = i;
  for (std::size_t i = 0; i < rows.size(); ++i) rp[rows[i]] = i;
  QMatrix m = zero_matrix(rows.size(), cols.size());
  for (const auto& [key, s] : f.matrix) {
    auto ci = cp.find(key.first);
    auto ri = rp.find(key.second);
    if (ci == cp.end() || ri == rp.end()) continue;
    for (const auto& t : s.terms())
      if (t.e2 == 0 && effective_order(f.source[key.first], f.target[key.second], t) == 0)
        m[ri->second][ci->second] += t.coeff;
  }
  return m;
}

std::set<int> all_degrees(const TriangleData& t) {
  std::set<int> out;
  for (const auto* c : {&t.cprime, &t.c, &t.cdoubleprime})
    for (int d : c->degrees()) out.insert(d);
  return out;
}

}  // namespace

NMatrix map_matrix(const FilteredMap& f, int k) {
  auto cols = name_ordered(f.source, k);
  auto rows = name_ordered(f.target, k + f.degree);
  std::map<std::size_t, std::size_t> cp, rp;
  for (std::size_t i = 0; i < cols.size(); ++i) cp[cols[i]] = i;
  for (std::size_t i = 0; i < rows.size(); ++i) rp[rows[i]] = i;
  NMatrix m = zeros(rows.size(), cols.size());
  for (const auto& [key, s] : normalized_entries(f.source, f.target, f.matrix)) {
    if (!s.e_free()) throw Unsupported("map terms with e-powers are not supported here");
    auto ci = cp.find(key.first);
    auto ri = rp.find(key.second);
    if (ci == cp.end() || ri == rp.end()) continue;
    m[ri->second][ci->second] = s;
  }
  return m;
}

std::size_t induced_rank(const FilteredComplex& a, const FilteredComplex& b, const FilteredMap& f, int k,
                         const Rational& W) {
  NMatrix dB = degree_matrix(b, k - 1);  // B^{k-1} -> B^k
  NMatrix dA = degree_matrix(a, k);      // A^k -> A^{k+1}
  NMatrix fk = map_matrix(f, k);         // A^k -> B^k
  std::size_t bk = generators_in_degree(b, k).size();
  std::size_t bkm1 = generators_in_degree(b, k - 1).size();
  std::size_t ak = generators_in_degree(a, k).size();
  std::size_t ak1 = generators_in_degree(a, k + 1).size();
  if (dB.empty()) dB = zeros(bk, bkm1);
  if (dA.empty()) dA = zeros(ak1, ak);
  if (fk.empty()) fk = zeros(bk, ak);
  NMatrix m = block(dB, fk, zeros(ak1, bkm1), dA);
  if (m.size() != bk + ak1) m.resize(bk + ak1, std::vector<NovikovScalar>(bkm1 + ak));
  return rank_of(m, W) - rank_of(dA, W) - rank_of(dB, W);
}

FilteredComplex assemble_cone(const TriangleData& t) {
  FilteredComplex d;
  auto gp = prefixed(t.cprime.generators, "Cp:", -2);
  auto gc = prefixed(t.c.generators, "C:", -1);
  auto gpp = prefixed(t.cdoubleprime.generators, "Cpp:", 0);
  const std::size_t o2 = gp.size(), o3 = gp.size() + gc.size();
  d.generators = gp;
  d.generators.insert(d.generators.end(), gc.begin(), gc.end());
  d.generators.insert(d.generators.end(), gpp.begin(), gpp.end());
  d.cap = std::min({t.cprime.cap, t.c.cap, t.cdoubleprime.cap});
  place(d.differential, t.cprime.differential, 0, 0);
  place(d.differential, t.b.matrix, 0, o2);
  place(d.differential, t.c.differential, o2, o2);
  place(d.differential, t.h.matrix, 0, o3);
  place(d.differential, t.cmap.matrix, o2, o3);
  place(d.differential, t.cdoubleprime.differential, o3, o3);
  for (auto it = d.differential.begin(); it != d.differential.end();)
    it = it->second.is_zero() ? d.differential.erase(it) : std::next(it);

  auto dd = differential_map(d);
  auto sq = compose_normalized(dd, dd, d.cap);
  if (!sq.empty()) {
    auto region = [&](std::size_t i) { return i < o2 ? 0 : (i < o3 ? 1 : 2); };
    static const char* names[3][3] = {{"d' squared", "b chain identity", "homotopy identity"},
                                      {"", "d squared", "c chain identity"},
                                      {"", "", "d'' squared"}};
    const auto& [key, s] = *sq.begin();
    throw NotAComplex(std::string(names[region(key.first)][region(key.second)]) + " fails at " +
                      d.generators[key.first].name + " -> " + d.generators[key.second].name + ": " + s.to_text());
  }
  return d;
}

bool HypothesisReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const HypothesisItem& i) { return i.passed; });
}

HypothesisReport check_triangle_hypotheses(const TriangleData& t) {
  HypothesisReport rep;
  const Rational& e = t.eps;

  HypothesisItem gaps{"gaps", true, {}};
  auto gap_item = [&](const FilteredComplex& c, const std::string& label, const Rational& hi) {
    for (const auto& o : realized_orders(c))
      if (o > 0 && o < hi) {
        gaps.passed = false;
        gaps.witnesses.push_back(label + " realizes order " + to_string(o) + " inside (0, " + to_string(hi) + ")");
      }
  };
  gap_item(t.cprime, "C'", 3 * e);
  gap_item(t.c, "C", 2 * e);
  gap_item(t.cdoubleprime, "C''", 3 * e);
  rep.items.push_back(gaps);

  HypothesisItem dist{"support distance", true, {}};
  for (const auto& x : t.cprime.generators)
    for (const auto& y : t.cdoubleprime.generators) {
      Rational diff = abs(x.level - y.level);
      if (diff < 4 * e) {
        dist.passed = false;
        dist.witnesses.push_back(x.name + " and " + y.name + " levels differ by " + to_string(diff));
      }
    }
  rep.items.push_back(dist);

  HypothesisItem split{"split exactness", true, {}};
  auto sb = split_by_threshold(t.b, e);
  auto sc = split_by_threshold(t.cmap, e);
  auto check_orders = [&](const FilteredMap& f, const SplitMap& s, const std::string& label) {
    if (auto o = map_order_or_inf(f); o && *o < 0) {
      split.passed = false;
      split.witnesses.push_back(label + " lowers the filtration (order " + to_string(*o) + ")");
    }
    if (auto o = map_order_or_inf(s.high); o && *o < 2 * e) {
      split.passed = false;
      split.witnesses.push_back(label + " remainder has order " + to_string(*o) + " below 2eps");
    }
  };
  check_orders(t.b, sb, "b");
  check_orders(t.cmap, sc, "c");
  const Rational W = std::min({t.cprime.cap, t.c.cap, t.cdoubleprime.cap});
  auto gb = compose_normalized(sc.low, sb.low, W);
  if (!gb.empty()) {
    split.passed = false;
    const auto& [key, s] = *gb.begin();
    split.witnesses.push_back("gamma beta nonzero at " + t.cprime.generators[key.first].name + " -> " +
                              t.cdoubleprime.generators[key.second].name + ": " + s.to_text());
  }
  for (int k : all_degrees(t)) {
    std::size_t np = generators_in_degree(t.cprime, k).size();
    std::size_t n = generators_in_degree(t.c, k).size();
    std::size_t npp = generators_in_degree(t.cdoubleprime, k).size();
    std::size_t rb = rank(residue_of_map(sb.low, k));
    std::size_t rc = rank(residue_of_map(sc.low, k));
    if (n != np + npp || rb != np || rc != npp) {
      split.passed = false;
      split.witnesses.push_back("degree " + std::to_string(k) + ": dims " + std::to_string(np) + "/" +
                                std::to_string(n) + "/" + std::to_string(npp) + ", leading ranks " +
                                std::to_string(rb) + "/" + std::to_string(rc));
    }
  }
  rep.items.push_back(split);

  HypothesisItem hom{"homotopy order", true, {}};
  if (auto o = map_order_or_inf(t.h); o && *o < 0) {
    hom.passed = false;
    hom.witnesses.push_back("h has order " + to_string(*o));
  }
  rep.items.push_back(hom);
  return rep;
}

FilteredComplex low_part(const FilteredComplex& d, const Rational& eps) {
  auto s = split_by_threshold(differential_map(d), eps);
  return FilteredComplex{d.generators, s.low.matrix, d.cap};
}

bool vanishing_lemma(const FilteredComplex& d, const Rational& eps) {
  if (!gap_check(d, OrderInterval{eps, 2 * eps, true, false}))
    throw HypothesisFailed("complex has a term of order inside [eps, 2eps)");
  auto low = low_part(d, eps);
  auto rep = check_complex(low);
  for (const auto& v : rep.violations)
    if (v.kind == "square") throw HypothesisFailed("low part does not square to zero: " + v.witness);
  for (const auto& [p, dim] : field_homology(low))
    if (dim != 0) throw HypothesisFailed("low part has homology in degree " + std::to_string(p));
  if (vanishing_criterion(d)) return true;
  auto full = field_homology(d);
  return std::all_of(full.begin(), full.end(), [](const auto& kv) { return kv.second == 0; });
}

bool LongExactSequence::exact() const {
  return std::all_of(nodes.begin(), nodes.end(), [](const LesNode& n) { return n.exact; });
}

LongExactSequence compute_les(const TriangleData& t, std::optional<Rational> cap) {
  LongExactSequence les;
  les.cap = cap ? *cap : Rational(10 * t.eps);
  const Rational& W = les.cap;

  // Cone of b, E^k = C'^(k+1) + C^k, projecting onto C'[1].
  FilteredComplex e;
  auto gp = prefixed(t.cprime.generators, "Cp:", -1);
  auto gc = prefixed(t.c.generators, "C:", 0);
  e.generators = gp;
  e.generators.insert(e.generators.end(), gc.begin(), gc.end());
  e.cap = std::min(t.cprime.cap, t.c.cap);
  place(e.differential, t.cprime.differential, 0, 0);
  place(e.differential, t.b.matrix, 0, gp.size());
  place(e.differential, t.c.differential, gp.size(), gp.size());
  FilteredComplex shifted{prefixed(t.cprime.generators, "", -1), t.cprime.differential, t.cprime.cap};
  FilteredMap pi{e.generators, shifted.generators, {}, 0};
  for (std::size_t i = 0; i < gp.size(); ++i) pi.add_entry(i, i, NovikovScalar::constant(1));

  auto degs = all_degrees(t);
  if (degs.empty()) return les;
  const int lo = *degs.begin() - 1, hi = *degs.rbegin() + 1;
  auto rb = [&](int k) { return induced_rank(t.cprime, t.c, t.b, k, W); };
  auto rc = [&](int k) { return induced_rank(t.c, t.cdoubleprime, t.cmap, k, W); };
  auto rd = [&](int k) { return induced_rank(e, shifted, pi, k, W); };

  for (int k = lo; k <= hi; ++k) {
    std::size_t b_k = rb(k), c_k = rc(k), d_k = rd(k);
    les.maps.push_back({"b", k, b_k});
    les.maps.push_back({"c", k, c_k});
    les.maps.push_back({"connecting", k, d_k});
    LesNode n1{"C'", k, homology_dim(t.cprime, k, W), rd(k - 1), b_k, true};
    LesNode n2{"C", k, homology_dim(t.c, k, W), b_k, c_k, true};
    LesNode n3{"C''", k, homology_dim(t.cdoubleprime, k, W), c_k, d_k, true};
    for (auto* n : {&n1, &n2, &n3}) {
      n->exact = n->rank_in + n->rank_out == n->dim;
      les.nodes.push_back(*n);
    }
  }
  return les;
}

LongExactSequence extract_les(const TriangleData& t, std::optional<Rational> cap) {
  auto rep = check_triangle_hypotheses(t);
  if (!rep.ok()) {
    std::string msg;
    for (const auto& item : rep.items)
      if (!item.passed) msg += (msg.empty() ? "" : "; ") + item.name + ": " + item.witnesses.front();
    throw HypothesisFailed(msg);
  }
  auto les = compute_les(t, cap);
  for (std::size_t i = 0; i < les.nodes.size(); ++i) {
    const auto& n = les.nodes[i];
    if (!n.exact)
      throw ExactnessFailure("node " + std::to_string(i) + " (H^" + std::to_string(n.degree) + " " + n.space +
                             "): dim " + std::to_string(n.dim) + ", incoming rank " + std::to_string(n.rank_in) +
                             ", outgoing rank " + std::to_string(n.rank_out));
  }
  return les;
}

}  // namespace seqlab
