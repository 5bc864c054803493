#include "seqlab/ainfty.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "seqlab/errors.hpp"

namespace seqlab {

namespace {

int parity(int x) { return ((x % 2) + 2) % 2; }

void add_term(Element& x, std::size_t g, const NovikovScalar& s) {
  if (s.is_zero()) return;
  auto it = x.find(g);
  if (it == x.end()) {
    x.emplace(g, s);
    return;
  }
  it->second += s;
  if (it->second.is_zero()) x.erase(it);
}

void add_into(std::map<std::size_t, NovikovScalar>& out, std::size_t g, const NovikovScalar& s) { add_term(out, g, s); }

Element unit(std::size_t g) { return Element{{g, NovikovScalar::constant(1)}}; }

// Walks the Cartesian product of the supports of args, calling f(inputs, coeff).
template <typename F>
void for_each_combo(const std::vector<const Element*>& args, F&& f) {
  const std::size_t k = args.size();
  for (const auto* a : args)
    if (a->empty()) return;
  std::vector<Element::const_iterator> it(k);
  for (std::size_t i = 0; i < k; ++i) it[i] = args[i]->begin();
  std::vector<std::size_t> inputs(k);
  while (true) {
    NovikovScalar coeff = NovikovScalar::constant(1);
    for (std::size_t i = 0; i < k; ++i) {
      inputs[i] = it[i]->first;
      coeff = coeff * it[i]->second;
    }
    f(inputs, coeff);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++it[i] != args[i]->end()) break;
      it[i] = args[i]->begin();
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

Element evaluate_table(const OperationTable& ops, const std::vector<const Element*>& args) {
  Element out;
  for_each_combo(args, [&](const std::vector<std::size_t>& inputs, const NovikovScalar& coeff) {
    auto it = ops.find(inputs);
    if (it == ops.end()) return;
    for (const auto& [o, s] : it->second) add_term(out, o, s * coeff);
  });
  return out;
}

std::vector<std::vector<std::size_t>> all_tuples(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k, 0);
  if (k > 0 && n == 0) return out;
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++cur[i] < n) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (k == 0) return out;
  }
}

}  // namespace

void AInftyData::add(const std::vector<std::size_t>& inputs, std::size_t output, const NovikovScalar& s) {
  auto& row = ops[inputs];
  add_into(row, output, s);
  if (row.empty()) ops.erase(inputs);
}

std::size_t AInftyData::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == name) return i;
  throw std::out_of_range("unknown generator '" + name + "'");
}

CheckReport check_ainfty_data(const AInftyData& a) {
  CheckReport rep;
  for (const auto& [inputs, outs] : a.ops) {
    if (static_cast<int>(inputs.size()) > a.k_max)
      rep.violations.push_back({"arity", "operation of arity " + std::to_string(inputs.size()) + " above k_max"});
    int in_shift = 0;
    Rational in_level = 0;
    std::string label = "m" + std::to_string(inputs.size()) + "(";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      in_shift += a.shifted_degree(inputs[i]);
      in_level += a.generators[inputs[i]].level;
      label += (i ? "," : "") + a.generators[inputs[i]].name;
    }
    label += ")";
    for (const auto& [o, s] : outs)
      for (const auto& t : s.terms()) {
        if (a.shifted_degree(o) + t.e2 != in_shift + 1)
          rep.violations.push_back({"degree", label + " -> " + a.generators[o].name});
        if (a.generators[o].level + t.energy < in_level)
          rep.violations.push_back({"filtration", label + " -> " + a.generators[o].name});
      }
  }
  return rep;
}

std::optional<Rational> element_level(const AInftyData& a, const Element& x) {
  std::optional<Rational> best;
  for (const auto& [g, s] : x)
    if (!s.is_zero()) {
      Rational l = *s.valuation() + a.generators[g].level;
      if (!best || l < *best) best = l;
    }
  return best;
}

Element truncate_element(const AInftyData& a, const Element& x, const Rational& cap) {
  Element out;
  for (const auto& [g, s] : x) add_term(out, g, s.truncated(cap - a.generators[g].level).uncapped());
  return out;
}

Element add_elements(const Element& x, const Element& y) {
  Element out = x;
  for (const auto& [g, s] : y) add_term(out, g, s);
  return out;
}

Element scale_element(const Element& x, const NovikovScalar& s) {
  Element out;
  for (const auto& [g, v] : x) add_term(out, g, v * s);
  return out;
}

bool element_is_zero(const Element& x) {
  return std::all_of(x.begin(), x.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

Element evaluate(const AInftyData& a, const std::vector<const Element*>& args) {
  return truncate_element(a, evaluate_table(a.ops, args), a.cap);
}

RelationReport ainfty_relation_check(const AInftyData& a) {
  RelationReport rep;
  const std::size_t n = a.generators.size();
  for (int k = 0; k <= a.k_max; ++k)
    for (const auto& tuple : all_tuples(n, static_cast<std::size_t>(k))) {
      std::vector<Element> units;
      for (auto g : tuple) units.push_back(unit(g));
      Element total;
      for (int k2 = 0; k2 <= std::min(k, a.k_max); ++k2) {
        if (k - k2 + 1 > a.k_max) continue;
        int sign_exp = 0;
        for (int i = 0; i + k2 <= k; ++i) {
          if (i > 0) sign_exp += a.shifted_degree(tuple[static_cast<std::size_t>(i - 1)]);
          std::vector<const Element*> inner_args;
          for (int l = i; l < i + k2; ++l) inner_args.push_back(&units[static_cast<std::size_t>(l)]);
          Element inner = evaluate_table(a.ops, inner_args);
          if (inner.empty()) continue;
          std::vector<const Element*> outer_args;
          for (int l = 0; l < i; ++l) outer_args.push_back(&units[static_cast<std::size_t>(l)]);
          outer_args.push_back(&inner);
          for (int l = i + k2; l < k; ++l) outer_args.push_back(&units[static_cast<std::size_t>(l)]);
          Element term = evaluate_table(a.ops, outer_args);
          if (parity(sign_exp)) term = scale_element(term, NovikovScalar::constant(-1));
          total = add_elements(total, term);
        }
      }
      total = truncate_element(a, total, a.cap);
      if (!element_is_zero(total)) rep.residuals.push_back({tuple, total});
    }
  return rep;
}

namespace {

using Word = std::vector<std::size_t>;
using WordSum = std::map<Word, NovikovScalar>;

void add_word(WordSum& w, const Word& key, const NovikovScalar& s) {
  if (s.is_zero()) return;
  auto it = w.find(key);
  if (it == w.end()) {
    w.emplace(key, s);
    return;
  }
  it->second += s;
  if (it->second.is_zero()) w.erase(it);
}

// Coderivation extension of the operations, applied to a sum of words.
WordSum coderivation(const AInftyData& a, const WordSum& in) {
  WordSum out;
  for (const auto& [word, coeff] : in) {
    const int len = static_cast<int>(word.size());
    int sign_exp = 0;
    for (int i = 0; i <= len; ++i) {
      if (i > 0) sign_exp += a.shifted_degree(word[static_cast<std::size_t>(i - 1)]);
      for (int k2 = 0; k2 <= std::min(len - i, a.k_max); ++k2) {
        Word sub(word.begin() + i, word.begin() + i + k2);
        auto it = a.ops.find(sub);
        if (it == a.ops.end()) continue;
        for (const auto& [o, s] : it->second) {
          Word next(word.begin(), word.begin() + i);
          next.push_back(o);
          next.insert(next.end(), word.begin() + i + k2, word.end());
          NovikovScalar c = s * coeff;
          add_word(out, next, parity(sign_exp) ? -c : c);
        }
      }
    }
  }
  return out;
}

}  // namespace

RelationReport ainfty_relation_check_bar(const AInftyData& a) {
  RelationReport rep;
  const std::size_t n = a.generators.size();
  for (int k = 0; k <= a.k_max; ++k)
    for (const auto& tuple : all_tuples(n, static_cast<std::size_t>(k))) {
      WordSum start;
      start.emplace(tuple, NovikovScalar::constant(1));
      WordSum once = coderivation(a, start);
      // Drop words the second pass cannot shorten to a single letter.
      for (auto it = once.begin(); it != once.end();)
        it = static_cast<int>(it->first.size()) > a.k_max ? once.erase(it) : std::next(it);
      WordSum twice = coderivation(a, once);
      Element total;
      for (const auto& [word, s] : twice)
        if (word.size() == 1) add_term(total, word.front(), s);
      total = truncate_element(a, total, a.cap);
      if (!element_is_zero(total)) rep.residuals.push_back({tuple, total});
    }
  return rep;
}

Element mc_residual(const AInftyData& a, const BoundingCochain& b) {
  if (auto l = element_level(a, b.b); l && *l <= 0)
    throw DivergenceRisk("bounding cochain has level " + to_string(*l) + ", needs to be positive");
  Element total;
  for (int k = 0; k <= a.k_max; ++k) {
    std::vector<const Element*> args(static_cast<std::size_t>(k), &b.b);
    total = add_elements(total, evaluate_table(a.ops, args));
    total = truncate_element(a, total, a.cap);
  }
  return total;
}

McOutcome mc_solve(const AInftyData& input, const Rational& cap) {
  AInftyData a = input;
  a.cap = std::min(input.cap, cap);
  McOutcome out;
  Element b;
  std::optional<std::pair<Rational, int>> last;
  for (int iteration = 0; iteration < 100000; ++iteration) {
    Element r = mc_residual(a, BoundingCochain{b});
    if (element_is_zero(r)) {
      out.solution.b = b;
      return out;
    }
    std::optional<std::pair<Rational, int>> key;
    for (const auto& [g, s] : r)
      for (const auto& t : s.terms()) {
        std::pair<Rational, int> k{t.energy + a.generators[g].level, t.e2};
        if (!key || k < *key) key = k;
      }
    if (last && !(*last < *key)) throw std::logic_error("Maurer-Cartan induction did not advance");
    last = key;
    const Rational F = key->first;
    const int e2 = key->second;

    std::vector<std::size_t> targets, sources;
    for (std::size_t g = 0; g < a.generators.size(); ++g) {
      if (a.generators[g].degree + e2 == 2) targets.push_back(g);
      if (a.generators[g].degree + e2 == 1) sources.push_back(g);
    }
    QVector rhs(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
      auto it = r.find(targets[i]);
      if (it != r.end()) rhs[i] = -it->second.coefficient(F - a.generators[targets[i]].level, e2);
    }
    QMatrix L = zero_matrix(targets.size(), sources.size());
    for (std::size_t j = 0; j < sources.size(); ++j) {
      auto it = a.ops.find({sources[j]});
      if (it == a.ops.end()) continue;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        auto o = it->second.find(targets[i]);
        if (o == it->second.end()) continue;
        L[i][j] = o->second.coefficient(a.generators[sources[j]].level - a.generators[targets[i]].level, 0);
      }
    }
    auto y = solve(L, rhs, sources.size());
    if (!y) {
      QVector residual(rhs.size());
      for (std::size_t i = 0; i < rhs.size(); ++i) residual[i] = -rhs[i];
      out.obstructed = true;
      out.level = F;
      out.e2 = e2;
      out.basis = targets;
      out.obstruction_class = reduce_mod_columns(L, residual);
      return out;
    }
    for (std::size_t j = 0; j < sources.size(); ++j)
      if ((*y)[j] != 0)
        add_term(b, sources[j], NovikovScalar::monomial((*y)[j], F - a.generators[sources[j]].level, e2));
  }
  throw std::logic_error("Maurer-Cartan induction exceeded its iteration budget");
}

AInftyData deform(const AInftyData& a, const BoundingCochain& b) {
  if (auto l = element_level(a, b.b); l && *l <= 0)
    throw DivergenceRisk("bounding cochain has level " + to_string(*l) + ", needs to be positive");
  AInftyData out{a.generators, {}, a.k_max, a.cap};
  for (const auto& [inputs, outs] : a.ops) {
    const std::size_t K = inputs.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << K); ++mask) {
      NovikovScalar coeff = NovikovScalar::constant(1);
      std::vector<std::size_t> kept;
      bool dead = false;
      for (std::size_t i = 0; i < K && !dead; ++i) {
        if (mask & (std::size_t{1} << i)) {
          auto it = b.b.find(inputs[i]);
          if (it == b.b.end()) {
            dead = true;
          } else {
            coeff = coeff * it->second;
          }
        } else {
          kept.push_back(inputs[i]);
        }
      }
      if (dead) continue;
      for (const auto& [o, s] : outs)
        out.add(kept, o, (s * coeff).truncated(a.cap - a.generators[o].level).uncapped());
    }
  }
  return out;
}

void BimoduleData::add(const BimoduleKey& key, std::size_t output, const NovikovScalar& s) {
  auto& row = ops[key];
  add_into(row, output, s);
  if (row.empty()) ops.erase(key);
}

BimoduleData diagonal_bimodule(const AInftyData& a) {
  BimoduleData bm{a, a, a.generators, {}, a.cap};
  for (const auto& [inputs, outs] : a.ops)
    for (std::size_t pos = 0; pos < inputs.size(); ++pos) {
      BimoduleKey key{{inputs.begin(), inputs.begin() + static_cast<std::ptrdiff_t>(pos)},
                      inputs[pos],
                      {inputs.begin() + static_cast<std::ptrdiff_t>(pos) + 1, inputs.end()}};
      for (const auto& [o, s] : outs) bm.add(key, o, s);
    }
  return bm;
}

namespace {

// Evaluates n on (left elements, center element, right elements).
Element evaluate_bimodule(const BimoduleData& bm, const std::vector<const Element*>& left, const Element& center,
                          const std::vector<const Element*>& right) {
  std::vector<const Element*> args = left;
  args.push_back(&center);
  args.insert(args.end(), right.begin(), right.end());
  Element out;
  const std::size_t nl = left.size();
  for_each_combo(args, [&](const std::vector<std::size_t>& inputs, const NovikovScalar& coeff) {
    BimoduleKey key{{inputs.begin(), inputs.begin() + static_cast<std::ptrdiff_t>(nl)},
                    inputs[nl],
                    {inputs.begin() + static_cast<std::ptrdiff_t>(nl) + 1, inputs.end()}};
    auto it = bm.ops.find(key);
    if (it == bm.ops.end()) return;
    for (const auto& [o, s] : it->second) add_term(out, o, s * coeff);
  });
  return out;
}

Element truncate_center(const BimoduleData& bm, const Element& x) {
  Element out;
  for (const auto& [g, s] : x) add_term(out, g, s.truncated(bm.cap - bm.center[g].level).uncapped());
  return out;
}

}  // namespace

std::vector<BimoduleResidual> bimodule_relation_check(const BimoduleData& bm, int max_len) {
  std::vector<BimoduleResidual> out;
  const std::size_t nl = bm.left.generators.size(), nr = bm.right.generators.size(), nc = bm.center.size();
  auto sd_left = [&](std::size_t g) { return bm.left.generators[g].degree - 1; };
  auto sd_right = [&](std::size_t g) { return bm.right.generators[g].degree - 1; };
  for (int total = 0; total < max_len; ++total)
    for (int k1 = 0; k1 <= total; ++k1) {
      const int k0 = total - k1;
      for (const auto& lt : all_tuples(nl, static_cast<std::size_t>(k1)))
        for (const auto& rt : all_tuples(nr, static_cast<std::size_t>(k0)))
          for (std::size_t x = 0; x < nc; ++x) {
            std::vector<Element> lu, ru;
            for (auto g : lt) lu.push_back(unit(g));
            for (auto g : rt) ru.push_back(unit(g));
            Element xu = unit(x);
            Element sum;
            auto sign_add = [&](Element term, int e) {
              if (parity(e)) term = scale_element(term, NovikovScalar::constant(-1));
              sum = add_elements(sum, term);
            };
            // Inner algebra operation inside the left part.
            int pre = 0;
            for (int i = 0; i <= k1; ++i) {
              if (i > 0) pre += sd_left(lt[static_cast<std::size_t>(i - 1)]);
              for (int l = 0; i + l <= k1; ++l) {
                std::vector<const Element*> inner_args;
                for (int t = i; t < i + l; ++t) inner_args.push_back(&lu[static_cast<std::size_t>(t)]);
                Element inner = evaluate_table(bm.left.ops, inner_args);
                if (inner.empty()) continue;
                std::vector<const Element*> left;
                for (int t = 0; t < i; ++t) left.push_back(&lu[static_cast<std::size_t>(t)]);
                left.push_back(&inner);
                for (int t = i + l; t < k1; ++t) left.push_back(&lu[static_cast<std::size_t>(t)]);
                std::vector<const Element*> right;
                for (auto& e : ru) right.push_back(&e);
                sign_add(evaluate_bimodule(bm, left, xu, right), pre);
              }
            }
            // Inner bimodule operation containing the center.
            pre = 0;
            for (int i = 0; i <= k1; ++i) {
              if (i > 0) pre += sd_left(lt[static_cast<std::size_t>(i - 1)]);
              for (int j = 0; j <= k0; ++j) {
                std::vector<const Element*> il, ir;
                for (int t = i; t < k1; ++t) il.push_back(&lu[static_cast<std::size_t>(t)]);
                for (int t = 0; t < j; ++t) ir.push_back(&ru[static_cast<std::size_t>(t)]);
                Element inner = evaluate_bimodule(bm, il, xu, ir);
                if (inner.empty()) continue;
                std::vector<const Element*> left, right;
                for (int t = 0; t < i; ++t) left.push_back(&lu[static_cast<std::size_t>(t)]);
                for (int t = j; t < k0; ++t) right.push_back(&ru[static_cast<std::size_t>(t)]);
                sign_add(evaluate_bimodule(bm, left, inner, right), pre);
              }
            }
            // Inner algebra operation inside the right part.
            pre = bm.center[x].degree - 1;
            for (auto g : lt) pre += sd_left(g);
            for (int i = 0; i <= k0; ++i) {
              if (i > 0) pre += sd_right(rt[static_cast<std::size_t>(i - 1)]);
              for (int l = 0; i + l <= k0; ++l) {
                std::vector<const Element*> inner_args;
                for (int t = i; t < i + l; ++t) inner_args.push_back(&ru[static_cast<std::size_t>(t)]);
                Element inner = evaluate_table(bm.right.ops, inner_args);
                if (inner.empty()) continue;
                std::vector<const Element*> left, right;
                for (auto& e : lu) left.push_back(&e);
                for (int t = 0; t < i; ++t) right.push_back(&ru[static_cast<std::size_t>(t)]);
                right.push_back(&inner);
                for (int t = i + l; t < k0; ++t) right.push_back(&ru[static_cast<std::size_t>(t)]);
                sign_add(evaluate_bimodule(bm, left, xu, right), pre);
              }
            }
            sum = truncate_center(bm, sum);
            if (!element_is_zero(sum)) out.push_back({BimoduleKey{lt, x, rt}, sum});
          }
    }
  return out;
}

FilteredMap deformed_differential(const BimoduleData& bm, const BoundingCochain& b0, const BoundingCochain& b1) {
  for (const auto* b : {&b0, &b1})
    for (const auto& [g, s] : b->b)
      if (!s.is_zero() && *s.valuation() <= 0) throw DivergenceRisk("bounding cochain term of non-positive energy");
  FilteredMap out{bm.center, bm.center, {}, 1};
  for (const auto& [key, outs] : bm.ops) {
    NovikovScalar coeff = NovikovScalar::constant(1);
    bool dead = false;
    for (auto g : key.left) {
      auto it = b1.b.find(g);
      if (it == b1.b.end()) {
        dead = true;
        break;
      }
      coeff = coeff * it->second;
    }
    for (auto g : key.right) {
      if (dead) break;
      auto it = b0.b.find(g);
      if (it == b0.b.end()) {
        dead = true;
        break;
      }
      coeff = coeff * it->second;
    }
    if (dead) continue;
    for (const auto& [o, s] : outs) {
      NovikovScalar v = (s * coeff).truncated(bm.cap - bm.center[o].level + bm.center[key.center].level).uncapped();
      out.add_entry(key.center, o, v);
    }
  }
  return out;
}

FilteredMap bimodule_check(const BimoduleData& bm, const BoundingCochain& b0, const BoundingCochain& b1) {
  auto delta = deformed_differential(bm, b0, b1);
  auto sq = compose_normalized(delta, delta, bm.cap);
  if (!sq.empty()) {
    const auto& [key, s] = *sq.begin();
    throw SquareNonzero("deformed differential squares to " + s.to_text() + " at " + bm.center[key.first].name +
                        " -> " + bm.center[key.second].name);
  }
  return delta;
}

}  // namespace seqlab
