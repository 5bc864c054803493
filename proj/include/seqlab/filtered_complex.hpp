#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seqlab/novikov.hpp"
#include "seqlab/rational_linalg.hpp"

namespace seqlab {

struct Generator {
  std::string name;
  int degree = 0;
  Rational level;  // action level
};

bool operator==(const Generator& a, const Generator& b);

/// Sparse matrix keyed by (source index, target index).
using SparseMatrix = std::map<std::pair<std::size_t, std::size_t>, NovikovScalar>;

/// Graded free module with action levels and a differential. Everything at
/// effective order >= cap is truncated away.
struct FilteredComplex {
  std::vector<Generator> generators;
  SparseMatrix differential;
  Rational cap = 4;

  std::size_t size() const { return generators.size(); }
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;  // throws std::out_of_range
  /// Adds `s` to the (src, dst) entry, dropping it when the sum vanishes.
  void add_entry(std::size_t src, std::size_t dst, const NovikovScalar& s);
  std::set<int> degrees() const;
};

/// Module map between generator lists, raising degree by `degree`.
struct FilteredMap {
  std::vector<Generator> source;
  std::vector<Generator> target;
  SparseMatrix matrix;
  int degree = 0;

  void add_entry(std::size_t src, std::size_t dst, const NovikovScalar& s);
  bool is_zero() const { return matrix.empty(); }
};

FilteredMap differential_map(const FilteredComplex& c);

/// energy + level(dst) - level(src) of one term.
Rational effective_order(const Generator& src, const Generator& dst, const Term& t);

/// Same entries rewritten with every level set to zero: entry (s,t) is multiplied
/// by T^(level(t) - level(s)). Orders and homology are unchanged.
SparseMatrix normalized_entries(const std::vector<Generator>& source, const std::vector<Generator>& target,
                                const SparseMatrix& m);

/// Composite g o f in normalized form, truncated at `cap` when given.
SparseMatrix compose_normalized(const FilteredMap& g, const FilteredMap& f, const std::optional<Rational>& cap);

struct Violation {
  std::string kind;  // "degree", "filtration", "square", "names", "level"
  std::string witness;
};

struct CheckReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

CheckReport check_complex(const FilteredComplex& c);

/// Keeps only the terms of effective order zero.
FilteredComplex leading_part(const FilteredComplex& c);

/// Matrix over Q of the order-zero differential from degree p to degree p+1.
/// Rows are degree p+1 generators, columns degree p generators, both in
/// generator order. Throws Unsupported if an order-zero term carries an e-power.
QMatrix residue_matrix(const FilteredComplex& c, int p);
std::vector<std::size_t> generators_in_degree(const FilteredComplex& c, int p);

/// Half-open or open interval on the order axis. A missing upper end is +infinity.
struct OrderInterval {
  Rational lo;
  std::optional<Rational> hi;
  bool lo_closed = false;
  bool hi_closed = false;
  bool contains(const Rational& x) const;
};

std::set<Rational> realized_orders(const FilteredComplex& c);
/// True iff no realized order of a differential term lies in the interval.
bool gap_check(const FilteredComplex& c, const OrderInterval& interval);

/// Minimal effective order over all terms of f. Throws ZeroMap for f = 0.
Rational map_order(const FilteredMap& f);
std::optional<Rational> map_order_or_inf(const FilteredMap& f);

struct SplitMap {
  FilteredMap low;
  FilteredMap high;
};
SplitMap split_by_threshold(const FilteredMap& f, const Rational& eps);

FilteredMap compose(const FilteredMap& g, const FilteredMap& f);
FilteredMap add_maps(const FilteredMap& a, const FilteredMap& b);
FilteredMap scale_map(const FilteredMap& f, const NovikovScalar& unit);

/// Intersection-point decorations for the normalized basis.
struct Decoration {
  std::string point;
  Rational action;
  int maslov = 0;
};

struct AnchoredGeneratorSet {
  std::vector<Decoration> decorations;
  PiGroup pi;
};

struct AnchoredBasis {
  FilteredComplex basis;                 // one level-zero generator per point, zero differential
  std::vector<std::size_t> generator_of;  // per decoration
  std::vector<NovikovScalar> embedding;   // per decoration: T^action e^((mu - deg)/2)
};

/// Throws InconsistentEquivalence when two decorations of one point differ by
/// something outside the deck group or by an odd index shift.
AnchoredBasis normalize_anchored(const AnchoredGeneratorSet& gens);

}  // namespace seqlab
