#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqlab/filtered_complex.hpp"

namespace seqlab {

/// Linear combination of generators with Novikov coefficients.
using Element = std::map<std::size_t, NovikovScalar>;

/// Sparse multilinear operations: inputs -> (output -> coefficient). The arity
/// is the length of the input list; the empty list is the curvature term.
using OperationTable = std::map<std::vector<std::size_t>, std::map<std::size_t, NovikovScalar>>;

/// Conventions: shifted degree |x|' = deg x - 1; each operation has shifted
/// degree +1, so deg(out) - 1 + e2 = sum(deg(in) - 1) + 1 for every term.
/// Filtration: level(out) + energy >= sum of input levels.
/// Inputs are read left to right. In the relation, an inner operation starting
/// after inputs y_1..y_j picks up the sign (-1)^(|y_1|' + ... + |y_j|').
struct AInftyData {
  std::vector<Generator> generators;
  OperationTable ops;
  int k_max = 4;
  Rational cap = 4;

  void add(const std::vector<std::size_t>& inputs, std::size_t output, const NovikovScalar& s);
  std::size_t index_of(const std::string& name) const;
  int shifted_degree(std::size_t g) const { return generators[g].degree - 1; }
};

/// Degree rule and filtration compatibility of every operation term.
CheckReport check_ainfty_data(const AInftyData& a);

struct RelationResidual {
  std::vector<std::size_t> inputs;
  Element value;
};

struct RelationReport {
  std::vector<RelationResidual> residuals;  // only the nonzero ones, ordered by inputs
  bool ok() const { return residuals.empty(); }
};

/// Relation on every generator tuple of length 0..k_max by direct summation.
RelationReport ainfty_relation_check(const AInftyData& a);
/// Same relation obtained by extending the operations to a coderivation of the
/// tensor coalgebra, squaring, and projecting to single letters.
RelationReport ainfty_relation_check_bar(const AInftyData& a);

/// Multilinear evaluation of the arity-k operations, truncated at level cap.
Element evaluate(const AInftyData& a, const std::vector<const Element*>& args);

/// Lowest filtration level (energy + generator level) among the terms, or nothing for zero.
std::optional<Rational> element_level(const AInftyData& a, const Element& x);
Element truncate_element(const AInftyData& a, const Element& x, const Rational& cap);
Element add_elements(const Element& x, const Element& y);
Element scale_element(const Element& x, const NovikovScalar& s);
bool element_is_zero(const Element& x);

struct BoundingCochain {
  Element b;
};

/// sum over k of m_k(b, ..., b) below the cap. Throws DivergenceRisk unless the
/// level of b is positive.
Element mc_residual(const AInftyData& a, const BoundingCochain& b);

struct McOutcome {
  bool obstructed = false;
  BoundingCochain solution;        // valid when not obstructed
  Rational level;                  // first obstructed filtration level
  int e2 = 0;                      // and its e-exponent (doubled)
  std::vector<std::size_t> basis;  // generators indexing the class below
  QVector obstruction_class;       // residual reduced modulo the image of the order-zero part of m_1
};

/// Solves the Maurer-Cartan equation level by level below `cap`.
McOutcome mc_solve(const AInftyData& a, const Rational& cap);

/// Operations m_k^b obtained by inserting b in every slot pattern, below the cap.
AInftyData deform(const AInftyData& a, const BoundingCochain& b);

/// n_{k1,k0}(a_1..a_k1, x, c_1..c_k0), keyed by (left inputs, center, right inputs).
struct BimoduleKey {
  std::vector<std::size_t> left;
  std::size_t center = 0;
  std::vector<std::size_t> right;
  friend bool operator<(const BimoduleKey& a, const BimoduleKey& b) {
    if (a.left != b.left) return a.left < b.left;
    if (a.center != b.center) return a.center < b.center;
    return a.right < b.right;
  }
};

struct BimoduleData {
  AInftyData left;
  AInftyData right;
  std::vector<Generator> center;
  std::map<BimoduleKey, std::map<std::size_t, NovikovScalar>> ops;
  Rational cap = 4;

  void add(const BimoduleKey& key, std::size_t output, const NovikovScalar& s);
};

/// The algebra acting on itself: n_{k1,k0} = m_{k1+1+k0}.
BimoduleData diagonal_bimodule(const AInftyData& a);

struct BimoduleResidual {
  BimoduleKey inputs;
  Element value;
};

/// Bimodule relations on words with total length at most `max_len`.
std::vector<BimoduleResidual> bimodule_relation_check(const BimoduleData& bm, int max_len);

/// delta(x) = sum n(b1..b1, x, b0..b0) as a map on the center module.
FilteredMap deformed_differential(const BimoduleData& bm, const BoundingCochain& b0, const BoundingCochain& b1);

/// Returns the deformed differential after checking that it squares to zero
/// below the cap; throws SquareNonzero with a witness otherwise.
FilteredMap bimodule_check(const BimoduleData& bm, const BoundingCochain& b0, const BoundingCochain& b1);

}  // namespace seqlab
