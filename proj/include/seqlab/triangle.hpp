#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqlab/elimination.hpp"
#include "seqlab/filtered_complex.hpp"

namespace seqlab {

/// Maps b: C' -> C and c: C -> C'' of degree 0 and h: C' -> C'' of degree -1.
/// Sign convention, fixed so that the literal lower-triangular cone matrix squares to zero:
///   d b + b d' = 0,   d'' c + c d = 0,   c b + d'' h + h d' = 0.
struct TriangleData {
  FilteredComplex cprime;
  FilteredComplex c;
  FilteredComplex cdoubleprime;
  FilteredMap b;
  FilteredMap cmap;
  FilteredMap h;
  Rational eps;
};

/// D^k = C'^(k+2) + C^(k+1) + C''^k with d_D = [[d',0,0],[b,d,0],[h,c,d'']].
/// Generator names get the prefixes "Cp:", "C:", "Cpp:". Throws NotAComplex
/// naming the failing block when d_D does not square to zero.
FilteredComplex assemble_cone(const TriangleData& t);

struct HypothesisItem {
  std::string name;
  bool passed = true;
  std::vector<std::string> witnesses;
};

struct HypothesisReport {
  std::vector<HypothesisItem> items;  // gaps, support distance, split exactness, homotopy order
  bool ok() const;
};

HypothesisReport check_triangle_hypotheses(const TriangleData& t);

/// Low part (order < eps) of a complex's differential, as a complex.
FilteredComplex low_part(const FilteredComplex& d, const Rational& eps);

/// Certifies H(D, d_D) = 0 from gap [eps, 2eps) plus acyclicity of the low part.
/// Throws HypothesisFailed when a premise breaks. Returns whether homology of
/// D vanishes below its cap.
bool vanishing_lemma(const FilteredComplex& d, const Rational& eps);

struct LesNode {
  std::string space;  // "C'", "C", "C''"
  int degree = 0;
  std::size_t dim = 0;
  std::size_t rank_in = 0;
  std::size_t rank_out = 0;
  bool exact = true;
};

struct LesMap {
  std::string name;  // "b", "c", "connecting"
  int degree = 0;    // degree of the source node
  std::size_t rank = 0;
};

/// Homology ranks over the truncated Novikov field with the induced maps reported by rank.
struct LongExactSequence {
  std::vector<LesNode> nodes;
  std::vector<LesMap> maps;
  Rational cap;
  bool exact() const;
};

/// Builds the sequence without enforcing exactness or hypotheses.
LongExactSequence compute_les(const TriangleData& t, std::optional<Rational> cap = std::nullopt);

/// Requires the hypotheses (HypothesisFailed otherwise) and exactness at every
/// node (ExactnessFailure otherwise). Default cap is 10 eps.
LongExactSequence extract_les(const TriangleData& t, std::optional<Rational> cap = std::nullopt);

/// Matrix of f from source degree k, normalized, rows and columns in name order.
NMatrix map_matrix(const FilteredMap& f, int k);

/// Rank of the map induced on H^k by a chain map f: A -> B of degree zero.
std::size_t induced_rank(const FilteredComplex& a, const FilteredComplex& b, const FilteredMap& f, int k,
                         const Rational& W);

}  // namespace seqlab
