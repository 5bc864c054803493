#pragma once

#include <map>
#include <optional>
#include <vector>

#include "seqlab/filtered_complex.hpp"

namespace seqlab {

/// Dense matrix of Novikov scalars (row-major).
using NMatrix = std::vector<std::vector<NovikovScalar>>;

/// Valuations of the Smith pivots of m over Lambda_0 / T^W, found by repeatedly
/// eliminating along an entry of least valuation (ties: first column, then first row).
/// Entries must have valuation >= 0 or be zero.
std::vector<Rational> smith_invariants(NMatrix m, const Rational& W);

/// Rank over the Novikov field, with entries trusted only below W relative to
/// the least valuation in the matrix.
std::size_t field_rank(const NMatrix& m, const Rational& W);

/// Matrix of the normalized differential from degree p to p+1 (rows: degree
/// p+1 generators, columns: degree p, each in name order), truncated at c.cap.
/// Throws Unsupported for terms carrying e-powers.
NMatrix degree_matrix(const FilteredComplex& c, int p);

/// Generators of degree p in name order.
std::vector<std::size_t> degree_basis(const FilteredComplex& c, int p);

/// Homology of the Q-vector space V = C / T^W with its energy filtration,
/// computed from Smith invariants of every degree piece.
class TruncatedHomology {
 public:
  /// `step` must divide every normalized energy, W itself and every threshold
  /// that will be queried.
  TruncatedHomology(const FilteredComplex& c, const Rational& W, const Rational& step);

  /// dim of the image of H(F^t V) in H(V), degree p.
  std::size_t filtered_dim(int p, const Rational& t) const;
  std::size_t total_dim(int p) const { return filtered_dim(p, 0); }
  /// Rank of H^p(C) over the Novikov field (number of free summands).
  std::size_t field_dim(int p) const;
  const std::vector<Rational>& invariants(int p) const;  // of the map out of degree p

 private:
  std::size_t lattice_count(const Rational& lo) const;  // lattice points in [lo, W)
  Rational W_, step_;
  std::map<int, std::size_t> dims_;
  std::map<int, std::vector<Rational>> inv_;
};

/// Rank of H^p over the Novikov field computed by field elimination.
std::map<int, std::size_t> field_homology(const FilteredComplex& c);

}  // namespace seqlab
