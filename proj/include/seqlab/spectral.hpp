#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqlab/filtered_complex.hpp"

namespace seqlab {

/// Least positive effective order among the terms of (delta - delta_0);
/// nothing when every term has order zero.
std::optional<Rational> detect_gap(const FilteredComplex& c);

struct FiltrationScheme {
  Rational lambda0;
};

/// lambda'' / 2 when the gap is finite, else 1.
FiltrationScheme default_scheme(const FilteredComplex& c);

/// Largest rational dividing every normalized energy of c and every extra value.
Rational lattice_step(const FilteredComplex& c, const std::vector<Rational>& extra);

/// Basis element g * T^(j * step) of V = C / T^cap.
struct PageElement {
  std::size_t generator;
  int degree;
  int layer;  // floor(energy / lambda0)
  Rational energy;
};

struct PageArrow {
  std::size_t from;  // element indices
  std::size_t to;
  Rational coeff;
};

/// One page: cell (p, q) lists the surviving basis elements, the differential
/// maps (p, q) to (p + 1, q + r - 1).
struct SpectralPage {
  int r = 1;
  std::map<std::pair<int, int>, std::vector<std::size_t>> cells;
  std::vector<PageArrow> differential;

  std::size_t rank(int p, int q) const;
  std::size_t total_rank() const;
  /// Ranks summed over p of equal parity.
  std::map<std::pair<int, int>, std::size_t> parity_ranks() const;
};

struct SpectralResult {
  FiltrationScheme scheme;
  Rational step;
  int layers = 0;
  std::vector<PageElement> elements;
  std::vector<SpectralPage> pages;  // E_1 .. E_{r_max}
  int stabilized_at = 1;
  SpectralPage limit;  // E_infinity
};

/// Pages E_1 .. E_{r_max}. Default r_max is floor(cap / lambda0).
/// Throws Unsupported (e-powers), NotAComplex, NotGapped, CapTooSmall.
SpectralResult compute_pages(const FilteredComplex& c, const FiltrationScheme& scheme,
                             std::optional<int> r_max = std::nullopt);

/// First page from which every later differential vanishes. Throws
/// NotStabilized when that page lies beyond the computed ones. The limit ranks
/// are cross-checked against filtered homology from ring elimination.
int stabilization(const FilteredComplex& c, const SpectralResult& s);

struct InjectionReport {
  bool applicable = false;
  bool injective = true;
  std::size_t rank_next = 0;
  std::size_t rank_here = 0;
};

/// Canonical map E_{r+1}^{p,q} -> E_r^{p,q}, examined when q - r + 2 <= 0.
InjectionReport injection_check(const SpectralResult& s, int p, int q, int r);

/// True iff the residue complex is acyclic. When true, also confirms H(C) = 0
/// by field elimination and over Lambda_0 / T^cap; throws std::logic_error on disagreement.
bool vanishing_criterion(const FilteredComplex& c);

/// Q-ranks of H^p of the residue complex.
std::map<int, std::size_t> residue_homology(const FilteredComplex& c);

}  // namespace seqlab
