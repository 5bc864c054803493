#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqlab/rational.hpp"

namespace seqlab {

/// One monomial coeff * T^energy * e^(e2/2). The e-exponent is stored doubled
/// so that half-integer exponents stay integral.
struct Term {
  Rational coeff;
  Rational energy;
  int e2 = 0;
};

bool operator==(const Term& a, const Term& b);

/// Element of the universal Novikov ring, optionally truncated at an energy cap
/// (everything at energy >= cap is unknown and dropped).
class NovikovScalar {
 public:
  NovikovScalar() = default;
  /// Sorts, merges like terms, drops zeros and terms at or above the cap.
  explicit NovikovScalar(std::vector<Term> terms, std::optional<Rational> cap = std::nullopt);

  static NovikovScalar constant(const Rational& c);
  static NovikovScalar monomial(const Rational& c, const Rational& energy, int e2 = 0);

  const std::vector<Term>& terms() const { return terms_; }
  const std::optional<Rational>& cap() const { return cap_; }
  bool is_zero() const { return terms_.empty(); }
  /// Leading energy, or nothing for zero (read as +infinity).
  std::optional<Rational> valuation() const;
  /// True when every term has e-exponent zero.
  bool e_free() const;

  Rational coefficient(const Rational& energy, int e2 = 0) const;
  /// Sum of the coefficients at the given energy, all e-exponents together.
  Rational energy_slice_sum(const Rational& energy) const;

  NovikovScalar truncated(const Rational& cap) const;
  NovikovScalar uncapped() const;
  /// Multiplies by T^energy; the cap shifts along.
  NovikovScalar shifted(const Rational& energy, int e2 = 0) const;
  NovikovScalar scaled(const Rational& c) const;
  /// Keeps terms whose energy lies in [lo, hi); either side may be open-ended.
  NovikovScalar energy_window(const std::optional<Rational>& lo, const std::optional<Rational>& hi) const;

  NovikovScalar operator-() const;
  friend NovikovScalar operator+(const NovikovScalar& a, const NovikovScalar& b);
  friend NovikovScalar operator-(const NovikovScalar& a, const NovikovScalar& b);
  friend NovikovScalar operator*(const NovikovScalar& a, const NovikovScalar& b);
  NovikovScalar& operator+=(const NovikovScalar& b);

  /// Structural equality: same terms and same cap.
  friend bool operator==(const NovikovScalar& a, const NovikovScalar& b);
  /// Equality of the terms below `below`, ignoring caps.
  bool agrees_below(const NovikovScalar& other, const Rational& below) const;

  std::string to_text() const;

 private:
  std::vector<Term> terms_;
  std::optional<Rational> cap_;
};

std::optional<Rational> min_cap(const std::optional<Rational>& a, const std::optional<Rational>& b);

NovikovScalar nov_add(const NovikovScalar& a, const NovikovScalar& b);
NovikovScalar nov_mul(const NovikovScalar& a, const NovikovScalar& b);
std::optional<Rational> valuation(const NovikovScalar& a);

/// b with a*b = 1 modulo energies >= cap. Requires a single leading monomial.
/// Throws ZeroDivision for a = 0, NotInvertible when the leading energy carries
/// more than one e-exponent.
NovikovScalar nov_invert(const NovikovScalar& a, const Rational& cap);

/// Deck-transformation class: energy and Maslov index.
struct PiGroupElement {
  Rational energy;
  int maslov = 0;

  friend PiGroupElement operator+(const PiGroupElement& a, const PiGroupElement& b) {
    return {a.energy + b.energy, a.maslov + b.maslov};
  }
  friend PiGroupElement operator-(const PiGroupElement& a) { return {-a.energy, -a.maslov}; }
  friend bool operator==(const PiGroupElement& a, const PiGroupElement& b) {
    return a.energy == b.energy && a.maslov == b.maslov;
  }
};

/// Subgroup of Q x Z generated by finitely many elements.
class PiGroup {
 public:
  PiGroup() = default;
  explicit PiGroup(std::vector<PiGroupElement> generators);
  const std::vector<PiGroupElement>& generators() const { return generators_; }
  bool contains(const PiGroupElement& g) const;

 private:
  std::vector<PiGroupElement> generators_;
  // Hermite basis of the lattice after scaling energies by scale_:
  // rows (a, b) and (0, d) with a >= 0, d >= 0.
  Rational scale_ = 1;
  Integer a_ = 0, b_ = 0, d_ = 0;
};

/// g -> T^E e^(mu/2). With allow_half = false an odd mu throws OddIndex.
NovikovScalar pi_embed(const PiGroupElement& g, bool allow_half = true);

}  // namespace seqlab
