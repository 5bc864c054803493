#include "seqlab/novikov.hpp"

#include <algorithm>
#include <map>

#include "seqlab/errors.hpp"

namespace seqlab {

namespace {

bool key_less(const Term& a, const Term& b) {
  if (a.energy != b.energy) return a.energy < b.energy;
  return a.e2 < b.e2;
}

std::string exponent_text(int e2) {
  if (e2 % 2 == 0) return std::to_string(e2 / 2);
  return std::to_string(e2) + "/2";
}

}  // namespace

bool operator==(const Term& a, const Term& b) {
  return a.coeff == b.coeff && a.energy == b.energy && a.e2 == b.e2;
}

std::optional<Rational> min_cap(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

NovikovScalar::NovikovScalar(std::vector<Term> terms, std::optional<Rational> cap) : cap_(std::move(cap)) {
  // Two-argument mpq constructors do not reduce; comparisons assume reduced form.
  if (cap_) cap_->canonicalize();
  for (auto& t : terms) {
    t.coeff.canonicalize();
    t.energy.canonicalize();
  }
  std::sort(terms.begin(), terms.end(), key_less);
  for (auto& t : terms) {
    if (cap_ && t.energy >= *cap_) continue;
    if (!terms_.empty() && terms_.back().energy == t.energy && terms_.back().e2 == t.e2) {
      terms_.back().coeff += t.coeff;
    } else {
      terms_.push_back(std::move(t));
    }
  }
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff == 0; }),
               terms_.end());
}

NovikovScalar NovikovScalar::constant(const Rational& c) { return monomial(c, 0, 0); }

NovikovScalar NovikovScalar::monomial(const Rational& c, const Rational& energy, int e2) {
  return NovikovScalar({Term{c, energy, e2}});
}

std::optional<Rational> NovikovScalar::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().energy;
}

bool NovikovScalar::e_free() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.e2 == 0; });
}

Rational NovikovScalar::coefficient(const Rational& energy, int e2) const {
  for (const auto& t : terms_)
    if (t.energy == energy && t.e2 == e2) return t.coeff;
  return 0;
}

Rational NovikovScalar::energy_slice_sum(const Rational& energy) const {
  Rational s = 0;
  for (const auto& t : terms_)
    if (t.energy == energy) s += t.coeff;
  return s;
}

NovikovScalar NovikovScalar::truncated(const Rational& cap) const {
  return NovikovScalar(terms_, min_cap(cap_, cap));
}

NovikovScalar NovikovScalar::uncapped() const { return NovikovScalar(terms_); }

NovikovScalar NovikovScalar::shifted(const Rational& energy, int e2) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) {
    t.energy += energy;
    t.e2 += e2;
  }
  std::optional<Rational> cap;
  if (cap_) cap = *cap_ + energy;
  return NovikovScalar(std::move(out), cap);
}

NovikovScalar NovikovScalar::scaled(const Rational& c) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coeff *= c;
  return NovikovScalar(std::move(out), cap_);
}

NovikovScalar NovikovScalar::energy_window(const std::optional<Rational>& lo,
                                           const std::optional<Rational>& hi) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (lo && t.energy < *lo) continue;
    if (hi && t.energy >= *hi) continue;
    out.push_back(t);
  }
  return NovikovScalar(std::move(out), cap_);
}

NovikovScalar NovikovScalar::operator-() const { return scaled(-1); }

NovikovScalar operator+(const NovikovScalar& a, const NovikovScalar& b) {
  std::vector<Term> all = a.terms_;
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  return NovikovScalar(std::move(all), min_cap(a.cap_, b.cap_));
}

NovikovScalar operator-(const NovikovScalar& a, const NovikovScalar& b) { return a + (-b); }

NovikovScalar operator*(const NovikovScalar& a, const NovikovScalar& b) {
  // A capped factor is only known below its cap, so the product is known below
  // cap + valuation of the other factor; we keep the plain minimum, which is safe.
  auto cap = min_cap(a.cap_, b.cap_);
  std::vector<Term> all;
  all.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) {
      Rational e = x.energy + y.energy;
      if (cap && e >= *cap) continue;
      all.push_back(Term{x.coeff * y.coeff, std::move(e), x.e2 + y.e2});
    }
  return NovikovScalar(std::move(all), cap);
}

NovikovScalar& NovikovScalar::operator+=(const NovikovScalar& b) { return *this = *this + b; }

bool operator==(const NovikovScalar& a, const NovikovScalar& b) {
  return a.terms_ == b.terms_ && a.cap_ == b.cap_;
}

bool NovikovScalar::agrees_below(const NovikovScalar& other, const Rational& below) const {
  return truncated(below).terms_ == other.truncated(below).terms_;
}

std::string NovikovScalar::to_text() const {
  std::string out;
  if (terms_.empty()) out = "0";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (i) out += " + ";
    out += "(" + to_string(t.coeff) + ")T^" + to_string(t.energy);
    if (t.e2 != 0) out += "e^" + exponent_text(t.e2);
  }
  if (cap_) out += " [cap " + to_string(*cap_) + "]";
  return out;
}

NovikovScalar nov_add(const NovikovScalar& a, const NovikovScalar& b) { return a + b; }
NovikovScalar nov_mul(const NovikovScalar& a, const NovikovScalar& b) { return a * b; }
std::optional<Rational> valuation(const NovikovScalar& a) { return a.valuation(); }

NovikovScalar nov_invert(const NovikovScalar& a, const Rational& cap) {
  if (a.is_zero()) throw ZeroDivision("inverse of the zero scalar");
  const auto& terms = a.terms();
  const Term lead = terms.front();
  if (terms.size() > 1 && terms[1].energy == lead.energy)
    throw NotInvertible("leading energy " + to_string(lead.energy) + " carries several e-exponents");

  Rational effective = cap;
  if (a.cap()) effective = std::min(effective, Rational(*a.cap() - lead.energy));

  // a = L (1 + x) with L the leading monomial and v(x) > 0.
  NovikovScalar lead_inv = NovikovScalar::monomial(1 / lead.coeff, -lead.energy, -lead.e2);
  NovikovScalar x = (lead_inv * a.uncapped() - NovikovScalar::constant(1)).truncated(effective);
  NovikovScalar minus_x = -x;

  NovikovScalar sum = NovikovScalar::constant(1).truncated(effective);
  NovikovScalar power = sum;
  while (true) {
    power = power * minus_x;
    if (power.is_zero()) break;
    sum += power;
  }
  return lead_inv * sum.uncapped();
}

PiGroup::PiGroup(std::vector<PiGroupElement> generators) : generators_(std::move(generators)) {
  Integer lcm = 1;
  for (const auto& g : generators_) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), g.energy.get_den().get_mpz_t());
  scale_ = Rational(lcm);

  std::vector<std::pair<Integer, Integer>> vecs;
  for (const auto& g : generators_) {
    Rational e = g.energy * scale_;
    vecs.emplace_back(e.get_num(), Integer(g.maslov));
  }
  // Combine first coordinates with extended gcd into a single row (a_, b_).
  a_ = 0;
  b_ = 0;
  for (const auto& [x, y] : vecs) {
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a_.get_mpz_t(), x.get_mpz_t());
    if (g == 0) {
      b_ = 0;
      continue;
    }
    b_ = s * b_ + t * y;
    a_ = g;
  }
  if (a_ < 0) {
    a_ = -a_;
    b_ = -b_;
  }
  // What is left after removing multiples of (a_, b_) lies on the vertical axis.
  d_ = 0;
  for (const auto& [x, y] : vecs) {
    Integer rest = y;
    if (a_ != 0) rest -= (x / a_) * b_;
    mpz_gcd(d_.get_mpz_t(), d_.get_mpz_t(), rest.get_mpz_t());
  }
  if (d_ != 0 && a_ != 0) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), b_.get_mpz_t(), d_.get_mpz_t());
    b_ = r;
  }
}

bool PiGroup::contains(const PiGroupElement& g) const {
  Rational e = g.energy * scale_;
  if (e.get_den() != 1) return false;
  Integer x = e.get_num();
  Integer y = g.maslov;
  if (a_ == 0) {
    if (x != 0) return false;
  } else {
    if (x % a_ != 0) return false;
    y -= (x / a_) * b_;
  }
  if (d_ == 0) return y == 0;
  return y % d_ == 0;
}

NovikovScalar pi_embed(const PiGroupElement& g, bool allow_half) {
  if (!allow_half && g.maslov % 2 != 0)
    throw OddIndex("Maslov index " + std::to_string(g.maslov) + " is odd");
  return NovikovScalar::monomial(1, g.energy, g.maslov);
}

}  // namespace seqlab
