#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace seqlab {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "p" or a plain decimal such as "-1.25" exactly.
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" for integers).
std::string to_string(const Rational& value);

/// Largest positive rational g with a/g and b/g integers. Zero arguments are ignored.
Rational rational_gcd(const Rational& a, const Rational& b);

Integer floor_div(const Rational& value);
Integer ceil_div(const Rational& value);

double to_double(const Rational& value);

}  // namespace seqlab
