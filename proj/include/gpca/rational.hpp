#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <string>
#include <string_view>

namespace gpca {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Accepts "a/b", integers, finite decimals and decimal exponents ("1e-6").
// Conversion is exact; anything else throws std::invalid_argument.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& x);

// Fixed-point decimal rendering, rounded toward zero.
std::string to_decimal(const Rational& x, int digits = 12);

double to_double(const Rational& x);

Rational power(const Rational& x, unsigned n);

}  // namespace gpca
