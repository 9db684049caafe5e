#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace latdens {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
                                               boost::multiprecision::et_off>;

// Canonical "num/den" text, denominator always present.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& n);

// Parses "a", "a/b" (b > 0). Throws InvalidInput on malformed text.
Rational parse_rational(const std::string& text);

BigInt ipow(const BigInt& base, unsigned exponent);
Rational rpow(const Rational& base, int exponent);

// Exponent of p in a nonzero integer.
int valuation(const BigInt& n, const BigInt& p);
int valuation(const Rational& r, const BigInt& p);

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Residue of an integer modulo m in [0, m).
BigInt mod_floor(const BigInt& a, const BigInt& m);

bool is_perfect_square(const BigInt& n, BigInt* root = nullptr);

}  // namespace latdens
