#include "latdens/rational.hpp"

#include "latdens/errors.hpp"

#include <cctype>

namespace latdens {

std::string to_string(const BigInt& n) { return n.str(); }

std::string to_string(const Rational& r) { return num(r).str() + "/" + den(r).str(); }

namespace {

BigInt parse_integer(const std::string& text, const std::string& whole) {
  std::size_t start = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) start = 1;
  if (start == text.size()) throw InvalidInput("malformed number: '" + whole + "'");
  for (std::size_t i = start; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw InvalidInput("malformed number: '" + whole + "'");
  BigInt v(text.substr(start));
  return text[0] == '-' ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  const auto slash = t.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(t, text));
  const BigInt n = parse_integer(t.substr(0, slash), text);
  std::string d_text = t.substr(slash + 1);
  BigInt d;
  if (d_text.rfind("2^", 0) == 0) {
    const BigInt k = parse_integer(d_text.substr(2), text);
    if (k < 0 || k > 4096) throw InvalidInput("exponent out of range in '" + text + "'");
    d = BigInt(1) << static_cast<unsigned>(k);
  } else {
    d = parse_integer(d_text, text);
  }
  if (d <= 0) throw InvalidInput("denominator must be positive in '" + text + "'");
  return Rational(n, d);
}

BigInt ipow(const BigInt& base, unsigned exponent) { return boost::multiprecision::pow(base, exponent); }

Rational rpow(const Rational& base, int exponent) {
  if (exponent >= 0) return Rational(ipow(num(base), exponent), ipow(den(base), exponent));
  if (base == 0) throw DivisionByZero("zero to a negative power");
  return Rational(ipow(den(base), -exponent), ipow(num(base), -exponent));
}

int valuation(const BigInt& n, const BigInt& p) {
  if (n == 0) throw InvalidInput("valuation of zero");
  BigInt m = abs(n);
  int v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

int valuation(const Rational& r, const BigInt& p) { return valuation(num(r), p) - valuation(den(r), p); }

BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

bool is_perfect_square(const BigInt& n, BigInt* root) {
  if (n < 0) return false;
  const BigInt s = boost::multiprecision::sqrt(n);
  if (s * s != n) return false;
  if (root) *root = s;
  return true;
}

}  // namespace latdens
