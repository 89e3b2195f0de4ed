#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace midp {

using BigInt = mpz_class;
using Rational = mpq_class;

// Exact binary value of a double (no decimal rounding detour).
inline Rational rational_from_double(double x) {
  Rational r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

inline Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Exact value of "3/5", "0.6", "2", "-0.25", with no float rounding.
inline Rational rational_from_decimal(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    Rational r(text, 10);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    r.canonicalize();
    return r;
  }
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  std::size_t dot = s.find('.');
  std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
  std::size_t frac_len = dot == std::string::npos ? 0 : s.size() - dot - 1;
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("not a decimal number: " + text);
  BigInt num(digits, 10);
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
  Rational r(num, den);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline BigInt binomial_coefficient(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt pow2(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

}  // namespace midp
