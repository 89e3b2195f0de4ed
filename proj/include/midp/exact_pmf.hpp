#pragma once

#include <cstddef>
#include <vector>

#include "midp/rational.hpp"

namespace midp {

enum class PmfKind { BinomialHalf, Hypergeometric, Custom };

// Finite-support discrete distribution stored as exact integer weights over a
// common denominator. Probability ties are decided by integer equality, never
// through floating point.
class ExactPmf {
 public:
  // Binomial(n, 1/2): weights C(n, x) over denominator 2^n.
  static ExactPmf binomial_half(int n);

  // Central hypergeometric for a 2x2 table with column sizes n1, n2 and first
  // row total m: weights C(n1, x) * C(n2, m - x) over C(n1 + n2, m).
  static ExactPmf hypergeometric(int n1, int n2, int m);

  // Data-generating models (used by the oracle); never used for p-values.
  static ExactPmf binomial(const Rational& theta, int n);
  static ExactPmf noncentral_hypergeometric(int n1, int n2, int m,
                                            const Rational& odds);

  PmfKind kind() const { return kind_; }
  int min_support() const { return lo_; }
  int max_support() const { return lo_ + static_cast<int>(num_.size()) - 1; }
  std::size_t support_size() const { return num_.size(); }
  bool contains(int x) const { return x >= min_support() && x <= max_support(); }

  // Integer weight of x; x must lie in the support.
  const BigInt& numerator(int x) const;
  const BigInt& denominator() const { return den_; }

  Rational mass(int x) const;        // exact f(x), zero outside the support
  double mass_double(int x) const;
  Rational cdf(int x) const;         // exact F(x), clamped outside the support
  double cdf_double(int x) const;

  // All support points of maximal probability.
  std::vector<int> mode_set() const;
  int lower_mode() const;            // smallest mode

  // Shape parameters. Valid only for the matching kind.
  int trials() const;                // BinomialHalf: n
  struct Margins { int n1 = 0, n2 = 0, m = 0; };
  Margins margins() const;           // Hypergeometric: (n1, n2, m)

 private:
  ExactPmf(PmfKind kind, int lo, std::vector<BigInt> num, BigInt den);

  PmfKind kind_;
  int lo_;
  std::vector<BigInt> num_;
  std::vector<BigInt> cum_;          // prefix sums of num_
  BigInt den_;
  int trials_ = 0;
  Margins margins_;
};

}  // namespace midp
