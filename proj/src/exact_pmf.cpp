#include "midp/exact_pmf.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace midp {

namespace {

void check_positive_sum(const std::vector<BigInt>& num, const BigInt& den) {
  BigInt sum = 0;
  for (const BigInt& w : num) {
    if (w <= 0) throw std::invalid_argument("pmf weight must be positive");
    sum += w;
  }
  if (sum != den) throw std::invalid_argument("pmf weights must sum to the denominator");
}

}  // namespace

ExactPmf::ExactPmf(PmfKind kind, int lo, std::vector<BigInt> num, BigInt den)
    : kind_(kind), lo_(lo), num_(std::move(num)), den_(std::move(den)) {
  if (num_.empty()) throw std::invalid_argument("pmf support is empty");
  check_positive_sum(num_, den_);
  cum_.reserve(num_.size());
  BigInt running = 0;
  for (const BigInt& w : num_) {
    running += w;
    cum_.push_back(running);
  }
}

ExactPmf ExactPmf::binomial_half(int n) {
  if (n < 1) throw std::invalid_argument("binomial_half: n must be >= 1");
  std::vector<BigInt> num;
  num.reserve(static_cast<std::size_t>(n) + 1);
  for (int x = 0; x <= n; ++x) num.push_back(binomial_coefficient(n, x));
  ExactPmf pmf(PmfKind::BinomialHalf, 0, std::move(num), pow2(n));
  pmf.trials_ = n;
  return pmf;
}

ExactPmf ExactPmf::hypergeometric(int n1, int n2, int m) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("hypergeometric: margins must be >= 1");
  if (m < 1 || m > n1 + n2) throw std::invalid_argument("hypergeometric: row total out of range");
  int lo = std::max(0, m - n2);
  int hi = std::min(n1, m);
  if (lo > hi) throw std::invalid_argument("hypergeometric: empty support");
  std::vector<BigInt> num;
  num.reserve(static_cast<std::size_t>(hi - lo) + 1);
  for (int x = lo; x <= hi; ++x)
    num.push_back(binomial_coefficient(n1, x) * binomial_coefficient(n2, m - x));
  ExactPmf pmf(PmfKind::Hypergeometric, lo, std::move(num),
               binomial_coefficient(n1 + n2, m));
  pmf.margins_ = Margins{n1, n2, m};
  return pmf;
}

ExactPmf ExactPmf::binomial(const Rational& theta, int n) {
  if (n < 1) throw std::invalid_argument("binomial: n must be >= 1");
  if (theta <= 0 || theta >= 1)
    throw std::invalid_argument("binomial: theta must lie strictly between 0 and 1");
  // Weight C(n, x) * a^x * (b - a)^(n - x) over b^n, with theta = a / b.
  BigInt a = theta.get_num();
  BigInt b = theta.get_den();
  BigInt c = b - a;
  std::vector<BigInt> num;
  num.reserve(static_cast<std::size_t>(n) + 1);
  for (int x = 0; x <= n; ++x) {
    BigInt ax, cx;
    mpz_pow_ui(ax.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(x));
    mpz_pow_ui(cx.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(n - x));
    num.push_back(binomial_coefficient(n, x) * ax * cx);
  }
  BigInt den;
  mpz_pow_ui(den.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(n));
  return ExactPmf(PmfKind::Custom, 0, std::move(num), std::move(den));
}

ExactPmf ExactPmf::noncentral_hypergeometric(int n1, int n2, int m,
                                             const Rational& odds) {
  if (odds <= 0) throw std::invalid_argument("noncentral_hypergeometric: odds must be positive");
  ExactPmf central = hypergeometric(n1, n2, m);
  // Weight C(n1, x) C(n2, m - x) a^x b^(hi - x), with odds = a / b; the power
  // of b keeps every weight integral without changing the ratios.
  BigInt a = odds.get_num();
  BigInt b = odds.get_den();
  int lo = central.min_support();
  int hi = central.max_support();
  std::vector<BigInt> num;
  num.reserve(central.support_size());
  BigInt den = 0;
  for (int x = lo; x <= hi; ++x) {
    BigInt ax, bx;
    mpz_pow_ui(ax.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(x - lo));
    mpz_pow_ui(bx.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(hi - x));
    num.push_back(central.numerator(x) * ax * bx);
    den += num.back();
  }
  return ExactPmf(PmfKind::Custom, lo, std::move(num), std::move(den));
}

const BigInt& ExactPmf::numerator(int x) const {
  if (!contains(x)) throw std::out_of_range("pmf numerator: x outside support");
  return num_[static_cast<std::size_t>(x - lo_)];
}

Rational ExactPmf::mass(int x) const {
  if (!contains(x)) return Rational(0);
  Rational r(numerator(x), den_);
  r.canonicalize();
  return r;
}

double ExactPmf::mass_double(int x) const { return mass(x).get_d(); }

Rational ExactPmf::cdf(int x) const {
  if (x < min_support()) return Rational(0);
  if (x >= max_support()) return Rational(1);
  Rational r(cum_[static_cast<std::size_t>(x - lo_)], den_);
  r.canonicalize();
  return r;
}

double ExactPmf::cdf_double(int x) const { return cdf(x).get_d(); }

std::vector<int> ExactPmf::mode_set() const {
  const BigInt* best = &num_[0];
  for (const BigInt& w : num_)
    if (w > *best) best = &w;
  std::vector<int> modes;
  for (std::size_t i = 0; i < num_.size(); ++i)
    if (num_[i] == *best) modes.push_back(lo_ + static_cast<int>(i));
  return modes;
}

int ExactPmf::lower_mode() const { return mode_set().front(); }

int ExactPmf::trials() const {
  if (kind_ != PmfKind::BinomialHalf)
    throw std::logic_error("trials() is defined only for binomial_half pmfs");
  return trials_;
}

ExactPmf::Margins ExactPmf::margins() const {
  if (kind_ != PmfKind::Hypergeometric)
    throw std::logic_error("margins() is defined only for hypergeometric pmfs");
  return margins_;
}

}  // namespace midp
