#include "midp/pvalues.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace midp {

namespace {

Rational over_den(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Mid p-value (2 * below + tied) / (2 * den) without leaving integers early.
Rational mid_from(const BigInt& below, const BigInt& tied, const BigInt& den) {
  return over_den(2 * below + tied, 2 * den);
}

}  // namespace

std::pair<Rational, Rational> tail_quantities(const ExactPmf& pmf, int x0) {
  if (!pmf.contains(x0))
    throw std::invalid_argument("tail_quantities: observation outside the support");
  const BigInt& w0 = pmf.numerator(x0);
  BigInt below = 0, tied = 0;
  for (int x = pmf.min_support(); x <= pmf.max_support(); ++x) {
    const BigInt& w = pmf.numerator(x);
    if (w < w0)
      below += w;
    else if (w == w0)
      tied += w;
  }
  return {over_den(below, pmf.denominator()), over_den(tied, pmf.denominator())};
}

PValueRecord pvalue_record(const ExactPmf& pmf, int x0) {
  auto [lower, tied] = tail_quantities(pmf, x0);
  PValueRecord rec;
  rec.observation = x0;
  rec.lower = lower;
  rec.tied = tied;
  rec.conventional = lower + tied;
  rec.mid = lower + tied / 2;
  return rec;
}

double randomized_pvalue(const ExactPmf& pmf, int x0, double u) {
  if (u < 0.0 || u > 1.0)
    throw std::invalid_argument("randomized_pvalue: u must lie in [0, 1]");
  auto [lower, tied] = tail_quantities(pmf, x0);
  Rational rho = lower + (Rational(1) - rational_from_double(u)) * tied;
  return rho.get_d();
}

PValueSupport pvalue_support(const ExactPmf& pmf) {
  std::vector<int> xs(pmf.support_size());
  std::iota(xs.begin(), xs.end(), pmf.min_support());
  std::stable_sort(xs.begin(), xs.end(), [&](int a, int b) {
    return pmf.numerator(a) < pmf.numerator(b);
  });

  PValueSupport support;
  BigInt below = 0;
  std::size_t i = 0;
  while (i < xs.size()) {
    const BigInt& w = pmf.numerator(xs[i]);
    PValueClass cls;
    BigInt tied = 0;
    std::size_t j = i;
    while (j < xs.size() && pmf.numerator(xs[j]) == w) {
      cls.points.push_back(xs[j]);
      tied += pmf.numerator(xs[j]);
      ++j;
    }
    std::sort(cls.points.begin(), cls.points.end());
    cls.mass = over_den(tied, pmf.denominator());
    cls.conventional = over_den(below + tied, pmf.denominator());
    cls.mid = mid_from(below, tied, pmf.denominator());
    support.entries.push_back(std::move(cls));
    below += tied;
    i = j;
  }
  return support;
}

std::vector<int> boundary_points(const ExactPmf& pmf, const Rational& t,
                                 PValueFlavor flavor) {
  PValueSupport support = pvalue_support(pmf);
  const PValueClass* best = nullptr;
  for (const PValueClass& cls : support.entries) {
    const Rational& p = flavor == PValueFlavor::Mid ? cls.mid : cls.conventional;
    if (p <= t) best = &cls;
  }
  if (!best) return {};
  return best->points;
}

std::vector<int> boundary_points(const ExactPmf& pmf, double t, PValueFlavor flavor) {
  return boundary_points(pmf, rational_from_double(t), flavor);
}

std::optional<int> cdf_boundary(const ExactPmf& pmf, const Rational& t) {
  for (int x = pmf.lower_mode(); x >= pmf.min_support(); --x)
    if (pmf.cdf(x) <= t) return x;
  return std::nullopt;
}

std::optional<int> cdf_boundary(const ExactPmf& pmf, double t) {
  return cdf_boundary(pmf, rational_from_double(t));
}

Rational pvalue_cdf(const ExactPmf& pmf, const Rational& t, PValueFlavor flavor) {
  PValueSupport support = pvalue_support(pmf);
  Rational total(0);
  for (const PValueClass& cls : support.entries) {
    const Rational& p = flavor == PValueFlavor::Mid ? cls.mid : cls.conventional;
    if (p <= t) total += cls.mass;
  }
  return total;
}

Rational pvalue_cdf(const ExactPmf& pmf, double t, PValueFlavor flavor) {
  return pvalue_cdf(pmf, rational_from_double(t), flavor);
}

PValueRecord bt_pvalues(long c1, long c2) {
  if (c1 < 0 || c2 < 0) throw std::invalid_argument("bt_pvalues: counts must be nonnegative");
  long n = c1 + c2;
  if (n < 1) throw std::invalid_argument("bt_pvalues: total count must be >= 1");
  return pvalue_record(ExactPmf::binomial_half(static_cast<int>(n)),
                       static_cast<int>(c1));
}

PValueRecord fet_pvalues(long c1, long c2, long n1, long n2) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("fet_pvalues: margins must be >= 1");
  if (c1 < 0 || c1 > n1 || c2 < 0 || c2 > n2)
    throw std::invalid_argument("fet_pvalues: counts must lie within their margins");
  if (c1 + c2 < 1) throw std::invalid_argument("fet_pvalues: total count must be >= 1");
  return pvalue_record(ExactPmf::hypergeometric(static_cast<int>(n1),
                                                static_cast<int>(n2),
                                                static_cast<int>(c1 + c2)),
                       static_cast<int>(c1));
}

}  // namespace midp
