#pragma once

#include <optional>
#include <vector>

#include "midp/exact_pmf.hpp"
#include "midp/rational.hpp"

namespace midp {

enum class PValueFlavor { Conventional, Mid };

// Exact two-sided p-values of one observation under a finite-support null.
// lower is the probability of outcomes strictly less likely than x0, tied the
// probability of the tie class of x0.
struct PValueRecord {
  int observation = 0;
  Rational lower;
  Rational tied;
  Rational conventional;   // lower + tied
  Rational mid;            // lower + tied / 2

  double lower_double() const { return lower.get_d(); }
  double tied_double() const { return tied.get_d(); }
  double conventional_double() const { return conventional.get_d(); }
  double mid_double() const { return mid.get_d(); }
};

// One achievable p-value class: all support points of equal null probability.
struct PValueClass {
  Rational mass;           // probability of the class
  Rational conventional;
  Rational mid;
  std::vector<int> points; // members, ascending
};

// All achievable p-values of a pmf, ascending (conventional and mid agree on
// the order).
struct PValueSupport {
  std::vector<PValueClass> entries;
};

// (lower, tied) for the observation x0.
std::pair<Rational, Rational> tail_quantities(const ExactPmf& pmf, int x0);

PValueRecord pvalue_record(const ExactPmf& pmf, int x0);

// lower + (1 - u) * tied rounded once at the end; u = 0 reproduces the
// conventional p-value exactly, u -> 1 approaches the lower tail.
double randomized_pvalue(const ExactPmf& pmf, int x0, double u);

PValueSupport pvalue_support(const ExactPmf& pmf);

// Support points whose p-value is the largest one still <= t; empty when even
// the smallest achievable p-value exceeds t.
std::vector<int> boundary_points(const ExactPmf& pmf, const Rational& t,
                                 PValueFlavor flavor);
std::vector<int> boundary_points(const ExactPmf& pmf, double t, PValueFlavor flavor);

// y(t) = max { x <= lower mode : F(x) <= t }, the left-tail crossing point.
std::optional<int> cdf_boundary(const ExactPmf& pmf, const Rational& t);
std::optional<int> cdf_boundary(const ExactPmf& pmf, double t);

// Pr(P <= t) under the pmf for the chosen flavor, exactly.
Rational pvalue_cdf(const ExactPmf& pmf, const Rational& t, PValueFlavor flavor);
Rational pvalue_cdf(const ExactPmf& pmf, double t, PValueFlavor flavor);

// Two-sided binomial test of theta = 1/2 from a pair of counts.
PValueRecord bt_pvalues(long c1, long c2);

// Fisher's exact test for the 2x2 table with column totals n1, n2.
PValueRecord fet_pvalues(long c1, long c2, long n1, long n2);

}  // namespace midp
