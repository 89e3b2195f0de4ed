#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "midp/exact_pmf.hpp"
#include "midp/pvalues.hpp"

namespace midp {

enum class TestFamily { BinomialTest, FisherExact };

using CdfFn = std::function<double(double)>;

struct BoundWitness {
  std::size_t test = 0;   // index into the null list
  long point = 0;         // support point or rank, depending on the condition
  double value = 0.0;
};

struct BoundReport {
  std::string condition_id;
  double left_side = 0.0;
  double right_side = 0.0;
  bool holds = false;
  std::vector<BoundWitness> witnesses;
};

// Null-CDF evaluation of the chosen p-value flavor, for check_superuniform.
CdfFn pvalue_cdf_fn(const ExactPmf& pmf, PValueFlavor flavor);

// Sufficient condition for step-up conservativeness: across all ranks r and
// all null CDFs, F_i(tau_r) / r must stay below alpha / m0.
BoundReport check_superuniform(const std::vector<CdfFn>& null_cdfs,
                               std::span<const double> taus, double alpha,
                               std::size_t m0);

// Null pmf mass at the point just past the left-tail crossing y(alpha); this
// is the quantity the conservativeness conditions cap. Empty crossing falls
// back to the mass at the minimum support point.
double boundary_mass(const ExactPmf& pmf, double alpha);

// Checks boundary mass of the least-informative null (smallest trials for the
// binomial test, smallest row total for Fisher's test) against the budget
// (1 - pi0) * alpha / m0. Condition ids: boundary-mass-bt / boundary-mass-fet.
BoundReport boundary_mass_check(const std::vector<ExactPmf>& null_pmfs, double alpha,
                                double pi0, std::size_t m0, TestFamily family);

// FDR ceiling pi0 * alpha + m0 * boundary mass for step-up on mid p-values.
double fdr_ceiling(const std::vector<ExactPmf>& null_pmfs, double alpha, double pi0,
                   std::size_t m0, TestFamily family);

// Two-part FDR ceiling for symmetric nulls: a level term pi0 * alpha / 2 plus
// an excess term summing each null's worst boundary mass over the rank ladder.
struct SplitBound {
  double level_term = 0.0;
  double excess_term = 0.0;
  double total() const { return level_term + excess_term; }
};

SplitBound split_fdr_bound(const std::vector<ExactPmf>& null_pmfs,
                           std::span<const double> taus, double pi0, std::size_t m0);

// Largest alpha' on a 1e-6 grid whose fdr_ceiling stays within alpha_target;
// 0 when even the smallest grid point overshoots.
double calibrate_alpha(const std::vector<ExactPmf>& null_pmfs, double alpha_target,
                       double pi0, std::size_t m0, TestFamily family);

}  // namespace midp
