#include "midp/bounds.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace midp {

namespace {

void check_taus(std::span<const double> taus) {
  double prev = 0.0;
  for (double t : taus) {
    if (!(t > 0.0 && t <= 1.0))
      throw std::invalid_argument("critical constants must lie in (0, 1]");
    if (t < prev) throw std::invalid_argument("critical constants must be nondecreasing");
    prev = t;
  }
}

// Index of the least-informative null: fewest trials (BT) or smallest row
// total (FET). Also validates the family shape of every pmf.
std::size_t least_informative(const std::vector<ExactPmf>& pmfs, TestFamily family) {
  if (pmfs.empty()) throw std::invalid_argument("need at least one null pmf");
  std::size_t best = 0;
  if (family == TestFamily::BinomialTest) {
    for (std::size_t i = 0; i < pmfs.size(); ++i) {
      if (pmfs[i].kind() != PmfKind::BinomialHalf)
        throw std::invalid_argument("binomial-test family expects binomial-half pmfs");
      if (pmfs[i].trials() < pmfs[best].trials()) best = i;
    }
  } else {
    int common_n = -1;
    for (std::size_t i = 0; i < pmfs.size(); ++i) {
      if (pmfs[i].kind() != PmfKind::Hypergeometric)
        throw std::invalid_argument("fisher family expects hypergeometric pmfs");
      ExactPmf::Margins mg = pmfs[i].margins();
      if (mg.n1 != mg.n2)
        throw std::invalid_argument("fisher family expects equal margins N1 == N2");
      if (common_n < 0) common_n = mg.n1;
      if (mg.n1 != common_n)
        throw std::invalid_argument("fisher family expects one common margin size N");
      if (mg.m < pmfs[best].margins().m) best = i;
    }
    if (pmfs[best].margins().m <= 1)
      throw std::invalid_argument("fisher family needs every row total > 1");
  }
  return best;
}

}  // namespace

CdfFn pvalue_cdf_fn(const ExactPmf& pmf, PValueFlavor flavor) {
  return [pmf, flavor](double t) { return pvalue_cdf(pmf, t, flavor).get_d(); };
}

BoundReport check_superuniform(const std::vector<CdfFn>& null_cdfs,
                               std::span<const double> taus, double alpha,
                               std::size_t m0) {
  if (null_cdfs.empty()) throw std::invalid_argument("check_superuniform: empty null set");
  if (m0 != null_cdfs.size())
    throw std::invalid_argument("check_superuniform: m0 must match the null CDF count");
  if (m0 > taus.size())
    throw std::invalid_argument("check_superuniform: more nulls than critical constants");
  check_taus(taus);

  BoundReport report;
  report.condition_id = "superuniform";
  report.right_side = alpha / static_cast<double>(m0);
  report.left_side = 0.0;
  for (std::size_t i = 0; i < null_cdfs.size(); ++i) {
    double best = 0.0;
    long best_rank = 1;
    for (std::size_t r = 1; r <= taus.size(); ++r) {
      double value = null_cdfs[i](taus[r - 1]) / static_cast<double>(r);
      if (value > best) {
        best = value;
        best_rank = static_cast<long>(r);
      }
    }
    report.witnesses.push_back({i, best_rank, best});
    report.left_side = std::max(report.left_side, best);
  }
  report.holds = report.left_side <= report.right_side;
  return report;
}

double boundary_mass(const ExactPmf& pmf, double alpha) {
  std::optional<int> y = cdf_boundary(pmf, alpha);
  int point = y ? *y + 1 : pmf.min_support();
  return pmf.mass_double(point);
}

BoundReport boundary_mass_check(const std::vector<ExactPmf>& null_pmfs, double alpha,
                                double pi0, std::size_t m0, TestFamily family) {
  if (!(pi0 >= 0.0 && pi0 < 1.0))
    throw std::invalid_argument("boundary_mass_check: pi0 must lie in [0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("boundary_mass_check: alpha must lie in (0, 1)");
  if (m0 < 1) throw std::invalid_argument("boundary_mass_check: m0 must be >= 1");
  std::size_t i0 = least_informative(null_pmfs, family);

  const ExactPmf& pmf = null_pmfs[i0];
  std::optional<int> y = cdf_boundary(pmf, alpha);
  int point = y ? *y + 1 : pmf.min_support();

  BoundReport report;
  report.condition_id = family == TestFamily::BinomialTest ? "boundary-mass-bt"
                                                           : "boundary-mass-fet";
  report.left_side = pmf.mass_double(point);
  report.right_side = (1.0 - pi0) * alpha / static_cast<double>(m0);
  report.holds = report.left_side <= report.right_side;
  report.witnesses.push_back({i0, point, report.left_side});
  return report;
}

double fdr_ceiling(const std::vector<ExactPmf>& null_pmfs, double alpha, double pi0,
                   std::size_t m0, TestFamily family) {
  if (!(pi0 >= 0.0 && pi0 < 1.0))
    throw std::invalid_argument("fdr_ceiling: pi0 must lie in [0, 1)");
  if (m0 == 0) return pi0 * alpha;
  std::size_t i0 = least_informative(null_pmfs, family);
  return pi0 * alpha + static_cast<double>(m0) * boundary_mass(null_pmfs[i0], alpha);
}

SplitBound split_fdr_bound(const std::vector<ExactPmf>& null_pmfs,
                           std::span<const double> taus, double pi0, std::size_t m0) {
  if (taus.empty()) throw std::invalid_argument("split_fdr_bound: need critical constants");
  check_taus(taus);
  if (m0 != null_pmfs.size())
    throw std::invalid_argument("split_fdr_bound: m0 must match the null pmf count");
  if (!(pi0 >= 0.0 && pi0 <= 1.0))
    throw std::invalid_argument("split_fdr_bound: pi0 must lie in [0, 1]");
  const std::size_t m = taus.size();
  double alpha = taus[m - 1];
  for (std::size_t r = 1; r <= m; ++r) {
    double expected = static_cast<double>(r) * alpha / static_cast<double>(m);
    if (std::abs(taus[r - 1] - expected) > 1e-12)
      throw std::invalid_argument("split_fdr_bound: constants must follow the i*alpha/m ladder");
  }
  for (const ExactPmf& pmf : null_pmfs) {
    bool symmetric = pmf.kind() == PmfKind::BinomialHalf ||
                     (pmf.kind() == PmfKind::Hypergeometric &&
                      pmf.margins().n1 == pmf.margins().n2);
    if (!symmetric)
      throw std::invalid_argument("split_fdr_bound: only symmetric null pmfs are supported");
  }

  SplitBound bound;
  bound.level_term = pi0 * alpha / 2.0;
  for (const ExactPmf& pmf : null_pmfs) {
    double worst = 0.0;
    for (std::size_t r = 1; r <= m; ++r)
      worst = std::max(worst, boundary_mass(pmf, taus[r - 1]) / static_cast<double>(r));
    bound.excess_term += worst;
  }
  return bound;
}

double calibrate_alpha(const std::vector<ExactPmf>& null_pmfs, double alpha_target,
                       double pi0, std::size_t m0, TestFamily family) {
  if (!(pi0 >= 0.0 && pi0 < 1.0))
    throw std::invalid_argument("calibrate_alpha: pi0 must lie in [0, 1)");
  if (m0 > 0) least_informative(null_pmfs, family);  // validate shapes up front

  auto ceiling = [&](double a) { return fdr_ceiling(null_pmfs, a, pi0, m0, family); };
  // The ceiling is nondecreasing in alpha, so bisect the 1e-6 grid.
  const std::int64_t grid_max = 999999;
  std::int64_t lo = 1, hi = grid_max, best = 0;
  while (lo <= hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (ceiling(static_cast<double>(mid) * 1e-6) <= alpha_target) {
      best = mid;
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  if (best == 0) return 0.0;
  double result = static_cast<double>(best) * 1e-6;
  if (ceiling(result) > alpha_target) return 0.0;  // re-check the returned point
  return result;
}

}  // namespace midp
