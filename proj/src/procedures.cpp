#include "midp/procedures.hpp"

#include <random>
#include <stdexcept>

#include "midp/rng.hpp"

namespace midp {

namespace {

void check_pvalues(std::span<const double> pvalues) {
  for (double p : pvalues)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("step_up: p-values must lie in [0, 1]");
}

void check_constants(const std::vector<double>& taus) {
  double prev = 0.0;
  for (double t : taus) {
    if (!(t > 0.0 && t <= 1.0))
      throw std::invalid_argument("step_up: critical constants must lie in (0, 1]");
    if (t < prev)
      throw std::invalid_argument("step_up: critical constants must be nondecreasing");
    prev = t;
  }
}

}  // namespace

StepUpResult step_up(std::span<const double> pvalues, const StepUpConfig& config) {
  if (pvalues.size() != config.critical_constants.size())
    throw std::invalid_argument("step_up: need one critical constant per p-value");
  check_pvalues(pvalues);
  check_constants(config.critical_constants);
  std::vector<double> p(pvalues.begin(), pvalues.end());
  return step_up_generic(p, config.critical_constants);
}

std::vector<double> bh_constants(std::size_t m, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("bh_constants: alpha must lie in (0, 1)");
  std::vector<double> taus(m);
  // rank fraction first so tau_m lands on alpha exactly
  for (std::size_t i = 0; i < m; ++i)
    taus[i] = alpha * (static_cast<double>(i + 1) / static_cast<double>(m));
  return taus;
}

StepUpResult bh(std::span<const double> pvalues, double alpha) {
  StepUpConfig config{bh_constants(pvalues.size(), alpha), "BH"};
  return step_up(pvalues, config);
}

double storey_pi0(std::span<const double> pvalues, double lambda) {
  if (pvalues.empty())
    throw std::invalid_argument("storey_pi0: need at least one p-value");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("storey_pi0: lambda must lie in (0, 1)");
  check_pvalues(pvalues);
  std::size_t above = 0;
  for (double p : pvalues)
    if (p > lambda) ++above;
  double estimate = (1.0 + static_cast<double>(above)) /
                    (static_cast<double>(pvalues.size()) * (1.0 - lambda));
  return std::min(1.0, estimate);
}

StepUpResult adaptive_bh(std::span<const double> pvalues, double alpha, double pi0_hat) {
  if (!(pi0_hat > 0.0 && pi0_hat <= 1.0))
    throw std::invalid_argument("adaptive_bh: pi0 estimate must lie in (0, 1]");
  double level = std::min(alpha / pi0_hat, kMaxAdaptiveLevel);
  StepUpConfig config{bh_constants(pvalues.size(), level), "aBH"};
  return step_up(pvalues, config);
}

std::vector<double> randomized_pvalues(std::span<const PValueRecord> records,
                                       std::span<const double> uniforms) {
  if (records.size() != uniforms.size())
    throw std::invalid_argument("randomized_pvalues: need one uniform per record");
  std::vector<double> rho(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    double u = uniforms[i];
    if (!(u >= 0.0 && u <= 1.0))
      throw std::invalid_argument("randomized_pvalues: uniforms must lie in [0, 1]");
    Rational r = records[i].lower +
                 (Rational(1) - rational_from_double(u)) * records[i].tied;
    rho[i] = r.get_d();
  }
  return rho;
}

StepUpResult sarp_with_uniforms(std::span<const PValueRecord> records, double alpha,
                                double lambda, std::span<const double> uniforms) {
  std::vector<double> rho = randomized_pvalues(records, uniforms);
  double pi0 = storey_pi0(rho, lambda);
  return adaptive_bh(rho, alpha, pi0);
}

StepUpResult sarp(std::span<const PValueRecord> records, double alpha, double lambda,
                  std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> uniforms(records.size());
  for (double& u : uniforms) u = rng.uniform();
  return sarp_with_uniforms(records, alpha, lambda, uniforms);
}

ErrorTally tally(const StepUpResult& result, const std::vector<bool>& true_null) {
  ErrorTally t;
  std::size_t false_nulls = 0;
  for (bool is_null : true_null)
    if (!is_null) ++false_nulls;
  for (std::size_t idx : result.rejected) {
    if (idx >= true_null.size())
      throw std::invalid_argument("tally: rejected index outside the label vector");
    if (true_null[idx]) ++t.false_discoveries;
  }
  t.rejections = result.rejected.size();
  std::size_t true_discoveries = t.rejections - t.false_discoveries;
  t.fdp = static_cast<double>(t.false_discoveries) /
          static_cast<double>(std::max<std::size_t>(t.rejections, 1));
  t.tdp = static_cast<double>(true_discoveries) /
          static_cast<double>(std::max<std::size_t>(false_nulls, 1));
  return t;
}

}  // namespace midp
