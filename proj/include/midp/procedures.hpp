#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "midp/pvalues.hpp"

namespace midp {

// Adaptive levels are clipped below 1 so a critical constant never reaches it.
inline constexpr double kMaxAdaptiveLevel = 1.0 - 1e-9;

struct StepUpConfig {
  std::vector<double> critical_constants;  // nondecreasing, in (0, 1]
  std::string label;
};

struct StepUpResult {
  std::optional<std::size_t> eta;        // number of rejections, if any
  std::vector<std::size_t> rejected;     // original indices, ascending
  std::vector<std::size_t> order;        // indices sorted by ascending p (stable)

  std::size_t rejection_count() const { return rejected.size(); }
};

// Step-up scan shared by the float and the exact-rational paths: find the
// largest i with P_(i) <= tau_i, then reject everything at or below that
// threshold. Works for any ordered p-value / constant types.
template <class P, class T>
StepUpResult step_up_generic(const std::vector<P>& pvalues,
                             const std::vector<T>& taus) {
  StepUpResult result;
  const std::size_t m = pvalues.size();
  result.order.resize(m);
  std::iota(result.order.begin(), result.order.end(), std::size_t{0});
  std::stable_sort(result.order.begin(), result.order.end(),
                   [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  std::optional<std::size_t> eta;
  for (std::size_t i = 0; i < m; ++i)
    if (!(taus[i] < pvalues[result.order[i]])) eta = i + 1;
  result.eta = eta;
  if (eta) {
    const T& threshold = taus[*eta - 1];
    for (std::size_t i = 0; i < m; ++i)
      if (!(threshold < pvalues[i])) result.rejected.push_back(i);
  }
  return result;
}

StepUpResult step_up(std::span<const double> pvalues, const StepUpConfig& config);

std::vector<double> bh_constants(std::size_t m, double alpha);
StepUpResult bh(std::span<const double> pvalues, double alpha);

// Storey-type null-proportion estimate min(1, (1 + #{P > lambda}) / (m (1 - lambda))).
double storey_pi0(std::span<const double> pvalues, double lambda);

StepUpResult adaptive_bh(std::span<const double> pvalues, double alpha, double pi0_hat);

// Adaptive step-up on randomized p-values; the uniforms come from a private
// stream seeded here, so a fixed seed fixes the outcome.
StepUpResult sarp(std::span<const PValueRecord> records, double alpha, double lambda,
                  std::uint64_t seed);
StepUpResult sarp_with_uniforms(std::span<const PValueRecord> records, double alpha,
                                double lambda, std::span<const double> uniforms);

std::vector<double> randomized_pvalues(std::span<const PValueRecord> records,
                                       std::span<const double> uniforms);

struct ErrorTally {
  std::size_t false_discoveries = 0;  // rejected true nulls
  std::size_t rejections = 0;
  double fdp = 0.0;                   // false_discoveries / max(rejections, 1)
  double tdp = 0.0;                   // true discoveries / max(#false nulls, 1)
};

ErrorTally tally(const StepUpResult& result, const std::vector<bool>& true_null);

}  // namespace midp
