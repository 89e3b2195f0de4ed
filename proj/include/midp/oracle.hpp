#pragma once

#include <cstdint>
#include <vector>

#include "midp/exact_pmf.hpp"
#include "midp/pvalues.hpp"

namespace midp {

// A false null: data come from true_pmf, p-values are still computed against
// null_pmf. Both must share the same support.
struct AltModel {
  ExactPmf true_pmf;
  ExactPmf null_pmf;
};

struct OracleResult {
  Rational fdr;                         // exact E[V / max(R, 1)]
  Rational power;                       // exact E[true discoveries / max(m1, 1)]
  std::uint64_t outcomes_enumerated = 0;
};

// Brute-force FDR of the step-up procedure with constants r * alpha / m:
// enumerates every joint outcome of the independent tests, weights it by the
// product of data-generating masses, and accumulates FDP / TDP exactly.
OracleResult exact_fdr_oracle(const std::vector<ExactPmf>& null_pmfs,
                              const std::vector<AltModel>& alt_models, double alpha,
                              PValueFlavor flavor, std::uint64_t cap = 10'000'000);

}  // namespace midp
