#include "midp/oracle.hpp"

#include <stdexcept>

#include "midp/procedures.hpp"

namespace midp {

namespace {

struct TestTable {
  std::vector<Rational> pvalue;  // per support offset, chosen flavor
  std::vector<Rational> weight;  // data-generating mass per support offset
  bool true_null = false;
};

TestTable build_table(const ExactPmf& null_pmf, const ExactPmf& data_pmf,
                      bool true_null, PValueFlavor flavor) {
  if (data_pmf.min_support() != null_pmf.min_support() ||
      data_pmf.max_support() != null_pmf.max_support())
    throw std::invalid_argument("exact_fdr_oracle: data pmf must share the null support");
  TestTable table;
  table.true_null = true_null;
  for (int x = null_pmf.min_support(); x <= null_pmf.max_support(); ++x) {
    PValueRecord rec = pvalue_record(null_pmf, x);
    table.pvalue.push_back(flavor == PValueFlavor::Mid ? rec.mid : rec.conventional);
    table.weight.push_back(data_pmf.mass(x));
  }
  return table;
}

}  // namespace

OracleResult exact_fdr_oracle(const std::vector<ExactPmf>& null_pmfs,
                              const std::vector<AltModel>& alt_models, double alpha,
                              PValueFlavor flavor, std::uint64_t cap) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("exact_fdr_oracle: alpha must lie in (0, 1)");
  const std::size_t m = null_pmfs.size() + alt_models.size();
  if (m == 0) throw std::invalid_argument("exact_fdr_oracle: need at least one test");

  std::vector<TestTable> tables;
  tables.reserve(m);
  for (const ExactPmf& pmf : null_pmfs) tables.push_back(build_table(pmf, pmf, true, flavor));
  for (const AltModel& alt : alt_models)
    tables.push_back(build_table(alt.null_pmf, alt.true_pmf, false, flavor));

  std::uint64_t outcomes = 1;
  for (const TestTable& t : tables) {
    if (outcomes > cap / t.pvalue.size())
      throw std::invalid_argument(
          "exact_fdr_oracle: outcome space exceeds the cap; shrink the instance");
    outcomes *= t.pvalue.size();
  }

  const Rational alpha_exact = rational_from_double(alpha);
  std::vector<Rational> taus;
  taus.reserve(m);
  for (std::size_t r = 1; r <= m; ++r)
    taus.push_back(make_rational(static_cast<long>(r), static_cast<long>(m)) * alpha_exact);

  const std::size_t m1 = alt_models.size();
  Rational fdr(0), power(0);
  std::vector<std::size_t> idx(m, 0);
  std::vector<Rational> pvalues(m);
  while (true) {
    Rational weight(1);
    for (std::size_t i = 0; i < m; ++i) {
      weight *= tables[i].weight[idx[i]];
      pvalues[i] = tables[i].pvalue[idx[i]];
    }
    StepUpResult result = step_up_generic(pvalues, taus);
    std::size_t v = 0;
    for (std::size_t i : result.rejected)
      if (tables[i].true_null) ++v;
    const std::size_t r = result.rejected.size();
    if (r > 0)
      fdr += weight * make_rational(static_cast<long>(v), static_cast<long>(r));
    if (m1 > 0)
      power += weight * make_rational(static_cast<long>(r - v), static_cast<long>(m1));

    std::size_t pos = 0;
    while (pos < m && ++idx[pos] == tables[pos].pvalue.size()) {
      idx[pos] = 0;
      ++pos;
    }
    if (pos == m) break;
  }

  OracleResult res;
  res.fdr = fdr;
  res.power = power;
  res.outcomes_enumerated = outcomes;
  return res;
}

}  // namespace midp
