#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "midp/count_table.hpp"

namespace midp {

struct TestRow {
  std::string id;
  long c1 = 0, c2 = 0;
  long n1 = 0, n2 = 0;          // meaningful only when the report has margins
  double lower = 0.0, tied = 0.0;
  double conventional = 1.0, mid = 1.0;
  bool dirac = false;           // single-class p-value distribution
  std::vector<bool> rejected;   // aligned with RunReport::methods
};

struct RunReport {
  double alpha = 0.05;
  double lambda = 0.5;
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_margins = false;
  std::vector<std::string> methods;
  std::vector<double> pi0_used;          // aligned with methods; 1 for plain BH
  std::vector<TestRow> rows;
  std::vector<std::size_t> discoveries;  // aligned with methods
};

// Known method names: BH, BH-Midp, aBH, aBH-Midp, SARP. SARP needs a seed.
RunReport run_tests(const CountTable& table, double alpha,
                    const std::vector<std::string>& methods, double lambda,
                    std::optional<std::uint64_t> seed);

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);
std::string report_csv(const RunReport& report);

}  // namespace midp
