#include "doctest.h"

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "midp/count_table.hpp"
#include "midp/report.hpp"

using namespace midp;

namespace {

CountTable table_from(const std::string& text, long min_total = 0) {
  std::istringstream in(text);
  return parse_count_table(in, min_total);
}

bool rows_equal(const TestRow& a, const TestRow& b) {
  return a.id == b.id && a.c1 == b.c1 && a.c2 == b.c2 && a.n1 == b.n1 &&
         a.n2 == b.n2 && a.lower == b.lower && a.tied == b.tied &&
         a.conventional == b.conventional && a.mid == b.mid && a.dirac == b.dirac &&
         a.rejected == b.rejected;
}

bool reports_equal(const RunReport& a, const RunReport& b) {
  if (a.alpha != b.alpha || a.lambda != b.lambda) return false;
  if (a.has_seed != b.has_seed || a.seed != b.seed) return false;
  if (a.has_margins != b.has_margins) return false;
  if (a.methods != b.methods || a.pi0_used != b.pi0_used) return false;
  if (a.discoveries != b.discoveries) return false;
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (!rows_equal(a.rows[i], b.rows[i])) return false;
  return true;
}

const std::vector<std::string> kAllMethods = {"BH", "BH-Midp", "aBH", "aBH-Midp",
                                              "SARP"};

}  // namespace

TEST_CASE("three-row table separates BH from BH on mid p-values") {
  CountTable t = table_from("id,c1,c2\na,0,4\nb,2,2\nc,0,6\n");
  RunReport r = run_tests(t, 0.05, {"BH", "BH-Midp"}, 0.5, std::nullopt);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].conventional == 0.125);
  CHECK(r.rows[1].conventional == 1.0);
  CHECK(r.rows[2].conventional == 0.03125);
  CHECK(r.rows[0].mid == 0.0625);
  CHECK(r.rows[1].mid == 0.8125);
  CHECK(r.rows[2].mid == 0.015625);

  // 1/32 misses the rank-one BH cutoff 0.05/3, so plain BH keeps everything;
  // the mid p-value 1/64 clears it.
  CHECK(r.discoveries[0] == 0);
  CHECK(r.discoveries[1] == 1);
  CHECK_FALSE(r.rows[2].rejected[0]);
  CHECK(r.rows[2].rejected[1]);
  CHECK_FALSE(r.rows[0].rejected[1]);
  CHECK(r.pi0_used[0] == 1.0);
  CHECK(r.pi0_used[1] == 1.0);
}

TEST_CASE("empty table yields an empty report") {
  CountTable t = table_from("id,c1,c2\n");
  RunReport r = run_tests(t, 0.05, {"BH", "aBH"}, 0.5, std::nullopt);
  CHECK(r.rows.empty());
  REQUIRE(r.discoveries.size() == 2);
  CHECK(r.discoveries[0] == 0);
  CHECK(r.discoveries[1] == 0);
  CHECK(r.pi0_used[0] == 1.0);
  CHECK(r.pi0_used[1] == 1.0);
}

TEST_CASE("method list validation") {
  CountTable t = table_from("id,c1,c2\na,0,4\n");
  CHECK_THROWS_AS(run_tests(t, 0.05, {"SARP"}, 0.5, std::nullopt),
                  std::invalid_argument);
  CHECK_NOTHROW(run_tests(t, 0.05, {"SARP"}, 0.5, std::uint64_t{7}));
  CHECK_THROWS_AS(run_tests(t, 0.05, {"BY"}, 0.5, std::nullopt),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_tests(t, 0.05, {"BH", "BH"}, 0.5, std::nullopt),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_tests(t, 0.0, {"BH"}, 0.5, std::nullopt),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_tests(t, 0.05, {"BH"}, 1.0, std::nullopt),
                  std::invalid_argument);
}

TEST_CASE("reports are deterministic, including the randomized method") {
  CountTable t = table_from(
      "id,c1,c2\na,0,9\nb,3,4\nc,1,8\nd,5,5\ne,0,3\nf,2,10\n");
  RunReport r1 = run_tests(t, 0.1, kAllMethods, 0.5, std::uint64_t{2024});
  RunReport r2 = run_tests(t, 0.1, kAllMethods, 0.5, std::uint64_t{2024});
  CHECK(reports_equal(r1, r2));
  CHECK(r1.methods == kAllMethods);
  for (const TestRow& row : r1.rows) CHECK(row.rejected.size() == 5);
}

TEST_CASE("adaptive methods never shrink the rejection set") {
  std::mt19937 gen(555);
  std::uniform_int_distribution<int> count(0, 12);
  for (int trial = 0; trial < 100; ++trial) {
    std::ostringstream text;
    text << "id,c1,c2\n";
    for (int i = 0; i < 40; ++i) {
      int a = count(gen), b = count(gen);
      if (a == 0 && b == 0) b = 1;  // a testable row needs at least one count
      text << 'r' << i << ',' << a << ',' << b << '\n';
    }
    CountTable t = table_from(text.str());
    RunReport r = run_tests(t, 0.05, kAllMethods, 0.5,
                            static_cast<std::uint64_t>(trial));
    for (const TestRow& row : r.rows) {
      if (row.rejected[0]) CHECK(row.rejected[1]);  // BH -> BH-Midp
      if (row.rejected[0]) CHECK(row.rejected[2]);  // BH -> aBH
      if (row.rejected[1]) CHECK(row.rejected[3]);  // BH-Midp -> aBH-Midp
    }
    CHECK(r.discoveries[1] >= r.discoveries[0]);
    CHECK(r.discoveries[2] >= r.discoveries[0]);
    CHECK(r.discoveries[3] >= r.discoveries[1]);
    for (double pi0 : r.pi0_used) {
      CHECK(pi0 > 0.0);
      CHECK(pi0 <= 1.0);
    }
  }
}

TEST_CASE("fisher rows carry margins and flag single-class distributions") {
  CountTable t = ingest(std::string(MIDP_TEST_DATA_DIR) + "/fet_small.csv", 0);
  REQUIRE(t.has_margins);
  RunReport r = run_tests(t, 0.05, {"BH", "BH-Midp"}, 0.5, std::nullopt);
  CHECK(r.has_margins);
  REQUIRE(r.rows.size() == 6);
  for (const TestRow& row : r.rows) {
    CHECK(row.n1 == 10);
    CHECK(row.n2 == 10);
  }
  // siteE has total count 1: both tables with one success are equally likely,
  // so its p-value distribution is a single tie class.
  CHECK(r.rows[4].id == "siteE");
  CHECK(r.rows[4].dirac);
  CHECK(r.rows[4].conventional == 1.0);
  CHECK(r.rows[4].mid == 0.5);
  CHECK_FALSE(r.rows[0].dirac);
  CHECK_FALSE(r.rows[3].dirac);
}

TEST_CASE("binomial total-one rows are single-class too") {
  CountTable t = table_from("id,c1,c2\nlone,0,1\npair,1,1\n");
  RunReport r = run_tests(t, 0.05, {"BH"}, 0.5, std::nullopt);
  CHECK(r.rows[0].dirac);
  CHECK(r.rows[0].conventional == 1.0);
  CHECK_FALSE(r.rows[1].dirac);
}

TEST_CASE("json round-trip reproduces the report exactly") {
  CountTable bt = table_from("id,c1,c2\na,0,4\nb,2,2\nc,0,6\nd,1,11\n");
  RunReport r = run_tests(bt, 0.05, kAllMethods, 0.4, std::uint64_t{99});
  CHECK(reports_equal(report_from_json(report_to_json(r)), r));

  RunReport no_seed = run_tests(bt, 0.05, {"BH", "aBH"}, 0.5, std::nullopt);
  nlohmann::json j = report_to_json(no_seed);
  CHECK(j["seed"].is_null());
  RunReport back = report_from_json(j);
  CHECK_FALSE(back.has_seed);
  CHECK(reports_equal(back, no_seed));

  CountTable fet = ingest(std::string(MIDP_TEST_DATA_DIR) + "/fet_small.csv", 0);
  RunReport rf = run_tests(fet, 0.1, {"BH-Midp", "aBH-Midp"}, 0.5, std::nullopt);
  nlohmann::json jf = report_to_json(rf);
  CHECK(jf["tests"][0].contains("N1"));
  CHECK(reports_equal(report_from_json(jf), rf));
}

TEST_CASE("report csv lists settings, totals, and one row per test") {
  CountTable t = table_from("id,c1,c2\na,0,4\nb,2,2\nc,0,6\n");
  RunReport r = run_tests(t, 0.05, {"BH", "BH-Midp"}, 0.5, std::nullopt);
  std::string csv = report_csv(r);
  CHECK(report_csv(r) == csv);

  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "# alpha=0.05 lambda=0.5 seed=none");
  std::getline(lines, line);
  CHECK(line == "# pi0_used: BH=1 BH-Midp=1");
  std::getline(lines, line);
  CHECK(line == "# discoveries: BH=0 BH-Midp=1");
  std::getline(lines, line);
  CHECK(line == "id,c1,c2,lower,tied,conventional,mid,dirac,BH,BH-Midp");
  std::getline(lines, line);
  CHECK(line == "a,0,4,0,0.125,0.125,0.0625,0,0,0");
  std::getline(lines, line);
  CHECK(line == "b,2,2,0.625,0.375,1,0.8125,0,0,0");
  std::getline(lines, line);
  CHECK(line == "c,0,6,0,0.03125,0.03125,0.015625,0,0,1");
  CHECK_FALSE(std::getline(lines, line));

  RunReport seeded = run_tests(t, 0.05, {"SARP"}, 0.5, std::uint64_t{31});
  std::string seeded_csv = report_csv(seeded);
  CHECK(seeded_csv.find("seed=31") != std::string::npos);

  CountTable fet = ingest(std::string(MIDP_TEST_DATA_DIR) + "/fet_small.csv", 0);
  std::string fet_csv = report_csv(run_tests(fet, 0.05, {"BH"}, 0.5, std::nullopt));
  CHECK(fet_csv.find("id,c1,c2,N1,N2,lower,tied,conventional,mid,dirac,BH") !=
        std::string::npos);
}
