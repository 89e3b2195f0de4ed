#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "midp/bounds.hpp"
#include "midp/count_table.hpp"
#include "midp/format.hpp"
#include "midp/oracle.hpp"
#include "midp/procedures.hpp"
#include "midp/report.hpp"
#include "midp/sim.hpp"

namespace {

using namespace midp;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

TestFamily family_from(const std::string& name) {
  if (name == "bt") return TestFamily::BinomialTest;
  if (name == "fet") return TestFamily::FisherExact;
  throw std::invalid_argument("--family must be bt or fet");
}

std::string rational_line(const char* label, const Rational& value) {
  return std::string(label) + " " + to_string(value) + " (" +
         format_double(to_double(value)) + ")\n";
}

// Alternative model spec "trials:prob" (bt) or "rowtotal:odds" (fet); the
// second part is an exact decimal or a/b fraction.
std::pair<long, Rational> parse_alt_spec(const std::string& spec) {
  std::size_t colon = spec.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= spec.size())
    throw std::invalid_argument("--alt expects '<integer>:<value>', got '" + spec + "'");
  long head = std::stol(spec.substr(0, colon));
  return {head, rational_from_decimal(spec.substr(colon + 1))};
}

struct PvaluesOpts {
  std::string input, format = "csv", out;
  long min_total = 0;
};

struct TestOpts {
  std::string input, format = "csv", out;
  std::vector<std::string> methods;
  double alpha = 0.05, lambda = 0.5;
  std::uint64_t seed = 0;
  long min_total = 0;
};

struct BoundsOpts {
  std::string family = "bt", format = "text", out;
  std::vector<int> n;
  int margin = 0;
  std::vector<int> totals;
  double alpha = 0.05, pi0 = 0.0, target = 0.0;
  std::uint64_t m0 = 0;
  bool split = false;
};

struct SimulateOpts {
  std::string config, format = "csv", out;
};

struct OracleOpts {
  std::string family = "bt", flavor = "conventional", format = "text", out;
  std::vector<int> n;
  int margin = 0;
  std::vector<int> totals;
  std::vector<std::string> alts;
  double alpha = 0.05;
  std::uint64_t m = 0, cap = 10'000'000;
};

std::vector<ExactPmf> null_pmfs_from(const std::string& family_name,
                                     const std::vector<int>& n, int margin,
                                     const std::vector<int>& totals) {
  std::vector<ExactPmf> pmfs;
  if (family_from(family_name) == TestFamily::BinomialTest) {
    if (n.empty()) throw std::invalid_argument("bt family needs at least one --n");
    if (margin != 0 || !totals.empty())
      throw std::invalid_argument("--margin/--total apply to the fet family only");
    for (int trials : n) pmfs.push_back(ExactPmf::binomial_half(trials));
  } else {
    if (margin < 1) throw std::invalid_argument("fet family needs --margin >= 1");
    if (totals.empty()) throw std::invalid_argument("fet family needs at least one --total");
    if (!n.empty()) throw std::invalid_argument("--n applies to the bt family only");
    for (int total : totals) pmfs.push_back(ExactPmf::hypergeometric(margin, margin, total));
  }
  return pmfs;
}

void run_pvalues(const PvaluesOpts& opt) {
  CountTable table = ingest(opt.input, opt.min_total);
  RunReport report = run_tests(table, 0.05, {}, 0.5, std::nullopt);
  write_output(opt.format == "json" ? report_to_json(report).dump(2) + "\n"
                                    : report_csv(report),
               opt.out);
}

void run_test_cmd(const TestOpts& opt, bool seed_given) {
  std::optional<std::uint64_t> seed;
  if (seed_given) seed = opt.seed;
  std::vector<std::string> methods = opt.methods;
  if (methods.empty()) {
    methods = {"BH", "BH-Midp", "aBH", "aBH-Midp"};
    if (seed) methods.push_back("SARP");
  }
  CountTable table = ingest(opt.input, opt.min_total);
  RunReport report = run_tests(table, opt.alpha, methods, opt.lambda, seed);
  write_output(opt.format == "json" ? report_to_json(report).dump(2) + "\n"
                                    : report_csv(report),
               opt.out);
}

void run_bounds(const BoundsOpts& opt, bool target_given) {
  TestFamily family = family_from(opt.family);
  std::vector<ExactPmf> pmfs = null_pmfs_from(opt.family, opt.n, opt.margin, opt.totals);
  std::size_t m0 = opt.m0 > 0 ? opt.m0 : pmfs.size();

  BoundReport report = boundary_mass_check(pmfs, opt.alpha, opt.pi0, m0, family);
  double ceiling = fdr_ceiling(pmfs, opt.alpha, opt.pi0, m0, family);
  std::optional<SplitBound> split;
  if (opt.split) {
    std::vector<double> taus = bh_constants(pmfs.size(), opt.alpha);
    split = split_fdr_bound(pmfs, taus, opt.pi0, pmfs.size());
  }
  std::optional<double> calibrated;
  if (target_given)
    calibrated = calibrate_alpha(pmfs, opt.target, opt.pi0, m0, family);

  if (opt.format == "json") {
    nlohmann::json j;
    j["condition_id"] = report.condition_id;
    j["left"] = report.left_side;
    j["right"] = report.right_side;
    j["holds"] = report.holds;
    j["witnesses"] = nlohmann::json::array();
    for (const BoundWitness& w : report.witnesses)
      j["witnesses"].push_back({{"test", w.test}, {"point", w.point}, {"value", w.value}});
    j["fdr_ceiling"] = ceiling;
    if (split) {
      j["split_bound"] = {{"level_term", split->level_term},
                          {"excess_term", split->excess_term},
                          {"total", split->total()}};
    }
    if (calibrated) j["calibrated_alpha"] = *calibrated;
    write_output(j.dump(2) + "\n", opt.out);
    return;
  }
  std::string text = report.condition_id + " left=" + format_double(report.left_side) +
                     " right=" + format_double(report.right_side) +
                     (report.holds ? " HOLDS" : " FAILS") + "\n";
  for (const BoundWitness& w : report.witnesses)
    text += "witness test=" + std::to_string(w.test) + " point=" + std::to_string(w.point) +
            " value=" + format_double(w.value) + "\n";
  text += "fdr-ceiling " + format_double(ceiling) + "\n";
  if (split)
    text += "split-bound level=" + format_double(split->level_term) +
            " excess=" + format_double(split->excess_term) +
            " total=" + format_double(split->total()) + "\n";
  if (calibrated) text += "calibrated-alpha " + format_double(*calibrated) + "\n";
  write_output(text, opt.out);
}

void run_simulate(const SimulateOpts& opt) {
  SimConfig cfg = load_sim_config(opt.config);
  SimSummary summary = run_study(cfg);
  write_output(opt.format == "json" ? summary_json(cfg, summary)
                                    : summary_csv(cfg, summary),
               opt.out);
}

void run_oracle(const OracleOpts& opt) {
  TestFamily family = family_from(opt.family);
  PValueFlavor flavor;
  if (opt.flavor == "conventional")
    flavor = PValueFlavor::Conventional;
  else if (opt.flavor == "mid")
    flavor = PValueFlavor::Mid;
  else
    throw std::invalid_argument("--flavor must be conventional or mid");

  std::vector<ExactPmf> nulls;
  if (!opt.n.empty() || !opt.totals.empty() || opt.margin != 0)
    nulls = null_pmfs_from(opt.family, opt.n, opt.margin, opt.totals);
  if (opt.m > 0) {
    if (nulls.size() != 1)
      throw std::invalid_argument("--m replicates a single null spec; give exactly one");
    nulls.assign(opt.m, nulls.front());
  }

  std::vector<AltModel> alts;
  for (const std::string& spec : opt.alts) {
    auto [head, value] = parse_alt_spec(spec);
    if (family == TestFamily::BinomialTest) {
      alts.push_back({ExactPmf::binomial(value, static_cast<int>(head)),
                      ExactPmf::binomial_half(static_cast<int>(head))});
    } else {
      if (opt.margin < 1) throw std::invalid_argument("fet alternatives need --margin");
      alts.push_back({ExactPmf::noncentral_hypergeometric(opt.margin, opt.margin,
                                                          static_cast<int>(head), value),
                      ExactPmf::hypergeometric(opt.margin, opt.margin,
                                               static_cast<int>(head))});
    }
  }

  OracleResult res = exact_fdr_oracle(nulls, alts, opt.alpha, flavor, opt.cap);
  if (opt.format == "json") {
    nlohmann::json j;
    j["fdr"] = to_string(res.fdr);
    j["fdr_value"] = to_double(res.fdr);
    j["power"] = to_string(res.power);
    j["power_value"] = to_double(res.power);
    j["outcomes_enumerated"] = res.outcomes_enumerated;
    write_output(j.dump(2) + "\n", opt.out);
    return;
  }
  std::string text = rational_line("fdr", res.fdr) + rational_line("power", res.power) +
                     "outcomes " + std::to_string(res.outcomes_enumerated) + "\n";
  write_output(text, opt.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact two-sided discrete tests, FDR procedures and bounds"};
  app.require_subcommand(1);

  PvaluesOpts pv;
  CLI::App* pv_cmd = app.add_subcommand("pvalues", "Exact p-values for a count table");
  pv_cmd->add_option("--input", pv.input, "count table CSV")->required();
  pv_cmd->add_option("--min-total", pv.min_total, "drop rows with c1+c2 below this");
  pv_cmd->add_option("--format", pv.format)->check(CLI::IsMember({"csv", "json"}));
  pv_cmd->add_option("--out", pv.out, "output path (default stdout)");

  TestOpts ts;
  CLI::App* ts_cmd = app.add_subcommand("test", "Run step-up procedures on a count table");
  ts_cmd->add_option("--input", ts.input, "count table CSV")->required();
  ts_cmd->add_option("--alpha", ts.alpha, "nominal FDR level");
  ts_cmd->add_option("--method", ts.methods,
                     "BH | BH-Midp | aBH | aBH-Midp | SARP (repeatable)");
  ts_cmd->add_option("--lambda", ts.lambda, "null-proportion estimator threshold");
  ts_cmd->add_option("--seed", ts.seed, "RNG seed (required for SARP)");
  ts_cmd->add_option("--min-total", ts.min_total, "drop rows with c1+c2 below this");
  ts_cmd->add_option("--format", ts.format)->check(CLI::IsMember({"csv", "json"}));
  ts_cmd->add_option("--out", ts.out, "output path (default stdout)");

  BoundsOpts bd;
  CLI::App* bd_cmd = app.add_subcommand("bounds", "Conservativeness conditions and ceilings");
  bd_cmd->add_option("--family", bd.family, "bt | fet");
  bd_cmd->add_option("--n", bd.n, "binomial trials (repeatable, bt)");
  bd_cmd->add_option("--margin", bd.margin, "common margin size N (fet)");
  bd_cmd->add_option("--total", bd.totals, "row total M (repeatable, fet)");
  bd_cmd->add_option("--alpha", bd.alpha, "nominal FDR level");
  bd_cmd->add_option("--pi0", bd.pi0, "true-null proportion");
  bd_cmd->add_option("--m0", bd.m0, "true-null count (default: number of pmfs)");
  bd_cmd->add_option("--target", bd.target, "also calibrate alpha to this ceiling");
  bd_cmd->add_flag("--split", bd.split, "also print the two-part symmetric bound");
  bd_cmd->add_option("--format", bd.format)->check(CLI::IsMember({"text", "json"}));
  bd_cmd->add_option("--out", bd.out, "output path (default stdout)");

  SimulateOpts sm;
  CLI::App* sm_cmd = app.add_subcommand("simulate", "Monte-Carlo study from a config file");
  sm_cmd->add_option("--config", sm.config, "key = value config file")->required();
  sm_cmd->add_option("--format", sm.format)->check(CLI::IsMember({"csv", "json"}));
  sm_cmd->add_option("--out", sm.out, "output path (default stdout)");

  OracleOpts oc;
  CLI::App* oc_cmd = app.add_subcommand("oracle", "Exact brute-force FDR of the step-up rule");
  oc_cmd->add_option("--family", oc.family, "bt | fet");
  oc_cmd->add_option("--n", oc.n, "null binomial trials (repeatable, bt)");
  oc_cmd->add_option("--margin", oc.margin, "common margin size N (fet)");
  oc_cmd->add_option("--total", oc.totals, "null row total M (repeatable, fet)");
  oc_cmd->add_option("--m", oc.m, "replicate a single null spec m times");
  oc_cmd->add_option("--alt", oc.alts,
                     "false null 'trials:prob' (bt) or 'rowtotal:odds' (fet), repeatable");
  oc_cmd->add_option("--alpha", oc.alpha, "nominal FDR level");
  oc_cmd->add_option("--flavor", oc.flavor, "conventional | mid");
  oc_cmd->add_option("--cap", oc.cap, "largest outcome count to enumerate");
  oc_cmd->add_option("--format", oc.format)->check(CLI::IsMember({"text", "json"}));
  oc_cmd->add_option("--out", oc.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
    if (pv_cmd->parsed()) run_pvalues(pv);
    if (ts_cmd->parsed()) run_test_cmd(ts, ts_cmd->count("--seed") > 0);
    if (bd_cmd->parsed()) run_bounds(bd, bd_cmd->count("--target") > 0);
    if (sm_cmd->parsed()) run_simulate(sm);
    if (oc_cmd->parsed()) run_oracle(oc);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
