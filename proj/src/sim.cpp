#include "midp/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "midp/format.hpp"
#include "midp/procedures.hpp"

namespace midp {

namespace {

constexpr long kSimTrials = 20;  // binomial design: counts out of 20 per group

constexpr const char* kMethodNames[] = {"BH", "BH-Midp", "aBH", "aBH-Midp", "SARP"};
constexpr const char* kEstimatorNames[] = {"Convp", "Midp", "Randp"};

void validate_config(const SimConfig& cfg) {
  if (cfg.m < 1) throw std::invalid_argument("sim: m must be >= 1");
  if (!(cfg.pi0 >= 0.0 && cfg.pi0 <= 1.0))
    throw std::invalid_argument("sim: pi0 must lie in [0, 1]");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("sim: alpha must lie in (0, 1)");
  if (cfg.n_reps < 1) throw std::invalid_argument("sim: n_reps must be >= 1");
  if (!(cfg.estimator_lambda > 0.0 && cfg.estimator_lambda < 1.0))
    throw std::invalid_argument("sim: lambda must lie in (0, 1)");
  if (cfg.data_model == DataModel::Poisson && cfg.test_family == TestFamily::FisherExact)
    throw std::invalid_argument("sim: Fisher tests need binomial data (fixed margins)");
  if (cfg.dependence == Dependence::Block) {
    if (!(cfg.rho >= 0.0 && cfg.rho < 1.0))
      throw std::invalid_argument("sim: rho must lie in [0, 1)");
    if (cfg.blocks < 1 || cfg.m % cfg.blocks != 0)
      throw std::invalid_argument("sim: block count must divide m");
  }
}

struct PairParams {
  double theta1 = 0.0, theta2 = 0.0;
  bool true_null = false;
};

// Fixed draw order per test keeps replications reproducible: the mean (or the
// shared null rate), then the alternative multiplier where one exists.
std::vector<PairParams> draw_params(const SimConfig& cfg, RngStream& rng) {
  const std::size_t m0 = cfg.null_count();
  std::vector<PairParams> params(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    PairParams& p = params[i];
    p.true_null = i < m0;
    if (cfg.data_model == DataModel::Poisson) {
      p.theta1 = pareto_quantile(3.0, 8.0, rng.uniform());
      p.theta2 = p.true_null ? p.theta1 : p.theta1 * rng.uniform_in(1.5, 6.0);
    } else {
      if (p.true_null) {
        p.theta1 = p.theta2 = rng.uniform_in(0.15, 0.2);
      } else {
        p.theta1 = 0.2;
        p.theta2 = 0.6;
      }
    }
  }
  return params;
}

long draw_count(DataModel model, double theta, double u) {
  return model == DataModel::Poisson ? poisson_quantile(theta, u)
                                     : binomial_quantile(theta, kSimTrials, u);
}

std::vector<CountPair> invert_at(const SimConfig& cfg,
                                 const std::vector<PairParams>& params,
                                 const std::vector<double>& u) {
  std::vector<CountPair> pairs(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    pairs[i].true_null = params[i].true_null;
    pairs[i].c1 = draw_count(cfg.data_model, params[i].theta1, u[i]);
    pairs[i].c2 = draw_count(cfg.data_model, params[i].theta2, u[i]);
  }
  return pairs;
}

std::vector<CountPair> independent_pairs(const SimConfig& cfg,
                                         const std::vector<PairParams>& params,
                                         RngStream& rng) {
  std::vector<CountPair> pairs(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    pairs[i].true_null = params[i].true_null;
    pairs[i].c1 = draw_count(cfg.data_model, params[i].theta1, rng.uniform());
    pairs[i].c2 = draw_count(cfg.data_model, params[i].theta2, rng.uniform());
  }
  return pairs;
}

// l, e, conventional, mid as doubles.
using PRow = std::array<double, 4>;

class PvalueCache {
 public:
  explicit PvalueCache(TestFamily family) : family_(family) {}

  const PRow& lookup(long c1, long c2) {
    long total = c1 + c2;
    auto it = by_total_.find(total);
    if (it == by_total_.end()) it = by_total_.emplace(total, build(total)).first;
    long lo = family_ == TestFamily::FisherExact ? std::max<long>(0, total - kSimTrials) : 0;
    return it->second[static_cast<std::size_t>(c1 - lo)];
  }

 private:
  std::vector<PRow> build(long total) const {
    ExactPmf pmf = family_ == TestFamily::FisherExact
                       ? ExactPmf::hypergeometric(kSimTrials, kSimTrials,
                                                  static_cast<int>(total))
                       : ExactPmf::binomial_half(static_cast<int>(total));
    std::vector<PRow> rows;
    rows.reserve(pmf.support_size());
    for (int x = pmf.min_support(); x <= pmf.max_support(); ++x) {
      PValueRecord rec = pvalue_record(pmf, x);
      rows.push_back({rec.lower_double(), rec.tied_double(),
                      rec.conventional_double(), rec.mid_double()});
    }
    return rows;
  }

  TestFamily family_;
  std::unordered_map<long, std::vector<PRow>> by_total_;
};

struct Welford {
  std::size_t n = 0;
  double mean = 0.0, m2 = 0.0;

  void add(double x) {
    ++n;
    double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double sd() const {
    return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
  }
};

std::string model_name(DataModel m) {
  return m == DataModel::Poisson ? "poisson" : "binomial";
}
std::string family_name(TestFamily f) {
  return f == TestFamily::BinomialTest ? "bt" : "fet";
}
std::string dependence_name(Dependence d) {
  return d == Dependence::Independent ? "independent" : "block";
}

std::string scenario_id(const SimConfig& cfg) {
  std::ostringstream out;
  out << model_name(cfg.data_model) << '/' << family_name(cfg.test_family) << '/'
      << dependence_name(cfg.dependence);
  if (cfg.dependence == Dependence::Block)
    out << "/rho=" << format_double(cfg.rho) << "/blocks=" << cfg.blocks;
  out << "/m=" << cfg.m << "/pi0=" << format_double(cfg.pi0)
      << "/alpha=" << format_double(cfg.alpha) << "/reps=" << cfg.n_reps
      << "/seed=" << cfg.seed;
  return out.str();
}

}  // namespace

std::size_t SimConfig::null_count() const {
  return static_cast<std::size_t>(std::llround(pi0 * static_cast<double>(m)));
}

std::vector<CountPair> gen_poisson_pairs(const SimConfig& config, RngStream& rng) {
  if (config.data_model != DataModel::Poisson)
    throw std::invalid_argument("gen_poisson_pairs: config is not a Poisson design");
  std::vector<PairParams> params = draw_params(config, rng);
  return independent_pairs(config, params, rng);
}

std::vector<CountPair> gen_binomial_pairs(const SimConfig& config, RngStream& rng) {
  if (config.data_model != DataModel::Binomial)
    throw std::invalid_argument("gen_binomial_pairs: config is not a binomial design");
  std::vector<PairParams> params = draw_params(config, rng);
  return independent_pairs(config, params, rng);
}

std::vector<double> gaussian_copula_block(const SimConfig& config, RngStream& rng) {
  if (config.dependence != Dependence::Block)
    throw std::invalid_argument("gaussian_copula_block: config is not block-dependent");
  if (!(config.rho >= 0.0 && config.rho < 1.0))
    throw std::invalid_argument("gaussian_copula_block: rho must lie in [0, 1)");
  if (config.blocks < 1 || config.m % config.blocks != 0)
    throw std::invalid_argument("gaussian_copula_block: block count must divide m");
  const std::size_t block_size = config.m / config.blocks;
  const double shared = std::sqrt(config.rho);
  const double own = std::sqrt(1.0 - config.rho);
  std::vector<double> u(config.m);
  std::size_t k = 0;
  for (std::size_t b = 0; b < config.blocks; ++b) {
    double g0 = rng.normal();
    for (std::size_t j = 0; j < block_size; ++j, ++k)
      u[k] = std_normal_cdf(shared * g0 + own * rng.normal());
  }
  return u;
}

SimSummary run_study(const SimConfig& config) {
  validate_config(config);
  const std::size_t m = config.m;
  const std::size_t m0 = config.null_count();
  const double pi0_true = static_cast<double>(m0) / static_cast<double>(m);

  PvalueCache cache(config.test_family);
  Welford fdp_acc[5], tdp_acc[5], bias_acc[3];
  std::uint64_t untestable = 0, superset_violations = 0;

  std::vector<bool> labels(m);
  std::vector<double> lower(m), tied(m), conv(m), mid(m), rho(m);

  for (std::size_t rep = 0; rep < config.n_reps; ++rep) {
    RngStream data_rng(config.seed, 2 * rep);
    RngStream sarp_rng(config.seed, 2 * rep + 1);

    std::vector<PairParams> params = draw_params(config, data_rng);
    std::vector<CountPair> pairs =
        config.dependence == Dependence::Block
            ? invert_at(config, params, gaussian_copula_block(config, data_rng))
            : independent_pairs(config, params, data_rng);

    for (std::size_t i = 0; i < m; ++i) {
      labels[i] = pairs[i].true_null;
      if (pairs[i].c1 + pairs[i].c2 == 0) {
        // No evidence at all: keep the test in place with p = 1.
        lower[i] = 1.0;
        tied[i] = 0.0;
        conv[i] = 1.0;
        mid[i] = 1.0;
        ++untestable;
        continue;
      }
      const PRow& row = cache.lookup(pairs[i].c1, pairs[i].c2);
      lower[i] = row[0];
      tied[i] = row[1];
      conv[i] = row[2];
      mid[i] = row[3];
    }
    for (std::size_t i = 0; i < m; ++i)
      rho[i] = lower[i] + (1.0 - sarp_rng.uniform()) * tied[i];

    double pi0_conv = storey_pi0(conv, config.estimator_lambda);
    double pi0_mid = storey_pi0(mid, config.estimator_lambda);
    double pi0_rand = storey_pi0(rho, config.estimator_lambda);
    bias_acc[0].add(pi0_conv - pi0_true);
    bias_acc[1].add(pi0_mid - pi0_true);
    bias_acc[2].add(pi0_rand - pi0_true);

    StepUpResult results[5] = {
        bh(conv, config.alpha),
        bh(mid, config.alpha),
        adaptive_bh(conv, config.alpha, pi0_conv),
        adaptive_bh(mid, config.alpha, pi0_mid),
        adaptive_bh(rho, config.alpha, pi0_rand),
    };
    if (!std::includes(results[1].rejected.begin(), results[1].rejected.end(),
                       results[0].rejected.begin(), results[0].rejected.end()))
      ++superset_violations;

    for (int k = 0; k < 5; ++k) {
      ErrorTally t = tally(results[k], labels);
      fdp_acc[k].add(t.fdp);
      tdp_acc[k].add(t.tdp);
    }
  }

  SimSummary summary;
  summary.n_reps = config.n_reps;
  summary.m = m;
  summary.m0 = m0;
  for (int k = 0; k < 5; ++k)
    summary.methods.push_back({kMethodNames[k], fdp_acc[k].mean, fdp_acc[k].sd(),
                               tdp_acc[k].mean, tdp_acc[k].sd()});
  for (int k = 0; k < 3; ++k)
    summary.estimators.push_back({kEstimatorNames[k], bias_acc[k].mean, bias_acc[k].sd()});
  summary.untestable_tests = untestable;
  summary.midp_superset_violations = superset_violations;
  return summary;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  SimConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    std::size_t a = s.find_first_not_of(ws);
    if (a == std::string::npos) return std::string();
    std::size_t b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto bad_value = [&](const std::string& what) {
      return std::runtime_error("config line " + std::to_string(lineno) + ": " +
                                what + " for '" + key + "'");
    };
    try {
      if (key == "m") cfg.m = std::stoull(value);
      else if (key == "pi0") cfg.pi0 = std::stod(value);
      else if (key == "alpha") cfg.alpha = std::stod(value);
      else if (key == "n_reps") cfg.n_reps = std::stoull(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "rho") cfg.rho = std::stod(value);
      else if (key == "blocks") cfg.blocks = std::stoull(value);
      else if (key == "lambda") cfg.estimator_lambda = std::stod(value);
      else if (key == "data_model") {
        if (value == "poisson") cfg.data_model = DataModel::Poisson;
        else if (value == "binomial") cfg.data_model = DataModel::Binomial;
        else throw bad_value("expected poisson or binomial");
      } else if (key == "test_family") {
        if (value == "bt") cfg.test_family = TestFamily::BinomialTest;
        else if (value == "fet") cfg.test_family = TestFamily::FisherExact;
        else throw bad_value("expected bt or fet");
      } else if (key == "dependence") {
        if (value == "independent") cfg.dependence = Dependence::Independent;
        else if (value == "block") cfg.dependence = Dependence::Block;
        else throw bad_value("expected independent or block");
      } else {
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": unknown key '" + key + "'");
      }
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception&) {
      throw bad_value("bad value");
    }
  }
  return cfg;
}

std::string summary_csv(const SimConfig& config, const SimSummary& summary) {
  std::ostringstream out;
  const std::string scen = scenario_id(config);
  out << "scenario,kind,name,fdp_mean,fdp_sd,tdp_mean,tdp_sd,bias_mean,bias_sd\n";
  for (const MethodStats& s : summary.methods)
    out << scen << ",method," << s.name << ',' << format_double(s.fdp_mean) << ','
        << format_double(s.fdp_sd) << ',' << format_double(s.tdp_mean) << ','
        << format_double(s.tdp_sd) << ",,\n";
  for (const EstimatorStats& s : summary.estimators)
    out << scen << ",estimator," << s.name << ",,,,," << format_double(s.bias_mean)
        << ',' << format_double(s.bias_sd) << '\n';
  return out.str();
}

std::string summary_json(const SimConfig& config, const SimSummary& summary) {
  nlohmann::json j;
  j["config"] = {
      {"m", config.m},
      {"pi0", config.pi0},
      {"alpha", config.alpha},
      {"n_reps", config.n_reps},
      {"data_model", model_name(config.data_model)},
      {"test_family", family_name(config.test_family)},
      {"dependence", dependence_name(config.dependence)},
      {"seed", config.seed},
      {"lambda", config.estimator_lambda},
  };
  if (config.dependence == Dependence::Block) {
    j["config"]["rho"] = config.rho;
    j["config"]["blocks"] = config.blocks;
  }
  j["summary"] = {
      {"n_reps", summary.n_reps},
      {"m", summary.m},
      {"m0", summary.m0},
      {"untestable_tests", summary.untestable_tests},
      {"midp_superset_violations", summary.midp_superset_violations},
  };
  for (const MethodStats& s : summary.methods)
    j["summary"]["methods"].push_back({{"name", s.name},
                                       {"fdp_mean", s.fdp_mean},
                                       {"fdp_sd", s.fdp_sd},
                                       {"tdp_mean", s.tdp_mean},
                                       {"tdp_sd", s.tdp_sd}});
  for (const EstimatorStats& s : summary.estimators)
    j["summary"]["estimators"].push_back(
        {{"name", s.name}, {"bias_mean", s.bias_mean}, {"bias_sd", s.bias_sd}});
  return j.dump(2) + "\n";
}

}  // namespace midp
