#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "midp/bounds.hpp"
#include "midp/rng.hpp"

namespace midp {

enum class DataModel { Poisson, Binomial };
enum class Dependence { Independent, Block };

struct SimConfig {
  std::size_t m = 20;
  double pi0 = 0.5;
  double alpha = 0.05;
  std::size_t n_reps = 250;
  DataModel data_model = DataModel::Poisson;
  TestFamily test_family = TestFamily::BinomialTest;
  Dependence dependence = Dependence::Independent;
  double rho = 0.1;          // within-block correlation (block dependence)
  std::size_t blocks = 50;   // block count; must divide m
  std::uint64_t seed = 1;
  double estimator_lambda = 0.5;

  std::size_t null_count() const;  // round(m * pi0)
};

struct CountPair {
  long c1 = 0;
  long c2 = 0;
  bool true_null = false;
};

struct MethodStats {
  std::string name;
  double fdp_mean = 0.0, fdp_sd = 0.0;
  double tdp_mean = 0.0, tdp_sd = 0.0;
};

struct EstimatorStats {
  std::string name;
  double bias_mean = 0.0, bias_sd = 0.0;
};

struct SimSummary {
  std::size_t n_reps = 0, m = 0, m0 = 0;
  std::vector<MethodStats> methods;        // BH, BH-Midp, aBH, aBH-Midp, SARP
  std::vector<EstimatorStats> estimators;  // Convp, Midp, Randp
  std::uint64_t untestable_tests = 0;      // tests with total count 0, over all reps
  std::uint64_t midp_superset_violations = 0;
};

// One replication of paired counts with independent draws per count. The first
// null_count() tests are the true nulls.
std::vector<CountPair> gen_poisson_pairs(const SimConfig& config, RngStream& rng);
std::vector<CountPair> gen_binomial_pairs(const SimConfig& config, RngStream& rng);

// Quantile vector of an equicorrelated block-normal draw; both counts of test
// i are later inverted at u[i].
std::vector<double> gaussian_copula_block(const SimConfig& config, RngStream& rng);

SimSummary run_study(const SimConfig& config);

// key = value file, # comments. Documented in the README.
SimConfig load_sim_config(const std::string& path);

std::string summary_csv(const SimConfig& config, const SimSummary& summary);
std::string summary_json(const SimConfig& config, const SimSummary& summary);

}  // namespace midp
