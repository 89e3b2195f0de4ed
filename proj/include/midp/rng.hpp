#pragma once

#include <cstdint>
#include <random>

namespace midp {

// Mixing step used to spread a base seed into independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

// Deterministic uniform / normal source. All variates are derived from
// mt19937_64 output through fixed arithmetic, so results are reproducible
// across platforms for a given seed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : gen_(derive_stream_seed(seed, stream)) {}

  std::uint64_t next_u64() { return gen_(); }

  // 53-bit uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1), for inverse transforms that reject 0.
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; generates pairs and caches the spare.
  double normal();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

double std_normal_cdf(double z);

// Generalized inverse CDFs: smallest k with F(k) >= u. Monotone in u, so
// feeding correlated uniforms yields correlated counts.
long poisson_quantile(double mean, double u);
long binomial_quantile(double p, long n, double u);

// Pareto with density shape * location^shape / x^(shape+1) on [location, inf).
double pareto_quantile(double location, double shape, double u);

}  // namespace midp
