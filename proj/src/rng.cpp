#include "midp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace midp {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  splitmix64(state);
  state ^= 0x632be59bd9b4e019ULL * (stream + 1);
  return splitmix64(state);
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform_open();
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * 3.14159265358979323846 * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

long poisson_quantile(double mean, double u) {
  if (!(mean > 0.0)) throw std::invalid_argument("poisson_quantile: mean must be positive");
  if (!(u >= 0.0 && u < 1.0))
    throw std::invalid_argument("poisson_quantile: u must lie in [0, 1)");
  long k = 0;
  double f;
  if (mean < 60.0) {
    f = std::exp(-mean);
  } else {
    // Start the sum where the pmf is still representable; everything below
    // carries less mass than double resolution can see.
    k = static_cast<long>(mean - 12.0 * std::sqrt(mean) - 20.0);
    if (k < 0) k = 0;
    f = std::exp(static_cast<double>(k) * std::log(mean) - mean -
                 std::lgamma(static_cast<double>(k) + 1.0));
  }
  double cdf = f;
  long cap = static_cast<long>(mean + 60.0 * std::sqrt(mean + 1.0) + 100.0);
  while (cdf < u && k < cap) {
    ++k;
    f *= mean / static_cast<double>(k);
    cdf += f;
  }
  return k;
}

long binomial_quantile(double p, long n, double u) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("binomial_quantile: p must lie in (0, 1)");
  if (n < 1) throw std::invalid_argument("binomial_quantile: n must be >= 1");
  if (!(u >= 0.0 && u < 1.0))
    throw std::invalid_argument("binomial_quantile: u must lie in [0, 1)");
  double odds = p / (1.0 - p);
  double f = std::pow(1.0 - p, static_cast<double>(n));
  double cdf = f;
  long k = 0;
  while (cdf < u && k < n) {
    f *= static_cast<double>(n - k) / static_cast<double>(k + 1) * odds;
    ++k;
    cdf += f;
  }
  return k;
}

double pareto_quantile(double location, double shape, double u) {
  if (!(location > 0.0 && shape > 0.0))
    throw std::invalid_argument("pareto_quantile: location and shape must be positive");
  if (!(u >= 0.0 && u < 1.0))
    throw std::invalid_argument("pareto_quantile: u must lie in [0, 1)");
  return location * std::pow(1.0 - u, -1.0 / shape);
}

}  // namespace midp
