#include "lockbox/stats.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "lockbox/types.hpp"

namespace lockbox {

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

Rational hypergeometric_pmf(std::size_t population, std::size_t successes, std::size_t draws, std::size_t k) {
  if (successes > population || draws > population) throw SimError(Errc::InvalidArgument, "hypergeometric: bad sizes");
  if (k > successes || k > draws || draws - k > population - successes) return 0;
  return Rational(binomial(successes, k) * binomial(population - successes, draws - k), binomial(population, draws));
}

Rational hypergeometric_cdf(std::size_t population, std::size_t successes, std::size_t draws, std::size_t k) {
  Rational acc = 0;
  for (std::size_t j = 0; j <= k; ++j) acc += hypergeometric_pmf(population, successes, draws, j);
  return acc;
}

double to_double(const Rational& r) { return static_cast<double>(r); }

std::string_view to_string(LeakMethod m) { return m == LeakMethod::PlugIn ? "plugin" : "exact"; }

LeakMethod leak_method_from_string(std::string_view s) {
  if (s == "plugin") return LeakMethod::PlugIn;
  if (s == "exact") return LeakMethod::ExactTail;
  throw SimError(Errc::InvalidArgument, "unknown leak method '" + std::string(s) + "'");
}

double normal_quantile_two_sided(double confidence) {
  boost::math::normal_distribution<double> n;
  return boost::math::quantile(n, 0.5 + confidence / 2);
}

std::size_t leak_upper_bound(std::size_t population, std::size_t sample, std::size_t bad_in_sample, double confidence,
                             LeakMethod method) {
  if (sample > population || bad_in_sample > sample) throw SimError(Errc::InvalidArgument, "leak bound: bad sizes");
  const std::size_t rest = population - sample;
  if (rest == 0) return 0;
  if (method == LeakMethod::PlugIn) {
    if (sample == 0) return rest;
    const double p = static_cast<double>(bad_in_sample) / static_cast<double>(sample);
    const double fpc = population > 1 ? static_cast<double>(rest) / static_cast<double>(population - 1) : 0.0;
    const double se = static_cast<double>(rest) * std::sqrt(p * (1 - p) / static_cast<double>(sample) * fpc);
    const double z = normal_quantile_two_sided(confidence);
    const double bound = std::ceil(p * static_cast<double>(rest) + z * se - 1e-9);
    return std::min<std::size_t>(rest, static_cast<std::size_t>(std::max(0.0, bound)));
  }
  // exact: scan total bad counts upward while the observation stays plausible
  const Rational alpha = Rational(static_cast<long long>(std::llround((1 - confidence) * 1e9)), 1000000000);
  std::size_t best = bad_in_sample;
  for (std::size_t total = bad_in_sample; total <= bad_in_sample + rest; ++total) {
    if (hypergeometric_cdf(population, total, sample, bad_in_sample) >= alpha) best = total;
  }
  return best - bad_in_sample;
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace lockbox
