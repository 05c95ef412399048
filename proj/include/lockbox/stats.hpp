#pragma once

#include <cstddef>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace lockbox {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(std::size_t n, std::size_t k);

/// P(K = k) when drawing `draws` items without replacement from a population
/// of `population` items of which `successes` are marked.
Rational hypergeometric_pmf(std::size_t population, std::size_t successes, std::size_t draws, std::size_t k);
/// P(K <= k) under the same model.
Rational hypergeometric_cdf(std::size_t population, std::size_t successes, std::size_t draws, std::size_t k);

double to_double(const Rational& r);

enum class LeakMethod { PlugIn, ExactTail };

std::string_view to_string(LeakMethod m);
LeakMethod leak_method_from_string(std::string_view s);

/// Upper bound on the number of bad items among the `population - sample`
/// items not inspected, given `bad_in_sample` bad items in a uniformly
/// chosen sample.
///
/// PlugIn: rate estimate plus z·(finite-population standard error), which is
/// 0 when nothing bad was seen. ExactTail: largest total bad count whose
/// hypergeometric lower tail at the observation is still >= 1 - confidence.
std::size_t leak_upper_bound(std::size_t population, std::size_t sample, std::size_t bad_in_sample,
                             double confidence = 0.95, LeakMethod method = LeakMethod::PlugIn);

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// Two-sided standard normal quantile for a central `confidence` mass.
double normal_quantile_two_sided(double confidence);

}  // namespace lockbox
