#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lockbox/random.hpp"
#include "lockbox/stats.hpp"
#include "lockbox/types.hpp"

namespace lockbox::pa {

/// ℓ×n binary matrix over GF(2), row-major.
struct HashSpec {
  std::size_t n = 0;
  std::size_t l = 0;
  std::vector<Bit> matrix;

  Bit at(std::size_t row, std::size_t col) const { return matrix[row * n + col]; }
  friend bool operator==(const HashSpec&, const HashSpec&) = default;
};

std::size_t output_length(std::size_t n, std::size_t leak_bound, std::size_t sigma);

HashSpec identity(std::size_t n);
HashSpec random_hash(RandomSource& rng, std::size_t l, std::size_t n);
/// Checks dimensions and entries; throws DimensionError.
void validate(const HashSpec& spec);

BitString apply(const BitString& bits, const HashSpec& spec);

/// One hex string per row; bit j of a row is bit (j mod 4) of nibble j/4,
/// most significant first.
std::vector<std::string> to_hex_rows(const HashSpec& spec);
HashSpec from_hex_rows(const std::vector<std::string>& rows, std::size_t n);

struct UniformityReport {
  Rational worst_average_distance;  // max over side-information patterns
  double bound = 0;
  std::size_t patterns = 0;
  std::size_t matrices = 0;
  bool holds = false;
};

/// Exhaustive check: for every set of at most `t` known input positions,
/// averages over all 2^(l·n) matrices and all values of the known bits the
/// statistical distance between the hash output and uniform.
UniformityReport uniformity_check(std::size_t n, std::size_t l, std::size_t t);

}  // namespace lockbox::pa
