#include "lockbox/privacy.hpp"

#include <bit>
#include <cmath>

namespace lockbox::pa {

std::size_t output_length(std::size_t n, std::size_t leak_bound, std::size_t sigma) {
  const std::size_t used = leak_bound + sigma;
  return used >= n ? 0 : n - used;
}

HashSpec identity(std::size_t n) {
  HashSpec h{n, n, std::vector<Bit>(n * n, 0)};
  for (std::size_t i = 0; i < n; ++i) h.matrix[i * n + i] = 1;
  return h;
}

HashSpec random_hash(RandomSource& rng, std::size_t l, std::size_t n) {
  if (l > n) throw SimError(Errc::DimensionError, "hash output longer than its input");
  HashSpec h{n, l, std::vector<Bit>(l * n)};
  for (auto& b : h.matrix) b = rng.bit();
  return h;
}

void validate(const HashSpec& spec) {
  if (spec.l > spec.n) throw SimError(Errc::DimensionError, "hash output longer than its input");
  if (spec.matrix.size() != spec.l * spec.n) throw SimError(Errc::DimensionError, "matrix size does not match l*n");
  for (Bit b : spec.matrix) {
    if (b > 1) throw SimError(Errc::DimensionError, "matrix entries must be 0 or 1");
  }
}

BitString apply(const BitString& bits, const HashSpec& spec) {
  validate(spec);
  if (bits.size() != spec.n) {
    throw SimError(Errc::DimensionError,
                   "input has " + std::to_string(bits.size()) + " bits, hash expects " + std::to_string(spec.n));
  }
  BitString out(spec.l, 0);
  for (std::size_t r = 0; r < spec.l; ++r) {
    Bit acc = 0;
    for (std::size_t c = 0; c < spec.n; ++c) acc ^= spec.at(r, c) & bits[c];
    out[r] = acc;
  }
  return out;
}

std::vector<std::string> to_hex_rows(const HashSpec& spec) {
  static constexpr char digits[] = "0123456789abcdef";
  std::vector<std::string> rows;
  for (std::size_t r = 0; r < spec.l; ++r) {
    std::string row((spec.n + 3) / 4, '0');
    for (std::size_t c = 0; c < spec.n; ++c) {
      if (spec.at(r, c)) {
        const auto nib = static_cast<std::size_t>(row[c / 4] >= 'a' ? row[c / 4] - 'a' + 10 : row[c / 4] - '0');
        row[c / 4] = digits[nib | (8u >> (c % 4))];
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

HashSpec from_hex_rows(const std::vector<std::string>& rows, std::size_t n) {
  HashSpec h{n, rows.size(), std::vector<Bit>(rows.size() * n, 0)};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != (n + 3) / 4) throw SimError(Errc::DimensionError, "hex row has the wrong width");
    for (std::size_t c = 0; c < n; ++c) {
      const char ch = rows[r][c / 4];
      unsigned nib;
      if (ch >= '0' && ch <= '9') nib = ch - '0';
      else if (ch >= 'a' && ch <= 'f') nib = ch - 'a' + 10;
      else throw SimError(Errc::DimensionError, "bad hex digit in hash row");
      h.matrix[r * n + c] = (nib >> (3 - c % 4)) & 1u;
    }
  }
  validate(h);
  return h;
}

UniformityReport uniformity_check(std::size_t n, std::size_t l, std::size_t t) {
  if (l > n || t > n || l * n > 20) throw SimError(Errc::InvalidArgument, "uniformity check: sizes out of range");
  UniformityReport rep;
  rep.matrices = std::size_t{1} << (l * n);
  rep.bound = std::pow(2.0, -static_cast<double>(static_cast<long>(n) - static_cast<long>(t) - static_cast<long>(l)) / 2);
  const std::size_t outputs = std::size_t{1} << l;

  // row r of matrix m is bits [r*n, (r+1)*n) of m
  auto hash = [&](std::uint32_t m, std::uint32_t x) {
    std::uint32_t y = 0;
    for (std::size_t r = 0; r < l; ++r) {
      const std::uint32_t row = (m >> (r * n)) & ((1u << n) - 1);
      y |= static_cast<std::uint32_t>(std::popcount(row & x) & 1) << r;
    }
    return y;
  };

  for (std::uint32_t known = 0; known < (1u << n); ++known) {
    if (static_cast<std::size_t>(std::popcount(known)) > t) continue;
    ++rep.patterns;
    const std::size_t free_bits = n - std::popcount(known);
    Rational total = 0;
    // Eve knows the bits under `known` (value v) and the matrix; the rest are uniform.
    for (std::uint32_t m = 0; m < rep.matrices; ++m) {
      for (std::uint32_t v = 0; v < (1u << n); ++v) {
        if ((v & ~known) != 0) continue;
        std::vector<std::size_t> counts(outputs, 0);
        for (std::uint32_t x = 0; x < (1u << n); ++x) {
          if ((x & known) != v) continue;
          ++counts[hash(m, x)];
        }
        const std::size_t denom = std::size_t{1} << free_bits;
        Rational sd = 0;
        for (std::size_t c : counts) {
          Rational d = Rational(static_cast<long long>(c), static_cast<long long>(denom)) -
                       Rational(1, static_cast<long long>(outputs));
          sd += d < 0 ? Rational(-d) : d;
        }
        total += sd / 2;
      }
    }
    const Rational avg = total / Rational(static_cast<long long>(rep.matrices) << (n - free_bits));
    if (avg > rep.worst_average_distance) rep.worst_average_distance = avg;
  }
  rep.holds = to_double(rep.worst_average_distance) <= rep.bound;
  return rep;
}

}  // namespace lockbox::pa
