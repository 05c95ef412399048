#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lockbox {

using Location = std::uint32_t;
using Serial = std::uint64_t;
using Bit = std::uint8_t;
using BitString = std::vector<Bit>;

enum class Party : std::uint8_t { Alice, Bob, Eve };

std::string_view to_string(Party p);
Party party_from_string(std::string_view name);

/// A combination is a c-bit string. Stored as an unsigned integer so the
/// numeric ordering used by the multi-box commitment is the natural one.
struct Combination {
  std::uint32_t value = 0;
  unsigned length = 0;

  friend bool operator==(const Combination&, const Combination&) = default;
  friend auto operator<=>(const Combination& a, const Combination& b) {
    return a.value <=> b.value;
  }
  std::string str() const;
};

enum class Errc {
  InitializationClosed,
  NotInPossession,
  SuperluminalMoveRejected,
  NotColocated,
  DuplicateSerial,
  UnknownSerial,
  NotAtBox,
  DimensionError,
  BudgetExceeded,
  InvalidArgument,
};

std::string_view to_string(Errc e);

class SimError : public std::runtime_error {
 public:
  SimError(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

std::string bits_to_string(const BitString& bits);

}  // namespace lockbox
