#pragma once

#include <array>
#include <optional>
#include <variant>

#include "lockbox/types.hpp"

namespace lockbox {

enum class BoxStatus : std::uint8_t { Intact, Destroyed };

struct CombinationLockbox {
  Serial serial = 0;
  Bit bit = 0;
  Combination combo;
  BoxStatus status = BoxStatus::Intact;
};

struct DualLockbox {
  Serial serial = 0;
  Bit bit = 0;
  Combination combo;
  Combination anti_combo;
  BoxStatus status = BoxStatus::Intact;
};

/// Hidden state of a lockbox pair. Coordinates live in the world record.
struct LbpPayload {
  Bit b = 0;
  bool read_once = false;
  bool consumed = false;
  std::int64_t p1 = 0;  // momenta: carried, never read
  std::int64_t p2 = 0;
};

struct RcpPayload {
  std::optional<Bit> pair_bit;  // bound at first open of either member
  std::array<bool, 2> opened{false, false};
};

struct TrivialBox {};

using Payload = std::variant<CombinationLockbox, DualLockbox, LbpPayload, RcpPayload, TrivialBox>;

std::string_view payload_kind(const Payload& p);

}  // namespace lockbox
