#pragma once

#include <optional>

#include "lockbox/random.hpp"
#include "lockbox/world.hpp"

namespace lockbox {

struct RcpConfig {
  /// Stronger reading: opening either member also uses up its twin.
  bool consume_both_on_read = false;
};

/// Opens one member of a random correlated pair. The shared bit is bound
/// uniformly at the first open of either member; reopening a member gives
/// nullopt.
std::optional<Bit> open_member(RcpPayload& pair, std::uint8_t member, RandomSource& rng,
                               const RcpConfig& cfg = {});

Serial create_rcp(World& world, Party creator, Serial s);
Serial create_trivial(World& world, Party creator, Serial s);

/// No colocation with the twin is required, only custody of this member.
std::optional<Bit> open_rcp(World& world, Party caller, ObjectRef member, RandomSource& rng,
                            const RcpConfig& cfg = {});

/// Serial of an RCP member or trivial box; never consumes anything.
Serial serial_of(const World& world, Party caller, ObjectRef obj);

}  // namespace lockbox
