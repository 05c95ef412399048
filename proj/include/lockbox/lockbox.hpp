#pragma once

#include <optional>

#include "lockbox/objects.hpp"
#include "lockbox/random.hpp"
#include "lockbox/world.hpp"

namespace lockbox {

struct LockboxConfig {
  unsigned combo_length = 8;
  /// When set, a destroyed box yields an explicit marker instead of a
  /// uniformly random bit.
  bool destroyed_returns_marker = false;
};

enum class OpenTag : std::uint8_t { Revealed, RevealedComplement, Garbled, Marker };

/// What an opening returns. Callers only ever see `value`; `tag` is for
/// test oracles and the adversary-search scorer.
struct OpenResult {
  std::optional<Bit> value;
  OpenTag tag;
};

Combination random_combination(RandomSource& rng, unsigned length);
/// Uniform combination different from `avoid`.
Combination random_combination_except(RandomSource& rng, unsigned length, Combination avoid);

// Pure state transitions.
OpenResult open_box(CombinationLockbox& box, Combination guess, RandomSource& rng,
                    bool destroyed_returns_marker = false);
OpenResult open_box(DualLockbox& box, Combination guess, RandomSource& rng,
                    bool destroyed_returns_marker = false);

// World-level operations: custody, colocation and registration are enforced.
CombinationLockbox& create_lockbox(World& world, Party creator, Serial s, Bit bit, Combination combo,
                                   const LockboxConfig& cfg);
DualLockbox& create_dual_lockbox(World& world, Party creator, Serial s, Bit bit, Combination combo,
                                 Combination anti_combo, const LockboxConfig& cfg);

OpenResult try_open(World& world, Party caller, Serial s, Combination guess, RandomSource& rng,
                    const LockboxConfig& cfg);
OpenResult try_open_dual(World& world, Party caller, Serial s, Combination guess, RandomSource& rng,
                         const LockboxConfig& cfg);

}  // namespace lockbox
