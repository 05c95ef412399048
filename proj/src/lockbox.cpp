#include "lockbox/lockbox.hpp"

namespace lockbox {

namespace {

void check_combo(Combination c, const LockboxConfig& cfg) {
  if (cfg.combo_length < 1 || cfg.combo_length > 31) {
    throw SimError(Errc::InvalidArgument, "combination length must be in [1, 31]");
  }
  if (c.length != cfg.combo_length) {
    throw SimError(Errc::InvalidArgument, "combination has length " + std::to_string(c.length) +
                                              ", expected " + std::to_string(cfg.combo_length));
  }
  if (c.value >> c.length) throw SimError(Errc::InvalidArgument, "combination value out of range");
}

OpenResult garble(RandomSource& rng, bool marker) {
  if (marker) return {std::nullopt, OpenTag::Marker};
  return {rng.bit(), OpenTag::Garbled};
}

void require_holder(const World& world, Party caller, Serial s) {
  if (!world.holds(caller, {s, 0})) {
    throw SimError(Errc::NotInPossession,
                   std::string(to_string(caller)) + " is not holding lockbox " + std::to_string(s));
  }
}

}  // namespace

Combination random_combination(RandomSource& rng, unsigned length) {
  if (length < 1 || length > 31) throw SimError(Errc::InvalidArgument, "combination length must be in [1, 31]");
  return {static_cast<std::uint32_t>(rng.choose(std::uint64_t{1} << length)), length};
}

Combination random_combination_except(RandomSource& rng, unsigned length, Combination avoid) {
  if (length < 1 || length > 31) throw SimError(Errc::InvalidArgument, "combination length must be in [1, 31]");
  // uniform over the 2^c - 1 other strings, no rejection loop
  auto v = static_cast<std::uint32_t>(rng.choose((std::uint64_t{1} << length) - 1));
  if (v >= avoid.value) ++v;
  return {v, length};
}

OpenResult open_box(CombinationLockbox& box, Combination guess, RandomSource& rng, bool marker) {
  if (box.status == BoxStatus::Intact && guess == box.combo) {
    return {box.bit, OpenTag::Revealed};
  }
  box.status = BoxStatus::Destroyed;
  return garble(rng, marker);
}

OpenResult open_box(DualLockbox& box, Combination guess, RandomSource& rng, bool marker) {
  if (box.status == BoxStatus::Intact) {
    if (guess == box.combo) return {box.bit, OpenTag::Revealed};
    if (guess == box.anti_combo) return {static_cast<Bit>(1 - box.bit), OpenTag::RevealedComplement};
  }
  box.status = BoxStatus::Destroyed;
  return garble(rng, marker);
}

CombinationLockbox& create_lockbox(World& world, Party creator, Serial s, Bit bit, Combination combo,
                                   const LockboxConfig& cfg) {
  check_combo(combo, cfg);
  if (bit > 1) throw SimError(Errc::InvalidArgument, "bit must be 0 or 1");
  world.bind(s, CombinationLockbox{s, bit, combo, BoxStatus::Intact},
             {Part{world.party_location(creator), creator}});
  return std::get<CombinationLockbox>(world.payload(s));
}

DualLockbox& create_dual_lockbox(World& world, Party creator, Serial s, Bit bit, Combination combo,
                                 Combination anti_combo, const LockboxConfig& cfg) {
  check_combo(combo, cfg);
  check_combo(anti_combo, cfg);
  if (combo == anti_combo) throw SimError(Errc::InvalidArgument, "anti-combination must differ from combination");
  if (bit > 1) throw SimError(Errc::InvalidArgument, "bit must be 0 or 1");
  world.bind(s, DualLockbox{s, bit, combo, anti_combo, BoxStatus::Intact},
             {Part{world.party_location(creator), creator}});
  return std::get<DualLockbox>(world.payload(s));
}

OpenResult try_open(World& world, Party caller, Serial s, Combination guess, RandomSource& rng,
                    const LockboxConfig& cfg) {
  require_holder(world, caller, s);
  auto* box = std::get_if<CombinationLockbox>(&world.payload(s));
  if (!box) throw SimError(Errc::InvalidArgument, "serial " + std::to_string(s) + " is not a lockbox");
  return open_box(*box, guess, rng, cfg.destroyed_returns_marker);
}

OpenResult try_open_dual(World& world, Party caller, Serial s, Combination guess, RandomSource& rng,
                         const LockboxConfig& cfg) {
  require_holder(world, caller, s);
  auto* box = std::get_if<DualLockbox>(&world.payload(s));
  if (!box) throw SimError(Errc::InvalidArgument, "serial " + std::to_string(s) + " is not a dual lockbox");
  return open_box(*box, guess, rng, cfg.destroyed_returns_marker);
}

}  // namespace lockbox
