#include "lockbox/rcp.hpp"

namespace lockbox {

std::optional<Bit> open_member(RcpPayload& pair, std::uint8_t member, RandomSource& rng, const RcpConfig& cfg) {
  if (member > 1) throw SimError(Errc::InvalidArgument, "an RCP has two members");
  if (pair.opened[member]) return std::nullopt;
  if (!pair.pair_bit) pair.pair_bit = rng.bit();
  pair.opened[member] = true;
  if (cfg.consume_both_on_read) pair.opened[1 - member] = true;
  return pair.pair_bit;
}

Serial create_rcp(World& world, Party creator, Serial s) {
  const Location here = world.party_location(creator);
  world.bind(s, RcpPayload{}, {Part{here, creator}, Part{here, creator}});
  return s;
}

Serial create_trivial(World& world, Party creator, Serial s) {
  world.bind(s, TrivialBox{}, {Part{world.party_location(creator), creator}});
  return s;
}

std::optional<Bit> open_rcp(World& world, Party caller, ObjectRef member, RandomSource& rng, const RcpConfig& cfg) {
  if (world.part(member).custodian != caller) {
    throw SimError(Errc::NotInPossession, std::string(to_string(caller)) + " does not hold RCP member " +
                                              std::to_string(member.serial));
  }
  auto* pair = std::get_if<RcpPayload>(&world.payload(member.serial));
  if (!pair) throw SimError(Errc::InvalidArgument, "serial " + std::to_string(member.serial) + " is not an RCP");
  return open_member(*pair, member.part, rng, cfg);
}

Serial serial_of(const World& world, Party caller, ObjectRef obj) {
  if (world.part(obj).custodian != caller) {
    throw SimError(Errc::NotInPossession, std::string(to_string(caller)) + " does not hold serial " +
                                              std::to_string(obj.serial));
  }
  return obj.serial;
}

}  // namespace lockbox
