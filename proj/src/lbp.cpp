#include "lockbox/lbp.hpp"

#include <functional>

namespace lockbox::lbp {

namespace {

inline int delta(Location a, Location b) { return a == b ? 1 : 0; }

}  // namespace

std::int64_t serial_op(const PairState& st, Location x) {
  const int d1 = delta(x, st.x1);
  const int d2 = delta(x, st.x2);
  // Off-support the literal formula gives -s when x1 == x2; reading a
  // serial requires being at one of the boxes.
  if (d1 == 0 && d2 == 0) return 0;
  return static_cast<std::int64_t>(st.s) * (d1 + d2 - delta(st.x1, st.x2));
}

int value_op(PairState& st, Location x) {
  if (st.read_once && st.consumed) return 0;
  const int v = (1 + st.b) * delta(x, st.x1) * delta(x, st.x2);
  if (v != 0 && st.read_once) st.consumed = true;
  return v;
}

void flip_op(PairState& st, Location x) {
  const int d1 = delta(x, st.x1);
  const int d2 = delta(x, st.x2);
  if (d1 == 0 && d2 == 0) {
    throw SimError(Errc::NotAtBox, "flip at " + std::to_string(x) + " touches neither box");
  }
  st.b = static_cast<Bit>(st.b ^ d1 ^ d2 ^ delta(st.x1, st.x2));
}

std::int64_t serial_op(const BoxHalf& h, Location x) {
  return static_cast<std::int64_t>(h.s) * delta(x, h.x);
}

int value_op(const BoxHalf& hi, const BoxHalf& hj, Location x) {
  return (1 + (hi.b ^ hj.b)) * delta(x, hi.x) * delta(x, hj.x);
}

void flip_op(BoxHalf& h, Location x) { h.b = static_cast<Bit>(h.b ^ delta(x, h.x)); }

std::int64_t observe_serial(const LocalPair& p, Location x) {
  return std::max(serial_op(p.first, x), serial_op(p.second, x));
}

int observe_value(const LocalPair& p, Location x) { return value_op(p.first, p.second, x); }

void apply_flip(LocalPair& p, Location x) {
  if (p.first.x == x) {
    flip_op(p.first, x);
  } else if (p.second.x == x) {
    flip_op(p.second, x);
  } else {
    throw SimError(Errc::NotAtBox, "flip at " + std::to_string(x) + " touches neither box");
  }
}

LocalPair to_local(const PairState& st, RandomSource& rng) {
  const Bit b1 = rng.bit();
  return {BoxHalf{b1, st.s, st.x1}, BoxHalf{static_cast<Bit>(st.b ^ b1), st.s, st.x2}};
}

namespace {

std::int64_t step_pair(PairState& st, const Op& op) {
  switch (op.kind) {
    case OpKind::Serial: return serial_op(st, op.x);
    case OpKind::Value: return value_op(st, op.x);
    case OpKind::Flip:
      // checked here rather than caught: this runs millions of times
      if (op.x != st.x1 && op.x != st.x2) return kNotAtBox;
      flip_op(st, op.x);
      return 0;
    case OpKind::Move:
      (op.half == 0 ? st.x1 : st.x2) = op.x;
      return 0;
  }
  return 0;
}

std::int64_t step_local(LocalPair& lp, const Op& op) {
  switch (op.kind) {
    case OpKind::Serial: return observe_serial(lp, op.x);
    case OpKind::Value: return observe_value(lp, op.x);
    case OpKind::Flip:
      if (op.x != lp.first.x && op.x != lp.second.x) return kNotAtBox;
      apply_flip(lp, op.x);
      return 0;
    case OpKind::Move:
      (op.half == 0 ? lp.first.x : lp.second.x) = op.x;
      return 0;
  }
  return 0;
}

// Depth-first over all sequences, sharing prefixes; returns false on the
// first diverging observation.
bool agree_from(const PairState& st, const LocalPair& lp, std::span<const Op> alphabet, std::size_t depth) {
  if (depth == 0) return true;
  for (const Op& op : alphabet) {
    PairState s2 = st;
    LocalPair l2 = lp;
    if (step_pair(s2, op) != step_local(l2, op)) return false;
    if ((s2.b) != (l2.first.b ^ l2.second.b)) return false;  // parity bridge
    if (!agree_from(s2, l2, alphabet, depth - 1)) return false;
  }
  return true;
}

}  // namespace

std::vector<std::int64_t> run_pair(PairState st, std::span<const Op> ops) {
  std::vector<std::int64_t> out;
  out.reserve(ops.size());
  for (const Op& op : ops) out.push_back(step_pair(st, op));
  return out;
}

std::vector<std::int64_t> run_local(LocalPair lp, std::span<const Op> ops) {
  std::vector<std::int64_t> out;
  out.reserve(ops.size());
  for (const Op& op : ops) out.push_back(step_local(lp, op));
  return out;
}

std::vector<Op> op_alphabet(std::size_t locations) {
  std::vector<Op> ops;
  for (Location x = 0; x < locations; ++x) {
    ops.push_back({OpKind::Serial, x, 0});
    ops.push_back({OpKind::Value, x, 0});
    ops.push_back({OpKind::Flip, x, 0});
    ops.push_back({OpKind::Move, x, 0});
    ops.push_back({OpKind::Move, x, 1});
  }
  return ops;
}

bool equivalence_oracle(std::size_t locations, std::size_t max_len, std::uint64_t seed, std::size_t samples) {
  if (locations == 0) throw SimError(Errc::InvalidArgument, "need at least one location");
  SeededRandom rng(seed);
  const auto alphabet = op_alphabet(locations);
  const Serial s = 1 + seed % 997;
  for (Bit b = 0; b <= 1; ++b) {
    for (Location x1 = 0; x1 < locations; ++x1) {
      for (Location x2 = 0; x2 < locations; ++x2) {
        const PairState st{b, s, x1, x2};
        const LocalPair lp = to_local(st, rng);
        if ((lp.first.b ^ lp.second.b) != b) return false;
        if (max_len <= 4) {
          if (!agree_from(st, lp, alphabet, max_len)) return false;
          continue;
        }
        std::vector<Op> seq(max_len);
        for (std::size_t k = 0; k < samples; ++k) {
          for (auto& op : seq) op = alphabet[rng.choose(alphabet.size())];
          if (run_pair(st, seq) != run_local(lp, seq)) return false;
        }
      }
    }
  }
  return true;
}

bool no_signaling_check(std::size_t locations, std::size_t max_len) {
  const Serial s = 5;
  for (Bit b = 0; b <= 1; ++b) {
    for (Location x1 = 0; x1 < locations; ++x1) {
      for (Location x2 = 0; x2 < locations; ++x2) {
        if (x1 == x2) continue;
        // Remote alphabet: everything the holder of half 1 can do without
        // bringing it to x2.
        std::vector<Op> remote;
        for (Location x = 0; x < locations; ++x) {
          if (x == x2) continue;
          remote.push_back({OpKind::Serial, x, 0});
          remote.push_back({OpKind::Value, x, 0});
          remote.push_back({OpKind::Flip, x, 0});
          remote.push_back({OpKind::Move, x, 0});
        }
        const PairState base{b, s, x1, x2};
        auto local_view = [&](PairState st) {
          return std::pair{serial_op(st, x2), value_op(st, x2)};
        };
        const auto reference = local_view(base);
        bool ok = true;
        std::function<void(PairState, std::size_t)> walk = [&](PairState st, std::size_t depth) {
          if (!ok) return;
          if (local_view(st) != reference) {
            ok = false;
            return;
          }
          if (depth == 0) return;
          for (const Op& op : remote) {
            // the half-1 holder can only act where half 1 is
            if (op.kind != OpKind::Move && op.x != st.x1) continue;
            PairState next = st;
            step_pair(next, op);
            walk(next, depth - 1);
          }
        };
        walk(base, max_len);
        if (!ok) return false;
      }
    }
  }
  return true;
}

Serial create_pair(World& world, Party creator, Serial s, Bit b, bool read_once) {
  if (b > 1) throw SimError(Errc::InvalidArgument, "bit must be 0 or 1");
  const Location here = world.party_location(creator);
  world.bind(s, LbpPayload{b, read_once, false, 0, 0}, {Part{here, creator}, Part{here, creator}});
  return s;
}

PairState pair_state(const World& world, Serial s) {
  const auto& rec = world.record(s);
  const auto* p = std::get_if<LbpPayload>(&rec.payload);
  if (!p) throw SimError(Errc::InvalidArgument, "serial " + std::to_string(s) + " is not a lockbox pair");
  return PairState{p->b, s, rec.parts[0].location, rec.parts[1].location, p->p1, p->p2, p->read_once, p->consumed};
}

namespace {

void store(World& world, const PairState& st) {
  auto& p = std::get<LbpPayload>(world.payload(st.s));
  p.b = st.b;
  p.consumed = st.consumed;
}

bool holds_half_here(const World& world, Party caller, Serial s) {
  return world.holds(caller, {s, 0}) || world.holds(caller, {s, 1});
}

}  // namespace

std::int64_t serial_op(const World& world, Party caller, Serial s) {
  const PairState st = pair_state(world, s);
  const std::int64_t r = serial_op(st, world.party_location(caller));
  if (r != 0 && !holds_half_here(world, caller, s)) {
    throw SimError(Errc::NotInPossession, std::string(to_string(caller)) + " holds no half of pair " +
                                              std::to_string(s));
  }
  return r;
}

int value_op(World& world, Party caller, Serial s) {
  PairState st = pair_state(world, s);
  const Location x = world.party_location(caller);
  for (std::uint8_t h = 0; h < 2; ++h) {
    const Part& pt = world.part({s, h});
    if (pt.location == x && pt.custodian != caller) {
      throw SimError(Errc::NotInPossession, "half " + std::to_string(h) + " of pair " + std::to_string(s) +
                                                " at the reader's location belongs to " +
                                                std::string(to_string(pt.custodian)));
    }
  }
  const int v = value_op(st, x);
  store(world, st);
  return v;
}

void flip_op(World& world, Party caller, Serial s) {
  PairState st = pair_state(world, s);
  const Location x = world.party_location(caller);
  if (st.x1 != x && st.x2 != x) {
    throw SimError(Errc::NotAtBox, std::string(to_string(caller)) + " is not at either box of pair " +
                                       std::to_string(s));
  }
  if (!holds_half_here(world, caller, s)) {
    throw SimError(Errc::NotInPossession, std::string(to_string(caller)) + " holds no half of pair " +
                                              std::to_string(s));
  }
  flip_op(st, x);
  store(world, st);
}

std::int64_t half_serial(const World& world, Party caller, ObjectRef half) {
  if (!world.holds(caller, half)) {
    throw SimError(Errc::NotInPossession, std::string(to_string(caller)) + " does not hold that half");
  }
  const Part& pt = world.part(half);
  return serial_op(BoxHalf{0, half.serial, pt.location}, world.party_location(caller));
}

}  // namespace lockbox::lbp
