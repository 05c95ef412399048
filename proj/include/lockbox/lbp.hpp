#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lockbox/random.hpp"
#include "lockbox/world.hpp"

namespace lockbox::lbp {

/// Pair form of a lockbox pair.
struct PairState {
  Bit b = 0;
  Serial s = 0;
  Location x1 = 0;
  Location x2 = 0;
  std::int64_t p1 = 0;
  std::int64_t p2 = 0;
  bool read_once = false;
  bool consumed = false;
};

/// One half in the local (hidden-variable) representation.
struct BoxHalf {
  Bit b = 0;
  Serial s = 0;
  Location x = 0;
};

struct LocalPair {
  BoxHalf first;
  BoxHalf second;
};

// Pair-form operators.

/// s(δ_{x,x1} + δ_{x,x2} − δ_{x1,x2}) for x on the pair's support, 0 elsewhere.
std::int64_t serial_op(const PairState& st, Location x);
/// (1 + b)·δ_{x,x1}·δ_{x,x2}; a successful read consumes a read-once pair.
int value_op(PairState& st, Location x);
/// b ← b ⊕ δ_{x,x1} ⊕ δ_{x,x2} ⊕ δ_{x1,x2}. Throws NotAtBox off-support.
void flip_op(PairState& st, Location x);

// Local-form operators, one box at a time.
std::int64_t serial_op(const BoxHalf& h, Location x);
int value_op(const BoxHalf& hi, const BoxHalf& hj, Location x);
void flip_op(BoxHalf& h, Location x);

// What a party at x observes of a locally represented pair.
std::int64_t observe_serial(const LocalPair& p, Location x);
int observe_value(const LocalPair& p, Location x);
/// Presses the flip button of one half located at x.
void apply_flip(LocalPair& p, Location x);

/// b1 is drawn fresh, b2 = b ⊕ b1.
LocalPair to_local(const PairState& st, RandomSource& rng);

enum class OpKind : std::uint8_t { Serial, Value, Flip, Move };

struct Op {
  OpKind kind = OpKind::Serial;
  Location x = 0;
  std::uint8_t half = 0;  // Move only
};

/// Observation recorded when a flip is attempted where no half is.
inline constexpr std::int64_t kNotAtBox = INT64_MIN;

std::vector<std::int64_t> run_pair(PairState st, std::span<const Op> ops);
std::vector<std::int64_t> run_local(LocalPair lp, std::span<const Op> ops);

/// Every operation over `locations` places: serial/value/flip at each x and
/// a move of either half to each x.
std::vector<Op> op_alphabet(std::size_t locations);

/// Compares the two semantics with matched randomness over every initial
/// state (b, x1, x2). Exhaustive over all sequences of length <= max_len
/// when max_len <= 4, otherwise `samples` random sequences of length
/// max_len per initial state.
bool equivalence_oracle(std::size_t locations, std::size_t max_len, std::uint64_t seed,
                        std::size_t samples = 2000);

/// For every pair with separated halves and every sequence (length <=
/// max_len) of operations performed by whoever holds half 1 without
/// bringing it to half 2, the serial and value readings available at half
/// 2's location are unchanged.
bool no_signaling_check(std::size_t locations, std::size_t max_len);

// World-level operations.

Serial create_pair(World& world, Party creator, Serial s, Bit b, bool read_once = false);
PairState pair_state(const World& world, Serial s);

std::int64_t serial_op(const World& world, Party caller, Serial s);
int value_op(World& world, Party caller, Serial s);
void flip_op(World& world, Party caller, Serial s);
/// Serial reading of a single half, as a holder of just that half sees it.
std::int64_t half_serial(const World& world, Party caller, ObjectRef half);

}  // namespace lockbox::lbp
