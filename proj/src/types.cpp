#include "lockbox/types.hpp"

namespace lockbox {

std::string_view to_string(Party p) {
  switch (p) {
    case Party::Alice: return "Alice";
    case Party::Bob: return "Bob";
    case Party::Eve: return "Eve";
  }
  return "?";
}

Party party_from_string(std::string_view name) {
  if (name == "Alice" || name == "alice") return Party::Alice;
  if (name == "Bob" || name == "bob") return Party::Bob;
  if (name == "Eve" || name == "eve") return Party::Eve;
  throw SimError(Errc::InvalidArgument, "unknown party '" + std::string(name) + "'");
}

std::string Combination::str() const {
  std::string out(length, '0');
  for (unsigned i = 0; i < length; ++i) {
    if ((value >> (length - 1 - i)) & 1u) out[i] = '1';
  }
  return out;
}

std::string_view to_string(Errc e) {
  switch (e) {
    case Errc::InitializationClosed: return "InitializationClosed";
    case Errc::NotInPossession: return "NotInPossession";
    case Errc::SuperluminalMoveRejected: return "SuperluminalMoveRejected";
    case Errc::NotColocated: return "NotColocated";
    case Errc::DuplicateSerial: return "DuplicateSerial";
    case Errc::UnknownSerial: return "UnknownSerial";
    case Errc::NotAtBox: return "NotAtBox";
    case Errc::DimensionError: return "DimensionError";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "?";
}

SimError::SimError(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

std::string bits_to_string(const BitString& bits) {
  std::string out;
  out.reserve(bits.size());
  for (Bit b : bits) out.push_back(b ? '1' : '0');
  return out;
}

}  // namespace lockbox
