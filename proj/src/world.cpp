#include "lockbox/world.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace lockbox {

std::string_view payload_kind(const Payload& p) {
  struct Visitor {
    std::string_view operator()(const CombinationLockbox&) const { return "lockbox"; }
    std::string_view operator()(const DualLockbox&) const { return "dual_lockbox"; }
    std::string_view operator()(const LbpPayload& l) const { return l.read_once ? "lbp_read_once" : "lbp"; }
    std::string_view operator()(const RcpPayload&) const { return "rcp"; }
    std::string_view operator()(const TrivialBox&) const { return "trivial"; }
  };
  return std::visit(Visitor{}, p);
}

LocationGraph::LocationGraph(std::size_t size) : adjacency_(size) {}

LocationGraph LocationGraph::path(std::size_t size) {
  LocationGraph g(size);
  for (std::size_t i = 1; i < size; ++i) g.add_edge(static_cast<Location>(i - 1), static_cast<Location>(i));
  return g;
}

void LocationGraph::add_edge(Location a, Location b) {
  if (!contains(a) || !contains(b) || a == b) {
    throw SimError(Errc::InvalidArgument,
                   "bad edge " + std::to_string(a) + "-" + std::to_string(b));
  }
  adjacency_[a].insert(b);
  adjacency_[b].insert(a);
}

bool LocationGraph::adjacent(Location a, Location b) const {
  return contains(a) && adjacency_[a].contains(b);
}

std::vector<std::pair<Location, Location>> LocationGraph::edges() const {
  std::vector<std::pair<Location, Location>> out;
  for (Location a = 0; a < adjacency_.size(); ++a) {
    for (Location b : adjacency_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<Location> LocationGraph::shortest_path(Location from, Location to) const {
  if (!contains(from) || !contains(to)) return {};
  std::vector<std::optional<Location>> prev(size());
  std::vector<bool> seen(size(), false);
  std::deque<Location> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    const Location cur = queue.front();
    queue.pop_front();
    if (cur == to) break;
    for (Location n : adjacency_[cur]) {
      if (!seen[n]) {
        seen[n] = true;
        prev[n] = cur;
        queue.push_back(n);
      }
    }
  }
  if (!seen[to]) return {};
  std::vector<Location> path{to};
  while (path.back() != from) path.push_back(*prev[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

World::World(LocationGraph graph) : graph_(std::move(graph)) {}

std::vector<Serial> World::mint_serials(std::size_t count, std::uint64_t seed) {
  if (clock_ > 0 || !registry_.empty()) {
    throw SimError(Errc::InitializationClosed, "serials are minted only at scenario start");
  }
  if (count == 0) throw SimError(Errc::InvalidArgument, "mint count must be positive");
  std::mt19937_64 gen(seed);
  const Serial start = gen() % 1'000'000;
  std::vector<Serial> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(start + i);
    registry_.insert(start + i);
  }
  return out;
}

void World::place_party(Party p, Location x) {
  if (!graph_.contains(x)) throw SimError(Errc::InvalidArgument, "party placed off-graph");
  if (clock_ > 0 && party_location_.contains(p)) {
    throw SimError(Errc::InitializationClosed, "parties are placed only at scenario start");
  }
  party_location_[p] = x;
}

Location World::party_location(Party p) const {
  auto it = party_location_.find(p);
  if (it == party_location_.end()) {
    throw SimError(Errc::InvalidArgument, std::string(to_string(p)) + " is not placed");
  }
  return it->second;
}

void World::bind(Serial s, Payload payload, std::vector<Part> parts) {
  if (!registry_.contains(s)) {
    throw SimError(Errc::UnknownSerial, "serial " + std::to_string(s) + " was never minted");
  }
  if (objects_.contains(s)) {
    throw SimError(Errc::DuplicateSerial, "serial " + std::to_string(s) + " already bound");
  }
  if (parts.empty()) throw SimError(Errc::InvalidArgument, "object without parts");
  for (const Part& p : parts) {
    if (!graph_.contains(p.location)) throw SimError(Errc::InvalidArgument, "object placed off-graph");
  }
  objects_.emplace(s, ObjectRecord{std::move(payload), std::move(parts)});
}

const ObjectRecord& World::record(Serial s) const {
  auto it = objects_.find(s);
  if (it == objects_.end()) throw SimError(Errc::UnknownSerial, "no object with serial " + std::to_string(s));
  return it->second;
}

ObjectRecord& World::record_mut(Serial s) {
  auto it = objects_.find(s);
  if (it == objects_.end()) throw SimError(Errc::UnknownSerial, "no object with serial " + std::to_string(s));
  return it->second;
}

Payload& World::payload(Serial s) { return record_mut(s).payload; }
const Payload& World::payload(Serial s) const { return record(s).payload; }

const Part& World::part(ObjectRef ref) const {
  const auto& rec = record(ref.serial);
  if (ref.part >= rec.parts.size()) throw SimError(Errc::UnknownSerial, "no such part");
  return rec.parts[ref.part];
}

Part& World::part_mut(ObjectRef ref) {
  auto& rec = record_mut(ref.serial);
  if (ref.part >= rec.parts.size()) throw SimError(Errc::UnknownSerial, "no such part");
  return rec.parts[ref.part];
}

bool World::holds(Party p, ObjectRef ref) const {
  const Part& pt = part(ref);
  return pt.custodian == p && pt.location == party_location(p);
}

std::vector<ObjectRef> World::held_here(Party p) const {
  std::vector<ObjectRef> out;
  const Location here = party_location(p);
  for (const auto& [s, rec] : objects_) {
    for (std::size_t i = 0; i < rec.parts.size(); ++i) {
      if (rec.parts[i].custodian == p && rec.parts[i].location == here) {
        out.push_back({s, static_cast<std::uint8_t>(i)});
      }
    }
  }
  return out;
}

std::vector<ObjectRef> World::all_parts() const {
  std::vector<ObjectRef> out;
  for (const auto& [s, rec] : objects_) {
    for (std::size_t i = 0; i < rec.parts.size(); ++i) out.push_back({s, static_cast<std::uint8_t>(i)});
  }
  return out;
}

void World::require_adjacent(Location from, Location to, const std::string& who) const {
  if (!graph_.adjacent(from, to)) {
    throw SimError(Errc::SuperluminalMoveRejected,
                   who + " cannot move " + std::to_string(from) + " -> " + std::to_string(to) +
                       " in one tick");
  }
}

void World::emit(const WorldEvent& e) const {
  if (sink_) sink_(e);
}

void World::move_object(Party caller, ObjectRef ref, Location dest) {
  const ObjectRef refs[] = {ref};
  carry(caller, refs, dest);
}

void World::carry(Party caller, std::span<const ObjectRef> refs, Location dest) {
  const Location here = party_location(caller);
  for (const ObjectRef& r : refs) {
    if (!holds(caller, r)) {
      throw SimError(Errc::NotInPossession, std::string(to_string(caller)) + " does not hold serial " +
                                                std::to_string(r.serial));
    }
  }
  require_adjacent(here, dest, std::string(to_string(caller)));
  ++clock_;
  party_location_[caller] = dest;
  emit({WorldEvent::Kind::PartyMove, clock_, caller, std::nullopt, here, dest, std::nullopt});
  for (const ObjectRef& r : refs) {
    part_mut(r).location = dest;
    emit({WorldEvent::Kind::Move, clock_, caller, r, here, dest, std::nullopt});
  }
}

void World::move_party(Party p, Location dest) { carry(p, {}, dest); }

void World::travel(Party p, std::span<const ObjectRef> refs, Location dest) {
  const auto path = graph_.shortest_path(party_location(p), dest);
  if (path.empty()) throw SimError(Errc::InvalidArgument, "destination unreachable");
  for (std::size_t i = 1; i < path.size(); ++i) carry(p, refs, path[i]);
}

void World::transfer_custody(Party giver, ObjectRef ref, Party receiver) {
  if (!holds(giver, ref)) {
    throw SimError(Errc::NotInPossession, std::string(to_string(giver)) + " does not hold serial " +
                                              std::to_string(ref.serial));
  }
  if (party_location(giver) != party_location(receiver)) {
    throw SimError(Errc::NotColocated, std::string(to_string(giver)) + " and " +
                                           std::string(to_string(receiver)) + " are not colocated");
  }
  ++clock_;
  part_mut(ref).custodian = receiver;
  const Location here = party_location(giver);
  emit({WorldEvent::Kind::Custody, clock_, giver, ref, here, here, receiver});
}

void World::relocate(ObjectRef ref, Location dest) {
  Part& pt = part_mut(ref);
  if (pt.location == dest) return;
  require_adjacent(pt.location, dest, "object " + std::to_string(ref.serial));
  ++clock_;
  const Location from = pt.location;
  pt.location = dest;
  emit({WorldEvent::Kind::Move, clock_, pt.custodian, ref, from, dest, std::nullopt});
}

}  // namespace lockbox
