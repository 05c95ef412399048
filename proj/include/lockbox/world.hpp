#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lockbox/objects.hpp"
#include "lockbox/types.hpp"

namespace lockbox {

/// Undirected location graph, fixed for the lifetime of a scenario.
class LocationGraph {
 public:
  LocationGraph() = default;
  explicit LocationGraph(std::size_t size);
  static LocationGraph path(std::size_t size);

  void add_edge(Location a, Location b);
  std::size_t size() const { return adjacency_.size(); }
  bool contains(Location x) const { return x < adjacency_.size(); }
  bool adjacent(Location a, Location b) const;
  const std::set<Location>& neighbors(Location x) const { return adjacency_.at(x); }
  std::vector<std::pair<Location, Location>> edges() const;

  /// Shortest path (inclusive of both ends); empty when disconnected.
  std::vector<Location> shortest_path(Location from, Location to) const;

 private:
  std::vector<std::set<Location>> adjacency_;
};

/// One physical piece of an object: a single box, or one half/member of a pair.
struct ObjectRef {
  Serial serial = 0;
  std::uint8_t part = 0;
  friend auto operator<=>(const ObjectRef&, const ObjectRef&) = default;
};

struct Part {
  Location location = 0;
  Party custodian = Party::Alice;
};

struct ObjectRecord {
  Payload payload;
  std::vector<Part> parts;
};

struct WorldEvent {
  enum class Kind { Move, PartyMove, Custody };
  Kind kind;
  std::uint64_t tick;
  Party actor;
  std::optional<ObjectRef> object;
  Location from = 0;
  Location to = 0;
  std::optional<Party> receiver;
};

/// Physical bookkeeping shared by every theory: locations, the clock,
/// the conserved serial registry, and object custody.
///
/// Each physical action (a move, a carry, a handoff) consumes one tick, so
/// an object moves at most one hop per tick.
class World {
 public:
  explicit World(LocationGraph graph);

  const LocationGraph& graph() const { return graph_; }
  std::uint64_t clock() const { return clock_; }
  void tick() { ++clock_; }

  /// Mints `count` sequential serials from a seeded start. Allowed once,
  /// before the clock has advanced.
  std::vector<Serial> mint_serials(std::size_t count, std::uint64_t seed);
  const std::set<Serial>& registry() const { return registry_; }

  void place_party(Party p, Location x);
  Location party_location(Party p) const;

  /// Binds a minted serial to a new object. Throws DuplicateSerial when
  /// the serial is already bound and UnknownSerial when it was never minted.
  void bind(Serial s, Payload payload, std::vector<Part> parts);
  bool bound(Serial s) const { return objects_.contains(s); }

  const ObjectRecord& record(Serial s) const;
  Payload& payload(Serial s);
  const Payload& payload(Serial s) const;
  const Part& part(ObjectRef ref) const;
  std::size_t part_count(Serial s) const { return record(s).parts.size(); }

  /// Custodian of `ref` and standing at its location.
  bool holds(Party p, ObjectRef ref) const;
  /// Every part the party holds at its current location, in serial order.
  std::vector<ObjectRef> held_here(Party p) const;
  std::vector<ObjectRef> all_parts() const;

  /// Moves one object (and the caller carrying it) to an adjacent location.
  void move_object(Party caller, ObjectRef ref, Location dest);
  /// Moves several objects and the caller in a single tick.
  void carry(Party caller, std::span<const ObjectRef> refs, Location dest);
  void move_party(Party p, Location dest);
  /// Walks `p` (carrying `refs`) along the shortest path to `dest`.
  void travel(Party p, std::span<const ObjectRef> refs, Location dest);

  void transfer_custody(Party giver, ObjectRef ref, Party receiver);

  /// Moves a part without a party carrying it. Used for custody bookkeeping
  /// by the engine (e.g. an intruder leaving with a stolen object) and
  /// still subject to the one-hop rule.
  void relocate(ObjectRef ref, Location dest);

  void set_event_sink(std::function<void(const WorldEvent&)> sink) { sink_ = std::move(sink); }

 private:
  ObjectRecord& record_mut(Serial s);
  Part& part_mut(ObjectRef ref);
  void require_adjacent(Location from, Location to, const std::string& who) const;
  void emit(const WorldEvent& e) const;

  LocationGraph graph_;
  std::uint64_t clock_ = 0;
  std::set<Serial> registry_;
  std::map<Serial, ObjectRecord> objects_;
  std::map<Party, Location> party_location_;
  std::function<void(const WorldEvent&)> sink_;
};

}  // namespace lockbox
