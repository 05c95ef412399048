#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lockbox {

using ordered_json = nlohmann::ordered_json;

struct TranscriptEvent {
  std::uint64_t tick = 0;
  std::string actor;
  std::string kind;  // msg | move | walk | custody | op | outcome
  ordered_json payload;
  bool eve_visible = false;
};

/// Append-only record of a run. Serialized one event per line with the
/// field order tick, actor, kind, payload, eve.
class Transcript {
 public:
  void append(std::uint64_t tick, std::string actor, std::string kind, ordered_json payload, bool eve_visible);

  const std::vector<TranscriptEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  std::vector<TranscriptEvent> eve_view() const;

  std::string to_jsonl() const;
  static Transcript from_jsonl(std::string_view text);

  /// The final `outcome` event, if the run got that far.
  const TranscriptEvent* outcome() const;

 private:
  std::vector<TranscriptEvent> events_;
};

}  // namespace lockbox
