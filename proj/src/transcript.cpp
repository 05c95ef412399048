#include "lockbox/transcript.hpp"

#include <sstream>

#include "lockbox/types.hpp"

namespace lockbox {

void Transcript::append(std::uint64_t tick, std::string actor, std::string kind, ordered_json payload,
                        bool eve_visible) {
  if (!events_.empty() && tick < events_.back().tick) {
    throw SimError(Errc::InvalidArgument, "transcript ticks must be non-decreasing");
  }
  events_.push_back({tick, std::move(actor), std::move(kind), std::move(payload), eve_visible});
}

std::vector<TranscriptEvent> Transcript::eve_view() const {
  std::vector<TranscriptEvent> out;
  for (const auto& e : events_) {
    if (e.eve_visible) out.push_back(e);
  }
  return out;
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    ordered_json line;
    line["tick"] = e.tick;
    line["actor"] = e.actor;
    line["kind"] = e.kind;
    line["payload"] = e.payload;
    line["eve"] = e.eve_visible;
    out += line.dump();
    out += '\n';
  }
  return out;
}

Transcript Transcript::from_jsonl(std::string_view text) {
  Transcript t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = ordered_json::parse(line);
      t.append(j.at("tick").get<std::uint64_t>(), j.at("actor").get<std::string>(),
               j.at("kind").get<std::string>(), j.at("payload"), j.value("eve", false));
    } catch (const nlohmann::json::exception& ex) {
      throw SimError(Errc::InvalidArgument, "transcript line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return t;
}

const TranscriptEvent* Transcript::outcome() const {
  if (events_.empty() || events_.back().kind != "outcome") return nullptr;
  return &events_.back();
}

}  // namespace lockbox
