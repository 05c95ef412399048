#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lockbox/protocols.hpp"

using namespace lockbox;

namespace {

// The scenario behind docs/golden/kd_lbp_flip.jsonl.
RunResult golden_run() {
  Scenario sc;
  sc.theory = Theory::Lbp;
  sc.protocol = KdLbp{4, 2};
  sc.mint_seed = 1000;
  SubsetEve eve({EveAction::Kind::Flip, 0}, 1, 4, 2);
  return run(sc, eve, 7);
}

const std::string kPath = std::string(LOCKBOX_SOURCE_DIR) + "/docs/golden/kd_lbp_flip.jsonl";

}  // namespace

TEST(Golden, TranscriptMatchesFile) {
  const auto text = golden_run().transcript.to_jsonl();
  if (std::getenv("LOCKBOX_UPDATE_GOLDEN")) std::ofstream(kPath, std::ios::binary) << text;
  std::ifstream f(kPath, std::ios::binary);
  ASSERT_TRUE(f) << kPath;
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), text);
}

TEST(Golden, FileParsesAndEndsInOutcome) {
  std::ifstream f(kPath, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto t = Transcript::from_jsonl(ss.str());
  ASSERT_NE(t.outcome(), nullptr);
  for (const auto& e : t.events()) {
    EXPECT_FALSE(e.actor.empty());
    EXPECT_TRUE(e.kind == "init" || e.kind == "msg" || e.kind == "move" || e.kind == "walk" ||
                e.kind == "custody" || e.kind == "op" || e.kind == "intrusion" || e.kind == "outcome")
        << e.kind;
  }
}
