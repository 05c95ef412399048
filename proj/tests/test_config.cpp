#include <gtest/gtest.h>

#include "lockbox/config.hpp"

using namespace lockbox;

namespace {

const char* kFull = R"(# full example
[world]
locations = 5
edges = [[0, 1], [1, 2], [2, 3], [3, 4]]
alice_lab = 0
eve_post = 2
bob_lab = 4
mint_seed = 99

[theory]
name = "lbp_read_once"

[protocol]
name = "ks_readonce"
n = 20
w = 5
leak = "exact"
confidence = 0.9
expect_detection = 0.718
tolerance = 0.02

[eve]
strategy = "subset"
action = "value"
count = 4
)";

std::size_t error_line(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return SIZE_MAX;
}

std::string error_field(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Toml, Values) {
  const auto d = parse_toml("[a]\nx = 3\ny = -2.5\nz = true\ns = \"q # not a comment\"\narr = [1, [2, 3]] # tail\n");
  const auto& a = d.at("a");
  EXPECT_EQ(std::get<std::int64_t>(a.at("x").v), 3);
  EXPECT_EQ(std::get<double>(a.at("y").v), -2.5);
  EXPECT_TRUE(std::get<bool>(a.at("z").v));
  EXPECT_EQ(std::get<std::string>(a.at("s").v), "q # not a comment");
  EXPECT_EQ(std::get<TomlArray>(a.at("arr").v).size(), 2u);
  EXPECT_EQ(a.at("arr").line, 6u);
}

TEST(Config, ParsesFullExample) {
  const auto c = parse_config(kFull);
  EXPECT_EQ(c.world.locations, 5u);
  EXPECT_EQ(c.world.eve_post, 2u);
  EXPECT_EQ(c.theory.name, Theory::LbpReadOnce);
  EXPECT_EQ(c.protocol.leak, LeakMethod::ExactTail);
  EXPECT_EQ(c.eve.count, 4u);
  EXPECT_FALSE(c.search.enabled);
  const auto sc = to_scenario(c);
  EXPECT_EQ(sc.layout.bob_lab, 4u);
  EXPECT_EQ(protocol_name(sc.protocol), "ks_readonce");
}

TEST(Config, RoundTrip) {
  const auto a = parse_config(kFull);
  const auto b = parse_config(serialize(a));
  EXPECT_EQ(a, b);
  const auto s = parse_config(
      "[theory]\nname = \"lbp\"\n[protocol]\nname = \"kd_lbp\"\nN = 2\nm = 1\n[search]\nobjective = "
      "\"key_undetected\"\nhorizon = 3\nexpect = \"0/1\"\n");
  EXPECT_EQ(parse_config(serialize(s)), s);
}

TEST(Config, MissingTheoryNamesField) {
  EXPECT_EQ(error_field("[protocol]\nname = \"kd_lbp\"\n"), "theory.name");
  EXPECT_EQ(error_line("[protocol]\nname = \"kd_lbp\"\n"), 0u);
}

TEST(Config, UnknownKeyHasLine) {
  const char* t = "[theory]\nname = \"lbp\"\n[protocol]\nname = \"kd_lbp\"\nbogus = 1\n";
  EXPECT_EQ(error_line(t), 5u);
  EXPECT_EQ(error_field(t), "protocol.bogus");
}

TEST(Config, WrongTypeHasLine) {
  EXPECT_EQ(error_line("[theory]\nname = \"lbp\"\n[protocol]\nname = \"kd_lbp\"\nN = \"ten\"\n"), 5u);
}

TEST(Config, CrossValidation) {
  // m must be below N
  EXPECT_NE(error_line("[theory]\nname = \"lbp\"\n[protocol]\nname = \"kd_lbp\"\nN = 2\nm = 2\n"), SIZE_MAX);
  // kd_lbp on an RCP theory
  EXPECT_NE(error_line("[theory]\nname = \"rcp\"\n[protocol]\nname = \"kd_lbp\"\n"), SIZE_MAX);
  EXPECT_NE(error_line("[theory]\nname = \"lbp\"\n[protocol]\nname = \"bc_lbp_nogo\"\nn = 9\n"), SIZE_MAX);
  EXPECT_NE(error_line("[theory]\nname = \"lbp\"\n[protocol]\nname = \"kd_lbp\"\n[eve]\naction = \"dance\"\n"),
            SIZE_MAX);
}

TEST(Config, SyntaxError) { EXPECT_EQ(error_line("[theory\nname = 1\n"), 1u); }

TEST(Config, Rational) {
  EXPECT_EQ(parse_rational("3/9"), Rational(1, 3));
  EXPECT_EQ(parse_rational("1"), 1);
  EXPECT_THROW(parse_rational("x/2"), std::exception);
}
