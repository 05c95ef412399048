#include "lockbox/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace lockbox {

ConfigError::ConfigError(std::size_t line, std::string field, const std::string& what)
    : std::runtime_error((line ? "line " + std::to_string(line) + ": " : std::string()) + "field '" + field + "': " +
                         what),
      line_(line),
      field_(std::move(field)) {}

namespace {

class Lexer {
 public:
  Lexer(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }
  bool at_end() {
    skip_ws();
    return i_ >= s_.size() || s_[i_] == '#';
  }

  TomlValue value(const std::string& field) {
    skip_ws();
    if (i_ >= s_.size()) throw ConfigError(line_, field, "missing value");
    const char c = s_[i_];
    TomlValue out;
    out.line = line_;
    if (c == '"') {
      ++i_;
      std::string str;
      while (i_ < s_.size() && s_[i_] != '"') {
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
          ++i_;
          str += s_[i_] == 'n' ? '\n' : s_[i_];
        } else {
          str += s_[i_];
        }
        ++i_;
      }
      if (i_ >= s_.size()) throw ConfigError(line_, field, "unterminated string");
      ++i_;
      out.v = std::move(str);
      return out;
    }
    if (c == '[') {
      ++i_;
      TomlArray arr;
      skip_ws();
      if (i_ < s_.size() && s_[i_] == ']') {
        ++i_;
        out.v = std::move(arr);
        return out;
      }
      while (true) {
        arr.push_back(value(field));
        skip_ws();
        if (i_ < s_.size() && s_[i_] == ',') {
          ++i_;
          skip_ws();
          if (i_ < s_.size() && s_[i_] == ']') {
            ++i_;
            break;
          }
          continue;
        }
        if (i_ < s_.size() && s_[i_] == ']') {
          ++i_;
          break;
        }
        throw ConfigError(line_, field, "expected ',' or ']' in array");
      }
      out.v = std::move(arr);
      return out;
    }
    std::size_t j = i_;
    while (j < s_.size() && s_[j] != ',' && s_[j] != ']' && s_[j] != ' ' && s_[j] != '\t' && s_[j] != '#') ++j;
    std::string tok(s_.substr(i_, j - i_));
    i_ = j;
    if (tok == "true" || tok == "false") {
      out.v = tok == "true";
      return out;
    }
    std::string digits;
    for (char ch : tok) {
      if (ch != '_') digits += ch;
    }
    std::int64_t iv;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), iv);
    if (ec == std::errc() && p == digits.data() + digits.size()) {
      out.v = iv;
      return out;
    }
    double dv;
    auto [p2, ec2] = std::from_chars(digits.data(), digits.data() + digits.size(), dv);
    if (ec2 == std::errc() && p2 == digits.data() + digits.size() && !digits.empty()) {
      out.v = dv;
      return out;
    }
    throw ConfigError(line_, field, "cannot parse value '" + tok + "'");
  }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t i_ = 0;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

TomlDocument parse_toml(std::string_view text) {
  TomlDocument doc;
  std::string section;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      const auto close = line.find(']');
      if (close == std::string::npos) throw ConfigError(lineno, line, "unterminated section header");
      section = trim(std::string_view(line).substr(1, close - 1));
      if (section.empty()) throw ConfigError(lineno, line, "empty section name");
      if (doc.contains(section)) throw ConfigError(lineno, section, "section defined twice");
      doc[section];
      const std::string rest = trim(std::string_view(line).substr(close + 1));
      if (!rest.empty() && rest[0] != '#') throw ConfigError(lineno, section, "text after section header");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, line, "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError(lineno, line, "empty key");
    if (section.empty()) throw ConfigError(lineno, key, "key outside any section");
    Lexer lex(std::string_view(line).substr(eq + 1), lineno);
    TomlValue v = lex.value(section + "." + key);
    if (!lex.at_end()) throw ConfigError(lineno, section + "." + key, "trailing characters after value");
    if (doc[section].contains(key)) throw ConfigError(lineno, section + "." + key, "key defined twice");
    doc[section][key] = std::move(v);
  }
  return doc;
}

namespace {

const std::map<std::string, std::set<std::string>> kKeys = {
    {"world", {"locations", "edges", "alice_lab", "eve_post", "bob_lab", "mint_seed"}},
    {"theory", {"name", "combo_length", "destroyed_returns_marker", "consume_both_on_read"}},
    {"protocol",
     {"name", "N", "m", "n", "w", "k", "sigma", "rounds", "bit", "v", "alice", "bob", "max_discard_fraction",
      "privacy_amplification", "leak", "confidence", "eve_stock", "expect_detection", "tolerance"}},
    {"eve", {"strategy", "action", "count", "total"}},
    {"search", {"objective", "horizon", "cap", "samples", "expect", "expect_is_bound"}},
};

const std::set<std::string> kProtocols = {"kd_combination", "kd_lbp",        "bc_single",     "bc_dual_equivocation",
                                          "bc_harrow",      "ks_lbp_plain",  "ks_readonce",   "ks_serial_list",
                                          "ks_rcp",         "bc_lbp_nogo",   "kd_trivial_impossible"};

class Reader {
 public:
  explicit Reader(const TomlDocument& doc) : doc_(doc) {}

  const TomlValue* find(const std::string& sec, const std::string& key) const {
    auto s = doc_.find(sec);
    if (s == doc_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  template <typename T>
  void get(const std::string& sec, const std::string& key, T& out) const {
    const TomlValue* v = find(sec, key);
    if (!v) return;
    const std::string field = sec + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (const auto* b = std::get_if<bool>(&v->v)) out = *b;
      else throw ConfigError(v->line, field, "expected true or false");
    } else if constexpr (std::is_same_v<T, double>) {
      if (const auto* d = std::get_if<double>(&v->v)) out = *d;
      else if (const auto* i = std::get_if<std::int64_t>(&v->v)) out = static_cast<double>(*i);
      else throw ConfigError(v->line, field, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (const auto* s = std::get_if<std::string>(&v->v)) out = *s;
      else throw ConfigError(v->line, field, "expected a string");
    } else {
      const auto* i = std::get_if<std::int64_t>(&v->v);
      if (!i) throw ConfigError(v->line, field, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (*i < 0) throw ConfigError(v->line, field, "must be non-negative");
      }
      out = static_cast<T>(*i);
    }
  }

  template <typename T>
  void get(const std::string& sec, const std::string& key, std::optional<T>& out) const {
    if (!find(sec, key)) return;
    T v{};
    get(sec, key, v);
    out = v;
  }

  std::size_t line(const std::string& sec, const std::string& key) const {
    const auto* v = find(sec, key);
    return v ? v->line : 0;
  }

 private:
  const TomlDocument& doc_;
};

void check(bool ok, std::size_t line, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(line, field, what);
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  const TomlDocument doc = parse_toml(text);
  for (const auto& [sec, keys] : doc) {
    auto known = kKeys.find(sec);
    if (known == kKeys.end()) {
      const std::size_t line = keys.empty() ? 0 : keys.begin()->second.line;
      throw ConfigError(line, sec, "unknown section");
    }
    for (const auto& [k, v] : keys) check(known->second.contains(k), v.line, sec + "." + k, "unknown key");
  }
  const Reader r(doc);
  ScenarioConfig c;

  r.get("world", "locations", c.world.locations);
  r.get("world", "alice_lab", c.world.alice_lab);
  r.get("world", "eve_post", c.world.eve_post);
  r.get("world", "bob_lab", c.world.bob_lab);
  r.get("world", "mint_seed", c.world.mint_seed);
  if (const auto* e = r.find("world", "edges")) {
    const auto* arr = std::get_if<TomlArray>(&e->v);
    check(arr != nullptr, e->line, "world.edges", "expected an array of [a, b] pairs");
    for (const auto& item : *arr) {
      const auto* pair = std::get_if<TomlArray>(&item.v);
      check(pair && pair->size() == 2, e->line, "world.edges", "each edge must be [a, b]");
      const auto* a = std::get_if<std::int64_t>(&(*pair)[0].v);
      const auto* b = std::get_if<std::int64_t>(&(*pair)[1].v);
      check(a && b && *a >= 0 && *b >= 0, e->line, "world.edges", "edge ends must be non-negative integers");
      c.world.edges.emplace_back(static_cast<Location>(*a), static_cast<Location>(*b));
    }
  }
  check(c.world.locations >= 3, r.line("world", "locations"), "world.locations", "need at least 3 locations");
  for (const auto& [a, b] : c.world.edges) {
    check(a < c.world.locations && b < c.world.locations && a != b, r.line("world", "edges"), "world.edges",
          "edge endpoint out of range");
  }

  check(r.find("theory", "name") != nullptr, 0, "theory.name", "required key missing");
  {
    std::string name;
    r.get("theory", "name", name);
    try {
      c.theory.name = theory_from_string(name);
    } catch (const SimError& e) {
      throw ConfigError(r.line("theory", "name"), "theory.name", e.what());
    }
  }
  r.get("theory", "combo_length", c.theory.combo_length);
  check(c.theory.combo_length >= 1 && c.theory.combo_length <= 16, r.line("theory", "combo_length"),
        "theory.combo_length", "must be in [1, 16]");
  r.get("theory", "destroyed_returns_marker", c.theory.destroyed_returns_marker);
  r.get("theory", "consume_both_on_read", c.theory.consume_both_on_read);

  check(r.find("protocol", "name") != nullptr, 0, "protocol.name", "required key missing");
  auto& p = c.protocol;
  r.get("protocol", "name", p.name);
  check(kProtocols.contains(p.name), r.line("protocol", "name"), "protocol.name", "unknown protocol '" + p.name + "'");
  r.get("protocol", "N", p.N);
  r.get("protocol", "m", p.m);
  r.get("protocol", "n", p.n);
  r.get("protocol", "w", p.w);
  r.get("protocol", "k", p.k);
  r.get("protocol", "sigma", p.sigma);
  r.get("protocol", "rounds", p.rounds);
  r.get("protocol", "bit", p.bit);
  r.get("protocol", "v", p.v);
  for (const char* who : {"alice", "bob"}) {
    std::string b = "honest";
    r.get("protocol", who, b);
    try {
      (std::string(who) == "alice" ? p.alice : p.bob) = behavior_from_string(b);
    } catch (const SimError& e) {
      throw ConfigError(r.line("protocol", who), std::string("protocol.") + who, e.what());
    }
  }
  r.get("protocol", "max_discard_fraction", p.max_discard_fraction);
  r.get("protocol", "privacy_amplification", p.privacy_amplification);
  {
    std::string leak = "plugin";
    r.get("protocol", "leak", leak);
    try {
      p.leak = leak_method_from_string(leak);
    } catch (const SimError& e) {
      throw ConfigError(r.line("protocol", "leak"), "protocol.leak", e.what());
    }
  }
  r.get("protocol", "confidence", p.confidence);
  r.get("protocol", "eve_stock", p.eve_stock);
  r.get("protocol", "expect_detection", p.expect_detection);
  r.get("protocol", "tolerance", p.tolerance);
  check(p.bit == 0 || p.bit == 1, r.line("protocol", "bit"), "protocol.bit", "must be 0 or 1");
  check(p.v == 0 || p.v == 1, r.line("protocol", "v"), "protocol.v", "must be 0 or 1");

  r.get("eve", "strategy", c.eve.strategy);
  r.get("eve", "action", c.eve.action);
  r.get("eve", "count", c.eve.count);
  r.get("eve", "total", c.eve.total);
  check(c.eve.strategy == "passive" || c.eve.strategy == "constant" || c.eve.strategy == "subset" ||
            c.eve.strategy == "teleport",
        r.line("eve", "strategy"), "eve.strategy", "expected passive, constant, subset or teleport");
  try {
    (void)parse_action(c.eve.action);
  } catch (const SimError& e) {
    throw ConfigError(r.line("eve", "action"), "eve.action", e.what());
  }

  c.search.enabled = doc.contains("search");
  if (c.search.enabled) {
    std::string obj = "key_undetected";
    r.get("search", "objective", obj);
    try {
      c.search.objective = search::objective_from_string(obj);
    } catch (const SimError& e) {
      throw ConfigError(r.line("search", "objective"), "search.objective", e.what());
    }
    r.get("search", "horizon", c.search.horizon);
    r.get("search", "cap", c.search.cap);
    r.get("search", "samples", c.search.samples);
    r.get("search", "expect", c.search.expect);
    r.get("search", "expect_is_bound", c.search.expect_is_bound);
    if (c.search.expect) {
      try {
        (void)parse_rational(*c.search.expect);
      } catch (const std::exception& e) {
        throw ConfigError(r.line("search", "expect"), "search.expect", e.what());
      }
    }
  }

  // cross-field checks go through the scenario validator
  if (!is_analysis(c)) {
    try {
      validate(to_scenario(c));
    } catch (const SimError& e) {
      throw ConfigError(r.line("protocol", "name"), "protocol", e.what());
    }
  } else if (p.name == "bc_lbp_nogo") {
    check(p.n >= 1 && p.n <= 4, r.line("protocol", "n"), "protocol.n", "bc_lbp_nogo needs 1 <= n <= 4");
  } else {
    check(p.rounds <= 2, r.line("protocol", "rounds"), "protocol.rounds", "at most 2 rounds");
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string fmt_double(double d) {
  std::ostringstream os;
  os.precision(17);
  os << d;
  std::string s = os.str();
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string serialize(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "[world]\n"
     << "locations = " << c.world.locations << "\n";
  if (!c.world.edges.empty()) {
    os << "edges = [";
    for (std::size_t i = 0; i < c.world.edges.size(); ++i) {
      os << (i ? ", " : "") << "[" << c.world.edges[i].first << ", " << c.world.edges[i].second << "]";
    }
    os << "]\n";
  }
  os << "alice_lab = " << c.world.alice_lab << "\neve_post = " << c.world.eve_post << "\nbob_lab = " << c.world.bob_lab
     << "\nmint_seed = " << c.world.mint_seed << "\n\n";
  os << "[theory]\nname = " << quote(std::string(to_string(c.theory.name)))
     << "\ncombo_length = " << c.theory.combo_length
     << "\ndestroyed_returns_marker = " << (c.theory.destroyed_returns_marker ? "true" : "false")
     << "\nconsume_both_on_read = " << (c.theory.consume_both_on_read ? "true" : "false") << "\n\n";
  const auto& p = c.protocol;
  os << "[protocol]\nname = " << quote(p.name) << "\nN = " << p.N << "\nm = " << p.m << "\nn = " << p.n
     << "\nw = " << p.w << "\nk = " << p.k << "\nsigma = " << p.sigma << "\nrounds = " << p.rounds
     << "\nbit = " << p.bit << "\nv = " << p.v << "\nalice = " << quote(std::string(to_string(p.alice)))
     << "\nbob = " << quote(std::string(to_string(p.bob)))
     << "\nmax_discard_fraction = " << fmt_double(p.max_discard_fraction)
     << "\nprivacy_amplification = " << (p.privacy_amplification ? "true" : "false")
     << "\nleak = " << quote(std::string(to_string(p.leak))) << "\nconfidence = " << fmt_double(p.confidence)
     << "\neve_stock = " << p.eve_stock << "\n";
  if (p.expect_detection) os << "expect_detection = " << fmt_double(*p.expect_detection) << "\n";
  os << "tolerance = " << fmt_double(p.tolerance) << "\n\n";
  os << "[eve]\nstrategy = " << quote(c.eve.strategy) << "\naction = " << quote(c.eve.action)
     << "\ncount = " << c.eve.count << "\ntotal = " << c.eve.total << "\n";
  if (c.search.enabled) {
    os << "\n[search]\nobjective = " << quote(std::string(search::to_string(c.search.objective)))
       << "\nhorizon = " << c.search.horizon << "\ncap = " << c.search.cap << "\nsamples = " << c.search.samples
       << "\n";
    if (c.search.expect) os << "expect = " << quote(*c.search.expect) << "\n";
    os << "expect_is_bound = " << (c.search.expect_is_bound ? "true" : "false") << "\n";
  }
  return os.str();
}

Rational parse_rational(std::string_view s) {
  const auto slash = s.find('/');
  const std::string num(s.substr(0, slash));
  const std::string den = slash == std::string_view::npos ? "1" : std::string(s.substr(slash + 1));
  if (num.empty() || den.empty()) throw SimError(Errc::InvalidArgument, "expected num/den");
  const BigInt d(den);
  if (d == 0) throw SimError(Errc::InvalidArgument, "zero denominator");
  return Rational(BigInt(num), d);
}

}  // namespace lockbox
