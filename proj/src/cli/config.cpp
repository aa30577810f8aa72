#include "cascade/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cascade::cli {

namespace {

std::string anchored(const std::string& source, int line, const std::string& message) {
  if (line <= 0) return source + ": " + message;
  return source + ":" + std::to_string(line) + ": " + message;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Entry {
  std::string value;
  int line = 0;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"graph", {"type", "n", "p", "edges"}},
      {"platoon", {"n", "d"}},
      {"noise", {"g", "tau", "beta"}},
      {"query", {"epsilon", "c"}},
      {"scenario", {"indices", "states", "state"}},
      {"sim", {"dt", "burn_in", "sample_interval", "samples_per_trial", "trials", "seed"}},
      {"sparsity", {"exact_limit", "samples"}},
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  void parse(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const std::string s = trim(raw);
      if (s.empty() || s[0] == '#' || s[0] == ';') continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(line, "unterminated section header");
        section = trim(std::string_view(s).substr(1, s.size() - 2));
        if (!schema().contains(section)) fail(line, "unknown section [" + section + "]");
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, "expected key = value");
      if (section.empty()) fail(line, "key outside of any section");
      const std::string key = trim(std::string_view(s).substr(0, eq));
      const std::string value = trim(std::string_view(s).substr(eq + 1));
      if (key.empty()) fail(line, "empty key");
      if (!schema().at(section).contains(key)) {
        fail(line, "unknown key '" + key + "' in [" + section + "]");
      }
      auto& slot = entries_[section][key];
      if (slot.line != 0) {
        fail(line, "duplicate key '" + key + "' (first set on line " + std::to_string(slot.line) + ")");
      }
      if (value.empty()) fail(line, "missing value for '" + key + "'");
      slot = Entry{value, line};
    }
  }

  [[noreturn]] void fail(int line, const std::string& message) const {
    throw ConfigError(source_, line, message);
  }

  const Entry* find(const std::string& section, const std::string& key) {
    auto s = entries_.find(section);
    if (s == entries_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
  }

  const Entry& require(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (e == nullptr) fail(0, "missing required key '" + key + "' in [" + section + "]");
    return *e;
  }

  double number(const Entry& e, const std::string& key) const {
    double x = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last || !std::isfinite(x)) {
      fail(e.line, "'" + key + "' must be a finite number, got '" + e.value + "'");
    }
    return x;
  }

  long long integer(const Entry& e, const std::string& key) const {
    long long x = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last) {
      fail(e.line, "'" + key + "' must be an integer, got '" + e.value + "'");
    }
    return x;
  }

  int small_int(const Entry& e, const std::string& key) const {
    const long long x = integer(e, key);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      fail(e.line, "'" + key + "' is out of range");
    }
    return static_cast<int>(x);
  }

  std::uint64_t unsigned_integer(const Entry& e, const std::string& key) const {
    std::uint64_t x = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last) {
      fail(e.line, "'" + key + "' must be an unsigned 64-bit integer, got '" + e.value + "'");
    }
    return x;
  }

  nlohmann::json array(const Entry& e, const std::string& key) const {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(e.value);
    } catch (const nlohmann::json::parse_error&) {
      fail(e.line, "'" + key + "' must be a JSON array, got '" + e.value + "'");
    }
    if (!j.is_array()) fail(e.line, "'" + key + "' must be a JSON array");
    return j;
  }

  std::vector<int> int_list(const Entry& e, const std::string& key) const {
    std::vector<int> out;
    for (const auto& v : array(e, key)) {
      if (!v.is_number_integer()) fail(e.line, "'" + key + "' must contain integers only");
      const auto x = v.get<long long>();
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        fail(e.line, "'" + key + "' entry out of range");
      }
      out.push_back(static_cast<int>(x));
    }
    return out;
  }

  std::vector<double> number_list(const Entry& e, const std::string& key) const {
    std::vector<double> out;
    for (const auto& v : array(e, key)) {
      if (!v.is_number()) fail(e.line, "'" + key + "' must contain numbers only");
      out.push_back(v.get<double>());
    }
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> entries_;
};

// Runs a component validator and re-anchors its message at `line`.
template <class F>
void checked(const Reader& r, int line, F&& validate) {
  try {
    validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    r.fail(line, e.what());
  }
}

GraphSpec read_graph(Reader& r) {
  GraphSpec g;
  const Entry& type = r.require("graph", "type");
  if (type.value == "complete") {
    g.type = GraphType::complete;
  } else if (type.value == "path") {
    g.type = GraphType::path;
  } else if (type.value == "pcycle") {
    g.type = GraphType::pcycle;
  } else if (type.value == "custom") {
    g.type = GraphType::custom;
  } else {
    r.fail(type.line, "graph type must be complete, path, pcycle or custom, got '" + type.value + "'");
  }
  const Entry& n = r.require("graph", "n");
  g.n = r.small_int(n, "n");
  if (g.n < 2) r.fail(n.line, "graph needs n >= 2 vehicles");

  const Entry* p = r.find("graph", "p");
  if (g.type == GraphType::pcycle) {
    if (p == nullptr) r.fail(type.line, "pcycle graph needs 'p'");
    g.p = r.small_int(*p, "p");
  } else if (p != nullptr) {
    r.fail(p->line, "'p' only applies to pcycle graphs");
  }

  const Entry* edges = r.find("graph", "edges");
  if (g.type == GraphType::custom) {
    if (edges == nullptr) r.fail(type.line, "custom graph needs 'edges'");
    for (const auto& item : r.array(*edges, "edges")) {
      if (!item.is_array() || item.size() < 2 || item.size() > 3 || !item[0].is_number_integer() ||
          !item[1].is_number_integer() || (item.size() == 3 && !item[2].is_number())) {
        r.fail(edges->line, "each edge must be [i, j] or [i, j, weight]");
      }
      WeightedEdge e{item[0].get<int>(), item[1].get<int>(), 1.0};
      if (item.size() == 3) e.weight = item[2].get<double>();
      g.edges.push_back(e);
    }
  } else if (edges != nullptr) {
    r.fail(edges->line, "'edges' only applies to custom graphs");
  }

  checked(r, type.line, [&] { (void)build_graph(g); });
  return g;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : InvalidArgument(anchored(source, line, message)), line_(line) {}

WeightedGraph build_graph(const GraphSpec& spec) {
  switch (spec.type) {
    case GraphType::complete:
      return build_complete(spec.n);
    case GraphType::path:
      return build_path(spec.n);
    case GraphType::pcycle:
      return build_pcycle(spec.n, spec.p);
    case GraphType::custom:
      return build_custom(spec.n, spec.edges);
  }
  throw InvalidArgument("unknown graph type");
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  Reader r(source);
  r.parse(text);

  RunConfig cfg;
  cfg.source = source;
  cfg.graph = read_graph(r);

  const Entry& d = r.require("platoon", "d");
  cfg.platoon.d = r.number(d, "d");
  cfg.platoon.n = cfg.graph.n;
  if (const Entry* n = r.find("platoon", "n")) {
    if (r.small_int(*n, "n") != cfg.graph.n) {
      r.fail(n->line, "platoon n disagrees with graph n = " + std::to_string(cfg.graph.n));
    }
  }
  checked(r, d.line, [&] { cfg.platoon.validate(); });

  const Entry& g = r.require("noise", "g");
  const Entry& tau = r.require("noise", "tau");
  const Entry& beta = r.require("noise", "beta");
  cfg.noise.g = r.number(g, "g");
  cfg.noise.tau = r.number(tau, "tau");
  cfg.noise.beta = r.number(beta, "beta");
  if (cfg.noise.g == 0.0) r.fail(g.line, "g must be nonzero");
  if (cfg.noise.tau <= 0.0) r.fail(tau.line, "tau must be positive");
  if (cfg.noise.beta <= 0.0) r.fail(beta.line, "beta must be positive");

  if (const Entry* e = r.find("query", "epsilon")) {
    cfg.query.epsilon = r.number(*e, "epsilon");
    if (!(cfg.query.epsilon > 0.0 && cfg.query.epsilon < 1.0)) {
      r.fail(e->line, "epsilon must lie in (0, 1)");
    }
  }
  if (const Entry* e = r.find("query", "c")) {
    cfg.query.c = r.number(*e, "c");
    if (!(cfg.query.c >= 1.0)) r.fail(e->line, "c must be at least 1");
  }

  const Entry* indices = r.find("scenario", "indices");
  const Entry* states = r.find("scenario", "states");
  const Entry* state = r.find("scenario", "state");
  if (state != nullptr) cfg.failure_state = r.number(*state, "state");
  if (states != nullptr && state != nullptr) {
    r.fail(states->line, "give either 'states' or 'state', not both");
  }
  if (indices == nullptr && states != nullptr) r.fail(states->line, "'states' without 'indices'");
  if (indices != nullptr) {
    std::vector<int> idx = r.int_list(*indices, "indices");
    std::vector<double> st;
    if (states != nullptr) {
      st = r.number_list(*states, "states");
      if (st.size() != idx.size()) {
        r.fail(states->line, "'states' has " + std::to_string(st.size()) + " entries but 'indices' has " +
                                 std::to_string(idx.size()));
      }
    } else {
      st.assign(idx.size(), cfg.failure_state);
    }
    checked(r, indices->line, [&] {
      cfg.scenario = FailureScenario(std::move(idx), std::move(st));
      cfg.scenario.validate(cfg.graph.n - 1);
    });
  }

  if (const Entry* e = r.find("sim", "dt")) {
    cfg.sim.dt = r.number(*e, "dt");
    if (*cfg.sim.dt <= 0.0) r.fail(e->line, "dt must be positive");
    const double ratio = cfg.noise.tau / *cfg.sim.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0) {
      r.fail(e->line, "tau must be an integer multiple of dt");
    }
  }
  if (const Entry* e = r.find("sim", "burn_in")) {
    cfg.sim.burn_in = r.number(*e, "burn_in");
    if (*cfg.sim.burn_in < 10.0 * cfg.noise.tau) r.fail(e->line, "burn_in must be at least 10 tau");
  }
  if (const Entry* e = r.find("sim", "sample_interval")) {
    cfg.sim.sample_interval = r.number(*e, "sample_interval");
    if (*cfg.sim.sample_interval <= 0.0) r.fail(e->line, "sample_interval must be positive");
  }
  if (const Entry* e = r.find("sim", "samples_per_trial")) {
    cfg.sim.samples_per_trial = r.small_int(*e, "samples_per_trial");
    if (*cfg.sim.samples_per_trial < 2) r.fail(e->line, "samples_per_trial must be at least 2");
  }
  if (const Entry* e = r.find("sim", "trials")) {
    cfg.sim.trials = r.small_int(*e, "trials");
    if (*cfg.sim.trials < 2) r.fail(e->line, "trials must be at least 2");
  }
  if (const Entry* e = r.find("sim", "seed")) cfg.sim.seed = r.unsigned_integer(*e, "seed");

  if (const Entry* e = r.find("sparsity", "exact_limit")) {
    cfg.sparsity.exact_limit = r.integer(*e, "exact_limit");
    if (cfg.sparsity.exact_limit < 0) r.fail(e->line, "exact_limit must be nonnegative");
  }
  if (const Entry* e = r.find("sparsity", "samples")) {
    cfg.sparsity.samples = r.small_int(*e, "samples");
    if (cfg.sparsity.samples < 1) r.fail(e->line, "samples must be positive");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

}  // namespace cascade::cli
