#include "prcg/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "prcg/error.hpp"
#include "prcg/units.hpp"

namespace prcg {

using nlohmann::json;
using units::Quantity;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void only_keys(const json& obj, const std::string& path,
               std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(join(path, key), "unknown field");
  }
}

const json& require(const json& obj, const std::string& path,
                    const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing field");
  return *it;
}

double quantity(const json& v, Quantity q, const std::string& field) {
  if (!v.is_string()) {
    throw ConfigError(field, "expected a string with a unit, e.g. \"10 ms\"");
  }
  return units::parse(v.get<std::string>(), q, field);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(field, "expected a finite number");
  return d;
}

std::uint64_t count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(field, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string label(const json& v, const std::string& field) {
  if (!v.is_string() || v.get<std::string>().empty()) {
    throw ConfigError(field, "expected a nonempty string");
  }
  return v.get<std::string>();
}

int packet_bits(const json& v, const std::string& field) {
  const double bits = quantity(v, Quantity::bits, field);
  if (!(bits >= 1.0) || bits != std::floor(bits) || bits > 1e9) {
    throw ConfigError(field, "packet size must be a positive whole number of bits");
  }
  return static_cast<int>(bits);
}

QosSpec qos(const json& obj, const std::string& path) {
  QosSpec q;
  const std::string rate_field = join(path, "source_rate");
  q.source_rate = quantity(require(obj, path, "source_rate"),
                           Quantity::bit_rate, rate_field);
  if (!(q.source_rate >= 0.0)) {
    throw ConfigError(rate_field, "source rate must be nonnegative");
  }
  const std::string delay_field = join(path, "delay");
  q.max_delay =
      quantity(require(obj, path, "delay"), Quantity::duration, delay_field);
  if (!(q.max_delay > 0.0)) {
    throw ConfigError(delay_field, "delay bound must be positive");
  }
  return q;
}

SystemParams parse_system(const json& obj) {
  const std::string path = "system";
  only_keys(obj, path, {"bandwidth", "noise_power", "packet_size", "max_power"});
  SystemParams p;
  p.bandwidth = quantity(require(obj, path, "bandwidth"), Quantity::frequency,
                         "system.bandwidth");
  if (!(p.bandwidth > 0.0)) {
    throw ConfigError("system.bandwidth", "must be positive");
  }
  p.noise_power = quantity(require(obj, path, "noise_power"), Quantity::power,
                           "system.noise_power");
  if (!(p.noise_power > 0.0)) {
    throw ConfigError("system.noise_power", "must be positive");
  }
  p.packet_size_bits =
      packet_bits(require(obj, path, "packet_size"), "system.packet_size");
  if (auto it = obj.find("max_power"); it != obj.end()) {
    if (it->is_string() && it->get<std::string>() == "unbounded") {
      p.max_power = std::numeric_limits<double>::infinity();
    } else {
      p.max_power = quantity(*it, Quantity::power, "system.max_power");
      if (!(p.max_power > 0.0)) {
        throw ConfigError("system.max_power", "must be positive");
      }
    }
  }
  return p;
}

SweepSpec parse_sweep(const json& obj) {
  const std::string path = "sweep";
  only_keys(obj, path,
            {"variable", "from", "to", "samples", "scale", "source_rates",
             "other_size"});
  SweepSpec s;
  if (auto it = obj.find("variable"); it != obj.end()) {
    if (!it->is_string() || it->get<std::string>() != "delay") {
      throw ConfigError("sweep.variable", "only \"delay\" can be swept");
    }
  }
  s.from = quantity(require(obj, path, "from"), Quantity::duration, "sweep.from");
  s.to = quantity(require(obj, path, "to"), Quantity::duration, "sweep.to");
  if (!(s.from > 0.0) || !(s.to > s.from)) {
    throw ConfigError("sweep.to", "range must satisfy 0 < from < to");
  }
  s.samples = count(require(obj, path, "samples"), "sweep.samples");
  if (s.samples < 2) throw ConfigError("sweep.samples", "need at least 2 samples");
  if (auto it = obj.find("scale"); it != obj.end()) {
    const std::string scale = it->is_string() ? it->get<std::string>() : "";
    if (scale != "log" && scale != "linear") {
      throw ConfigError("sweep.scale", "expected \"log\" or \"linear\"");
    }
    s.log_scale = scale == "log";
  }
  const json& rates = require(obj, path, "source_rates");
  if (!rates.is_array() || rates.empty()) {
    throw ConfigError("sweep.source_rates", "expected a nonempty list");
  }
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const std::string f = index("sweep.source_rates", i);
    const double r = quantity(rates[i], Quantity::bit_rate, f);
    if (!(r >= 0.0)) throw ConfigError(f, "source rate must be nonnegative");
    s.source_rates.push_back(r);
  }
  if (auto it = obj.find("other_size"); it != obj.end()) {
    s.other_size = number(*it, "sweep.other_size");
    if (!(s.other_size >= 0.0 && s.other_size < 1.0)) {
      throw ConfigError("sweep.other_size", "must lie in [0, 1)");
    }
  }
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed scenario: ") + e.what());
  }
  only_keys(doc, "",
            {"system", "efficiency", "users", "classes", "candidates", "sweep",
             "validation", "seed"});

  Scenario s;
  s.system = parse_system(require(doc, "", "system"));
  s.efficiency.packet_size_bits = s.system.packet_size_bits;

  if (auto it = doc.find("efficiency"); it != doc.end()) {
    only_keys(*it, "efficiency", {"family", "packet_size"});
    if (auto f = it->find("family"); f != it->end()) {
      s.efficiency.family = label(*f, "efficiency.family");
      if (!has_curve_family(s.efficiency.family)) {
        throw ConfigError("efficiency.family", "unknown efficiency family '" +
                                                   s.efficiency.family + "'");
      }
    }
    if (auto m = it->find("packet_size"); m != it->end()) {
      s.efficiency.packet_size_bits = packet_bits(*m, "efficiency.packet_size");
    }
  }

  std::set<std::string> seen;
  const auto unique = [&](const std::string& l, const std::string& field) {
    if (!seen.insert(l).second) {
      throw ConfigError(field, "duplicate label '" + l + "'");
    }
  };

  if (auto it = doc.find("users"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("users", "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = index("users", i);
      const json& u = (*it)[i];
      only_keys(u, path, {"label", "source_rate", "delay", "gain", "count"});
      UserEntry e;
      e.label = label(require(u, path, "label"), join(path, "label"));
      unique(e.label, join(path, "label"));
      e.qos = qos(u, path);
      if (auto g = u.find("gain"); g != u.end()) {
        e.gain = number(*g, join(path, "gain"));
        if (!(e.gain > 0.0)) throw ConfigError(join(path, "gain"), "must be positive");
      }
      if (auto c = u.find("count"); c != u.end()) {
        e.count = count(*c, join(path, "count"));
        if (e.count == 0) throw ConfigError(join(path, "count"), "must be at least 1");
      }
      s.users.push_back(std::move(e));
    }
  }

  seen.clear();  // user and class labels live in separate namespaces
  if (auto it = doc.find("classes"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("classes", "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = index("classes", i);
      const json& c = (*it)[i];
      only_keys(c, path, {"label", "source_rate", "delay", "population"});
      ClassEntry e;
      e.label = label(require(c, path, "label"), join(path, "label"));
      unique(e.label, join(path, "label"));
      e.qos = qos(c, path);
      if (auto p = c.find("population"); p != c.end()) {
        if (!(p->is_string() && p->get<std::string>() == "large")) {
          e.population = count(*p, join(path, "population"));
        }
      }
      s.classes.push_back(std::move(e));
    }
  }

  if (auto it = doc.find("candidates"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("candidates", "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = index("candidates", i);
      const json& row = (*it)[i];
      if (!row.is_array() || row.size() != s.classes.size()) {
        throw ConfigError(path, "expected one count per class");
      }
      std::vector<std::size_t> counts;
      for (std::size_t c = 0; c < row.size(); ++c) {
        counts.push_back(count(row[c], index(path, c)));
      }
      s.candidates.push_back(std::move(counts));
    }
  }

  if (auto it = doc.find("sweep"); it != doc.end()) s.sweep = parse_sweep(*it);

  if (auto it = doc.find("validation"); it != doc.end()) {
    only_keys(*it, "validation", {"packets", "success_prob"});
    if (auto p = it->find("packets"); p != it->end()) {
      s.validation.packets = count(*p, "validation.packets");
      if (s.validation.packets == 0) {
        throw ConfigError("validation.packets", "must be at least 1");
      }
    }
    if (auto p = it->find("success_prob"); p != it->end()) {
      const double f = number(*p, "validation.success_prob");
      if (!(f > 0.0 && f <= 1.0)) {
        throw ConfigError("validation.success_prob", "must lie in (0, 1]");
      }
      s.validation.success_prob = f;
    }
  }

  if (auto it = doc.find("seed"); it != doc.end()) s.seed = count(*it, "seed");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--scenario", "cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string serialize_scenario(const Scenario& s) {
  using units::format;
  json doc;
  doc["system"] = {
      {"bandwidth", format(s.system.bandwidth, Quantity::frequency)},
      {"noise_power", format(s.system.noise_power, Quantity::power)},
      {"packet_size", format(s.system.packet_size_bits, Quantity::bits)},
      {"max_power", std::isinf(s.system.max_power)
                        ? std::string("unbounded")
                        : format(s.system.max_power, Quantity::power)}};
  doc["efficiency"] = {
      {"family", s.efficiency.family},
      {"packet_size", format(s.efficiency.packet_size_bits, Quantity::bits)}};

  json users = json::array();
  for (const auto& u : s.users) {
    users.push_back({{"label", u.label},
                     {"source_rate", format(u.qos.source_rate, Quantity::bit_rate)},
                     {"delay", format(u.qos.max_delay, Quantity::duration)},
                     {"gain", u.gain},
                     {"count", u.count}});
  }
  doc["users"] = users;

  json classes = json::array();
  for (const auto& c : s.classes) {
    json e = {{"label", c.label},
              {"source_rate", format(c.qos.source_rate, Quantity::bit_rate)},
              {"delay", format(c.qos.max_delay, Quantity::duration)}};
    if (c.population) {
      e["population"] = *c.population;
    } else {
      e["population"] = "large";
    }
    classes.push_back(std::move(e));
  }
  doc["classes"] = classes;
  doc["candidates"] = s.candidates;

  if (s.sweep) {
    json rates = json::array();
    for (double r : s.sweep->source_rates) rates.push_back(format(r, Quantity::bit_rate));
    doc["sweep"] = {{"variable", s.sweep->variable},
                    {"from", format(s.sweep->from, Quantity::duration)},
                    {"to", format(s.sweep->to, Quantity::duration)},
                    {"samples", s.sweep->samples},
                    {"scale", s.sweep->log_scale ? "log" : "linear"},
                    {"source_rates", rates},
                    {"other_size", s.sweep->other_size}};
  }
  doc["validation"] = {{"packets", s.validation.packets}};
  if (s.validation.success_prob) {
    doc["validation"]["success_prob"] = *s.validation.success_prob;
  }
  doc["seed"] = s.seed;
  return doc.dump(2) + "\n";
}

bool operator==(const Scenario& a, const Scenario& b) {
  const auto same_system = [](const SystemParams& x, const SystemParams& y) {
    return x.bandwidth == y.bandwidth && x.noise_power == y.noise_power &&
           x.packet_size_bits == y.packet_size_bits &&
           x.max_power == y.max_power;
  };
  return same_system(a.system, b.system) && a.efficiency == b.efficiency &&
         a.users == b.users && a.classes == b.classes &&
         a.candidates == b.candidates && a.sweep == b.sweep &&
         a.validation == b.validation && a.seed == b.seed;
}

std::vector<UserProfile> Scenario::expanded_users() const {
  std::vector<UserProfile> out;
  for (const auto& u : users) {
    for (std::size_t i = 0; i < u.count; ++i) out.push_back({u.qos, u.gain});
  }
  return out;
}

std::vector<std::string> Scenario::expanded_labels() const {
  std::vector<std::string> out;
  for (const auto& u : users) {
    if (u.count == 1) {
      out.push_back(u.label);
      continue;
    }
    for (std::size_t i = 0; i < u.count; ++i) {
      out.push_back(u.label + "#" + std::to_string(i + 1));
    }
  }
  return out;
}

EfficiencyFunction Scenario::efficiency_function() const {
  return make_efficiency(efficiency.family, efficiency.packet_size_bits);
}

}  // namespace prcg
