#include "blindsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace blindsim {

using nlohmann::json;

namespace {

constexpr double kNano = 1e9;
constexpr double kFemto = 1e15;

std::string join_issues(const std::vector<std::string>& issues) {
  std::string msg = "invalid scenario config:";
  for (const auto& issue : issues) msg += "\n  " + issue;
  return msg;
}

// Reads one JSON object, records a diagnostic per bad field, and complains
// about keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string prefix, std::vector<std::string>& issues)
      : obj_(obj), prefix_(std::move(prefix)), issues_(issues) {
    if (!obj_.is_object()) fail("", "must be an object");
  }

  ~ObjectReader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) fail(key, "unknown key");
    }
  }

  ObjectReader(const ObjectReader&) = delete;
  ObjectReader& operator=(const ObjectReader&) = delete;

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.is_object() && obj_.contains(key);
  }

  const json* get(const std::string& key) { return has(key) ? &obj_.at(key) : nullptr; }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (v->is_number()) {
        out = v->get<double>();
      } else {
        fail(key, "expected a number");
      }
    }
  }

  void unsigned_integer(const std::string& key, std::uint64_t& out) {
    if (const json* v = get(key)) {
      if (v->is_number_unsigned()) {
        out = v->get<std::uint64_t>();
      } else if (v->is_number_float() && v->get<double>() >= 0.0 &&
                 v->get<double>() == std::floor(v->get<double>()) && v->get<double>() < 1.8e19) {
        out = static_cast<std::uint64_t>(v->get<double>());
      } else {
        fail(key, "expected a nonnegative integer");
      }
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (v->is_boolean()) {
        out = v->get<bool>();
      } else {
        fail(key, "expected true or false");
      }
    }
  }

  template <class Enum>
  void choice(const std::string& key, Enum& out,
              std::initializer_list<std::pair<std::string_view, Enum>> options) {
    const json* v = get(key);
    if (!v) return;
    if (v->is_string()) {
      for (const auto& [name, value] : options) {
        if (v->get<std::string>() == name) {
          out = value;
          return;
        }
      }
    }
    std::string allowed;
    for (const auto& [name, value] : options) {
      allowed += allowed.empty() ? "" : "|";
      allowed += name;
    }
    fail(key, "expected one of " + allowed);
  }

  // Quantity given in a presentation unit; si = value / scale.
  template <class Quantity, class Make>
  void quantity(const std::string& key, Quantity& out, double scale, Make make) {
    double raw = 0.0;
    bool ok = false;
    if (const json* v = get(key)) {
      if (v->is_number()) {
        raw = v->get<double>();
        ok = true;
      } else {
        fail(key, "expected a number");
      }
    }
    if (!ok) return;
    if (!std::isfinite(raw) || raw < 0.0) {
      fail(key, "must be finite and >= 0");
      return;
    }
    out = make(raw / scale);
  }

  void power_nw(const std::string& key, Power& out) {
    quantity(key, out, kNano, [](double w) { return Power::watts(w); });
  }
  void energy_fj(const std::string& key, Energy& out) {
    quantity(key, out, kFemto, [](double j) { return Energy::joules(j); });
  }
  void seconds_from_ns(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (v->is_number()) {
        out = v->get<double>() / kNano;
      } else {
        fail(key, "expected a number");
      }
    }
  }
  void decibel(const std::string& key, Decibel& out) { number(key, out.value); }

  std::string path(const std::string& key) const {
    if (prefix_.empty()) return key;
    if (key.empty()) return prefix_;
    return prefix_ + "." + key;
  }

  void fail(const std::string& key, const std::string& why) {
    issues_.push_back(path(key) + ": " + why);
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& issues_;
  std::set<std::string, std::less<>> seen_;
};

void read_detector(const json& obj, DetectorConfig& d, std::vector<std::string>& issues) {
  ObjectReader r(obj, "detector", issues);
  r.number("efficiency", d.efficiency);
  r.number("gate_frequency_hz", d.gate_frequency_hz);
  r.seconds_from_ns("gate_width_ns", d.gate_width_s);
  r.seconds_from_ns("dead_time_ns", d.dead_time_s);
  r.number("dark_count_rate_hz", d.dark_count_rate_hz);
  r.power_nw("blinding_threshold_nw", d.blinding_threshold);
  r.choice("transition_shape", d.transition_shape,
           {{"linear", TransitionShape::linear}, {"logistic", TransitionShape::logistic}});
  if (const json* rows = r.get("response_points")) {
    if (!rows->is_array()) {
      r.fail("response_points", "expected an array");
      return;
    }
    d.response_points.clear();
    for (std::size_t i = 0; i < rows->size(); ++i) {
      ResponsePoint p;
      ObjectReader row((*rows)[i], "detector.response_points[" + std::to_string(i) + "]", issues);
      for (const char* key : {"blinding_power_nw", "e_never_fj", "e_always_fj"}) {
        if (!row.has(key)) row.fail(key, "required");
      }
      row.power_nw("blinding_power_nw", p.blinding_power);
      row.energy_fj("e_never_fj", p.e_never);
      row.energy_fj("e_always_fj", p.e_always);
      d.response_points.push_back(p);
    }
  }
}

void read_attack(const json& obj, AttackParams& a, std::vector<std::string>& issues) {
  ObjectReader r(obj, "attack", issues);
  r.boolean("enabled", a.enabled);
  r.choice("mode", a.mode,
           {{"blinding_faked_state", AttackMode::blinding_faked_state},
            {"plain_intercept_resend", AttackMode::plain_intercept_resend}});
  r.power_nw("cw_power_nw", a.cw_power);
  r.energy_fj("trigger_energy_fj", a.trigger_energy);
  r.number("forge_rate_hz", a.forge_rate_hz);
}

void read_scw(const json& obj, ScwScenario& s, std::vector<std::string>& issues) {
  ObjectReader r(obj, "scw", issues);
  r.number("modulation_index", s.modulation_index);
  r.decibel("filter_extinction_db", s.filter_extinction);
  r.decibel("bob_insertion_loss_db", s.bob_insertion_loss);
  r.boolean("include_carrier_leakage", s.include_carrier_leakage);
  r.power_nw("alice_carrier_nw", s.alice_carrier);
  if (const json* v = r.get("watchdog_attenuation_db")) {
    if (v->is_string() && v->get<std::string>() == "auto") {
      s.watchdog_attenuation.reset();
    } else if (v->is_number()) {
      s.watchdog_attenuation = Decibel{v->get<double>()};
    } else {
      r.fail("watchdog_attenuation_db", "expected a number or \"auto\"");
    }
  }
  if (const json* v = r.get("watchdog_alarm_threshold_nw")) {
    if (v->is_null()) {
      s.watchdog_alarm_threshold.reset();
    } else {
      Power p;
      r.power_nw("watchdog_alarm_threshold_nw", p);
      s.watchdog_alarm_threshold = p;
    }
  }
  r.number("alarm_factor", s.alarm_factor);
  r.power_nw("watchdog_sensitivity_floor_nw", s.watchdog_sensitivity_floor);
  if (const json* v = r.get("watchdog_blinding_threshold_nw")) {
    if (v->is_null()) {
      s.watchdog_blinding_threshold.reset();
    } else {
      Power p;
      r.power_nw("watchdog_blinding_threshold_nw", p);
      s.watchdog_blinding_threshold = p;
    }
  }
}

double nw(Power p) { return to_presentation_unit(p.in_watts(), kNano); }
double fj(Energy e) { return to_presentation_unit(e.in_joules(), kFemto); }
double ns(double seconds) { return to_presentation_unit(seconds, kNano); }

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::string_view to_string(Protocol p) { return p == Protocol::bb84 ? "bb84" : "scw"; }

std::string_view to_string(AttackMode m) {
  return m == AttackMode::blinding_faked_state ? "blinding_faked_state" : "plain_intercept_resend";
}

std::string_view to_string(TransitionShape s) {
  return s == TransitionShape::linear ? "linear" : "logistic";
}

std::uint64_t forge_stride(double gate_frequency_hz, double forge_rate_hz) {
  const double ratio = gate_frequency_hz / forge_rate_hz;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * ratio) {
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(nearest));
  }
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(ratio)));
}

std::vector<std::string> ScenarioConfig::problems() const {
  std::vector<std::string> out;
  if (gates == 0) out.emplace_back("gates: must be > 0");
  if (!(source_mean_photons >= 0.0) || !std::isfinite(source_mean_photons)) {
    out.emplace_back("source_mean_photons: must be finite and >= 0");
  }
  if (!(channel_transmission >= 0.0 && channel_transmission <= 1.0)) {
    out.emplace_back("channel_transmission: must lie in [0, 1]");
  }
  for (const auto& issue : detector.problems()) out.push_back("detector." + issue);

  if (attack) {
    if (!positive_finite(attack->forge_rate_hz)) {
      out.emplace_back("attack.forge_rate_hz: must be > 0");
    } else if (positive_finite(detector.dead_time_s) &&
               attack->forge_rate_hz * detector.dead_time_s > 1.0 + 1e-12) {
      out.emplace_back("attack.forge_rate_hz: exceeds the dead-time limited rate 1/dead_time");
    } else if (positive_finite(detector.gate_frequency_hz) &&
               attack->forge_rate_hz > detector.gate_frequency_hz) {
      out.emplace_back("attack.forge_rate_hz: exceeds gate_frequency_hz");
    }
  }

  if (protocol == Protocol::scw && !scw) out.emplace_back("scw: required when protocol is scw");
  if (scw) {
    ScwChain probe;
    probe.modulation_index = scw->modulation_index;
    probe.filter_extinction = scw->filter_extinction;
    probe.bob_insertion_loss = scw->bob_insertion_loss;
    probe.watchdog_attenuation = scw->watchdog_attenuation.value_or(Decibel{0.0});
    probe.watchdog_alarm_threshold = scw->watchdog_alarm_threshold.value_or(Power::watts(1.0));
    for (const auto& issue : probe.problems()) out.push_back("scw." + issue);
    if (!(scw->alice_carrier > Power{})) out.emplace_back("scw.alice_carrier_nw: must be > 0");
    if (!positive_finite(scw->alarm_factor)) out.emplace_back("scw.alarm_factor: must be > 0");
    if (!scw->watchdog_attenuation &&
        !(attack && attack->mode == AttackMode::blinding_faked_state)) {
      out.emplace_back(
          "scw.watchdog_attenuation_db: \"auto\" needs a blinding attack section for Eve's carrier");
    }
  }
  return out;
}

void ScenarioConfig::validate() const {
  auto issues = problems();
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

ScenarioConfig parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("<file>: malformed JSON: ") + e.what()});
  }
  ScenarioConfig config;
  std::vector<std::string> issues;
  {
    ObjectReader r(root, "", issues);
    r.choice("protocol", config.protocol, {{"bb84", Protocol::bb84}, {"scw", Protocol::scw}});
    r.unsigned_integer("gates", config.gates);
    r.unsigned_integer("seed", config.seed);
    r.number("source_mean_photons", config.source_mean_photons);
    r.number("channel_transmission", config.channel_transmission);
    if (const json* d = r.get("detector")) read_detector(*d, config.detector, issues);
    if (const json* a = r.get("attack")) {
      if (!a->is_null()) {
        config.attack.emplace();
        read_attack(*a, *config.attack, issues);
      }
    }
    if (const json* s = r.get("scw")) {
      if (!s->is_null()) {
        config.scw.emplace();
        read_scw(*s, *config.scw, issues);
      }
    }
  }
  for (auto& issue : config.problems()) issues.push_back(std::move(issue));
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open config file"});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string serialize_scenario(const ScenarioConfig& c) {
  json::array_t rows;
  for (const auto& p : c.detector.response_points) {
    rows.push_back(json{{"blinding_power_nw", nw(p.blinding_power)},
                        {"e_never_fj", fj(p.e_never)},
                        {"e_always_fj", fj(p.e_always)}});
  }
  json root{
      {"protocol", to_string(c.protocol)},
      {"gates", c.gates},
      {"seed", c.seed},
      {"source_mean_photons", c.source_mean_photons},
      {"channel_transmission", c.channel_transmission},
      {"detector",
       {{"efficiency", c.detector.efficiency},
        {"gate_frequency_hz", c.detector.gate_frequency_hz},
        {"gate_width_ns", ns(c.detector.gate_width_s)},
        {"dead_time_ns", ns(c.detector.dead_time_s)},
        {"dark_count_rate_hz", c.detector.dark_count_rate_hz},
        {"blinding_threshold_nw", nw(c.detector.blinding_threshold)},
        {"transition_shape", to_string(c.detector.transition_shape)},
        {"response_points", rows}}},
  };
  if (c.attack) {
    root["attack"] = json{{"enabled", c.attack->enabled},
                          {"mode", to_string(c.attack->mode)},
                          {"cw_power_nw", nw(c.attack->cw_power)},
                          {"trigger_energy_fj", fj(c.attack->trigger_energy)},
                          {"forge_rate_hz", c.attack->forge_rate_hz}};
  }
  if (c.scw) {
    const auto& s = *c.scw;
    json scw{{"modulation_index", s.modulation_index},
             {"filter_extinction_db", s.filter_extinction.value},
             {"bob_insertion_loss_db", s.bob_insertion_loss.value},
             {"include_carrier_leakage", s.include_carrier_leakage},
             {"alice_carrier_nw", nw(s.alice_carrier)},
             {"alarm_factor", s.alarm_factor},
             {"watchdog_sensitivity_floor_nw", nw(s.watchdog_sensitivity_floor)}};
    scw["watchdog_attenuation_db"] =
        s.watchdog_attenuation ? json(s.watchdog_attenuation->value) : json("auto");
    scw["watchdog_alarm_threshold_nw"] =
        s.watchdog_alarm_threshold ? json(nw(*s.watchdog_alarm_threshold)) : json(nullptr);
    scw["watchdog_blinding_threshold_nw"] =
        s.watchdog_blinding_threshold ? json(nw(*s.watchdog_blinding_threshold)) : json(nullptr);
    root["scw"] = std::move(scw);
  }
  return root.dump(2) + "\n";
}

ScwChain resolve_scw_chain(const ScenarioConfig& config) {
  if (!config.scw) throw ConfigError({"scw: required for an SCW chain"});
  const ScwScenario& s = *config.scw;
  ScwChain chain;
  chain.modulation_index = s.modulation_index;
  chain.filter_extinction = s.filter_extinction;
  chain.bob_insertion_loss = s.bob_insertion_loss;
  chain.include_carrier_leakage = s.include_carrier_leakage;

  if (s.watchdog_attenuation) {
    chain.watchdog_attenuation = *s.watchdog_attenuation;
  } else {
    if (!config.attack) {
      throw ConfigError({"scw.watchdog_attenuation_db: \"auto\" needs an attack section"});
    }
    if (!(config.attack->cw_power > s.alice_carrier)) {
      throw ConfigError(
          {"scw.watchdog_attenuation_db: \"auto\" needs attack.cw_power_nw above "
           "scw.alice_carrier_nw"});
    }
    const AttenuationWindow window = find_attenuation_window(
        s.alice_carrier, config.attack->cw_power, s.watchdog_sensitivity_floor,
        s.watchdog_blinding_threshold, s.bob_insertion_loss);
    if (window.empty()) {
      throw ConfigError({"scw.watchdog_attenuation_db: no feasible watchdog attenuation"});
    }
    chain.watchdog_attenuation = window.midpoint();
  }

  if (s.watchdog_alarm_threshold) {
    chain.watchdog_alarm_threshold = *s.watchdog_alarm_threshold;
  } else {
    chain.watchdog_alarm_threshold =
        watchdog_reading(s.alice_carrier, chain).scaled(s.alarm_factor);
  }
  chain.validate();
  return chain;
}

}  // namespace blindsim
