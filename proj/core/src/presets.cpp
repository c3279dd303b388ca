#include "aiofl/presets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "aiofl/errors.hpp"

namespace aiofl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!cfg.entries_.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key " + key);
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double KeyValueConfig::number(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config key " + key);
  return parse_number(it->second, key);
}

void KeyValueConfig::set(const std::string& key, std::string value) {
  entries_[key] = std::move(value);
}

std::string KeyValueConfig::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("'" + std::string(what) + "': expected a finite number, got '" +
                      std::string(text) + "'");
  }
  return v;
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name",
      "scenario.reference", "scenario.amplitude", "scenario.omega", "scenario.tf",
      "scenario.dt", "scenario.sample_dt", "scenario.integrator",
      "scenario.rk45.rtol", "scenario.rk45.atol",
      "noise.enabled", "noise.mean", "noise.variance", "noise.seed",
      "plant.Ks", "plant.Jh", "plant.m", "plant.g", "plant.h", "plant.Km", "plant.Kg",
      "plant.Jl", "plant.Rm",
      "observer.variant", "observer.omega0", "observer.a1", "observer.a2", "observer.a3",
      "observer.a4", "observer.a5", "observer.b0", "observer.k_alpha", "observer.k_beta",
      "observer.alpha", "observer.beta",
      "controller.variant",
      "nlsef.alpha1", "nlsef.alpha2", "nlsef.delta1", "nlsef.delta2", "nlsef.kp", "nlsef.kd",
      "inlsef.k11", "inlsef.k12", "inlsef.k21", "inlsef.k22", "inlsef.mu1", "inlsef.mu2",
      "inlsef.alpha1", "inlsef.alpha2", "inlsef.delta",
      "td.variant", "td.R", "td.a", "td.b", "td.c", "td.rho_td", "td.normalized",
      "metrics.w1", "metrics.w2", "metrics.w3", "metrics.N1", "metrics.N2", "metrics.N3",
      "metrics.tf",
  };
  return keys;
}

constexpr std::string_view kEventPrefix = "scenario.event.";

bool is_event_key(const std::string& key) {
  if (!key.starts_with(kEventPrefix)) return false;
  const std::string_view index = std::string_view(key).substr(kEventPrefix.size());
  return !index.empty() && index.find_first_not_of("0123456789") == std::string_view::npos;
}

class Reader {
 public:
  explicit Reader(const KeyValueConfig& cfg) : cfg_(cfg) {}

  double number(const std::string& key) const { return cfg_.number(key); }
  double number(const std::string& key, double fallback) const {
    return cfg_.contains(key) ? cfg_.number(key) : fallback;
  }
  std::string word(const std::string& key) const {
    auto v = cfg_.get(key);
    if (!v) throw ConfigError("missing config key " + key);
    return *v;
  }
  std::string word(const std::string& key, const std::string& fallback) const {
    return cfg_.get(key).value_or(fallback);
  }
  bool flag(const std::string& key, bool fallback) const {
    const auto v = cfg_.get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    throw ConfigError("'" + key + "': expected true or false, got '" + *v + "'");
  }

 private:
  const KeyValueConfig& cfg_;
};

ScenarioEvent parse_event(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  std::string kind, time, value, extra;
  if (!(in >> kind >> time >> value) || (in >> extra)) {
    throw ConfigError("'" + key + "': expected '<disturbance|inertia> <time> <value>'");
  }
  ScenarioEvent e;
  if (kind == "disturbance") {
    e.kind = EventKind::DisturbanceStep;
  } else if (kind == "inertia") {
    e.kind = EventKind::InertiaScale;
  } else {
    throw ConfigError("'" + key + "': unknown event kind '" + kind + "'");
  }
  e.time = parse_number(time, key);
  e.value = parse_number(value, key);
  return e;
}

Preset build(const KeyValueConfig& cfg) {
  for (const auto& [key, value] : cfg.entries()) {
    if (!known_keys().contains(key) && !is_event_key(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  const Reader in(cfg);
  Preset p;
  p.name = in.word("name", "custom");

  Scenario& s = p.scenario;
  const std::string ref = in.word("scenario.reference", "sine");
  if (ref == "sine") {
    s.reference.kind = ReferenceSpec::Kind::Sine;
  } else if (ref == "constant") {
    s.reference.kind = ReferenceSpec::Kind::Constant;
  } else {
    throw ConfigError("scenario.reference must be sine or constant");
  }
  s.reference.amplitude = in.number("scenario.amplitude", 45.0);
  s.reference.omega = in.number("scenario.omega", 2.0);
  s.tf = in.number("scenario.tf", 20.0);
  s.dt = in.number("scenario.dt", 1e-4);
  s.sample_dt = in.number("scenario.sample_dt", 1e-3);
  const std::string integrator = in.word("scenario.integrator", "rk4");
  if (integrator == "rk4") {
    s.integrator = IntegratorKind::Rk4;
  } else if (integrator == "rk45") {
    s.integrator = IntegratorKind::Rk45;
  } else {
    throw ConfigError("scenario.integrator must be rk4 or rk45");
  }
  s.rk45.rtol = in.number("scenario.rk45.rtol", s.rk45.rtol);
  s.rk45.atol = in.number("scenario.rk45.atol", s.rk45.atol);

  std::vector<std::pair<unsigned long, ScenarioEvent>> events;
  for (const auto& [key, value] : cfg.entries()) {
    if (!is_event_key(key)) continue;
    events.emplace_back(std::stoul(key.substr(kEventPrefix.size())), parse_event(key, value));
  }
  std::sort(events.begin(), events.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [index, e] : events) s.events.push_back(e);

  if (in.flag("noise.enabled", false)) {
    NoiseSpec noise;
    noise.mean = in.number("noise.mean", 0.0);
    noise.variance = in.number("noise.variance", 0.0);
    const double seed = in.number("noise.seed", 1.0);
    if (seed < 0.0 || seed != std::floor(seed) || seed > 1.8e19) {
      throw ConfigError("noise.seed must be a nonnegative integer");
    }
    noise.seed = static_cast<std::uint64_t>(seed);
    s.noise = noise;
  }

  const PlantParams def = slfjm_default_params();
  PlantParams& pl = p.components.plant;
  pl.Ks = in.number("plant.Ks", def.Ks);
  pl.Jh = in.number("plant.Jh", def.Jh);
  pl.m = in.number("plant.m", def.m);
  pl.g = in.number("plant.g", def.g);
  pl.h = in.number("plant.h", def.h);
  pl.Km = in.number("plant.Km", def.Km);
  pl.Kg = in.number("plant.Kg", def.Kg);
  pl.Jl = in.number("plant.Jl", def.Jl);
  pl.Rm = in.number("plant.Rm", def.Rm);

  ObserverConfig& ob = p.components.observer;
  ob.rho = 4;
  ob.omega0 = in.number("observer.omega0");
  ob.a.resize(5);
  for (int i = 0; i < 5; ++i) ob.a[i] = in.number("observer.a" + std::to_string(i + 1));
  ob.b0 = in.number("observer.b0");
  const std::string ov = in.word("observer.variant");
  if (ov == "linear") {
    ob.variant = LinearEso{};
  } else if (ov == "improved") {
    ob.variant = ImprovedNonlinearEso{in.number("observer.k_alpha"), in.number("observer.k_beta"),
                                      in.number("observer.alpha"), in.number("observer.beta")};
  } else {
    throw ConfigError("observer.variant must be linear or improved");
  }

  const std::string cv = in.word("controller.variant");
  if (cv == "nlsef") {
    p.components.controller =
        NlsefConfig{in.number("nlsef.alpha1"), in.number("nlsef.alpha2"), in.number("nlsef.delta1"),
                    in.number("nlsef.delta2"), in.number("nlsef.kp", 1.0), in.number("nlsef.kd", 1.0)};
  } else if (cv == "inlsef") {
    p.components.controller = InlsefConfig{
        in.number("inlsef.k11"),    in.number("inlsef.k12"),    in.number("inlsef.k21"),
        in.number("inlsef.k22"),    in.number("inlsef.mu1"),    in.number("inlsef.mu2"),
        in.number("inlsef.alpha1"), in.number("inlsef.alpha2"), in.number("inlsef.delta")};
  } else {
    throw ConfigError("controller.variant must be nlsef or inlsef");
  }

  const std::string tv = in.word("td.variant");
  if (tv == "classic") {
    p.components.differentiator = ClassicTd{in.number("td.R")};
  } else if (tv == "improved") {
    p.components.differentiator =
        ImprovedTd{in.number("td.a"), in.number("td.b"), in.number("td.c"),
                   in.number("td.rho_td"), in.flag("td.normalized", true)};
  } else {
    throw ConfigError("td.variant must be classic or improved");
  }

  OpiWeights& w = p.weights;
  w.w1 = in.number("metrics.w1", w.w1);
  w.w2 = in.number("metrics.w2", w.w2);
  w.w3 = in.number("metrics.w3", w.w3);
  w.N1 = in.number("metrics.N1", w.N1);
  w.N2 = in.number("metrics.N2", w.N2);
  w.N3 = in.number("metrics.N3", w.N3);
  w.tf = in.number("metrics.tf", w.tf);

  s.validate();
  p.components.validate();
  w.validate();
  return p;
}

}  // namespace

Preset preset_from_config(const KeyValueConfig& cfg) {
  KeyValueConfig merged;
  if (const auto base = cfg.get("base")) merged = preset_to_config(preset(*base));
  for (const auto& [key, value] : cfg.entries()) {
    if (key != "base") merged.set(key, value);
  }
  return build(merged);
}

KeyValueConfig preset_to_config(const Preset& p) {
  KeyValueConfig cfg;
  auto num = [&](const std::string& key, double v) { cfg.set(key, format_number(v)); };
  cfg.set("name", p.name);

  const Scenario& s = p.scenario;
  cfg.set("scenario.reference",
          s.reference.kind == ReferenceSpec::Kind::Sine ? "sine" : "constant");
  num("scenario.amplitude", s.reference.amplitude);
  num("scenario.omega", s.reference.omega);
  num("scenario.tf", s.tf);
  num("scenario.dt", s.dt);
  num("scenario.sample_dt", s.sample_dt);
  cfg.set("scenario.integrator", s.integrator == IntegratorKind::Rk4 ? "rk4" : "rk45");
  if (s.integrator == IntegratorKind::Rk45) {
    num("scenario.rk45.rtol", s.rk45.rtol);
    num("scenario.rk45.atol", s.rk45.atol);
  }
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto& e = s.events[i];
    cfg.set(std::string(kEventPrefix) + std::to_string(i + 1),
            std::string(e.kind == EventKind::DisturbanceStep ? "disturbance" : "inertia") + " " +
                format_number(e.time) + " " + format_number(e.value));
  }
  cfg.set("noise.enabled", s.noise ? "true" : "false");
  if (s.noise) {
    num("noise.mean", s.noise->mean);
    num("noise.variance", s.noise->variance);
    cfg.set("noise.seed", std::to_string(s.noise->seed));
  }

  const PlantParams& pl = p.components.plant;
  num("plant.Ks", pl.Ks);
  num("plant.Jh", pl.Jh);
  num("plant.m", pl.m);
  num("plant.g", pl.g);
  num("plant.h", pl.h);
  num("plant.Km", pl.Km);
  num("plant.Kg", pl.Kg);
  num("plant.Jl", pl.Jl);
  num("plant.Rm", pl.Rm);

  const ObserverConfig& ob = p.components.observer;
  num("observer.omega0", ob.omega0);
  for (Eigen::Index i = 0; i < ob.a.size(); ++i) num("observer.a" + std::to_string(i + 1), ob.a[i]);
  num("observer.b0", ob.b0);
  if (const auto* nl = std::get_if<ImprovedNonlinearEso>(&ob.variant)) {
    cfg.set("observer.variant", "improved");
    num("observer.k_alpha", nl->k_alpha);
    num("observer.k_beta", nl->k_beta);
    num("observer.alpha", nl->alpha);
    num("observer.beta", nl->beta);
  } else {
    cfg.set("observer.variant", "linear");
  }

  if (const auto* n = std::get_if<NlsefConfig>(&p.components.controller)) {
    cfg.set("controller.variant", "nlsef");
    num("nlsef.alpha1", n->alpha1);
    num("nlsef.alpha2", n->alpha2);
    num("nlsef.delta1", n->delta1);
    num("nlsef.delta2", n->delta2);
    num("nlsef.kp", n->kp);
    num("nlsef.kd", n->kd);
  } else {
    const auto& c = std::get<InlsefConfig>(p.components.controller);
    cfg.set("controller.variant", "inlsef");
    num("inlsef.k11", c.k11);
    num("inlsef.k12", c.k12);
    num("inlsef.k21", c.k21);
    num("inlsef.k22", c.k22);
    num("inlsef.mu1", c.mu1);
    num("inlsef.mu2", c.mu2);
    num("inlsef.alpha1", c.alpha1);
    num("inlsef.alpha2", c.alpha2);
    num("inlsef.delta", c.delta);
  }

  if (const auto* td = std::get_if<ClassicTd>(&p.components.differentiator)) {
    cfg.set("td.variant", "classic");
    num("td.R", td->R);
  } else {
    const auto& itd = std::get<ImprovedTd>(p.components.differentiator);
    cfg.set("td.variant", "improved");
    num("td.a", itd.a);
    num("td.b", itd.b);
    num("td.c", itd.c);
    num("td.rho_td", itd.rho_td);
    cfg.set("td.normalized", itd.normalized ? "true" : "false");
  }

  const OpiWeights& w = p.weights;
  num("metrics.w1", w.w1);
  num("metrics.w2", w.w2);
  num("metrics.w3", w.w3);
  num("metrics.N1", w.N1);
  num("metrics.N2", w.N2);
  num("metrics.N3", w.N3);
  num("metrics.tf", w.tf);
  return cfg;
}

namespace {

// Tuned parameter sets for the manipulator; scenario 2 reuses scenario 1's.
ObserverConfig leso_s1() {
  ObserverConfig c;
  c.omega0 = 513.8283;
  c.a.resize(5);
  c.a << 8.772, 0.1946, 0.7384, 9.6881e-3, 2.2651e-6;
  c.b0 = 22.771;
  c.variant = LinearEso{};
  return c;
}

ObserverConfig leso_s3() {
  ObserverConfig c;
  c.omega0 = 851.0106;
  c.a.resize(5);
  c.a << 5.40326, 0.2871, 0.7644, 0.01, 1.22e-6;
  c.b0 = 33.7432;
  c.variant = LinearEso{};
  return c;
}

constexpr ImprovedNonlinearEso kInlesoShaping{.k_alpha = 0.3682, .k_beta = 0.1290,
                                              .alpha = 0.6906, .beta = 0.1880};

ObserverConfig inleso_s1() {
  ObserverConfig c;
  c.omega0 = 104.6131;
  c.a.resize(5);
  c.a << 0.1364, 0.6691, 0.6893, 0.0155, 14.3801e-6;
  c.b0 = 8.745;
  c.variant = kInlesoShaping;
  return c;
}

ObserverConfig inleso_s3() {
  ObserverConfig c;
  c.omega0 = 121.020;
  c.a.resize(5);
  c.a << 0.205, 0.6, 0.42, 0.0232, 7.19e-6;
  c.b0 = 9.7;
  c.variant = kInlesoShaping;
  return c;
}

constexpr NlsefConfig kNlsef{.alpha1 = 0.3804, .alpha2 = 0.4583, .delta1 = 16.6108,
                             .delta2 = 14.6238, .kp = 1.0, .kd = 1.0};

constexpr InlsefConfig kInlsef{.k11 = 1.7741, .k12 = 1.2147, .k21 = 0.00115, .k22 = 0.3312,
                               .mu1 = 3.8297, .mu2 = 10.9415, .alpha1 = 0.8244,
                               .alpha2 = 1.8079, .delta = 3.39};

constexpr ClassicTd kTd{.R = 2408.6918};

constexpr ImprovedTd kItd{.a = 0.9153, .b = 8.7141, .c = 0.0813, .rho_td = 22.89333,
                          .normalized = true};

Scenario scenario(int index) {
  Scenario s;
  s.reference = {ReferenceSpec::Kind::Sine, 45.0, 2.0};
  s.tf = 20.0;
  s.dt = 1e-4;
  s.sample_dt = 1e-3;
  if (index == 2) {
    s.events = {{0.0, EventKind::InertiaScale, 1.4}, {10.0, EventKind::DisturbanceStep, 0.5}};
  }
  if (index == 3) s.noise = NoiseSpec{0.0, 1e-4, 1};
  return s;
}

Preset make(std::string name, int scenario_index, bool improved) {
  Preset p;
  p.name = std::move(name);
  p.scenario = scenario(scenario_index);
  p.components.plant = slfjm_default_params();
  if (improved) {
    p.components.observer = scenario_index == 3 ? inleso_s3() : inleso_s1();
    p.components.controller = kInlsef;
    p.components.differentiator = kItd;
  } else {
    p.components.observer = scenario_index == 3 ? leso_s3() : leso_s1();
    p.components.controller = kNlsef;
    p.components.differentiator = kTd;
  }
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"s1-leso", "s1-inleso", "s2-leso", "s2-inleso", "s3-leso", "s3-inleso"};
}

Preset preset(std::string_view name) {
  for (int index = 1; index <= 3; ++index) {
    for (bool improved : {false, true}) {
      std::string candidate = "s" + std::to_string(index) + (improved ? "-inleso" : "-leso");
      if (candidate == name) return make(std::move(candidate), index, improved);
    }
  }
  std::string list;
  for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
  throw LookupError("unknown preset '" + std::string(name) + "'; available: " + list);
}

}  // namespace aiofl
