#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "stirap/device.hpp"
#include "stirap/gates.hpp"
#include "stirap/sweeps.hpp"
#include "stirap/tomography.hpp"

namespace stirap::app {

using json = nlohmann::json;

/// Walks one JSON object, remembers which keys were read and rejects the
/// rest on finish(). Errors carry the dotted key path.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!j_.contains(key)) return fallback;
    return require<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(key_path(key), "missing required key");
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(key_path(key), "expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(key_path(key), "expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(key_path(key), "expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(key_path(key), "expected a string");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(key_path(key), e.what());
    }
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  ObjectReader child(const std::string& key) {
    used_.insert(key);
    return ObjectReader(j_.at(key), key_path(key));
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key())) throw ConfigError(key_path(item.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

struct SimulateSpec {
  std::vector<Level> initial{Level::zero};
  int points = 521;
  bool overlaps = false;
  bool margins = false;
};

struct CalibrationGrids {
  SweepAxis pi{"amplitude", "MHz", 0.0, 24.0, 61};
  SweepAxis half_pi{"amplitude", "MHz", 2.0, 16.0, 57};
  SweepAxis phase{"phase", "rad", -stirap::pi, stirap::pi, 73};
};

struct CalibrateSpec {
  std::string kind = "pi";  // pi | half_pi | phase
  CalibrationGrids grids;
  std::optional<double> phase_amplitude_mhz;  // phase mode; else from half_pi crossing
};

struct TomographySpec {
  MeasurementModel model;
  std::vector<std::string> gates{"pi", "half_pi"};
  std::vector<Level> initial{Level::zero, Level::one};
  double rotation_angle_error = 0.0;  // applied when simulating, not when reconstructing
  CalibrationGrids grids;
};

struct SweepSpec {
  std::string kind = "map";  // map | robustness
  SweepAxis detuning{"detuning", "MHz", 0.0, 40.0, 81};
  SweepAxis amplitude{"amplitude", "MHz", 0.0, 40.0, 81};
  std::vector<double> levels{0.5, 0.999};
  double tolerance = 1e-3;
  std::vector<std::string> gates{"pi"};
  std::vector<std::string> axes{"amplitude", "frequency"};
  SweepAxis deviation{"deviation", "fraction", -0.3, 0.3, 25};
  std::vector<Level> initial{Level::zero, Level::one};
  bool baseline = true;
  double frequency_scale_mhz = 0.0;
  CalibrationGrids grids;
};

struct DeviceSpec {
  int levels = 6;
  bool asymmetry = true;
  device::TableValues table;
};

inline const std::vector<std::string>& campaign_names() {
  static const std::vector<std::string> names{"simulate", "calibrate", "tomography", "sweep", "device-report"};
  return names;
}

struct ExperimentConfig {
  std::string campaign;
  std::string preset;  // provenance label
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int jobs = 0;
  StirapProtocol protocol;
  SimulateSpec simulate;
  CalibrateSpec calibrate;
  TomographySpec tomography;
  SweepSpec sweep;
  DeviceSpec device;
  json document;  // the validated input
};

namespace detail {

inline Level parse_level(const json& v, const std::string& path) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "0") return Level::zero;
    if (s == "1") return Level::one;
    if (s == "g") return Level::ground;
  } else if (v.is_number_integer()) {
    const int i = v.get<int>();
    if (i == 0) return Level::zero;
    if (i == 1) return Level::one;
  }
  throw ConfigError(path, "expected a level: \"0\", \"1\" or \"g\"");
}

inline std::vector<Level> parse_levels(ObjectReader& r, const std::string& key, std::vector<Level> fallback,
                                       bool allow_ground = false) {
  if (!r.has(key)) return fallback;
  const json& v = r.raw(key);
  if (!v.is_array() || v.empty()) throw ConfigError(r.key_path(key), "expected a non-empty array of levels");
  std::vector<Level> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = r.key_path(key) + "[" + std::to_string(i) + "]";
    const Level l = parse_level(v[i], p);
    if (l == Level::ground && !allow_ground) throw ConfigError(p, "initial state must be |0> or |1>");
    out.push_back(l);
  }
  return out;
}

inline std::vector<std::string> parse_choices(ObjectReader& r, const std::string& key, std::vector<std::string> fallback,
                                              const std::set<std::string>& allowed) {
  if (!r.has(key)) return fallback;
  const json& v = r.raw(key);
  if (!v.is_array() || v.empty()) throw ConfigError(r.key_path(key), "expected a non-empty array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = r.key_path(key) + "[" + std::to_string(i) + "]";
    if (!v[i].is_string() || !allowed.count(v[i].get<std::string>())) throw ConfigError(p, "unsupported value");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

inline std::string parse_choice(ObjectReader& r, const std::string& key, std::string fallback,
                                const std::set<std::string>& allowed) {
  const std::string v = r.get<std::string>(key, fallback);
  if (!allowed.count(v)) throw ConfigError(r.key_path(key), "unsupported value '" + v + "'");
  return v;
}

inline SweepAxis parse_axis(ObjectReader& parent, const std::string& key, SweepAxis axis) {
  if (!parent.has(key)) return axis;
  ObjectReader r = parent.child(key);
  axis.min = r.get<double>("min", axis.min);
  axis.max = r.get<double>("max", axis.max);
  axis.points = r.get<int>("points", axis.points);
  r.finish();
  try {
    axis.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(parent.key_path(key), e.what());
  }
  return axis;
}

inline CalibrationGrids parse_grids(ObjectReader& r, CalibrationGrids g) {
  g.pi = parse_axis(r, "pi_grid", g.pi);
  g.half_pi = parse_axis(r, "half_pi_grid", g.half_pi);
  g.phase = parse_axis(r, "phase_grid", g.phase);
  return g;
}

inline StirapProtocol base_protocol(const std::string& name, const std::string& path) {
  if (name == "resonant") return resonant_stirap_preset();
  if (name == "detuned_pi") return detuned_preset(GateKind::pi);
  if (name == "detuned_half_pi") return detuned_preset(GateKind::half_pi);
  if (name == "map") return map_preset();
  throw ConfigError(path, "unknown protocol base '" + name + "'");
}

inline StirapProtocol parse_protocol(ObjectReader& root) {
  StirapProtocol p = detuned_preset(GateKind::pi);
  if (!root.has("protocol")) return p;
  ObjectReader r = root.child("protocol");
  if (r.has("base")) p = base_protocol(r.require<std::string>("base"), r.key_path("base"));
  p.duration_ns = r.get<double>("duration_ns", p.duration_ns);
  p.sigma_ns = r.get<double>("sigma_ns", p.sigma_ns);
  p.offset_ns = r.get<double>("offset_ns", p.offset_ns);
  p.amplitude_mhz = r.get<double>("amplitude_mhz", p.amplitude_mhz);
  const double delta = r.get<double>("single_photon_detuning_mhz", p.drive.single_photon_mhz());
  const double two = r.get<double>("two_photon_detuning_mhz", p.drive.two_photon_mhz());
  p.drive = DriveConfig::from_detunings(delta, two);
  p.common_phase_rad = r.get<double>("common_phase_rad", p.common_phase_rad);
  p.differential_phase_rad = r.get<double>("differential_phase_rad", p.differential_phase_rad);
  p.counter_intuitive = r.get<bool>("counter_intuitive", p.counter_intuitive);
  p.steps = r.get<int>("steps", p.steps);
  if (r.has("decoherence")) {
    const json& d = r.raw("decoherence");
    const std::string path = r.key_path("decoherence");
    if (d.is_string()) {
      const std::string s = d.get<std::string>();
      if (s == "device")
        p.decoherence = Decoherence::device_table();
      else if (s == "none")
        p.decoherence.reset();
      else
        throw ConfigError(path, "expected \"device\", \"none\" or an object of T1/T2 times");
    } else {
      ObjectReader dr(d, path);
      Decoherence dec = p.decoherence.value_or(Decoherence::device_table());
      dec.t1_0_us = dr.get<double>("t1_0_us", dec.t1_0_us);
      dec.t1_1_us = dr.get<double>("t1_1_us", dec.t1_1_us);
      dec.t2_0_us = dr.get<double>("t2_0_us", dec.t2_0_us);
      dec.t2_1_us = dr.get<double>("t2_1_us", dec.t2_1_us);
      dr.finish();
      p.decoherence = dec;
    }
  }
  r.finish();
  try {
    p.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("protocol", e.what());
  }
  return p;
}

}  // namespace detail

/// Validates a config document completely before anything is computed.
inline ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig c;
  c.document = doc;
  ObjectReader root(doc, "");
  c.campaign = root.require<std::string>("campaign");
  if (std::find(campaign_names().begin(), campaign_names().end(), c.campaign) == campaign_names().end())
    throw ConfigError("campaign", "unknown campaign '" + c.campaign + "'");
  c.preset = root.get<std::string>("preset", "");
  const std::int64_t seed = root.get<std::int64_t>("seed", 0);
  if (seed < 0) throw ConfigError("seed", "must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  if (root.has("output")) {
    ObjectReader o = root.child("output");
    c.out_dir = o.get<std::string>("dir", c.out_dir);
    o.finish();
  }
  c.jobs = root.get<int>("jobs", 0);
  if (c.jobs < 0) throw ConfigError("jobs", "must be >= 0");
  c.protocol = detail::parse_protocol(root);

  // only the section belonging to the campaign is accepted
  const std::string section = c.campaign == "device-report" ? "device" : c.campaign;
  for (const char* s : {"simulate", "calibrate", "tomography", "sweep", "device"})
    if (root.has(s) && section != s) throw ConfigError(s, "section does not apply to campaign '" + c.campaign + "'");

  if (root.has(section)) {
    ObjectReader r = root.child(section);
    if (section == "simulate") {
      c.simulate.initial = detail::parse_levels(r, "initial", c.simulate.initial);
      c.simulate.points = r.get<int>("points", c.simulate.points);
      if (c.simulate.points < 2) throw ConfigError("simulate.points", "must be >= 2");
      c.simulate.overlaps = r.get<bool>("overlaps", c.simulate.overlaps);
      c.simulate.margins = r.get<bool>("margins", c.simulate.margins);
    } else if (section == "calibrate") {
      c.calibrate.kind = detail::parse_choice(r, "kind", c.calibrate.kind, {"pi", "half_pi", "phase"});
      c.calibrate.grids = detail::parse_grids(r, c.calibrate.grids);
      if (r.has("phase_amplitude_mhz")) c.calibrate.phase_amplitude_mhz = r.require<double>("phase_amplitude_mhz");
    } else if (section == "tomography") {
      MeasurementModel& m = c.tomography.model;
      m.alpha_g = r.get<double>("alpha_g", m.alpha_g);
      m.alpha_0 = r.get<double>("alpha_0", m.alpha_0);
      m.alpha_1 = r.get<double>("alpha_1", m.alpha_1);
      m.shot_noise_sigma = r.get<double>("noise_sigma", m.shot_noise_sigma);
      try {
        m.validate();
      } catch (const Error& e) {
        throw ConfigError("tomography", e.what());
      }
      c.tomography.gates = detail::parse_choices(r, "gates", c.tomography.gates, {"pi", "half_pi"});
      c.tomography.initial = detail::parse_levels(r, "initial", c.tomography.initial);
      c.tomography.rotation_angle_error = r.get<double>("rotation_angle_error", 0.0);
      c.tomography.grids = detail::parse_grids(r, c.tomography.grids);
    } else if (section == "sweep") {
      SweepSpec& s = c.sweep;
      s.kind = detail::parse_choice(r, "kind", s.kind, {"map", "robustness"});
      s.detuning = detail::parse_axis(r, "detuning", s.detuning);
      s.amplitude = detail::parse_axis(r, "amplitude", s.amplitude);
      if (r.has("levels")) {
        const json& v = r.raw("levels");
        if (!v.is_array()) throw ConfigError("sweep.levels", "expected an array of numbers");
        s.levels.clear();
        for (const json& x : v) {
          if (!x.is_number()) throw ConfigError("sweep.levels", "expected an array of numbers");
          s.levels.push_back(x.get<double>());
        }
      }
      s.tolerance = r.get<double>("tolerance", s.tolerance);
      if (!(s.tolerance >= 0.0)) throw ConfigError("sweep.tolerance", "must be >= 0");
      s.gates = detail::parse_choices(r, "gates", s.gates, {"pi", "half_pi"});
      s.axes = detail::parse_choices(r, "axes", s.axes, {"amplitude", "frequency", "two_photon"});
      s.deviation = detail::parse_axis(r, "deviation", s.deviation);
      s.initial = detail::parse_levels(r, "initial", s.initial);
      s.baseline = r.get<bool>("baseline", s.baseline);
      s.frequency_scale_mhz = r.get<double>("frequency_scale_mhz", s.frequency_scale_mhz);
      s.grids = detail::parse_grids(r, s.grids);
    } else {
      c.device.levels = r.get<int>("levels", c.device.levels);
      if (c.device.levels < 4) throw ConfigError("device.levels", "must be >= 4");
      c.device.asymmetry = r.get<bool>("junction_asymmetry", c.device.asymmetry);
      c.device.table.g_b = r.get<double>("g_b_mhz", c.device.table.g_b);
      c.device.table.cavity = r.get<double>("cavity_mhz", c.device.table.cavity);
    }
    r.finish();
  }
  root.finish();
  return c;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("parse error: ") + e.what());
  }
}

}  // namespace stirap::app
