#pragma once

#include <string>
#include <vector>

#include "stirap/app/config.hpp"

namespace stirap::app {

struct Preset {
  std::string name;
  std::string citation;  // what the panel shows
  json config;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = [] {
    std::vector<Preset> v;
    auto add = [&](std::string name, std::string citation, json cfg) {
      cfg["preset"] = name;
      v.push_back({std::move(name), std::move(citation), std::move(cfg)});
    };
    const json resonant_closed = {{"base", "resonant"}, {"decoherence", "none"}};
    add("fig1c", "resonant STIRAP populations from |0>, closed system",
        {{"campaign", "simulate"}, {"protocol", resonant_closed}, {"simulate", {{"initial", {"0"}}, {"points", 1001}}}});
    add("fig1d", "resonant STIRAP populations from |1>, closed system",
        {{"campaign", "simulate"}, {"protocol", resonant_closed}, {"simulate", {{"initial", {"1"}}, {"points", 1001}}}});
    add("fig2a", "detuned pi gate populations from |0> and |1>",
        {{"campaign", "simulate"},
         {"protocol", {{"base", "detuned_pi"}}},
         {"simulate", {{"initial", {"0", "1"}}, {"points", 521}}}});
    add("fig2b", "detuned pi gate overlaps with the instantaneous eigenbasis",
        {{"campaign", "simulate"},
         {"protocol", {{"base", "detuned_pi"}}},
         {"simulate", {{"initial", {"0", "1"}}, {"points", 521}, {"overlaps", true}, {"margins", true}}}});
    add("fig2c", "detuned half-pi gate populations from |0> and |1>",
        {{"campaign", "simulate"},
         {"protocol", {{"base", "detuned_half_pi"}}},
         {"simulate", {{"initial", {"0", "1"}}, {"points", 521}}}});
    add("fig2d", "detuned half-pi gate overlaps with the instantaneous eigenbasis",
        {{"campaign", "simulate"},
         {"protocol", {{"base", "detuned_half_pi"}}},
         {"simulate", {{"initial", {"0", "1"}}, {"points", 521}, {"overlaps", true}, {"margins", true}}}});
    add("fig3d", "resonant STIRAP transfer from |0> with measured T1/T2",
        {{"campaign", "simulate"},
         {"protocol", {{"base", "resonant"}, {"decoherence", "device"}}},
         {"simulate", {{"initial", {"0"}}, {"points", 826}}}});
    add("fig4a", "transfer populations vs drive amplitude, both initial states",
        {{"campaign", "calibrate"},
         {"protocol", {{"base", "detuned_pi"}}},
         {"calibrate", {{"kind", "pi"}, {"pi_grid", {{"min", 0.0}, {"max", 24.0}, {"points", 61}}}}}});
    add("fig4b", "overlap with (|0>+|1>)/sqrt2 vs common drive phase",
        {{"campaign", "calibrate"},
         {"protocol", {{"base", "detuned_half_pi"}}},
         {"calibrate", {{"kind", "phase"}}}});
    add("fig5", "tomography of pi and half-pi outputs from |0> and |1>",
        {{"campaign", "tomography"},
         {"seed", 7},
         {"protocol", {{"base", "detuned_pi"}, {"decoherence", "device"}}},
         {"tomography", {{"gates", {"pi", "half_pi"}}, {"initial", {"0", "1"}}}}});
    add("fig6a", "gate infidelity vs amplitude error, pi and half-pi",
        {{"campaign", "sweep"},
         {"protocol", {{"base", "detuned_pi"}, {"decoherence", "device"}}},
         {"sweep",
          {{"kind", "robustness"},
           {"gates", {"pi", "half_pi"}},
           {"axes", {"amplitude"}},
           {"initial", {"0"}},
           {"baseline", false},
           {"deviation", {{"min", -0.3}, {"max", 0.3}, {"points", 25}}}}}});
    add("fig6b", "gate infidelity vs detuning error, pi and half-pi",
        {{"campaign", "sweep"},
         {"protocol", {{"base", "detuned_pi"}, {"decoherence", "device"}}},
         {"sweep",
          {{"kind", "robustness"},
           {"gates", {"pi", "half_pi"}},
           {"axes", {"frequency"}},
           {"initial", {"0"}},
           {"baseline", false},
           {"deviation", {{"min", -0.3}, {"max", 0.3}, {"points", 25}}}}}});
    const json map_sweep = {{"kind", "map"},
                            {"detuning", {{"min", 0.0}, {"max", 40.0}, {"points", 81}}},
                            {"amplitude", {{"min", 0.0}, {"max", 40.0}, {"points", 81}}}};
    json fig9a = map_sweep;
    fig9a["levels"] = {0.5, 0.9, 0.99};
    add("fig9a", "P(1 <- 0) and P(0 <- 1) over detuning and amplitude",
        {{"campaign", "sweep"}, {"protocol", {{"base", "map"}}}, {"sweep", fig9a}});
    json fig9b = map_sweep;
    fig9b["levels"] = {0.5, 1.0};
    fig9b["tolerance"] = 1e-3;
    add("fig9b", "common equal-superposition and full-transfer regions at tolerance 1e-3",
        {{"campaign", "sweep"}, {"protocol", {{"base", "map"}}}, {"sweep", fig9b}});
    add("fig9c", "pi gate infidelity vs amplitude and frequency deviation, with resonant baseline",
        {{"campaign", "sweep"},
         {"protocol", {{"base", "detuned_pi"}}},
         {"sweep",
          {{"kind", "robustness"},
           {"gates", {"pi"}},
           {"axes", {"amplitude", "frequency"}},
           {"initial", {"0", "1"}},
           {"baseline", true}}}});
    add("fig9d", "half-pi gate infidelity vs amplitude and frequency deviation, with resonant baseline",
        {{"campaign", "sweep"},
         {"protocol", {{"base", "detuned_half_pi"}}},
         {"sweep",
          {{"kind", "robustness"},
           {"gates", {"half_pi"}},
           {"axes", {"amplitude", "frequency"}},
           {"initial", {"0", "1"}},
           {"baseline", true}}}});
    add("tableI", "circuit model and dispersive shifts vs the device parameter table",
        {{"campaign", "device-report"}, {"device", {{"levels", 6}}}});
    return v;
  }();
  return all;
}

inline const Preset& find_preset(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return p;
  throw ConfigError("--preset", "unknown preset '" + name + "'");
}

}  // namespace stirap::app
