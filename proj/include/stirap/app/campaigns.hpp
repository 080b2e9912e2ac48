#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "stirap/app/config.hpp"
#include "stirap/device.hpp"
#include "stirap/gates.hpp"
#include "stirap/spectral.hpp"
#include "stirap/sweeps.hpp"
#include "stirap/table.hpp"
#include "stirap/tomography.hpp"

namespace stirap::app {

/// Axis description handed to --emit-plot-script.
struct PlotSpec {
  std::string style;  // "line" or "heatmap"
  std::string x;
  std::vector<std::string> y;
  std::string x_label;
  std::string y_label;
};

struct Artifact {
  std::string name;  // relative to the output directory
  std::string content;
  std::optional<PlotSpec> plot;
};

struct Failure {
  std::string kind;
  std::string message;
};

struct CampaignOutput {
  std::vector<Artifact> artifacts;
  json summary = json::object();
  std::optional<Failure> failure;  // artifacts are still written
};

namespace detail {

inline std::string level_name(Level l) {
  switch (l) {
    case Level::zero: return "0";
    case Level::ground: return "g";
    case Level::one: return "1";
  }
  return "?";
}

inline GateKind gate_kind(const std::string& s) { return s == "pi" ? GateKind::pi : GateKind::half_pi; }

inline CsvTable table(const ExperimentConfig& cfg, std::vector<Column> cols, const std::string& panel) {
  CsvTable t(std::move(cols));
  t.add_provenance("preset", cfg.preset.empty() ? "none" : cfg.preset);
  t.add_provenance("campaign", cfg.campaign);
  t.add_provenance("panel", panel);
  return t;
}

inline void describe_protocol(CsvTable& t, const StirapProtocol& p) {
  t.add_provenance("duration_ns", format_number(p.duration_ns));
  t.add_provenance("sigma_ns", format_number(p.sigma_ns));
  t.add_provenance("offset_ns", format_number(p.offset_ns));
  t.add_provenance("amplitude_mhz", format_number(p.amplitude_mhz));
  t.add_provenance("single_photon_detuning_mhz", format_number(p.drive.single_photon_mhz()));
  t.add_provenance("two_photon_detuning_mhz", format_number(p.drive.two_photon_mhz()));
  t.add_provenance("common_phase_rad", format_number(p.common_phase_rad));
  t.add_provenance("decoherence", p.decoherence ? "lindblad" : "none");
  const double half = 0.5 * p.duration_ns / p.sigma_ns;
  t.add_provenance("edge_discontinuity_rel", format_number(std::exp(-0.5 * half * half)));
}

inline json protocol_json(const StirapProtocol& p) {
  return {{"duration_ns", p.duration_ns},
          {"sigma_ns", p.sigma_ns},
          {"offset_ns", p.offset_ns},
          {"amplitude_mhz", p.amplitude_mhz},
          {"single_photon_detuning_mhz", p.drive.single_photon_mhz()},
          {"two_photon_detuning_mhz", p.drive.two_photon_mhz()},
          {"common_phase_rad", p.common_phase_rad},
          {"differential_phase_rad", p.differential_phase_rad},
          {"decoherence", p.decoherence.has_value()}};
}

inline json matrix_json(const Matrix3c& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return {{"real", re}, {"imag", im}};
}

// ---------------------------------------------------------------------------

inline CampaignOutput run_simulate(const ExperimentConfig& cfg, int) {
  CampaignOutput out;
  const StirapProtocol& p = cfg.protocol;
  const SimulateSpec& spec = cfg.simulate;
  if (spec.overlaps && p.decoherence)
    throw ConfigError("simulate.overlaps", "eigenbasis overlaps need a closed system (protocol.decoherence = \"none\")");
  const VSystem sys = p.system();
  const std::vector<double> grid = protocol_grid(p, spec.points);
  json runs = json::array();
  for (Level init : spec.initial) {
    EvolutionTrace tr;
    json run = {{"initial", level_name(init)}};
    if (p.decoherence) {
      LindbladOptions opt;
      opt.max_step_ns = p.total_window_ns() / p.steps;
      const LindbladResult res = propagate_lindblad(sys, DensityMatrix::pure(ket(init)), grid, opt);
      tr = res.trace;
      run["max_trace_drift"] = res.max_trace_drift;
      run["min_eigenvalue"] = res.min_eigenvalue;
    } else {
      tr = evolve_pure(sys, ket(init), grid, spec.overlaps, p.steps);
    }
    std::vector<Column> cols{{"time", "ns"}, {"P0", ""}, {"Pg", ""}, {"P1", ""}};
    if (tr.has_overlaps()) {
      cols.push_back({"overlap_plus", ""});
      cols.push_back({"overlap_dark", ""});
      cols.push_back({"overlap_minus", ""});
    }
    CsvTable t = table(cfg, cols, "populations from |" + level_name(init) + ">");
    describe_protocol(t, p);
    for (std::size_t i = 0; i < tr.time_ns.size(); ++i) {
      std::vector<CsvTable::Cell> row{tr.time_ns[i], tr.populations[i][0], tr.populations[i][1], tr.populations[i][2]};
      if (tr.has_overlaps())
        for (double o : tr.overlaps[i]) row.push_back(o);
      t.add_row(std::move(row));
    }
    const auto& last = tr.populations.back();
    run["final_populations"] = {last[0], last[1], last[2]};
    if (tr.has_overlaps()) {
      // the carrier is |d> from |0> and |-> from |1>
      const int carrier = init == Level::zero ? 1 : 2;
      std::size_t worst = 0;
      for (std::size_t i = 0; i < tr.overlaps.size(); ++i)
        if (tr.overlaps[i][carrier] < tr.overlaps[worst][carrier]) worst = i;
      run["carrier"] = carrier == 1 ? "dark" : "minus";
      run["min_carrier_overlap"] = tr.overlaps[worst][carrier];
      run["min_carrier_overlap_time_ns"] = tr.time_ns[worst];
    }
    PlotSpec plot{"line", "time [ns]", {"P0", "Pg", "P1"}, "time (ns)", "population"};
    if (tr.has_overlaps()) plot.y.insert(plot.y.end(), {"overlap_plus", "overlap_dark", "overlap_minus"});
    out.artifacts.push_back({"trace_" + level_name(init) + ".csv", t.str(), plot});
    runs.push_back(run);
  }
  out.summary["runs"] = runs;
  out.summary["protocol"] = protocol_json(p);

  if (spec.margins) {
    const AdiabaticityReport rep = adiabaticity_margins(sys, grid);
    CsvTable t = table(cfg,
                       {{"time", "ns"}, {"theta", "rad"}, {"phi", "rad"}, {"eps_plus", "rad/us"}, {"eps_minus", "rad/us"},
                        {"phi_dot", "rad/us"}, {"theta_dot_sin_phi", "rad/us"}, {"theta_dot_cos_phi", "rad/us"},
                        {"gap_plus_minus", "rad/us"}, {"abs_eps_plus", "rad/us"}, {"abs_eps_minus", "rad/us"},
                        {"ratio_1", ""}, {"ratio_2", ""}, {"ratio_3", ""}},
                       "adiabaticity conditions");
    describe_protocol(t, p);
    for (const AdiabaticityRow& r : rep.rows)
      t.add_row({r.t_ns, r.angles.theta, r.angles.phi, r.eps_plus, r.eps_minus, r.lhs[0], r.lhs[1], r.lhs[2], r.rhs[0],
                 r.rhs[1], r.rhs[2], r.ratio[0], r.ratio[1], r.ratio[2]});
    out.artifacts.push_back({"margins.csv", t.str(),
                             PlotSpec{"line", "time [ns]", {"ratio_1", "ratio_2", "ratio_3"}, "time (ns)", "ratio"}});
    const auto overlap = overlap_worst_ratio(sys, rep);
    out.summary["adiabaticity"] = {{"worst_ratio_overlap_region", {overlap[0], overlap[1], overlap[2]}},
                                   {"worst_ratio_all", {rep.worst_ratio[0], rep.worst_ratio[1], rep.worst_ratio[2]}},
                                   {"derivative_check_rad_per_us", rep.derivative_check}};
  }
  return out;
}

inline Artifact calibration_artifact(const ExperimentConfig& cfg, const StirapProtocol& p, const CalibrationResult& r,
                                     const std::string& name) {
  CsvTable t = table(cfg,
                     {{"amplitude", "MHz"}, {"P0_from_0", ""}, {"Pg_from_0", ""}, {"P1_from_0", ""}, {"P0_from_1", ""},
                      {"Pg_from_1", ""}, {"P1_from_1", ""}, {"metric", ""}},
                     std::string("transfer vs amplitude (") + to_string(r.kind) + ")");
  describe_protocol(t, p);
  t.add_provenance("metric", r.kind == GateKind::pi ? "min(P1_from_0, P0_from_1)" : "P1_from_0 - P1_from_1");
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    std::vector<CsvTable::Cell> row{r.grid[i]};
    for (int s = 0; s < 2; ++s)
      for (int l = 0; l < 3; ++l) row.push_back(r.populations[s][l].empty() ? std::nan("") : r.populations[s][l][i]);
    row.push_back(r.metric_values.empty() ? std::nan("") : r.metric_values[i]);
    t.add_row(std::move(row));
  }
  return {name, t.str(),
          PlotSpec{"line", "amplitude [MHz]",
                   {"P0_from_0", "Pg_from_0", "P1_from_0", "P0_from_1", "Pg_from_1", "P1_from_1"},
                   "amplitude (MHz)", "population"}};
}

inline Artifact phase_artifact(const ExperimentConfig& cfg, const StirapProtocol& p, const CalibrationResult& r) {
  CsvTable t = table(cfg, {{"beta", "rad"}, {"overlap", ""}, {"sinusoid_fit", ""}}, "overlap with (|0>+|1>)/sqrt2 vs phase");
  describe_protocol(t, p.with_amplitude(r.optimal_amplitude_mhz));
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const double fit = r.sinusoid[0] + r.sinusoid[1] * std::cos(r.grid[i] - r.sinusoid[2]);
    t.add_row({r.grid[i], r.metric_values[i], fit});
  }
  return {"phase.csv", t.str(), PlotSpec{"line", "beta [rad]", {"overlap", "sinusoid_fit"}, "phase (rad)", "overlap"}};
}

inline json calibration_json(const CalibrationResult& r) {
  json j = {{"kind", to_string(r.kind)},
            {"swept", r.swept},
            {"optimal_amplitude_mhz", r.optimal_amplitude_mhz},
            {"optimal_phase_rad", r.optimal_phase_rad},
            {"metric", r.metric}};
  if (r.swept == "phase_rad")
    j["sinusoid"] = {{"offset", r.sinusoid[0]}, {"amplitude", r.sinusoid[1]}, {"phase_rad", r.sinusoid[2]},
                     {"rms_residual", r.sinusoid_rms}};
  return j;
}

inline CampaignOutput run_calibrate(const ExperimentConfig& cfg, int jobs) {
  CampaignOutput out;
  const StirapProtocol& p = cfg.protocol;
  const CalibrateSpec& spec = cfg.calibrate;
  out.summary["protocol"] = protocol_json(p);
  try {
    if (spec.kind == "phase") {
      double amp = 0.0;
      if (spec.phase_amplitude_mhz) {
        amp = *spec.phase_amplitude_mhz;
      } else {
        const CalibrationResult a = calibrate_amplitude(p, spec.grids.half_pi.values(), GateKind::half_pi, jobs);
        out.artifacts.push_back(calibration_artifact(cfg, p, a, "calibration_half_pi.csv"));
        out.summary["amplitude"] = calibration_json(a);
        amp = a.optimal_amplitude_mhz;
      }
      const CalibrationResult r = calibrate_phase(p, amp, spec.grids.phase.values(), jobs);
      out.artifacts.push_back(phase_artifact(cfg, p, r));
      out.summary["phase"] = calibration_json(r);
    } else {
      const GateKind kind = gate_kind(spec.kind);
      const SweepAxis& axis = kind == GateKind::pi ? spec.grids.pi : spec.grids.half_pi;
      const CalibrationResult r = calibrate_amplitude(p, axis.values(), kind, jobs);
      out.artifacts.push_back(calibration_artifact(cfg, p, r, "calibration_" + spec.kind + ".csv"));
      out.summary["amplitude"] = calibration_json(r);
    }
  } catch (const CalibrationFailed& e) {
    const CalibrationResult& r = e.record();
    if (r.swept == "phase_rad")
      out.artifacts.push_back(phase_artifact(cfg, p, r));
    else
      out.artifacts.push_back(calibration_artifact(cfg, p, r, std::string("calibration_") + to_string(r.kind) + ".csv"));
    out.failure = Failure{e.kind(), e.what()};
  }
  return out;
}

inline CampaignOutput run_tomography(const ExperimentConfig& cfg, int jobs) {
  CampaignOutput out;
  const TomographySpec& spec = cfg.tomography;
  CsvTable records = table(cfg, {{"gate", ""}, {"initial", ""}, {"rotation", ""}, {"value", ""}}, "tomography signals");
  CsvTable fid = table(cfg,
                       {{"gate", ""}, {"initial", ""}, {"fidelity_simulated", ""}, {"fidelity_linear", ""},
                        {"fidelity_mle", ""}, {"linear_min_eigenvalue", ""}, {"mle_min_eigenvalue", ""}},
                       "target-state fidelities");
  for (CsvTable* t : {&records, &fid}) {
    t->add_provenance("alpha", format_number(spec.model.alpha_0) + " " + format_number(spec.model.alpha_g) + " " +
                                   format_number(spec.model.alpha_1));
    t->add_provenance("noise_sigma", format_number(spec.model.shot_noise_sigma));
    t->add_provenance("rotation_angle_error", format_number(spec.rotation_angle_error));
    t->add_provenance("seed", std::to_string(cfg.seed));
    t->add_provenance("decoherence", cfg.protocol.decoherence ? "lindblad" : "none");
  }
  json states = json::array();
  json gates = json::array();
  std::uint64_t stream = 0;
  for (const std::string& g : spec.gates) {
    const GateKind kind = gate_kind(g);
    const CalibratedGate cal =
        calibrate_gate(cfg.protocol, kind, kind == GateKind::pi ? spec.grids.pi.values() : spec.grids.half_pi.values(),
                       spec.grids.phase.values(), jobs);
    json gj = {{"gate", g}, {"amplitude", calibration_json(cal.amplitude)}, {"protocol", protocol_json(cal.protocol)}};
    if (cal.phase) gj["phase"] = calibration_json(*cal.phase);
    gates.push_back(gj);
    for (Level init : spec.initial) {
      const Matrix3c rho = final_density(cal.protocol, init);
      const DensityMatrix state = DensityMatrix::checked(rho);
      const TomographyRecord rec = simulate_measurements(state, spec.model, cfg.seed + stream++,
                                                         rotation_set(spec.rotation_angle_error));
      const ReconstructedState lin = linear_inversion(rec, spec.model);
      const ReconstructedState mle = mle_project(lin);
      const Matrix3c target = projector(gate_target(kind, init));
      for (int k = 0; k < 9; ++k) records.add_row({g, level_name(init), rec.labels[k], rec.values[k]});
      fid.add_row({g, level_name(init), state_fidelity(rho, target), state_fidelity(lin.rho, target),
                   state_fidelity(mle.rho, target), lin.min_eigenvalue, mle.min_eigenvalue});
      states.push_back({{"gate", g},
                        {"initial", level_name(init)},
                        {"simulated", matrix_json(rho)},
                        {"linear", matrix_json(lin.rho)},
                        {"mle", matrix_json(mle.rho)},
                        {"mle_converged", mle.converged},
                        {"fidelity_mle", state_fidelity(mle.rho, target)}});
    }
  }
  out.artifacts.push_back({"tomography_signals.csv", records.str(), std::nullopt});
  out.artifacts.push_back({"tomography_fidelity.csv", fid.str(), std::nullopt});
  out.artifacts.push_back({"tomography_states.json", json{{"basis", {"0", "g", "1"}}, {"layout", "row-major"},
                                                         {"states", states}}
                                                         .dump(2) +
                                                         "\n",
                           std::nullopt});
  out.summary["gates"] = gates;
  out.summary["states"] = states;
  return out;
}

inline CampaignOutput run_map(const ExperimentConfig& cfg, int jobs) {
  CampaignOutput out;
  const SweepSpec& spec = cfg.sweep;
  SweepGrid grid;
  grid.axes = {spec.detuning, spec.amplitude};
  const auto [m0, m1] = amplitude_detuning_maps(cfg.protocol, grid, jobs);
  const std::vector<double> xs = spec.detuning.values(), ys = spec.amplitude.values();
  for (const SweepResult* m : {&m0, &m1}) {
    CsvTable t = table(cfg, {{"detuning", "MHz"}, {"amplitude", "MHz"}, {m->metric, ""}}, m->metric + " map");
    describe_protocol(t, cfg.protocol);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) t.add_row({xs[i], ys[j], m->at(int(i), int(j))});
    out.artifacts.push_back({"map_" + m->metric + ".csv", t.str(),
                             PlotSpec{"heatmap", "detuning [MHz]", {"amplitude [MHz]", m->metric}, "detuning (MHz)",
                                      "amplitude (MHz)"}});
  }
  CsvTable contours = table(cfg,
                            {{"map", ""}, {"level", ""}, {"detuning_0", "MHz"}, {"amplitude_0", "MHz"},
                             {"detuning_1", "MHz"}, {"amplitude_1", "MHz"}},
                            "iso-population contours");
  CsvTable regions = table(cfg, {{"level", ""}, {"detuning", "MHz"}, {"amplitude", "MHz"}, {"P1_from_0", ""},
                                 {"P0_from_1", ""}},
                           "common regions");
  regions.add_provenance("tolerance", format_number(spec.tolerance));
  json region_summary = json::array();
  std::vector<std::vector<bool>> masks;
  for (double level : spec.levels) {
    for (const SweepResult* m : {&m0, &m1})
      for (const ContourSegment& s : contour_segments(*m, level))
        contours.add_row({m->metric, level, s.x0, s.y0, s.x1, s.y1});
    const std::vector<bool> mask = common_region(m0, m1, level, spec.tolerance);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j)
        if (mask[grid.flat(int(i), int(j))]) regions.add_row({level, xs[i], ys[j], m0.at(int(i), int(j)), m1.at(int(i), int(j))});
    region_summary.push_back({{"level", level}, {"points", count(mask)}});
    masks.push_back(mask);
  }
  bool disjoint = true;
  for (std::size_t a = 0; a < masks.size(); ++a)
    for (std::size_t b = a + 1; b < masks.size(); ++b)
      for (std::size_t k = 0; k < masks[a].size(); ++k) disjoint &= !(masks[a][k] && masks[b][k]);
  out.artifacts.push_back({"contours.csv", contours.str(), std::nullopt});
  out.artifacts.push_back({"common_regions.csv", regions.str(),
                           PlotSpec{"line", "detuning [MHz]", {"amplitude [MHz]"}, "detuning (MHz)", "amplitude (MHz)"}});
  out.summary["common_regions"] = region_summary;
  out.summary["regions_disjoint"] = disjoint;
  out.summary["tolerance"] = spec.tolerance;
  return out;
}

inline DeviationAxis deviation_axis(const std::string& s) {
  if (s == "amplitude") return DeviationAxis::amplitude;
  if (s == "frequency") return DeviationAxis::frequency;
  return DeviationAxis::two_photon;
}

inline CampaignOutput run_robustness(const ExperimentConfig& cfg, int jobs) {
  CampaignOutput out;
  const SweepSpec& spec = cfg.sweep;
  const std::vector<double> eps = spec.deviation.values();
  std::size_t zero = 0;
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (std::abs(eps[i]) < std::abs(eps[zero])) zero = i;
  json gates = json::array();
  for (const std::string& g : spec.gates) {
    const GateKind kind = gate_kind(g);
    const CalibratedGate cal =
        calibrate_gate(cfg.protocol, kind, kind == GateKind::pi ? spec.grids.pi.values() : spec.grids.half_pi.values(),
                       spec.grids.phase.values(), jobs);
    DeviationOptions opt;
    opt.jobs = jobs;
    opt.frequency_scale_mhz =
        spec.frequency_scale_mhz > 0.0 ? spec.frequency_scale_mhz : cal.protocol.drive.single_photon_mhz();
    if (!(opt.frequency_scale_mhz > 0.0))
      throw ConfigError("sweep.frequency_scale_mhz", "must be > 0 when the protocol is resonant");
    DynamicalPulse pulse;
    pulse.duration_ns = cal.protocol.duration_ns;
    pulse.sigma_ns = cal.protocol.sigma_ns;
    pulse.rotation_angle = kind == GateKind::pi ? pi : 0.5 * pi;
    pulse.decoherence = cal.protocol.decoherence;
    pulse.steps = cal.protocol.steps;
    json gj = {{"gate", g}, {"amplitude", calibration_json(cal.amplitude)}, {"frequency_scale_mhz", opt.frequency_scale_mhz}};
    if (cal.phase) gj["phase"] = calibration_json(*cal.phase);
    json curves = json::array();
    for (const std::string& a : spec.axes) {
      const DeviationAxis axis = deviation_axis(a);
      std::vector<Column> cols{{"deviation", "fraction"}};
      std::vector<std::vector<double>> series;
      std::vector<std::string> names;
      for (Level init : spec.initial) {
        const Vector3c target = gate_target(kind, init);
        const SweepResult r = robustness_curve(cal.protocol, axis, spec.deviation, init, target, opt);
        names.push_back("stirap_from_" + level_name(init));
        series.push_back(r.values);
        curves.push_back({{"axis", a}, {"initial", level_name(init)}, {"protocol", "stirap"},
                          {"infidelity_nearest_zero", r.values[zero]}});
        if (spec.baseline && axis != DeviationAxis::two_photon) {
          const SweepResult b = dynamical_baseline(pulse, axis, spec.deviation, init, target, opt);
          names.push_back("dynamical_from_" + level_name(init));
          series.push_back(b.values);
          curves.push_back({{"axis", a}, {"initial", level_name(init)}, {"protocol", "dynamical"},
                            {"infidelity_nearest_zero", b.values[zero]}});
        }
      }
      for (const std::string& n : names) cols.push_back({n, ""});
      CsvTable t = table(cfg, cols, g + " infidelity vs " + a + " deviation");
      describe_protocol(t, cal.protocol);
      t.add_provenance("frequency_scale_mhz", format_number(opt.frequency_scale_mhz));
      t.add_provenance("dynamical_peak_rabi_mhz", format_number(pulse.peak_rabi_mhz()));
      for (std::size_t i = 0; i < eps.size(); ++i) {
        std::vector<CsvTable::Cell> row{eps[i]};
        for (const auto& s : series) row.push_back(s[i]);
        t.add_row(std::move(row));
      }
      out.artifacts.push_back({"robustness_" + g + "_" + a + ".csv", t.str(),
                               PlotSpec{"line", "deviation [fraction]", names, a + " deviation", "infidelity"}});
    }
    gj["curves"] = curves;
    gates.push_back(gj);
  }
  out.summary["gates"] = gates;
  return out;
}

inline CampaignOutput run_device(const ExperimentConfig& cfg, int) {
  CampaignOutput out;
  const device::DeviceReport rep = device::table_report(cfg.device.table, cfg.device.levels, cfg.device.asymmetry);
  CsvTable t = table(cfg, {{"quantity", ""}, {"unit", ""}, {"model", ""}, {"table", ""}}, "model vs measured table");
  t.add_provenance("fit_rms_relative_residual", format_number(rep.fit.rms_relative_residual));
  t.add_provenance("ed_levels", std::to_string(cfg.device.levels));
  json rows = json::array();
  for (const device::ReportRow& r : rep.rows) {
    t.add_row({r.quantity, r.unit, r.model, r.table});
    rows.push_back({{"quantity", r.quantity}, {"model", r.model}, {"table", std::isnan(r.table) ? json() : json(r.table)}});
  }
  out.artifacts.push_back({"device_report.csv", t.str(), std::nullopt});
  out.summary["rows"] = rows;
  out.summary["fit_converged"] = rep.fit.converged;
  out.summary["fit_rms_relative_residual"] = rep.fit.rms_relative_residual;
  return out;
}

}  // namespace detail

/// Dispatches on cfg.campaign. `jobs` <= 0 means all available workers.
inline CampaignOutput run_campaign(const ExperimentConfig& cfg, int jobs) {
  if (cfg.campaign == "simulate") return detail::run_simulate(cfg, jobs);
  if (cfg.campaign == "calibrate") return detail::run_calibrate(cfg, jobs);
  if (cfg.campaign == "tomography") return detail::run_tomography(cfg, jobs);
  if (cfg.campaign == "sweep")
    return cfg.sweep.kind == "map" ? detail::run_map(cfg, jobs) : detail::run_robustness(cfg, jobs);
  return detail::run_device(cfg, jobs);
}

}  // namespace stirap::app
