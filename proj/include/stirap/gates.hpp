#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stirap/parallel.hpp"
#include "stirap/propagator.hpp"
#include "stirap/spectral.hpp"
#include "stirap/vsystem.hpp"

namespace stirap {

enum class GateKind { pi, half_pi };

inline const char* to_string(GateKind k) { return k == GateKind::pi ? "pi" : "half_pi"; }

/// Two equal Gaussians of the same truncation window, delayed by offset_ns.
/// `amplitude_mhz` is the drive amplitude A quoted for the experiment; the
/// envelope peak (Omega/2pi in the Hamiltonian) is 2A.
struct StirapProtocol {
  double duration_ns = 206.0;  // truncation window of each pulse
  double sigma_ns = 33.0;
  double offset_ns = 54.0;  // delay between the two pulse centres
  double amplitude_mhz = 20.0;
  DriveConfig drive = DriveConfig::from_detunings(15.0, 0.0);
  double common_phase_rad = 0.0;
  double differential_phase_rad = 0.0;  // pump minus Stokes
  bool counter_intuitive = true;        // Stokes first
  std::optional<Decoherence> decoherence;
  int steps = 2000;  // per protocol window

  double total_window_ns() const { return duration_ns + offset_ns; }
  double pump_phase() const { return common_phase_rad + 0.5 * differential_phase_rad; }
  double stokes_phase() const { return common_phase_rad - 0.5 * differential_phase_rad; }

  void validate() const {
    if (!(duration_ns > 0.0)) throw InvalidParameter("duration_ns must be > 0");
    if (!(sigma_ns > 0.0)) throw InvalidParameter("sigma_ns must be > 0");
    if (!(offset_ns >= 0.0)) throw InvalidParameter("offset_ns must be >= 0");
    if (!(amplitude_mhz >= 0.0)) throw InvalidParameter("amplitude_mhz must be >= 0");
    if (steps < 1) throw InvalidParameter("steps must be >= 1");
    if (decoherence) decoherence->validate();
  }

  VSystem system() const {
    validate();
    const double first_start = 0.0;
    const double second_start = offset_ns;
    PulseEnvelope early{2.0 * amplitude_mhz, first_start + 0.5 * duration_ns, sigma_ns, 0.0, first_start,
                        first_start + duration_ns};
    PulseEnvelope late{2.0 * amplitude_mhz, second_start + 0.5 * duration_ns, sigma_ns, 0.0, second_start,
                       second_start + duration_ns};
    VSystem s;
    s.stokes = counter_intuitive ? early : late;
    s.pump = counter_intuitive ? late : early;
    s.pump.phase_rad = pump_phase();
    s.stokes.phase_rad = stokes_phase();
    s.drive = drive;
    s.decoherence = decoherence;
    return s;
  }

  StirapProtocol with_amplitude(double a) const {
    StirapProtocol p = *this;
    p.amplitude_mhz = a;
    return p;
  }
};

/// Closed-system resonant-STIRAP amplitude is not stated; 8 MHz sits on the
/// transfer plateau of the decohered model.
inline StirapProtocol resonant_stirap_preset() {
  StirapProtocol p;
  p.duration_ns = 825.0;
  p.sigma_ns = 133.0;
  p.offset_ns = 206.0;
  p.amplitude_mhz = 8.0;
  p.drive = DriveConfig::from_detunings(0.0, 0.0);
  p.decoherence = Decoherence::device_table();
  return p;
}

inline StirapProtocol detuned_preset(GateKind kind) {
  StirapProtocol p;
  p.duration_ns = 206.0;
  p.sigma_ns = 33.0;
  p.offset_ns = 54.0;
  p.drive = DriveConfig::from_detunings(15.0, 0.0);
  p.amplitude_mhz = kind == GateKind::pi ? 20.0 : 9.2;
  return p;
}

/// Pulse shape of the amplitude-detuning maps (wider Gaussians).
inline StirapProtocol map_preset(double detuning_mhz = 15.0, double amplitude_mhz = 20.0) {
  StirapProtocol p = detuned_preset(GateKind::pi);
  p.sigma_ns = 40.0;
  p.drive = DriveConfig::from_detunings(detuning_mhz, 0.0);
  p.amplitude_mhz = amplitude_mhz;
  return p;
}

/// Time grid over the protocol that contains every envelope edge, with
/// roughly `points` samples in total.
inline std::vector<double> protocol_grid(const StirapProtocol& p, int points = 2001) {
  const VSystem s = p.system();
  std::vector<double> cuts = s.breakpoints();
  std::vector<double> g;
  const double span = s.support_end() - s.support_start();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const int n = std::max(2, static_cast<int>(std::lround((points - 1) * (cuts[i + 1] - cuts[i]) / span)) + 1);
    std::vector<double> piece = linspace(cuts[i], cuts[i + 1], n);
    g.insert(g.end(), piece.begin() + (g.empty() ? 0 : 1), piece.end());
  }
  return g;
}

inline Matrix3c protocol_unitary(const StirapProtocol& p) {
  const VSystem s = p.system();
  return propagate_unitary(s, s.support_start(), s.support_end(), p.steps);
}

/// Final state; the master equation is used when the protocol carries decoherence.
inline Matrix3c final_density(const StirapProtocol& p, const Matrix3c& rho0) {
  const VSystem s = p.system();
  if (!s.decoherence) {
    const Matrix3c u = propagate_unitary(s, s.support_start(), s.support_end(), p.steps);
    return u * rho0 * u.adjoint();
  }
  LindbladOptions opt;
  opt.max_step_ns = (s.support_end() - s.support_start()) / p.steps;
  return propagate_lindblad(s, DensityMatrix::checked(rho0), {s.support_start(), s.support_end()}, opt).final_rho;
}

inline Matrix3c final_density(const StirapProtocol& p, Level initial) {
  return final_density(p, projector(ket(initial)));
}

// ---------------------------------------------------------------------------
// Calibration

struct CalibrationResult {
  GateKind kind = GateKind::pi;
  std::string swept;  // "amplitude_mhz" or "phase_rad"
  double optimal_amplitude_mhz = 0.0;
  double optimal_phase_rad = 0.0;
  double metric = 0.0;
  std::vector<double> grid;
  std::vector<double> metric_values;
  /// populations[initial][level][i]: initial in {|0>, |1>}, level in basis order.
  std::array<std::array<std::vector<double>, 3>, 2> populations;
  /// Phase sweeps only: metric ~ offset + amplitude cos(beta - phase).
  std::array<double, 3> sinusoid{};
  double sinusoid_rms = 0.0;
};

class CalibrationFailed : public Error {
 public:
  CalibrationFailed(const std::string& what, CalibrationResult record)
      : Error(what), record_(std::make_shared<CalibrationResult>(std::move(record))) {}
  const char* kind() const noexcept override { return "calibration-failed"; }
  const CalibrationResult& record() const { return *record_; }

 private:
  std::shared_ptr<CalibrationResult> record_;
};

namespace detail {

inline void fill_transfer_curves(const StirapProtocol& proto, CalibrationResult& res, int jobs) {
  const auto finals = parallel_map(
      res.grid.size(),
      [&](std::size_t i) {
        const StirapProtocol p = proto.with_amplitude(res.grid[i]);
        std::array<std::array<double, 3>, 2> pops{};
        const std::array<Level, 2> starts{Level::zero, Level::one};
        if (!p.decoherence) {
          const Matrix3c u = protocol_unitary(p);
          for (int s = 0; s < 2; ++s)
            for (int l = 0; l < 3; ++l) pops[s][l] = std::norm(u(l, index(starts[s])));
        } else {
          for (int s = 0; s < 2; ++s) {
            const Matrix3c rho = final_density(p, starts[s]);
            for (int l = 0; l < 3; ++l) pops[s][l] = rho(l, l).real();
          }
        }
        return pops;
      },
      jobs);
  for (int s = 0; s < 2; ++s)
    for (int l = 0; l < 3; ++l) {
      res.populations[s][l].resize(res.grid.size());
      for (std::size_t i = 0; i < res.grid.size(); ++i) res.populations[s][l][i] = finals[i][s][l];
    }
}

}  // namespace detail

/// pi: amplitude maximising min(P(1 <- 0), P(0 <- 1)), smallest amplitude on
/// ties, must be interior to the grid. half_pi: first amplitude where the
/// |1> populations reached from |0> and from |1> cross, linearly interpolated.
inline CalibrationResult calibrate_amplitude(const StirapProtocol& proto, const std::vector<double>& grid,
                                             GateKind kind, int jobs = 0) {
  if (grid.size() < 2) throw InvalidParameter("calibration grid needs at least 2 points");
  if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidParameter("calibration grid must be ascending");
  CalibrationResult res;
  res.kind = kind;
  res.swept = "amplitude_mhz";
  res.grid = grid;
  res.optimal_phase_rad = -2.0 * proto.common_phase_rad;  // axis phase in effect
  detail::fill_transfer_curves(proto, res, jobs);
  const auto& up = res.populations[0][index(Level::one)];     // P(1 <- 0)
  const auto& back = res.populations[1][index(Level::zero)];  // P(0 <- 1)
  const auto& stay = res.populations[1][index(Level::one)];   // P(1 <- 1)
  const std::size_t n = grid.size();
  res.metric_values.resize(n);

  if (kind == GateKind::pi) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
      res.metric_values[i] = std::min(up[i], back[i]);
      if (res.metric_values[i] > res.metric_values[best]) best = i;
    }
    res.optimal_amplitude_mhz = grid[best];
    res.metric = res.metric_values[best];
    if (best == 0 || best + 1 == n)
      throw CalibrationFailed("pi calibration: maximum sits on the grid boundary", res);
    return res;
  }

  for (std::size_t i = 0; i < n; ++i) res.metric_values[i] = up[i] - stay[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = res.metric_values[i], b = res.metric_values[i + 1];
    if (a == 0.0 || (a < 0.0) != (b < 0.0)) {
      const double w = a == 0.0 ? 0.0 : a / (a - b);
      res.optimal_amplitude_mhz = grid[i] + w * (grid[i + 1] - grid[i]);
      res.metric = up[i] + w * (up[i + 1] - up[i]);
      return res;
    }
  }
  throw CalibrationFailed("half_pi calibration: transfer curves do not cross inside the grid", res);
}

/// Common drive phase that sets the rotation axis. Each envelope phase moves
/// by -beta/2; with Omega1 entering above the diagonal, the relative phase of
/// |1> against |0> then advances by exactly beta.
inline StirapProtocol apply_axis_phase(const StirapProtocol& p, double beta) {
  StirapProtocol q = p;
  q.common_phase_rad -= 0.5 * beta;
  return q;
}

/// Sweeps the axis phase at a fixed amplitude and returns the phase whose
/// state prepared from |0> best overlaps (|0>+|1>)/sqrt2.
inline CalibrationResult calibrate_phase(const StirapProtocol& proto, double amplitude_mhz,
                                         const std::vector<double>& grid, int jobs = 0) {
  if (grid.size() < 2) throw InvalidParameter("phase grid needs at least 2 points");
  CalibrationResult res;
  res.kind = GateKind::half_pi;
  res.swept = "phase_rad";
  res.grid = grid;
  res.optimal_amplitude_mhz = amplitude_mhz;
  const Vector3c target = qubit_superposition(0.0);
  const StirapProtocol base = proto.with_amplitude(amplitude_mhz);
  res.metric_values = parallel_map(
      grid.size(),
      [&](std::size_t i) {
        const Matrix3c rho = final_density(apply_axis_phase(base, grid[i]), Level::zero);
        return (target.adjoint() * rho * target)(0, 0).real();
      },
      jobs);
  const auto [lo, hi] = std::minmax_element(res.metric_values.begin(), res.metric_values.end());
  if (*hi - *lo < 1e-3) {
    res.optimal_phase_rad = grid[static_cast<std::size_t>(hi - res.metric_values.begin())];
    res.metric = *hi;
    throw CalibrationFailed("phase calibration: metric is flat over the sweep", res);
  }
  // The overlap is c0 + c1 cos(beta) + s1 sin(beta) exactly; fit it and take
  // the maximum of the fitted curve instead of the best grid node.
  Eigen::MatrixXd a(grid.size(), 3);
  Eigen::VectorXd y(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = std::cos(grid[i]);
    a(i, 2) = std::sin(grid[i]);
    y(i) = res.metric_values[i];
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
  res.sinusoid = {c(0), std::hypot(c(1), c(2)), std::atan2(c(2), c(1))};
  res.sinusoid_rms = std::sqrt((a * c - y).squaredNorm() / static_cast<double>(grid.size()));
  res.optimal_phase_rad = res.sinusoid[2];
  const Matrix3c rho = final_density(apply_axis_phase(base, res.optimal_phase_rad), Level::zero);
  res.metric = (target.adjoint() * rho * target)(0, 0).real();
  return res;
}

/// Ideal output: pi maps |0> -> |1> and |1> -> |0>; the y-axis half_pi maps
/// |0> -> (|0>+|1>)/sqrt2 and |1> -> (|0>-|1>)/sqrt2 (up to global phase).
inline Vector3c gate_target(GateKind kind, Level initial) {
  if (initial == Level::ground) throw InvalidParameter("gate_target: initial state must be |0> or |1>");
  if (kind == GateKind::pi) return ket(initial == Level::zero ? Level::one : Level::zero);
  return qubit_superposition(initial == Level::zero ? 0.0 : pi);
}

/// A protocol with its calibrated amplitude (and axis phase for half_pi).
struct CalibratedGate {
  GateKind kind = GateKind::pi;
  StirapProtocol protocol;
  CalibrationResult amplitude;
  std::optional<CalibrationResult> phase;
};

/// Calibration runs on the closed system; the returned protocol keeps the
/// decoherence of `proto`.
inline CalibratedGate calibrate_gate(const StirapProtocol& proto, GateKind kind, const std::vector<double>& amplitude_grid,
                                     const std::vector<double>& phase_grid, int jobs = 0) {
  StirapProtocol closed = proto;
  closed.decoherence.reset();
  CalibratedGate g;
  g.kind = kind;
  g.amplitude = calibrate_amplitude(closed, amplitude_grid, kind, jobs);
  g.protocol = proto.with_amplitude(g.amplitude.optimal_amplitude_mhz);
  if (kind == GateKind::half_pi) {
    g.phase = calibrate_phase(closed, g.amplitude.optimal_amplitude_mhz, phase_grid, jobs);
    g.protocol = apply_axis_phase(g.protocol, g.phase->optimal_phase_rad);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Closed-form pi unitary

struct AnalyticPi {
  Matrix3c bare;      // phases of the drives removed
  Matrix3c composed;  // D bare D^dagger with D = diag(e^{i beta0}, 1, e^{-i beta1})
  double eta_plus = 0.0, eta_minus = 0.0;                  // rad
  double eta_plus_refined = 0.0, eta_minus_refined = 0.0;  // grid refined x2
  double refinement_error = 0.0;  // max relative change under refinement
  double worst_adiabatic_ratio = 0.0;
  std::optional<std::string> warning;
};

namespace detail {

/// Composite trapezoid of eps_plus/eps_minus. Each interval uses one-sided
/// limits at its ends so a window edge on a grid node costs no accuracy.
inline std::array<double, 2> eta_integrals(const VSystem& s, const std::vector<double>& grid) {
  const double delta = two_pi * s.drive.single_photon_mhz();
  auto eps = [&](double t) {
    const double root = std::hypot(delta, drive_at(s, t).omega_rms());
    return std::array<double, 2>{0.5 * (delta + root), 0.5 * (delta - root)};
  };
  std::array<double, 2> acc{};
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i], b = grid[i + 1];
    const auto ea = eps(std::nextafter(a, b));
    const auto eb = eps(std::nextafter(b, a));
    const double h = ns_to_us(b - a);
    for (int k = 0; k < 2; ++k) acc[k] += 0.5 * h * (ea[k] + eb[k]);
  }
  return acc;
}

inline std::vector<double> refine(const std::vector<double>& g) {
  std::vector<double> r;
  r.reserve(2 * g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i > 0) r.push_back(0.5 * (g[i - 1] + g[i]));
    r.push_back(g[i]);
  }
  return r;
}

}  // namespace detail

/// Adiabatic-limit pi unitary: |0> -> -|1>, |g> -> e^{-i eta+}|g>,
/// |1> -> e^{-i eta-}|0>, with eta = integral of the eigenenergies.
/// `warn_ratio` bounds the adiabaticity ratios over the pulse-overlap region.
inline AnalyticPi analytic_pi_unitary(const StirapProtocol& p, const std::vector<double>& grid,
                                      double warn_ratio = 1.0) {
  if (grid.size() < 2) throw InvalidParameter("analytic_pi_unitary needs a grid of at least 2 points");
  const VSystem s = p.system();
  AnalyticPi out;
  const auto eta = detail::eta_integrals(s, grid);
  const auto eta2 = detail::eta_integrals(s, detail::refine(grid));
  out.eta_plus = eta[0];
  out.eta_minus = eta[1];
  out.eta_plus_refined = eta2[0];
  out.eta_minus_refined = eta2[1];
  for (int k = 0; k < 2; ++k) {
    const double scale = std::max(std::abs(eta2[k]), 1e-300);
    out.refinement_error = std::max(out.refinement_error, std::abs(eta[k] - eta2[k]) / scale);
  }
  out.bare = Matrix3c::Zero();
  out.bare(0, 2) = std::polar(1.0, -out.eta_minus);
  out.bare(1, 1) = std::polar(1.0, -out.eta_plus);
  out.bare(2, 0) = -1.0;
  Vector3c d;
  d << std::polar(1.0, s.pump.phase_rad), 1.0, std::polar(1.0, -s.stokes.phase_rad);
  out.composed = d.asDiagonal() * out.bare * d.conjugate().asDiagonal();

  const auto worst = overlap_worst_ratio(s, adiabaticity_margins(s, grid));
  out.worst_adiabatic_ratio = *std::max_element(worst.begin(), worst.end());
  if (out.worst_adiabatic_ratio > warn_ratio) {
    out.warning = "adiabaticity ratio " + std::to_string(out.worst_adiabatic_ratio) + " exceeds " +
                  std::to_string(warn_ratio) + "; the closed form is not reliable here";
  }
  return out;
}

}  // namespace stirap
