#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "stirap/error.hpp"
#include "stirap/units.hpp"

namespace stirap {

/// Truncated Gaussian drive envelope. Amplitudes are linear frequencies
/// (MHz, i.e. Omega/2pi of the rotating-frame coupling), times are ns.
struct PulseEnvelope {
  double peak_rabi_mhz = 0.0;
  double center_ns = 0.0;
  double sigma_ns = 1.0;
  double phase_rad = 0.0;
  double window_start_ns = -1.0;
  double window_end_ns = 1.0;

  void validate() const {
    if (!(sigma_ns > 0.0)) throw InvalidParameter("pulse sigma must be > 0");
    if (!(window_start_ns < center_ns && center_ns < window_end_ns))
      throw InvalidParameter("pulse window must satisfy start < center < end");
    if (!(peak_rabi_mhz >= 0.0))
      throw InvalidParameter("pulse peak amplitude must be >= 0 (sign goes in the phase)");
  }

  bool inside(double t_ns) const { return t_ns >= window_start_ns && t_ns <= window_end_ns; }

  /// Real Gaussian profile (no phase), MHz.
  double magnitude(double t_ns) const {
    if (!inside(t_ns)) return 0.0;
    const double x = (t_ns - center_ns) / sigma_ns;
    return peak_rabi_mhz * std::exp(-0.5 * x * x);
  }

  /// d|Omega|/dt in MHz/ns; zero outside the window.
  double magnitude_derivative(double t_ns) const {
    return -(t_ns - center_ns) / (sigma_ns * sigma_ns) * magnitude(t_ns);
  }

  /// Envelope value at the hard truncation edges relative to the peak.
  double edge_fraction() const {
    const double x = std::max(center_ns - window_start_ns, window_end_ns - center_ns) / sigma_ns;
    const double y = std::min(center_ns - window_start_ns, window_end_ns - center_ns) / sigma_ns;
    return std::max(std::exp(-0.5 * x * x), std::exp(-0.5 * y * y));
  }
};

inline cplx envelope_value(const PulseEnvelope& p, double t_ns) {
  return std::polar(p.magnitude(t_ns), p.phase_rad);
}

/// Pump/Stokes detunings; the single- and two-photon detunings are derived.
struct DriveConfig {
  double pump_detuning_mhz = 0.0;    // Delta_p
  double stokes_detuning_mhz = 0.0;  // Delta_s

  static DriveConfig from_detunings(double single_photon_mhz, double two_photon_mhz) {
    return {single_photon_mhz + 0.5 * two_photon_mhz, single_photon_mhz - 0.5 * two_photon_mhz};
  }
  double single_photon_mhz() const { return 0.5 * (pump_detuning_mhz + stokes_detuning_mhz); }
  double two_photon_mhz() const { return pump_detuning_mhz - stokes_detuning_mhz; }
};

/// Per-level relaxation and Ramsey times, in microseconds.
struct Decoherence {
  double t1_0_us = 0.0;
  double t1_1_us = 0.0;
  double t2_0_us = 0.0;
  double t2_1_us = 0.0;

  /// Measured device values: |0> is the bright-mode, |1> the dark-mode excitation.
  static Decoherence device_table() { return {64.0, 88.0, 106.0, 98.0}; }

  void validate() const {
    for (double t : {t1_0_us, t1_1_us, t2_0_us, t2_1_us})
      if (!(t > 0.0)) throw InvalidParameter("decoherence times must be > 0");
    if (t2_0_us > 2.0 * t1_0_us) throw InvalidParameter("T2 > 2 T1 on level |0> is unphysical");
    if (t2_1_us > 2.0 * t1_1_us) throw InvalidParameter("T2 > 2 T1 on level |1> is unphysical");
  }
};

struct VSystem {
  PulseEnvelope pump;    // |g> <-> |0>
  PulseEnvelope stokes;  // |g> <-> |1>
  DriveConfig drive;
  std::optional<Decoherence> decoherence;

  void validate() const {
    pump.validate();
    stokes.validate();
    if (decoherence) decoherence->validate();
  }

  /// Times where an envelope jumps; integrators split their steps here.
  std::vector<double> breakpoints() const {
    std::vector<double> b{pump.window_start_ns, pump.window_end_ns, stokes.window_start_ns,
                          stokes.window_end_ns};
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }

  double support_start() const { return std::min(pump.window_start_ns, stokes.window_start_ns); }
  double support_end() const { return std::max(pump.window_end_ns, stokes.window_end_ns); }
  double peak_rms_mhz() const { return std::hypot(pump.peak_rabi_mhz, stokes.peak_rabi_mhz); }
};

/// Drive couplings and detunings at one instant, in rad/us.
struct DriveSample {
  cplx pump;
  cplx stokes;
  double single_photon;
  double two_photon;

  double omega_rms() const { return std::hypot(std::abs(pump), std::abs(stokes)); }
};

/// The single place where linear frequencies become angular ones.
inline DriveSample drive_at(const VSystem& sys, double t_ns) {
  return {two_pi * envelope_value(sys.pump, t_ns), two_pi * envelope_value(sys.stokes, t_ns),
          two_pi * sys.drive.single_photon_mhz(), two_pi * sys.drive.two_photon_mhz()};
}

inline Matrix3c hamiltonian_from(const DriveSample& d) {
  Matrix3c h = Matrix3c::Zero();
  h(0, 1) = 0.5 * d.pump;
  h(1, 0) = 0.5 * std::conj(d.pump);
  h(1, 1) = d.single_photon;
  h(1, 2) = 0.5 * d.stokes;
  h(2, 1) = 0.5 * std::conj(d.stokes);
  h(2, 2) = d.two_photon;
  return h;
}

/// Rotating-frame Hamiltonian in basis (|0>, |g>, |1>), rad/us.
inline Matrix3c hamiltonian_at(const VSystem& sys, double t_ns) {
  return hamiltonian_from(drive_at(sys, t_ns));
}

struct CollapseOperator {
  std::string label;
  double rate_per_us;  // damping: 1/T1; dephasing: gamma_phi
  Matrix3c op;         // already scaled; dissipator is D[op]
};

/// Amplitude damping |k> -> |g> at 1/T1, plus pure dephasing of |k> such that
/// the k-g coherence picks up an extra decay gamma_phi = 1/T2 - 1/(2 T1).
inline std::vector<CollapseOperator> collapse_operators(const VSystem& sys) {
  std::vector<CollapseOperator> out;
  if (!sys.decoherence) return out;
  const Decoherence& d = *sys.decoherence;
  d.validate();
  struct LevelTimes {
    Level level;
    double t1, t2;
    const char* name;
  };
  for (const LevelTimes& lt : {LevelTimes{Level::zero, d.t1_0_us, d.t2_0_us, "0"},
                               LevelTimes{Level::one, d.t1_1_us, d.t2_1_us, "1"}}) {
    const double gamma1 = 1.0 / lt.t1;
    out.push_back({std::string("damping_") + lt.name, gamma1,
                   std::sqrt(gamma1) * outer(Level::ground, lt.level)});
  }
  for (const LevelTimes& lt : {LevelTimes{Level::zero, d.t1_0_us, d.t2_0_us, "0"},
                               LevelTimes{Level::one, d.t1_1_us, d.t2_1_us, "1"}}) {
    const double gamma_phi = std::max(0.0, 1.0 / lt.t2 - 0.5 / lt.t1);
    out.push_back({std::string("dephasing_") + lt.name, gamma_phi,
                   std::sqrt(2.0 * gamma_phi) * outer(lt.level, lt.level)});
  }
  return out;
}

}  // namespace stirap
