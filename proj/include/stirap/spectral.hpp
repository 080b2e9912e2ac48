#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stirap/linalg.hpp"
#include "stirap/vsystem.hpp"

namespace stirap {

struct MixingAngles {
  double theta = 0.0;      // rad
  double phi = 0.0;        // rad
  double omega_rms = 0.0;  // rad/us
};

/// theta = atan(|Omega0|/|Omega1|), 2 phi = atan(Omega_rms / Delta). Inputs in rad/us.
/// Returns nullopt when both couplings vanish and theta is undefined.
inline std::optional<MixingAngles> mixing_angles(double omega0, double omega1, double delta) {
  const double a0 = std::abs(omega0);
  const double a1 = std::abs(omega1);
  if (a0 == 0.0 && a1 == 0.0) return std::nullopt;
  const double rms = std::hypot(a0, a1);
  return MixingAngles{std::atan2(a0, a1), 0.5 * std::atan2(rms, delta), rms};
}

/// Angles of the drive at time t. Where the drive has died away (outside the
/// pulse windows) the limiting value from the nearest point of the protocol
/// support is used, so theta is 0 before a counter-intuitive sequence and pi/2
/// after it. A system with no drive at all gets theta = 0.
inline MixingAngles angles_at(const VSystem& sys, double t_ns) {
  const double threshold = 1e-6 * two_pi * sys.peak_rms_mhz();
  DriveSample d = drive_at(sys, t_ns);
  if (!(d.omega_rms() > threshold)) {
    d = drive_at(sys, std::clamp(t_ns, sys.support_start(), sys.support_end()));
  }
  if (auto a = mixing_angles(std::abs(d.pump), std::abs(d.stokes), d.single_photon);
      a && d.omega_rms() > threshold) {
    return *a;
  }
  return MixingAngles{0.0, 0.5 * std::atan2(0.0, d.single_photon), 0.0};
}

/// Instantaneous eigenbasis, ordered (|+>, |d>, |->).
struct EigenFrame {
  std::array<Vector3c, 3> states;
  std::array<double, 3> energies{};  // rad/us
  MixingAngles angles;
  bool numeric = false;

  const Vector3c& plus() const { return states[0]; }
  const Vector3c& dark() const { return states[1]; }
  const Vector3c& minus() const { return states[2]; }

  /// Rows are <+|, <d|, <-|.
  Matrix3c as_rows() const {
    Matrix3c w;
    for (int i = 0; i < 3; ++i) w.row(i) = states[i].adjoint();
    return w;
  }
};

/// Rotation into the adiabatic basis; its rows are the real-coupling eigenvectors.
inline Matrix3r rotation_matrix(const MixingAngles& a) {
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double sp = std::sin(a.phi), cp = std::cos(a.phi);
  Matrix3r r;
  r << st * sp, cp, ct * sp,
       ct, 0.0, -st,
       st * cp, -sp, ct * cp;
  return r;
}

namespace detail {

inline double coupling_phase(cplx c) { return c == cplx(0.0) ? 0.0 : std::arg(c); }

inline double rms_from_hamiltonian(const Matrix3c& h) {
  return 2.0 * std::hypot(std::abs(h(0, 1)), std::abs(h(1, 2)));
}

}  // namespace detail

/// Numerical eigenframe. With a previous frame the eigenvectors are matched
/// by maximal overlap and phase-aligned to it; otherwise ordered by energy.
inline EigenFrame numeric_eigenframe(const Matrix3c& h, const EigenFrame* previous = nullptr) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(h);
  EigenFrame f;
  f.numeric = true;
  std::array<int, 3> pick{2, 1, 0};  // descending energy
  if (previous) {
    std::array<bool, 3> used{};
    for (int i = 0; i < 3; ++i) {
      int best = -1;
      double best_ov = -1.0;
      for (int k = 0; k < 3; ++k) {
        if (used[k]) continue;
        const double ov = std::abs(previous->states[i].dot(es.eigenvectors().col(k)));
        if (ov > best_ov) best_ov = ov, best = k;
      }
      used[best] = true;
      pick[i] = best;
    }
  }
  for (int i = 0; i < 3; ++i) {
    Vector3c v = es.eigenvectors().col(pick[i]);
    cplx ref = previous ? previous->states[i].dot(v) : cplx(0.0);
    if (!previous) {
      // fix the gauge on the largest component
      int idx = 0;
      v.cwiseAbs().maxCoeff(&idx);
      ref = v(idx);
    }
    if (std::abs(ref) > 0.0) v *= std::conj(ref) / std::abs(ref);
    f.states[i] = v;
    f.energies[i] = es.eigenvalues()(pick[i]);
  }
  const double rms = detail::rms_from_hamiltonian(h);
  f.angles = MixingAngles{std::atan2(2.0 * std::abs(h(0, 1)), 2.0 * std::abs(h(1, 2))),
                          0.5 * std::atan2(rms, h(1, 1).real()), rms};
  return f;
}

/// Analytic eigenframe (valid at zero two-photon detuning). Eigenvectors come
/// from the mixing angles, energies from H itself. Envelope phases are carried
/// by diag(e^{i beta0}, 1, e^{-i beta1}). Nonzero two-photon detuning falls back
/// to the numeric solver and marks the frame numeric.
inline EigenFrame eigenframe(const Matrix3c& h, const MixingAngles& a) {
  const double delta = h(1, 1).real();
  if (std::abs(h(2, 2)) > 1e-12 * std::max(1.0, linalg::max_abs(h))) {
    return numeric_eigenframe(h);
  }
  const Matrix3r r = rotation_matrix(a);
  const cplx p0 = std::polar(1.0, detail::coupling_phase(h(0, 1)));
  const cplx p1 = std::polar(1.0, -detail::coupling_phase(h(1, 2)));
  EigenFrame f;
  f.angles = a;
  for (int i = 0; i < 3; ++i) {
    f.states[i] = Vector3c(p0 * r(i, 0), r(i, 1), p1 * r(i, 2));
  }
  const double rms = detail::rms_from_hamiltonian(h);
  const double root = std::sqrt(delta * delta + rms * rms);
  f.energies = {0.5 * (delta + root), 0.0, 0.5 * (delta - root)};
  return f;
}

inline EigenFrame frame_at(const VSystem& sys, double t_ns, const EigenFrame* previous = nullptr) {
  const Matrix3c h = hamiltonian_at(sys, t_ns);
  if (sys.drive.two_photon_mhz() != 0.0) return numeric_eigenframe(h, previous);
  return eigenframe(h, angles_at(sys, t_ns));
}

struct AngleRates {
  double theta_dot = 0.0;  // rad/us
  double phi_dot = 0.0;    // rad/us
};

/// Closed-form rates from the Gaussian envelope derivatives.
inline AngleRates exact_angle_rates(const VSystem& sys, double t_ns) {
  const double o0 = two_pi * sys.pump.magnitude(t_ns);
  const double o1 = two_pi * sys.stokes.magnitude(t_ns);
  // MHz/ns -> rad/us per us
  const double d0 = two_pi * 1e3 * sys.pump.magnitude_derivative(t_ns);
  const double d1 = two_pi * 1e3 * sys.stokes.magnitude_derivative(t_ns);
  const double s2 = o0 * o0 + o1 * o1;
  if (s2 == 0.0) return {};
  const double rms = std::sqrt(s2);
  const double rms_dot = (o0 * d0 + o1 * d1) / rms;
  const double delta = two_pi * sys.drive.single_photon_mhz();
  return {(d0 * o1 - o0 * d1) / s2, 0.5 * delta * rms_dot / (delta * delta + s2)};
}

/// Central differences of the (limit-extended) angles.
inline AngleRates finite_difference_angle_rates(const VSystem& sys, double t_ns, double dt_ns) {
  const MixingAngles ap = angles_at(sys, t_ns + dt_ns);
  const MixingAngles am = angles_at(sys, t_ns - dt_ns);
  const double h = 2.0 * ns_to_us(dt_ns);
  return {(ap.theta - am.theta) / h, (ap.phi - am.phi) / h};
}

/// H_ad = W H W^dagger - i W dW^dagger/dt, with W the eigenframe rows and the
/// derivative taken by central differences of step dt_ns.
inline Matrix3c adiabatic_hamiltonian(const VSystem& sys, double t_ns, double dt_ns) {
  const EigenFrame f0 = frame_at(sys, t_ns);
  const EigenFrame fp = frame_at(sys, t_ns + dt_ns, &f0);
  const EigenFrame fm = frame_at(sys, t_ns - dt_ns, &f0);
  const Matrix3c w = f0.as_rows();
  const Matrix3c dw_dag = (fp.as_rows().adjoint() - fm.as_rows().adjoint()) / (2.0 * ns_to_us(dt_ns));
  return w * hamiltonian_at(sys, t_ns) * w.adjoint() - cplx(0.0, 1.0) * w * dw_dag;
}

struct AdiabaticityRow {
  double t_ns = 0.0;
  MixingAngles angles;
  double eps_plus = 0.0, eps_minus = 0.0;
  std::array<double, 3> lhs{};    // |phi_dot|, |theta_dot sin phi|, |theta_dot cos phi|
  std::array<double, 3> rhs{};    // |eps+ - eps-|, |eps+|, |eps-|
  std::array<double, 3> ratio{};  // lhs / rhs
};

struct AdiabaticityReport {
  std::vector<AdiabaticityRow> rows;
  std::array<double, 3> worst_ratio{};
  std::array<double, 3> worst_time_ns{};
  int worst_condition = 0;
  /// Largest |finite-difference - closed-form| rate over the grid (rad/us).
  double derivative_check = 0.0;
};

namespace detail {
inline double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}
}  // namespace detail

/// Three adiabaticity conditions on a time grid. Rates use central differences
/// with dt = spacing/10, cross-checked against the closed-form derivatives.
inline AdiabaticityReport adiabaticity_margins(const VSystem& sys, const std::vector<double>& grid) {
  AdiabaticityReport rep;
  if (grid.empty()) return rep;
  const double spacing = grid.size() > 1 ? (grid.back() - grid.front()) / double(grid.size() - 1) : 1.0;
  const double dt = spacing / 10.0;
  const std::vector<double> edges = sys.breakpoints();
  for (double t : grid) {
    AdiabaticityRow row;
    row.t_ns = t;
    row.angles = angles_at(sys, t);
    const double delta = two_pi * sys.drive.single_photon_mhz();
    const DriveSample d = drive_at(sys, t);
    const double root = std::hypot(delta, d.omega_rms());
    row.eps_plus = 0.5 * (delta + root);
    row.eps_minus = 0.5 * (delta - root);
    AngleRates rates = finite_difference_angle_rates(sys, t, dt);
    bool near_edge = false;
    for (double e : edges) near_edge |= std::abs(t - e) <= dt;
    if (!near_edge) {
      const AngleRates exact = exact_angle_rates(sys, t);
      rep.derivative_check = std::max({rep.derivative_check, std::abs(exact.theta_dot - rates.theta_dot),
                                       std::abs(exact.phi_dot - rates.phi_dot)});
    }
    const double sp = std::sin(row.angles.phi), cp = std::cos(row.angles.phi);
    row.lhs = {std::abs(rates.phi_dot), std::abs(rates.theta_dot * sp), std::abs(rates.theta_dot * cp)};
    row.rhs = {std::abs(row.eps_plus - row.eps_minus), std::abs(row.eps_plus), std::abs(row.eps_minus)};
    for (int k = 0; k < 3; ++k) {
      row.ratio[k] = detail::safe_ratio(row.lhs[k], row.rhs[k]);
      if (row.ratio[k] > rep.worst_ratio[k]) {
        rep.worst_ratio[k] = row.ratio[k];
        rep.worst_time_ns[k] = t;
      }
    }
    rep.rows.push_back(row);
  }
  for (int k = 1; k < 3; ++k)
    if (rep.worst_ratio[k] > rep.worst_ratio[rep.worst_condition]) rep.worst_condition = k;
  return rep;
}

/// Worst ratios restricted to the pulse-overlap region, where both couplings
/// are at least `fraction` of the larger peak. Outside it the rates of the
/// truncated tails dominate and the conditions carry no information.
inline std::array<double, 3> overlap_worst_ratio(const VSystem& sys, const AdiabaticityReport& rep,
                                                 double fraction = 0.5) {
  const double peak = two_pi * std::max(sys.pump.peak_rabi_mhz, sys.stokes.peak_rabi_mhz);
  std::array<double, 3> worst{};
  for (const AdiabaticityRow& row : rep.rows) {
    const DriveSample d = drive_at(sys, row.t_ns);
    if (std::min(std::abs(d.pump), std::abs(d.stokes)) < fraction * peak) continue;
    for (int k = 0; k < 3; ++k) worst[k] = std::max(worst[k], row.ratio[k]);
  }
  return worst;
}

}  // namespace stirap
