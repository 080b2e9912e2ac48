#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "stirap/gates.hpp"
#include "stirap/parallel.hpp"
#include "stirap/propagator.hpp"

namespace stirap {

struct SweepAxis {
  std::string name;
  std::string unit;
  double min = 0.0;
  double max = 1.0;
  int points = 2;

  void validate() const {
    if (points < 2) throw InvalidParameter("sweep axis '" + name + "' needs at least 2 points");
    if (!(min < max)) throw InvalidParameter("sweep axis '" + name + "' needs min < max");
  }
  std::vector<double> values() const { return linspace(min, max, points); }
};

/// One or two axes; for two axes the first one is the slow (row) index.
struct SweepGrid {
  std::vector<SweepAxis> axes;

  void validate() const {
    if (axes.empty() || axes.size() > 2) throw InvalidParameter("sweep grid must have 1 or 2 axes");
    for (const SweepAxis& a : axes) a.validate();
  }
  std::size_t size() const {
    std::size_t n = 1;
    for (const SweepAxis& a : axes) n *= static_cast<std::size_t>(a.points);
    return n;
  }
  std::size_t flat(int i, int j) const { return static_cast<std::size_t>(i) * axes[1].points + j; }
};

struct SweepResult {
  SweepGrid grid;
  std::string metric;  // e.g. "P1", "infidelity"
  std::vector<double> values;
  std::vector<std::pair<std::string, std::string>> metadata;

  double at(int i, int j) const { return values[grid.flat(i, j)]; }
};

inline double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

// ---------------------------------------------------------------------------
// Amplitude / detuning maps

/// Transfer maps over (single-photon detuning, amplitude), both in MHz.
/// first: P(1) after starting in |0>; second: P(0) after starting in |1>.
inline std::pair<SweepResult, SweepResult> amplitude_detuning_maps(const StirapProtocol& tmpl, const SweepGrid& grid,
                                                                   int jobs = 0) {
  grid.validate();
  if (grid.axes.size() != 2) throw InvalidParameter("amplitude-detuning map needs a 2-D grid (detuning, amplitude)");
  const std::vector<double> deltas = grid.axes[0].values();
  const std::vector<double> amps = grid.axes[1].values();
  const std::size_t nj = amps.size();
  const auto pairs = parallel_map(
      grid.size(),
      [&](std::size_t k) {
        StirapProtocol p = tmpl;
        p.drive = DriveConfig::from_detunings(deltas[k / nj], tmpl.drive.two_photon_mhz());
        p.amplitude_mhz = amps[k % nj];
        if (!p.decoherence) {
          const Matrix3c u = protocol_unitary(p);
          return std::array<double, 2>{std::norm(u(2, 0)), std::norm(u(0, 2))};
        }
        return std::array<double, 2>{final_density(p, Level::zero)(2, 2).real(),
                                     final_density(p, Level::one)(0, 0).real()};
      },
      jobs);
  std::pair<SweepResult, SweepResult> out;
  out.first.grid = out.second.grid = grid;
  out.first.metric = "P1_from_0";
  out.second.metric = "P0_from_1";
  for (const auto& v : pairs) {
    out.first.values.push_back(clamp_unit(v[0]));
    out.second.values.push_back(clamp_unit(v[1]));
  }
  return out;
}

inline SweepResult amplitude_detuning_map(const StirapProtocol& tmpl, const SweepGrid& grid, Level initial,
                                          int jobs = 0) {
  if (initial == Level::ground) throw InvalidParameter("map initial state must be |0> or |1>");
  auto maps = amplitude_detuning_maps(tmpl, grid, jobs);
  return initial == Level::zero ? std::move(maps.first) : std::move(maps.second);
}

struct ContourSegment {
  double x0, y0, x1, y1;
};

/// Marching squares over a 2-D result; x runs along the first axis, y along
/// the second. Saddle cells are resolved with the cell-centre average.
inline std::vector<ContourSegment> contour_segments(const SweepResult& r, double level) {
  std::vector<ContourSegment> segs;
  if (r.grid.axes.size() != 2) return segs;
  const std::vector<double> xs = r.grid.axes[0].values();
  const std::vector<double> ys = r.grid.axes[1].values();
  auto lerp = [&](double a, double b, double fa, double fb) { return a + (level - fa) / (fb - fa) * (b - a); };
  for (int i = 0; i + 1 < static_cast<int>(xs.size()); ++i) {
    for (int j = 0; j + 1 < static_cast<int>(ys.size()); ++j) {
      // corners counter-clockwise from (i, j)
      const std::array<double, 4> f{r.at(i, j), r.at(i + 1, j), r.at(i + 1, j + 1), r.at(i, j + 1)};
      const std::array<double, 4> cx{xs[i], xs[i + 1], xs[i + 1], xs[i]};
      const std::array<double, 4> cy{ys[j], ys[j], ys[j + 1], ys[j + 1]};
      int mask = 0;
      for (int c = 0; c < 4; ++c)
        if (f[c] >= level) mask |= 1 << c;
      if (mask == 0 || mask == 15) continue;
      // crossing point on edge e (between corner e and e+1)
      auto edge = [&](int e) {
        const int a = e, b = (e + 1) % 4;
        return std::array<double, 2>{lerp(cx[a], cx[b], f[a], f[b]), lerp(cy[a], cy[b], f[a], f[b])};
      };
      std::vector<int> crossed;
      for (int e = 0; e < 4; ++e) {
        const bool a = (mask >> e) & 1, b = (mask >> ((e + 1) % 4)) & 1;
        if (a != b) crossed.push_back(e);
      }
      if (crossed.size() == 2) {
        const auto p = edge(crossed[0]), q = edge(crossed[1]);
        segs.push_back({p[0], p[1], q[0], q[1]});
      } else if (crossed.size() == 4) {
        const double centre = 0.25 * (f[0] + f[1] + f[2] + f[3]);
        const bool corner0_high = mask & 1;
        // pair edges so the centre value decides which corners are joined
        const bool join01 = (centre >= level) != corner0_high;
        const std::array<std::array<int, 2>, 2> pairs =
            join01 ? std::array<std::array<int, 2>, 2>{{{3, 0}, {1, 2}}}
                   : std::array<std::array<int, 2>, 2>{{{0, 1}, {2, 3}}};
        for (const auto& pr : pairs) {
          const auto p = edge(pr[0]), q = edge(pr[1]);
          segs.push_back({p[0], p[1], q[0], q[1]});
        }
      }
    }
  }
  return segs;
}

/// Grid points where both maps sit within tol of `level`; level 1 is read as
/// 1 - metric <= tol.
inline std::vector<bool> common_region(const SweepResult& map0, const SweepResult& map1, double level, double tol) {
  if (map0.values.size() != map1.values.size()) throw InvalidParameter("common_region: maps do not share a grid");
  if (!(tol >= 0.0)) throw InvalidParameter("common_region: tol must be >= 0");
  std::vector<bool> mask(map0.values.size());
  for (std::size_t k = 0; k < mask.size(); ++k) {
    auto near = [&](double v) { return level == 1.0 ? 1.0 - v <= tol : std::abs(v - level) <= tol; };
    mask[k] = near(map0.values[k]) && near(map1.values[k]);
  }
  return mask;
}

inline std::size_t count(const std::vector<bool>& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

// ---------------------------------------------------------------------------
// Robustness curves

enum class DeviationAxis { amplitude, frequency, two_photon };

inline const char* to_string(DeviationAxis a) {
  switch (a) {
    case DeviationAxis::amplitude: return "amplitude_deviation";
    case DeviationAxis::frequency: return "frequency_deviation";
    case DeviationAxis::two_photon: return "two_photon_deviation";
  }
  return "?";
}

/// A fractional deviation eps scales the amplitude by (1 + eps); on the
/// frequency axes it shifts the drive by eps * frequency_scale_mhz (both
/// drives for `frequency`, the Stokes drive alone for `two_photon`).
struct DeviationOptions {
  double frequency_scale_mhz = 0.0;  // 0: the protocol's single-photon detuning
  int jobs = 0;
};

inline double state_overlap(const Matrix3c& rho, const Vector3c& target) {
  return (target.adjoint() * rho * target)(0, 0).real();
}

inline SweepResult robustness_curve(const StirapProtocol& proto, DeviationAxis axis, const SweepAxis& deviations,
                                    Level initial, const Vector3c& target, DeviationOptions opt = {}) {
  deviations.validate();
  const std::vector<double> eps = deviations.values();
  const double scale = opt.frequency_scale_mhz > 0.0 ? opt.frequency_scale_mhz : proto.drive.single_photon_mhz();
  SweepResult out;
  out.grid.axes = {deviations};
  out.metric = "infidelity";
  out.metadata = {{"protocol", "detuned_stirap"}, {"axis", to_string(axis)}};
  out.values = parallel_map(
      eps.size(),
      [&](std::size_t i) {
        StirapProtocol p = proto;
        const double e = eps[i];
        const double d = proto.drive.single_photon_mhz(), dd = proto.drive.two_photon_mhz();
        switch (axis) {
          case DeviationAxis::amplitude: p.amplitude_mhz *= 1.0 + e; break;
          case DeviationAxis::frequency: p.drive = DriveConfig::from_detunings(d + e * scale, dd); break;
          case DeviationAxis::two_photon: p.drive = DriveConfig::from_detunings(d, dd + e * scale); break;
        }
        return clamp_unit(1.0 - state_overlap(final_density(p, initial), target));
      },
      opt.jobs);
  return out;
}

// ---------------------------------------------------------------------------
// Resonant dynamical rotation driving |0> <-> |1> directly

struct DynamicalPulse {
  double duration_ns = 206.0;
  double sigma_ns = 33.0;
  double rotation_angle = pi;  // target area
  double axis_phase = 0.5 * pi;  // pi/2: y axis
  std::optional<Decoherence> decoherence;
  int steps = 2000;

  /// Peak Rabi frequency (MHz) whose truncated-Gaussian area is the rotation angle.
  double peak_rabi_mhz() const {
    const double area_per_peak =
        ns_to_us(sigma_ns) * std::sqrt(two_pi) * std::erf(duration_ns / (2.0 * std::sqrt(2.0) * sigma_ns));
    return rotation_angle / area_per_peak / two_pi;
  }
};

namespace detail {

/// exp(-i angle/2 (cos a sx + sin a sy)) on {|0>, |1>} driven by a Gaussian,
/// with a detuning of the |1> level.
inline Matrix3c dynamical_hamiltonian(const DynamicalPulse& p, double rabi_mhz, double detuning_mhz, double t_ns) {
  const double x = (t_ns - 0.5 * p.duration_ns) / p.sigma_ns;
  const double omega = two_pi * rabi_mhz * std::exp(-0.5 * x * x);
  Matrix3c h = Matrix3c::Zero();
  h(0, 2) = 0.5 * omega * std::polar(1.0, -p.axis_phase);
  h(2, 0) = std::conj(h(0, 2));
  h(2, 2) = two_pi * detuning_mhz;
  return h;
}

inline Matrix3c dynamical_final(const DynamicalPulse& p, double rabi_mhz, double detuning_mhz, const Matrix3c& rho0) {
  const double h_ns = p.duration_ns / p.steps;
  if (!p.decoherence) {
    Matrix3c u = Matrix3c::Identity();
    for (int k = 0; k < p.steps; ++k)
      u = linalg::expm_hermitian(dynamical_hamiltonian(p, rabi_mhz, detuning_mhz, (k + 0.5) * h_ns), ns_to_us(h_ns)) * u;
    return u * rho0 * u.adjoint();
  }
  VSystem dummy;
  dummy.decoherence = p.decoherence;
  const Matrix9c diss = dissipator_super(collapse_operators(dummy));
  Vector9c v = vec(rho0);
  const double h = ns_to_us(h_ns);
  for (int k = 0; k < p.steps; ++k) {
    const double t = k * h_ns;
    const Matrix9c l0 = commutator_super(dynamical_hamiltonian(p, rabi_mhz, detuning_mhz, t)) + diss;
    const Matrix9c lm = commutator_super(dynamical_hamiltonian(p, rabi_mhz, detuning_mhz, t + 0.5 * h_ns)) + diss;
    const Matrix9c l1 = commutator_super(dynamical_hamiltonian(p, rabi_mhz, detuning_mhz, t + h_ns)) + diss;
    const Vector9c k1 = l0 * v;
    const Vector9c k2 = lm * (v + 0.5 * h * k1);
    const Vector9c k3 = lm * (v + 0.5 * h * k2);
    const Vector9c k4 = l1 * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return unvec(v);
}

}  // namespace detail

inline Matrix3c dynamical_final_state(const DynamicalPulse& p, Level initial, double amplitude_scale = 1.0,
                                      double detuning_mhz = 0.0) {
  return detail::dynamical_final(p, p.peak_rabi_mhz() * amplitude_scale, detuning_mhz, projector(ket(initial)));
}

/// Same deviation axes as robustness_curve, for the resonant rotation. The
/// frequency axis shifts the drive by eps * frequency_scale_mhz.
inline SweepResult dynamical_baseline(const DynamicalPulse& pulse, DeviationAxis axis, const SweepAxis& deviations,
                                      Level initial, const Vector3c& target, DeviationOptions opt) {
  deviations.validate();
  if (axis != DeviationAxis::amplitude && !(opt.frequency_scale_mhz > 0.0))
    throw InvalidParameter("dynamical_baseline: frequency axis needs frequency_scale_mhz > 0");
  const std::vector<double> eps = deviations.values();
  SweepResult out;
  out.grid.axes = {deviations};
  out.metric = "infidelity";
  out.metadata = {{"protocol", "resonant_dynamical"}, {"axis", to_string(axis)}};
  out.values = parallel_map(
      eps.size(),
      [&](std::size_t i) {
        const double e = eps[i];
        const bool amp = axis == DeviationAxis::amplitude;
        const Matrix3c rho = dynamical_final_state(pulse, initial, amp ? 1.0 + e : 1.0,
                                                   amp ? 0.0 : e * opt.frequency_scale_mhz);
        return clamp_unit(1.0 - state_overlap(rho, target));
      },
      opt.jobs);
  return out;
}

}  // namespace stirap
