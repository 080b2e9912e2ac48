#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "stirap/linalg.hpp"
#include "stirap/spectral.hpp"
#include "stirap/vsystem.hpp"

namespace stirap {

struct Physicality {
  double hermiticity = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok(double tol) const {
    return hermiticity <= tol && trace_error <= tol && min_eigenvalue >= -tol;
  }
};

inline Physicality physicality(const Matrix3c& rho) {
  const Matrix3c herm = 0.5 * (rho + rho.adjoint());
  return {linalg::hermiticity_defect(rho), std::abs(rho.trace() - cplx(1.0)), linalg::min_eigenvalue(herm)};
}

/// 3-level density matrix that was checked to be physical at construction.
class DensityMatrix {
 public:
  static DensityMatrix pure(const Vector3c& psi) {
    const double n = psi.squaredNorm();
    if (std::abs(n - 1.0) > 1e-9) throw UnphysicalState("state vector is not normalized");
    return DensityMatrix(projector(psi));
  }

  static DensityMatrix checked(const Matrix3c& rho, double tol = 1e-8) {
    const Physicality p = physicality(rho);
    if (!p.ok(tol)) {
      throw UnphysicalState("density matrix is not physical (hermiticity " + std::to_string(p.hermiticity) +
                            ", trace error " + std::to_string(p.trace_error) + ", min eigenvalue " +
                            std::to_string(p.min_eigenvalue) + ")");
    }
    return DensityMatrix(rho);
  }

  const Matrix3c& matrix() const { return m_; }

  std::array<double, 3> populations() const { return {m_(0, 0).real(), m_(1, 1).real(), m_(2, 2).real()}; }

 private:
  explicit DensityMatrix(const Matrix3c& m) : m_(m) {}
  Matrix3c m_;
};

inline std::array<double, 3> populations_of(const Vector3c& psi) {
  return {std::norm(psi(0)), std::norm(psi(1)), std::norm(psi(2))};
}

struct EvolutionTrace {
  std::vector<double> time_ns;
  std::vector<std::array<double, 3>> populations;  // P0, Pg, P1
  std::vector<std::array<double, 3>> overlaps;     // |<+|psi>|^2, |<d|psi>|^2, |<-|psi>|^2 (optional)

  bool has_overlaps() const { return !overlaps.empty(); }
};

namespace detail {

/// [t0, t1] cut at envelope discontinuities, each piece with its own step count.
struct Segment {
  double start, end;
  int steps;
};

inline std::vector<Segment> split_interval(const VSystem& sys, double t0, double t1, double max_step_ns) {
  std::vector<double> cuts{t0};
  for (double b : sys.breakpoints())
    if (b > t0 && b < t1) cuts.push_back(b);
  cuts.push_back(t1);
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int n = std::max(1, static_cast<int>(std::ceil(len / max_step_ns - 1e-9)));
    segs.push_back({cuts[i], cuts[i + 1], n});
  }
  return segs;
}

inline Matrix3c propagate_segments(const VSystem& sys, const std::vector<Segment>& segs) {
  Matrix3c u = Matrix3c::Identity();
  for (const Segment& s : segs) {
    const double h = (s.end - s.start) / s.steps;
    for (int k = 0; k < s.steps; ++k) {
      const double tm = s.start + (k + 0.5) * h;
      u = linalg::expm_hermitian(hamiltonian_at(sys, tm), ns_to_us(h)) * u;
    }
  }
  return u;
}

inline double default_max_step(const VSystem& sys, int steps_per_window) {
  return (sys.support_end() - sys.support_start()) / steps_per_window;
}

}  // namespace detail

/// U(t1, t0) as a product of midpoint exponentials. `steps` is the total step
/// budget; steps are distributed over the smooth pieces between envelope edges.
inline Matrix3c propagate_unitary(const VSystem& sys, double t0_ns, double t1_ns, int steps) {
  if (steps < 1) throw InvalidParameter("propagate_unitary needs steps >= 1");
  if (t1_ns <= t0_ns) return Matrix3c::Identity();
  const double max_step = (t1_ns - t0_ns) / steps;
  return detail::propagate_segments(sys, detail::split_interval(sys, t0_ns, t1_ns, max_step));
}

/// Closed-system populations (and optionally eigenframe overlaps) on a grid.
inline EvolutionTrace evolve_pure(const VSystem& sys, const Vector3c& psi0, const std::vector<double>& grid,
                                  bool with_overlaps, int steps_per_window = 2000) {
  EvolutionTrace tr;
  if (grid.empty()) return tr;
  const double max_step = detail::default_max_step(sys, steps_per_window);
  Vector3c psi = psi0;
  std::optional<EigenFrame> prev;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) psi = detail::propagate_segments(sys, detail::split_interval(sys, grid[i - 1], grid[i], max_step)) * psi;
    tr.time_ns.push_back(grid[i]);
    tr.populations.push_back(populations_of(psi));
    if (with_overlaps) {
      EigenFrame f = frame_at(sys, grid[i], prev ? &*prev : nullptr);
      tr.overlaps.push_back({std::norm(f.plus().dot(psi)), std::norm(f.dark().dot(psi)),
                             std::norm(f.minus().dot(psi))});
      prev = f;
    }
  }
  return tr;
}

/// Projects psi(t) onto the continuity-tracked instantaneous eigenframe.
inline EvolutionTrace eigenbasis_overlap_trace(const VSystem& sys, const Vector3c& psi0,
                                               const std::vector<double>& grid, int steps_per_window = 2000) {
  return evolve_pure(sys, psi0, grid, true, steps_per_window);
}

// ---------------------------------------------------------------------------
// Lindblad master equation

using Matrix9c = Eigen::Matrix<cplx, 9, 9>;
using Vector9c = Eigen::Matrix<cplx, 9, 1>;

namespace detail {

inline Vector9c vec(const Matrix3c& m) { return Eigen::Map<const Vector9c>(m.data()); }
inline Matrix3c unvec(const Vector9c& v) { return Eigen::Map<const Matrix3c>(v.data()); }

inline Matrix9c kron(const Matrix3c& a, const Matrix3c& b) {
  Matrix9c k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return k;
}

/// Column-stacking superoperator of -i[H, .]; vec(A X B) = (B^T (x) A) vec(X).
inline Matrix9c commutator_super(const Matrix3c& h) {
  const Matrix3c id = Matrix3c::Identity();
  return cplx(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
}

inline Matrix9c dissipator_super(const std::vector<CollapseOperator>& ops) {
  const Matrix3c id = Matrix3c::Identity();
  Matrix9c d = Matrix9c::Zero();
  for (const CollapseOperator& c : ops) {
    const Matrix3c cdc = c.op.adjoint() * c.op;
    d += kron(c.op.conjugate(), c.op) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
  }
  return d;
}

}  // namespace detail

struct LindbladOptions {
  /// Maximum RK4 step; 0 means (protocol window)/2000.
  double max_step_ns = 0.0;
};

struct LindbladResult {
  EvolutionTrace trace;
  Matrix3c final_rho;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;  // over all output points
};

/// Fixed-step RK4 on the vectorized Lindblad generator. Output on `grid`
/// (integration starts at grid.front()).
inline LindbladResult propagate_lindblad(const VSystem& sys, const DensityMatrix& rho0,
                                         const std::vector<double>& grid, LindbladOptions opt = {}) {
  LindbladResult res;
  if (grid.empty()) {
    res.final_rho = rho0.matrix();
    return res;
  }
  const double max_step = opt.max_step_ns > 0.0 ? opt.max_step_ns : detail::default_max_step(sys, 2000);
  const Matrix9c diss = detail::dissipator_super(collapse_operators(sys));
  auto generator = [&](double t) -> Matrix9c { return detail::commutator_super(hamiltonian_at(sys, t)) + diss; };

  Vector9c v = detail::vec(rho0.matrix());
  res.min_eigenvalue = linalg::min_eigenvalue(rho0.matrix());
  auto record = [&](double t) {
    const Matrix3c rho = detail::unvec(v);
    res.trace.time_ns.push_back(t);
    res.trace.populations.push_back({rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()});
    res.max_trace_drift = std::max(res.max_trace_drift, std::abs(rho.trace() - cplx(1.0)));
    res.min_eigenvalue = std::min(res.min_eigenvalue, linalg::min_eigenvalue(0.5 * (rho + rho.adjoint())));
  };
  record(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    for (const detail::Segment& s : detail::split_interval(sys, grid[i - 1], grid[i], max_step)) {
      const double h_ns = (s.end - s.start) / s.steps;
      const double h = ns_to_us(h_ns);
      for (int k = 0; k < s.steps; ++k) {
        const double t = s.start + k * h_ns;
        // the generator is only evaluated strictly inside the segment at its ends
        const Matrix9c l0 = generator(k == 0 ? std::nextafter(t, s.end) : t);
        const Matrix9c lm = generator(t + 0.5 * h_ns);
        const Matrix9c l1 = generator(k + 1 == s.steps ? std::nextafter(s.end, s.start) : t + h_ns);
        const Vector9c k1 = l0 * v;
        const Vector9c k2 = lm * (v + 0.5 * h * k1);
        const Vector9c k3 = lm * (v + 0.5 * h * k2);
        const Vector9c k4 = l1 * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    record(grid[i]);
  }
  res.final_rho = detail::unvec(v);
  return res;
}

/// Uniform grid with `points` samples on [t0, t1].
inline std::vector<double> linspace(double a, double b, int points) {
  std::vector<double> g;
  if (points < 1) return g;
  if (points == 1) return {a};
  g.reserve(points);
  for (int i = 0; i < points; ++i) g.push_back(a + (b - a) * i / double(points - 1));
  g.back() = b;
  return g;
}

}  // namespace stirap
