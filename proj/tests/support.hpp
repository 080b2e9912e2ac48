#pragma once

// Test-side oracles and generators. Nothing here calls into the library's
// integrators or eigen-solvers, so it can be used to check them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

using cplx = std::complex<double>;
using M3 = Eigen::Matrix3cd;
using V3 = Eigen::Vector3cd;

constexpr double tau = 6.283185307179586;

// ---------------------------------------------------------------------------
// Generators

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(eng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
};

inline V3 random_ket(Rng& r) {
  V3 v;
  for (int i = 0; i < 3; ++i) v(i) = cplx(r.normal(), r.normal());
  return v.normalized();
}

/// Ginibre ensemble with random rank 1..3: G G^dag / Tr.
inline M3 random_density(Rng& r) {
  const int rank = r.integer(1, 3);
  Eigen::MatrixXcd g(3, rank);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = cplx(r.normal(), r.normal());
  M3 rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline M3 random_hermitian(Rng& r, double scale = 1.0) {
  M3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = cplx(r.normal(), r.normal());
  return scale * 0.5 * (a + a.adjoint());
}

// ---------------------------------------------------------------------------
// Hamiltonian written out from the model definition

struct Gaussian {
  double peak_mhz, center_ns, sigma_ns, phase, start_ns, end_ns;
  cplx at(double t) const {
    if (t < start_ns || t > end_ns) return 0.0;
    const double x = (t - center_ns) / sigma_ns;
    return std::polar(peak_mhz * std::exp(-0.5 * x * x), phase);
  }
};

/// Two delayed pulses, Stokes first: Stokes on [0, window], pump on
/// [offset, offset + window]. Everything in MHz / ns.
struct PulsePair {
  double window_ns, sigma_ns, offset_ns, peak_mhz, delta_mhz, two_photon_mhz = 0.0, phase = 0.0;
  Gaussian stokes() const { return {peak_mhz, 0.5 * window_ns, sigma_ns, phase, 0.0, window_ns}; }
  Gaussian pump() const {
    return {peak_mhz, offset_ns + 0.5 * window_ns, sigma_ns, phase, offset_ns, offset_ns + window_ns};
  }
  double end_ns() const { return offset_ns + window_ns; }

  /// rad/us, basis (|0>, |g>, |1>)
  M3 h(double t) const {
    const cplx o0 = tau * pump().at(t), o1 = tau * stokes().at(t);
    M3 m = M3::Zero();
    m(0, 1) = 0.5 * o0;
    m(1, 0) = 0.5 * std::conj(o0);
    m(1, 2) = 0.5 * o1;
    m(2, 1) = 0.5 * std::conj(o1);
    m(1, 1) = tau * delta_mhz;
    m(2, 2) = tau * two_photon_mhz;
    return m;
  }
};

// ---------------------------------------------------------------------------
// Integrators

/// Classical RK4 on i dpsi/dt = H psi, with steps split at the given knots.
inline V3 rk4_schrodinger(const std::function<M3(double)>& h, V3 psi, double t0_ns, double t1_ns, int steps,
                          std::vector<double> knots = {}) {
  knots.push_back(t0_ns);
  knots.push_back(t1_ns);
  std::sort(knots.begin(), knots.end());
  const cplx mi(0.0, -1.0);
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const double a = std::max(knots[s], t0_ns), b = std::min(knots[s + 1], t1_ns);
    if (b <= a) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(steps * (b - a) / (t1_ns - t0_ns))));
    const double dt = (b - a) / n;
    const double hu = 1e-3 * dt;
    for (int k = 0; k < n; ++k) {
      // evaluate strictly inside the piece so the truncation edges are one-sided
      const double t = a + k * dt;
      const double tl = k == 0 ? std::nextafter(t, b) : t;
      const double tr = k + 1 == n ? std::nextafter(b, a) : t + dt;
      const V3 k1 = mi * (h(tl) * psi);
      const V3 k2 = mi * (h(t + 0.5 * dt) * (psi + 0.5 * hu * k1));
      const V3 k3 = mi * (h(t + 0.5 * dt) * (psi + 0.5 * hu * k2));
      const V3 k4 = mi * (h(tr) * (psi + hu * k3));
      psi += (hu / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return psi;
}

/// Unitary built column by column from rk4_schrodinger.
inline M3 rk4_unitary(const std::function<M3(double)>& h, double t0_ns, double t1_ns, int steps,
                      const std::vector<double>& knots = {}) {
  M3 u;
  for (int c = 0; c < 3; ++c) u.col(c) = rk4_schrodinger(h, V3::Unit(c), t0_ns, t1_ns, steps, knots);
  return u;
}

// ---------------------------------------------------------------------------
// Linear algebra

/// Eigenvalues by the general (non-Hermitian) complex solver, sorted by real part.
inline std::vector<double> dense_eigenvalues(const M3& h) {
  Eigen::ComplexEigenSolver<M3> es(h);
  std::vector<double> w;
  for (int i = 0; i < 3; ++i) w.push_back(es.eigenvalues()(i).real());
  std::sort(w.begin(), w.end());
  return w;
}

inline double max_abs(const M3& m) { return m.cwiseAbs().maxCoeff(); }

/// Pure-state fidelity |<a|b>|^2.
inline double overlap2(const V3& a, const V3& b) { return std::norm(a.dot(b)); }

/// Fidelity of a pure target with rho written out directly.
inline double pure_fidelity(const M3& rho, const V3& psi) { return (psi.adjoint() * rho * psi)(0, 0).real(); }

/// Richardson estimate of the convergence order from errors at steps h, h/2, h/4.
inline double observed_order(double e_h, double e_h2) { return std::log2(e_h / e_h2); }

}  // namespace oracle
