#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace stirap {

using cplx = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Vector3c = Eigen::Vector3cd;
using Matrix3r = Eigen::Matrix3d;

/// Fixed basis order shared by every module: (|0>, |g>, |1>).
enum class Level : int { zero = 0, ground = 1, one = 2 };

constexpr int index(Level l) { return static_cast<int>(l); }

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double pi = std::numbers::pi;

/// Times are handed around in ns; Hamiltonians are in rad/us.
constexpr double ns_to_us(double t_ns) { return 1e-3 * t_ns; }

inline Vector3c ket(Level l) {
  Vector3c v = Vector3c::Zero();
  v(index(l)) = 1.0;
  return v;
}

inline Matrix3c projector(const Vector3c& v) { return v * v.adjoint(); }

inline Matrix3c outer(Level a, Level b) {
  Matrix3c m = Matrix3c::Zero();
  m(index(a), index(b)) = 1.0;
  return m;
}

/// (|0> + e^{i phase}|1>)/sqrt(2)
inline Vector3c qubit_superposition(double relative_phase) {
  Vector3c v = Vector3c::Zero();
  v(index(Level::zero)) = 1.0 / std::sqrt(2.0);
  v(index(Level::one)) = std::polar(1.0 / std::sqrt(2.0), relative_phase);
  return v;
}

}  // namespace stirap
