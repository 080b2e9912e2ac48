#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "stirap/error.hpp"
#include "stirap/linalg.hpp"
#include "stirap/propagator.hpp"
#include "stirap/units.hpp"

namespace stirap {

/// Scalar readout: each level maps to one integrated-quadrature value.
struct MeasurementModel {
  double alpha_g = 0.0;
  double alpha_0 = 1.0;
  double alpha_1 = 2.0;
  double shot_noise_sigma = 0.0;

  void validate() const {
    if (alpha_g == alpha_0 || alpha_g == alpha_1 || alpha_0 == alpha_1)
      throw DegenerateModel("measurement amplitudes must be pairwise distinct (alpha_g=" + std::to_string(alpha_g) +
                            ", alpha_0=" + std::to_string(alpha_0) + ", alpha_1=" + std::to_string(alpha_1) + ")");
    if (!(shot_noise_sigma >= 0.0)) throw InvalidParameter("shot_noise_sigma must be >= 0");
  }

  /// Measurement operator in basis (|0>, |g>, |1>).
  Matrix3c operator_matrix() const {
    Matrix3c m = Matrix3c::Zero();
    m(0, 0) = alpha_0;
    m(1, 1) = alpha_g;
    m(2, 2) = alpha_1;
    return m;
  }
};

/// exp(-i angle/2 (cos(axis) sx + sin(axis) sy)) on the {|g>, |k>} pair,
/// identity on the remaining level.
inline Matrix3c subspace_rotation(Level k, double angle, double axis) {
  const int g = index(Level::ground), e = index(k);
  Matrix3c r = Matrix3c::Identity();
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  r(g, g) = c;
  r(e, e) = c;
  r(g, e) = cplx(0.0, -1.0) * s * std::polar(1.0, -axis);
  r(e, g) = cplx(0.0, -1.0) * s * std::polar(1.0, axis);
  return r;
}

struct AnalysisRotation {
  std::string label;
  Matrix3c u;
};

/// The nine analysis rotations; composite entries are products in the
/// listed order. `angle_error` scales every rotation angle by (1 + error),
/// standing in for miscalibrated analysis pulses.
inline std::vector<AnalysisRotation> rotation_set(double angle_error = 0.0) {
  const double x = 0.0, y = 0.5 * pi, s = 1.0 + angle_error;
  const double half = 0.5 * pi * s, full = pi * s;
  const Matrix3c px0 = subspace_rotation(Level::zero, full, x);
  return {
      {"I", Matrix3c::Identity()},
      {"pi2_x_g0", subspace_rotation(Level::zero, half, x)},
      {"pi2_y_g0", subspace_rotation(Level::zero, half, y)},
      {"pi_x_g0", px0},
      {"pi2_x_g1", subspace_rotation(Level::one, half, x)},
      {"pi2_y_g1", subspace_rotation(Level::one, half, y)},
      {"pi_x_g0*pi2_x_g1", px0 * subspace_rotation(Level::one, half, x)},
      {"pi_x_g0*pi2_y_g1", px0 * subspace_rotation(Level::one, half, y)},
      {"pi_x_g0*pi_x_g1", px0 * subspace_rotation(Level::one, full, x)},
  };
}

struct TomographyRecord {
  std::array<std::string, 9> labels;
  std::array<double, 9> values{};
};

/// Observables O_k = R_k M R_k^dagger; <I_k> = Tr(rho O_k).
inline std::array<Matrix3c, 9> tomography_observables(const MeasurementModel& model,
                                                      const std::vector<AnalysisRotation>& rots = rotation_set()) {
  if (rots.size() != 9) throw InvalidParameter("tomography needs exactly nine analysis rotations");
  std::array<Matrix3c, 9> obs;
  const Matrix3c m = model.operator_matrix();
  for (int k = 0; k < 9; ++k) obs[k] = rots[k].u * m * rots[k].u.adjoint();
  return obs;
}

/// Ideal coefficients, plus Gaussian noise of the model's sigma (seeded).
inline TomographyRecord simulate_measurements(const DensityMatrix& rho, const MeasurementModel& model,
                                              std::uint64_t seed = 0,
                                              const std::vector<AnalysisRotation>& rots = rotation_set()) {
  model.validate();
  const auto obs = tomography_observables(model, rots);
  TomographyRecord rec;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int k = 0; k < 9; ++k) {
    rec.labels[k] = rots[k].label;
    rec.values[k] = (rho.matrix() * obs[k]).trace().real();
    if (model.shot_noise_sigma > 0.0) rec.values[k] += model.shot_noise_sigma * noise(rng);
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Gell-Mann expansion: rho = I/3 + (1/2) sum_j x_j lambda_j

inline const std::array<Matrix3c, 8>& gell_mann() {
  static const std::array<Matrix3c, 8> basis = [] {
    std::array<Matrix3c, 8> l;
    for (auto& m : l) m.setZero();
    const cplx i(0.0, 1.0);
    l[0](0, 1) = l[0](1, 0) = 1.0;
    l[1](0, 1) = -i, l[1](1, 0) = i;
    l[2](0, 0) = 1.0, l[2](1, 1) = -1.0;
    l[3](0, 2) = l[3](2, 0) = 1.0;
    l[4](0, 2) = -i, l[4](2, 0) = i;
    l[5](1, 2) = l[5](2, 1) = 1.0;
    l[6](1, 2) = -i, l[6](2, 1) = i;
    l[7](0, 0) = l[7](1, 1) = 1.0 / std::sqrt(3.0), l[7](2, 2) = -2.0 / std::sqrt(3.0);
    return l;
  }();
  return basis;
}

inline Matrix3c from_bloch(const Eigen::Matrix<double, 8, 1>& x) {
  Matrix3c rho = Matrix3c::Identity() / 3.0;
  for (int j = 0; j < 8; ++j) rho += 0.5 * x(j) * gell_mann()[j];
  return rho;
}

enum class ReconstructionMethod { linear, mle };

struct ReconstructedState {
  Matrix3c rho;
  ReconstructionMethod method = ReconstructionMethod::linear;
  double residual = 0.0;        // rms misfit to whatever was fitted
  double min_eigenvalue = 0.0;
  bool negative_eigenvalue = false;  // linear inversion only
  bool converged = true;             // mle only
  int evaluations = 0;
};

/// Least-squares Hermitian, unit-trace solution of Tr(rho O_k) = <I_k>.
inline ReconstructedState linear_inversion(const TomographyRecord& rec, const MeasurementModel& model,
                                           const std::vector<AnalysisRotation>& rots = rotation_set()) {
  model.validate();
  const auto obs = tomography_observables(model, rots);
  Eigen::Matrix<double, 9, 8> a;
  Eigen::Matrix<double, 9, 1> b;
  for (int k = 0; k < 9; ++k) {
    b(k) = rec.values[k] - obs[k].trace().real() / 3.0;
    for (int j = 0; j < 8; ++j) a(k, j) = 0.5 * (obs[k] * gell_mann()[j]).trace().real();
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 9, 8>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(7) <= 1e-10 * sv(0)) {
    throw DegenerateModel("tomography design matrix is rank deficient for amplitudes alpha_g=" +
                          std::to_string(model.alpha_g) + ", alpha_0=" + std::to_string(model.alpha_0) +
                          ", alpha_1=" + std::to_string(model.alpha_1));
  }
  const Eigen::Matrix<double, 8, 1> x = svd.solve(b);
  ReconstructedState out;
  out.method = ReconstructionMethod::linear;
  out.rho = from_bloch(x);
  out.residual = std::sqrt((a * x - b).squaredNorm() / 9.0);
  out.min_eigenvalue = linalg::min_eigenvalue(out.rho);
  out.negative_eigenvalue = out.min_eigenvalue < 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Maximum likelihood (least squares under the physical parameterization)

namespace detail {

using Params = Eigen::VectorXd;  // 9 reals: 3 diagonal + 3 complex lower entries of T

inline Matrix3c cholesky_state(const Params& p) {
  Matrix3c t = Matrix3c::Zero();
  t(0, 0) = p(0), t(1, 1) = p(1), t(2, 2) = p(2);
  t(1, 0) = cplx(p(3), p(4));
  t(2, 0) = cplx(p(5), p(6));
  t(2, 1) = cplx(p(7), p(8));
  const Matrix3c m = t.adjoint() * t;
  return m / m.trace().real();
}

/// Lower-triangular T with T^dagger T = rho (rho positive definite): Cholesky
/// of J rho J with the exchange matrix J, then T = (J L J)^dagger.
inline Params params_from_state(const Matrix3c& rho) {
  Matrix3c j = Matrix3c::Zero();
  j(0, 2) = j(1, 1) = j(2, 0) = 1.0;
  Eigen::LLT<Matrix3c> llt(j * rho * j);
  const Matrix3c t = (j * Matrix3c(llt.matrixL()) * j).adjoint();
  Params p(9);
  p << t(0, 0).real(), t(1, 1).real(), t(2, 2).real(), t(1, 0).real(), t(1, 0).imag(), t(2, 0).real(),
      t(2, 0).imag(), t(2, 1).real(), t(2, 1).imag();
  return p;
}

/// Nearest physical state in eigenvalue-clipping sense, mixed slightly with
/// I/3 so the Cholesky seed exists.
inline Matrix3c physical_seed(const Matrix3c& rho, double eps = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(0.5 * (rho + rho.adjoint()));
  Eigen::Vector3d w = es.eigenvalues().cwiseMax(0.0);
  if (w.sum() <= 0.0) w.setConstant(1.0);
  w /= w.sum();
  const Matrix3c p = es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  return (p + eps * Matrix3c::Identity()) / (1.0 + 3.0 * eps);
}

struct ResidualFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::function<Eigen::VectorXd(const Matrix3c&)> residual;
  int n_values;

  int inputs() const { return 9; }
  int values() const { return n_values; }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    f = residual(cholesky_state(x));
    return 0;
  }
};

inline ReconstructedState run_mle(const Matrix3c& seed_rho,
                                  std::function<Eigen::VectorXd(const Matrix3c&)> residual, int n_values) {
  ResidualFunctor fn{std::move(residual), n_values};
  Eigen::NumericalDiff<ResidualFunctor> nd(fn);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<ResidualFunctor>> lm(nd);
  lm.parameters.maxfev = 10000;
  lm.parameters.gtol = 1e-10;
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-16;
  Eigen::VectorXd x = params_from_state(physical_seed(seed_rho));
  Eigen::VectorXd f0(n_values);
  fn(x, f0);
  ReconstructedState out;
  out.method = ReconstructionMethod::mle;
  if (f0.norm() > 1e-13) {
    const auto status = lm.minimize(x);
    out.evaluations = static_cast<int>(lm.nfev);
    out.converged = status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation &&
                    status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters;
  }
  out.rho = cholesky_state(x);
  out.rho = 0.5 * (out.rho + out.rho.adjoint());
  Eigen::VectorXd f(n_values);
  fn(x, f);
  out.residual = std::sqrt(f.squaredNorm() / n_values);
  out.min_eigenvalue = linalg::min_eigenvalue(out.rho);
  return out;
}

}  // namespace detail

/// Physical state closest (Frobenius) to an estimate.
inline ReconstructedState mle_project(const ReconstructedState& estimate) {
  const Matrix3c target = 0.5 * (estimate.rho + estimate.rho.adjoint());
  auto residual = [target](const Matrix3c& rho) {
    Eigen::VectorXd r(9);
    const Matrix3c d = rho - target;
    const double s2 = std::sqrt(2.0);
    r << d(0, 0).real(), d(1, 1).real(), d(2, 2).real(), s2 * d(1, 0).real(), s2 * d(1, 0).imag(),
        s2 * d(2, 0).real(), s2 * d(2, 0).imag(), s2 * d(2, 1).real(), s2 * d(2, 1).imag();
    return r;
  };
  return detail::run_mle(target, residual, 9);
}

/// Physical state whose predicted coefficients best match the record,
/// seeded from the linear inversion.
inline ReconstructedState mle_project(const TomographyRecord& rec, const MeasurementModel& model,
                                      const std::vector<AnalysisRotation>& rots = rotation_set()) {
  const ReconstructedState lin = linear_inversion(rec, model, rots);
  const auto obs = tomography_observables(model, rots);
  auto residual = [obs, rec](const Matrix3c& rho) {
    Eigen::VectorXd r(9);
    for (int k = 0; k < 9; ++k) r(k) = (rho * obs[k]).trace().real() - rec.values[k];
    return r;
  };
  return detail::run_mle(lin.rho, residual, 9);
}

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
inline double state_fidelity(const Matrix3c& rho, const Matrix3c& sigma) {
  const Matrix3c s = linalg::sqrtm_psd(Matrix3c(0.5 * (rho + rho.adjoint())));
  const Matrix3c inner = s * (0.5 * (sigma + sigma.adjoint())) * s;
  const double f = linalg::sqrtm_psd(Matrix3c(0.5 * (inner + inner.adjoint()))).trace().real();
  return std::clamp(f * f, 0.0, 1.0);
}

inline double state_fidelity(const DensityMatrix& rho, const DensityMatrix& target) {
  return state_fidelity(rho.matrix(), target.matrix());
}

}  // namespace stirap
