#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "stirap/error.hpp"

namespace stirap::device {

/// Physical constants (SI, exact since the 2019 redefinition).
struct Constants {
  static constexpr double elementary_charge = 1.602176634e-19;  // C
  static constexpr double planck = 6.62607015e-34;              // J s
  static constexpr double femto = 1e-15;
  static constexpr double mega = 1e6;
};

/// e^2 / (2 C h) in MHz for C in fF.
inline double charging_energy_mhz(double capacitance_ff) {
  const double e = Constants::elementary_charge;
  return e * e / (2.0 * capacitance_ff * Constants::femto * Constants::planck) / Constants::mega;
}

struct CircuitParams {
  double c_ff = 75.0;   // pad capacitance of each transmon
  double cc_ff = 11.0;  // coupling capacitance
  double ej_mhz = 20000.0;  // average Josephson energy (frequency units)
  double dj = 0.0;          // junction asymmetry

  void validate() const {
    if (!(c_ff > 0.0)) throw InvalidParameter("C must be > 0");
    if (!(cc_ff >= 0.0)) throw InvalidParameter("C_c must be >= 0");
    if (!(ej_mhz > 0.0)) throw InvalidParameter("E_J must be > 0");
    if (!(std::abs(dj) < 1.0)) throw InvalidParameter("|d_J| must be < 1");
  }
  double cb_ff() const { return 2.0 * c_ff + 4.0 * cc_ff; }
  double cd_ff() const { return 2.0 * c_ff; }
};

/// All values in MHz.
struct ModeParams {
  double omega_b = 0.0, omega_d = 0.0;
  double alpha_b = 0.0, alpha_d = 0.0;
  double g_zz = 0.0;
  double ec_b = 0.0, ec_d = 0.0;
  double ej_mode = 0.0;  // E_Jb = E_Jd = 2 E_J
};

/// Quartic expansion with d_J dropped.
inline ModeParams reduce_circuit(const CircuitParams& p) {
  p.validate();
  ModeParams m;
  m.ec_b = charging_energy_mhz(p.cb_ff());
  m.ec_d = charging_energy_mhz(p.cd_ff());
  m.alpha_b = m.ec_b;
  m.alpha_d = m.ec_d;
  m.g_zz = std::sqrt(m.ec_b * m.ec_d);
  m.ej_mode = 2.0 * p.ej_mhz;
  m.omega_b = std::sqrt(8.0 * m.ej_mode * m.ec_b) - m.alpha_b - m.g_zz;
  m.omega_d = std::sqrt(8.0 * m.ej_mode * m.ec_d) - m.alpha_d - m.g_zz;
  return m;
}

/// Measured device values (MHz unless noted).
struct TableValues {
  double cavity = 7205.0;
  double omega_b = 4361.0;
  double omega_d = 4792.0;
  double alpha_b = 100.0;
  double alpha_d = 130.0;
  double g_zz = 180.0;
  double chi_b = 1.2;
  double chi_d = 1.55;
  double g_b = 150.0;
  double dj = 0.01;
};

struct CircuitFit {
  CircuitParams params;
  ModeParams modes;
  std::array<double, 5> relative_residuals{};  // omega_b, omega_d, alpha_b, alpha_d, g_zz
  double rms_relative_residual = 0.0;
  bool converged = false;
};

namespace detail {

struct FitFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  TableValues t;
  int inputs() const { return 3; }
  int values() const { return 5; }

  static CircuitParams unpack(const Eigen::VectorXd& x) { return {std::exp(x(0)), std::exp(x(1)), std::exp(x(2)), 0.0}; }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const ModeParams m = reduce_circuit(unpack(x));
    f.resize(5);
    f << m.omega_b / t.omega_b - 1.0, m.omega_d / t.omega_d - 1.0, m.alpha_b / t.alpha_b - 1.0,
        m.alpha_d / t.alpha_d - 1.0, m.g_zz / t.g_zz - 1.0;
    return 0;
  }
};

}  // namespace detail

/// Least-squares (relative residuals, log-parameterized) of (C, C_c, E_J)
/// against the measured frequencies, anharmonicities and g_zz.
inline CircuitFit fit_circuit(const TableValues& t = {}) {
  detail::FitFunctor fn{t};
  // seed from the anharmonicities alone
  const double cd = charging_energy_mhz(1.0) / t.alpha_d;
  const double cb = charging_energy_mhz(1.0) / t.alpha_b;
  const double c = 0.5 * cd;
  const double cc = std::max(0.25 * (cb - cd), 1e-3);
  const double ec_b = t.alpha_b;
  const double ej = std::pow(t.omega_b + t.alpha_b + std::sqrt(t.alpha_b * t.alpha_d), 2) / (8.0 * ec_b) / 2.0;
  Eigen::VectorXd x(3);
  x << std::log(c), std::log(cc), std::log(ej);
  Eigen::NumericalDiff<detail::FitFunctor> nd(fn);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<detail::FitFunctor>> lm(nd);
  lm.parameters.maxfev = 2000;
  const auto status = lm.minimize(x);
  CircuitFit out;
  out.params = detail::FitFunctor::unpack(x);
  out.params.dj = t.dj;
  out.modes = reduce_circuit(out.params);
  Eigen::VectorXd f;
  fn(x, f);
  for (int k = 0; k < 5; ++k) out.relative_residuals[k] = f(k);
  out.rms_relative_residual = std::sqrt(f.squaredNorm() / 5.0);
  out.converged = status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation &&
                  status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters;
  return out;
}

struct DispersiveParams {
  double g_b = 0.0, delta_b = 0.0;
  double chi_b = 0.0, chi_d = 0.0;
};

/// chi_b = 2 g^2 alpha_b / (Delta (alpha_b - Delta)),
/// chi_d = 2 g^2 g_zz / (Delta (2 g_zz - Delta)); all MHz.
inline DispersiveParams dispersive_shifts(double g_b, double delta_b, double alpha_b, double g_zz,
                                          double pole_guard_mhz = 1.0) {
  struct Pole {
    double at;
    const char* name;
  };
  for (const Pole& p : {Pole{0.0, "Delta_b = 0 (qubit-cavity resonance)"},
                        Pole{alpha_b, "Delta_b = alpha_b"}, Pole{2.0 * g_zz, "Delta_b = 2 g_zz"}}) {
    if (std::abs(delta_b - p.at) < pole_guard_mhz)
      throw Singularity(std::string("dispersive shift pole: ") + p.name + " (Delta_b = " + std::to_string(delta_b) +
                        " MHz)");
  }
  DispersiveParams d;
  d.g_b = g_b;
  d.delta_b = delta_b;
  d.chi_b = 2.0 * g_b * g_b * alpha_b / (delta_b * (alpha_b - delta_b));
  d.chi_d = 2.0 * g_b * g_b * g_zz / (delta_b * (2.0 * g_zz - delta_b));
  return d;
}

// ---------------------------------------------------------------------------
// Exact diagonalization of cavity + bright + dark modes

struct EdOptions {
  int levels = 6;        // Fock states per mode
  bool junction_asymmetry = false;
  double dj = 0.0;
  double ej_mhz = 0.0;   // needed for the asymmetry coupling
};

struct EdSpectrum {
  int levels = 0;
  Eigen::VectorXd energies;  // MHz
  double chi_b = 0.0, chi_d = 0.0;
  double min_assignment_overlap = 1.0;  // |<bare|dressed>|^2 of the levels used
  double g_bd = 0.0;                    // asymmetry exchange coefficient used (MHz)
};

namespace detail {

inline int fock_index(int levels, int nr, int nb, int nd) { return (nr * levels + nb) * levels + nd; }

}  // namespace detail

/// Builds the three-mode Hamiltonian on a truncated Fock basis and extracts
/// chi from dressed levels: E(1_r, q) - E(0_r, q) - [E(1_r, 0) - E(0_r, 0)].
/// With junction asymmetry the sin-sin term enters at leading order as
/// g_bd (b + b^dag)(d + d^dag).
inline EdSpectrum exact_diagonalization_oracle(const ModeParams& m, double g_b, double omega_r, EdOptions opt = {}) {
  const int n = opt.levels;
  if (n < 4) throw InvalidParameter("exact diagonalization needs at least 4 levels per mode");
  const int dim = n * n * n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  double g_bd = 0.0;
  if (opt.junction_asymmetry) {
    const double xb = std::pow(8.0 * m.ec_b / m.ej_mode, 0.25) / std::sqrt(2.0);
    const double xd = std::pow(8.0 * m.ec_d / m.ej_mode, 0.25) / std::sqrt(2.0);
    g_bd = -2.0 * opt.ej_mhz * opt.dj * xb * xd;
  }
  for (int r = 0; r < n; ++r)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        const int i = detail::fock_index(n, r, b, d);
        h(i, i) = omega_r * r + m.omega_b * b - 0.5 * m.alpha_b * b * (b - 1) + m.omega_d * d -
                  0.5 * m.alpha_d * d * (d - 1) - 2.0 * m.g_zz * b * d;
        // g_b (a^dag b + a b^dag)
        if (r + 1 < n && b >= 1) {
          const int j = detail::fock_index(n, r + 1, b - 1, d);
          const double v = g_b * std::sqrt(double(r + 1) * b);
          h(i, j) += v;
          h(j, i) += v;
        }
        if (g_bd != 0.0) {
          // (b + b^dag)(d + d^dag): raise or lower each mode
          for (int sb : {-1, 1})
            for (int sd : {-1, 1}) {
              const int b2 = b + sb, d2 = d + sd;
              if (b2 < 0 || b2 >= n || d2 < 0 || d2 >= n) continue;
              const double mb = std::sqrt(double(std::max(b, b2)));
              const double md = std::sqrt(double(std::max(d, d2)));
              h(detail::fock_index(n, r, b2, d2), i) += g_bd * mb * md;
            }
        }
      }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  EdSpectrum out;
  out.levels = n;
  out.energies = es.eigenvalues();
  out.g_bd = g_bd;
  auto dressed = [&](int r, int b, int d) {
    const int i = detail::fock_index(n, r, b, d);
    Eigen::Index best = 0;
    const double ov = es.eigenvectors().row(i).cwiseAbs2().maxCoeff(&best);
    out.min_assignment_overlap = std::min(out.min_assignment_overlap, ov);
    return es.eigenvalues()(best);
  };
  const double e00 = dressed(0, 0, 0), e10 = dressed(1, 0, 0);
  out.chi_b = dressed(1, 1, 0) - dressed(0, 1, 0) - (e10 - e00);
  out.chi_d = dressed(1, 0, 1) - dressed(0, 0, 1) - (e10 - e00);
  return out;
}

// ---------------------------------------------------------------------------
// Report against the measured table

struct ReportRow {
  std::string quantity;
  std::string unit;
  double model;
  double table;
};

struct DeviceReport {
  CircuitFit fit;
  std::vector<ReportRow> rows;
};

/// Model values next to the measured table. chi is evaluated with the measured
/// anharmonicity and g_zz under both detuning sign conventions.
inline DeviceReport table_report(const TableValues& t = {}, int levels = 6, bool junction_asymmetry = false) {
  DeviceReport rep;
  rep.fit = fit_circuit(t);
  const ModeParams& m = rep.fit.modes;
  rep.rows = {
      {"C", "fF", rep.fit.params.c_ff, std::nan("")},
      {"C_c", "fF", rep.fit.params.cc_ff, std::nan("")},
      {"E_J", "MHz", rep.fit.params.ej_mhz, std::nan("")},
      {"E_Cb", "MHz", m.ec_b, std::nan("")},
      {"E_Cd", "MHz", m.ec_d, std::nan("")},
      {"omega_b", "MHz", m.omega_b, t.omega_b},
      {"omega_d", "MHz", m.omega_d, t.omega_d},
      {"alpha_b", "MHz", m.alpha_b, t.alpha_b},
      {"alpha_d", "MHz", m.alpha_d, t.alpha_d},
      {"g_zz", "MHz", m.g_zz, t.g_zz},
  };
  const double qubit_minus_cavity = t.omega_b - t.cavity;
  for (const auto& [label, delta] : {std::pair<const char*, double>{"qubit_minus_cavity", qubit_minus_cavity},
                                     std::pair<const char*, double>{"cavity_minus_qubit", -qubit_minus_cavity}}) {
    const DispersiveParams d = dispersive_shifts(t.g_b, delta, t.alpha_b, t.g_zz);
    rep.rows.push_back({std::string("Delta_b[") + label + "]", "MHz", delta, std::nan("")});
    rep.rows.push_back({std::string("chi_b[") + label + "]", "MHz", d.chi_b, t.chi_b});
    rep.rows.push_back({std::string("chi_d[") + label + "]", "MHz", d.chi_d, t.chi_d});
  }
  ModeParams measured = m;
  measured.omega_b = t.omega_b;
  measured.omega_d = t.omega_d;
  measured.alpha_b = t.alpha_b;
  measured.alpha_d = t.alpha_d;
  measured.g_zz = t.g_zz;
  const EdSpectrum ed = exact_diagonalization_oracle(measured, t.g_b, t.cavity, {levels});
  rep.rows.push_back({"chi_b[exact_diagonalization]", "MHz", ed.chi_b, t.chi_b});
  rep.rows.push_back({"chi_d[exact_diagonalization]", "MHz", ed.chi_d, t.chi_d});
  if (junction_asymmetry) {
    const EdSpectrum eda =
        exact_diagonalization_oracle(measured, t.g_b, t.cavity, {levels, true, t.dj, rep.fit.params.ej_mhz});
    rep.rows.push_back({"g_bd[junction_asymmetry]", "MHz", eda.g_bd, std::nan("")});
    rep.rows.push_back({"chi_b[exact_diagonalization_asymmetry]", "MHz", eda.chi_b, t.chi_b});
    rep.rows.push_back({"chi_d[exact_diagonalization_asymmetry]", "MHz", eda.chi_d, t.chi_d});
  }
  return rep;
}

}  // namespace stirap::device
