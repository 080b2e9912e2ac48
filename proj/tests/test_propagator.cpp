#include <cmath>

#include <gtest/gtest.h>

#include "stirap/gates.hpp"
#include "stirap/propagator.hpp"
#include "support.hpp"

using namespace stirap;

namespace {

constexpr double kPiAmplitude = 19.6;
constexpr double kHalfPiAmplitude = 9.19716;

VSystem idle_system(double delta_mhz = 0.0) {
  VSystem s;
  s.pump = {0.0, 50.0, 10.0, 0.0, 0.0, 100.0};
  s.stokes = {0.0, 50.0, 10.0, 0.0, 0.0, 100.0};
  s.drive = DriveConfig::from_detunings(delta_mhz, 0.0);
  return s;
}

StirapProtocol closed(StirapProtocol p) {
  p.decoherence.reset();
  return p;
}

/// Maximal runs of the series below `level`.
int dips_below(const std::vector<double>& v, double level) {
  int n = 0;
  bool in = false;
  for (double x : v) {
    if (x < level && !in) ++n;
    in = x < level;
  }
  return n;
}

std::vector<double> column(const EvolutionTrace& tr, int k) {
  std::vector<double> out;
  for (const auto& o : tr.overlaps) out.push_back(o[k]);
  return out;
}

}  // namespace

TEST(Unitary, ZeroDriveIsIdentity) {
  const VSystem s = idle_system();
  EXPECT_EQ(oracle::max_abs(propagate_unitary(s, 0.0, 100.0, 50) - Matrix3c::Identity()), 0.0);
}

TEST(Unitary, UnitaryForEveryPreset) {
  for (const StirapProtocol& p : {resonant_stirap_preset(), detuned_preset(GateKind::pi),
                                  detuned_preset(GateKind::half_pi), map_preset(30.0, 35.0)}) {
    EXPECT_LT(linalg::unitarity_defect(protocol_unitary(p)), 1e-9);
  }
  oracle::Rng r(21);
  for (int i = 0; i < 30; ++i) {
    StirapProtocol p = detuned_preset(GateKind::pi).with_amplitude(r.uniform(0.0, 40.0));
    p.drive = DriveConfig::from_detunings(r.uniform(-40.0, 40.0), r.uniform(-5.0, 5.0));
    p.common_phase_rad = r.uniform(-pi, pi);
    p.differential_phase_rad = r.uniform(-pi, pi);
    p.steps = r.integer(1, 3000);
    EXPECT_LT(linalg::unitarity_defect(protocol_unitary(p)), 1e-9);
  }
}

TEST(Unitary, MatchesRk4Oracle) {
  const oracle::PulsePair pp{206.0, 33.0, 54.0, 2.0 * kPiAmplitude, 15.0, 0.0, 0.3};
  StirapProtocol p = detuned_preset(GateKind::pi).with_amplitude(kPiAmplitude);
  p.common_phase_rad = 0.3;
  const Matrix3c ref = oracle::rk4_unitary([&](double t) { return pp.h(t); }, 0.0, 260.0, 40000, {54.0, 206.0});
  std::vector<double> err;
  for (int n : {16000, 32000, 64000}) {
    p.steps = n;
    err.push_back(oracle::max_abs(protocol_unitary(p) - ref));
  }
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.2);
  EXPECT_NEAR(err[1] / err[2], 4.0, 0.2);
  EXPECT_LT(err[2], 1e-8);
}

TEST(Unitary, DetunedPiTransfer) {
  // Threshold frozen from the fine-step oracle above (steps x8): 0.98896.
  const StirapProtocol p = detuned_preset(GateKind::pi).with_amplitude(kPiAmplitude);
  StirapProtocol fine = p;
  fine.steps *= 8;
  const double p1 = std::norm(protocol_unitary(p)(2, 0));
  const double p1_fine = std::norm(protocol_unitary(fine)(2, 0));
  EXPECT_NEAR(p1, p1_fine, 1e-6);
  EXPECT_NEAR(p1_fine, 0.98896, 5e-5);
  EXPECT_GT(p1, 0.985);
}

TEST(Unitary, SecondOrderStepDoubling) {
  for (const StirapProtocol& base : {detuned_preset(GateKind::pi).with_amplitude(kPiAmplitude),
                                     detuned_preset(GateKind::half_pi).with_amplitude(kHalfPiAmplitude)}) {
    std::vector<Matrix3c> us;
    for (int n : {100, 200, 400, 800}) {
      StirapProtocol p = base;
      p.steps = n;
      us.push_back(protocol_unitary(p));
    }
    for (int k = 0; k + 2 < 4; ++k) {
      const double ratio = oracle::max_abs(us[k] - us[k + 1]) / oracle::max_abs(us[k + 1] - us[k + 2]);
      EXPECT_NEAR(ratio, 4.0, 0.2) << k;
    }
  }
}

TEST(Unitary, StateNormPreservedAlongTrace) {
  const StirapProtocol p = detuned_preset(GateKind::pi).with_amplitude(kPiAmplitude);
  const auto tr = evolve_pure(p.system(), ket(Level::zero), protocol_grid(p, 261), false);
  for (const auto& pop : tr.populations) EXPECT_NEAR(pop[0] + pop[1] + pop[2], 1.0, 1e-9);
}

TEST(Lindblad, ClosedSystemAgreesWithUnitary) {
  oracle::Rng r(22);
  const StirapProtocol p = detuned_preset(GateKind::half_pi).with_amplitude(kHalfPiAmplitude);
  const VSystem s = p.system();
  // the midpoint rule is second order; x16 steps puts it well below 1e-8
  const Matrix3c u = propagate_unitary(s, s.support_start(), s.support_end(), 16 * p.steps);
  for (int i = 0; i < 5; ++i) {
    const Matrix3c rho0 = oracle::random_density(r);
    const auto res = propagate_lindblad(s, DensityMatrix::checked(rho0), {s.support_start(), s.support_end()});
    EXPECT_LT(oracle::max_abs(res.final_rho - u * rho0 * u.adjoint()), 1e-8);
  }
}

TEST(Lindblad, ConstantWithoutDriveOrCollapse) {
  oracle::Rng r(23);
  const Matrix3c rho0 = oracle::random_density(r);
  const auto res = propagate_lindblad(idle_system(), DensityMatrix::checked(rho0), {0.0, 50.0, 100.0});
  EXPECT_LT(oracle::max_abs(res.final_rho - rho0), 1e-15);
}

TEST(Lindblad, EnergyRelaxationOverT1) {
  VSystem s = idle_system();
  s.decoherence = Decoherence::device_table();
  LindbladOptions opt;
  opt.max_step_ns = 100.0;
  const auto res = propagate_lindblad(s, DensityMatrix::pure(ket(Level::zero)), {0.0, 64000.0}, opt);
  EXPECT_NEAR(res.final_rho(0, 0).real(), std::exp(-1.0), 1e-9);
  EXPECT_NEAR(res.final_rho(1, 1).real(), 1.0 - std::exp(-1.0), 1e-9);
}

TEST(Lindblad, CoherenceDecaysAtOneOverT2) {
  VSystem s = idle_system();
  s.decoherence = Decoherence::device_table();
  LindbladOptions opt;
  opt.max_step_ns = 50.0;
  const Vector3c psi = (ket(Level::zero) + ket(Level::ground)).normalized();
  const auto res = propagate_lindblad(s, DensityMatrix::pure(psi), {0.0, 10000.0}, opt);
  EXPECT_NEAR(std::abs(res.final_rho(0, 1)), 0.5 * std::exp(-10.0 / 106.0), 1e-10);
  const Vector3c psi1 = (ket(Level::one) + ket(Level::ground)).normalized();
  const auto res1 = propagate_lindblad(s, DensityMatrix::pure(psi1), {0.0, 10000.0}, opt);
  EXPECT_NEAR(std::abs(res1.final_rho(2, 1)), 0.5 * std::exp(-10.0 / 98.0), 1e-10);
}

TEST(Lindblad, RejectsUnphysicalInitialState) {
  Matrix3c bad = Matrix3c::Zero();
  bad(0, 0) = 1.2;
  bad(2, 2) = -0.2;
  EXPECT_THROW(DensityMatrix::checked(bad), UnphysicalState);
  EXPECT_THROW(DensityMatrix::pure(Vector3c(1.0, 1.0, 0.0)), UnphysicalState);
}

TEST(Lindblad, ResonantStirapWithDeviceDecoherence) {
  const StirapProtocol p = resonant_stirap_preset();
  const VSystem s = p.system();
  const auto res = propagate_lindblad(s, DensityMatrix::pure(ket(Level::zero)), protocol_grid(p, 826));
  const auto& last = res.trace.populations.back();
  EXPECT_GE(last[2], 0.97);
  EXPECT_LE(last[2], 0.99);
  EXPECT_NEAR(last[1], 0.02, 0.01);
  EXPECT_LT(res.max_trace_drift, 1e-8);
  EXPECT_GT(res.min_eigenvalue, -1e-8);
  for (const auto& pop : res.trace.populations) EXPECT_LE(pop[0] + pop[1] + pop[2], 1.0 + 1e-6);
}

TEST(Lindblad, StepHalvingChangesPopulationsBelowTolerance) {
  for (const StirapProtocol& p : {resonant_stirap_preset(), [] {
         StirapProtocol q = detuned_preset(GateKind::pi).with_amplitude(kPiAmplitude);
         q.decoherence = Decoherence::device_table();
         return q;
       }()}) {
    const VSystem s = p.system();
    const std::vector<double> ends{s.support_start(), s.support_end()};
    LindbladOptions coarse, fine;
    coarse.max_step_ns = (s.support_end() - s.support_start()) / 2000.0;
    fine.max_step_ns = 0.5 * coarse.max_step_ns;
    const auto a = propagate_lindblad(s, DensityMatrix::pure(ket(Level::zero)), ends, coarse);
    const auto b = propagate_lindblad(s, DensityMatrix::pure(ket(Level::zero)), ends, fine);
    for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(a.final_rho(k, k).real() - b.final_rho(k, k).real()), 1e-7);
  }
}

TEST(Overlaps, FrameIsCompleteAlongTheTrace) {
  StirapProtocol numeric = detuned_preset(GateKind::pi).with_amplitude(kPiAmplitude);
  numeric.drive = DriveConfig::from_detunings(15.0, 0.8);
  for (const StirapProtocol& p : {detuned_preset(GateKind::pi).with_amplitude(kPiAmplitude),
                                  detuned_preset(GateKind::half_pi).with_amplitude(kHalfPiAmplitude), numeric}) {
    for (Level l : {Level::zero, Level::one}) {
      const auto tr = eigenbasis_overlap_trace(p.system(), ket(l), protocol_grid(p, 261));
      for (const auto& o : tr.overlaps) EXPECT_NEAR(o[0] + o[1] + o[2], 1.0, 1e-8);
    }
  }
}

TEST(Overlaps, PiGateFollowsOneEigenstate) {
  const StirapProtocol p = detuned_preset(GateKind::pi).with_amplitude(kPiAmplitude);
  const auto grid = protocol_grid(p, 521);
  const auto from0 = column(eigenbasis_overlap_trace(p.system(), ket(Level::zero), grid), 1);
  const auto from1 = column(eigenbasis_overlap_trace(p.system(), ket(Level::one), grid), 2);
  for (const auto* v : {&from0, &from1}) {
    const auto it = std::min_element(v->begin(), v->end());
    EXPECT_GE(*it, 0.9);
    // the truncated Stokes edge already tilts the frame by ~1e-4 at t = 0
    EXPECT_GT(v->front(), 0.999);
    // one dip, in the middle of the protocol
    EXPECT_EQ(dips_below(*v, 1.0 - 0.5 * (1.0 - *it)), 1);
    const double t_min = grid[static_cast<std::size_t>(it - v->begin())];
    EXPECT_GT(t_min, 260.0 / 3.0);
    EXPECT_LT(t_min, 2.0 * 260.0 / 3.0);
  }
}

TEST(Overlaps, HalfPiGateSplitsBetweenDarkAndMinus) {
  const StirapProtocol p = detuned_preset(GateKind::half_pi).with_amplitude(kHalfPiAmplitude);
  const auto tr = eigenbasis_overlap_trace(p.system(), ket(Level::zero), protocol_grid(p, 521));
  const auto& last = tr.overlaps.back();
  EXPECT_LT(last[0], 0.01);
  EXPECT_GT(last[1], 0.3);
  EXPECT_GT(last[2], 0.3);
}

TEST(Resonant, ClosedTransferGrowsWithDuration) {
  std::vector<double> p1;
  for (double scale : {0.25, 0.5, 1.0}) {
    StirapProtocol p = closed(resonant_stirap_preset());
    p.duration_ns *= scale;
    p.sigma_ns *= scale;
    p.offset_ns *= scale;
    p1.push_back(std::norm(protocol_unitary(p)(2, 0)));
  }
  EXPECT_LT(p1[0], p1[1]);
  EXPECT_LT(p1[1], p1[2]);
  EXPECT_GT(p1[2], 0.99);
}

TEST(Grid, LinspaceEndpoints) {
  const auto g = linspace(0.0, 1.0, 11);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_TRUE(linspace(0.0, 1.0, 0).empty());
}
