// Calibrates the detuned pi and half-pi gates and prints what they do to |0> and |1>.

#include <cstdio>

#include "stirap/gates.hpp"

using namespace stirap;

int main() {
  const std::vector<double> pi_grid = linspace(0.0, 24.0, 61);
  const std::vector<double> half_grid = linspace(2.0, 16.0, 57);
  const std::vector<double> phase_grid = linspace(-pi, pi, 73);

  for (GateKind kind : {GateKind::pi, GateKind::half_pi}) {
    const StirapProtocol base = detuned_preset(kind);
    const CalibratedGate g =
        calibrate_gate(base, kind, kind == GateKind::pi ? pi_grid : half_grid, phase_grid);
    std::printf("%s gate: amplitude %.4f MHz", to_string(kind), g.protocol.amplitude_mhz);
    if (g.phase) std::printf(", axis phase %.4f rad", g.phase->optimal_phase_rad);
    std::printf("\n");
    for (Level init : {Level::zero, Level::one}) {
      const Matrix3c rho = final_density(g.protocol, init);
      const Vector3c target = gate_target(kind, init);
      std::printf("  from |%c>: P0 %.5f  Pg %.5f  P1 %.5f  overlap with target %.6f\n",
                  init == Level::zero ? '0' : '1', rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(),
                  (target.adjoint() * rho * target)(0, 0).real());
    }
  }
  return 0;
}
