// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <vector>

namespace natomsim {

// Two-pulse detuned C_Z protocol on two three-level atoms (|0>, |1>, |r>).
// H = sum_j (Omega_j/2)(e^{i xi}|1><r|_j + h.c.) - Delta sum_j |r><r|_j + B |rr><rr|.
// |0> is a spectator; only |1> <-> |r> is driven.
struct RydbergParams {
    double omega_r = 0;     // single-atom resonant Rabi frequency (rad/s)
    double blockade_b = 0;  // |rr> interaction shift (rad/s)
    double delta = 0;       // detuning (rad/s); enters as -Delta |r><r|
    double tau = 0;         // duration of each of the two pulses (s)
    double xi = 0;          // drive phase of the second pulse (rad)
    double omega_asymmetry = 0; // fractional Rabi mismatch: atom a gets (1+e/2), atom b (1-e/2)

    double detuned_rabi() const; // Omega' = sqrt(Omega_R^2 + Delta^2)
    void validate() const;
};

struct GatePhases {
    double phi01 = 0, phi10 = 0, phi11 = 0;          // phases of the returning amplitudes
    double return01 = 0, return10 = 0, return11 = 0; // return populations
    double leakage = 0;                              // max population left in Rydberg levels
    double phase_defect = 0; // distance of phi11-phi01-phi10 from the nearest odd pi
};

struct TunedGate {
    RydbergParams pulse;
    double comp_phase_a = 0; // local Rz on site a: -phi10
    double comp_phase_b = 0; // local Rz on site b: -phi01
};

struct TuneReport {
    TunedGate gate;
    GatePhases phases;
    double objective = 0; // return01*return10*return11 - (defect/pi)^2
};

// Two-atom product-basis state, index 3*level_a + level_b with levels
// {0, 1, r} = {0, 1, 2}.
using PulseState = std::array<std::complex<double>, 9>;

// Fixed-step RK4 for one pulse of duration tau at drive phase xi, with a
// step-doubling convergence check (final amplitudes stable to < 1e-7, norm
// drift < 1e-8). Throws on non-convergence.
PulseState evolve_pulse(const PulseState& psi, const RydbergParams& params);

// Single RK4 pass at an explicit step count (no convergence control); used
// for order-of-convergence diagnostics.
PulseState evolve_pulse_fixed_steps(const PulseState& psi, const RydbergParams& params,
                                    long steps);

// Runs the two-pulse sequence (xi = 0 then xi = params.xi) on |01>, |10>,
// |11> and reports return populations and accumulated phases. The pulses are
// piecewise-constant, so this uses an exact eigendecomposition propagator;
// cz_phases_rk4 is the integrator route for cross-checking.
GatePhases cz_phases(const RydbergParams& params);
GatePhases cz_phases_rk4(const RydbergParams& params);

// Tuning protocol: per detuning, tau is set by maximizing the one-pulse |11>
// return and xi by maximizing the two-pulse |10> return (closed form); the
// detuning is then selected on the objective
//   return01*return10*return11 - (defect/pi)^2,
// coarse grid over Delta/Omega in [-0.6, -0.02] plus golden-section
// refinement. Throws (with best-found parameters in the message) if return
// populations stay below 0.99.
TuneReport tune_cz_report(double omega_r, double blockade_b);
TunedGate tune_cz(double omega_r, double blockade_b);

struct TuneScanRow {
    double delta_over_omega = 0;
    double tau_omega_over_2pi = 0; // tau * Omega_R / 2pi
    double xi = 0;
    double phase_sum = 0; // phi11 - phi01 - phi10, wrapped to (-pi, pi]
    double return01 = 0, return10 = 0, return11 = 0;
    double f_bell = 0; // bell_test of the per-row compensated gate
};

// Detuning scan with per-point (tau, xi) tuning; feeds the tune-cz CSV.
std::vector<TuneScanRow> tune_cz_scan(double omega_r, double blockade_b, int n_points);

using Mat4 = std::array<std::array<std::complex<double>, 4>, 4>;

Mat4 cz_matrix();

struct PulseGateResult {
    Mat4 matrix;        // computational-subspace operator after compensation
    double leakage = 0; // max over basis inputs of population outside {0,1}x{0,1}
};

// Projects the two-pulse evolution onto the computational subspace (exactly
// diagonal: |0> populations are conserved per atom) and applies the
// compensation phases.
PulseGateResult pulse_gate_unitary(const TunedGate& gate);

// Frobenius distance min over global phase to canonical diag(1,1,1,-1).
double distance_to_cz(const Mat4& u);

struct BellTestResult {
    double p00 = 0;
    double p11 = 0;
    double parity_amplitude = 0; // C: twice the DFT magnitude at frequency 2
    double fidelity = 0;         // (P00 + P11 + C)/2
};

// Bell-state benchmark: GR(0,pi/2), local Rz(-pi/2) on both, the supplied
// gate, GR(0,-pi/2); populations from that circuit, parity from an appended
// analysis pulse GR(phi,-pi/2) scanned over a uniform phase grid.
BellTestResult bell_test(const Mat4& gate, int parity_points = 64);
BellTestResult bell_test(const TunedGate& gate, int parity_points = 64);

} // namespace natomsim
