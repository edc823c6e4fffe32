// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "natomsim/circuit.hpp"
#include "natomsim/compiler.hpp"

namespace natomsim {

// Inputs to the quasi-static dephasing model.
struct CoherenceInputs {
    double sigma_b_t = 2.0e-6;       // magnetic noise std (Tesla)
    double bias_field_t = 1.6e-3;    // bias field B0 (Tesla)
    double atom_temperature_k = 5e-6;
    double eta = -0.00079;           // differential trap light shift parameter
    double nu_clock_hz = 9192631770.0;
};

struct CoherenceTimes {
    double t2_magnetic_s = 0;
    double t2_motion_s = 0;
    double t2_star_s = 0;
};

// T2* = T2B T2m / sqrt(T2B^2 + T2m^2), with the Gaussian magnetic and
// semi-classical motional dephasing times.
CoherenceTimes coherence_model(const CoherenceInputs& in);

// Rabi amplitude factor exp(-theta0^2 sigma_rel^2 / 2) from shot-to-shot
// intensity noise.
double intensity_dephasing(double theta0_rad, double sigma_rel);

// Scattering probability per pi pulse: (1/2) * 2 pi / (delta * tau_7p).
double scattering_error(double delta_rad_s, double tau_7p_s);

struct ErrorBudget {
    double epsilon_total = 0;
    double f_tau = 0; // (1/e) / (2 epsilon_total); +inf for a zero budget
};
ErrorBudget error_budget(const std::vector<double>& components);

struct NoiseParams {
    double readout_loss = 0.015;          // per-atom loss during readout
    double pumping_error = 0.0025;        // per-atom optical pumping failure
    double t2_star_s = 3.5e-3;            // quasi-static collective dephasing
    double sigma_rel_intensity = 0.0045;  // sigma_I / I0 of the 459 beam
    double cz_depolarizing = 0.058;       // two-qubit depolarizing per Cz (calibrated to F_Bell = 0.927)
    std::vector<double> qubit_freq_offsets_hz; // static per-site shifts, by circuit qubit
    double scattering_per_rz_pi = 0.0042; // 7p scattering per pi of Rz area
    // Blowaway readout bias: lost atoms read dark ('1'). Disable to model an
    // unbiased readout where a lost atom yields a fair coin.
    bool loss_reads_dark = true;

    void validate() const;
};

// One stochastic execution of a compiled circuit. Lost atoms (pumping or
// readout loss) read dark, reported as '1'. Reproducible: the bitstring is a
// pure function of (circuit, params, timing, noise_scale, seed, shot_index).
// An empty initial label means |0...0>.
std::string noisy_shot(const NativeCircuit& circuit, const NoiseParams& params,
                       const TimingConfig& timing, double noise_scale, std::uint64_t seed,
                       std::uint64_t shot_index, const std::string& initial_label = "");

struct SpamCorrected {
    double corrected = 0;
    bool clamped = false;
    // Two-qubit process-model bound: SPAM contributes an error in
    // [process_error_lo, process_error_hi], giving the corrected interval.
    bool has_process_bounds = false;
    double process_error_lo = 0;
    double process_error_hi = 0;
    double corrected_lo = 0;
    double corrected_hi = 0;
};

// corrected = raw / (1 - per_qubit)^n; process bounds reported for n = 2
// when requested.
SpamCorrected spam_correct(double raw_fidelity, int n_qubits, double per_qubit,
                           bool with_process_model = false);

// Collective-dephasing prediction for GHZ coherence time: t2_single / n.
double ghz_coherence_scaling(int n, double t2_single_s);

enum class DephasingKind { Collective, Independent };

// Monte-Carlo GHZ Ramsey: parity-scan contrast versus hold time under
// quasi-static Gaussian frequency noise; returns the 1/e coherence time.
double mc_ghz_coherence_time(int n, double t2_single_s, DephasingKind kind, int draws,
                             std::uint64_t seed);

} // namespace natomsim
