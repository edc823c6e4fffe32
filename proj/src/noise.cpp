// SPDX-License-Identifier: Apache-2.0
#include "natomsim/noise.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "natomsim/constants.hpp"
#include "natomsim/qsim.hpp"
#include "natomsim/rng.hpp"

namespace natomsim {

using constants::hbar;
using constants::k_boltzmann;
using constants::mu_bohr;
using constants::pi;
using constants::two_pi;

CoherenceTimes coherence_model(const CoherenceInputs& in) {
    if (in.sigma_b_t <= 0 || in.bias_field_t <= 0 || in.atom_temperature_k <= 0 ||
        in.nu_clock_hz <= 0 || in.eta == 0.0) {
        throw std::invalid_argument("coherence inputs must be nonzero and positive where required");
    }
    CoherenceTimes out;
    out.t2_magnetic_s = std::sqrt(2.0) * pi * pi * hbar * hbar * in.nu_clock_hz /
                        (mu_bohr * mu_bohr * in.bias_field_t * in.sigma_b_t);
    out.t2_motion_s =
        1.947 * hbar / (k_boltzmann * in.atom_temperature_k * std::fabs(in.eta));
    const double tb = out.t2_magnetic_s;
    const double tm = out.t2_motion_s;
    out.t2_star_s = tb * tm / std::sqrt(tb * tb + tm * tm);
    return out;
}

double intensity_dephasing(double theta0_rad, double sigma_rel) {
    if (sigma_rel < 0) throw std::invalid_argument("sigma_rel must be nonnegative");
    return std::exp(-theta0_rad * theta0_rad * sigma_rel * sigma_rel / 2.0);
}

double scattering_error(double delta_rad_s, double tau_7p_s) {
    if (delta_rad_s <= 0 || tau_7p_s <= 0) {
        throw std::invalid_argument("detuning and lifetime must be positive");
    }
    const double eps = 0.5 * two_pi / (delta_rad_s * tau_7p_s);
    if (eps >= 1.0) {
        throw std::domain_error("detuning too small: scattering formula exceeds unit probability");
    }
    return eps;
}

ErrorBudget error_budget(const std::vector<double>& components) {
    double sum_sq = 0.0;
    for (double c : components) {
        if (c < 0.0 || c >= 1.0) throw std::invalid_argument("error components must be in [0,1)");
        sum_sq += c * c;
    }
    ErrorBudget b;
    b.epsilon_total = std::sqrt(sum_sq);
    b.f_tau = b.epsilon_total > 0.0 ? (1.0 / std::exp(1.0)) / (2.0 * b.epsilon_total)
                                    : std::numeric_limits<double>::infinity();
    return b;
}

void NoiseParams::validate() const {
    auto check01 = [](double p, const char* name) {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument(std::string(name) + " must be in [0,1]");
    };
    check01(readout_loss, "readout_loss");
    check01(pumping_error, "pumping_error");
    check01(cz_depolarizing, "cz_depolarizing");
    check01(scattering_per_rz_pi, "scattering_per_rz_pi");
    if (t2_star_s < 0 || sigma_rel_intensity < 0) {
        throw std::invalid_argument("t2_star and sigma_rel_intensity must be nonnegative");
    }
}

namespace {

// Collapse one qubit in the Z basis; returns the outcome bit.
int project_qubit(StateVector& psi, int qubit, double u) {
    const std::uint64_t mask = std::uint64_t{1} << (psi.n_qubits - 1 - qubit);
    double p1 = 0.0;
    for (std::size_t i = 0; i < psi.amps.size(); ++i) {
        if (i & mask) p1 += std::norm(psi.amps[i]);
    }
    const double total = psi.norm_sq();
    const int outcome = (u * total < p1) ? 1 : 0;
    double kept = 0.0;
    for (std::size_t i = 0; i < psi.amps.size(); ++i) {
        const bool bit = (i & mask) != 0;
        if (bit != (outcome == 1)) {
            psi.amps[i] = 0.0;
        } else {
            kept += std::norm(psi.amps[i]);
        }
    }
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& a : psi.amps) a *= scale;
    return outcome;
}

double fold_pi_fraction(double theta) {
    return std::fabs(theta) / pi;
}

} // namespace

std::string noisy_shot(const NativeCircuit& circuit, const NoiseParams& params,
                       const TimingConfig& timing, double noise_scale, std::uint64_t seed,
                       std::uint64_t shot_index, const std::string& initial_label) {
    params.validate();
    timing.validate();
    if (noise_scale < 0) throw std::invalid_argument("noise_scale must be nonnegative");

    const int n = static_cast<int>(circuit.n_qubits());
    Rng rng(seed, shot_index);

    StateVector psi = init_state(
        n, initial_label.empty() ? std::string(static_cast<std::size_t>(n), '0') : initial_label);
    psi.lost.assign(static_cast<std::size_t>(n), 0);

    for (int q = 0; q < n; ++q) {
        if (rng.uniform() < params.pumping_error * noise_scale) {
            psi.lost[static_cast<std::size_t>(q)] = 1;
        }
    }

    // One quasi-static collective frequency per shot; Ramsey contrast
    // exp(-(t/T2*)^2) corresponds to sigma_omega = sqrt(2)/T2*.
    const double sigma_omega =
        params.t2_star_s > 0.0 ? noise_scale * std::sqrt(2.0) / params.t2_star_s : 0.0;
    const double delta_omega = rng.gaussian() * sigma_omega;
    std::vector<double> omega_q(static_cast<std::size_t>(n), delta_omega);
    for (int q = 0; q < n && q < static_cast<int>(params.qubit_freq_offsets_hz.size()); ++q) {
        omega_q[static_cast<std::size_t>(q)] +=
            two_pi * params.qubit_freq_offsets_hz[static_cast<std::size_t>(q)] * noise_scale;
    }

    for (const auto& op : circuit.ops) {
        apply_native(psi, op, circuit);

        if (const auto* rz = std::get_if<LocalRz>(&op)) {
            const int q = static_cast<int>(circuit.site_index(rz->site));
            if (!psi.lost[static_cast<std::size_t>(q)]) {
                const double dtheta =
                    rng.gaussian() * std::fabs(rz->theta) * params.sigma_rel_intensity * noise_scale;
                if (dtheta != 0.0) apply_local_rz(psi, q, dtheta);
                const double p_scatter =
                    params.scattering_per_rz_pi * noise_scale * fold_pi_fraction(rz->theta);
                const double u = rng.uniform();
                if (u < p_scatter) project_qubit(psi, q, rng.uniform());
            }
        } else if (const auto* cz = std::get_if<Cz>(&op)) {
            const int qa = static_cast<int>(circuit.site_index(cz->site_a));
            const int qb = static_cast<int>(circuit.site_index(cz->site_b));
            if (!psi.lost[static_cast<std::size_t>(qa)] && !psi.lost[static_cast<std::size_t>(qb)]) {
                const double u = rng.uniform();
                if (u < params.cz_depolarizing * noise_scale) {
                    const std::uint64_t k = rng.below(16);
                    apply_pauli(psi, qa, static_cast<int>(k / 4));
                    apply_pauli(psi, qb, static_cast<int>(k % 4));
                }
            }
        }

        // Static frequency offsets and the collective shift accumulate over
        // the op's wall-clock slice (first-order Trotter of the offset term).
        if (!std::holds_alternative<MeasureAll>(op)) {
            const double dt = op_duration(op, timing) + timing.latency_s;
            for (int q = 0; q < n; ++q) {
                if (psi.lost[static_cast<std::size_t>(q)]) continue;
                const double phase = omega_q[static_cast<std::size_t>(q)] * dt;
                if (phase != 0.0) apply_local_rz(psi, q, phase);
            }
        }
    }

    // Readout: sample a basis state, then apply loss (dark = '1').
    const double u = rng.uniform() * psi.norm_sq();
    double acc = 0.0;
    std::size_t idx = psi.amps.size() - 1;
    for (std::size_t i = 0; i < psi.amps.size(); ++i) {
        acc += std::norm(psi.amps[i]);
        if (u < acc) {
            idx = i;
            break;
        }
    }
    std::string bits = index_to_bits(idx, n);
    for (int q = 0; q < n; ++q) {
        const bool lost = psi.lost[static_cast<std::size_t>(q)] ||
                          rng.uniform() < params.readout_loss * noise_scale;
        if (!lost) continue;
        if (params.loss_reads_dark) {
            bits[static_cast<std::size_t>(q)] = '1';
        } else {
            bits[static_cast<std::size_t>(q)] = rng.uniform() < 0.5 ? '1' : '0';
        }
    }
    return bits;
}

SpamCorrected spam_correct(double raw_fidelity, int n_qubits, double per_qubit,
                           bool with_process_model) {
    if (raw_fidelity < 0.0 || raw_fidelity > 1.0) {
        throw std::invalid_argument("raw fidelity must be in [0,1]");
    }
    if (per_qubit < 0.0 || per_qubit >= 1.0) {
        throw std::invalid_argument("per-qubit SPAM error must be in [0,1)");
    }
    if (n_qubits < 1) throw std::invalid_argument("n_qubits must be positive");

    SpamCorrected out;
    out.corrected = raw_fidelity / std::pow(1.0 - per_qubit, n_qubits);
    if (out.corrected > 1.0) {
        out.corrected = 1.0;
        out.clamped = true;
    }
    if (with_process_model) {
        if (n_qubits != 2) {
            throw std::invalid_argument("process-model SPAM bounds are defined for the 2-qubit case");
        }
        out.has_process_bounds = true;
        out.process_error_lo = 0.022;
        out.process_error_hi = 0.031;
        out.corrected_lo = std::min(1.0, raw_fidelity + out.process_error_lo);
        out.corrected_hi = std::min(1.0, raw_fidelity + out.process_error_hi);
    }
    return out;
}

double ghz_coherence_scaling(int n, double t2_single_s) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (t2_single_s <= 0) throw std::invalid_argument("t2 must be positive");
    return t2_single_s / n;
}

double mc_ghz_coherence_time(int n, double t2_single_s, DephasingKind kind, int draws,
                             std::uint64_t seed) {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("n out of range");
    if (t2_single_s <= 0 || draws < 1) throw std::invalid_argument("invalid t2 or draw count");

    const double sigma = std::sqrt(2.0) / t2_single_s;
    const double t_expected =
        kind == DephasingKind::Collective ? t2_single_s / n : t2_single_s / std::sqrt(double(n));
    const int n_time = 10;
    const int n_phase = 4 * n + 1;
    const std::size_t dim = std::size_t{1} << n;

    std::vector<double> contrast(n_time);
    std::vector<double> times(n_time);
    for (int it = 0; it < n_time; ++it) {
        const double t = (0.3 + 0.14 * it) * t_expected;
        times[it] = t;

        std::vector<double> parity_curve(static_cast<std::size_t>(n_phase), 0.0);
        for (int d = 0; d < draws; ++d) {
            Rng rng(seed, static_cast<std::uint64_t>(it) * static_cast<std::uint64_t>(draws) +
                              static_cast<std::uint64_t>(d));
            double phase = 0.0;
            if (kind == DephasingKind::Collective) {
                phase = n * rng.gaussian() * sigma * t;
            } else {
                for (int q = 0; q < n; ++q) phase += rng.gaussian() * sigma * t;
            }
            StateVector psi;
            psi.n_qubits = n;
            psi.amps.assign(dim, {0.0, 0.0});
            psi.amps[0] = 1.0 / std::sqrt(2.0);
            psi.amps[dim - 1] = std::exp(std::complex<double>{0.0, phase}) / std::sqrt(2.0);

            for (int k = 0; k < n_phase; ++k) {
                StateVector copy = psi;
                apply_global_rot(copy, two_pi * k / n_phase, -pi / 2.0);
                parity_curve[static_cast<std::size_t>(k)] += parity_expectation(probabilities(copy));
            }
        }
        std::complex<double> comp{0.0, 0.0};
        for (int k = 0; k < n_phase; ++k) {
            const double phi = two_pi * k / n_phase;
            comp += (parity_curve[static_cast<std::size_t>(k)] / draws) *
                    std::exp(std::complex<double>{0.0, -double(n) * phi});
        }
        contrast[it] = 2.0 * std::abs(comp) / n_phase;
    }

    // Interpolate the 1/e crossing on log-contrast.
    const double target = std::exp(-1.0);
    for (int it = 0; it < n_time; ++it) {
        if (contrast[it] < target) {
            if (it == 0) return times[0];
            const double c0 = std::log(std::max(contrast[it - 1], 1e-12));
            const double c1 = std::log(std::max(contrast[it], 1e-12));
            const double frac = (c0 - std::log(target)) / (c0 - c1);
            return times[it - 1] + frac * (times[it] - times[it - 1]);
        }
    }
    return times[n_time - 1]; // contrast never dropped below 1/e in the window
}

} // namespace natomsim
