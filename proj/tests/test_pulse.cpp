// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>

#include "natomsim/constants.hpp"
#include "natomsim/pulse.hpp"

using namespace natomsim;
using constants::pi;
using constants::two_pi;

namespace {

PulseState basis_state(int idx) {
    PulseState psi{};
    psi[static_cast<std::size_t>(idx)] = 1.0;
    return psi;
}

constexpr int kIdx01 = 1;
constexpr int kIdx11 = 4;
constexpr int kIdx0r = 2;

double norm_sq(const PulseState& psi) {
    double s = 0;
    for (const auto& a : psi) s += std::norm(a);
    return s;
}

} // namespace

TEST_CASE("evolve_pulse with no drive leaves computational states unchanged") {
    RydbergParams p;
    p.omega_r = 0.0;
    p.blockade_b = two_pi * 3e6;
    p.delta = -two_pi * 0.4e6;
    p.tau = 1e-6;
    for (int idx : {0, kIdx01, 3, kIdx11}) {
        const PulseState out = evolve_pulse(basis_state(idx), p);
        CHECK(std::abs(out[static_cast<std::size_t>(idx)] - std::complex<double>{1, 0}) < 1e-9);
    }
}

TEST_CASE("resonant full cycle returns |11> exactly") {
    RydbergParams p;
    p.omega_r = two_pi * 1.7e6;
    p.blockade_b = 0.0;
    p.delta = 0.0;
    p.tau = two_pi / p.omega_r; // each atom completes a 2 pi Rabi cycle
    const PulseState out = evolve_pulse(basis_state(kIdx11), p);
    CHECK(std::norm(out[kIdx11]) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::abs(norm_sq(out) - 1.0) < 1e-8);
}

TEST_CASE("detuned single atom oscillates at the generalized Rabi frequency") {
    RydbergParams p;
    p.omega_r = two_pi * 1.7e6;
    p.blockade_b = 0.0;
    p.delta = -two_pi * 0.9e6;
    const double op = p.detuned_rabi();
    for (double frac : {0.2, 0.5, 0.8, 1.3}) {
        p.tau = frac * two_pi / op;
        const PulseState out = evolve_pulse(basis_state(kIdx01), p);
        const double pr_expected =
            (p.omega_r * p.omega_r / (op * op)) * std::pow(std::sin(op * p.tau / 2.0), 2);
        CHECK(std::norm(out[kIdx0r]) == doctest::Approx(pr_expected).epsilon(1e-6));
    }
}

TEST_CASE("RK4 convergence: halving the step cuts the error by 4x or more") {
    RydbergParams p;
    p.omega_r = two_pi * 1.7e6;
    p.blockade_b = 0.0;
    p.delta = 0.0;
    p.tau = 0.37 * two_pi / p.omega_r;
    const double exact_p1 = std::pow(std::cos(p.omega_r * p.tau / 2.0), 2);

    double prev_err = -1.0;
    for (long steps : {24L, 48L, 96L}) {
        const PulseState out = evolve_pulse_fixed_steps(basis_state(kIdx01), p, steps);
        const double err = std::fabs(std::norm(out[kIdx01]) - exact_p1);
        if (prev_err > 0.0) CHECK(prev_err / err >= 4.0);
        prev_err = err;
    }
}

TEST_CASE("norm drift stays within tolerance over a pulse") {
    RydbergParams p;
    p.omega_r = two_pi * 1.7e6;
    p.blockade_b = two_pi * 3e6;
    p.delta = -0.25 * p.omega_r;
    p.tau = two_pi / std::sqrt(2 * p.omega_r * p.omega_r + p.delta * p.delta);
    const PulseState out = evolve_pulse(basis_state(kIdx11), p);
    CHECK(std::fabs(norm_sq(out) - 1.0) < 1e-8);
}

TEST_CASE("cz_phases: exchange symmetry and the RK4 route agree with the propagator") {
    RydbergParams p;
    p.omega_r = two_pi * 1.7e6;
    p.blockade_b = two_pi * 3e6;
    p.delta = -0.25 * p.omega_r;
    p.tau = two_pi / std::sqrt(2 * p.omega_r * p.omega_r + p.delta * p.delta);
    p.xi = 2.1;

    const GatePhases exact = cz_phases(p);
    CHECK(exact.phi01 == doctest::Approx(exact.phi10).epsilon(1e-9));
    CHECK(exact.return01 == doctest::Approx(exact.return10).epsilon(1e-9));

    const GatePhases rk4 = cz_phases_rk4(p);
    CHECK(rk4.phi01 == doctest::Approx(exact.phi01).epsilon(1e-6));
    CHECK(rk4.phi11 == doctest::Approx(exact.phi11).epsilon(1e-6));
    CHECK(rk4.return11 == doctest::Approx(exact.return11).epsilon(1e-6));
}

TEST_CASE("tune_cz reproduces the published weak-blockade detuning") {
    const double omega = two_pi * 1.7e6;
    const TuneReport report = tune_cz_report(omega, two_pi * 3e6);
    CHECK(report.gate.pulse.delta / omega == doctest::Approx(-0.250).epsilon(0.005 / 0.250));
    CHECK(std::fabs(report.phases.phase_defect) < 0.05);
    CHECK(report.phases.return01 >= 0.99);
    CHECK(report.phases.return10 >= 0.99);
    CHECK(report.phases.return11 >= 0.99);
}

TEST_CASE("tune_cz reproduces the published strong-blockade detuning") {
    const double omega = two_pi * 1.7e6;
    const TuneReport report = tune_cz_report(omega, two_pi * 1.03e9);
    CHECK(report.gate.pulse.delta / omega == doctest::Approx(-0.377).epsilon(0.008 / 0.377));
    CHECK(std::fabs(report.phases.phase_defect) < 0.05);
    // deep in the blockade limit the returns are essentially perfect
    CHECK(report.phases.return01 >= 0.999);
    CHECK(report.phases.return10 >= 0.999);
    CHECK(report.phases.return11 >= 0.999);
}

TEST_CASE("the phase condition holds at exactly the published detuning") {
    const double omega = two_pi * 1.7e6;
    // 59 points over [-0.6, -0.02] puts a row at delta/omega = -0.250 exactly
    const auto rows = tune_cz_scan(omega, two_pi * 3e6, 59);
    const auto& row = rows[35];
    REQUIRE(row.delta_over_omega == doctest::Approx(-0.250).epsilon(1e-9));
    const double defect =
        std::min(std::fabs(row.phase_sum - pi), std::fabs(row.phase_sum + pi));
    CHECK(defect < 0.05);
    CHECK(row.return11 >= 0.99);
}

TEST_CASE("blockade-limit tuning becomes independent of B") {
    const double omega = two_pi * 1.0e6;
    double prev = 0.0;
    bool first = true;
    for (double ratio : {300.0, 1000.0, 3000.0}) {
        const TunedGate gate = tune_cz(omega, ratio * omega);
        const double d = gate.pulse.delta / omega;
        if (!first) CHECK(std::fabs(d - prev) < 1e-3);
        prev = d;
        first = false;
    }
}

TEST_CASE("pulse_gate_unitary approaches the canonical C_Z at strong blockade") {
    const double omega = two_pi * 1.7e6;
    const TunedGate gate = tune_cz(omega, two_pi * 1.03e9);
    const PulseGateResult result = pulse_gate_unitary(gate);
    CHECK(distance_to_cz(result.matrix) < 1e-3);
    CHECK(result.leakage < 1e-3);

    // zeroing the compensation grows the distance by ~|phi01| + |phi10|
    TunedGate uncomp = gate;
    uncomp.comp_phase_a = 0.0;
    uncomp.comp_phase_b = 0.0;
    const PulseGateResult raw = pulse_gate_unitary(uncomp);
    const double phi_mag = std::fabs(gate.comp_phase_a) + std::fabs(gate.comp_phase_b);
    if (phi_mag > 0.1) CHECK(distance_to_cz(raw.matrix) > distance_to_cz(result.matrix) + 0.25 * phi_mag);
}

TEST_CASE("Rabi asymmetry splits the single-atom phases; compensation restores the gate") {
    const double omega = two_pi * 1.7e6;
    const TunedGate base = tune_cz(omega, two_pi * 1.03e9);

    RydbergParams skew = base.pulse;
    skew.omega_asymmetry = 0.05; // 5% Rabi mismatch between the two atoms
    const GatePhases ph = cz_phases(skew);
    CHECK(std::fabs(ph.phi01 - ph.phi10) > 1e-3);

    TunedGate comp;
    comp.pulse = skew;
    comp.comp_phase_a = -ph.phi10;
    comp.comp_phase_b = -ph.phi01;
    const PulseGateResult fixed = pulse_gate_unitary(comp);
    // per-site compensation restores the phase condition to the symmetric level
    const double defect = std::remainder(ph.phi11 - ph.phi01 - ph.phi10 - pi, two_pi);
    CHECK(std::fabs(defect) < 0.12);
    CHECK(std::abs(std::arg(fixed.matrix[1][1])) < 1e-9);
    CHECK(std::abs(std::arg(fixed.matrix[2][2])) < 1e-9);
}

TEST_CASE("bell_test scores the canonical gates") {
    const BellTestResult perfect = bell_test(cz_matrix());
    CHECK(std::fabs(perfect.fidelity - 1.0) < 1e-9);
    CHECK(perfect.p00 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(perfect.p11 == doctest::Approx(0.5).epsilon(1e-9));

    Mat4 eye{};
    for (int i = 0; i < 4; ++i) eye[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    const BellTestResult idle = bell_test(eye);
    CHECK(idle.fidelity == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("bell_test of the tuned pulse gates") {
    const double omega = two_pi * 1.7e6;
    CHECK(bell_test(tune_cz(omega, two_pi * 1.03e9)).fidelity >= 0.995);
    CHECK(bell_test(tune_cz(omega, two_pi * 3e6)).fidelity >= 0.995);
}

TEST_CASE("tune_cz_scan emits monotone detuning rows with tuned returns") {
    const double omega = two_pi * 1.7e6;
    const auto rows = tune_cz_scan(omega, two_pi * 3e6, 8);
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].return01 == doctest::Approx(1.0).epsilon(1e-6));
        if (i > 0) CHECK(rows[i].delta_over_omega > rows[i - 1].delta_over_omega);
    }
}
