// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "natomsim/compiler.hpp"
#include "natomsim/constants.hpp"
#include "natomsim/qsim.hpp"
#include "natomsim/rng.hpp"
#include "oracle.hpp"

using namespace natomsim;
using constants::pi;
using constants::two_pi;

namespace {

Layout row_layout(int n) {
    Layout l;
    for (int q = 0; q < n; ++q) l.push_back({0, q});
    return l;
}

NativeCircuit ops_to_circuit(const Layout& layout, std::vector<NativeOp> ops) {
    NativeCircuit c;
    c.sites = layout;
    c.ops = std::move(ops);
    return c;
}

} // namespace

TEST_CASE("synth_local_rot matches the target rotation and leaves others alone") {
    const Layout layout = row_layout(3);
    Rng rng(5);

    // X on q0: R_0(pi)
    {
        const auto ops = synth_local_rot(layout, 0, 0.0, pi);
        CHECK(ops.size() == 3);
        const oracle::Mat u = oracle::native_unitary(ops_to_circuit(layout, ops));
        Eigen::Matrix2cd x;
        x << 0, 1, 1, 0;
        CHECK(oracle::phase_distance(u, oracle::embed_1q(3, 0, x)) < 1e-10);
    }
    // theta = 0 composes to identity
    {
        const auto ops = synth_local_rot(layout, 1, 1.234, 0.0);
        const oracle::Mat u = oracle::native_unitary(ops_to_circuit(layout, ops));
        CHECK(oracle::phase_distance(u, oracle::Mat::Identity(8, 8)) < 1e-10);
    }
    // random targets
    for (int trial = 0; trial < 25; ++trial) {
        const int q = static_cast<int>(rng.below(3));
        const double phi = rng.uniform() * two_pi;
        const double theta = (rng.uniform() - 0.5) * two_pi;
        const auto ops = synth_local_rot(layout, q, phi, theta);
        const oracle::Mat u = oracle::native_unitary(ops_to_circuit(layout, ops));
        CHECK(oracle::phase_distance(u, oracle::embed_1q(3, q, oracle::rot2(phi, theta))) < 1e-10);
    }
}

TEST_CASE("stacked syntheses share global pulses after cancellation") {
    const Layout layout = row_layout(2);
    auto ops = synth_local_rot(layout, 0, 0.3, 1.1);
    const auto second = synth_local_rot(layout, 1, 0.3, -0.4);
    ops.insert(ops.end(), second.begin(), second.end());

    const oracle::Mat before = oracle::native_unitary(ops_to_circuit(layout, ops));
    const auto merged = cancel_inverse_pairs(ops);
    CHECK(merged.size() == 4); // GR, RZ, RZ, GR
    const oracle::Mat after = oracle::native_unitary(ops_to_circuit(layout, merged));
    CHECK(oracle::phase_distance(before, after) < 1e-10);
}

TEST_CASE("decompose_cnot equals the canonical CNOT") {
    const Layout layout = row_layout(2);
    const auto ops = decompose_cnot(layout, 0, 1);
    const NativeCircuit c = ops_to_circuit(layout, ops);
    const oracle::Mat u = oracle::native_unitary(c);
    CHECK(oracle::phase_distance(u, oracle::embed_2q(2, 0, 1, oracle::cnot4())) < 1e-9);

    // truth table through the simulator
    const std::pair<std::string, std::string> table[] = {
        {"00", "00"}, {"01", "01"}, {"10", "11"}, {"11", "10"}};
    for (const auto& [in, out] : table) {
        const StateVector psi = run_circuit(c, in);
        CHECK(std::norm(psi.amps[bits_to_index(out)]) == doctest::Approx(1.0).epsilon(1e-9));
    }

    // Bell state from (|0>+|1>)|0>
    StateVector psi = init_state(2, "00");
    apply_rot_on_qubit(psi, 0, pi / 2.0, pi / 2.0);
    for (const auto& op : c.ops) apply_native(psi, op, c);
    const ProbDist d = probabilities(psi);
    CHECK(d.probs[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(d.probs[3] == doctest::Approx(0.5).epsilon(1e-9));

    CHECK_THROWS_AS(decompose_cnot(layout, 1, 1), std::invalid_argument);
}

TEST_CASE("decompose_zz matches exp(-i gamma/2 ZZ)") {
    const Layout layout = row_layout(2);
    Rng rng(9);

    // gamma = 0 -> identity
    {
        const oracle::Mat u = oracle::native_unitary(ops_to_circuit(layout, decompose_zz(layout, 0, 1, 0.0)));
        CHECK(oracle::phase_distance(u, oracle::Mat::Identity(4, 4)) < 1e-9);
    }
    // gamma = pi/2 is the C_Z equivalence point: ZZ(pi/2) . Rz(-pi/2)^2 = CZ up to phase.
    // (ZZ(pi) itself is -i Z(x)Z, i.e. local-Z-equivalent to identity.)
    {
        AbstractProgram prog;
        prog.n_qubits = 2;
        prog.gates = {ag::Zz{0, 1, pi / 2.0}, ag::Rz{0, -pi / 2.0}, ag::Rz{1, -pi / 2.0}};
        const oracle::Mat u = oracle::abstract_unitary(prog);
        CHECK(oracle::phase_distance(u, oracle::embed_2q(2, 0, 1, oracle::cz4())) < 1e-9);

        AbstractProgram zzpi;
        zzpi.n_qubits = 2;
        zzpi.gates = {ag::Zz{0, 1, pi}, ag::Rz{0, pi}, ag::Rz{1, pi}};
        CHECK(oracle::phase_distance(oracle::abstract_unitary(zzpi), oracle::Mat::Identity(4, 4)) <
              1e-9);
    }
    for (int trial = 0; trial < 20; ++trial) {
        const double gamma = (rng.uniform() - 0.5) * 2 * two_pi;
        const oracle::Mat u =
            oracle::native_unitary(ops_to_circuit(layout, decompose_zz(layout, 0, 1, gamma)));
        CHECK(oracle::phase_distance(u, oracle::embed_2q(2, 0, 1, oracle::zz4(gamma))) < 1e-9);
    }
}

TEST_CASE("compile: Bell preparation and connectivity errors") {
    AbstractProgram prog;
    prog.n_qubits = 2;
    prog.gates = {ag::H{0}, ag::Cnot{0, 1}};

    const NativeCircuit c = compile(prog, row_layout(2));
    const StateVector psi = run_circuit(c);
    const ProbDist d = probabilities(psi);
    CHECK(d.probs[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(d.probs[3] == doctest::Approx(0.5).epsilon(1e-9));

    const Layout diagonal = {{0, 0}, {1, 1}};
    try {
        compile(prog, diagonal);
        FAIL("expected connectivity error");
    } catch (const ConnectivityError& e) {
        CHECK(e.qubit_a == 0);
        CHECK(e.qubit_b == 1);
        CHECK(std::string(e.what()).find("(0,0)") != std::string::npos);
        CHECK(std::string(e.what()).find("(1,1)") != std::string::npos);
    }
}

TEST_CASE("compile preserves the program unitary on random <=4 qubit programs") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(3));
        AbstractProgram prog;
        prog.n_qubits = n;
        const int n_gates = 2 + static_cast<int>(rng.below(7));
        for (int g = 0; g < n_gates; ++g) {
            const int q = static_cast<int>(rng.below(n));
            int q2 = static_cast<int>(rng.below(n));
            while (q2 == q) q2 = static_cast<int>(rng.below(n));
            switch (rng.below(8)) {
                case 0: prog.gates.emplace_back(ag::H{q}); break;
                case 1: prog.gates.emplace_back(ag::X{q}); break;
                case 2: prog.gates.emplace_back(ag::Rz{q, rng.uniform() * 7 - 3}); break;
                case 3:
                    prog.gates.emplace_back(ag::Rphi{q, rng.uniform() * two_pi, rng.uniform() * 7 - 3});
                    break;
                case 4: prog.gates.emplace_back(ag::Cnot{q, q2}); break;
                case 5: prog.gates.emplace_back(ag::Cz{q, q2}); break;
                case 6: prog.gates.emplace_back(ag::Zz{q, q2, rng.uniform() * 7 - 3}); break;
                default: prog.gates.emplace_back(ag::CPhase{q, q2, rng.uniform() * 7 - 3}); break;
            }
        }
        if (rng.below(2) == 0) {
            prog.gates.emplace_back(ag::Swap{0, n - 1});
            prog.gates.emplace_back(ag::Global{rng.uniform() * two_pi, rng.uniform() * 4 - 2});
        }
        const NativeCircuit c = compile(prog, row_layout(n));
        CHECK(oracle::phase_distance(oracle::native_unitary(c), oracle::abstract_unitary(prog)) <
              1e-9);
    }
}

TEST_CASE("cancellation pass never changes the unitary or grows the circuit") {
    Rng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(2));
        AbstractProgram prog;
        prog.n_qubits = n;
        for (int g = 0; g < 6; ++g) {
            const int q = static_cast<int>(rng.below(n));
            prog.gates.emplace_back(ag::Rphi{q, 0.25 * static_cast<double>(rng.below(4)) * two_pi,
                                             rng.uniform() * 4 - 2});
        }
        const NativeCircuit raw = compile(prog, row_layout(n), /*run_cancellation=*/false);
        NativeCircuit cooked = raw;
        cooked.ops = cancel_inverse_pairs(raw.ops);
        CHECK(cooked.ops.size() <= raw.ops.size());
        CHECK(oracle::phase_distance(oracle::native_unitary(cooked), oracle::native_unitary(raw)) <
              1e-10);
    }
}

TEST_CASE("every emitted Cz satisfies the row-or-column predicate") {
    AbstractProgram prog;
    prog.n_qubits = 4;
    prog.gates = {ag::Cnot{0, 1}, ag::Cz{0, 2}, ag::Zz{0, 3, 0.7}, ag::CPhase{2, 3, 1.1}};
    const Layout cross = {{3, 3}, {0, 3}, {3, 0}, {3, 6}};
    const NativeCircuit c = compile(prog, cross);
    for (const auto& op : c.ops) {
        if (const auto* cz = std::get_if<Cz>(&op)) {
            CHECK(shares_row_or_col(cz->site_a, cz->site_b));
        }
    }
}

TEST_CASE("estimate_duration: pulses plus latency") {
    TimingConfig timing; // 76.5 kHz, 600 kHz, 1 us Cz, 1 us latency
    NativeCircuit empty;
    empty.sites = row_layout(2);
    CHECK(estimate_duration(empty, timing) == 0.0);

    NativeCircuit pulse = empty;
    pulse.ops.emplace_back(GlobalRot{0.0, pi});
    // pi/(2 pi * 76.5 kHz) = 6.536 us plus 1 us latency
    CHECK(estimate_duration(pulse, timing) ==
          doctest::Approx(pi / (two_pi * 76.5e3) + 1e-6).epsilon(1e-9));
    CHECK(pi / (two_pi * 76.5e3) == doctest::Approx(6.536e-6).epsilon(1e-3));

    // negative angles take the short way round
    NativeCircuit neg = empty;
    neg.ops.emplace_back(LocalRz{{0, 0}, -pi / 2});
    CHECK(estimate_duration(neg, timing) ==
          doctest::Approx((pi / 2) / (two_pi * 600e3) + 1e-6).epsilon(1e-9));

    AbstractProgram bell;
    bell.n_qubits = 2;
    bell.gates = {ag::H{0}, ag::Cnot{0, 1}};
    const double t = estimate_duration(compile(bell, row_layout(2)), timing);
    CHECK(t > 20e-6);  // within a factor of 2 of the 40 us hardware time
    CHECK(t < 80e-6);
}
