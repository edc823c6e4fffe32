// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "natomsim/circuit.hpp"

namespace natomsim {

// Abstract circuit layer, lowered onto the native set by compile().
namespace ag {
struct H {
    int q;
};
struct X {
    int q;
};
struct Rz {
    int q;
    double theta;
};
struct Rphi {
    int q;
    double phi;
    double theta;
};
struct Cnot {
    int control;
    int target;
};
struct Cz {
    int a;
    int b;
};
// exp(-i(gamma/2) Z(a) Z(b))
struct Zz {
    int a;
    int b;
    double gamma;
};
// diag(1,1,1,e^{i lambda}); lowered to one native CZ when lambda = pi.
struct CPhase {
    int control;
    int target;
    double lambda;
};
struct Swap {
    int a;
    int b;
};
// One microwave pulse rotating every qubit: exp(-i(theta/2) sigma_phi) each.
struct Global {
    double phi;
    double theta;
};
} // namespace ag

using AbstractGate = std::variant<ag::H, ag::X, ag::Rz, ag::Rphi, ag::Cnot, ag::Cz, ag::Zz,
                                  ag::CPhase, ag::Swap, ag::Global>;

struct AbstractProgram {
    int n_qubits = 0;
    std::vector<AbstractGate> gates;
};

// Logical qubit i lives at site layout[i]. Two-qubit gates require the two
// sites to share a row or a column (AOD dual-site addressing constraint).
using Layout = std::vector<SiteCoord>;

struct TimingConfig {
    double microwave_rabi_hz = 76.5e3; // global rotation Rabi frequency
    double stark_shift_hz = 600e3;     // local Rz differential Stark shift
    double cz_duration_s = 1.0e-6;     // fixed per-CZ pulse block time
    double latency_s = 1.0e-6;         // inter-op latency

    void validate() const;
};

struct ConnectivityError : std::runtime_error {
    ConnectivityError(int qa, int qb, const SiteCoord& sa, const SiteCoord& sb);
    int qubit_a, qubit_b;
    SiteCoord site_a, site_b;
};

// Local R_phi(theta) on qubit q built from two global pulses and a local Rz:
//   R_phi(theta) = R^(G)_{phi+pi/2}(pi/2) Rz(theta) R^(G)_{phi+pi/2}(-pi/2)
// Acts as the target rotation on q and as identity on every other qubit.
std::vector<NativeOp> synth_local_rot(const Layout& layout, int q, double phi, double theta);

// CNOT = (I (x) H) Cz (I (x) H); H itself is synthesized natively as
// R_{pi/2}(pi/2) applied after Rz(pi) (equal to H up to a global phase).
std::vector<NativeOp> decompose_cnot(const Layout& layout, int control, int target);

// exp(-i(gamma/2) ZZ) = CNOT . Rz(target, gamma) . CNOT (exact).
std::vector<NativeOp> decompose_zz(const Layout& layout, int a, int b, double gamma);

// Peephole pass: removes exact-identity rotations and adjacent exact-inverse
// pairs (global/global, local Rz/Rz on one site, Cz/Cz on one pair), iterated
// to a fixpoint. Never reorders ops and never increases the op count.
std::vector<NativeOp> cancel_inverse_pairs(std::vector<NativeOp> ops);

NativeCircuit compile(const AbstractProgram& program, const Layout& layout,
                      bool run_cancellation = true);

// Pulse time of a single op (latency excluded; MeasureAll is 0). Rotation
// times use the shortest equivalent pulse area: t = fold(theta)/(2 pi f).
double op_duration(const NativeOp& op, const TimingConfig& timing);

// Sum of pulse durations plus one latency per gate op.
double estimate_duration(const NativeCircuit& circuit, const TimingConfig& timing);

} // namespace natomsim
