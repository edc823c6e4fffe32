// SPDX-License-Identifier: Apache-2.0
#include "natomsim/compiler.hpp"

#include <cmath>
#include <set>

#include "natomsim/constants.hpp"

namespace natomsim {

using constants::pi;
using constants::two_pi;

namespace {

constexpr double kAngleTol = 1e-12;

double wrap_mod(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    return r;
}

bool angles_equal_mod(double a, double b, double period) {
    const double d = wrap_mod(a - b, period);
    return d < kAngleTol || period - d < kAngleTol;
}

// A rotation by theta is physically the same pulse family as theta mod 4pi,
// and R_phi(-theta) = R_{phi+pi}(theta); the shortest equivalent pulse area
// is therefore min(m, 4pi - m) with m = |theta| mod 4pi.
double fold_pulse_area(double theta) {
    const double m = wrap_mod(std::fabs(theta), 2.0 * two_pi);
    return std::min(m, 2.0 * two_pi - m);
}

void check_qubit_index(int q, int n) {
    if (q < 0 || q >= n) throw std::invalid_argument("qubit index out of range");
}

const SiteCoord& site_of(const Layout& layout, int q) {
    check_qubit_index(q, static_cast<int>(layout.size()));
    return layout[static_cast<std::size_t>(q)];
}

void emit_rz(std::vector<NativeOp>& ops, const Layout& layout, int q, double theta) {
    ops.emplace_back(LocalRz{site_of(layout, q), theta});
}

void emit_synth(std::vector<NativeOp>& ops, const Layout& layout, int q, double phi, double theta) {
    const double axis = phi + pi / 2.0;
    ops.emplace_back(GlobalRot{axis, -pi / 2.0});
    emit_rz(ops, layout, q, theta);
    ops.emplace_back(GlobalRot{axis, pi / 2.0});
}

// H = e^{i pi/2} R_{pi/2}(pi/2) . Rz(pi)   (Rz applied first)
void emit_h(std::vector<NativeOp>& ops, const Layout& layout, int q) {
    emit_rz(ops, layout, q, pi);
    emit_synth(ops, layout, q, pi / 2.0, pi / 2.0);
}

void emit_cz(std::vector<NativeOp>& ops, const Layout& layout, int a, int b) {
    if (a == b) throw std::invalid_argument("two-qubit gate requires distinct qubits");
    const SiteCoord& sa = site_of(layout, a);
    const SiteCoord& sb = site_of(layout, b);
    if (!shares_row_or_col(sa, sb)) throw ConnectivityError(a, b, sa, sb);
    ops.emplace_back(Cz{sa, sb});
}

void emit_cnot(std::vector<NativeOp>& ops, const Layout& layout, int control, int target) {
    emit_h(ops, layout, target);
    emit_cz(ops, layout, control, target);
    emit_h(ops, layout, target);
}

void emit_zz(std::vector<NativeOp>& ops, const Layout& layout, int a, int b, double gamma) {
    emit_cnot(ops, layout, a, b);
    emit_rz(ops, layout, b, gamma);
    emit_cnot(ops, layout, a, b);
}

void emit_cphase(std::vector<NativeOp>& ops, const Layout& layout, int c, int t, double lambda) {
    const double lam = wrap_mod(lambda, two_pi);
    if (lam < kAngleTol || two_pi - lam < kAngleTol) return; // identity
    if (angles_equal_mod(lam, pi, two_pi)) {
        emit_cz(ops, layout, c, t); // CP(pi) is a native Cz
        return;
    }
    emit_rz(ops, layout, c, lambda / 2.0);
    emit_rz(ops, layout, t, lambda / 2.0);
    emit_zz(ops, layout, c, t, -lambda / 2.0);
}

void emit_swap(std::vector<NativeOp>& ops, const Layout& layout, int a, int b) {
    emit_cnot(ops, layout, a, b);
    emit_cnot(ops, layout, b, a);
    emit_cnot(ops, layout, a, b);
}

void emit_gate(std::vector<NativeOp>& ops, const Layout& layout, const AbstractGate& gate) {
    if (const auto* g = std::get_if<ag::H>(&gate)) {
        emit_h(ops, layout, g->q);
    } else if (const auto* g = std::get_if<ag::X>(&gate)) {
        emit_synth(ops, layout, g->q, 0.0, pi);
    } else if (const auto* g = std::get_if<ag::Rz>(&gate)) {
        emit_rz(ops, layout, g->q, g->theta);
    } else if (const auto* g = std::get_if<ag::Rphi>(&gate)) {
        emit_synth(ops, layout, g->q, g->phi, g->theta);
    } else if (const auto* g = std::get_if<ag::Cnot>(&gate)) {
        emit_cnot(ops, layout, g->control, g->target);
    } else if (const auto* g = std::get_if<ag::Cz>(&gate)) {
        emit_cz(ops, layout, g->a, g->b);
    } else if (const auto* g = std::get_if<ag::Zz>(&gate)) {
        emit_zz(ops, layout, g->a, g->b, g->gamma);
    } else if (const auto* g = std::get_if<ag::CPhase>(&gate)) {
        emit_cphase(ops, layout, g->control, g->target, g->lambda);
    } else if (const auto* g = std::get_if<ag::Swap>(&gate)) {
        emit_swap(ops, layout, g->a, g->b);
    } else if (const auto* g = std::get_if<ag::Global>(&gate)) {
        ops.emplace_back(GlobalRot{g->phi, g->theta});
    }
}

bool is_identity_op(const NativeOp& op) {
    if (const auto* g = std::get_if<GlobalRot>(&op)) return fold_pulse_area(g->theta) < kAngleTol;
    if (const auto* rz = std::get_if<LocalRz>(&op)) return fold_pulse_area(rz->theta) < kAngleTol;
    return false;
}

bool is_inverse_pair(const NativeOp& first, const NativeOp& second) {
    if (const auto* g1 = std::get_if<GlobalRot>(&first)) {
        const auto* g2 = std::get_if<GlobalRot>(&second);
        if (!g2) return false;
        const bool same_axis = angles_equal_mod(g1->phi, g2->phi, two_pi);
        const bool flip_axis = angles_equal_mod(g1->phi + pi, g2->phi, two_pi);
        if (same_axis && angles_equal_mod(g1->theta + g2->theta, 0.0, 2.0 * two_pi)) return true;
        if (flip_axis && angles_equal_mod(g1->theta, g2->theta, 2.0 * two_pi)) return true;
        return false;
    }
    if (const auto* r1 = std::get_if<LocalRz>(&first)) {
        const auto* r2 = std::get_if<LocalRz>(&second);
        return r2 && r1->site == r2->site &&
               angles_equal_mod(r1->theta + r2->theta, 0.0, 2.0 * two_pi);
    }
    if (const auto* c1 = std::get_if<Cz>(&first)) {
        const auto* c2 = std::get_if<Cz>(&second);
        if (!c2) return false;
        return (c1->site_a == c2->site_a && c1->site_b == c2->site_b) ||
               (c1->site_a == c2->site_b && c1->site_b == c2->site_a);
    }
    return false;
}

} // namespace

void TimingConfig::validate() const {
    if (microwave_rabi_hz <= 0 || stark_shift_hz <= 0 || cz_duration_s <= 0 || latency_s < 0) {
        throw std::invalid_argument("timing parameters must be positive");
    }
}

ConnectivityError::ConnectivityError(int qa, int qb, const SiteCoord& sa, const SiteCoord& sb)
    : std::runtime_error("connectivity violation: qubits " + std::to_string(qa) + " at " +
                         to_string(sa) + " and " + std::to_string(qb) + " at " + to_string(sb) +
                         " share neither row nor column"),
      qubit_a(qa), qubit_b(qb), site_a(sa), site_b(sb) {}

std::vector<NativeOp> synth_local_rot(const Layout& layout, int q, double phi, double theta) {
    std::vector<NativeOp> ops;
    emit_synth(ops, layout, q, phi, theta);
    return ops;
}

std::vector<NativeOp> decompose_cnot(const Layout& layout, int control, int target) {
    if (control == target) throw std::invalid_argument("CNOT requires distinct qubits");
    std::vector<NativeOp> ops;
    emit_cnot(ops, layout, control, target);
    return ops;
}

std::vector<NativeOp> decompose_zz(const Layout& layout, int a, int b, double gamma) {
    if (a == b) throw std::invalid_argument("ZZ requires distinct qubits");
    std::vector<NativeOp> ops;
    emit_zz(ops, layout, a, b, gamma);
    return ops;
}

std::vector<NativeOp> cancel_inverse_pairs(std::vector<NativeOp> ops) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<NativeOp> next;
        next.reserve(ops.size());
        for (std::size_t i = 0; i < ops.size(); ++i) {
            if (is_identity_op(ops[i])) {
                changed = true;
                continue;
            }
            if (!next.empty() && is_inverse_pair(next.back(), ops[i])) {
                next.pop_back();
                changed = true;
                continue;
            }
            next.push_back(ops[i]);
        }
        ops = std::move(next);
    }
    return ops;
}

NativeCircuit compile(const AbstractProgram& program, const Layout& layout, bool run_cancellation) {
    if (static_cast<int>(layout.size()) != program.n_qubits) {
        throw std::invalid_argument("layout must assign exactly one site per program qubit");
    }
    std::set<SiteCoord> distinct(layout.begin(), layout.end());
    if (distinct.size() != layout.size()) throw std::invalid_argument("layout sites must be distinct");

    std::vector<NativeOp> ops;
    for (const auto& gate : program.gates) emit_gate(ops, layout, gate);
    if (run_cancellation) ops = cancel_inverse_pairs(std::move(ops));

    NativeCircuit circuit;
    circuit.sites = layout;
    circuit.ops = std::move(ops);
    return circuit;
}

double op_duration(const NativeOp& op, const TimingConfig& timing) {
    if (const auto* g = std::get_if<GlobalRot>(&op)) {
        return fold_pulse_area(g->theta) / (two_pi * timing.microwave_rabi_hz);
    }
    if (const auto* rz = std::get_if<LocalRz>(&op)) {
        return fold_pulse_area(rz->theta) / (two_pi * timing.stark_shift_hz);
    }
    if (std::holds_alternative<Cz>(op)) return timing.cz_duration_s;
    return 0.0; // MeasureAll: readout time is not part of the circuit
}

double estimate_duration(const NativeCircuit& circuit, const TimingConfig& timing) {
    timing.validate();
    double total = 0.0;
    for (const auto& op : circuit.ops) {
        if (std::holds_alternative<MeasureAll>(op)) continue;
        total += op_duration(op, timing) + timing.latency_s;
    }
    return total;
}

} // namespace natomsim
