// SPDX-License-Identifier: Apache-2.0
#include "natomsim/qsim.hpp"

#include <cmath>
#include <stdexcept>

#include "natomsim/rng.hpp"

namespace natomsim {

using cplx = std::complex<double>;

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return s;
}

std::string index_to_bits(std::uint64_t index, int n_qubits) {
    std::string bits(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q) {
        if ((index >> (n_qubits - 1 - q)) & 1ULL) bits[static_cast<std::size_t>(q)] = '1';
    }
    return bits;
}

std::uint64_t bits_to_index(const std::string& bits) {
    std::uint64_t idx = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("bitstring must contain only 0/1");
        idx = (idx << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return idx;
}

StateVector init_state(int n_qubits, const std::string& basis_label) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (basis_label.size() != static_cast<std::size_t>(n_qubits)) {
        throw std::invalid_argument("basis label length must equal n_qubits");
    }
    StateVector psi;
    psi.n_qubits = n_qubits;
    psi.amps.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    psi.amps[bits_to_index(basis_label)] = cplx{1.0, 0.0};
    return psi;
}

namespace {

void check_qubit(const StateVector& psi, int q) {
    if (q < 0 || q >= psi.n_qubits) throw std::invalid_argument("qubit index out of range");
}

// Applies a 2x2 matrix to one qubit in place.
void apply_1q(StateVector& psi, int qubit, const cplx u00, const cplx u01, const cplx u10,
              const cplx u11) {
    const std::size_t stride = std::size_t{1} << (psi.n_qubits - 1 - qubit);
    const std::size_t dim = psi.amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx a0 = psi.amps[i];
            const cplx a1 = psi.amps[i + stride];
            psi.amps[i] = u00 * a0 + u01 * a1;
            psi.amps[i + stride] = u10 * a0 + u11 * a1;
        }
    }
}

} // namespace

void apply_rot_on_qubit(StateVector& psi, int qubit, double phi, double theta) {
    check_qubit(psi, qubit);
    if (!std::isfinite(phi) || !std::isfinite(theta)) throw std::invalid_argument("angles must be finite");
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const cplx m01 = cplx{0.0, -1.0} * std::exp(cplx{0.0, -phi}) * s;
    const cplx m10 = cplx{0.0, -1.0} * std::exp(cplx{0.0, phi}) * s;
    apply_1q(psi, qubit, cplx{c, 0.0}, m01, m10, cplx{c, 0.0});
}

void apply_global_rot(StateVector& psi, double phi, double theta) {
    for (int q = 0; q < psi.n_qubits; ++q) {
        if (!psi.lost.empty() && psi.lost[static_cast<std::size_t>(q)]) continue;
        apply_rot_on_qubit(psi, q, phi, theta);
    }
}

void apply_local_rz(StateVector& psi, int qubit, double theta) {
    check_qubit(psi, qubit);
    if (!std::isfinite(theta)) throw std::invalid_argument("angles must be finite");
    const cplx p0 = std::exp(cplx{0.0, -theta / 2.0});
    const cplx p1 = std::exp(cplx{0.0, theta / 2.0});
    apply_1q(psi, qubit, p0, cplx{0.0, 0.0}, cplx{0.0, 0.0}, p1);
}

void apply_cz_qubits(StateVector& psi, int qubit_a, int qubit_b) {
    check_qubit(psi, qubit_a);
    check_qubit(psi, qubit_b);
    if (qubit_a == qubit_b) throw std::invalid_argument("Cz requires two distinct qubits");
    const std::uint64_t mask_a = std::uint64_t{1} << (psi.n_qubits - 1 - qubit_a);
    const std::uint64_t mask_b = std::uint64_t{1} << (psi.n_qubits - 1 - qubit_b);
    const std::size_t dim = psi.amps.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & mask_a) && (i & mask_b)) psi.amps[i] = -psi.amps[i];
    }
}

void apply_pauli(StateVector& psi, int qubit, int pauli) {
    switch (pauli) {
        case 0: return;
        case 1: apply_1q(psi, qubit, {0, 0}, {1, 0}, {1, 0}, {0, 0}); return;
        case 2: apply_1q(psi, qubit, {0, 0}, {0, -1}, {0, 1}, {0, 0}); return;
        case 3: apply_1q(psi, qubit, {1, 0}, {0, 0}, {0, 0}, {-1, 0}); return;
        default: throw std::invalid_argument("pauli must be 0..3");
    }
}

void apply_native(StateVector& psi, const NativeOp& op, const NativeCircuit& circuit) {
    if (const auto* g = std::get_if<GlobalRot>(&op)) {
        apply_global_rot(psi, g->phi, g->theta);
    } else if (const auto* rz = std::get_if<LocalRz>(&op)) {
        const int q = static_cast<int>(circuit.site_index(rz->site));
        if (!psi.lost.empty() && psi.lost[static_cast<std::size_t>(q)]) return;
        apply_local_rz(psi, q, rz->theta);
    } else if (const auto* cz = std::get_if<Cz>(&op)) {
        const int qa = static_cast<int>(circuit.site_index(cz->site_a));
        const int qb = static_cast<int>(circuit.site_index(cz->site_b));
        if (qa == qb) throw std::invalid_argument("Cz sites must be distinct");
        // A lost partner removes the interaction; the compensated gate acts
        // as identity on the remaining atom.
        if (!psi.lost.empty() &&
            (psi.lost[static_cast<std::size_t>(qa)] || psi.lost[static_cast<std::size_t>(qb)])) {
            return;
        }
        apply_cz_qubits(psi, qa, qb);
    }
    // MeasureAll: handled by sampling, not by state evolution.
}

StateVector run_circuit(const NativeCircuit& circuit, const std::string& initial_label) {
    const int n = static_cast<int>(circuit.n_qubits());
    std::string label = initial_label.empty() ? std::string(static_cast<std::size_t>(n), '0')
                                              : initial_label;
    StateVector psi = init_state(n, label);
    for (const auto& op : circuit.ops) apply_native(psi, op, circuit);
    return psi;
}

ProbDist probabilities(const StateVector& psi) {
    ProbDist d;
    d.n_qubits = psi.n_qubits;
    d.probs.resize(psi.amps.size());
    for (std::size_t i = 0; i < psi.amps.size(); ++i) d.probs[i] = std::norm(psi.amps[i]);
    return d;
}

ShotHistogram sample_shots(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("shots must be positive");
    std::vector<double> cdf(dist.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        acc += dist.probs[i];
        cdf[i] = acc;
    }
    if (acc <= 0.0) throw std::invalid_argument("distribution sums to zero");

    ShotHistogram h;
    h.shots = shots;
    h.seed = seed;
    for (std::uint64_t s = 0; s < shots; ++s) {
        Rng rng(seed, s);
        const double u = rng.uniform() * acc;
        // first strictly-greater entry, so zero-probability outcomes stay unreachable
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= dist.probs.size()) idx = dist.probs.size() - 1;
        ++h.counts[index_to_bits(idx, dist.n_qubits)];
    }
    return h;
}

int parity(const std::string& bits) {
    if (bits.empty()) throw std::invalid_argument("parity of empty bitstring");
    int ones = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("bitstring must contain only 0/1");
        ones += (c == '1');
    }
    return (ones % 2 == 0) ? 1 : -1;
}

double parity_expectation(const ProbDist& dist) {
    double p = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        const bool odd = __builtin_parityll(i);
        p += (odd ? -1.0 : 1.0) * dist.probs[i];
    }
    return p;
}

} // namespace natomsim
