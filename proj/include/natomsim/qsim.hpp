// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "natomsim/circuit.hpp"

namespace natomsim {

inline constexpr int kMaxQubits = 14;

// Dense statevector over 2^n computational basis states. Qubit 0 is the
// leftmost character of bitstrings and the most significant bit of basis
// indices; this ordering is used everywhere (serialization, histograms,
// QPE readout).
struct StateVector {
    int n_qubits = 0;
    std::vector<std::complex<double>> amps;
    std::vector<std::uint8_t> lost; // per-qubit loss flags, noise runs only

    double norm_sq() const;
};

struct ProbDist {
    int n_qubits = 0;
    std::vector<double> probs; // indexed by basis state, qubit 0 = MSB
};

struct ShotHistogram {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

std::string index_to_bits(std::uint64_t index, int n_qubits);
std::uint64_t bits_to_index(const std::string& bits);

StateVector init_state(int n_qubits, const std::string& basis_label);

// Qubit-index level primitives (used by apply_native and the noise layer).
void apply_global_rot(StateVector& psi, double phi, double theta);
void apply_rot_on_qubit(StateVector& psi, int qubit, double phi, double theta);
void apply_local_rz(StateVector& psi, int qubit, double theta);
void apply_cz_qubits(StateVector& psi, int qubit_a, int qubit_b);
void apply_pauli(StateVector& psi, int qubit, int pauli); // 0=I 1=X 2=Y 3=Z

// Applies one native op, resolving sites through the circuit's site order.
void apply_native(StateVector& psi, const NativeOp& op, const NativeCircuit& circuit);

// Runs the whole circuit from |0...0> (or the given label) and returns the
// final state. MeasureAll ops are no-ops here; sampling is separate.
StateVector run_circuit(const NativeCircuit& circuit, const std::string& initial_label = "");

ProbDist probabilities(const StateVector& psi);

ShotHistogram sample_shots(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed);

// +1 for an even number of '1' characters, -1 otherwise.
int parity(const std::string& bits);

// Expectation of parity over a distribution.
double parity_expectation(const ProbDist& dist);

} // namespace natomsim
