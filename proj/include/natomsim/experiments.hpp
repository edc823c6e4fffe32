// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "natomsim/compiler.hpp"
#include "natomsim/noise.hpp"
#include "natomsim/qsim.hpp"

namespace natomsim {

// ---------------------------------------------------------------------------
// Benchmark geometry on the 7x7 array (used sites 3 periods apart)
// ---------------------------------------------------------------------------

// Six-site chain: central qubit 0, CNOT pairs (0,1)(0,2)(0,3)(0,4)(4,5).
Layout ghz_chain_layout(int n);
std::vector<std::pair<int, int>> ghz_cnot_pairs(int n);

// m = 2: all three qubits in one row; m = 3: cross with the state qubit at
// the center (one explicit swap restores row connectivity for the QFT).
Layout qpe_layout(int m_bits);

struct GraphSpec {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;

    void validate() const;
};

// Brute-force placement of a small graph onto the used 3x3 sub-grid such
// that every edge shares a row or column.
Layout qaoa_layout(const GraphSpec& graph);

GraphSpec line3_graph(); // path 0-1-2
GraphSpec t4_graph();    // edges (0,1)(1,2)(1,3)

// ---------------------------------------------------------------------------
// Shared harness options
// ---------------------------------------------------------------------------

struct HarnessOptions {
    TimingConfig timing{};
    std::optional<NoiseParams> noise; // empty = ideal
    double noise_scale = 1.0;
    // Start from the pumped |1...1> register; circuits then open with a
    // global pi pulse. Off by default (conventional |0...0> inputs).
    bool start_in_ones = false;
    // Machine-config site assignment; empty selects the built-in benchmark
    // geometry. For GHZ runs cnot_pairs must accompany a custom layout.
    Layout layout;
    std::vector<std::pair<int, int>> cnot_pairs;
};

// ---------------------------------------------------------------------------
// GHZ preparation and parity analysis
// ---------------------------------------------------------------------------

struct ParityScan {
    std::vector<double> phases;
    std::vector<double> parities;
    int n = 0;
};

struct GhzResult {
    double p_all0 = 0;
    double p_all1 = 0;
    double c_n = 0;
    double fidelity = 0;
    int n = 0;
};

struct GhzRun {
    GhzResult result;
    ParityScan scan;
    ShotHistogram histogram; // direct-basis measurement
    double duration_s = 0;
    NativeCircuit circuit;
};

// Ideal mode evaluates populations and the parity curve exactly (the sampled
// histogram is still emitted); noisy mode is per-shot Monte Carlo at every
// scan point. scan_points = 0 selects 4n+1.
GhzRun ghz_experiment(int n, int shots, int scan_points, std::uint64_t seed,
                      const HarnessOptions& opt = {});

struct GhzDecayFit {
    double a = 0, b = 0, c = 0;
    double rss = 0; // residual sum of squares
};

// Least-squares fit of fidelity(N) = a + b/(N - c), c below the data range.
GhzDecayFit fit_ghz_decay(const std::vector<std::pair<double, double>>& points);

// ---------------------------------------------------------------------------
// Quantum phase estimation
// ---------------------------------------------------------------------------

// Two-level molecular-hydrogen energy problem, H = a0 + a1 Z + a2 X (Ha).
// sto3g() gives the STO-3G / Bravyi-Kitaev tapered coefficients at the
// 0.7414 angstrom bond length, with t0 = pi / E_max so eigenphases stay in
// (-pi, pi].
struct H2Problem {
    double a0 = -0.328717;
    double a1 = 0.787967;
    double a2 = 0.181289;
    double t0 = 0;

    static H2Problem sto3g();
};

struct ZPowerU {
    double power = 1.0; // U = Z^power, phase pi*power on |1>
};
struct H2U {
    H2Problem problem;
};
using QpeUnitary = std::variant<ZPowerU, H2U>;

struct QpeRun {
    ShotHistogram histogram;            // m-bit phase-register strings
    std::map<std::string, double> probs; // exact in ideal mode, estimated otherwise
    std::string modal_bits;
    double modal_fraction = 0;          // modal_bits / 2^m
    std::optional<double> energy_ha;    // H2 runs only
    double duration_s = 0;
    NativeCircuit circuit;
};

QpeRun qpe_run(const QpeUnitary& u, int m_bits, int shots, std::uint64_t seed,
               const HarnessOptions& opt = {});

// Swapless inverse QFT over the given register wires (wires[0] = most
// significant output bit), processed from the single-bit qubit downward so
// no final swap network is needed.
void append_inverse_qft(AbstractProgram& prog, const std::vector<int>& wires);

// Phase fraction -> energy: the fraction maps to phi in (-pi, pi], E = phi/t0 + a0.
double h2_energy(const std::string& modal_bits, const H2Problem& problem);

struct H2Spectrum {
    double frac_ground = 0;    // eigenphase fraction of the lower-energy eigenstate
    double frac_excited = 0;
    double overlap_ground = 0; // |<1|eigvec>|^2
    double overlap_excited = 0;
    double energy_ground_ha = 0;
    double energy_excited_ha = 0;
};

// Eigendecomposition of the Trotterized U = e^{i a2 t0 X} e^{i a1 t0 Z}.
H2Spectrum h2_spectrum(const H2Problem& problem);

// ---------------------------------------------------------------------------
// QAOA MaxCut
// ---------------------------------------------------------------------------

struct MaxCutSolution {
    int s_max = 0;
    std::vector<std::string> optimal_partitions;
};

MaxCutSolution maxcut_oracle(const GraphSpec& graph);
int cut_value(const GraphSpec& graph, std::uint64_t partition_index);

struct QaoaRun {
    ShotHistogram histogram;
    double r_a = 0;           // exact expectation in ideal mode, else from shots
    double r_a_histogram = 0; // always recomputed from the histogram
    double duration_s = 0;
    NativeCircuit circuit;
};

// p layers of per-edge ZZ(gamma) cost unitaries and global mixing rotations
// on |+>^N; p = 0 runs the bare prepared state.
QaoaRun qaoa_run(const GraphSpec& graph, const std::vector<double>& betas,
                 const std::vector<double>& gammas, int shots, std::uint64_t seed,
                 const HarnessOptions& opt = {});

struct QaoaOptimum {
    std::vector<double> betas;
    std::vector<double> gammas;
    double r_a = 0;
};

// Nelder-Mead over [0,pi)^{2p} from seeded restarts on the ideal expectation.
QaoaOptimum qaoa_optimize(const GraphSpec& graph, int p, int restarts, std::uint64_t seed,
                          const HarnessOptions& opt = {});

} // namespace natomsim
