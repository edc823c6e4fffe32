// SPDX-License-Identifier: Apache-2.0
#include "natomsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <set>
#include <stdexcept>

#include "natomsim/constants.hpp"
#include "natomsim/rng.hpp"

namespace natomsim {

using constants::pi;
using constants::two_pi;
using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

Layout ghz_chain_layout(int n) {
    if (n < 2 || n > 6) throw std::invalid_argument("GHZ chain supports 2..6 qubits");
    static const Layout full = {{3, 3}, {0, 3}, {3, 0}, {3, 6}, {6, 3}, {6, 6}};
    return Layout(full.begin(), full.begin() + n);
}

std::vector<std::pair<int, int>> ghz_cnot_pairs(int n) {
    if (n < 2 || n > 6) throw std::invalid_argument("GHZ chain supports 2..6 qubits");
    static const std::vector<std::pair<int, int>> full = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {4, 5}};
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : full) {
        if (p.first < n && p.second < n) pairs.push_back(p);
    }
    return pairs;
}

Layout qpe_layout(int m_bits) {
    if (m_bits == 2) return {{0, 0}, {0, 3}, {0, 6}};          // q0 q1 state
    if (m_bits == 3) return {{3, 0}, {3, 6}, {0, 3}, {3, 3}};  // q0 q1 q2 state
    throw std::invalid_argument("QPE supports 2 or 3 measurement bits");
}

void GraphSpec::validate() const {
    if (n_vertices < 1) throw std::invalid_argument("graph needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (e.first == e.second) throw std::invalid_argument("graph has a self-loop");
        if (e.first < 0 || e.second < 0 || e.first >= n_vertices || e.second >= n_vertices) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        const auto norm = std::minmax(e.first, e.second);
        if (!seen.insert({norm.first, norm.second}).second) {
            throw std::invalid_argument("duplicate edge");
        }
    }
}

Layout qaoa_layout(const GraphSpec& graph) {
    graph.validate();
    std::vector<SiteCoord> used;
    for (int r : {0, 3, 6}) {
        for (int c : {0, 3, 6}) used.push_back({r, c});
    }
    const int n = graph.n_vertices;
    if (n > static_cast<int>(used.size())) {
        throw std::invalid_argument("graph too large for the used-site grid");
    }

    std::vector<int> pick(static_cast<std::size_t>(n), -1);
    std::vector<bool> taken(used.size(), false);
    auto edges_ok = [&](int placed) {
        for (const auto& e : graph.edges) {
            if (e.first > placed || e.second > placed) continue;
            if (!shares_row_or_col(used[static_cast<std::size_t>(pick[static_cast<std::size_t>(e.first)])],
                                   used[static_cast<std::size_t>(pick[static_cast<std::size_t>(e.second)])])) {
                return false;
            }
        }
        return true;
    };
    // depth-first placement over the nine used sites
    std::function<bool(int)> place = [&](int v) -> bool {
        if (v == n) return true;
        for (std::size_t s = 0; s < used.size(); ++s) {
            if (taken[s]) continue;
            pick[static_cast<std::size_t>(v)] = static_cast<int>(s);
            taken[s] = true;
            if (edges_ok(v) && place(v + 1)) return true;
            taken[s] = false;
            pick[static_cast<std::size_t>(v)] = -1;
        }
        return false;
    };
    if (!place(0)) throw std::runtime_error("no row/column-respecting placement exists for graph");
    Layout layout;
    for (int v = 0; v < n; ++v) layout.push_back(used[static_cast<std::size_t>(pick[static_cast<std::size_t>(v)])]);
    return layout;
}

GraphSpec line3_graph() { return GraphSpec{3, {{0, 1}, {1, 2}}}; }

GraphSpec t4_graph() { return GraphSpec{4, {{0, 1}, {1, 2}, {1, 3}}}; }

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

namespace {

double dft_amplitude(const std::vector<double>& phases, const std::vector<double>& values,
                     int frequency) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < phases.size(); ++k) {
        acc += values[k] * std::exp(cplx{0.0, -frequency * phases[k]});
    }
    return 2.0 * std::abs(acc) / static_cast<double>(phases.size());
}

ShotHistogram histogram_from_strings(const std::vector<std::string>& bits, std::uint64_t seed) {
    ShotHistogram h;
    h.shots = bits.size();
    h.seed = seed;
    for (const auto& b : bits) ++h.counts[b];
    return h;
}

std::vector<std::string> run_noisy_shots(const NativeCircuit& circuit, const NoiseParams& noise,
                                         const HarnessOptions& opt, int shots, std::uint64_t seed,
                                         std::uint64_t stream_base) {
    const std::string label =
        opt.start_in_ones ? std::string(circuit.n_qubits(), '1') : std::string();
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(shots));
    for (int s = 0; s < shots; ++s) {
        out.push_back(noisy_shot(circuit, noise, opt.timing, opt.noise_scale, seed,
                                 stream_base + static_cast<std::uint64_t>(s), label));
    }
    return out;
}

std::string initial_label_for(const HarnessOptions& opt, int n) {
    return opt.start_in_ones ? std::string(static_cast<std::size_t>(n), '1')
                             : std::string(static_cast<std::size_t>(n), '0');
}

// Pumped starts open with a global pi pulse taking |1...1> back to |0...0>.
void maybe_prepend_pumped_flip(AbstractProgram& prog, const HarnessOptions& opt) {
    if (opt.start_in_ones) prog.gates.insert(prog.gates.begin(), AbstractGate{ag::Global{0.0, pi}});
}

} // namespace

// ---------------------------------------------------------------------------
// GHZ
// ---------------------------------------------------------------------------

GhzRun ghz_experiment(int n, int shots, int scan_points, std::uint64_t seed,
                      const HarnessOptions& opt) {
    if (n < 2 || n > 6) throw std::invalid_argument("ghz_experiment supports n in [2,6]");
    if (shots < 1) throw std::invalid_argument("shots must be positive");
    if (scan_points == 0) scan_points = 4 * n + 1;
    if (scan_points < 4 * n + 1) {
        throw std::invalid_argument("scan needs at least 4n+1 phase points");
    }

    Layout layout = opt.layout;
    std::vector<std::pair<int, int>> pairs = opt.cnot_pairs;
    if (layout.empty()) {
        layout = ghz_chain_layout(n);
        pairs = ghz_cnot_pairs(n);
    } else {
        if (static_cast<int>(layout.size()) < n) {
            throw std::invalid_argument("configured layout has fewer sites than qubits");
        }
        layout.resize(static_cast<std::size_t>(n));
        std::vector<std::pair<int, int>> kept;
        for (const auto& p : pairs) {
            if (p.first < n && p.second < n) kept.push_back(p);
        }
        pairs = std::move(kept);
        if (pairs.empty()) throw std::invalid_argument("configured group has no usable CNOT pairs");
    }

    AbstractProgram prog;
    prog.n_qubits = n;
    prog.gates.emplace_back(ag::H{0});
    for (const auto& p : pairs) prog.gates.emplace_back(ag::Cnot{p.first, p.second});
    maybe_prepend_pumped_flip(prog, opt);

    NativeCircuit circuit = compile(prog, layout);
    GhzRun run;
    run.duration_s = estimate_duration(circuit, opt.timing);

    NativeCircuit measured = circuit;
    measured.ops.emplace_back(MeasureAll{});
    run.circuit = measured;

    run.scan.n = n;
    const std::string all0(static_cast<std::size_t>(n), '0');
    const std::string all1(static_cast<std::size_t>(n), '1');

    if (!opt.noise) {
        const StateVector psi = run_circuit(circuit, initial_label_for(opt, n));
        const ProbDist probs = probabilities(psi);
        run.result.p_all0 = probs.probs[0];
        run.result.p_all1 = probs.probs[probs.probs.size() - 1];
        run.histogram = sample_shots(probs, static_cast<std::uint64_t>(shots), seed);
        for (int k = 0; k < scan_points; ++k) {
            const double phi = two_pi * k / scan_points;
            StateVector rotated = psi;
            apply_global_rot(rotated, phi, -pi / 2.0);
            run.scan.phases.push_back(phi);
            run.scan.parities.push_back(parity_expectation(probabilities(rotated)));
        }
    } else {
        const auto direct = run_noisy_shots(measured, *opt.noise, opt, shots, seed, 0);
        run.histogram = histogram_from_strings(direct, seed);
        run.result.p_all0 =
            static_cast<double>(run.histogram.counts.count(all0) ? run.histogram.counts.at(all0) : 0) /
            shots;
        run.result.p_all1 =
            static_cast<double>(run.histogram.counts.count(all1) ? run.histogram.counts.at(all1) : 0) /
            shots;
        for (int k = 0; k < scan_points; ++k) {
            const double phi = two_pi * k / scan_points;
            NativeCircuit scan_circuit = circuit;
            scan_circuit.ops.emplace_back(GlobalRot{phi, -pi / 2.0});
            scan_circuit.ops.emplace_back(MeasureAll{});
            const auto bits = run_noisy_shots(scan_circuit, *opt.noise, opt, shots, seed,
                                              static_cast<std::uint64_t>(k + 1) *
                                                  static_cast<std::uint64_t>(shots));
            double p = 0.0;
            for (const auto& b : bits) p += parity(b);
            run.scan.phases.push_back(phi);
            run.scan.parities.push_back(p / shots);
        }
    }

    run.result.n = n;
    run.result.c_n = dft_amplitude(run.scan.phases, run.scan.parities, n);
    run.result.fidelity = (run.result.p_all0 + run.result.p_all1 + run.result.c_n) / 2.0;
    return run;
}

GhzDecayFit fit_ghz_decay(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 4) throw std::invalid_argument("fit needs at least 4 points");
    double n_min = points[0].first;
    for (const auto& p : points) n_min = std::min(n_min, p.first);

    // For fixed c the model a + b/(N-c) is linear in (a, b).
    auto solve_linear = [&](double c, double& a, double& b) -> double {
        double s11 = 0, s1x = 0, sxx = 0, s1y = 0, sxy = 0;
        for (const auto& p : points) {
            const double x = 1.0 / (p.first - c);
            s11 += 1.0;
            s1x += x;
            sxx += x * x;
            s1y += p.second;
            sxy += x * p.second;
        }
        const double det = s11 * sxx - s1x * s1x;
        if (std::fabs(det) < 1e-14) return 1e300;
        a = (sxx * s1y - s1x * sxy) / det;
        b = (s11 * sxy - s1x * s1y) / det;
        double rss = 0;
        for (const auto& p : points) {
            const double r = p.second - (a + b / (p.first - c));
            rss += r * r;
        }
        return rss;
    };

    const double c_hi = n_min - 1e-3;
    const double c_lo = n_min - 25.0;
    double best_c = c_lo, best_rss = 1e300;
    for (int i = 0; i < 2000; ++i) {
        const double c = c_lo + (c_hi - c_lo) * i / 1999.0;
        double a, b;
        const double rss = solve_linear(c, a, b);
        if (rss < best_rss) {
            best_rss = rss;
            best_c = c;
        }
    }
    // golden-section refinement
    double lo = std::max(c_lo, best_c - (c_hi - c_lo) / 1999.0 * 2.0);
    double hi = std::min(c_hi, best_c + (c_hi - c_lo) / 1999.0 * 2.0);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double a_t, b_t;
    double f1 = solve_linear(x1, a_t, b_t), f2 = solve_linear(x2, a_t, b_t);
    for (int it = 0; it < 200; ++it) {
        if (f1 > f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = solve_linear(x2, a_t, b_t);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = solve_linear(x1, a_t, b_t);
        }
    }
    GhzDecayFit fit;
    fit.c = 0.5 * (lo + hi);
    fit.rss = solve_linear(fit.c, fit.a, fit.b);
    if (fit.rss >= 1e300 || !std::isfinite(fit.a) || !std::isfinite(fit.b)) {
        throw std::runtime_error("singular decay fit (pole too close to a data point)");
    }
    return fit;
}

// ---------------------------------------------------------------------------
// QPE
// ---------------------------------------------------------------------------

H2Problem H2Problem::sto3g() {
    H2Problem p;
    p.t0 = pi / 0.9693;
    return p;
}

namespace {

using Mat2 = std::array<std::array<cplx, 2>, 2>;

Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
    }
    return r;
}

Mat2 h2_trotter_u(const H2Problem& p) {
    const double alpha = p.a2 * p.t0; // e^{i alpha X}
    const double beta = p.a1 * p.t0;  // e^{i beta Z}
    const Mat2 ux = {{{cplx{std::cos(alpha), 0}, cplx{0, std::sin(alpha)}},
                      {cplx{0, std::sin(alpha)}, cplx{std::cos(alpha), 0}}}};
    const Mat2 uz = {{{std::exp(cplx{0, beta}), cplx{0, 0}},
                      {cplx{0, 0}, std::exp(cplx{0, -beta})}}};
    return mat2_mul(ux, uz);
}

// ZYZ angles with U = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta).
struct Zyz {
    double alpha, beta, gamma, delta;
};

Zyz zyz_decompose(const Mat2& u) {
    const cplx det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    const double alpha = 0.5 * std::arg(det);
    const cplx inv_phase = std::exp(cplx{0, -alpha});
    const cplx v00 = inv_phase * u[0][0];
    const cplx v10 = inv_phase * u[1][0];
    const cplx v11 = inv_phase * u[1][1];

    Zyz z{alpha, 0, 0, 0};
    z.gamma = 2.0 * std::atan2(std::abs(v10), std::abs(v00));
    if (std::abs(v10) < 1e-12) {
        z.beta = 2.0 * std::arg(v11);
        z.delta = 0.0;
    } else if (std::abs(v00) < 1e-12) {
        z.beta = 2.0 * std::arg(v10);
        z.delta = 0.0;
    } else {
        z.beta = std::arg(v11) + std::arg(v10);
        z.delta = std::arg(v11) - std::arg(v10);
    }
    return z;
}

// Controlled-U via the two-CNOT ABC construction:
// CU = P_c(alpha) A CNOT B CNOT C with A = Rz(b)Ry(g/2), B = Ry(-g/2)Rz(-(d+b)/2),
// C = Rz((d-b)/2).
void emit_controlled_u(std::vector<AbstractGate>& gates, int control, int target, const Mat2& u) {
    const Zyz z = zyz_decompose(u);
    gates.emplace_back(ag::Rz{target, (z.delta - z.beta) / 2.0});
    gates.emplace_back(ag::Cnot{control, target});
    gates.emplace_back(ag::Rz{target, -(z.delta + z.beta) / 2.0});
    gates.emplace_back(ag::Rphi{target, pi / 2.0, -z.gamma / 2.0});
    gates.emplace_back(ag::Cnot{control, target});
    gates.emplace_back(ag::Rphi{target, pi / 2.0, z.gamma / 2.0});
    gates.emplace_back(ag::Rz{target, z.beta});
    gates.emplace_back(ag::Rz{control, z.alpha});
}

} // namespace

void append_inverse_qft(AbstractProgram& prog, const std::vector<int>& wires) {
    const int m = static_cast<int>(wires.size());
    // Process the single-bit qubit first; wire j ends holding phase bit j.
    for (int j = m - 1; j >= 0; --j) {
        for (int k = m - 1; k > j; --k) {
            prog.gates.emplace_back(ag::CPhase{wires[static_cast<std::size_t>(k)],
                                               wires[static_cast<std::size_t>(j)],
                                               -pi / static_cast<double>(1 << (k - j))});
        }
        prog.gates.emplace_back(ag::H{wires[static_cast<std::size_t>(j)]});
    }
}

QpeRun qpe_run(const QpeUnitary& u, int m_bits, int shots, std::uint64_t seed,
               const HarnessOptions& opt) {
    if (m_bits != 2 && m_bits != 3) throw std::invalid_argument("m_bits must be 2 or 3");
    if (shots < 1) throw std::invalid_argument("shots must be positive");
    const int state = m_bits;

    AbstractProgram prog;
    prog.n_qubits = m_bits + 1;
    prog.gates.emplace_back(ag::X{state}); // Hartree-Fock / eigenstate |1>
    for (int j = 0; j < m_bits; ++j) prog.gates.emplace_back(ag::H{j});

    // qubit j controls U^(2^j)
    for (int j = 0; j < m_bits; ++j) {
        const int reps = 1 << j;
        if (const auto* zp = std::get_if<ZPowerU>(&u)) {
            const double lambda = std::fmod(pi * zp->power * reps, two_pi);
            prog.gates.emplace_back(ag::CPhase{j, state, lambda});
        } else {
            const Mat2 base = h2_trotter_u(std::get<H2U>(u).problem);
            Mat2 up = {{{cplx{1, 0}, cplx{0, 0}}, {cplx{0, 0}, cplx{1, 0}}}};
            for (int r = 0; r < reps; ++r) up = mat2_mul(base, up);
            emit_controlled_u(prog.gates, j, state, up);
        }
    }

    // Register wires for the inverse QFT. With m = 3 the third measurement
    // qubit cannot see the others, so its content is swapped onto the state
    // qubit's central site first.
    std::vector<int> reg(static_cast<std::size_t>(m_bits));
    for (int j = 0; j < m_bits; ++j) reg[static_cast<std::size_t>(j)] = j;
    if (m_bits == 3) {
        prog.gates.emplace_back(ag::Swap{2, state});
        reg[2] = state;
    }

    append_inverse_qft(prog, reg);

    maybe_prepend_pumped_flip(prog, opt);
    Layout layout = opt.layout.empty() ? qpe_layout(m_bits) : opt.layout;
    if (layout.size() != static_cast<std::size_t>(m_bits + 1)) {
        throw std::invalid_argument("QPE layout must assign one site per register qubit");
    }
    NativeCircuit circuit = compile(prog, layout);
    QpeRun run;
    run.duration_s = estimate_duration(circuit, opt.timing);
    NativeCircuit measured = circuit;
    measured.ops.emplace_back(MeasureAll{});
    run.circuit = measured;

    auto extract = [&](const std::string& full) {
        std::string bits;
        for (int j = 0; j < m_bits; ++j) bits.push_back(full[static_cast<std::size_t>(reg[static_cast<std::size_t>(j)])]);
        return bits;
    };

    if (!opt.noise) {
        const ProbDist probs = probabilities(run_circuit(circuit, initial_label_for(opt, m_bits + 1)));
        for (std::size_t i = 0; i < probs.probs.size(); ++i) {
            if (probs.probs[i] < 1e-15) continue;
            run.probs[extract(index_to_bits(i, m_bits + 1))] += probs.probs[i];
        }
        ShotHistogram full = sample_shots(probs, static_cast<std::uint64_t>(shots), seed);
        run.histogram.shots = full.shots;
        run.histogram.seed = seed;
        for (const auto& [bits, count] : full.counts) run.histogram.counts[extract(bits)] += count;
    } else {
        const auto raw = run_noisy_shots(measured, *opt.noise, opt, shots, seed, 0);
        run.histogram.shots = static_cast<std::uint64_t>(shots);
        run.histogram.seed = seed;
        for (const auto& bits : raw) ++run.histogram.counts[extract(bits)];
        for (const auto& [bits, count] : run.histogram.counts) {
            run.probs[bits] = static_cast<double>(count) / shots;
        }
    }

    double best = -1.0;
    for (const auto& [bits, p] : run.probs) {
        if (p > best) {
            best = p;
            run.modal_bits = bits;
        }
    }
    if (opt.noise && !run.histogram.counts.empty()) {
        std::uint64_t best_count = 0;
        for (const auto& [bits, count] : run.histogram.counts) {
            if (count > best_count) {
                best_count = count;
                run.modal_bits = bits;
            }
        }
    }
    run.modal_fraction =
        static_cast<double>(bits_to_index(run.modal_bits)) / static_cast<double>(1 << m_bits);
    if (std::holds_alternative<H2U>(u)) {
        run.energy_ha = h2_energy(run.modal_bits, std::get<H2U>(u).problem);
    }
    return run;
}

double h2_energy(const std::string& modal_bits, const H2Problem& problem) {
    const double m = static_cast<double>(modal_bits.size());
    const double f =
        static_cast<double>(bits_to_index(modal_bits)) / std::pow(2.0, m);
    const double phi = f > 0.5 ? two_pi * (f - 1.0) : two_pi * f;
    return phi / problem.t0 + problem.a0;
}

H2Spectrum h2_spectrum(const H2Problem& problem) {
    const Mat2 u = h2_trotter_u(problem);
    const double half_trace = 0.5 * std::real(u[0][0] + u[1][1]);
    const double theta = std::acos(std::clamp(half_trace, -1.0, 1.0));

    auto overlap1 = [&](double sign) {
        // eigenvector for eigenvalue e^{i sign theta}
        const cplx lam = std::exp(cplx{0, sign * theta});
        cplx v0 = u[0][1];
        cplx v1 = lam - u[0][0];
        if (std::abs(v0) + std::abs(v1) < 1e-12) {
            v0 = lam - u[1][1];
            v1 = u[1][0];
        }
        const double n2 = std::norm(v0) + std::norm(v1);
        return std::norm(v1) / n2;
    };

    H2Spectrum s;
    // e^{-i theta} is the negative-energy (ground) branch.
    s.frac_ground = 1.0 - theta / two_pi;
    s.frac_excited = theta / two_pi;
    s.overlap_ground = overlap1(-1.0);
    s.overlap_excited = overlap1(+1.0);
    s.energy_ground_ha = -theta / problem.t0 + problem.a0;
    s.energy_excited_ha = theta / problem.t0 + problem.a0;
    return s;
}

// ---------------------------------------------------------------------------
// QAOA MaxCut
// ---------------------------------------------------------------------------

int cut_value(const GraphSpec& graph, std::uint64_t partition_index) {
    int cut = 0;
    for (const auto& e : graph.edges) {
        const int ba = (partition_index >> (graph.n_vertices - 1 - e.first)) & 1;
        const int bb = (partition_index >> (graph.n_vertices - 1 - e.second)) & 1;
        cut += (ba != bb);
    }
    return cut;
}

MaxCutSolution maxcut_oracle(const GraphSpec& graph) {
    graph.validate();
    if (graph.n_vertices > 20) throw std::invalid_argument("maxcut_oracle caps at 20 vertices");
    MaxCutSolution sol;
    const std::uint64_t total = std::uint64_t{1} << graph.n_vertices;
    for (std::uint64_t k = 0; k < total; ++k) {
        const int c = cut_value(graph, k);
        if (c > sol.s_max) {
            sol.s_max = c;
            sol.optimal_partitions.clear();
        }
        if (c == sol.s_max) sol.optimal_partitions.push_back(index_to_bits(k, graph.n_vertices));
    }
    return sol;
}

namespace {

// Angles follow the published convention: beta and gamma are pulse areas in
// units of pi, so a cost layer applies ZZ(pi*gamma) per edge and a mixing
// layer one global rotation of area pi*beta. This mapping reproduces the
// published ideal approximation ratios at the published angle lists for
// every (graph, p) benchmark, which pins it uniquely.
AbstractProgram qaoa_program(const GraphSpec& graph, const std::vector<double>& betas,
                             const std::vector<double>& gammas) {
    AbstractProgram prog;
    prog.n_qubits = graph.n_vertices;
    prog.gates.emplace_back(ag::Global{pi / 2.0, pi / 2.0}); // |0...0> -> |+...+>
    for (std::size_t l = 0; l < gammas.size(); ++l) {
        for (const auto& e : graph.edges) {
            prog.gates.emplace_back(ag::Zz{e.first, e.second, pi * gammas[l]});
        }
        prog.gates.emplace_back(ag::Global{0.0, pi * betas[l]});
    }
    return prog;
}

double expected_ratio(const GraphSpec& graph, const ProbDist& probs, int s_max) {
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.probs.size(); ++i) {
        acc += probs.probs[i] * cut_value(graph, i);
    }
    return acc / s_max;
}

double histogram_ratio(const GraphSpec& graph, const ShotHistogram& hist, int s_max) {
    double acc = 0.0;
    for (const auto& [bits, count] : hist.counts) {
        acc += static_cast<double>(count) * cut_value(graph, bits_to_index(bits));
    }
    return acc / (static_cast<double>(hist.shots) * s_max);
}

} // namespace

QaoaRun qaoa_run(const GraphSpec& graph, const std::vector<double>& betas,
                 const std::vector<double>& gammas, int shots, std::uint64_t seed,
                 const HarnessOptions& opt) {
    graph.validate();
    if (graph.edges.empty()) throw std::invalid_argument("QAOA needs at least one edge");
    if (betas.size() != gammas.size()) throw std::invalid_argument("betas and gammas must pair up");
    if (shots < 1) throw std::invalid_argument("shots must be positive");

    const MaxCutSolution sol = maxcut_oracle(graph);
    AbstractProgram prog = qaoa_program(graph, betas, gammas);
    maybe_prepend_pumped_flip(prog, opt);
    const Layout layout = opt.layout.empty() ? qaoa_layout(graph) : opt.layout;
    NativeCircuit circuit = compile(prog, layout);

    QaoaRun run;
    run.duration_s = estimate_duration(circuit, opt.timing);
    NativeCircuit measured = circuit;
    measured.ops.emplace_back(MeasureAll{});
    run.circuit = measured;

    if (!opt.noise) {
        const ProbDist probs =
            probabilities(run_circuit(circuit, initial_label_for(opt, graph.n_vertices)));
        run.r_a = expected_ratio(graph, probs, sol.s_max);
        run.histogram = sample_shots(probs, static_cast<std::uint64_t>(shots), seed);
    } else {
        const auto bits = run_noisy_shots(measured, *opt.noise, opt, shots, seed, 0);
        run.histogram = histogram_from_strings(bits, seed);
        run.r_a = histogram_ratio(graph, run.histogram, sol.s_max);
    }
    run.r_a_histogram = histogram_ratio(graph, run.histogram, sol.s_max);
    return run;
}

QaoaOptimum qaoa_optimize(const GraphSpec& graph, int p, int restarts, std::uint64_t seed,
                          const HarnessOptions& opt) {
    graph.validate();
    if (p < 1 || p > 3) throw std::invalid_argument("qaoa_optimize supports p in [1,3]");
    if (restarts < 1) throw std::invalid_argument("restarts must be positive");

    const MaxCutSolution sol = maxcut_oracle(graph);
    const Layout layout = opt.layout.empty() ? qaoa_layout(graph) : opt.layout;
    const int dim = 2 * p;

    auto ratio_at = [&](const std::vector<double>& x) {
        const std::vector<double> betas(x.begin(), x.begin() + p);
        const std::vector<double> gammas(x.begin() + p, x.end());
        AbstractProgram prog = qaoa_program(graph, betas, gammas);
        maybe_prepend_pumped_flip(prog, opt);
        const NativeCircuit c = compile(prog, layout);
        return expected_ratio(
            graph, probabilities(run_circuit(c, initial_label_for(opt, graph.n_vertices))),
            sol.s_max);
    };

    QaoaOptimum best;
    best.r_a = -1.0;

    for (int r = 0; r < restarts; ++r) {
        Rng rng(seed, static_cast<std::uint64_t>(r));
        std::vector<std::vector<double>> simplex;
        std::vector<double> x0(static_cast<std::size_t>(dim));
        // one full period of the pulse-area parameterization per coordinate
        for (auto& v : x0) v = rng.uniform() * 2.0;
        simplex.push_back(x0);
        for (int i = 0; i < dim; ++i) {
            auto xi = x0;
            xi[static_cast<std::size_t>(i)] += 0.25;
            simplex.push_back(xi);
        }
        std::vector<double> f(simplex.size());
        for (std::size_t i = 0; i < simplex.size(); ++i) f[i] = -ratio_at(simplex[i]);

        // Nelder-Mead (minimizing -R_a)
        for (int iter = 0; iter < 250; ++iter) {
            std::vector<std::size_t> order(simplex.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
            if (f[order.back()] - f[order.front()] < 1e-11) break;

            const std::size_t worst = order.back();
            std::vector<double> centroid(static_cast<std::size_t>(dim), 0.0);
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                for (int d = 0; d < dim; ++d) centroid[static_cast<std::size_t>(d)] += simplex[order[i]][static_cast<std::size_t>(d)];
            }
            for (auto& v : centroid) v /= dim;

            auto blend = [&](double t) {
                std::vector<double> x(static_cast<std::size_t>(dim));
                for (int d = 0; d < dim; ++d) {
                    x[static_cast<std::size_t>(d)] = centroid[static_cast<std::size_t>(d)] +
                                                     t * (centroid[static_cast<std::size_t>(d)] -
                                                          simplex[worst][static_cast<std::size_t>(d)]);
                }
                return x;
            };

            const auto reflected = blend(1.0);
            const double fr = -ratio_at(reflected);
            if (fr < f[order.front()]) {
                const auto expanded = blend(2.0);
                const double fe = -ratio_at(expanded);
                if (fe < fr) {
                    simplex[worst] = expanded;
                    f[worst] = fe;
                } else {
                    simplex[worst] = reflected;
                    f[worst] = fr;
                }
            } else if (fr < f[order[order.size() - 2]]) {
                simplex[worst] = reflected;
                f[worst] = fr;
            } else {
                const auto contracted = blend(-0.5);
                const double fc = -ratio_at(contracted);
                if (fc < f[worst]) {
                    simplex[worst] = contracted;
                    f[worst] = fc;
                } else {
                    for (std::size_t i = 1; i < order.size(); ++i) {
                        for (int d = 0; d < dim; ++d) {
                            simplex[order[i]][static_cast<std::size_t>(d)] =
                                0.5 * (simplex[order[i]][static_cast<std::size_t>(d)] +
                                       simplex[order[0]][static_cast<std::size_t>(d)]);
                        }
                        f[order[i]] = -ratio_at(simplex[order[i]]);
                    }
                }
            }
        }

        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (-f[i] > best.r_a) {
                best.r_a = -f[i];
                best.betas.assign(simplex[i].begin(), simplex[i].begin() + p);
                best.gammas.assign(simplex[i].begin() + p, simplex[i].end());
            }
        }
    }
    return best;
}

} // namespace natomsim
