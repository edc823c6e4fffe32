// SPDX-License-Identifier: Apache-2.0
#include "natomsim/pulse.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "natomsim/constants.hpp"

namespace natomsim {

using constants::pi;
using constants::two_pi;
using cplx = std::complex<double>;
using Matrix9 = Eigen::Matrix<cplx, 9, 9>;
using Vector9 = Eigen::Matrix<cplx, 9, 1>;

namespace {

constexpr int kIdx01 = 1; // 3*level_a + level_b, levels {0,1,r}={0,1,2}
constexpr int kIdx10 = 3;
constexpr int kIdx11 = 4;

int rydberg_count(int k) { return (k / 3 == 2) + (k % 3 == 2); }

Matrix9 hamiltonian(const RydbergParams& p, double xi) {
    const double omega_a = p.omega_r * (1.0 + p.omega_asymmetry / 2.0);
    const double omega_b = p.omega_r * (1.0 - p.omega_asymmetry / 2.0);
    const cplx phase = std::exp(cplx{0.0, xi});

    Matrix9 upper = Matrix9::Zero();
    for (int other = 0; other < 3; ++other) {
        upper(3 * 1 + other, 3 * 2 + other) += 0.5 * omega_a * phase; // atom a |1>->|r>
        upper(3 * other + 1, 3 * other + 2) += 0.5 * omega_b * phase; // atom b |1>->|r>
    }
    Matrix9 h = upper + upper.adjoint();
    for (int k = 0; k < 9; ++k) h(k, k) = -p.delta * rydberg_count(k);
    h(8, 8) += p.blockade_b;
    return h;
}

Vector9 rk4_run(const Matrix9& h, const Vector9& y0, double tau, long steps) {
    const double dt = tau / static_cast<double>(steps);
    const cplx minus_i{0.0, -1.0};
    Vector9 y = y0;
    for (long s = 0; s < steps; ++s) {
        const Vector9 k1 = minus_i * (h * y);
        const Vector9 k2 = minus_i * (h * (y + (dt / 2.0) * k1));
        const Vector9 k3 = minus_i * (h * (y + (dt / 2.0) * k2));
        const Vector9 k4 = minus_i * (h * (y + dt * k3));
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

double wrap_defect(double phi11, double phi01, double phi10) {
    return std::remainder(phi11 - phi01 - phi10 - pi, two_pi);
}

struct TwoPulseAmps {
    cplx a01, a10, a11;
};

struct PulsePropagator {
    Matrix9 u1; // one-pulse propagator at xi = 0

    // Gauge identity: U(xi) = G(-xi) U(0) G(xi) with G = exp(i xi N_r), so
    // the two-pulse return amplitude from basis input `idx` is
    //   sum_k U1(idx,k) e^{i xi n_r(k)} U1(k,idx) = c0 + c1 e^{i xi} + c2 e^{2 i xi}.
    std::array<cplx, 3> xi_coeffs(int idx) const {
        std::array<cplx, 3> c{cplx{0, 0}, cplx{0, 0}, cplx{0, 0}};
        for (int k = 0; k < 9; ++k) {
            c[static_cast<std::size_t>(rydberg_count(k))] += u1(idx, k) * u1(k, idx);
        }
        return c;
    }

    cplx amp(int idx, double xi) const {
        const auto c = xi_coeffs(idx);
        return c[0] + c[1] * std::exp(cplx{0.0, xi}) + c[2] * std::exp(cplx{0.0, 2.0 * xi});
    }
};

struct EigenSystem {
    Eigen::SelfAdjointEigenSolver<Matrix9> solver;

    explicit EigenSystem(const Matrix9& h) : solver(h) {
        if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
    }

    PulsePropagator propagator(double tau) const {
        const auto& vals = solver.eigenvalues();
        const auto& vecs = solver.eigenvectors();
        Vector9 ph;
        for (int k = 0; k < 9; ++k) ph(k) = std::exp(cplx{0.0, -vals(k) * tau});
        PulsePropagator p;
        p.u1 = vecs * ph.asDiagonal() * vecs.adjoint();
        return p;
    }

    // |<11|U1(tau)|11>|^2 without forming the full propagator.
    double one_pulse_return11(double tau) const {
        const auto& vals = solver.eigenvalues();
        const auto& vecs = solver.eigenvectors();
        cplx a{0.0, 0.0};
        for (int k = 0; k < 9; ++k) {
            a += std::norm(vecs(kIdx11, k)) * std::exp(cplx{0.0, -vals(k) * tau});
        }
        return std::norm(a);
    }
};

GatePhases phases_from_amps(const TwoPulseAmps& amps) {
    GatePhases g;
    g.return01 = std::norm(amps.a01);
    g.return10 = std::norm(amps.a10);
    g.return11 = std::norm(amps.a11);
    g.phi01 = std::arg(amps.a01);
    g.phi10 = std::arg(amps.a10);
    g.phi11 = std::arg(amps.a11);
    g.leakage = std::max({1.0 - g.return01, 1.0 - g.return10, 1.0 - g.return11});
    g.phase_defect = wrap_defect(g.phi11, g.phi01, g.phi10);
    return g;
}

TwoPulseAmps exact_two_pulse_amps(const RydbergParams& p) {
    const EigenSystem sys(hamiltonian(p, 0.0));
    const PulsePropagator prop = sys.propagator(p.tau);
    return {prop.amp(kIdx01, p.xi), prop.amp(kIdx10, p.xi), prop.amp(kIdx11, p.xi)};
}

template <typename F>
double golden_max(F f, double lo, double hi, int iters) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

struct Candidate {
    double delta = 0, tau = 0, xi = 0;
    GatePhases phases;
    double objective = -1e30;
};

Candidate evaluate_delta(double omega, double blockade, double delta) {
    RydbergParams base;
    base.omega_r = omega;
    base.blockade_b = blockade;
    base.delta = delta;

    const EigenSystem sys(hamiltonian(base, 0.0));

    // Each pulse gives |11> a full collective rotation; seed with the
    // blockade-limit period and refine on the one-pulse return.
    const double seed = two_pi / std::sqrt(2.0 * omega * omega + delta * delta);
    const int n_scan = 181;
    double best_tau = seed, best_ret = -1.0;
    for (int i = 0; i < n_scan; ++i) {
        const double tau = seed * (0.6 + 0.9 * i / (n_scan - 1));
        const double ret = sys.one_pulse_return11(tau);
        if (ret > best_ret) {
            best_ret = ret;
            best_tau = tau;
        }
    }
    const double half_window = seed * 0.9 / (n_scan - 1);
    const double tau_star = golden_max(
        [&](double t) { return sys.one_pulse_return11(t); }, best_tau - half_window,
        best_tau + half_window, 60);

    const PulsePropagator prop = sys.propagator(tau_star);
    const auto c10 = prop.xi_coeffs(kIdx10);
    double xi_star = 0.0;
    if (std::abs(c10[1]) > 1e-300) xi_star = std::arg(c10[0]) - std::arg(c10[1]);
    xi_star = std::fmod(xi_star, two_pi);
    if (xi_star < 0) xi_star += two_pi;

    Candidate cand;
    cand.delta = delta;
    cand.tau = tau_star;
    cand.xi = xi_star;
    cand.phases = phases_from_amps(
        {prop.amp(kIdx01, xi_star), prop.amp(kIdx10, xi_star), prop.amp(kIdx11, xi_star)});
    const double defect = cand.phases.phase_defect;
    cand.objective = cand.phases.return01 * cand.phases.return10 * cand.phases.return11 -
                     (defect / pi) * (defect / pi);
    return cand;
}

} // namespace

double RydbergParams::detuned_rabi() const { return std::sqrt(omega_r * omega_r + delta * delta); }

void RydbergParams::validate() const {
    if (omega_r < 0 || tau <= 0 || blockade_b < 0) {
        throw std::invalid_argument("omega_r, blockade must be nonnegative and tau positive");
    }
    if (!std::isfinite(delta) || !std::isfinite(xi)) {
        throw std::invalid_argument("pulse parameters must be finite");
    }
}

PulseState evolve_pulse(const PulseState& psi, const RydbergParams& params) {
    params.validate();
    Vector9 y0;
    for (int k = 0; k < 9; ++k) y0(k) = psi[static_cast<std::size_t>(k)];
    if (std::fabs(y0.squaredNorm() - 1.0) > 1e-6) {
        throw std::invalid_argument("input state must be normalized");
    }

    const double omega_max = params.omega_r * (1.0 + std::fabs(params.omega_asymmetry) / 2.0);
    const double f_max = std::max({std::sqrt(omega_max * omega_max + params.delta * params.delta),
                                   params.blockade_b, std::fabs(params.delta)}) /
                         two_pi;
    if (f_max == 0.0) return psi; // H = 0

    const Matrix9 h = hamiltonian(params, params.xi);
    long steps = static_cast<long>(std::ceil(params.tau * 200.0 * f_max));
    if (steps < 8) steps = 8;

    for (int attempt = 0; attempt < 9; ++attempt) {
        const Vector9 coarse = rk4_run(h, y0, params.tau, steps);
        const Vector9 fine = rk4_run(h, y0, params.tau, 2 * steps);
        const double diff = (coarse - fine).cwiseAbs().maxCoeff();
        const double drift = std::fabs(fine.squaredNorm() - y0.squaredNorm());
        if (diff < 1e-7 && drift < 1e-8) {
            PulseState out;
            for (int k = 0; k < 9; ++k) out[static_cast<std::size_t>(k)] = fine(k);
            return out;
        }
        steps *= 2;
    }
    throw std::runtime_error("pulse integrator did not converge");
}

PulseState evolve_pulse_fixed_steps(const PulseState& psi, const RydbergParams& params,
                                    long steps) {
    params.validate();
    if (steps < 1) throw std::invalid_argument("steps must be positive");
    Vector9 y0;
    for (int k = 0; k < 9; ++k) y0(k) = psi[static_cast<std::size_t>(k)];
    const Vector9 y = rk4_run(hamiltonian(params, params.xi), y0, params.tau, steps);
    PulseState out;
    for (int k = 0; k < 9; ++k) out[static_cast<std::size_t>(k)] = y(k);
    return out;
}

GatePhases cz_phases(const RydbergParams& params) {
    params.validate();
    if (params.omega_r <= 0) throw std::invalid_argument("cz_phases requires a nonzero drive");
    return phases_from_amps(exact_two_pulse_amps(params));
}

GatePhases cz_phases_rk4(const RydbergParams& params) {
    params.validate();
    if (params.omega_r <= 0) throw std::invalid_argument("cz_phases requires a nonzero drive");
    RydbergParams first = params;
    first.xi = 0.0;

    auto run = [&](int idx) {
        PulseState psi{};
        psi[static_cast<std::size_t>(idx)] = 1.0;
        psi = evolve_pulse(psi, first);
        psi = evolve_pulse(psi, params);
        return psi[static_cast<std::size_t>(idx)];
    };
    return phases_from_amps({run(kIdx01), run(kIdx10), run(kIdx11)});
}

TuneReport tune_cz_report(double omega_r, double blockade_b) {
    if (omega_r <= 0 || blockade_b <= 0) {
        throw std::invalid_argument("tune_cz requires positive Rabi frequency and blockade");
    }

    Candidate best;
    const int n_grid = 59;
    for (int i = 0; i < n_grid; ++i) {
        const double ratio = -0.6 + (0.58 * i) / (n_grid - 1); // [-0.6, -0.02]
        const Candidate cand = evaluate_delta(omega_r, blockade_b, ratio * omega_r);
        if (cand.objective > best.objective) best = cand;
    }

    const double window = 0.015 * omega_r;
    const double refined = golden_max(
        [&](double d) { return evaluate_delta(omega_r, blockade_b, d).objective; },
        best.delta - window, best.delta + window, 70);
    const Candidate final_cand = evaluate_delta(omega_r, blockade_b, refined);
    if (final_cand.objective > best.objective) best = final_cand;

    const double min_return =
        std::min({best.phases.return01, best.phases.return10, best.phases.return11});
    if (min_return < 0.99) {
        std::ostringstream msg;
        msg << "tune_cz failed to reach return populations >= 0.99; best found: delta/omega="
            << best.delta / omega_r << " tau=" << best.tau << " xi=" << best.xi
            << " returns=(" << best.phases.return01 << "," << best.phases.return10 << ","
            << best.phases.return11 << ")";
        throw std::runtime_error(msg.str());
    }

    TuneReport report;
    report.gate.pulse.omega_r = omega_r;
    report.gate.pulse.blockade_b = blockade_b;
    report.gate.pulse.delta = best.delta;
    report.gate.pulse.tau = best.tau;
    report.gate.pulse.xi = best.xi;
    report.gate.comp_phase_a = -best.phases.phi10;
    report.gate.comp_phase_b = -best.phases.phi01;
    report.phases = best.phases;
    report.objective = best.objective;
    return report;
}

TunedGate tune_cz(double omega_r, double blockade_b) {
    return tune_cz_report(omega_r, blockade_b).gate;
}

std::vector<TuneScanRow> tune_cz_scan(double omega_r, double blockade_b, int n_points) {
    if (omega_r <= 0 || blockade_b <= 0 || n_points < 2) {
        throw std::invalid_argument("tune_cz_scan requires positive inputs and >= 2 points");
    }
    std::vector<TuneScanRow> rows;
    rows.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double ratio = -0.6 + 0.58 * i / (n_points - 1);
        const Candidate cand = evaluate_delta(omega_r, blockade_b, ratio * omega_r);
        TuneScanRow row;
        row.delta_over_omega = ratio;
        row.tau_omega_over_2pi = cand.tau * omega_r / two_pi;
        row.xi = cand.xi;
        row.phase_sum =
            std::remainder(cand.phases.phi11 - cand.phases.phi01 - cand.phases.phi10, two_pi);
        row.return01 = cand.phases.return01;
        row.return10 = cand.phases.return10;
        row.return11 = cand.phases.return11;

        TunedGate gate;
        gate.pulse.omega_r = omega_r;
        gate.pulse.blockade_b = blockade_b;
        gate.pulse.delta = cand.delta;
        gate.pulse.tau = cand.tau;
        gate.pulse.xi = cand.xi;
        gate.comp_phase_a = -cand.phases.phi10;
        gate.comp_phase_b = -cand.phases.phi01;
        row.f_bell = bell_test(gate).fidelity;
        rows.push_back(row);
    }
    return rows;
}

Mat4 cz_matrix() {
    Mat4 m{};
    m[0][0] = 1.0;
    m[1][1] = 1.0;
    m[2][2] = 1.0;
    m[3][3] = -1.0;
    return m;
}

PulseGateResult pulse_gate_unitary(const TunedGate& gate) {
    const TwoPulseAmps amps = exact_two_pulse_amps(gate.pulse);
    PulseGateResult out;
    out.matrix = Mat4{}; // |0> populations are conserved per atom, so the
                         // computational-subspace block is exactly diagonal
    out.matrix[0][0] = 1.0;
    out.matrix[1][1] = amps.a01 * std::exp(cplx{0.0, gate.comp_phase_b});
    out.matrix[2][2] = amps.a10 * std::exp(cplx{0.0, gate.comp_phase_a});
    out.matrix[3][3] = amps.a11 * std::exp(cplx{0.0, gate.comp_phase_a + gate.comp_phase_b});
    out.leakage = std::max({1.0 - std::norm(amps.a01), 1.0 - std::norm(amps.a10),
                            1.0 - std::norm(amps.a11)});
    return out;
}

double distance_to_cz(const Mat4& u) {
    const cplx overlap = u[0][0] + u[1][1] + u[2][2] - u[3][3];
    double frob = 0.0;
    for (const auto& row : u) {
        for (const auto& v : row) frob += std::norm(v);
    }
    const double d2 = frob + 4.0 - 2.0 * std::abs(overlap);
    return std::sqrt(std::max(0.0, d2));
}

namespace {

using Vec4 = std::array<cplx, 4>;

void apply_single(Vec4& v, int qubit, const std::array<cplx, 4>& m) {
    // m = {m00, m01, m10, m11}; qubit 0 is the leftmost bit of the pair index
    const int stride = qubit == 0 ? 2 : 1;
    for (int base : {0, qubit == 0 ? 1 : 2}) {
        const cplx a0 = v[static_cast<std::size_t>(base)];
        const cplx a1 = v[static_cast<std::size_t>(base + stride)];
        v[static_cast<std::size_t>(base)] = m[0] * a0 + m[1] * a1;
        v[static_cast<std::size_t>(base + stride)] = m[2] * a0 + m[3] * a1;
    }
}

std::array<cplx, 4> rot_matrix(double phi, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {cplx{c, 0.0}, cplx{0.0, -1.0} * std::exp(cplx{0.0, -phi}) * s,
            cplx{0.0, -1.0} * std::exp(cplx{0.0, phi}) * s, cplx{c, 0.0}};
}

void apply_rot_both(Vec4& v, double phi, double theta) {
    const auto m = rot_matrix(phi, theta);
    apply_single(v, 0, m);
    apply_single(v, 1, m);
}

double pair_parity(const Vec4& v) {
    return std::norm(v[0]) - std::norm(v[1]) - std::norm(v[2]) + std::norm(v[3]);
}

} // namespace

BellTestResult bell_test(const Mat4& gate, int parity_points) {
    if (parity_points < 5) throw std::invalid_argument("parity scan needs at least 5 points");

    Vec4 psi{cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}};
    apply_rot_both(psi, 0.0, pi / 2.0);
    // conversion phases turning a canonical C_Z into the Bell-circuit entangler
    const std::array<cplx, 4> rz_conv = {std::exp(cplx{0.0, pi / 4.0}), 0.0, 0.0,
                                         std::exp(cplx{0.0, -pi / 4.0})};
    apply_single(psi, 0, rz_conv);
    apply_single(psi, 1, rz_conv);

    Vec4 after{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            after[static_cast<std::size_t>(r)] +=
                gate[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] *
                psi[static_cast<std::size_t>(c)];
        }
    }
    apply_rot_both(after, 0.0, -pi / 2.0);

    BellTestResult res;
    res.p00 = std::norm(after[0]);
    res.p11 = std::norm(after[3]);

    cplx comp{0.0, 0.0};
    for (int k = 0; k < parity_points; ++k) {
        const double phi = two_pi * k / parity_points;
        Vec4 scan = after;
        apply_rot_both(scan, phi, -pi / 2.0);
        comp += pair_parity(scan) * std::exp(cplx{0.0, -2.0 * phi});
    }
    res.parity_amplitude = 2.0 * std::abs(comp) / parity_points;
    res.fidelity = (res.p00 + res.p11 + res.parity_amplitude) / 2.0;
    return res;
}

BellTestResult bell_test(const TunedGate& gate, int parity_points) {
    return bell_test(pulse_gate_unitary(gate).matrix, parity_points);
}

} // namespace natomsim
