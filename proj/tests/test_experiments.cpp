// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>

#include "natomsim/constants.hpp"
#include "natomsim/experiments.hpp"
#include "oracle.hpp"

using namespace natomsim;
using constants::pi;
using constants::two_pi;

namespace {

double non_dc_power_fraction(const ParityScan& scan, int frequency) {
    const int K = static_cast<int>(scan.phases.size());
    double target = 0.0, total = 0.0;
    for (int f = 1; f <= K / 2; ++f) {
        std::complex<double> acc{0, 0};
        for (int k = 0; k < K; ++k) {
            acc += scan.parities[static_cast<std::size_t>(k)] *
                   std::exp(std::complex<double>{0, -f * scan.phases[static_cast<std::size_t>(k)]});
        }
        const double power = std::norm(acc);
        total += power;
        if (f == frequency) target = power;
    }
    return total > 0 ? target / total : 0.0;
}

} // namespace

TEST_CASE("ideal GHZ runs: unit fidelity and an N-fold parity frequency") {
    for (int n = 2; n <= 6; ++n) {
        const GhzRun run = ghz_experiment(n, 500, 0, 1);
        CHECK(run.result.fidelity == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(run.result.p_all0 == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(run.result.p_all1 == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(run.result.c_n == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(non_dc_power_fraction(run.scan, n) > 0.99);
    }
}

TEST_CASE("ideal GHZ_3 parity follows cos(3 phi) up to a fixed offset") {
    const GhzRun run = ghz_experiment(3, 100, 25, 1);
    // amplitude one, frequency three: P(phi) = cos(3 phi + delta)
    std::complex<double> acc{0, 0};
    for (std::size_t k = 0; k < run.scan.phases.size(); ++k) {
        acc += run.scan.parities[k] * std::exp(std::complex<double>{0, -3.0 * run.scan.phases[k]});
    }
    const double delta = std::arg(acc);
    for (std::size_t k = 0; k < run.scan.phases.size(); ++k) {
        CHECK(run.scan.parities[k] ==
              doctest::Approx(std::cos(3.0 * run.scan.phases[k] + delta)).epsilon(1e-8));
    }
}

TEST_CASE("noisy Bell run lands on the measured fidelity band") {
    HarnessOptions opt;
    opt.noise = NoiseParams{}; // calibrated defaults
    const GhzRun run = ghz_experiment(2, 8000, 0, 3, opt);
    CHECK(run.result.fidelity > 0.88);
    CHECK(run.result.fidelity < 0.95);
}

TEST_CASE("ghz_experiment validates inputs") {
    CHECK_THROWS_AS(ghz_experiment(1, 100, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(ghz_experiment(7, 100, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(ghz_experiment(3, 100, 7, 1), std::invalid_argument); // < 4n+1
}

TEST_CASE("fit_ghz_decay round-trips the published constants") {
    for (const auto& truth : {GhzDecayFit{0.192, 2.21, -1.014, 0}, GhzDecayFit{0.269, 1.96, -0.872, 0}}) {
        std::vector<std::pair<double, double>> pts;
        for (int n = 2; n <= 6; ++n) {
            pts.emplace_back(n, truth.a + truth.b / (n - truth.c));
        }
        const GhzDecayFit fit = fit_ghz_decay(pts);
        CHECK(fit.a == doctest::Approx(truth.a).epsilon(1e-6));
        CHECK(fit.b == doctest::Approx(truth.b).epsilon(1e-6));
        CHECK(fit.c == doctest::Approx(truth.c).epsilon(1e-5));
        CHECK(fit.rss < 1e-12);
    }
}

TEST_CASE("fit_ghz_decay on constant data collapses to b ~ 0") {
    std::vector<std::pair<double, double>> pts = {{2, 0.4}, {3, 0.4}, {4, 0.4}, {5, 0.4}};
    const GhzDecayFit fit = fit_ghz_decay(pts);
    CHECK(std::fabs(fit.b) < 1e-6);
    CHECK(fit.a == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("fit_ghz_decay error paths") {
    CHECK_THROWS_AS(fit_ghz_decay({{2, 1}, {3, 1}, {4, 1}}), std::invalid_argument);
    // identical abscissae make the design matrix singular
    CHECK_THROWS_AS(fit_ghz_decay({{3, 0.5}, {3, 0.6}, {3, 0.4}, {3, 0.55}}), std::runtime_error);
}

TEST_CASE("QPE with exact Z-power phases is deterministic") {
    const std::pair<double, std::string> cases[] = {
        {0.0, "00"}, {0.5, "01"}, {1.0, "10"}, {1.5, "11"}};
    for (const auto& [power, target] : cases) {
        const QpeRun run = qpe_run(ZPowerU{power}, 2, 100, 1);
        REQUIRE(run.probs.count(target) == 1);
        CHECK(run.probs.at(target) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(run.modal_bits == target);
    }
}

TEST_CASE("h2_spectrum reproduces the published eigenphases and overlaps") {
    const H2Spectrum s = h2_spectrum(H2Problem::sto3g());
    CHECK(std::fabs(s.frac_ground - 0.6282) < 5e-5);
    CHECK(std::fabs(s.frac_excited - 0.3718) < 5e-5);
    CHECK(s.overlap_ground == doctest::Approx(0.82).epsilon(0.01 / 0.82));
    CHECK(s.overlap_excited == doctest::Approx(0.18).epsilon(0.01 / 0.18));
    CHECK(s.energy_ground_ha == doctest::Approx(-1.0495).epsilon(1e-3));
    CHECK(s.energy_excited_ha == doctest::Approx(0.3920).epsilon(3e-3));
}

TEST_CASE("H2 QPE ideal histogram concentrates on 101 and 011") {
    const QpeRun run = qpe_run(H2U{H2Problem::sto3g()}, 3, 700, 1);
    CHECK(run.modal_bits == "101");
    const double p101 = run.probs.at("101");
    const double p011 = run.probs.at("011");
    CHECK(p101 + p011 >= 0.93);
    CHECK(p101 / (p101 + p011) == doctest::Approx(0.82).epsilon(0.03 / 0.82));
    REQUIRE(run.energy_ha.has_value());
    CHECK(*run.energy_ha == doctest::Approx(-1.06).epsilon(0.01 / 1.06));
}

TEST_CASE("h2_energy maps bitstrings to energies") {
    const H2Problem p = H2Problem::sto3g();
    CHECK(h2_energy("101", p) == doctest::Approx(-1.06).epsilon(0.01 / 1.06));
    CHECK(h2_energy("000", p) == doctest::Approx(-0.328717).epsilon(1e-9));
    CHECK(h2_energy("011", p) == doctest::Approx(0.398).epsilon(0.02));
}

TEST_CASE("qpe_run validates the register size") {
    CHECK_THROWS_AS(qpe_run(ZPowerU{1.0}, 4, 100, 1), std::invalid_argument);
}

TEST_CASE("the swapless inverse QFT equals QFT-dagger times the bit reversal") {
    for (int m : {2, 3}) {
        AbstractProgram prog;
        prog.n_qubits = m;
        std::vector<int> wires(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) wires[static_cast<std::size_t>(j)] = j;
        append_inverse_qft(prog, wires);

        const int dim = 1 << m;
        oracle::Mat perm = oracle::Mat::Zero(dim, dim);
        for (int k = 0; k < dim; ++k) {
            int rev = 0;
            for (int b = 0; b < m; ++b) rev |= ((k >> b) & 1) << (m - 1 - b);
            perm(rev, k) = 1.0;
        }
        const oracle::Mat expected = oracle::qft_matrix(m).adjoint() * perm;
        CHECK(oracle::phase_distance(oracle::abstract_unitary(prog), expected) < 1e-9);
    }
}

TEST_CASE("maxcut_oracle enumerations") {
    const MaxCutSolution line = maxcut_oracle(line3_graph());
    CHECK(line.s_max == 2);
    REQUIRE(line.optimal_partitions.size() == 2);
    CHECK(line.optimal_partitions[0] == "010");
    CHECK(line.optimal_partitions[1] == "101");

    const MaxCutSolution edge = maxcut_oracle(GraphSpec{2, {{0, 1}}});
    CHECK(edge.s_max == 1);

    const MaxCutSolution t4 = maxcut_oracle(t4_graph());
    CHECK(t4.s_max == 3);
}

TEST_CASE("graph validation rejects self-loops and duplicates") {
    CHECK_THROWS_AS(GraphSpec({2, {{0, 0}}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec({3, {{0, 1}, {1, 0}}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec({2, {{0, 3}}}).validate(), std::invalid_argument);
}

TEST_CASE("QAOA ideal ratios at the published angles") {
    CHECK(qaoa_run(line3_graph(), {1.25}, {1.67}, 100, 1).r_a ==
          doctest::Approx(0.825).epsilon(0.005 / 0.825));
    CHECK(qaoa_run(t4_graph(), {0.750}, {0.696}, 100, 1).r_a ==
          doctest::Approx(0.772).epsilon(0.005 / 0.772));
    CHECK(qaoa_run(t4_graph(), {1.71, 1.19}, {0.700, 0.624}, 100, 1).r_a ==
          doctest::Approx(0.934).epsilon(0.005 / 0.934));
    CHECK(qaoa_run(t4_graph(), {1.63, 1.77, 0.172}, {0.194, 0.424, 1.39}, 100, 1).r_a ==
          doctest::Approx(1.0).epsilon(0.005));
}

TEST_CASE("p = 0 QAOA equals the uniform-sampling ratio") {
    const GraphSpec g = line3_graph();
    const QaoaRun run = qaoa_run(g, {}, {}, 100, 1);
    double uniform = 0.0;
    for (std::uint64_t k = 0; k < 8; ++k) uniform += cut_value(g, k);
    uniform /= 8.0 * maxcut_oracle(g).s_max;
    CHECK(run.r_a == doctest::Approx(uniform).epsilon(1e-9));
}

TEST_CASE("compiled QAOA circuit matches the abstract unitary on 4 qubits") {
    const GraphSpec g = t4_graph();
    const std::vector<double> betas = {0.750}, gammas = {0.696};
    AbstractProgram prog;
    prog.n_qubits = 4;
    prog.gates.emplace_back(ag::Global{pi / 2.0, pi / 2.0});
    for (const auto& e : g.edges) prog.gates.emplace_back(ag::Zz{e.first, e.second, gammas[0]});
    prog.gates.emplace_back(ag::Global{0.0, -2.0 * betas[0]});

    const NativeCircuit compiled = compile(prog, qaoa_layout(g));
    CHECK(oracle::phase_distance(oracle::native_unitary(compiled), oracle::abstract_unitary(prog)) <
          1e-9);
}

TEST_CASE("histogram cross-check identity holds on ideal and noisy runs") {
    const GraphSpec g = t4_graph();
    const QaoaRun ideal = qaoa_run(g, {0.750}, {0.696}, 4000, 5);
    // independent recomputation from the histogram
    double acc = 0;
    for (const auto& [bits, count] : ideal.histogram.counts) {
        int cut = 0;
        for (const auto& e : g.edges) {
            cut += bits[static_cast<std::size_t>(e.first)] != bits[static_cast<std::size_t>(e.second)];
        }
        acc += static_cast<double>(count) * cut;
    }
    acc /= 4000.0 * 3.0;
    CHECK(ideal.r_a_histogram == doctest::Approx(acc).epsilon(1e-12));

    HarnessOptions opt;
    opt.noise = NoiseParams{};
    const QaoaRun noisy = qaoa_run(g, {0.750}, {0.696}, 2000, 5, opt);
    CHECK(noisy.r_a == doctest::Approx(noisy.r_a_histogram).epsilon(1e-12));
}

TEST_CASE("noisy QAOA cannot beat the ideal ratio at matched angles") {
    const GraphSpec g = t4_graph();
    const double ideal = qaoa_run(g, {1.63, 1.77, 0.172}, {0.194, 0.424, 1.39}, 100, 1).r_a;
    HarnessOptions opt;
    opt.noise = NoiseParams{};
    const int shots = 20000;
    const QaoaRun noisy = qaoa_run(g, {1.63, 1.77, 0.172}, {0.194, 0.424, 1.39}, shots, 7, opt);
    CHECK(noisy.r_a <= ideal + 3.0 / std::sqrt(double(shots)));
    CHECK(noisy.r_a < ideal); // the p=3 drop
}

TEST_CASE("qaoa_optimize reaches the published optima") {
    CHECK(qaoa_optimize(GraphSpec{2, {{0, 1}}}, 1, 8, 1).r_a >= 0.999);
    CHECK(qaoa_optimize(line3_graph(), 2, 16, 1).r_a >= 0.99);
    CHECK(qaoa_optimize(t4_graph(), 3, 16, 1).r_a >= 0.995);
}

TEST_CASE("pumped |1...1> start reproduces every benchmark via the opening pi pulse") {
    HarnessOptions pumped;
    pumped.start_in_ones = true;

    const GhzRun ghz = ghz_experiment(3, 400, 0, 1, pumped);
    CHECK(ghz.result.fidelity == doctest::Approx(1.0).epsilon(1e-9));

    const QpeRun qpe = qpe_run(ZPowerU{1.0}, 2, 100, 1, pumped);
    CHECK(qpe.probs.at("10") == doctest::Approx(1.0).epsilon(1e-9));

    CHECK(qaoa_run(t4_graph(), {0.750}, {0.696}, 100, 1, pumped).r_a ==
          doctest::Approx(0.772).epsilon(0.005 / 0.772));

    // noisy path accepts the pumped start as well
    pumped.noise = NoiseParams{};
    const GhzRun noisy = ghz_experiment(2, 2000, 0, 5, pumped);
    CHECK(noisy.result.fidelity > 0.85);
}

TEST_CASE("config-group layouts are honored") {
    HarnessOptions opt;
    opt.layout = {{0, 0}, {0, 1}, {0, 2}};
    opt.cnot_pairs = {{0, 1}, {0, 2}};
    const GhzRun run = ghz_experiment(3, 100, 0, 1, opt);
    CHECK(run.result.fidelity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(run.circuit.sites[2] == SiteCoord{0, 2});

    HarnessOptions bad;
    bad.layout = {{0, 0}, {1, 1}, {2, 2}};
    bad.cnot_pairs = {{0, 1}, {0, 2}};
    CHECK_THROWS_AS(ghz_experiment(3, 100, 0, 1, bad), ConnectivityError);
}

TEST_CASE("experiments are deterministic for a fixed seed") {
    const GhzRun a = ghz_experiment(3, 500, 0, 42);
    const GhzRun b = ghz_experiment(3, 500, 0, 42);
    CHECK(a.histogram.counts == b.histogram.counts);
    CHECK(a.result.fidelity == b.result.fidelity);

    HarnessOptions opt;
    opt.noise = NoiseParams{};
    const QaoaRun qa = qaoa_run(t4_graph(), {0.75}, {0.696}, 500, 42, opt);
    const QaoaRun qb = qaoa_run(t4_graph(), {0.75}, {0.696}, 500, 42, opt);
    CHECK(qa.histogram.counts == qb.histogram.counts);
    CHECK(qa.r_a == qb.r_a);
}
