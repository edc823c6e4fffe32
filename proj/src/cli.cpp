// SPDX-License-Identifier: Apache-2.0
#include "natomsim/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "natomsim/constants.hpp"
#include "natomsim/experiments.hpp"
#include "natomsim/machine.hpp"
#include "natomsim/pulse.hpp"
#include "natomsim/rng.hpp"

namespace natomsim {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using constants::two_pi;

struct Common {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool ideal = false;
    double noise_scale = 1.0;
};

// Registered once on the top-level app; subcommands reach them through
// fallthrough, so both "natomsim --seed 1 ghz ..." and "natomsim ghz --seed 1"
// parse.
void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config_path, "machine config file (default: built-in)");
    app->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
    app->add_option("--seed", c.seed, "RNG seed (default: config seed)")
        ->each([&](const std::string&) { c.seed_given = true; });
    app->add_flag("--ideal", c.ideal, "disable all noise channels");
    app->add_option("--noise-scale", c.noise_scale, "multiplier on all channel rates")
        ->capture_default_str();
}

struct LoadedConfig {
    MachineConfig cfg;
    std::string hash;
};

LoadedConfig resolve_config(const Common& c) {
    std::string text;
    if (c.config_path.empty()) {
        text = default_config_text();
    } else {
        std::ifstream in(c.config_path);
        if (!in) throw ConfigError("cannot open config file '" + c.config_path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return {parse_config(text), config_hash(text)};
}

std::uint64_t resolve_seed(const Common& c, const MachineConfig& cfg) {
    return c.seed_given ? c.seed : cfg.seed;
}

HarnessOptions harness_options(const Common& c, const MachineConfig& cfg) {
    HarnessOptions opt;
    opt.timing = cfg.timing;
    opt.noise_scale = c.noise_scale;
    opt.start_in_ones = cfg.pumped_ones;
    if (!c.ideal) opt.noise = cfg.noise;
    return opt;
}

void apply_group_layout(HarnessOptions& opt, const MachineConfig& cfg, const std::string& name) {
    const auto it = cfg.groups.find(name);
    if (it == cfg.groups.end()) return; // built-in geometry
    opt.layout = it->second.sites;
    opt.cnot_pairs = it->second.pairs;
}

json run_record(const std::string& command, const LoadedConfig& lc, std::uint64_t seed) {
    json j;
    j["command"] = command;
    j["version"] = kToolVersion;
    j["config_hash"] = lc.hash;
    j["seed"] = seed;
    return j;
}

json histogram_json(const ShotHistogram& h) {
    json j;
    j["shots"] = h.shots;
    json counts = json::object();
    for (const auto& [bits, count] : h.counts) counts[bits] = count;
    j["counts"] = counts;
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<double> parse_angle_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

// Published circuit angles per (graph, p).
bool benchmark_angles(const std::string& graph, int p, std::vector<double>& betas,
                  std::vector<double>& gammas) {
    if (graph == "line3" && p == 1) {
        betas = {1.25};
        gammas = {1.67};
    } else if (graph == "line3" && p == 2) {
        betas = {0.331, 0.229};
        gammas = {1.66, 1.44};
    } else if (graph == "t4" && p == 1) {
        betas = {0.750};
        gammas = {0.696};
    } else if (graph == "t4" && p == 2) {
        betas = {1.71, 1.19};
        gammas = {0.700, 0.624};
    } else if (graph == "t4" && p == 3) {
        betas = {1.63, 1.77, 0.172};
        gammas = {0.194, 0.424, 1.39};
    } else {
        return false;
    }
    return true;
}

int cmd_ghz(const Common& common, int n, int shots, int scan_points) {
    const LoadedConfig lc = resolve_config(common);
    const std::uint64_t seed = resolve_seed(common, lc.cfg);
    HarnessOptions opt = harness_options(common, lc.cfg);
    apply_group_layout(opt, lc.cfg, "ghz");
    const GhzRun run = ghz_experiment(n, shots, scan_points, seed, opt);

    json j = run_record("ghz", lc, seed);
    j["inputs"] = {{"n", n}, {"shots", shots}, {"scan_points", run.scan.phases.size()},
                   {"ideal", common.ideal}, {"noise_scale", common.noise_scale}};
    j["histogram"] = histogram_json(run.histogram);
    j["metrics"] = {{"p_all0", run.result.p_all0},
                    {"p_all1", run.result.p_all1},
                    {"parity_amplitude", run.result.c_n},
                    {"fidelity", run.result.fidelity}};
    j["duration_estimate_s"] = run.duration_s;
    write_json(fs::path(common.out_dir) / "ghz_result.json", j);

    std::ostringstream csv;
    csv << "phi,parity\n";
    for (std::size_t k = 0; k < run.scan.phases.size(); ++k) {
        csv << run.scan.phases[k] << "," << run.scan.parities[k] << "\n";
    }
    write_text(fs::path(common.out_dir) / "ghz_parity_scan.csv", csv.str());

    std::cout << "ghz n=" << n << " fidelity=" << run.result.fidelity
              << " C_N=" << run.result.c_n << " duration=" << run.duration_s * 1e6 << "us\n";
    return 0;
}

int cmd_qpe(const Common& common, int m, double z_power, bool use_h2, int shots) {
    const LoadedConfig lc = resolve_config(common);
    const std::uint64_t seed = resolve_seed(common, lc.cfg);
    QpeUnitary u;
    if (use_h2) {
        u = H2U{H2Problem::sto3g()};
    } else {
        u = ZPowerU{z_power};
    }
    HarnessOptions opt = harness_options(common, lc.cfg);
    apply_group_layout(opt, lc.cfg, m == 2 ? "qpe3" : "qpe4");
    const QpeRun run = qpe_run(u, m, shots, seed, opt);

    json j = run_record("qpe", lc, seed);
    j["inputs"] = {{"m_bits", m}, {"unitary", use_h2 ? "h2" : "z_power"},
                   {"z_power", use_h2 ? json() : json(z_power)}, {"shots", shots},
                   {"ideal", common.ideal}, {"noise_scale", common.noise_scale}};
    j["histogram"] = histogram_json(run.histogram);
    json metrics = {{"modal_bits", run.modal_bits}, {"modal_fraction", run.modal_fraction}};
    json probs = json::object();
    for (const auto& [bits, p] : run.probs) probs[bits] = p;
    metrics["probs"] = probs;
    if (run.energy_ha) metrics["energy_ha"] = *run.energy_ha;
    j["metrics"] = metrics;
    j["duration_estimate_s"] = run.duration_s;
    write_json(fs::path(common.out_dir) / "qpe_result.json", j);

    std::ostringstream csv;
    csv << "bits,probability,count\n";
    for (const auto& [bits, p] : run.probs) {
        const auto it = run.histogram.counts.find(bits);
        csv << bits << "," << p << "," << (it == run.histogram.counts.end() ? 0 : it->second)
            << "\n";
    }
    write_text(fs::path(common.out_dir) / "qpe_hist.csv", csv.str());

    std::cout << "qpe m=" << m << " modal=" << run.modal_bits;
    if (run.energy_ha) std::cout << " energy=" << *run.energy_ha << "Ha";
    std::cout << "\n";
    return 0;
}

int cmd_qaoa(const Common& common, const std::string& graph_name, int p,
             const std::string& betas_csv, const std::string& gammas_csv, bool optimize,
             int restarts, int shots) {
    const LoadedConfig lc = resolve_config(common);
    const std::uint64_t seed = resolve_seed(common, lc.cfg);
    HarnessOptions opt = harness_options(common, lc.cfg);

    GraphSpec graph;
    if (graph_name == "line3") {
        graph = line3_graph();
    } else if (graph_name == "t4") {
        graph = t4_graph();
    } else {
        throw CLI::ValidationError("--graph", "expected line3 or t4");
    }
    apply_group_layout(opt, lc.cfg, graph_name == "line3" ? "qaoa3" : "qaoa4");

    std::vector<double> betas = parse_angle_list(betas_csv);
    std::vector<double> gammas = parse_angle_list(gammas_csv);
    json opt_json;
    if (optimize) {
        HarnessOptions ideal_opt = opt;
        ideal_opt.noise.reset();
        const QaoaOptimum best = qaoa_optimize(graph, p, restarts, seed, ideal_opt);
        betas = best.betas;
        gammas = best.gammas;
        opt_json = {{"restarts", restarts}, {"optimized_r_a", best.r_a}};
    } else if (betas.empty() && gammas.empty()) {
        if (!benchmark_angles(graph_name, p, betas, gammas)) {
            throw CLI::ValidationError("--p", "no published angles for this (graph, p); pass --betas/--gammas");
        }
    }
    if (static_cast<int>(betas.size()) != p || static_cast<int>(gammas.size()) != p) {
        throw CLI::ValidationError("--betas/--gammas", "need exactly p angles each");
    }

    const QaoaRun run = qaoa_run(graph, betas, gammas, shots, seed, opt);

    json j = run_record("qaoa", lc, seed);
    j["inputs"] = {{"graph", graph_name}, {"p", p}, {"betas", betas}, {"gammas", gammas},
                   {"shots", shots}, {"ideal", common.ideal}, {"noise_scale", common.noise_scale}};
    if (!opt_json.is_null()) j["optimizer"] = opt_json;
    j["histogram"] = histogram_json(run.histogram);
    j["metrics"] = {{"approximation_ratio", run.r_a}, {"r_a_histogram", run.r_a_histogram}};
    j["duration_estimate_s"] = run.duration_s;
    write_json(fs::path(common.out_dir) / "qaoa_result.json", j);

    std::ostringstream csv;
    csv << "bits,count,cut\n";
    for (const auto& [bits, count] : run.histogram.counts) {
        csv << bits << "," << count << "," << cut_value(graph, bits_to_index(bits)) << "\n";
    }
    write_text(fs::path(common.out_dir) / "qaoa_hist.csv", csv.str());

    std::cout << "qaoa graph=" << graph_name << " p=" << p << " R_a=" << run.r_a << "\n";
    return 0;
}

int cmd_tune_cz(const Common& common, double rabi_mhz, double blockade_mhz, int scan_points) {
    const LoadedConfig lc = resolve_config(common);
    const double omega = (rabi_mhz > 0 ? rabi_mhz * 1e6 : lc.cfg.rydberg_rabi_hz) * two_pi;
    const double blockade =
        (blockade_mhz > 0 ? blockade_mhz * 1e6 : lc.cfg.rydberg_blockade_hz) * two_pi;

    const auto rows = tune_cz_scan(omega, blockade, scan_points);
    std::ostringstream csv;
    csv << "delta_over_omega,tau_omega_over_2pi,xi,phi11_minus_phi01_minus_phi10,"
           "return01,return10,return11,f_bell\n";
    for (const auto& r : rows) {
        csv << r.delta_over_omega << "," << r.tau_omega_over_2pi << "," << r.xi << ","
            << r.phase_sum << "," << r.return01 << "," << r.return10 << "," << r.return11 << ","
            << r.f_bell << "\n";
    }
    write_text(fs::path(common.out_dir) / "tune_cz_scan.csv", csv.str());

    const TuneReport report = tune_cz_report(omega, blockade);
    const BellTestResult bell = bell_test(report.gate);
    const PulseGateResult gate = pulse_gate_unitary(report.gate);

    json j = run_record("tune-cz", lc, resolve_seed(common, lc.cfg));
    j["inputs"] = {{"rabi_hz", omega / two_pi}, {"blockade_hz", blockade / two_pi}};
    j["metrics"] = {{"delta_over_omega", report.gate.pulse.delta / omega},
                    {"tau_s", report.gate.pulse.tau},
                    {"xi", report.gate.pulse.xi},
                    {"comp_phase_a", report.gate.comp_phase_a},
                    {"comp_phase_b", report.gate.comp_phase_b},
                    {"objective", report.objective},
                    {"phase_defect", report.phases.phase_defect},
                    {"return01", report.phases.return01},
                    {"return10", report.phases.return10},
                    {"return11", report.phases.return11},
                    {"leakage", gate.leakage},
                    {"distance_to_cz", distance_to_cz(gate.matrix)},
                    {"f_bell", bell.fidelity}};
    write_json(fs::path(common.out_dir) / "tune_cz_result.json", j);

    std::cout << "tune-cz delta/omega=" << report.gate.pulse.delta / omega
              << " F_bell=" << bell.fidelity << "\n";
    return 0;
}

int cmd_trap_report(const Common& common) {
    const LoadedConfig lc = resolve_config(common);
    const TrapProfile p = trap_profile(lc.cfg.trap);

    std::ostringstream csv;
    csv << "quantity,value,unit\n";
    csv << "ic_ratio," << p.ic_ratio << ",I_d\n";
    csv << "is_ratio," << p.is_ratio << ",I_d\n";
    csv << "it_ratio," << p.it_ratio << ",I_d\n";
    csv << "itz_ratio," << p.itz_ratio << ",I_d\n";
    csv << "z_max," << p.z_max_m * 1e6 << ",um\n";
    csv << "kappa_x," << p.kappa_x << ",N/m\n";
    csv << "kappa_z," << p.kappa_z << ",N/m\n";
    csv << "f_vib_radial," << p.f_vib_radial_hz / 1e3 << ",kHz\n";
    csv << "f_vib_axial," << p.f_vib_axial_hz / 1e3 << ",kHz\n";
    csv << "sigma_x," << p.sigma_x_m * 1e9 << ",nm\n";
    csv << "sigma_z," << p.sigma_z_m * 1e9 << ",nm\n";
    write_text(fs::path(common.out_dir) / "trap_profile.csv", csv.str());

    // Joint T2* grid over atom temperature and magnetic noise.
    std::ostringstream grid;
    grid << "t_atom_uk,sigma_b_mg,t2_star_ms\n";
    for (int ti = 1; ti <= 20; ++ti) {
        for (int bi = 1; bi <= 20; ++bi) {
            CoherenceInputs in = lc.cfg.coherence;
            in.atom_temperature_k = 0.5e-6 * ti;
            in.sigma_b_t = 2e-7 * bi * 10.0; // 0.02..0.4 mT range in mG steps of 2
            const CoherenceTimes t = coherence_model(in);
            grid << 0.5 * ti << "," << 0.02 * bi * 100.0 << "," << t.t2_star_s * 1e3 << "\n";
        }
    }
    write_text(fs::path(common.out_dir) / "t2star_grid.csv", grid.str());

    json j = run_record("trap-report", lc, resolve_seed(common, lc.cfg));
    j["metrics"] = {{"it_ratio", p.it_ratio},       {"itz_ratio", p.itz_ratio},
                    {"f_vib_radial_hz", p.f_vib_radial_hz}, {"f_vib_axial_hz", p.f_vib_axial_hz},
                    {"sigma_x_m", p.sigma_x_m},     {"sigma_z_m", p.sigma_z_m}};
    write_json(fs::path(common.out_dir) / "trap_report.json", j);

    std::cout << "trap-report it/id=" << p.it_ratio << " f_radial=" << p.f_vib_radial_hz / 1e3
              << "kHz f_axial=" << p.f_vib_axial_hz / 1e3 << "kHz\n";
    return 0;
}

int cmd_coherence_report(const Common& common) {
    const LoadedConfig lc = resolve_config(common);
    const CoherenceTimes point = coherence_model(lc.cfg.coherence);

    std::ostringstream grid;
    grid << "t_atom_uk,sigma_b_mg,t2_star_ms\n";
    for (double t_uk = 1.0; t_uk <= 10.0 + 1e-9; t_uk += 0.5) {
        for (double b_mg = 2.0; b_mg <= 40.0 + 1e-9; b_mg += 2.0) {
            CoherenceInputs in = lc.cfg.coherence;
            in.atom_temperature_k = t_uk * 1e-6;
            in.sigma_b_t = b_mg * 1e-7; // 1 mG = 1e-7 T
            grid << t_uk << "," << b_mg << "," << coherence_model(in).t2_star_s * 1e3 << "\n";
        }
    }
    write_text(fs::path(common.out_dir) / "coherence_grid.csv", grid.str());

    json j = run_record("coherence-report", lc, resolve_seed(common, lc.cfg));
    j["metrics"] = {{"t2_magnetic_s", point.t2_magnetic_s},
                    {"t2_motion_s", point.t2_motion_s},
                    {"t2_star_s", point.t2_star_s}};
    write_json(fs::path(common.out_dir) / "coherence_report.json", j);

    std::cout << "coherence-report T2*=" << point.t2_star_s * 1e3 << "ms\n";
    return 0;
}

int cmd_rearrange(const Common& common, double fill, const std::string& group_name) {
    const LoadedConfig lc = resolve_config(common);
    const std::uint64_t seed = resolve_seed(common, lc.cfg);
    const QubitGroup& grp = lc.cfg.group(group_name);

    ArrayOccupancy occ;
    occ.targets.insert(grp.sites.begin(), grp.sites.end());
    Rng rng(seed, 0);
    for (int r = 0; r < lc.cfg.array_rows; ++r) {
        for (int c = 0; c < lc.cfg.array_cols; ++c) {
            if (rng.uniform() < fill) occ.occupied.insert({r, c});
        }
    }
    if (occ.occupied.size() < occ.targets.size()) {
        throw std::runtime_error("random occupancy has fewer atoms than targets; raise --fill");
    }
    const MovePlan plan = plan_rearrangement(occ);

    std::ostringstream csv;
    csv << "from_row,from_col,to_row,to_col\n";
    for (const auto& m : plan.moves) {
        csv << m.from.row << "," << m.from.col << "," << m.to.row << "," << m.to.col << "\n";
    }
    write_text(fs::path(common.out_dir) / "rearrange_plan.csv", csv.str());

    json j = run_record("rearrange", lc, seed);
    j["inputs"] = {{"fill", fill}, {"group", group_name}};
    j["metrics"] = {{"n_atoms", occ.occupied.size()},
                    {"n_targets", occ.targets.size()},
                    {"n_moves", plan.moves.size()},
                    {"assignment_cost", plan.total_cost}};
    write_json(fs::path(common.out_dir) / "rearrange_result.json", j);

    std::cout << "rearrange atoms=" << occ.occupied.size() << " moves=" << plan.moves.size()
              << " cost=" << plan.total_cost << "\n";
    return 0;
}

int cmd_compile(const Common& common, const std::string& circuit_name, int n, double z_power,
                int p, const std::string& out_name) {
    const LoadedConfig lc = resolve_config(common);
    NativeCircuit circuit;
    if (circuit_name == "ghz") {
        AbstractProgram prog;
        prog.n_qubits = n;
        prog.gates.emplace_back(ag::H{0});
        for (const auto& pr : ghz_cnot_pairs(n)) prog.gates.emplace_back(ag::Cnot{pr.first, pr.second});
        circuit = compile(prog, ghz_chain_layout(n));
    } else if (circuit_name == "qpe") {
        const QpeRun run = qpe_run(ZPowerU{z_power}, n, 1, 1, HarnessOptions{lc.cfg.timing, {}, 1.0});
        circuit = run.circuit;
        circuit.ops.pop_back(); // strip the MeasureAll added by the harness
    } else if (circuit_name == "qpe-h2") {
        const QpeRun run =
            qpe_run(H2U{H2Problem::sto3g()}, 3, 1, 1, HarnessOptions{lc.cfg.timing, {}, 1.0});
        circuit = run.circuit;
        circuit.ops.pop_back();
    } else if (circuit_name == "qaoa-line3" || circuit_name == "qaoa-t4") {
        const std::string graph_name = circuit_name.substr(5);
        std::vector<double> betas, gammas;
        if (!benchmark_angles(graph_name, p, betas, gammas)) {
            throw CLI::ValidationError("--p", "no published angles for this (graph, p)");
        }
        const GraphSpec graph = graph_name == "line3" ? line3_graph() : t4_graph();
        const QaoaRun run = qaoa_run(graph, betas, gammas, 1, 1, HarnessOptions{lc.cfg.timing, {}, 1.0});
        circuit = run.circuit;
        circuit.ops.pop_back();
    } else {
        throw CLI::ValidationError("--circuit", "expected ghz | qpe | qpe-h2 | qaoa-line3 | qaoa-t4");
    }
    circuit.ops.emplace_back(MeasureAll{});

    const fs::path path = fs::path(common.out_dir) / out_name;
    write_text(path, serialize_circuit(circuit));

    int n_global = 0, n_rz = 0, n_cz = 0;
    for (const auto& op : circuit.ops) {
        n_global += std::holds_alternative<GlobalRot>(op);
        n_rz += std::holds_alternative<LocalRz>(op);
        n_cz += std::holds_alternative<Cz>(op);
    }
    json j = run_record("compile", lc, resolve_seed(common, lc.cfg));
    j["inputs"] = {{"circuit", circuit_name}, {"n", n}, {"z_power", z_power}, {"p", p}};
    j["metrics"] = {{"ops_global", n_global},
                    {"ops_rz", n_rz},
                    {"ops_cz", n_cz},
                    {"duration_estimate_s", estimate_duration(circuit, lc.cfg.timing)},
                    {"file", path.string()}};
    write_json(fs::path(common.out_dir) / "compile_result.json", j);

    std::cout << "compile " << circuit_name << " -> " << path.string() << " (GR=" << n_global
              << " RZ=" << n_rz << " CZ=" << n_cz << ")\n";
    return 0;
}

} // namespace

int run_command(const std::vector<std::string>& argv) {
    CLI::App app{"natomsim: neutral-atom gate-model machine twin"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    add_common(&app, common);

    // ghz
    int ghz_n = 4, ghz_shots = 2000, ghz_scan = 0;
    CLI::App* ghz = app.add_subcommand("ghz", "GHZ preparation and parity analysis");
    ghz->add_option("--n", ghz_n, "qubit count (2..6)")->required();
    ghz->add_option("--shots", ghz_shots)->capture_default_str();
    ghz->add_option("--scan-points", ghz_scan, "parity phase points (0 = 4n+1)");

    // qpe
    int qpe_m = 2, qpe_shots = 700;
    double qpe_zpow = 1.0;
    bool qpe_h2 = false;
    CLI::App* qpe = app.add_subcommand("qpe", "quantum phase estimation");
    qpe->add_option("--m", qpe_m, "measurement bits (2 or 3)")->required();
    qpe->add_option("--z-power", qpe_zpow, "U = Z^power")->capture_default_str();
    qpe->add_flag("--h2", qpe_h2, "use the Trotterized H2 unitary");
    qpe->add_option("--shots", qpe_shots)->capture_default_str();

    // qaoa
    std::string qaoa_graph = "t4", qaoa_betas, qaoa_gammas;
    int qaoa_p = 1, qaoa_restarts = 16, qaoa_shots = 2000;
    bool qaoa_opt = false;
    CLI::App* qaoa = app.add_subcommand("qaoa", "QAOA MaxCut");
    qaoa->add_option("--graph", qaoa_graph, "line3 | t4")->capture_default_str();
    qaoa->add_option("--p", qaoa_p, "layer count")->capture_default_str();
    qaoa->add_option("--betas", qaoa_betas, "comma-separated mixer angles");
    qaoa->add_option("--gammas", qaoa_gammas, "comma-separated cost angles");
    qaoa->add_flag("--optimize", qaoa_opt, "optimize angles before running");
    qaoa->add_option("--restarts", qaoa_restarts)->capture_default_str();
    qaoa->add_option("--shots", qaoa_shots)->capture_default_str();

    // tune-cz
    double tune_rabi = 0.0, tune_blockade = 0.0;
    int tune_points = 30;
    CLI::App* tune = app.add_subcommand("tune-cz", "tune the Rydberg C_Z pulse parameters");
    tune->add_option("--rabi-mhz", tune_rabi, "Omega_R/2pi in MHz (default: config)");
    tune->add_option("--blockade-mhz", tune_blockade, "B/2pi in MHz (default: config)");
    tune->add_option("--scan-points", tune_points)->capture_default_str();

    // trap-report / coherence-report
    CLI::App* trap = app.add_subcommand("trap-report", "trap array analytics");
    CLI::App* coh = app.add_subcommand("coherence-report", "T2* model report");

    // rearrange
    double fill = 0.6;
    std::string group_name = "ghz";
    CLI::App* rearr = app.add_subcommand("rearrange", "plan atom rearrangement moves");
    rearr->add_option("--fill", fill, "random occupancy probability")->capture_default_str();
    rearr->add_option("--group", group_name, "target site group")->capture_default_str();

    // compile
    std::string circ_name = "ghz", circ_out = "circuit.nqc";
    int circ_n = 4, circ_p = 1;
    double circ_zpow = 1.0;
    CLI::App* comp = app.add_subcommand("compile", "compile a benchmark circuit to native ops");
    comp->add_option("--circuit", circ_name, "ghz | qpe | qpe-h2 | qaoa-line3 | qaoa-t4")
        ->capture_default_str();
    comp->add_option("--n", circ_n, "qubits (ghz) or measurement bits (qpe)")->capture_default_str();
    comp->add_option("--z-power", circ_zpow)->capture_default_str();
    comp->add_option("--p", circ_p)->capture_default_str();
    comp->add_option("--out", circ_out, "circuit file name")->capture_default_str();

    try {
        std::vector<std::string> args(argv.rbegin(), argv.rend());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(ghz)) return cmd_ghz(common, ghz_n, ghz_shots, ghz_scan);
        if (app.got_subcommand(qpe)) return cmd_qpe(common, qpe_m, qpe_zpow, qpe_h2, qpe_shots);
        if (app.got_subcommand(qaoa)) {
            return cmd_qaoa(common, qaoa_graph, qaoa_p, qaoa_betas, qaoa_gammas, qaoa_opt,
                            qaoa_restarts, qaoa_shots);
        }
        if (app.got_subcommand(tune)) return cmd_tune_cz(common, tune_rabi, tune_blockade, tune_points);
        if (app.got_subcommand(trap)) return cmd_trap_report(common);
        if (app.got_subcommand(coh)) return cmd_coherence_report(common);
        if (app.got_subcommand(rearr)) return cmd_rearrange(common, fill, group_name);
        if (app.got_subcommand(comp)) {
            return cmd_compile(common, circ_name, circ_n, circ_zpow, circ_p, circ_out);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace natomsim
