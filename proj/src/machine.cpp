// SPDX-License-Identifier: Apache-2.0
#include "natomsim/machine.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "natomsim/constants.hpp"

namespace natomsim {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& v, int line) {
    std::size_t pos = 0;
    double d = 0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
    }
    if (pos != v.size()) {
        throw ConfigError("line " + std::to_string(line) + ": trailing characters in number '" + v + "'");
    }
    return d;
}

std::vector<double> to_doubles(const std::string& v, int line) {
    std::istringstream in(v);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(to_double(tok, line));
    return out;
}

Layout to_sites(const std::string& v, int line) {
    std::istringstream in(v);
    Layout out;
    std::string tok;
    while (in >> tok) {
        const auto comma = tok.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("line " + std::to_string(line) + ": site must be 'row,col', got '" + tok + "'");
        }
        SiteCoord s;
        s.row = static_cast<int>(to_double(tok.substr(0, comma), line));
        s.col = static_cast<int>(to_double(tok.substr(comma + 1), line));
        out.push_back(s);
    }
    return out;
}

std::vector<std::pair<int, int>> to_pairs(const std::string& v, int line) {
    std::istringstream in(v);
    std::vector<std::pair<int, int>> out;
    std::string tok;
    while (in >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("line " + std::to_string(line) + ": pair must be 'a:b', got '" + tok + "'");
        }
        out.emplace_back(static_cast<int>(to_double(tok.substr(0, colon), line)),
                         static_cast<int>(to_double(tok.substr(colon + 1), line)));
    }
    return out;
}

const std::set<std::string> kRequiredKeys = {
    "array.rows", "array.cols", "array.spacing_um",
    "timing.microwave_rabi_hz", "timing.stark_shift_hz", "timing.cz_duration_s",
    "timing.latency_s",
    "trap.line_spacing_um", "trap.line_waist_um", "trap.wavelength_nm", "trap.depth_uk",
    "trap.atom_temperature_uk",
    "rydberg.rabi_hz", "rydberg.blockade_hz",
    "noise.readout_loss", "noise.pumping_error", "noise.t2_star_s",
    "noise.sigma_rel_intensity", "noise.cz_depolarizing", "noise.scattering_per_rz_pi",
    "noise.freq_offsets_hz", "noise.loss_reads_dark",
    "coherence.sigma_b_t", "coherence.bias_field_t", "coherence.eta",
    "init.pumped_ones",
    "seed",
};

} // namespace

MachineConfig MachineConfig::defaults() { return parse_config(default_config_text()); }

void MachineConfig::validate() const {
    if (array_rows < 1 || array_cols < 1 || spacing_um <= 0) {
        throw ConfigError("array dimensions and spacing must be positive");
    }
    timing.validate();
    trap.validate();
    noise.validate();
    if (rydberg_rabi_hz <= 0 || rydberg_blockade_hz <= 0) {
        throw ConfigError("rydberg.rabi_hz and rydberg.blockade_hz must be positive");
    }
    for (const auto& [name, grp] : groups) {
        std::set<SiteCoord> distinct;
        for (const auto& s : grp.sites) {
            if (s.row < 0 || s.row >= array_rows || s.col < 0 || s.col >= array_cols) {
                throw ConfigError("group '" + name + "': site " + to_string(s) + " outside array");
            }
            if (!distinct.insert(s).second) {
                throw ConfigError("group '" + name + "': duplicate site " + to_string(s));
            }
        }
        for (const auto& [a, b] : grp.pairs) {
            if (a < 0 || b < 0 || a >= static_cast<int>(grp.sites.size()) ||
                b >= static_cast<int>(grp.sites.size()) || a == b) {
                throw ConfigError("group '" + name + "': invalid pair index");
            }
            if (!shares_row_or_col(grp.sites[static_cast<std::size_t>(a)],
                                   grp.sites[static_cast<std::size_t>(b)])) {
                throw ConfigError("group '" + name + "': pair " + std::to_string(a) + ":" +
                                  std::to_string(b) + " shares neither row nor column");
            }
        }
    }
}

const QubitGroup& MachineConfig::group(const std::string& name) const {
    const auto it = groups.find(name);
    if (it == groups.end()) throw ConfigError("undefined qubit group '" + name + "'");
    return it->second;
}

std::string default_config_text() {
    return R"(# natomsim machine configuration (49-site array, 3 um spacing)
array.rows = 7
array.cols = 7
array.spacing_um = 3.0

timing.microwave_rabi_hz = 76.5e3
timing.stark_shift_hz = 600e3
timing.cz_duration_s = 1.0e-6
timing.latency_s = 1.0e-6

trap.line_spacing_um = 3.0
trap.line_waist_um = 1.0
trap.wavelength_nm = 825.0
trap.depth_uk = 300.0
trap.atom_temperature_uk = 5.0

rydberg.rabi_hz = 1.7e6
rydberg.blockade_hz = 3.0e6

noise.readout_loss = 0.015
noise.pumping_error = 0.0025
noise.t2_star_s = 3.5e-3
noise.sigma_rel_intensity = 0.0045
noise.cz_depolarizing = 0.058
noise.scattering_per_rz_pi = 0.0042
noise.freq_offsets_hz = 0 -52 31 -87 57 12
noise.loss_reads_dark = 1

coherence.sigma_b_t = 2.0e-6
coherence.bias_field_t = 1.6e-3
coherence.eta = -0.00079

init.pumped_ones = 0

seed = 1

group.ghz.sites = 3,3 0,3 3,0 3,6 6,3 6,6
group.ghz.pairs = 0:1 0:2 0:3 0:4 4:5
group.qpe3.sites = 0,0 0,3 0,6
group.qpe3.pairs = 0:2 1:2 0:1
group.qpe4.sites = 3,0 3,6 0,3 3,3
group.qpe4.pairs = 0:3 1:3 2:3 0:1
group.qaoa3.sites = 0,0 0,3 0,6
group.qaoa3.pairs = 0:1 1:2
group.qaoa4.sites = 0,3 3,3 3,0 3,6
group.qaoa4.pairs = 0:1 1:2 1:3
)";
}

MachineConfig parse_config(const std::string& text) {
    MachineConfig cfg;
    cfg.groups.clear();
    std::set<std::string> seen;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (!seen.insert(key).second) {
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }

        if (key == "array.rows") {
            cfg.array_rows = static_cast<int>(to_double(value, lineno));
        } else if (key == "array.cols") {
            cfg.array_cols = static_cast<int>(to_double(value, lineno));
        } else if (key == "array.spacing_um") {
            cfg.spacing_um = to_double(value, lineno);
        } else if (key == "timing.microwave_rabi_hz") {
            cfg.timing.microwave_rabi_hz = to_double(value, lineno);
        } else if (key == "timing.stark_shift_hz") {
            cfg.timing.stark_shift_hz = to_double(value, lineno);
        } else if (key == "timing.cz_duration_s") {
            cfg.timing.cz_duration_s = to_double(value, lineno);
        } else if (key == "timing.latency_s") {
            cfg.timing.latency_s = to_double(value, lineno);
        } else if (key == "trap.line_spacing_um") {
            cfg.trap.line_spacing_m = to_double(value, lineno) * 1e-6;
        } else if (key == "trap.line_waist_um") {
            cfg.trap.line_waist_m = to_double(value, lineno) * 1e-6;
        } else if (key == "trap.wavelength_nm") {
            cfg.trap.wavelength_m = to_double(value, lineno) * 1e-9;
        } else if (key == "trap.depth_uk") {
            cfg.trap.depth_j = constants::k_boltzmann * to_double(value, lineno) * 1e-6;
        } else if (key == "trap.atom_temperature_uk") {
            cfg.trap.atom_temperature_k = to_double(value, lineno) * 1e-6;
        } else if (key == "rydberg.rabi_hz") {
            cfg.rydberg_rabi_hz = to_double(value, lineno);
        } else if (key == "rydberg.blockade_hz") {
            cfg.rydberg_blockade_hz = to_double(value, lineno);
        } else if (key == "noise.readout_loss") {
            cfg.noise.readout_loss = to_double(value, lineno);
        } else if (key == "noise.pumping_error") {
            cfg.noise.pumping_error = to_double(value, lineno);
        } else if (key == "noise.t2_star_s") {
            cfg.noise.t2_star_s = to_double(value, lineno);
        } else if (key == "noise.sigma_rel_intensity") {
            cfg.noise.sigma_rel_intensity = to_double(value, lineno);
        } else if (key == "noise.cz_depolarizing") {
            cfg.noise.cz_depolarizing = to_double(value, lineno);
        } else if (key == "noise.scattering_per_rz_pi") {
            cfg.noise.scattering_per_rz_pi = to_double(value, lineno);
        } else if (key == "noise.freq_offsets_hz") {
            cfg.noise.qubit_freq_offsets_hz = to_doubles(value, lineno);
        } else if (key == "noise.loss_reads_dark") {
            cfg.noise.loss_reads_dark = to_double(value, lineno) != 0.0;
        } else if (key == "coherence.sigma_b_t") {
            cfg.coherence.sigma_b_t = to_double(value, lineno);
        } else if (key == "coherence.bias_field_t") {
            cfg.coherence.bias_field_t = to_double(value, lineno);
        } else if (key == "coherence.eta") {
            cfg.coherence.eta = to_double(value, lineno);
        } else if (key == "init.pumped_ones") {
            cfg.pumped_ones = to_double(value, lineno) != 0.0;
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(to_double(value, lineno));
        } else if (key.rfind("group.", 0) == 0) {
            const auto rest = key.substr(6);
            const auto dot = rest.find('.');
            if (dot == std::string::npos) {
                throw ConfigError("line " + std::to_string(lineno) + ": group key must be group.<name>.sites|pairs");
            }
            const std::string name = rest.substr(0, dot);
            const std::string field = rest.substr(dot + 1);
            if (field == "sites") {
                cfg.groups[name].sites = to_sites(value, lineno);
            } else if (field == "pairs") {
                cfg.groups[name].pairs = to_pairs(value, lineno);
            } else {
                throw ConfigError("line " + std::to_string(lineno) + ": unknown group field '" + field + "'");
            }
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }

    for (const auto& req : kRequiredKeys) {
        if (!seen.count(req)) throw ConfigError("missing required field '" + req + "'");
    }
    cfg.trap.atom_mass_kg = constants::cs_mass;
    cfg.validate();
    return cfg;
}

MachineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace natomsim
