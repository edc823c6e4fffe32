// SPDX-License-Identifier: Apache-2.0
#include "natomsim/circuit.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace natomsim {

std::string to_string(const SiteCoord& s) {
    return "(" + std::to_string(s.row) + "," + std::to_string(s.col) + ")";
}

std::size_t NativeCircuit::site_index(const SiteCoord& s) const {
    const auto it = std::find(sites.begin(), sites.end(), s);
    if (it == sites.end()) {
        throw std::invalid_argument("site " + to_string(s) + " is not loaded in this circuit");
    }
    return static_cast<std::size_t>(it - sites.begin());
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void note_site(std::vector<SiteCoord>& order, const SiteCoord& s) {
    if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
}

} // namespace

std::string serialize_circuit(const NativeCircuit& c) {
    std::ostringstream out;
    out << "# sites:";
    for (const auto& s : c.sites) out << " " << s.row << "," << s.col;
    out << "\n";
    for (const auto& op : c.ops) {
        if (const auto* g = std::get_if<GlobalRot>(&op)) {
            out << "GR " << fmt_double(g->phi) << " " << fmt_double(g->theta) << "\n";
        } else if (const auto* rz = std::get_if<LocalRz>(&op)) {
            out << "RZ " << rz->site.row << " " << rz->site.col << " " << fmt_double(rz->theta) << "\n";
        } else if (const auto* cz = std::get_if<Cz>(&op)) {
            out << "CZ " << cz->site_a.row << " " << cz->site_a.col << " " << cz->site_b.row << " "
                << cz->site_b.col << "\n";
        } else {
            out << "M\n";
        }
    }
    return out.str();
}

NativeCircuit parse_circuit(const std::string& text) {
    std::istringstream in(text);
    return parse_circuit_stream(in);
}

NativeCircuit parse_circuit_stream(std::istream& in) {
    NativeCircuit c;
    std::vector<SiteCoord> declared;
    bool have_declared = false;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip trailing CR from files written on other platforms
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string word;
            hs >> word;
            if (word == "sites:") {
                SiteCoord s;
                char comma = 0;
                while (hs >> s.row >> comma >> s.col) {
                    if (comma != ',') throw CircuitParseError("malformed site list", lineno);
                    declared.push_back(s);
                }
                have_declared = true;
            }
            continue;
        }
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "GR") {
            GlobalRot g;
            if (!(ls >> g.phi >> g.theta)) throw CircuitParseError("GR expects: phi theta", lineno);
            c.ops.emplace_back(g);
        } else if (tag == "RZ") {
            LocalRz rz;
            if (!(ls >> rz.site.row >> rz.site.col >> rz.theta)) {
                throw CircuitParseError("RZ expects: row col theta", lineno);
            }
            c.ops.emplace_back(rz);
        } else if (tag == "CZ") {
            Cz cz;
            if (!(ls >> cz.site_a.row >> cz.site_a.col >> cz.site_b.row >> cz.site_b.col)) {
                throw CircuitParseError("CZ expects: r1 c1 r2 c2", lineno);
            }
            if (cz.site_a == cz.site_b) throw CircuitParseError("CZ sites must differ", lineno);
            c.ops.emplace_back(cz);
        } else if (tag == "M") {
            c.ops.emplace_back(MeasureAll{});
        } else {
            throw CircuitParseError("unknown op '" + tag + "'", lineno);
        }
        std::string extra;
        if (ls >> extra) throw CircuitParseError("trailing tokens after op", lineno);
    }

    if (have_declared) {
        c.sites = declared;
        // every referenced site must be declared
        for (const auto& op : c.ops) {
            if (const auto* rz = std::get_if<LocalRz>(&op)) {
                c.site_index(rz->site);
            } else if (const auto* cz = std::get_if<Cz>(&op)) {
                c.site_index(cz->site_a);
                c.site_index(cz->site_b);
            }
        }
    } else {
        for (const auto& op : c.ops) {
            if (const auto* rz = std::get_if<LocalRz>(&op)) {
                note_site(c.sites, rz->site);
            } else if (const auto* cz = std::get_if<Cz>(&op)) {
                note_site(c.sites, cz->site_a);
                note_site(c.sites, cz->site_b);
            }
        }
    }
    return c;
}

} // namespace natomsim
