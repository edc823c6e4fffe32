// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace natomsim {

// Position in the trap array (row-major grid of sites).
struct SiteCoord {
    int row = 0;
    int col = 0;

    friend bool operator==(const SiteCoord&, const SiteCoord&) = default;
    friend auto operator<=>(const SiteCoord&, const SiteCoord&) = default;
};

inline bool shares_row_or_col(const SiteCoord& a, const SiteCoord& b) {
    return a.row == b.row || a.col == b.col;
}

std::string to_string(const SiteCoord& s);

// Native machine operations. GlobalRot drives every loaded site about an
// equatorial axis phi: exp(-i(theta/2)(cos(phi) X + sin(phi) Y)).
// LocalRz is diag(e^{-i theta/2}, e^{+i theta/2}) on one site.
// Cz is diag(1,1,1,-1) on a site pair sharing a row or column.
struct GlobalRot {
    double phi = 0.0;
    double theta = 0.0;
};
struct LocalRz {
    SiteCoord site;
    double theta = 0.0;
};
struct Cz {
    SiteCoord site_a;
    SiteCoord site_b;
};
struct MeasureAll {};

using NativeOp = std::variant<GlobalRot, LocalRz, Cz, MeasureAll>;

// An ordered list of native ops over a fixed set of loaded sites. The site
// order defines the qubit order for simulation and readout: sites[0] is the
// leftmost (most significant) bit of every measured bitstring.
struct NativeCircuit {
    std::vector<SiteCoord> sites;
    std::vector<NativeOp> ops;

    // Index of a site within `sites`; throws if the site is not loaded.
    std::size_t site_index(const SiteCoord& s) const;
    std::size_t n_qubits() const { return sites.size(); }
};

struct CircuitParseError : std::runtime_error {
    explicit CircuitParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    int line_number;
};

// Line-oriented interchange format, one op per line:
//   GR phi theta
//   RZ row col theta
//   CZ r1 c1 r2 c2
//   M
// Comment lines start with '#'. The writer emits a "# sites:" comment
// carrying the readout order; the parser honors it when present and
// otherwise uses first-appearance order.
std::string serialize_circuit(const NativeCircuit& c);
NativeCircuit parse_circuit(const std::string& text);
NativeCircuit parse_circuit_stream(std::istream& in);

} // namespace natomsim
