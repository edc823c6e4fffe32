// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "natomsim/compiler.hpp"
#include "natomsim/hardware.hpp"
#include "natomsim/noise.hpp"

namespace natomsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QubitGroup {
    Layout sites;
    std::vector<std::pair<int, int>> pairs; // qubit index pairs used for C_Z gates
};

// Full machine description parsed from the plain-text key-value format
// documented in the README. Unknown keys and missing required keys are
// rejected.
struct MachineConfig {
    int array_rows = 7;
    int array_cols = 7;
    double spacing_um = 3.0;

    TimingConfig timing;
    TrapArrayConfig trap;
    double rydberg_rabi_hz = 1.7e6;     // Omega_R / 2pi
    double rydberg_blockade_hz = 3.0e6; // B / 2pi
    NoiseParams noise;
    CoherenceInputs coherence;
    std::uint64_t seed = 1;
    // Optical pumping leaves atoms in |1>; when set, runs start from the
    // all-ones register and circuits open with a global pi pulse.
    bool pumped_ones = false;
    std::map<std::string, QubitGroup> groups;

    static MachineConfig defaults();
    void validate() const;

    const QubitGroup& group(const std::string& name) const;
};

// The shipped default configuration (identical to configs/default_machine.cfg).
std::string default_config_text();

MachineConfig parse_config(const std::string& text);
MachineConfig load_config(const std::string& path);

// FNV-1a hash of the configuration text, hex-encoded; embedded in run records.
std::string config_hash(const std::string& text);

} // namespace natomsim
