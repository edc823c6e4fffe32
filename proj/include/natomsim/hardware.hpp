// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <vector>

#include "natomsim/circuit.hpp"

namespace natomsim {

// Blue-detuned crossed-line trap array, uniform-intensity lines with
// Gaussian transverse profiles.
struct TrapArrayConfig {
    double line_spacing_m = 3e-6;   // d
    double line_waist_m = 1e-6;     // w (1/e^2 intensity radius)
    double wavelength_m = 825e-9;   // trap light wavelength
    double depth_j = 0.0;           // U_d, spatially averaged light-shift depth
    double atom_temperature_k = 5e-6;
    double atom_mass_kg = 0.0;

    double aspect_ratio() const { return line_spacing_m / line_waist_m; } // s = d/w
    void validate() const;
};

struct TrapProfile {
    double ic_ratio = 0;   // cell-center intensity / I_d
    double is_ratio = 0;   // saddle intensity / I_d
    double it_ratio = 0;   // in-plane trapping intensity / I_d
    double itz_ratio = 0;  // axial trapping intensity at z_max / I_d
    double z_max_m = 0;    // position of the axial barrier maximum
    double kappa_x = 0;    // radial spring constant (N/m)
    double kappa_z = 0;    // axial spring constant (N/m)
    double f_vib_radial_hz = 0;
    double f_vib_axial_hz = 0;
    double sigma_x_m = 0;  // thermal position spread, in-plane
    double sigma_z_m = 0;  // thermal position spread, axial
};

TrapProfile trap_profile(const TrapArrayConfig& config);

// Magnification and waist matching for dual-site two-photon addressing with
// opposite AOD diffraction orders (m1*m2 = -1).
struct AodMatch {
    double mag_ratio = 0;   // M2/M1
    double waist_ratio = 0; // w2/w1
};
AodMatch aod_magnification(double lambda1, double lambda2, double n1, double n2, int m1, int m2);

// Differential Stark phase accumulated by a qubit under a detuned beam:
// theta = [ |O|^2/(4 delta) - |O|^2/(4(delta - omega_q)) ] * t.
struct StarkPhase {
    double theta_rad = 0;
    double effective_rate_rad_s = 0;
};
StarkPhase stark_phase(double omega459_rad_s, double delta_rad_s, double omega_q_rad_s,
                       double t_s);

// Minimum-cost assignment of every column (target) to a distinct row
// (source); cost is n_sources x n_targets with n_sources >= n_targets.
// Returns assign[t] = source row index.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

struct ArrayOccupancy {
    std::set<SiteCoord> occupied;
    std::set<SiteCoord> targets;
};

struct Move {
    SiteCoord from;
    SiteCoord to;
};

struct MovePlan {
    std::vector<Move> moves;    // collision-free execution order
    double total_cost = 0;      // optimal assignment cost (sum of squared site distances)
};

// Hungarian assignment on squared site distance, ordered so no move lands on
// an occupied site; cycles are broken through the nearest free non-target
// scratch site (row-major tie-break).
MovePlan plan_rearrangement(const ArrayOccupancy& occ);

} // namespace natomsim
