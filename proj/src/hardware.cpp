// SPDX-License-Identifier: Apache-2.0
#include "natomsim/hardware.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "natomsim/constants.hpp"

namespace natomsim {

using constants::k_boltzmann;
using constants::pi;
using constants::two_pi;

void TrapArrayConfig::validate() const {
    if (line_spacing_m <= 0 || line_waist_m <= 0 || wavelength_m <= 0 || depth_j <= 0 ||
        atom_temperature_k <= 0 || atom_mass_kg <= 0) {
        throw std::invalid_argument("trap parameters must be positive");
    }
    if (aspect_ratio() <= 1.0) {
        throw std::domain_error("aspect ratio s = d/w must exceed 1 (axial barrier undefined)");
    }
}

TrapProfile trap_profile(const TrapArrayConfig& config) {
    config.validate();
    const double s = config.aspect_ratio();
    const double d = config.line_spacing_m;
    const double w = config.line_waist_m;
    const double lambda = config.wavelength_m;
    const double ud = config.depth_j;
    const double gauss = std::exp(-s * s / 2.0);
    const double root_2pi = std::sqrt(two_pi);

    TrapProfile p;
    p.ic_ratio = 4.0 * s / root_2pi * gauss;
    p.is_ratio = s / root_2pi * (1.0 + 2.0 * gauss);
    p.it_ratio = s / root_2pi * (1.0 - 2.0 * gauss);
    p.itz_ratio = 4.0 / root_2pi * (1.0 / std::sqrt(std::exp(1.0)) - s * gauss);

    const double rayleigh = pi * w * w / lambda;
    p.z_max_m = rayleigh * std::sqrt(s * s - 1.0);

    p.kappa_x = ud / (d * d) * std::sqrt(32.0) * s * s * s / std::sqrt(pi) * (s * s - 1.0) * gauss;
    p.kappa_z = ud * lambda * lambda / (d * d * d * d) * std::sqrt(8.0) * std::pow(s, 5) /
                std::pow(pi, 2.5) * (s * s - 1.0) * gauss;
    p.f_vib_radial_hz = std::sqrt(p.kappa_x / config.atom_mass_kg) / two_pi;
    p.f_vib_axial_hz = std::sqrt(p.kappa_z / config.atom_mass_kg) / two_pi;

    const double kt = k_boltzmann * config.atom_temperature_k;
    const double sigx2 = kt * d * d / ud * std::sqrt(pi) / std::sqrt(32.0) *
                         std::exp(s * s / 2.0) / (s * s * s * (s * s - 1.0));
    const double sigz2 = kt * std::pow(d, 4) / (ud * lambda * lambda) * std::pow(pi, 2.5) /
                         std::pow(2.0, 1.5) * std::exp(s * s / 2.0) /
                         (std::pow(s, 5) * (s * s - 1.0));
    p.sigma_x_m = std::sqrt(sigx2);
    p.sigma_z_m = std::sqrt(sigz2);
    return p;
}

AodMatch aod_magnification(double lambda1, double lambda2, double n1, double n2, int m1, int m2) {
    if (lambda1 <= 0 || lambda2 <= 0 || n1 <= 0 || n2 <= 0) {
        throw std::invalid_argument("wavelengths and indices must be positive");
    }
    if (m1 * m2 != -1) {
        throw std::domain_error(
            "diffraction orders must be opposite (m1*m2 = -1); resonance condition unsatisfiable");
    }
    AodMatch match;
    match.mag_ratio = lambda1 * n2 / (lambda2 * n1);
    match.waist_ratio = n2 / n1;
    return match;
}

StarkPhase stark_phase(double omega459_rad_s, double delta_rad_s, double omega_q_rad_s, double t_s) {
    if (omega_q_rad_s <= 0) throw std::invalid_argument("qubit frequency must be positive");
    const double threshold = 1e-6 * omega_q_rad_s;
    if (std::fabs(delta_rad_s) < threshold || std::fabs(delta_rad_s - omega_q_rad_s) < threshold) {
        throw std::domain_error("detuning too close to a pole of the light-shift formula");
    }
    const double o2 = omega459_rad_s * omega459_rad_s;
    StarkPhase out;
    out.effective_rate_rad_s = o2 / (4.0 * delta_rad_s) - o2 / (4.0 * (delta_rad_s - omega_q_rad_s));
    out.theta_rad = out.effective_rate_rad_s * t_s;
    return out;
}

std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
    const int n_sources = static_cast<int>(cost.size());
    if (n_sources == 0) return {};
    const int n_targets = static_cast<int>(cost[0].size());
    if (n_targets == 0) return {};
    if (n_targets > n_sources) {
        throw std::invalid_argument("infeasible assignment: more targets than sources");
    }
    for (const auto& row : cost) {
        if (static_cast<int>(row.size()) != n_targets) {
            throw std::invalid_argument("cost matrix rows must have equal length");
        }
        for (double c : row) {
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw std::invalid_argument("costs must be finite and nonnegative");
            }
        }
    }

    // Potential-based augmenting path method; targets are assigned one at a
    // time. 1-indexed internals, column 0 is the virtual root.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n_targets) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n_sources) + 1, 0.0);
    std::vector<int> matched_target(static_cast<std::size_t>(n_sources) + 1, 0);

    for (int t = 1; t <= n_targets; ++t) {
        matched_target[0] = t;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n_sources) + 1, inf);
        std::vector<int> way(static_cast<std::size_t>(n_sources) + 1, 0);
        std::vector<bool> used(static_cast<std::size_t>(n_sources) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int t0 = matched_target[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n_sources; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(t0 - 1)] -
                                   u[static_cast<std::size_t>(t0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n_sources; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(matched_target[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (matched_target[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            matched_target[static_cast<std::size_t>(j0)] = matched_target[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> assign(static_cast<std::size_t>(n_targets), -1);
    for (int j = 1; j <= n_sources; ++j) {
        const int t = matched_target[static_cast<std::size_t>(j)];
        if (t > 0) assign[static_cast<std::size_t>(t - 1)] = j - 1;
    }
    return assign;
}

namespace {

double sq_dist(const SiteCoord& a, const SiteCoord& b) {
    const double dr = a.row - b.row;
    const double dc = a.col - b.col;
    return dr * dr + dc * dc;
}

} // namespace

MovePlan plan_rearrangement(const ArrayOccupancy& occ) {
    if (occ.occupied.size() < occ.targets.size()) {
        throw std::invalid_argument("infeasible occupancy: fewer atoms than target sites");
    }
    const std::vector<SiteCoord> sources(occ.occupied.begin(), occ.occupied.end());
    const std::vector<SiteCoord> targets(occ.targets.begin(), occ.targets.end());

    MovePlan plan;
    if (targets.empty()) return plan;

    std::vector<std::vector<double>> cost(sources.size(), std::vector<double>(targets.size()));
    for (std::size_t s = 0; s < sources.size(); ++s) {
        for (std::size_t t = 0; t < targets.size(); ++t) cost[s][t] = sq_dist(sources[s], targets[t]);
    }
    const std::vector<int> assign = hungarian(cost);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        plan.total_cost += cost[static_cast<std::size_t>(assign[t])][t];
    }

    struct Pending {
        SiteCoord from;
        SiteCoord to;
    };
    std::vector<Pending> pending;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const SiteCoord& from = sources[static_cast<std::size_t>(assign[t])];
        if (!(from == targets[t])) pending.push_back({from, targets[t]});
    }

    std::set<SiteCoord> occupied = occ.occupied;
    while (!pending.empty()) {
        bool progress = false;
        for (std::size_t i = 0; i < pending.size();) {
            if (occupied.count(pending[i].to) == 0) {
                plan.moves.push_back({pending[i].from, pending[i].to});
                occupied.erase(pending[i].from);
                occupied.insert(pending[i].to);
                pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(i));
                progress = true;
            } else {
                ++i;
            }
        }
        if (progress || pending.empty()) continue;

        // Every pending destination is occupied: a cycle. Park the first
        // pending atom at the nearest free non-target site, then continue.
        const Pending cyc = pending.front();
        SiteCoord scratch{};
        double best = std::numeric_limits<double>::infinity();
        bool found = false;
        const int radius = 64; // search window around the cycle source
        for (int r = cyc.from.row - radius; r <= cyc.from.row + radius; ++r) {
            for (int c = cyc.from.col - radius; c <= cyc.from.col + radius; ++c) {
                const SiteCoord cand{r, c};
                if (occupied.count(cand) || occ.targets.count(cand)) continue;
                const double dist = sq_dist(cyc.from, cand);
                if (dist < best || (dist == best && cand < scratch)) {
                    best = dist;
                    scratch = cand;
                    found = true;
                }
            }
        }
        if (!found) throw std::runtime_error("no free site available for cycle breaking");
        plan.moves.push_back({cyc.from, scratch});
        occupied.erase(cyc.from);
        occupied.insert(scratch);
        pending.front().from = scratch;
    }
    return plan;
}

} // namespace natomsim
