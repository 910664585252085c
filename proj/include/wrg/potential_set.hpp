#pragma once

#include "wrg/potential.hpp"

#include <algorithm>
#include <stdexcept>

namespace wrg {

enum class Species : int { plus = 0, minus = 1 };

inline Species other(Species s) { return s == Species::plus ? Species::minus : Species::plus; }
inline const char* species_name(Species s) { return s == Species::plus ? "+" : "-"; }

/// The eight pair potentials of the two-species dynamics plus activities and
/// the mutation-rate multiplier. phi acts within a species at birth, psi
/// across species at birth; kappa within and tau across at mutation.
struct PotentialSet {
    PotentialSpec phi_plus, phi_minus;
    PotentialSpec psi_plus, psi_minus;
    PotentialSpec kappa_plus, kappa_minus;
    PotentialSpec tau_plus, tau_minus;
    double z_plus = 1.0;
    double z_minus = 1.0;
    double mutation_multiplier = 1.0;

    double activity(Species s) const { return s == Species::plus ? z_plus : z_minus; }
    const PotentialSpec& birth_same(Species s) const { return s == Species::plus ? phi_plus : phi_minus; }
    const PotentialSpec& birth_cross(Species s) const { return s == Species::plus ? psi_plus : psi_minus; }
    const PotentialSpec& mutation_same(Species s) const { return s == Species::plus ? kappa_plus : kappa_minus; }
    const PotentialSpec& mutation_cross(Species s) const { return s == Species::plus ? tau_plus : tau_minus; }

    bool operator==(const PotentialSet&) const = default;
};

inline double max_cutoff(const PotentialSet& p) {
    double c = 0.0;
    for (const PotentialSpec* g : {&p.phi_plus, &p.phi_minus, &p.psi_plus, &p.psi_minus,
                                   &p.kappa_plus, &p.kappa_minus, &p.tau_plus, &p.tau_minus})
        c = std::max(c, g->is_zero() ? 0.0 : g->cutoff);
    return c;
}

// Zero activities are tolerated here so pure-death dynamics can be built
// programmatically; the config surface insists on strictly positive ones.
inline void validate_potential_set(const PotentialSet& p) {
    if (!(p.z_plus >= 0.0) || !(p.z_minus >= 0.0))
        throw std::invalid_argument("PotentialSet: activities must be >= 0");
    if (!(p.mutation_multiplier >= 0.0))
        throw std::invalid_argument("PotentialSet: mutation multiplier must be >= 0");
}

/// Mesoscopic rescaling at level n: activities n*z, heights divided by n,
/// supports unchanged. n = 1 is the identity.
inline PotentialSet vlasov_rescale(const PotentialSet& p, int n) {
    if (n < 1) throw std::invalid_argument("vlasov_rescale: n must be >= 1");
    PotentialSet s = p;
    const double inv = 1.0 / static_cast<double>(n);
    for (PotentialSpec* g : {&s.phi_plus, &s.phi_minus, &s.psi_plus, &s.psi_minus,
                             &s.kappa_plus, &s.kappa_minus, &s.tau_plus, &s.tau_minus})
        *g = scale_height(*g, inv);
    s.z_plus *= n;
    s.z_minus *= n;
    return s;
}

/// Base parameters together with the scale level; `scaled()` yields the
/// parameters actually simulated at that level.
struct ScaledParams {
    PotentialSet base;
    int scale_n = 1;

    PotentialSet scaled() const { return vlasov_rescale(base, scale_n); }
};

}  // namespace wrg
