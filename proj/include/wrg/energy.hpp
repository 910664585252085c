#pragma once

#include "wrg/cell_index.hpp"
#include "wrg/geometry.hpp"
#include "wrg/potential.hpp"

#include <span>

namespace wrg {

/// Relative energy of a particle at x against a point set: the sum of
/// g(minimum-image distance) over all points. Direct summation path.
inline double relative_energy(const PotentialSpec& g, const Vec& x,
                              std::span<const Vec> points, const Domain& dom) {
    if (!dom.contains(x)) throw std::domain_error("relative_energy: x outside domain");
    if (g.is_zero()) return 0.0;
    double e = 0.0;
    for (const Vec& y : points) e += evaluate_potential(g, min_image_distance(x, y, dom));
    return e;
}

/// Cell-indexed path: visits only the 3^d neighborhood, which covers the
/// cutoff ball whenever the index cell size is >= the potential cutoff.
inline double relative_energy(const PotentialSpec& g, const Vec& x,
                              const CellIndex& index, const Domain& dom) {
    if (!dom.contains(x)) throw std::domain_error("relative_energy: x outside domain");
    if (g.is_zero()) return 0.0;
    const double rc2 = g.cutoff * g.cutoff;
    double e = 0.0;
    index.for_each_candidate(x, [&](int, const Vec& y) {
        const double r2 = min_image_distance_sq(x, y, dom);
        if (r2 <= rc2) e += evaluate_potential(g, std::sqrt(r2));
    });
    return e;
}

}  // namespace wrg
