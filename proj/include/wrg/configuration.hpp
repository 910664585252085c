#pragma once

#include "wrg/geometry.hpp"
#include "wrg/potential_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace wrg {

/// Finite two-species particle configuration. The species point sets must be
/// disjoint; with continuous positions this reduces to "no duplicate
/// coordinates", which construction-time validation enforces.
struct TwoTypeConfiguration {
    std::vector<Vec> plus;
    std::vector<Vec> minus;

    const std::vector<Vec>& points(Species s) const { return s == Species::plus ? plus : minus; }
    std::vector<Vec>& points(Species s) { return s == Species::plus ? plus : minus; }

    int size() const { return static_cast<int>(plus.size() + minus.size()); }
    bool empty() const { return plus.empty() && minus.empty(); }

    friend bool operator==(const TwoTypeConfiguration& a, const TwoTypeConfiguration& b) {
        auto eq = [](const std::vector<Vec>& u, const std::vector<Vec>& v) {
            if (u.size() != v.size()) return false;
            for (std::size_t i = 0; i < u.size(); ++i)
                if (u[i][0] != v[i][0] || u[i][1] != v[i][1]) return false;
            return true;
        };
        return eq(a.plus, b.plus) && eq(a.minus, b.minus);
    }
};

inline void validate_configuration(const TwoTypeConfiguration& cfg, const Domain& dom) {
    std::vector<Vec> all;
    all.reserve(cfg.plus.size() + cfg.minus.size());
    for (const auto& pts : {cfg.plus, cfg.minus})
        for (const Vec& x : pts) {
            if (!dom.contains(x))
                throw std::domain_error("configuration: position outside domain");
            all.push_back(x);
        }
    std::sort(all.begin(), all.end(), [](const Vec& a, const Vec& b) {
        return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i - 1] == all[i])
            throw std::invalid_argument("configuration: duplicate coordinates");
}

}  // namespace wrg
