#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wrg {

using Vec = Eigen::Vector2d;

/// Periodic orthogonal box in one or two dimensions. Positions live in
/// [0, L_i) per active axis; the unused axis of a 1d box is pinned to zero.
struct Domain {
    int dimension = 1;
    Vec side = Vec::Zero();

    static Domain line(double length) { return make(1, Vec(length, 0.0)); }
    static Domain rectangle(double lx, double ly) { return make(2, Vec(lx, ly)); }
    static Domain make(int dimension, const Vec& side);

    double volume() const {
        double v = 1.0;
        for (int i = 0; i < dimension; ++i) v *= side[i];
        return v;
    }

    double min_side() const {
        double s = side[0];
        for (int i = 1; i < dimension; ++i) s = std::min(s, side[i]);
        return s;
    }

    bool contains(const Vec& x) const {
        for (int i = 0; i < dimension; ++i)
            if (!(x[i] >= 0.0 && x[i] < side[i])) return false;
        for (int i = dimension; i < 2; ++i)
            if (x[i] != 0.0) return false;
        return true;
    }

    /// Wraps an arbitrary point into [0, L_i) per active axis.
    Vec wrap(const Vec& x) const {
        Vec w = x;
        for (int i = 0; i < dimension; ++i) {
            w[i] -= side[i] * std::floor(w[i] / side[i]);
            if (w[i] >= side[i] || w[i] < 0.0) w[i] = 0.0;
        }
        for (int i = dimension; i < 2; ++i) w[i] = 0.0;
        return w;
    }

    friend bool operator==(const Domain& a, const Domain& b) {
        return a.dimension == b.dimension && a.side[0] == b.side[0] && a.side[1] == b.side[1];
    }
};

inline Domain Domain::make(int dimension, const Vec& side) {
    if (dimension < 1 || dimension > 2)
        throw std::invalid_argument("Domain: dimension must be 1 or 2");
    Domain d;
    d.dimension = dimension;
    for (int i = 0; i < dimension; ++i) {
        if (!(side[i] > 0.0) || !std::isfinite(side[i]))
            throw std::invalid_argument("Domain: side lengths must be positive");
        d.side[i] = side[i];
    }
    return d;
}

/// Shortest periodic displacement from x to y, component-wise in [-L_i/2, L_i/2).
inline Vec min_image_displacement(const Vec& x, const Vec& y, const Domain& dom) {
    if (!dom.contains(x) || !dom.contains(y))
        throw std::domain_error("min_image_displacement: position outside domain");
    Vec dr = Vec::Zero();
    for (int i = 0; i < dom.dimension; ++i) {
        double d = y[i] - x[i];
        d -= dom.side[i] * std::floor(d / dom.side[i] + 0.5);
        dr[i] = d;
    }
    return dr;
}

/// Unchecked squared minimum-image distance for inner loops; both points
/// must already lie inside the box.
inline double min_image_distance_sq(const Vec& x, const Vec& y, const Domain& dom) {
    double acc = 0.0;
    for (int i = 0; i < dom.dimension; ++i) {
        double d = y[i] - x[i];
        d -= dom.side[i] * std::floor(d / dom.side[i] + 0.5);
        acc += d * d;
    }
    return acc;
}

inline double min_image_distance(const Vec& x, const Vec& y, const Domain& dom) {
    return std::sqrt(min_image_distance_sq(x, y, dom));
}

}  // namespace wrg
