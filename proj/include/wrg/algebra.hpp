#pragma once

#include "wrg/configuration.hpp"

#include <functional>
#include <span>
#include <vector>

namespace wrg {

/// Evaluable function on finite two-species configurations with a declared
/// size cap: evaluation returns 0 whenever |eta+| + |eta-| exceeds
/// `max_points`. The callable must be symmetric under permutation of points
/// within each species. Functions built as products over points keep their
/// one-particle factors so integrals can use the factorized route.
struct FiniteFunction {
    std::function<double(const TwoTypeConfiguration&)> eval;
    int max_points = 12;
    Domain support;
    std::function<double(const Vec&)> factor_plus;   // set only for product form
    std::function<double(const Vec&)> factor_minus;  // set only for product form

    double operator()(const TwoTypeConfiguration& eta) const {
        if (eta.size() > max_points) return 0.0;
        return eval(eta);
    }

    bool product_form() const { return static_cast<bool>(factor_plus) && static_cast<bool>(factor_minus); }

    static FiniteFunction from_eval(std::function<double(const TwoTypeConfiguration&)> fn,
                                    int max_points, const Domain& support);

    /// G(eta) = prod_{x in eta+} f_plus(x) * prod_{y in eta-} f_minus(y),
    /// subject to the size cap. Pass a zero function to confine G to empty
    /// configurations of that species.
    static FiniteFunction product(std::function<double(const Vec&)> f_plus,
                                  std::function<double(const Vec&)> f_minus,
                                  int max_points, const Domain& support);
};

/// Correlation-kernel values share the representation of test functions.
using TruncatedKernel = FiniteFunction;

/// Sum of G over all two-species sub-configurations of eta. Throws
/// std::length_error when |eta| exceeds `subset_cap` (the 2^|eta| subset
/// lattice must stay tractable).
double k_transform(const FiniteFunction& G, const TwoTypeConfiguration& eta, int subset_cap = 12);

/// Moebius inverse of the subset sum: signed sum with (-1)^{|eta \ xi|},
/// the exponent counting removed points of both species.
double k_inverse(const FiniteFunction& F, const TwoTypeConfiguration& eta, int subset_cap = 12);

/// Product of f over all points of both species; 1 on the empty configuration.
double lebesgue_exponential(const std::function<double(const Vec&)>& f,
                            const TwoTypeConfiguration& eta);

/// Uniform midpoint rule on the periodic box; the product grid has
/// nodes_per_axis^dimension nodes of equal weight, summing to the volume.
struct QuadratureScheme {
    Domain domain;
    int nodes_per_axis = 0;
    std::vector<Vec> nodes;
    double node_weight = 0.0;

    static QuadratureScheme midpoint(const Domain& dom, int nodes_per_axis);
    QuadratureScheme refined() const { return midpoint(domain, 2 * nodes_per_axis); }

    double integrate(const std::function<double(const Vec&)>& f) const {
        double s = 0.0;
        for (const Vec& x : nodes) s += f(x);
        return s * node_weight;
    }
};

/// Truncated two-species Lebesgue-Poisson integral of G: the sum over
/// n, m <= n_max of (1/n!)(1/m!) times the (n + m)-point product-quadrature
/// integral. Product-form functions use the factorized route (identical to
/// the nested sum in exact arithmetic); general functions use nested node
/// loops guarded by a work cap.
double lp_integral(const FiniteFunction& G, const QuadratureScheme& scheme, int n_max);

/// <G, k>: lp_integral of the pointwise product.
double pairing(const FiniteFunction& G, const TruncatedKernel& k, const QuadratureScheme& scheme,
               int n_max);

/// Sampled lower bound for the weighted sup norm: the maximum over the sample
/// of |k(eta)| e^{-alpha+ |eta+|} e^{-alpha- |eta-|} (unit weight function).
double ruelle_norm(const TruncatedKernel& k, double alpha_plus, double alpha_minus,
                   std::span<const TwoTypeConfiguration> sample);

}  // namespace wrg
