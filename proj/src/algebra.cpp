#include "wrg/algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace wrg {

namespace {

void check_subset_cap(const TwoTypeConfiguration& eta, int cap) {
    if (eta.size() > cap)
        throw std::length_error("subset sum: configuration exceeds the tractability cap");
}

/// Sums term(xi, removed_count) over all two-species subsets xi of eta.
template <class Term>
double subset_sum(const TwoTypeConfiguration& eta, Term&& term) {
    const int np = static_cast<int>(eta.plus.size());
    const int nm = static_cast<int>(eta.minus.size());
    TwoTypeConfiguration xi;
    xi.plus.reserve(np);
    xi.minus.reserve(nm);
    double total = 0.0;
    for (std::uint32_t mp = 0; mp < (1u << np); ++mp) {
        xi.plus.clear();
        for (int i = 0; i < np; ++i)
            if (mp & (1u << i)) xi.plus.push_back(eta.plus[i]);
        for (std::uint32_t mm = 0; mm < (1u << nm); ++mm) {
            xi.minus.clear();
            for (int j = 0; j < nm; ++j)
                if (mm & (1u << j)) xi.minus.push_back(eta.minus[j]);
            const int removed = np + nm - static_cast<int>(xi.plus.size() + xi.minus.size());
            total += term(xi, removed);
        }
    }
    return total;
}

}  // namespace

FiniteFunction FiniteFunction::from_eval(std::function<double(const TwoTypeConfiguration&)> fn,
                                         int max_points, const Domain& support) {
    FiniteFunction g;
    g.eval = std::move(fn);
    g.max_points = max_points;
    g.support = support;
    return g;
}

FiniteFunction FiniteFunction::product(std::function<double(const Vec&)> f_plus,
                                       std::function<double(const Vec&)> f_minus,
                                       int max_points, const Domain& support) {
    FiniteFunction g;
    g.factor_plus = std::move(f_plus);
    g.factor_minus = std::move(f_minus);
    g.max_points = max_points;
    g.support = support;
    auto fp = g.factor_plus;
    auto fm = g.factor_minus;
    g.eval = [fp, fm](const TwoTypeConfiguration& eta) {
        double v = 1.0;
        for (const Vec& x : eta.plus) v *= fp(x);
        for (const Vec& y : eta.minus) v *= fm(y);
        return v;
    };
    return g;
}

double k_transform(const FiniteFunction& G, const TwoTypeConfiguration& eta, int subset_cap) {
    check_subset_cap(eta, subset_cap);
    return subset_sum(eta, [&](const TwoTypeConfiguration& xi, int) { return G(xi); });
}

double k_inverse(const FiniteFunction& F, const TwoTypeConfiguration& eta, int subset_cap) {
    check_subset_cap(eta, subset_cap);
    return subset_sum(eta, [&](const TwoTypeConfiguration& xi, int removed) {
        const double v = F(xi);
        return (removed & 1) ? -v : v;
    });
}

double lebesgue_exponential(const std::function<double(const Vec&)>& f,
                            const TwoTypeConfiguration& eta) {
    double v = 1.0;
    for (const Vec& x : eta.plus) v *= f(x);
    for (const Vec& y : eta.minus) v *= f(y);
    return v;
}

QuadratureScheme QuadratureScheme::midpoint(const Domain& dom, int nodes_per_axis) {
    if (nodes_per_axis < 1)
        throw std::invalid_argument("QuadratureScheme: need at least one node per axis");
    QuadratureScheme q;
    q.domain = dom;
    q.nodes_per_axis = nodes_per_axis;
    if (dom.dimension == 1) {
        const double h = dom.side[0] / nodes_per_axis;
        for (int i = 0; i < nodes_per_axis; ++i) q.nodes.push_back(Vec((i + 0.5) * h, 0.0));
    } else {
        const double hx = dom.side[0] / nodes_per_axis;
        const double hy = dom.side[1] / nodes_per_axis;
        for (int j = 0; j < nodes_per_axis; ++j)
            for (int i = 0; i < nodes_per_axis; ++i)
                q.nodes.push_back(Vec((i + 0.5) * hx, (j + 0.5) * hy));
    }
    q.node_weight = dom.volume() / static_cast<double>(q.nodes.size());
    return q;
}

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Nested product-rule sum over all ordered (n+ , n-) node tuples.
double tuple_integral(const FiniteFunction& G, const QuadratureScheme& q, int n_plus, int n_minus) {
    TwoTypeConfiguration eta;
    eta.plus.assign(n_plus, Vec::Zero());
    eta.minus.assign(n_minus, Vec::Zero());
    const int total = n_plus + n_minus;
    std::vector<int> idx(total, 0);
    const int n_nodes = static_cast<int>(q.nodes.size());
    double sum = 0.0;
    while (true) {
        for (int i = 0; i < n_plus; ++i) eta.plus[i] = q.nodes[idx[i]];
        for (int i = 0; i < n_minus; ++i) eta.minus[i] = q.nodes[idx[n_plus + i]];
        sum += G(eta);
        int d = total - 1;
        while (d >= 0 && ++idx[d] == n_nodes) idx[d--] = 0;
        if (d < 0) break;
    }
    return sum * std::pow(q.node_weight, total);
}

}  // namespace

double lp_integral(const FiniteFunction& G, const QuadratureScheme& scheme, int n_max) {
    if (n_max < 0) throw std::invalid_argument("lp_integral: n_max must be >= 0");
    if (n_max > G.max_points)
        throw std::invalid_argument("lp_integral: n_max exceeds the function's size cap");

    if (G.product_form()) {
        // Per-species one-particle quadrature masses; the (n, m) term is
        // s+^n s-^m / (n! m!), zero beyond the total-size cap.
        const double sp = scheme.integrate(G.factor_plus);
        const double sm = scheme.integrate(G.factor_minus);
        double total = 0.0;
        for (int n = 0; n <= n_max; ++n)
            for (int m = 0; m <= n_max; ++m) {
                if (n + m > G.max_points) continue;
                total += std::pow(sp, n) / factorial(n) * std::pow(sm, m) / factorial(m);
            }
        return total;
    }

    const double n_nodes = static_cast<double>(scheme.nodes.size());
    double work = 0.0;
    for (int n = 0; n <= n_max; ++n)
        for (int m = 0; m <= n_max; ++m)
            if (n + m <= G.max_points) work += std::pow(n_nodes, n + m);
    if (work > 8e7)
        throw std::length_error("lp_integral: product rule too large; reduce n_max or the node count");

    double total = 0.0;
    for (int n = 0; n <= n_max; ++n)
        for (int m = 0; m <= n_max; ++m) {
            if (n + m > G.max_points) continue;
            total += tuple_integral(G, scheme, n, m) / (factorial(n) * factorial(m));
        }
    return total;
}

double pairing(const FiniteFunction& G, const TruncatedKernel& k, const QuadratureScheme& scheme,
               int n_max) {
    FiniteFunction gk;
    gk.max_points = std::min(G.max_points, k.max_points);
    gk.support = G.support;
    if (G.product_form() && k.product_form()) {
        auto gp = G.factor_plus, kp = k.factor_plus;
        auto gm = G.factor_minus, km = k.factor_minus;
        gk.factor_plus = [gp, kp](const Vec& x) { return gp(x) * kp(x); };
        gk.factor_minus = [gm, km](const Vec& x) { return gm(x) * km(x); };
        auto fp = gk.factor_plus, fm = gk.factor_minus;
        gk.eval = [fp, fm](const TwoTypeConfiguration& eta) {
            double v = 1.0;
            for (const Vec& x : eta.plus) v *= fp(x);
            for (const Vec& y : eta.minus) v *= fm(y);
            return v;
        };
    } else {
        gk.eval = [G, k](const TwoTypeConfiguration& eta) { return G(eta) * k(eta); };
    }
    return lp_integral(gk, scheme, n_max);
}

double ruelle_norm(const TruncatedKernel& k, double alpha_plus, double alpha_minus,
                   std::span<const TwoTypeConfiguration> sample) {
    if (sample.empty()) throw std::invalid_argument("ruelle_norm: sample must be nonempty");
    double best = 0.0;
    for (const TwoTypeConfiguration& eta : sample) {
        const double w = std::exp(-alpha_plus * static_cast<double>(eta.plus.size()) -
                                  alpha_minus * static_cast<double>(eta.minus.size()));
        best = std::max(best, std::abs(k(eta)) * w);
    }
    return best;
}

}  // namespace wrg
