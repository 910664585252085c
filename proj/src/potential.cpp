#include "wrg/potential.hpp"

#include "wrg/text.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace wrg {

namespace {

struct SimpsonPanel {
    double a, b, fa, fm, fb, estimate;
};

SimpsonPanel make_panel(const std::function<double(double)>& f, double a, double b, double fa, double fb) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    return {a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb)};
}

double adapt(const std::function<double(double)>& f, const SimpsonPanel& p, double tol, int depth) {
    const double m = 0.5 * (p.a + p.b);
    const SimpsonPanel left = make_panel(f, p.a, m, p.fa, p.fm);
    const SimpsonPanel right = make_panel(f, m, p.b, p.fm, p.fb);
    const double delta = left.estimate + right.estimate - p.estimate;
    if (std::abs(delta) <= 15.0 * tol)
        return left.estimate + right.estimate + delta / 15.0;
    if (depth <= 0)
        throw std::runtime_error("adaptive quadrature failed to converge");
    return adapt(f, left, 0.5 * tol, depth - 1) + adapt(f, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson with relative tolerance; integrands here are smooth on
/// the interior of [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (!(b > a)) return 0.0;
    const SimpsonPanel whole = make_panel(f, a, b, f(a), f(b));
    const double scale = std::max(std::abs(whole.estimate), 1e-12 * (b - a));
    return adapt(f, whole, rel_tol * scale, 48);
}

constexpr double kRelTol = 1e-10;

double radial_integral(const PotentialSpec& g, int dimension,
                       const std::function<double(double)>& integrand) {
    if (dimension == 1)
        return 2.0 * integrate_adaptive(integrand, 0.0, g.cutoff, kRelTol);
    auto weighted = [&](double r) { return integrand(r) * r; };
    return 2.0 * std::numbers::pi * integrate_adaptive(weighted, 0.0, g.cutoff, kRelTol);
}

double ball_volume(double radius, int dimension) {
    return dimension == 1 ? 2.0 * radius : std::numbers::pi * radius * radius;
}

void check_dimension(int dimension) {
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("potential integral: dimension must be 1 or 2");
}

}  // namespace

double potential_mass(const PotentialSpec& g, int dimension) {
    check_dimension(dimension);
    switch (g.kind) {
        case PotentialKind::zero:
            return 0.0;
        case PotentialKind::square_well:
            return g.height * ball_volume(g.range, dimension);
        default:
            return radial_integral(g, dimension, [&](double r) { return evaluate_potential(g, r); });
    }
}

double mayer_integral(const PotentialSpec& g, int dimension) {
    check_dimension(dimension);
    switch (g.kind) {
        case PotentialKind::zero:
            return 0.0;
        case PotentialKind::square_well:
            return -std::expm1(-g.height) * ball_volume(g.range, dimension);
        default:
            return radial_integral(g, dimension,
                                   [&](double r) { return -std::expm1(-evaluate_potential(g, r)); });
    }
}

PotentialSpec scale_height(const PotentialSpec& g, double factor) {
    if (!(factor >= 0.0)) throw std::invalid_argument("scale_height: factor must be >= 0");
    PotentialSpec s = g;
    s.height *= factor;
    return s;
}

std::string format_potential(const PotentialSpec& g) {
    switch (g.kind) {
        case PotentialKind::zero:
            return "zero";
        case PotentialKind::square_well:
            return "square_well(" + format_double(g.height) + ", " + format_double(g.range) + ")";
        case PotentialKind::gaussian:
            return "gaussian(" + format_double(g.height) + ", " + format_double(g.range) + ", " +
                   format_double(g.cutoff) + ")";
        case PotentialKind::exponential:
            return "exponential(" + format_double(g.height) + ", " + format_double(g.range) + ", " +
                   format_double(g.cutoff) + ")";
    }
    return "zero";
}

PotentialSpec parse_potential(const std::string& text) {
    const std::string_view body = trim(text);
    if (body == "zero") return PotentialSpec::zero();

    const auto open = body.find('(');
    if (open == std::string_view::npos || body.back() != ')')
        throw std::invalid_argument("potential: expected NAME(args...) or 'zero', got '" +
                                    std::string(body) + "'");
    const std::string_view name = trim(body.substr(0, open));
    const std::string_view arg_text = body.substr(open + 1, body.size() - open - 2);
    std::vector<double> args;
    for (std::string_view piece : split(arg_text, ',')) args.push_back(parse_double(piece));

    auto want = [&](std::size_t n) {
        if (args.size() != n)
            throw std::invalid_argument("potential '" + std::string(name) + "': expected " +
                                        std::to_string(n) + " arguments");
    };
    if (name == "square_well") {
        want(2);
        return PotentialSpec::square_well(args[0], args[1]);
    }
    if (name == "gaussian") {
        want(3);
        return PotentialSpec::gaussian(args[0], args[1], args[2]);
    }
    if (name == "exponential") {
        want(3);
        return PotentialSpec::exponential(args[0], args[1], args[2]);
    }
    throw std::invalid_argument("potential: unknown shape '" + std::string(name) + "'");
}

}  // namespace wrg
