#include "wrg/potential.hpp"
#include "wrg/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wrg;

TEST_CASE("potential evaluation on the menu") {
    CHECK(evaluate_potential(PotentialSpec::zero(), 0.7) == 0.0);

    const PotentialSpec well = PotentialSpec::square_well(1.5, 2.0);
    CHECK(evaluate_potential(well, 1.0) == 1.5);
    CHECK(evaluate_potential(well, 2.0) == 1.5);
    CHECK(evaluate_potential(well, 2.5) == 0.0);

    const PotentialSpec g = PotentialSpec::gaussian(0.8, 0.3, 1.0);
    CHECK(evaluate_potential(g, 0.0) == doctest::Approx(0.8));
    CHECK(evaluate_potential(g, 1.5) == 0.0);

    const PotentialSpec e = PotentialSpec::exponential(2.0, 0.5, 1.5);
    CHECK(evaluate_potential(e, 0.0) == doctest::Approx(2.0));
    CHECK(evaluate_potential(e, 0.5) == doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK(evaluate_potential(e, 2.0) == 0.0);

    CHECK_THROWS_AS(evaluate_potential(well, -0.1), std::invalid_argument);
}

TEST_CASE("potentials are non-negative and vanish beyond the cutoff (fuzzed)") {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        PotentialSpec g;
        switch (rng.uniform_index(4)) {
            case 0: g = PotentialSpec::zero(); break;
            case 1: g = PotentialSpec::square_well(rng.uniform(0.0, 3.0), rng.uniform(0.1, 2.0)); break;
            case 2:
                g = PotentialSpec::gaussian(rng.uniform(0.0, 3.0), rng.uniform(0.1, 1.0),
                                            rng.uniform(0.5, 2.0));
                break;
            default:
                g = PotentialSpec::exponential(rng.uniform(0.0, 3.0), rng.uniform(0.1, 1.0),
                                               rng.uniform(0.5, 2.0));
                break;
        }
        const double r = rng.uniform(0.0, 4.0);
        const double v = evaluate_potential(g, r);
        CHECK(v >= 0.0);
        if (!g.is_zero() && r > g.cutoff) CHECK(v == 0.0);
    }
}

TEST_CASE("square-well integrals have closed forms") {
    const PotentialSpec well = PotentialSpec::square_well(1.0, 0.5);
    CHECK(potential_mass(well, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(potential_mass(well, 2) == doctest::Approx(std::numbers::pi * 0.25).epsilon(1e-14));
    CHECK(mayer_integral(well, 1) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(mayer_integral(well, 2) ==
          doctest::Approx(std::numbers::pi * 0.25 * (1.0 - std::exp(-1.0))).epsilon(1e-14));
    CHECK(potential_mass(PotentialSpec::zero(), 1) == 0.0);
    CHECK(mayer_integral(PotentialSpec::zero(), 2) == 0.0);
}

namespace {

// Independent fine-grained midpoint oracle for the radial integrals.
double riemann_radial(const PotentialSpec& g, int dim, bool mayer) {
    const int n = 1 << 20;
    const double h = g.cutoff / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * h;
        const double val = evaluate_potential(g, r);
        const double f = mayer ? -std::expm1(-val) : val;
        acc += dim == 1 ? f : f * r;
    }
    acc *= h;
    return dim == 1 ? 2.0 * acc : 2.0 * std::numbers::pi * acc;
}

}  // namespace

TEST_CASE("adaptive quadrature matches a fine Riemann oracle on smooth shapes") {
    const PotentialSpec shapes[] = {
        PotentialSpec::gaussian(1.3, 0.4, 1.2),
        PotentialSpec::exponential(0.9, 0.3, 1.5),
    };
    for (const PotentialSpec& g : shapes)
        for (int dim : {1, 2}) {
            CHECK(potential_mass(g, dim) ==
                  doctest::Approx(riemann_radial(g, dim, false)).epsilon(1e-8));
            CHECK(mayer_integral(g, dim) ==
                  doctest::Approx(riemann_radial(g, dim, true)).epsilon(1e-8));
        }
}

TEST_CASE("mayer integral is bounded by the mass") {
    // 1 - e^{-t} <= t pointwise, so the exclusion integral never exceeds <g>.
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const PotentialSpec g =
            PotentialSpec::square_well(rng.uniform(0.0, 4.0), rng.uniform(0.1, 1.0));
        for (int dim : {1, 2}) CHECK(mayer_integral(g, dim) <= potential_mass(g, dim) + 1e-12);
    }
}

TEST_CASE("potential text form round-trips") {
    const PotentialSpec shapes[] = {
        PotentialSpec::zero(),
        PotentialSpec::square_well(1.25, 0.375),
        PotentialSpec::gaussian(0.7, 0.21, 0.9),
        PotentialSpec::exponential(2.5, 0.11, 1.05),
    };
    for (const PotentialSpec& g : shapes) CHECK(parse_potential(format_potential(g)) == g);

    CHECK(parse_potential(" zero ") == PotentialSpec::zero());
    CHECK(parse_potential("square_well(1.0, 0.5)") == PotentialSpec::square_well(1.0, 0.5));
    CHECK_THROWS_AS(parse_potential("triangle(1,2)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_potential("square_well(1.0)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_potential("square_well(1.0, abc)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_potential("gaussian(1,0.5,0.5"), std::invalid_argument);
}

TEST_CASE("scale_height divides the amplitude only") {
    const PotentialSpec g = PotentialSpec::gaussian(1.0, 0.3, 0.9);
    const PotentialSpec s = scale_height(g, 0.25);
    CHECK(s.height == doctest::Approx(0.25));
    CHECK(s.range == g.range);
    CHECK(s.cutoff == g.cutoff);
}
