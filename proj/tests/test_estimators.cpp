#include "wrg/estimators.hpp"
#include "wrg/kinetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace wrg;

namespace {

std::vector<Snapshot> poisson_snapshots(const Domain& dom, double rp, double rm, int count,
                                        std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Snapshot> snaps;
    for (int i = 0; i < count; ++i)
        snaps.push_back({static_cast<double>(i), poisson_configuration(dom, rp, rm, rng)});
    return snaps;
}

}  // namespace

TEST_CASE("batch statistics and merge associativity") {
    std::vector<double> values;
    Rng rng(31);
    for (int i = 0; i < 1000; ++i) values.push_back(rng.uniform(0.0, 2.0));

    const BatchStats whole = batch_series(values, 20);
    CHECK(whole.count() == 1000);

    // Split the series in three, batch each part, merge in both orders.
    const std::span<const double> s(values);
    const BatchStats a = batch_series(s.subspan(0, 300), 6);
    const BatchStats b = batch_series(s.subspan(300, 500), 10);
    const BatchStats c = batch_series(s.subspan(800, 200), 4);
    const BatchStats ab_c = BatchStats::merge(BatchStats::merge(a, b), c);
    const BatchStats a_bc = BatchStats::merge(a, BatchStats::merge(b, c));
    CHECK(std::abs(ab_c.mean() - a_bc.mean()) < 1e-12);
    CHECK(std::abs(ab_c.std_error() - a_bc.std_error()) < 1e-12);
    CHECK(ab_c.count() == 1000);
}

TEST_CASE("intensity estimates") {
    const Domain dom = Domain::line(10.0);

    std::vector<Snapshot> empties;
    for (int i = 0; i < 10; ++i) empties.push_back({static_cast<double>(i), {}});
    const IntensityEstimate zero = intensity(empties, Species::plus, 0.0, 9.0, dom);
    CHECK(zero.density == 0.0);
    CHECK(zero.std_error == 0.0);

    // Deterministic snapshots with exactly 7 particles in volume 10.
    TwoTypeConfiguration seven;
    for (int i = 0; i < 7; ++i) seven.plus.push_back(Vec(0.5 + i, 0.0));
    std::vector<Snapshot> fixed;
    for (int i = 0; i < 8; ++i) fixed.push_back({static_cast<double>(i), seven});
    const IntensityEstimate est = intensity(fixed, Species::plus, 0.0, 7.0, dom);
    CHECK(est.density == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(est.std_error == doctest::Approx(0.0));
    CHECK(est.sample_count == 8);

    CHECK_THROWS_AS(intensity(fixed, Species::plus, 100.0, 200.0, dom), std::invalid_argument);
}

TEST_CASE("pair correlation is flat for Poisson configurations") {
    const Domain dom = Domain::line(20.0);
    const double rho = 0.8;
    const auto snaps = poisson_snapshots(dom, rho, 0.5, 400, 71);
    const std::vector<double> edges = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0};

    const PairCorrelationEstimate pp = pair_correlation(snaps, SpeciesPair::plus_plus, edges, dom);
    for (std::size_t b = 0; b < pp.value.size(); ++b) {
        CHECK(std::abs(pp.value[b] - rho * rho) < 3.5 * pp.std_error[b] + 1e-12);
        CHECK(pp.value[b] >= 0.0);
    }

    const PairCorrelationEstimate pm = pair_correlation(snaps, SpeciesPair::plus_minus, edges, dom);
    for (std::size_t b = 0; b < pm.value.size(); ++b)
        CHECK(std::abs(pm.value[b] - rho * 0.5) < 3.5 * pm.std_error[b] + 1e-12);

    const PairCorrelationEstimate mm = pair_correlation(snaps, SpeciesPair::minus_minus, edges, dom);
    for (std::size_t b = 0; b < mm.value.size(); ++b)
        CHECK(std::abs(mm.value[b] - 0.25) < 3.5 * mm.std_error[b] + 1e-12);
}

TEST_CASE("single-particle snapshots have empty same-species histograms") {
    const Domain dom = Domain::line(10.0);
    std::vector<Snapshot> snaps;
    for (int i = 0; i < 5; ++i) {
        TwoTypeConfiguration cfg;
        cfg.plus.push_back(Vec(1.0 + i, 0.0));
        snaps.push_back({static_cast<double>(i), cfg});
    }
    const std::vector<double> edges = {0.0, 1.0, 2.0};
    const PairCorrelationEstimate est = pair_correlation(snaps, SpeciesPair::plus_plus, edges, dom);
    for (double v : est.value) CHECK(v == 0.0);
}

TEST_CASE("pair histogram normalization recovers mean pair counts") {
    const Domain dom = Domain::line(12.0);
    const auto snaps = poisson_snapshots(dom, 0.9, 0.0, 50, 17);
    const std::vector<double> edges = {0.0, 1.0, 2.5, 4.0};
    const PairCorrelationEstimate est = pair_correlation(snaps, SpeciesPair::plus_plus, edges, dom);

    // Integrating the estimator against shell volumes and the box volume
    // must reproduce the empirical mean count of ordered pairs in range.
    double integrated = 0.0;
    for (std::size_t b = 0; b + 1 < edges.size(); ++b)
        integrated += est.value[b] * 2.0 * (edges[b + 1] - edges[b]) * dom.volume();

    double direct = 0.0;
    for (const Snapshot& s : snaps) {
        for (std::size_t i = 0; i < s.config.plus.size(); ++i)
            for (std::size_t j = 0; j < s.config.plus.size(); ++j) {
                if (i == j) continue;
                const double r = min_image_distance(s.config.plus[i], s.config.plus[j], dom);
                if (r >= edges.front() && r < edges.back()) direct += 1.0;
            }
    }
    direct /= snaps.size();
    CHECK(integrated == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("pair correlation validates bins") {
    const Domain dom = Domain::line(10.0);
    const auto snaps = poisson_snapshots(dom, 0.5, 0.5, 4, 3);
    const std::vector<double> beyond = {0.0, 6.0};
    CHECK_THROWS_AS(pair_correlation(snaps, SpeciesPair::plus_plus, beyond, dom),
                    std::invalid_argument);
    const std::vector<double> unsorted = {0.5, 0.25, 1.0};
    CHECK_THROWS_AS(pair_correlation(snaps, SpeciesPair::plus_plus, unsorted, dom),
                    std::invalid_argument);
}

TEST_CASE("factorization gap vanishes for ideal Poisson ensembles") {
    const Domain dom = Domain::line(16.0);
    const double rp = 0.5, rm = 0.4;
    const std::vector<double> times = {0.0, 1.0};
    const std::vector<Eigen::Vector2d> kin = {Eigen::Vector2d(rp, rm), Eigen::Vector2d(rp, rm)};
    const std::vector<double> edges = {0.0, 1.0, 2.0, 3.0};

    double prev_gap = 1e9;
    for (const int replicas : {8, 64, 512}) {
        std::vector<std::vector<Snapshot>> ensemble;
        Rng rng(1234 + replicas);
        const int n_scale = 4;
        for (int r = 0; r < replicas; ++r) {
            std::vector<Snapshot> snaps;
            for (double t : times)
                snaps.push_back({t, poisson_configuration(dom, n_scale * rp, n_scale * rm, rng)});
            ensemble.push_back(std::move(snaps));
        }
        const double gap = factorization_gap(ensemble, n_scale, times, kin, edges, dom);
        CHECK(gap < prev_gap + 0.05);
        prev_gap = gap;
    }
    // With 512 replicas the residual gap is pure estimator noise.
    CHECK(prev_gap < 0.05);
}

TEST_CASE("factorization gap validates its inputs") {
    const Domain dom = Domain::line(16.0);
    const std::vector<double> times = {0.0, 1.0};
    const std::vector<Eigen::Vector2d> kin = {Eigen::Vector2d(0.5, 0.5)};  // wrong length
    const std::vector<double> edges = {0.0, 1.0};
    std::vector<std::vector<Snapshot>> ensemble(4);
    CHECK_THROWS_AS(factorization_gap(ensemble, 1, times, kin, edges, dom), std::invalid_argument);
}

TEST_CASE("decay fit recovers a planted exponential") {
    std::vector<std::pair<double, double>> series;
    for (int i = 0; i <= 40; ++i) {
        const double t = 0.1 * i;
        series.push_back({t, 3.0 * std::exp(-0.7 * t) + 1.0});
    }
    const DecayFit fit = decay_fit(series, 1.0);
    CHECK_FALSE(fit.noise_floor);
    CHECK(fit.rate == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(fit.amplitude == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fit.residual < 1e-10);
}

TEST_CASE("decay fit flags converged series and rejects short input") {
    std::vector<std::pair<double, double>> flat;
    for (int i = 0; i < 10; ++i) flat.push_back({0.5 * i, 2.0});
    CHECK(decay_fit(flat, 2.0).noise_floor);

    // Sign changes across the target also mean the noise floor was reached.
    std::vector<std::pair<double, double>> wiggle;
    for (int i = 0; i < 10; ++i) wiggle.push_back({0.5 * i, 1.0 + ((i % 2) ? 0.01 : -0.01)});
    CHECK(decay_fit(wiggle, 1.0).noise_floor);

    std::vector<std::pair<double, double>> tiny = {{0.0, 2.0}, {1.0, 1.5}};
    CHECK_THROWS_AS(decay_fit(tiny, 1.0), std::invalid_argument);
}

TEST_CASE("decay fit approaches from below with negative deviations") {
    std::vector<std::pair<double, double>> series;
    for (int i = 0; i <= 30; ++i) {
        const double t = 0.2 * i;
        series.push_back({t, 5.0 - 2.0 * std::exp(-1.3 * t)});
    }
    const DecayFit fit = decay_fit(series, 5.0);
    CHECK_FALSE(fit.noise_floor);
    CHECK(fit.rate == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(fit.amplitude == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("free-case relaxation rate matches the slow eigenvalue") {
    // Ensemble-averaged density relaxation from empty initial data; the slow
    // mode of the linearized system has rate 1.
    const Domain dom = Domain::line(100.0);
    PotentialSet p;
    p.z_plus = 1.0;
    p.z_minus = 0.5;
    p.mutation_multiplier = 1.0;

    std::vector<double> times;
    for (int i = 1; i <= 12; ++i) times.push_back(0.25 * i);

    const int replicas = 160;
    std::vector<double> mean_plus(times.size(), 0.0);
    for (int r = 0; r < replicas; ++r) {
        const Trajectory traj =
            run(dom, {}, p, times.back(), times, derive_seed(909, r), {false});
        for (std::size_t k = 0; k < times.size(); ++k)
            mean_plus[k] += traj.snapshots[k].config.plus.size() / 100.0;
    }
    std::vector<std::pair<double, double>> series;
    for (std::size_t k = 0; k < times.size(); ++k)
        series.push_back({times[k], mean_plus[k] / replicas});

    const DecayFit fit = decay_fit(series, 5.0 / 6.0);
    REQUIRE_FALSE(fit.noise_floor);
    CHECK(fit.rate > 0.8);
    CHECK(fit.rate < 1.2);
}
