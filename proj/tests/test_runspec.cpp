#include "wrg/runspec.hpp"

#include "wrg/rng.hpp"

#include <doctest.h>

using namespace wrg;

namespace {

const char* kMinimalCheck = R"(
kind = check
domain.dimension = 1
domain.side_lengths = 10
)";

}  // namespace

TEST_CASE("minimal check config parses with documented defaults") {
    const ParseResult res = parse_config(kMinimalCheck);
    REQUIRE(res.ok());
    const RunSpec& s = *res.spec;
    CHECK(s.kind == ExperimentKind::check);
    CHECK(s.domain.dimension == 1);
    CHECK(s.domain.side[0] == 10.0);
    CHECK(s.potentials.z_plus == 1.0);
    CHECK(s.potentials.mutation_multiplier == 1.0);
    CHECK(s.weight.alpha_plus == 0.0);
    CHECK(s.schedule.replicas == 1);
    CHECK(s.seed == 0);
    CHECK(s.format_version == kFormatVersion);
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
    const ParseResult res = parse_config(
        "# experiment\n"
        "kind = simulate   # trailing comment\n"
        "\n"
        "domain.dimension = 1\n"
        "domain.side_lengths = 8\n"
        "potentials.phi_plus = square_well(0.5, 0.25)\n"
        "schedule.t_end = 5\n"
        "schedule.snapshot_times = 1 2 3.5 5\n");
    REQUIRE(res.ok());
    CHECK(res.spec->potentials.phi_plus == PotentialSpec::square_well(0.5, 0.25));
    CHECK(res.spec->schedule.snapshot_times == std::vector<double>{1.0, 2.0, 3.5, 5.0});
}

TEST_CASE("cutoff beyond the half box is reported with both values") {
    const ParseResult res = parse_config(
        "kind = simulate\n"
        "domain.dimension = 1\n"
        "domain.side_lengths = 4\n"
        "potentials.kappa_plus = square_well(1.0, 2.5)\n");
    REQUIRE_FALSE(res.ok());
    REQUIRE(res.errors.size() == 1);
    CHECK(res.errors[0].message.find("2.5") != std::string::npos);
    CHECK(res.errors[0].message.find("2") != std::string::npos);
    CHECK(res.errors[0].message.find("kappa_plus") != std::string::npos);
}

TEST_CASE("all errors are collected, with line numbers") {
    const ParseResult res = parse_config(
        "kind = warp\n"
        "domain.dimension = 7\n"
        "potentials.z_plus = -3\n"
        "nonsense.key = 1\n"
        "schedule.t_end = abc\n"
        "schedule.t_end = 5\n");
    REQUIRE_FALSE(res.ok());
    CHECK(res.errors.size() >= 5);
    bool saw_kind = false, saw_unknown = false, saw_dup = false, saw_line5 = false;
    for (const ConfigError& e : res.errors) {
        if (e.message.find("unknown experiment") != std::string::npos) saw_kind = true;
        if (e.message.find("unknown key") != std::string::npos) saw_unknown = true;
        if (e.message.find("duplicate key") != std::string::npos) saw_dup = true;
        if (e.line == 5) saw_line5 = true;
    }
    CHECK(saw_kind);
    CHECK(saw_unknown);
    CHECK(saw_dup);
    CHECK(saw_line5);
}

TEST_CASE("snapshot count expands to an even grid") {
    const ParseResult res = parse_config(
        "kind = simulate\n"
        "domain.dimension = 1\n"
        "domain.side_lengths = 6\n"
        "schedule.t_end = 8\n"
        "schedule.snapshot_count = 4\n");
    REQUIRE(res.ok());
    CHECK(res.spec->schedule.snapshot_times == std::vector<double>{2.0, 4.0, 6.0, 8.0});

    const ParseResult both = parse_config(
        "kind = simulate\n"
        "domain.dimension = 1\n"
        "domain.side_lengths = 6\n"
        "schedule.t_end = 8\n"
        "schedule.snapshot_times = 1 2\n"
        "schedule.snapshot_count = 4\n");
    CHECK_FALSE(both.ok());
}

TEST_CASE("point lists parse in one and two dimensions") {
    const ParseResult r1 = parse_config(
        "kind = simulate\n"
        "domain.dimension = 1\n"
        "domain.side_lengths = 6\n"
        "init.kind = points\n"
        "init.points_plus = 0.5 1.25 3\n"
        "init.points_minus = 2.75\n");
    REQUIRE(r1.ok());
    CHECK(r1.spec->init.points.plus.size() == 3);
    CHECK(r1.spec->init.points.plus[1][0] == 1.25);

    const ParseResult r2 = parse_config(
        "kind = simulate\n"
        "domain.dimension = 2\n"
        "domain.side_lengths = 6 4\n"
        "init.kind = points\n"
        "init.points_plus = 0.5,1.5 2,3.25\n");
    REQUIRE(r2.ok());
    CHECK(r2.spec->init.points.plus[1][1] == 3.25);

    const ParseResult dup = parse_config(
        "kind = simulate\n"
        "domain.dimension = 1\n"
        "domain.side_lengths = 6\n"
        "init.kind = points\n"
        "init.points_plus = 1 1\n");
    CHECK_FALSE(dup.ok());
}

TEST_CASE("mesoscopic specs need replicas, scales and snapshots") {
    const ParseResult res = parse_config(
        "kind = mesoscopic\n"
        "domain.dimension = 1\n"
        "domain.side_lengths = 10\n"
        "schedule.replicas = 2\n"
        "mesoscopic.scales = 4 2\n");
    REQUIRE_FALSE(res.ok());
    bool saw_replicas = false, saw_scales = false, saw_snapshots = false;
    for (const ConfigError& e : res.errors) {
        if (e.message.find("replicas") != std::string::npos) saw_replicas = true;
        if (e.message.find("increasing") != std::string::npos) saw_scales = true;
        if (e.message.find("snapshot") != std::string::npos) saw_snapshots = true;
    }
    CHECK(saw_replicas);
    CHECK(saw_scales);
    CHECK(saw_snapshots);
}

namespace {

RunSpec random_spec(Rng& rng) {
    RunSpec s;
    const int kinds = 5;
    s.kind = static_cast<ExperimentKind>(rng.uniform_index(kinds));
    const int dim = 1 + static_cast<int>(rng.uniform_index(2));
    const double lx = rng.uniform(4.0, 20.0);
    s.domain = dim == 1 ? Domain::line(lx) : Domain::rectangle(lx, rng.uniform(4.0, 20.0));

    auto pot = [&]() -> PotentialSpec {
        switch (rng.uniform_index(4)) {
            case 0: return PotentialSpec::zero();
            case 1: return PotentialSpec::square_well(rng.uniform(0.0, 2.0), rng.uniform(0.1, 1.0));
            case 2:
                return PotentialSpec::gaussian(rng.uniform(0.0, 2.0), rng.uniform(0.1, 0.5),
                                               rng.uniform(0.5, 1.5));
            default:
                return PotentialSpec::exponential(rng.uniform(0.0, 2.0), rng.uniform(0.1, 0.5),
                                                  rng.uniform(0.5, 1.5));
        }
    };
    s.potentials.phi_plus = pot();
    s.potentials.phi_minus = pot();
    s.potentials.psi_plus = pot();
    s.potentials.psi_minus = pot();
    s.potentials.kappa_plus = pot();
    s.potentials.kappa_minus = pot();
    s.potentials.tau_plus = pot();
    s.potentials.tau_minus = pot();
    s.potentials.z_plus = rng.uniform(0.1, 2.0);
    s.potentials.z_minus = rng.uniform(0.1, 2.0);
    s.potentials.mutation_multiplier = rng.uniform(0.0, 2.0);
    s.weight = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    s.schedule.t_end = rng.uniform(1.0, 20.0);
    const int snaps = static_cast<int>(rng.uniform_index(5));
    for (int i = 1; i <= snaps; ++i)
        s.schedule.snapshot_times.push_back(s.schedule.t_end * i / (snaps + 1));
    s.schedule.replicas = 4 + static_cast<int>(rng.uniform_index(8));
    s.init.kind = InitSpec::Kind::poisson;
    s.init.intensity_plus = rng.uniform(0.0, 1.0);
    s.init.intensity_minus = rng.uniform(0.0, 1.0);
    s.kinetics.rho0 = Eigen::Vector2d(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0));
    s.kinetics.t_end = rng.uniform(1.0, 10.0);
    s.kinetics.dt_init = rng.uniform(1e-3, 1e-1);
    s.kinetics.tol = rng.uniform(1e-10, 1e-6);
    s.kinetics.output_count = 1 + static_cast<int>(rng.uniform_index(100));
    s.kinetics.grid_cells = static_cast<int>(rng.uniform_index(65));
    if (rng.uniform01() < 0.3) s.kinetics.ceiling = rng.uniform(1.0, 50.0);
    s.stationary.init = Eigen::Vector2d(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0));
    s.stationary.damping = rng.uniform(0.1, 1.0);
    s.stationary.tol = rng.uniform(1e-12, 1e-8);
    s.stationary.max_iter = 100 + static_cast<int>(rng.uniform_index(100000));
    s.estimators.pair_bins = 1 + static_cast<int>(rng.uniform_index(16));
    s.estimators.pair_r_max = rng.uniform(0.1, 0.5 * s.domain.min_side());
    s.estimators.batch_count = 2 + static_cast<int>(rng.uniform_index(30));
    s.scales.clear();
    int scale = 1;
    const int n_scales = 1 + static_cast<int>(rng.uniform_index(4));
    for (int i = 0; i < n_scales; ++i) {
        s.scales.push_back(scale);
        scale *= 2;
    }
    s.record_events = rng.uniform01() < 0.5;
    s.seed = rng.next_u64();

    // Keep cutoffs legal for the sampled box.
    const double half = 0.5 * s.domain.min_side();
    for (PotentialSpec* g : {&s.potentials.phi_plus, &s.potentials.phi_minus, &s.potentials.psi_plus,
                             &s.potentials.psi_minus, &s.potentials.kappa_plus,
                             &s.potentials.kappa_minus, &s.potentials.tau_plus,
                             &s.potentials.tau_minus})
        if (!g->is_zero() && g->cutoff > half) *g = PotentialSpec::square_well(0.5, 0.5 * half);
    return s;
}

}  // namespace

TEST_CASE("serialize-parse round trip is the identity on valid specs") {
    Rng rng(20260808);
    int tested = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const RunSpec s = random_spec(rng);
        if (!validate_spec(s).empty()) continue;  // generator occasionally violates mesoscopic rules
        ++tested;
        const std::string text = serialize_config(s);
        const ParseResult res = parse_config(text);
        REQUIRE_MESSAGE(res.ok(), text);
        CHECK(*res.spec == s);
    }
    CHECK(tested > 20);
}
