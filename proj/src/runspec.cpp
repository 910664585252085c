#include "wrg/runspec.hpp"

#include "wrg/text.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace wrg {

const char* experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::check: return "check";
        case ExperimentKind::simulate: return "simulate";
        case ExperimentKind::kinetics: return "kinetics";
        case ExperimentKind::stationary: return "stationary";
        case ExperimentKind::mesoscopic: return "mesoscopic";
    }
    return "?";
}

std::optional<ExperimentKind> parse_experiment_kind(const std::string& name) {
    for (ExperimentKind k : {ExperimentKind::check, ExperimentKind::simulate, ExperimentKind::kinetics,
                             ExperimentKind::stationary, ExperimentKind::mesoscopic})
        if (name == experiment_kind_name(k)) return k;
    return std::nullopt;
}

namespace {

bool vec2_equal(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a[0] == b[0] && a[1] == b[1];
}

std::string format_points(const std::vector<Vec>& pts, int dimension) {
    std::string out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ' ';
        out += format_double(pts[i][0]);
        if (dimension == 2) out += ',' + format_double(pts[i][1]);
    }
    return out;
}

}  // namespace

bool operator==(const RunSpec& a, const RunSpec& b) {
    return a.kind == b.kind && a.domain == b.domain && a.potentials == b.potentials &&
           a.weight.alpha_plus == b.weight.alpha_plus &&
           a.weight.alpha_minus == b.weight.alpha_minus &&
           a.schedule.t_end == b.schedule.t_end &&
           a.schedule.snapshot_times == b.schedule.snapshot_times &&
           a.schedule.replicas == b.schedule.replicas && a.init.kind == b.init.kind &&
           a.init.intensity_plus == b.init.intensity_plus &&
           a.init.intensity_minus == b.init.intensity_minus && a.init.points == b.init.points &&
           vec2_equal(a.kinetics.rho0, b.kinetics.rho0) && a.kinetics.t_end == b.kinetics.t_end &&
           a.kinetics.dt_init == b.kinetics.dt_init && a.kinetics.tol == b.kinetics.tol &&
           a.kinetics.output_count == b.kinetics.output_count &&
           a.kinetics.grid_cells == b.kinetics.grid_cells &&
           a.kinetics.ceiling == b.kinetics.ceiling && vec2_equal(a.stationary.init, b.stationary.init) &&
           a.stationary.damping == b.stationary.damping && a.stationary.tol == b.stationary.tol &&
           a.stationary.max_iter == b.stationary.max_iter &&
           a.estimators.pair_bins == b.estimators.pair_bins &&
           a.estimators.pair_r_max == b.estimators.pair_r_max &&
           a.estimators.batch_count == b.estimators.batch_count && a.scales == b.scales &&
           a.record_events == b.record_events && a.seed == b.seed &&
           a.format_version == b.format_version;
}

namespace {

struct Parser {
    RunSpec spec;
    std::vector<ConfigError> errors;
    std::set<std::string> seen;
    // Domain fields staged until both are known.
    int dimension = 1;
    std::vector<double> sides = {10.0};
    std::optional<int> snapshot_count;

    void fail(int line, std::string msg) { errors.push_back({line, std::move(msg)}); }

    bool parse_double_or_fail(int line, const std::string& key, std::string_view v, double& out) {
        if (try_parse_double(v, out)) return true;
        fail(line, key + ": expected a number, got '" + std::string(v) + "'");
        return false;
    }

    bool parse_int_or_fail(int line, const std::string& key, std::string_view v, int& out) {
        double x;
        if (try_parse_double(v, x) && x == std::floor(x) && std::abs(x) < 2e9) {
            out = static_cast<int>(x);
            return true;
        }
        fail(line, key + ": expected an integer, got '" + std::string(v) + "'");
        return false;
    }

    std::vector<double> parse_double_list(int line, const std::string& key, std::string_view v) {
        std::vector<double> out;
        for (std::string_view piece : split(v, ' ')) {
            piece = trim(piece);
            if (piece.empty()) continue;
            double x;
            if (!try_parse_double(piece, x)) {
                fail(line, key + ": expected numbers, got '" + std::string(piece) + "'");
                return {};
            }
            out.push_back(x);
        }
        return out;
    }

    std::vector<Vec> parse_point_list(int line, const std::string& key, std::string_view v) {
        std::vector<Vec> out;
        for (std::string_view piece : split(v, ' ')) {
            piece = trim(piece);
            if (piece.empty()) continue;
            const auto parts = split(piece, ',');
            Vec p = Vec::Zero();
            bool good = parts.size() >= 1 && parts.size() <= 2;
            for (std::size_t i = 0; good && i < parts.size(); ++i) {
                double x;
                good = try_parse_double(parts[i], x);
                if (good) p[static_cast<int>(i)] = x;
            }
            if (!good) {
                fail(line, key + ": bad point '" + std::string(piece) + "'");
                return {};
            }
            out.push_back(p);
        }
        return out;
    }

    void handle(int line, const std::string& key, const std::string& value) {
        auto dbl = [&](double& target) {
            double x;
            if (parse_double_or_fail(line, key, value, x)) target = x;
        };
        auto integer = [&](int& target) {
            int x;
            if (parse_int_or_fail(line, key, value, x)) target = x;
        };
        auto potential = [&](PotentialSpec& target) {
            try {
                target = parse_potential(value);
            } catch (const std::exception& e) {
                fail(line, key + ": " + e.what());
            }
        };

        if (key == "format") {
            integer(spec.format_version);
        } else if (key == "kind") {
            if (auto k = parse_experiment_kind(value))
                spec.kind = *k;
            else
                fail(line, "kind: unknown experiment '" + value + "'");
        } else if (key == "seed") {
            try {
                std::size_t used = 0;
                spec.seed = std::stoull(value, &used, 10);
                if (used != value.size()) throw std::invalid_argument(value);
            } catch (const std::exception&) {
                fail(line, "seed: expected an unsigned integer, got '" + value + "'");
            }
        } else if (key == "record_events") {
            if (value == "on" || value == "true")
                spec.record_events = true;
            else if (value == "off" || value == "false")
                spec.record_events = false;
            else
                fail(line, "record_events: expected on/off");
        } else if (key == "domain.dimension") {
            integer(dimension);
        } else if (key == "domain.side_lengths") {
            sides = parse_double_list(line, key, value);
        } else if (key == "potentials.phi_plus") {
            potential(spec.potentials.phi_plus);
        } else if (key == "potentials.phi_minus") {
            potential(spec.potentials.phi_minus);
        } else if (key == "potentials.psi_plus") {
            potential(spec.potentials.psi_plus);
        } else if (key == "potentials.psi_minus") {
            potential(spec.potentials.psi_minus);
        } else if (key == "potentials.kappa_plus") {
            potential(spec.potentials.kappa_plus);
        } else if (key == "potentials.kappa_minus") {
            potential(spec.potentials.kappa_minus);
        } else if (key == "potentials.tau_plus") {
            potential(spec.potentials.tau_plus);
        } else if (key == "potentials.tau_minus") {
            potential(spec.potentials.tau_minus);
        } else if (key == "potentials.z_plus") {
            dbl(spec.potentials.z_plus);
        } else if (key == "potentials.z_minus") {
            dbl(spec.potentials.z_minus);
        } else if (key == "potentials.mutation_multiplier") {
            dbl(spec.potentials.mutation_multiplier);
        } else if (key == "weight.alpha_plus") {
            dbl(spec.weight.alpha_plus);
        } else if (key == "weight.alpha_minus") {
            dbl(spec.weight.alpha_minus);
        } else if (key == "schedule.t_end") {
            dbl(spec.schedule.t_end);
        } else if (key == "schedule.snapshot_times") {
            spec.schedule.snapshot_times = parse_double_list(line, key, value);
        } else if (key == "schedule.snapshot_count") {
            int c = 0;
            integer(c);
            if (c < 1)
                fail(line, "schedule.snapshot_count: must be >= 1");
            else
                snapshot_count = c;
        } else if (key == "schedule.replicas") {
            integer(spec.schedule.replicas);
        } else if (key == "init.kind") {
            if (value == "poisson")
                spec.init.kind = InitSpec::Kind::poisson;
            else if (value == "points")
                spec.init.kind = InitSpec::Kind::points;
            else
                fail(line, "init.kind: expected poisson or points");
        } else if (key == "init.intensity_plus") {
            dbl(spec.init.intensity_plus);
        } else if (key == "init.intensity_minus") {
            dbl(spec.init.intensity_minus);
        } else if (key == "init.points_plus") {
            spec.init.points.plus = parse_point_list(line, key, value);
        } else if (key == "init.points_minus") {
            spec.init.points.minus = parse_point_list(line, key, value);
        } else if (key == "kinetics.rho0_plus") {
            dbl(spec.kinetics.rho0[0]);
        } else if (key == "kinetics.rho0_minus") {
            dbl(spec.kinetics.rho0[1]);
        } else if (key == "kinetics.t_end") {
            dbl(spec.kinetics.t_end);
        } else if (key == "kinetics.dt") {
            dbl(spec.kinetics.dt_init);
        } else if (key == "kinetics.tol") {
            dbl(spec.kinetics.tol);
        } else if (key == "kinetics.output_count") {
            integer(spec.kinetics.output_count);
        } else if (key == "kinetics.grid_cells") {
            integer(spec.kinetics.grid_cells);
        } else if (key == "kinetics.ceiling") {
            dbl(spec.kinetics.ceiling);
        } else if (key == "stationary.init_plus") {
            dbl(spec.stationary.init[0]);
        } else if (key == "stationary.init_minus") {
            dbl(spec.stationary.init[1]);
        } else if (key == "stationary.damping") {
            dbl(spec.stationary.damping);
        } else if (key == "stationary.tol") {
            dbl(spec.stationary.tol);
        } else if (key == "stationary.max_iter") {
            integer(spec.stationary.max_iter);
        } else if (key == "estimators.pair_bins") {
            integer(spec.estimators.pair_bins);
        } else if (key == "estimators.pair_r_max") {
            dbl(spec.estimators.pair_r_max);
        } else if (key == "estimators.batch_count") {
            integer(spec.estimators.batch_count);
        } else if (key == "mesoscopic.scales") {
            const auto xs = parse_double_list(line, key, value);
            spec.scales.clear();
            for (double x : xs) {
                if (x != std::floor(x) || x < 1) {
                    fail(line, "mesoscopic.scales: expected positive integers");
                    break;
                }
                spec.scales.push_back(static_cast<int>(x));
            }
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }
};

}  // namespace

std::vector<ConfigError> validate_spec(const RunSpec& spec) {
    std::vector<ConfigError> errors;
    auto fail = [&](std::string msg) { errors.push_back({0, std::move(msg)}); };

    if (spec.format_version != kFormatVersion)
        fail("format: this build reads format " + std::to_string(kFormatVersion) + ", got " +
             std::to_string(spec.format_version));

    if (!(spec.potentials.z_plus > 0.0)) fail("potentials.z_plus: must be > 0");
    if (!(spec.potentials.z_minus > 0.0)) fail("potentials.z_minus: must be > 0");
    if (!(spec.potentials.mutation_multiplier >= 0.0))
        fail("potentials.mutation_multiplier: must be >= 0");

    const double half = 0.5 * spec.domain.min_side();
    const std::pair<const char*, const PotentialSpec*> pots[] = {
        {"phi_plus", &spec.potentials.phi_plus},     {"phi_minus", &spec.potentials.phi_minus},
        {"psi_plus", &spec.potentials.psi_plus},     {"psi_minus", &spec.potentials.psi_minus},
        {"kappa_plus", &spec.potentials.kappa_plus}, {"kappa_minus", &spec.potentials.kappa_minus},
        {"tau_plus", &spec.potentials.tau_plus},     {"tau_minus", &spec.potentials.tau_minus},
    };
    for (const auto& [name, g] : pots) {
        if (!g->is_zero() && g->cutoff > half)
            fail(std::string("potentials.") + name + ": cutoff " + format_double(g->cutoff) +
                 " exceeds half the smallest side " + format_double(half));
    }

    if (!(spec.schedule.t_end >= 0.0)) fail("schedule.t_end: must be >= 0");
    for (std::size_t i = 0; i < spec.schedule.snapshot_times.size(); ++i) {
        const double t = spec.schedule.snapshot_times[i];
        if (t < 0.0 || t > spec.schedule.t_end) {
            fail("schedule.snapshot_times: values must lie in [0, t_end]");
            break;
        }
        if (i > 0 && t < spec.schedule.snapshot_times[i - 1]) {
            fail("schedule.snapshot_times: values must be sorted");
            break;
        }
    }
    if (spec.schedule.replicas < 1) fail("schedule.replicas: must be >= 1");

    if (spec.init.intensity_plus < 0.0 || spec.init.intensity_minus < 0.0)
        fail("init.intensity: must be >= 0");
    if (spec.init.kind == InitSpec::Kind::points) {
        try {
            validate_configuration(spec.init.points, spec.domain);
        } catch (const std::exception& e) {
            fail(std::string("init.points: ") + e.what());
        }
    }

    if (!(spec.kinetics.t_end >= 0.0)) fail("kinetics.t_end: must be >= 0");
    if (!(spec.kinetics.dt_init > 0.0)) fail("kinetics.dt: must be > 0");
    if (spec.kinetics.output_count < 1) fail("kinetics.output_count: must be >= 1");
    if (spec.kinetics.grid_cells < 0) fail("kinetics.grid_cells: must be >= 0");
    if (spec.kinetics.rho0[0] < 0.0 || spec.kinetics.rho0[1] < 0.0)
        fail("kinetics.rho0: must be >= 0");

    if (!(spec.stationary.damping > 0.0 && spec.stationary.damping <= 1.0))
        fail("stationary.damping: must lie in (0, 1]");
    if (!(spec.stationary.tol > 0.0)) fail("stationary.tol: must be > 0");
    if (spec.stationary.max_iter < 1) fail("stationary.max_iter: must be >= 1");
    if (spec.stationary.init[0] < 0.0 || spec.stationary.init[1] < 0.0)
        fail("stationary.init: must be >= 0");

    if (spec.estimators.pair_bins < 0) fail("estimators.pair_bins: must be >= 0");
    if (spec.estimators.pair_bins > 0 &&
        !(spec.estimators.pair_r_max > 0.0 && spec.estimators.pair_r_max <= half))
        fail("estimators.pair_r_max: must lie in (0, half the smallest side]");
    if (spec.estimators.batch_count < 2) fail("estimators.batch_count: must be >= 2");

    if (spec.kind == ExperimentKind::mesoscopic) {
        if (spec.scales.empty()) fail("mesoscopic.scales: must be nonempty");
        for (std::size_t i = 0; i < spec.scales.size(); ++i) {
            if (spec.scales[i] < 1) {
                fail("mesoscopic.scales: must be >= 1");
                break;
            }
            if (i > 0 && spec.scales[i] <= spec.scales[i - 1]) {
                fail("mesoscopic.scales: must be strictly increasing");
                break;
            }
        }
        if (spec.schedule.replicas < 4)
            fail("schedule.replicas: mesoscopic sweeps need >= 4 replicas for standard errors");
        if (spec.schedule.snapshot_times.empty())
            fail("schedule.snapshot_times: mesoscopic sweeps need snapshot times");
        if (spec.estimators.pair_bins < 1)
            fail("estimators.pair_bins: mesoscopic sweeps need pair-correlation bins");
    }
    return errors;
}

ParseResult parse_config(const std::string& text) {
    Parser p;
    int line_no = 0;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            p.fail(line_no, "expected 'key = value'");
            continue;
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty()) {
            p.fail(line_no, "empty key");
            continue;
        }
        if (!p.seen.insert(key).second) {
            p.fail(line_no, "duplicate key '" + key + "'");
            continue;
        }
        p.handle(line_no, key, value);
    }

    // Assemble the domain once both fields are known.
    try {
        Vec side = Vec::Zero();
        if (p.dimension >= 1 && p.dimension <= 2 &&
            static_cast<int>(p.sides.size()) == p.dimension) {
            for (int i = 0; i < p.dimension; ++i) side[i] = p.sides[i];
            p.spec.domain = Domain::make(p.dimension, side);
        } else {
            p.fail(0, "domain: side_lengths must list exactly 'dimension' values");
        }
    } catch (const std::exception& e) {
        p.fail(0, std::string("domain: ") + e.what());
    }

    if (p.snapshot_count) {
        if (!p.spec.schedule.snapshot_times.empty()) {
            p.fail(0, "schedule: give snapshot_times or snapshot_count, not both");
        } else {
            const int c = *p.snapshot_count;
            for (int i = 1; i <= c; ++i)
                p.spec.schedule.snapshot_times.push_back(p.spec.schedule.t_end * i / c);
        }
    }

    for (ConfigError& e : validate_spec(p.spec)) p.errors.push_back(std::move(e));

    ParseResult result;
    result.errors = std::move(p.errors);
    if (result.errors.empty()) result.spec = std::move(p.spec);
    return result;
}

std::string serialize_config(const RunSpec& s) {
    std::string out;
    auto kv = [&](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    kv("format", std::to_string(s.format_version));
    kv("kind", experiment_kind_name(s.kind));
    kv("seed", std::to_string(s.seed));
    kv("record_events", s.record_events ? "on" : "off");
    kv("domain.dimension", std::to_string(s.domain.dimension));
    std::string sides = format_double(s.domain.side[0]);
    if (s.domain.dimension == 2) sides += ' ' + format_double(s.domain.side[1]);
    kv("domain.side_lengths", sides);
    kv("potentials.phi_plus", format_potential(s.potentials.phi_plus));
    kv("potentials.phi_minus", format_potential(s.potentials.phi_minus));
    kv("potentials.psi_plus", format_potential(s.potentials.psi_plus));
    kv("potentials.psi_minus", format_potential(s.potentials.psi_minus));
    kv("potentials.kappa_plus", format_potential(s.potentials.kappa_plus));
    kv("potentials.kappa_minus", format_potential(s.potentials.kappa_minus));
    kv("potentials.tau_plus", format_potential(s.potentials.tau_plus));
    kv("potentials.tau_minus", format_potential(s.potentials.tau_minus));
    kv("potentials.z_plus", format_double(s.potentials.z_plus));
    kv("potentials.z_minus", format_double(s.potentials.z_minus));
    kv("potentials.mutation_multiplier", format_double(s.potentials.mutation_multiplier));
    kv("weight.alpha_plus", format_double(s.weight.alpha_plus));
    kv("weight.alpha_minus", format_double(s.weight.alpha_minus));
    kv("schedule.t_end", format_double(s.schedule.t_end));
    if (!s.schedule.snapshot_times.empty()) {
        std::string times;
        for (std::size_t i = 0; i < s.schedule.snapshot_times.size(); ++i) {
            if (i) times += ' ';
            times += format_double(s.schedule.snapshot_times[i]);
        }
        kv("schedule.snapshot_times", times);
    }
    kv("schedule.replicas", std::to_string(s.schedule.replicas));
    kv("init.kind", s.init.kind == InitSpec::Kind::poisson ? "poisson" : "points");
    kv("init.intensity_plus", format_double(s.init.intensity_plus));
    kv("init.intensity_minus", format_double(s.init.intensity_minus));
    if (!s.init.points.plus.empty())
        kv("init.points_plus", format_points(s.init.points.plus, s.domain.dimension));
    if (!s.init.points.minus.empty())
        kv("init.points_minus", format_points(s.init.points.minus, s.domain.dimension));
    kv("kinetics.rho0_plus", format_double(s.kinetics.rho0[0]));
    kv("kinetics.rho0_minus", format_double(s.kinetics.rho0[1]));
    kv("kinetics.t_end", format_double(s.kinetics.t_end));
    kv("kinetics.dt", format_double(s.kinetics.dt_init));
    kv("kinetics.tol", format_double(s.kinetics.tol));
    kv("kinetics.output_count", std::to_string(s.kinetics.output_count));
    kv("kinetics.grid_cells", std::to_string(s.kinetics.grid_cells));
    if (std::isfinite(s.kinetics.ceiling)) kv("kinetics.ceiling", format_double(s.kinetics.ceiling));
    kv("stationary.init_plus", format_double(s.stationary.init[0]));
    kv("stationary.init_minus", format_double(s.stationary.init[1]));
    kv("stationary.damping", format_double(s.stationary.damping));
    kv("stationary.tol", format_double(s.stationary.tol));
    kv("stationary.max_iter", std::to_string(s.stationary.max_iter));
    kv("estimators.pair_bins", std::to_string(s.estimators.pair_bins));
    kv("estimators.pair_r_max", format_double(s.estimators.pair_r_max));
    kv("estimators.batch_count", std::to_string(s.estimators.batch_count));
    if (!s.scales.empty()) {
        std::string scales;
        for (std::size_t i = 0; i < s.scales.size(); ++i) {
            if (i) scales += ' ';
            scales += std::to_string(s.scales[i]);
        }
        kv("mesoscopic.scales", scales);
    }
    return out;
}

}  // namespace wrg
