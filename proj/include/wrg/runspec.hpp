#pragma once

#include "wrg/configuration.hpp"
#include "wrg/regime.hpp"
#include "wrg/version.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace wrg {

enum class ExperimentKind { check, simulate, kinetics, stationary, mesoscopic };

const char* experiment_kind_name(ExperimentKind k);
std::optional<ExperimentKind> parse_experiment_kind(const std::string& name);

struct Schedule {
    double t_end = 10.0;
    std::vector<double> snapshot_times;
    int replicas = 1;
};

struct InitSpec {
    enum class Kind { poisson, points };
    Kind kind = Kind::poisson;
    double intensity_plus = 0.5;
    double intensity_minus = 0.5;
    TwoTypeConfiguration points;
};

struct KineticsSpec {
    Eigen::Vector2d rho0 = Eigen::Vector2d::Zero();
    double t_end = 10.0;
    double dt_init = 1e-2;
    double tol = 1e-8;
    int output_count = 50;
    int grid_cells = 0;  // 0 selects the homogeneous system
    double ceiling = std::numeric_limits<double>::infinity();
};

struct StationarySpec {
    Eigen::Vector2d init = Eigen::Vector2d::Zero();
    double damping = 0.5;
    double tol = 1e-10;
    int max_iter = 100000;
};

struct EstimatorSpec {
    int pair_bins = 0;        // 0 disables pair-correlation output
    double pair_r_max = 0.0;  // required when pair_bins > 0
    int batch_count = 20;
};

/// Fully resolved experiment description. Parsed strictly: unknown keys and
/// constraint violations are reported all at once, with line numbers.
struct RunSpec {
    ExperimentKind kind = ExperimentKind::check;
    Domain domain = Domain::line(10.0);
    PotentialSet potentials;
    RuelleWeight weight;
    Schedule schedule;
    InitSpec init;
    KineticsSpec kinetics;
    StationarySpec stationary;
    EstimatorSpec estimators;
    std::vector<int> scales = {1, 2, 4, 8};
    bool record_events = true;
    std::uint64_t seed = 0;
    int format_version = kFormatVersion;

    friend bool operator==(const RunSpec& a, const RunSpec& b);
};

struct ConfigError {
    int line = 0;  // 0 when the error is not tied to a line
    std::string message;
};

struct ParseResult {
    std::optional<RunSpec> spec;
    std::vector<ConfigError> errors;

    bool ok() const { return spec.has_value() && errors.empty(); }
};

/// Parses the flat key-value format. Returns either a validated RunSpec or
/// the complete list of errors (never just the first).
ParseResult parse_config(const std::string& text);

/// Inverse of parse_config on valid specs: parse(serialize(s)) == s.
std::string serialize_config(const RunSpec& spec);

/// Constraint checks shared by the parser and programmatic construction;
/// returns all violations.
std::vector<ConfigError> validate_spec(const RunSpec& spec);

}  // namespace wrg
