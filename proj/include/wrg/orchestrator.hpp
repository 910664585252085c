#pragma once

#include "wrg/estimators.hpp"
#include "wrg/io.hpp"
#include "wrg/kinetic.hpp"
#include "wrg/runspec.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wrg {

struct ExperimentResult {
    std::filesystem::path directory;
    Manifest manifest;
};

/// Runs the experiment described by the spec and writes its outputs plus a
/// manifest into `out_dir`, atomically (staged in a temp directory, then
/// renamed). Re-running with the same spec and seed reproduces byte-identical
/// data files. Throws std::invalid_argument on validation failure.
ExperimentResult run_experiment(const RunSpec& spec, const std::filesystem::path& out_dir,
                                int parallelism = 1);

/// In-memory variant used by tests: experiment outputs as name -> content.
std::map<std::string, std::string> run_experiment_files(const RunSpec& spec, int parallelism = 1);

struct SweepRow {
    int scale = 1;
    double density_error = 0.0;     // mean over replicas of sup-time density deviation
    double density_error_se = 0.0;  // plain standard error over replicas
    double gap = 0.0;               // mean over replica groups of the factorization gap
    double gap_se = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<double> times;
    std::vector<Eigen::Vector2d> kinetic;  // reference trajectory at `times`
};

/// Scaling comparison across the configured levels: replicas at scale n start
/// from Poisson data with intensities n * rho0 and are compared against the
/// kinetic trajectory after rescaling counts by 1/(n |domain|).
SweepResult mesoscopic_sweep(const RunSpec& spec, int parallelism = 1);

/// Runs `body(i)` for i in [0, n) on up to `parallelism` threads; the first
/// exception is rethrown after all workers finish.
void parallel_for(int n, int parallelism, const std::function<void(int)>& body);

}  // namespace wrg
