#pragma once

#include "wrg/simulator.hpp"

#include <Eigen/Core>

#include <span>
#include <utility>
#include <vector>

namespace wrg {

/// Per-batch (sum, count) aggregates. Merging concatenates batch lists, so
/// merges are associative and order-independent up to float re-association.
struct BatchStats {
    std::vector<std::pair<double, long long>> batches;

    void add_batch(double sum, long long count) { batches.push_back({sum, count}); }

    long long count() const;
    double mean() const;
    /// Standard error of the mean estimated from the spread of batch means.
    double std_error() const;

    static BatchStats merge(const BatchStats& a, const BatchStats& b);
};

/// Splits a value series into `batch_count` contiguous batches.
BatchStats batch_series(std::span<const double> values, int batch_count);

struct IntensityEstimate {
    Species species = Species::plus;
    double density = 0.0;
    double std_error = 0.0;
    long long sample_count = 0;
    double window_begin = 0.0;
    double window_end = 0.0;
};

/// Mean particle density over the snapshots whose times fall in
/// [window_begin, window_end]; batch-means standard error.
IntensityEstimate intensity(std::span<const Snapshot> snapshots, Species species,
                            double window_begin, double window_end, const Domain& dom,
                            int batch_count = 20);

enum class SpeciesPair { plus_plus, minus_minus, plus_minus };

const char* species_pair_name(SpeciesPair p);

struct PairCorrelationEstimate {
    SpeciesPair pair = SpeciesPair::plus_plus;
    std::vector<double> bin_edges;
    std::vector<double> value;      // second-order kernel estimate per bin
    std::vector<double> std_error;  // batch means over snapshots
    long long snapshot_count = 0;
};

/// Distance-histogram estimator of the two-point kernel, normalized by shell
/// volume and box volume so a Poisson state gives rho1 * rho2 in every bin.
PairCorrelationEstimate pair_correlation(std::span<const Snapshot> snapshots, SpeciesPair pair,
                                         std::span<const double> bin_edges, const Domain& dom,
                                         int batch_count = 20);

/// Chaos (factorization) diagnostic for an ensemble of replicas at scale n:
/// the worst deviation over bins and sampled times between the rescaled
/// cross-species pair kernel and the product of kinetic densities.
/// `replica_snapshots[r]` must hold one snapshot per entry of `times`, and
/// `kinetic_rho[k]` the kinetic solution (rho+, rho-) at times[k].
double factorization_gap(std::span<const std::vector<Snapshot>> replica_snapshots, int n_scale,
                         std::span<const double> times, std::span<const Eigen::Vector2d> kinetic_rho,
                         std::span<const double> bin_edges, const Domain& dom);

struct DecayFit {
    double rate = 0.0;       // fitted exponential rate, slope of -log deviation
    double amplitude = 0.0;  // fitted prefactor
    double residual = 0.0;   // RMS of the log-linear fit residuals
    bool noise_floor = false;
    double window_begin = 0.0;
    double window_end = 0.0;
};

/// Least-squares line through log|value - target| vs time. Series whose
/// deviations vanish or change sign report the noise-floor flag instead of a
/// rate. Needs at least 5 points.
DecayFit decay_fit(std::span<const std::pair<double, double>> series, double target);

}  // namespace wrg
