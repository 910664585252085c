#include "wrg/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wrg {

long long BatchStats::count() const {
    long long n = 0;
    for (const auto& [s, c] : batches) n += c;
    return n;
}

double BatchStats::mean() const {
    double sum = 0.0;
    long long n = 0;
    for (const auto& [s, c] : batches) {
        sum += s;
        n += c;
    }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

double BatchStats::std_error() const {
    const std::size_t b = batches.size();
    if (b < 2) return 0.0;
    double mean_of_means = 0.0;
    for (const auto& [s, c] : batches) mean_of_means += c > 0 ? s / static_cast<double>(c) : 0.0;
    mean_of_means /= static_cast<double>(b);
    double var = 0.0;
    for (const auto& [s, c] : batches) {
        const double bm = c > 0 ? s / static_cast<double>(c) : 0.0;
        var += (bm - mean_of_means) * (bm - mean_of_means);
    }
    var /= static_cast<double>(b - 1);
    return std::sqrt(var / static_cast<double>(b));
}

BatchStats BatchStats::merge(const BatchStats& a, const BatchStats& b) {
    BatchStats out = a;
    out.batches.insert(out.batches.end(), b.batches.begin(), b.batches.end());
    return out;
}

BatchStats batch_series(std::span<const double> values, int batch_count) {
    BatchStats stats;
    if (values.empty()) return stats;
    const int b = std::clamp<int>(batch_count, 1, static_cast<int>(values.size()));
    const std::size_t n = values.size();
    for (int k = 0; k < b; ++k) {
        const std::size_t lo = n * k / b;
        const std::size_t hi = n * (k + 1) / b;
        double sum = 0.0;
        for (std::size_t i = lo; i < hi; ++i) sum += values[i];
        stats.add_batch(sum, static_cast<long long>(hi - lo));
    }
    return stats;
}

IntensityEstimate intensity(std::span<const Snapshot> snapshots, Species species,
                            double window_begin, double window_end, const Domain& dom,
                            int batch_count) {
    std::vector<double> densities;
    for (const Snapshot& s : snapshots)
        if (s.time >= window_begin && s.time <= window_end)
            densities.push_back(static_cast<double>(s.config.points(species).size()) / dom.volume());
    if (densities.size() < 2)
        throw std::invalid_argument("intensity: need at least two snapshots in the window");

    const BatchStats stats = batch_series(densities, batch_count);
    IntensityEstimate est;
    est.species = species;
    est.density = stats.mean();
    est.std_error = stats.std_error();
    est.sample_count = stats.count();
    est.window_begin = window_begin;
    est.window_end = window_end;
    return est;
}

const char* species_pair_name(SpeciesPair p) {
    switch (p) {
        case SpeciesPair::plus_plus: return "++";
        case SpeciesPair::minus_minus: return "--";
        case SpeciesPair::plus_minus: return "+-";
    }
    return "?";
}

namespace {

double shell_volume(double lo, double hi, int dimension) {
    return dimension == 1 ? 2.0 * (hi - lo) : std::numbers::pi * (hi * hi - lo * lo);
}

void check_bins(std::span<const double> edges, const Domain& dom) {
    if (edges.size() < 2) throw std::invalid_argument("pair_correlation: need at least one bin");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i] < 0.0) throw std::invalid_argument("pair_correlation: negative bin edge");
        if (i > 0 && !(edges[i] > edges[i - 1]))
            throw std::invalid_argument("pair_correlation: bin edges must be increasing");
    }
    if (edges.back() > 0.5 * dom.min_side())
        throw std::invalid_argument("pair_correlation: bins extend beyond half the box");
}

/// Ordered-pair distance histogram for one configuration; `counts` has one
/// slot per bin.
void accumulate_pairs(const TwoTypeConfiguration& cfg, SpeciesPair pair,
                      std::span<const double> edges, const Domain& dom,
                      std::vector<double>& counts) {
    auto bin_of = [&](double r) -> int {
        if (r < edges.front() || r >= edges.back()) return -1;
        const auto it = std::upper_bound(edges.begin(), edges.end(), r);
        return static_cast<int>(it - edges.begin()) - 1;
    };
    if (pair == SpeciesPair::plus_minus) {
        for (const Vec& x : cfg.plus)
            for (const Vec& y : cfg.minus) {
                const int b = bin_of(min_image_distance(x, y, dom));
                if (b >= 0) counts[b] += 1.0;
            }
    } else {
        const auto& pts = pair == SpeciesPair::plus_plus ? cfg.plus : cfg.minus;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const int b = bin_of(min_image_distance(pts[i], pts[j], dom));
                if (b >= 0) counts[b] += 2.0;  // ordered pairs
            }
    }
}

}  // namespace

PairCorrelationEstimate pair_correlation(std::span<const Snapshot> snapshots, SpeciesPair pair,
                                         std::span<const double> bin_edges, const Domain& dom,
                                         int batch_count) {
    check_bins(bin_edges, dom);
    if (snapshots.empty()) throw std::invalid_argument("pair_correlation: no snapshots");

    const std::size_t n_bins = bin_edges.size() - 1;
    // Per-snapshot normalized estimates, batched per bin.
    std::vector<std::vector<double>> per_bin(n_bins);
    std::vector<double> counts(n_bins);
    for (const Snapshot& s : snapshots) {
        std::fill(counts.begin(), counts.end(), 0.0);
        accumulate_pairs(s.config, pair, bin_edges, dom, counts);
        for (std::size_t b = 0; b < n_bins; ++b) {
            const double shell = shell_volume(bin_edges[b], bin_edges[b + 1], dom.dimension);
            per_bin[b].push_back(counts[b] / (dom.volume() * shell));
        }
    }

    PairCorrelationEstimate est;
    est.pair = pair;
    est.bin_edges.assign(bin_edges.begin(), bin_edges.end());
    est.snapshot_count = static_cast<long long>(snapshots.size());
    for (std::size_t b = 0; b < n_bins; ++b) {
        const BatchStats stats = batch_series(per_bin[b], batch_count);
        est.value.push_back(stats.mean());
        est.std_error.push_back(stats.std_error());
    }
    return est;
}

double factorization_gap(std::span<const std::vector<Snapshot>> replica_snapshots, int n_scale,
                         std::span<const double> times, std::span<const Eigen::Vector2d> kinetic_rho,
                         std::span<const double> bin_edges, const Domain& dom) {
    if (n_scale < 1) throw std::invalid_argument("factorization_gap: scale must be >= 1");
    if (times.size() != kinetic_rho.size())
        throw std::invalid_argument("factorization_gap: kinetic solution times mismatch");
    if (replica_snapshots.empty()) throw std::invalid_argument("factorization_gap: no replicas");
    for (const auto& snaps : replica_snapshots)
        if (snaps.size() != times.size())
            throw std::invalid_argument("factorization_gap: replica snapshot times mismatch");
    check_bins(bin_edges, dom);

    const double n2 = static_cast<double>(n_scale) * static_cast<double>(n_scale);
    double gap = 0.0;
    std::vector<Snapshot> at_time(replica_snapshots.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t r = 0; r < replica_snapshots.size(); ++r)
            at_time[r] = replica_snapshots[r][k];
        const PairCorrelationEstimate est = pair_correlation(
            at_time, SpeciesPair::plus_minus, bin_edges, dom,
            static_cast<int>(replica_snapshots.size()));
        const double product = kinetic_rho[k][0] * kinetic_rho[k][1];
        for (double v : est.value) gap = std::max(gap, std::abs(v / n2 - product));
    }
    return gap;
}

DecayFit decay_fit(std::span<const std::pair<double, double>> series, double target) {
    if (series.size() < 5) throw std::invalid_argument("decay_fit: need at least 5 points");

    DecayFit fit;
    fit.window_begin = series.front().first;
    fit.window_end = series.back().first;

    // Deviations must keep one strict sign; otherwise the series is at the
    // noise floor and no rate is identifiable.
    const double first_dev = series.front().second - target;
    if (first_dev == 0.0) {
        fit.noise_floor = true;
        return fit;
    }
    const double sign = first_dev > 0.0 ? 1.0 : -1.0;
    std::vector<double> ts, logs;
    for (const auto& [t, v] : series) {
        const double dev = (v - target) * sign;
        if (!(dev > 0.0)) {
            fit.noise_floor = true;
            return fit;
        }
        ts.push_back(t);
        logs.push_back(std::log(dev));
    }

    const double n = static_cast<double>(ts.size());
    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += logs[i];
        stt += ts[i] * ts[i];
        stl += ts[i] * logs[i];
    }
    const double denom = n * stt - st * st;
    if (denom == 0.0) throw std::invalid_argument("decay_fit: degenerate time values");
    const double slope = (n * stl - st * sl) / denom;
    const double intercept = (sl - slope * st) / n;

    double rss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = logs[i] - (intercept + slope * ts[i]);
        rss += r * r;
    }
    fit.rate = -slope;
    fit.amplitude = sign * std::exp(intercept);
    fit.residual = std::sqrt(rss / n);
    return fit;
}

}  // namespace wrg
