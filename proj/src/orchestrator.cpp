#include "wrg/orchestrator.hpp"

#include "wrg/text.hpp"
#include "wrg/version.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <iostream>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace wrg {

namespace fs = std::filesystem;

void parallel_for(int n, int parallelism, const std::function<void(int)>& body) {
    if (n <= 0) return;
    const int workers = std::max(1, std::min(parallelism, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string zero_pad(int value, int width) {
    std::string s = std::to_string(value);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

std::vector<double> linspace_times(double t_end, int count) {
    std::vector<double> times;
    times.reserve(count + 1);
    for (int i = 0; i <= count; ++i) times.push_back(t_end * i / count);
    return times;
}

TwoTypeConfiguration initial_configuration(const RunSpec& spec, std::uint64_t seed, double scale = 1.0) {
    if (spec.init.kind == InitSpec::Kind::points) return spec.init.points;
    Rng rng(seed);
    return poisson_configuration(spec.domain, scale * spec.init.intensity_plus,
                                 scale * spec.init.intensity_minus, rng);
}

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// -------------------------------------------------------------------- check

void run_check(const RunSpec& spec, std::map<std::string, std::string>& files) {
    const int dim = spec.domain.dimension;
    const RegimeReport fp = check_fokker_planck_conditions(spec.potentials, spec.weight, dim);
    const RegimeReport vl = check_vlasov_conditions(spec.potentials, spec.weight, dim);
    files["regime_fokker_planck.txt"] = format_records(regime_report_records(fp));
    files["regime_vlasov.txt"] = format_records(regime_report_records(vl));
}

// ----------------------------------------------------------------- simulate

std::vector<double> default_pair_bins(const RunSpec& spec) {
    std::vector<double> edges;
    const int bins = spec.estimators.pair_bins;
    for (int i = 0; i <= bins; ++i) edges.push_back(spec.estimators.pair_r_max * i / bins);
    return edges;
}

void run_simulate(const RunSpec& spec, int parallelism, std::map<std::string, std::string>& files) {
    const int replicas = spec.schedule.replicas;
    std::vector<Trajectory> trajs(replicas);
    parallel_for(replicas, parallelism, [&](int r) {
        const std::uint64_t init_seed = derive_seed(spec.seed, 2 * r);
        const std::uint64_t run_seed = derive_seed(spec.seed, 2 * r + 1);
        const TwoTypeConfiguration init = initial_configuration(spec, init_seed);
        trajs[r] = run(spec.domain, init, spec.potentials, spec.schedule.t_end,
                       spec.schedule.snapshot_times, run_seed, {spec.record_events});
    });

    for (int r = 0; r < replicas; ++r) {
        const std::string tag = zero_pad(r, 3);
        files["snapshots_" + tag + ".txt"] = format_snapshots(trajs[r].snapshots, spec.domain);
        if (spec.record_events)
            files["events_" + tag + ".txt"] = format_events(trajs[r].events, spec.domain);
    }

    const auto& times = spec.schedule.snapshot_times;
    if (!times.empty()) {
        const double vol = spec.domain.volume();
        std::string csv = "time,density_plus,density_plus_se,density_minus,density_minus_se\n";
        for (std::size_t k = 0; k < times.size(); ++k) {
            double stats[2][2] = {{0, 0}, {0, 0}};  // species x (mean, se)
            for (int s = 0; s < 2; ++s) {
                std::vector<double> vals;
                for (const Trajectory& tr : trajs)
                    vals.push_back(
                        (s == 0 ? tr.snapshots[k].config.plus : tr.snapshots[k].config.minus).size() /
                        vol);
                double mean = 0.0;
                for (double v : vals) mean += v;
                mean /= vals.size();
                double se = 0.0;
                if (vals.size() > 1) {
                    for (double v : vals) se += (v - mean) * (v - mean);
                    se = std::sqrt(se / (vals.size() - 1) / vals.size());
                }
                stats[s][0] = mean;
                stats[s][1] = se;
            }
            csv += format_double(times[k]) + ',' + format_double(stats[0][0]) + ',' +
                   format_double(stats[0][1]) + ',' + format_double(stats[1][0]) + ',' +
                   format_double(stats[1][1]) + "\n";
        }
        files["intensity.csv"] = csv;
    }

    const double window_begin = 0.5 * spec.schedule.t_end;

    // Fit report: empirical density relaxation rates next to the guaranteed
    // rate (if any); the two are reported side by side, never compared.
    if (times.size() >= 10) {
        std::vector<std::pair<std::string, std::string>> rec;
        const RegimeReport fr =
            check_fokker_planck_conditions(spec.potentials, spec.weight, spec.domain.dimension);
        rec.emplace_back("a_alpha", format_double(fr.a_alpha));
        rec.emplace_back("lambda_0_guarantee",
                         fr.a_alpha < 1.0 ? format_double(1.0 - fr.a_alpha) : "none");
        const double vol = spec.domain.volume();
        for (int sp = 0; sp < 2; ++sp) {
            const Species s = sp == 0 ? Species::plus : Species::minus;
            const std::string tag = sp == 0 ? "plus" : "minus";
            std::vector<std::pair<double, double>> series;
            double target = 0.0;
            long long target_count = 0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                double mean = 0.0;
                for (const Trajectory& tr : trajs)
                    mean += tr.snapshots[k].config.points(s).size() / vol;
                mean /= trajs.size();
                if (times[k] <= 0.5 * spec.schedule.t_end) series.push_back({times[k], mean});
                if (times[k] >= window_begin) {
                    target += mean;
                    ++target_count;
                }
            }
            if (series.size() < 5 || target_count == 0) continue;
            target /= static_cast<double>(target_count);
            const DecayFit fit = decay_fit(series, target);
            rec.emplace_back("fit_" + tag + "_target", format_double(target));
            if (fit.noise_floor) {
                rec.emplace_back("fit_" + tag + "_noise_floor", "yes");
            } else {
                rec.emplace_back("fit_" + tag + "_rate", format_double(fit.rate));
                rec.emplace_back("fit_" + tag + "_amplitude", format_double(fit.amplitude));
                rec.emplace_back("fit_" + tag + "_residual", format_double(fit.residual));
            }
        }
        files["fit_report.txt"] = format_records(rec);
    }

    // Summary over the second half of the schedule (per-replica batches merged).
    std::vector<std::pair<std::string, std::string>> summary;
    EventCounters totals;
    for (const Trajectory& tr : trajs) {
        const EventCounters& c = tr.counters;
        for (int s = 0; s < 2; ++s) {
            totals.births[s] += c.births[s];
            totals.deaths[s] += c.deaths[s];
            totals.mutations[s] += c.mutations[s];
            totals.rejected_births[s] += c.rejected_births[s];
            totals.rejected_mutations[s] += c.rejected_mutations[s];
            totals.proposed_births[s] += c.proposed_births[s];
        }
        totals.proposed_deaths += c.proposed_deaths;
        totals.proposed_mutations += c.proposed_mutations;
    }
    summary.emplace_back("replicas", std::to_string(replicas));
    summary.emplace_back("events_accepted", std::to_string(totals.accepted()));
    summary.emplace_back("events_rejected", std::to_string(totals.rejected()));
    for (int s = 0; s < 2; ++s) {
        const char* sp = s == 0 ? "plus" : "minus";
        summary.emplace_back(std::string("births_") + sp, std::to_string(totals.births[s]));
        summary.emplace_back(std::string("deaths_") + sp, std::to_string(totals.deaths[s]));
        summary.emplace_back(std::string("mutations_from_") + sp, std::to_string(totals.mutations[s]));
    }
    if (times.size() >= 4) {
        for (int s = 0; s < 2; ++s) {
            BatchStats merged;
            for (const Trajectory& tr : trajs) {
                std::vector<double> vals;
                for (const Snapshot& snap : tr.snapshots)
                    if (snap.time >= window_begin)
                        vals.push_back(snap.config.points(s == 0 ? Species::plus : Species::minus).size() /
                                       spec.domain.volume());
                merged = BatchStats::merge(merged, batch_series(vals, spec.estimators.batch_count));
            }
            const char* sp = s == 0 ? "plus" : "minus";
            summary.emplace_back(std::string("mean_density_") + sp, format_double(merged.mean()));
            summary.emplace_back(std::string("mean_density_") + sp + "_se",
                                 format_double(merged.std_error()));
        }
    }
    files["summary.txt"] = format_records(summary);

    if (spec.estimators.pair_bins > 0 && !times.empty()) {
        const std::vector<double> edges = default_pair_bins(spec);
        std::vector<Snapshot> pooled;
        for (const Trajectory& tr : trajs)
            for (const Snapshot& snap : tr.snapshots)
                if (snap.time >= window_begin) pooled.push_back(snap);
        std::string csv = "pair,r_lo,r_hi,value,se\n";
        for (SpeciesPair pair :
             {SpeciesPair::plus_plus, SpeciesPair::minus_minus, SpeciesPair::plus_minus}) {
            const PairCorrelationEstimate est =
                pair_correlation(pooled, pair, edges, spec.domain, spec.estimators.batch_count);
            for (std::size_t b = 0; b + 1 < est.bin_edges.size(); ++b)
                csv += std::string(species_pair_name(pair)) + ',' + format_double(est.bin_edges[b]) +
                       ',' + format_double(est.bin_edges[b + 1]) + ',' + format_double(est.value[b]) +
                       ',' + format_double(est.std_error[b]) + "\n";
        }
        files["pair_correlation.csv"] = csv;
    }
}

// ----------------------------------------------------------------- kinetics

void run_kinetics(const RunSpec& spec, std::map<std::string, std::string>& files) {
    const int dim = spec.domain.dimension;
    const KineticParams kp = KineticParams::from_potentials(spec.potentials, dim);
    const std::vector<double> times = linspace_times(spec.kinetics.t_end, spec.kinetics.output_count);
    IntegrateOptions opt;
    opt.dt_init = spec.kinetics.dt_init;
    opt.tol = spec.kinetics.tol;
    opt.ceiling = spec.kinetics.ceiling;

    OdeSolution diag;
    if (spec.kinetics.grid_cells == 0) {
        const auto traj =
            integrate_homogeneous(spec.kinetics.rho0, kp, spec.kinetics.t_end, times, opt, &diag);
        std::string csv = "time,rho_plus,rho_minus\n";
        for (const auto& pt : traj)
            csv += format_double(pt.time) + ',' + format_double(pt.rho[0]) + ',' +
                   format_double(pt.rho[1]) + "\n";
        files["trajectory.csv"] = csv;
    } else {
        const PeriodicGrid grid =
            PeriodicGrid::make(spec.domain, spec.kinetics.grid_cells,
                               dim == 2 ? spec.kinetics.grid_cells : 1);
        const FieldParams fp = FieldParams::from_potentials(spec.potentials, grid);
        const ArrayXd rp0 = ArrayXd::Constant(grid.size(), spec.kinetics.rho0[0]);
        const ArrayXd rm0 = ArrayXd::Constant(grid.size(), spec.kinetics.rho0[1]);
        const auto traj = integrate_field(rp0, rm0, fp, spec.kinetics.t_end, times, opt, &diag);

        std::string mean_csv = "time,rho_plus,rho_minus\n";
        std::string field_csv = dim == 2 ? "time,cell,x,y,rho_plus,rho_minus\n"
                                         : "time,cell,x,rho_plus,rho_minus\n";
        for (const auto& pt : traj) {
            mean_csv += format_double(pt.time) + ',' + format_double(pt.rho_plus.mean()) + ',' +
                        format_double(pt.rho_minus.mean()) + "\n";
            for (int c = 0; c < grid.size(); ++c) {
                const Vec x = grid.center(c);
                field_csv += format_double(pt.time) + ',' + std::to_string(c) + ',' +
                             format_double(x[0]) +
                             (dim == 2 ? "," + format_double(x[1]) : std::string{}) + ',' +
                             format_double(pt.rho_plus[c]) + ',' + format_double(pt.rho_minus[c]) +
                             "\n";
            }
        }
        files["trajectory.csv"] = mean_csv;
        files["trajectory_field.csv"] = field_csv;
    }

    std::vector<std::pair<std::string, std::string>> rec;
    rec.emplace_back("steps_accepted", std::to_string(diag.steps_accepted));
    rec.emplace_back("steps_rejected", std::to_string(diag.steps_rejected));
    rec.emplace_back("max_density", format_double(diag.max_component));
    if (std::isfinite(spec.kinetics.ceiling)) {
        rec.emplace_back("ceiling", format_double(spec.kinetics.ceiling));
        rec.emplace_back("ceiling_violated", diag.ceiling_violated ? "yes" : "no");
    }
    files["kinetics_report.txt"] = format_records(rec);
}

// --------------------------------------------------------------- stationary

void run_stationary(const RunSpec& spec, std::map<std::string, std::string>& files) {
    const KineticParams kp = KineticParams::from_potentials(spec.potentials, spec.domain.dimension);
    const StationaryResult st = stationary(kp, spec.stationary.init, spec.stationary.damping,
                                           spec.stationary.tol, spec.stationary.max_iter);
    const StabilityReport rep =
        jacobian_homogeneous(st.rho, kp, std::max(1e-6, 10.0 * spec.stationary.tol));

    std::vector<std::pair<std::string, std::string>> rec;
    rec.emplace_back("rho_plus", format_double(st.rho[0]));
    rec.emplace_back("rho_minus", format_double(st.rho[1]));
    rec.emplace_back("iterations", std::to_string(st.iterations));
    rec.emplace_back("residual", format_double(st.residual));
    rec.emplace_back("jacobian_00", format_double(rep.jacobian(0, 0)));
    rec.emplace_back("jacobian_01", format_double(rep.jacobian(0, 1)));
    rec.emplace_back("jacobian_10", format_double(rep.jacobian(1, 0)));
    rec.emplace_back("jacobian_11", format_double(rep.jacobian(1, 1)));
    for (int i = 0; i < 2; ++i) {
        rec.emplace_back("eigenvalue_" + std::to_string(i) + "_re",
                         format_double(rep.eigenvalues[i].real()));
        rec.emplace_back("eigenvalue_" + std::to_string(i) + "_im",
                         format_double(rep.eigenvalues[i].imag()));
    }
    rec.emplace_back("classification", stability_name(rep.classification));
    files["stationary.txt"] = format_records(rec);
}

// --------------------------------------------------------------- mesoscopic

}  // namespace

SweepResult mesoscopic_sweep(const RunSpec& spec, int parallelism) {
    const auto errors = validate_spec(spec);
    if (!errors.empty()) throw std::invalid_argument("mesoscopic_sweep: " + errors.front().message);
    if (spec.estimators.pair_bins < 1)
        throw std::invalid_argument("mesoscopic_sweep: estimators.pair_bins must be >= 1");
    if (spec.init.kind != InitSpec::Kind::poisson)
        throw std::invalid_argument("mesoscopic_sweep: needs Poisson initial data");

    SweepResult result;
    result.times = spec.schedule.snapshot_times;

    // Kinetic reference for the unscaled parameters from the base intensities.
    const KineticParams kp = KineticParams::from_potentials(spec.potentials, spec.domain.dimension);
    const Eigen::Vector2d rho0(spec.init.intensity_plus, spec.init.intensity_minus);
    IntegrateOptions opt;
    opt.tol = 1e-10;
    for (const auto& pt :
         integrate_homogeneous(rho0, kp, spec.schedule.t_end, result.times, opt))
        result.kinetic.push_back(pt.rho);

    const std::vector<double> edges = default_pair_bins(spec);
    const int replicas = spec.schedule.replicas;
    const double vol = spec.domain.volume();

    for (std::size_t si = 0; si < spec.scales.size(); ++si) {
        const int n = spec.scales[si];
        const PotentialSet scaled = vlasov_rescale(spec.potentials, n);
        std::vector<std::vector<Snapshot>> replica_snaps(replicas);
        std::vector<double> sup_errors(replicas, 0.0);

        parallel_for(replicas, parallelism, [&](int r) {
            const std::uint64_t salt = 1000 * (static_cast<std::uint64_t>(si) + 1);
            const std::uint64_t init_seed = derive_seed(spec.seed, salt + 2 * r);
            const std::uint64_t run_seed = derive_seed(spec.seed, salt + 2 * r + 1);
            const TwoTypeConfiguration init =
                initial_configuration(spec, init_seed, static_cast<double>(n));
            Trajectory traj = run(spec.domain, init, scaled, spec.schedule.t_end,
                                  spec.schedule.snapshot_times, run_seed, {false});
            double sup = 0.0;
            for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
                const double rp = traj.snapshots[k].config.plus.size() / (n * vol);
                const double rm = traj.snapshots[k].config.minus.size() / (n * vol);
                sup = std::max({sup, std::abs(rp - result.kinetic[k][0]),
                                std::abs(rm - result.kinetic[k][1])});
            }
            sup_errors[r] = sup;
            replica_snaps[r] = std::move(traj.snapshots);
        });

        SweepRow row;
        row.scale = n;
        double mean = 0.0;
        for (double e : sup_errors) mean += e;
        mean /= replicas;
        double var = 0.0;
        for (double e : sup_errors) var += (e - mean) * (e - mean);
        row.density_error = mean;
        row.density_error_se = replicas > 1 ? std::sqrt(var / (replicas - 1) / replicas) : 0.0;

        // Factorization gap per replica group (4 groups), then mean +- SE.
        const int groups = 4;
        std::vector<double> group_gaps;
        for (int g = 0; g < groups; ++g) {
            const int lo = replicas * g / groups;
            const int hi = replicas * (g + 1) / groups;
            if (hi <= lo) continue;
            const std::vector<std::vector<Snapshot>> slice(replica_snaps.begin() + lo,
                                                           replica_snaps.begin() + hi);
            group_gaps.push_back(factorization_gap(slice, n, result.times, result.kinetic, edges,
                                                   spec.domain));
        }
        double gmean = 0.0;
        for (double g : group_gaps) gmean += g;
        gmean /= group_gaps.size();
        double gvar = 0.0;
        for (double g : group_gaps) gvar += (g - gmean) * (g - gmean);
        row.gap = gmean;
        row.gap_se = group_gaps.size() > 1
                         ? std::sqrt(gvar / (group_gaps.size() - 1) / group_gaps.size())
                         : 0.0;
        result.rows.push_back(row);
    }
    return result;
}

namespace {

void run_mesoscopic(const RunSpec& spec, int parallelism, std::map<std::string, std::string>& files) {
    // The admissibility check is advisory here: warn on FAIL, proceed.
    const RegimeReport vl =
        check_vlasov_conditions(spec.potentials, spec.weight, spec.domain.dimension);
    files["regime_vlasov.txt"] = format_records(regime_report_records(vl));
    if (!vl.pass)
        std::cerr << "warning: admissibility conditions FAIL (min margin "
                  << format_double(vl.min_margin()) << "); proceeding with the sweep\n";

    const SweepResult sweep = mesoscopic_sweep(spec, parallelism);

    std::string ref = "time,rho_plus,rho_minus\n";
    for (std::size_t k = 0; k < sweep.times.size(); ++k)
        ref += format_double(sweep.times[k]) + ',' + format_double(sweep.kinetic[k][0]) + ',' +
               format_double(sweep.kinetic[k][1]) + "\n";
    files["kinetic_reference.csv"] = ref;

    std::string csv = "scale,density_error,density_error_se,factorization_gap,factorization_gap_se\n";
    for (const SweepRow& row : sweep.rows)
        csv += std::to_string(row.scale) + ',' + format_double(row.density_error) + ',' +
               format_double(row.density_error_se) + ',' + format_double(row.gap) + ',' +
               format_double(row.gap_se) + "\n";
    files["sweep.csv"] = csv;
}

}  // namespace

std::map<std::string, std::string> run_experiment_files(const RunSpec& spec, int parallelism) {
    const auto errors = validate_spec(spec);
    if (!errors.empty()) {
        std::string msg = "invalid spec:";
        for (const ConfigError& e : errors) msg += "\n  " + e.message;
        throw std::invalid_argument(msg);
    }
    std::map<std::string, std::string> files;
    switch (spec.kind) {
        case ExperimentKind::check: run_check(spec, files); break;
        case ExperimentKind::simulate: run_simulate(spec, parallelism, files); break;
        case ExperimentKind::kinetics: run_kinetics(spec, files); break;
        case ExperimentKind::stationary: run_stationary(spec, files); break;
        case ExperimentKind::mesoscopic: run_mesoscopic(spec, parallelism, files); break;
    }
    return files;
}

ExperimentResult run_experiment(const RunSpec& spec, const fs::path& out_dir, int parallelism) {
    const std::map<std::string, std::string> files = run_experiment_files(spec, parallelism);

    Manifest manifest;
    manifest.code_version = kCodeVersion;
    manifest.format_version = kFormatVersion;
    manifest.created = timestamp_utc();
    manifest.seed = spec.seed;
    manifest.config_text = serialize_config(spec);
    for (const auto& [name, content] : files)
        manifest.files.push_back({name, digest_hex(content), content.size()});

    // Stage everything in a scratch dir next to the target, then swap it in.
    std::random_device rd;
    const fs::path parent = out_dir.parent_path().empty() ? "." : out_dir.parent_path();
    fs::create_directories(parent);
    const fs::path tmp =
        parent / (out_dir.filename().string() + ".tmp-" + std::to_string(rd() % 1000000));
    fs::create_directories(tmp);
    try {
        for (const auto& [name, content] : files) write_file(tmp / name, content);
        write_file(tmp / "manifest.txt", format_manifest(manifest));
        if (fs::exists(out_dir)) fs::remove_all(out_dir);
        fs::rename(tmp, out_dir);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(tmp, ec);
        throw;
    }

    ExperimentResult result;
    result.directory = out_dir;
    result.manifest = std::move(manifest);
    return result;
}

}  // namespace wrg
