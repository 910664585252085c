#pragma once

#include "wrg/configuration.hpp"
#include "wrg/energy.hpp"
#include "wrg/rng.hpp"

#include <optional>
#include <span>
#include <vector>

namespace wrg {

enum class EventKind {
    birth_plus,
    birth_minus,
    death_plus,
    death_minus,
    mutation_plus_minus,
    mutation_minus_plus,
    rejected,
};

const char* event_kind_name(EventKind k);
std::optional<EventKind> parse_event_kind(const std::string& name);

struct EventRecord {
    double time = 0.0;
    EventKind kind = EventKind::rejected;
    Vec position = Vec::Zero();
    int n_plus_after = 0;
    int n_minus_after = 0;
};

/// Bound-rate channels of the thinning scheme. Deaths carry bound weight 1
/// per particle, mutations weight m per particle, births weight z^s * |domain|
/// per species.
enum class Channel { death, mutation, birth_plus, birth_minus };

struct Proposal {
    Channel channel;
    Species species;         // species acted on (source species for mutations)
    int particle = -1;       // id for death/mutation proposals
    Vec position = Vec::Zero();
};

struct EventCounters {
    long long births[2] = {0, 0};
    long long deaths[2] = {0, 0};
    long long mutations[2] = {0, 0};  // indexed by source species
    long long rejected_births[2] = {0, 0};
    long long rejected_mutations[2] = {0, 0};
    long long proposed_deaths = 0;
    long long proposed_mutations = 0;
    long long proposed_births[2] = {0, 0};

    long long accepted() const {
        return births[0] + births[1] + deaths[0] + deaths[1] + mutations[0] + mutations[1];
    }
    long long rejected() const {
        return rejected_births[0] + rejected_births[1] + rejected_mutations[0] + rejected_mutations[1];
    }
    long long total() const { return accepted() + rejected(); }
};

/// One species' particle array plus its spatial index; particle ids are the
/// array slots, so removal swap-pops and rekeys the moved particle.
class SpeciesStore {
public:
    SpeciesStore() = default;
    SpeciesStore(const Domain& dom, double cell_size) : index_(dom, cell_size) {}

    int size() const { return static_cast<int>(pos_.size()); }
    const std::vector<Vec>& positions() const { return pos_; }
    const Vec& position(int id) const { return pos_.at(id); }
    const CellIndex& index() const { return index_; }

    void insert(const Vec& p) {
        index_.insert(size(), p);
        pos_.push_back(p);
    }

    Vec remove(int id) {
        const Vec p = pos_.at(id);
        const int last = size() - 1;
        index_.remove(id);
        if (id != last) {
            pos_[id] = pos_[last];
            index_.rekey(last, id);
        }
        pos_.pop_back();
        return p;
    }

private:
    std::vector<Vec> pos_;
    CellIndex index_;
};

struct SimState {
    Domain domain;
    SpeciesStore stores[2];
    double time = 0.0;
    Rng rng;
    EventCounters counters;

    static SimState create(const Domain& dom, const TwoTypeConfiguration& initial,
                           const PotentialSet& pset, std::uint64_t seed);

    SpeciesStore& species(Species s) { return stores[static_cast<int>(s)]; }
    const SpeciesStore& species(Species s) const { return stores[static_cast<int>(s)]; }
    int count(Species s) const { return species(s).size(); }
    int total_count() const { return count(Species::plus) + count(Species::minus); }
    TwoTypeConfiguration configuration() const;

private:
    explicit SimState(const Domain& dom, std::uint64_t seed) : domain(dom), rng(seed) {}
};

/// Upper bound on the total event rate: every acceptance factor exp(-E) is
/// <= 1 because the potentials are non-negative. The bound only changes at
/// accepted events, which is what makes the thinning exact.
double total_bound_rate(const SimState& state, const PotentialSet& pset);

/// exp(-E_same(x, same species) - E_cross(x, other species)), in (0, 1].
double birth_acceptance(const Vec& x, Species s, const SimState& state, const PotentialSet& pset);

/// m * exp(-E_kappa(x, same species minus the particle) - E_tau(x, other
/// species)); the self-exclusion is mandatory.
double mutation_acceptance(Species s, int particle, const SimState& state, const PotentialSet& pset);

/// Draws the next proposal from the bound-rate decomposition (advances the
/// state's rng; does not modify the configuration).
Proposal propose_channel(SimState& state, const PotentialSet& pset);

/// Advances time by an exponential waiting time at the current bound rate,
/// then applies or rejects one proposal. Requires total_bound_rate > 0.
EventRecord step(SimState& state, const PotentialSet& pset);

struct Snapshot {
    double time = 0.0;
    TwoTypeConfiguration config;
};

struct RunOptions {
    bool record_events = true;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    std::vector<EventRecord> events;
    EventCounters counters;
    double final_time = 0.0;
    TwoTypeConfiguration final_config;
};

/// Runs the dynamics to t_end, recording the configuration in force at each
/// snapshot time (the state at the last event time <= t). Deterministic:
/// identical (initial, pset, seed) give bit-identical trajectories.
Trajectory run(const Domain& dom, const TwoTypeConfiguration& initial, const PotentialSet& pset,
               double t_end, std::span<const double> snapshot_times, std::uint64_t seed,
               const RunOptions& options = {});

/// Poisson samples with the given intensities; the canonical initial state.
TwoTypeConfiguration poisson_configuration(const Domain& dom, double intensity_plus,
                                           double intensity_minus, Rng& rng);

}  // namespace wrg
