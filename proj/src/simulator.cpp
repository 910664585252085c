#include "wrg/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace wrg {

namespace {

double pick_cell_size(const Domain& dom, const PotentialSet& pset) {
    const double rc = max_cutoff(pset);
    // Grid capped at 64 cells per axis; with no interaction any partition works.
    const double floor_size = dom.min_side() / 64.0;
    return std::max(rc, floor_size);
}

/// Relative energy against one species' index with one particle excluded.
double energy_excluding(const PotentialSpec& g, const Vec& x, const CellIndex& index,
                        const Domain& dom, int skip_id) {
    if (g.is_zero()) return 0.0;
    const double rc2 = g.cutoff * g.cutoff;
    double e = 0.0;
    index.for_each_candidate(x, [&](int id, const Vec& y) {
        if (id == skip_id) return;
        const double r2 = min_image_distance_sq(x, y, dom);
        if (r2 <= rc2) e += evaluate_potential(g, std::sqrt(r2));
    });
    return e;
}

Vec random_position(const Domain& dom, Rng& rng) {
    Vec p = Vec::Zero();
    for (int i = 0; i < dom.dimension; ++i) p[i] = rng.uniform01() * dom.side[i];
    return p;
}

/// Applies or rejects a proposal; draws the acceptance variate when the
/// acceptance probability is below one.
EventRecord apply_proposal(SimState& state, const PotentialSet& pset, const Proposal& p) {
    EventRecord rec;
    rec.time = state.time;
    rec.position = p.position;
    const int sp = static_cast<int>(p.species);

    switch (p.channel) {
        case Channel::death:
            ++state.counters.proposed_deaths;
            state.species(p.species).remove(p.particle);
            rec.kind = p.species == Species::plus ? EventKind::death_plus : EventKind::death_minus;
            ++state.counters.deaths[sp];
            break;

        case Channel::mutation: {
            ++state.counters.proposed_mutations;
            const double accept =
                mutation_acceptance(p.species, p.particle, state, pset) / pset.mutation_multiplier;
            if (accept >= 1.0 || state.rng.uniform01() < accept) {
                const Vec x = state.species(p.species).remove(p.particle);
                state.species(other(p.species)).insert(x);
                rec.kind = p.species == Species::plus ? EventKind::mutation_plus_minus
                                                      : EventKind::mutation_minus_plus;
                ++state.counters.mutations[sp];
            } else {
                rec.kind = EventKind::rejected;
                ++state.counters.rejected_mutations[sp];
            }
            break;
        }

        case Channel::birth_plus:
        case Channel::birth_minus: {
            ++state.counters.proposed_births[sp];
            const double accept = birth_acceptance(p.position, p.species, state, pset);
            if (accept >= 1.0 || state.rng.uniform01() < accept) {
                state.species(p.species).insert(p.position);
                rec.kind = p.species == Species::plus ? EventKind::birth_plus : EventKind::birth_minus;
                ++state.counters.births[sp];
            } else {
                rec.kind = EventKind::rejected;
                ++state.counters.rejected_births[sp];
            }
            break;
        }
    }
    rec.n_plus_after = state.count(Species::plus);
    rec.n_minus_after = state.count(Species::minus);
    return rec;
}

}  // namespace

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::birth_plus: return "birth+";
        case EventKind::birth_minus: return "birth-";
        case EventKind::death_plus: return "death+";
        case EventKind::death_minus: return "death-";
        case EventKind::mutation_plus_minus: return "mut+-";
        case EventKind::mutation_minus_plus: return "mut-+";
        case EventKind::rejected: return "rej";
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(const std::string& name) {
    for (EventKind k : {EventKind::birth_plus, EventKind::birth_minus, EventKind::death_plus,
                        EventKind::death_minus, EventKind::mutation_plus_minus,
                        EventKind::mutation_minus_plus, EventKind::rejected})
        if (name == event_kind_name(k)) return k;
    return std::nullopt;
}

SimState SimState::create(const Domain& dom, const TwoTypeConfiguration& initial,
                          const PotentialSet& pset, std::uint64_t seed) {
    validate_potential_set(pset);
    const double rc = max_cutoff(pset);
    if (rc > 0.5 * dom.min_side())
        throw std::invalid_argument("SimState: potential cutoff exceeds half the smallest side");
    validate_configuration(initial, dom);

    SimState state(dom, seed);
    const double cell = pick_cell_size(dom, pset);
    state.stores[0] = SpeciesStore(dom, cell);
    state.stores[1] = SpeciesStore(dom, cell);
    for (const Vec& x : initial.plus) state.species(Species::plus).insert(x);
    for (const Vec& x : initial.minus) state.species(Species::minus).insert(x);
    return state;
}

TwoTypeConfiguration SimState::configuration() const {
    return {species(Species::plus).positions(), species(Species::minus).positions()};
}

double total_bound_rate(const SimState& state, const PotentialSet& pset) {
    const double n = static_cast<double>(state.total_count());
    const double births = (pset.z_plus + pset.z_minus) * state.domain.volume();
    return n + births + pset.mutation_multiplier * n;
}

double birth_acceptance(const Vec& x, Species s, const SimState& state, const PotentialSet& pset) {
    const double e_same = relative_energy(pset.birth_same(s), x, state.species(s).index(), state.domain);
    const double e_cross =
        relative_energy(pset.birth_cross(s), x, state.species(other(s)).index(), state.domain);
    return std::exp(-e_same - e_cross);
}

double mutation_acceptance(Species s, int particle, const SimState& state, const PotentialSet& pset) {
    const SpeciesStore& own = state.species(s);
    if (particle < 0 || particle >= own.size())
        throw std::logic_error("mutation_acceptance: particle not present");
    const Vec& x = own.position(particle);
    const double e_same = energy_excluding(pset.mutation_same(s), x, own.index(), state.domain, particle);
    const double e_cross =
        relative_energy(pset.mutation_cross(s), x, state.species(other(s)).index(), state.domain);
    return pset.mutation_multiplier * std::exp(-e_same - e_cross);
}

Proposal propose_channel(SimState& state, const PotentialSet& pset) {
    const int n_plus = state.count(Species::plus);
    const int n_total = state.total_count();
    const double n = static_cast<double>(n_total);
    const double m = pset.mutation_multiplier;
    const double birth_plus_mass = pset.z_plus * state.domain.volume();
    const double bound = total_bound_rate(state, pset);
    if (!(bound > 0.0)) throw std::logic_error("propose_channel: bound rate is zero");

    const double u = state.rng.uniform01() * bound;
    Proposal p{};
    if (u < n) {
        const int id = std::min(static_cast<int>(u), n_total - 1);
        p.channel = Channel::death;
        p.species = id < n_plus ? Species::plus : Species::minus;
        p.particle = id < n_plus ? id : id - n_plus;
        p.position = state.species(p.species).position(p.particle);
    } else if (u < n + m * n) {
        const int id = std::min(static_cast<int>((u - n) / m), n_total - 1);
        p.channel = Channel::mutation;
        p.species = id < n_plus ? Species::plus : Species::minus;
        p.particle = id < n_plus ? id : id - n_plus;
        p.position = state.species(p.species).position(p.particle);
    } else {
        const double v = u - n * (1.0 + m);
        p.channel = v < birth_plus_mass ? Channel::birth_plus : Channel::birth_minus;
        p.species = v < birth_plus_mass ? Species::plus : Species::minus;
        p.position = random_position(state.domain, state.rng);
    }
    return p;
}

EventRecord step(SimState& state, const PotentialSet& pset) {
    const double bound = total_bound_rate(state, pset);
    if (!(bound > 0.0)) throw std::logic_error("step: bound rate is zero");
    state.time += state.rng.exponential(bound);
    return apply_proposal(state, pset, propose_channel(state, pset));
}

Trajectory run(const Domain& dom, const TwoTypeConfiguration& initial, const PotentialSet& pset,
               double t_end, std::span<const double> snapshot_times, std::uint64_t seed,
               const RunOptions& options) {
    if (!(t_end >= 0.0)) throw std::invalid_argument("run: t_end must be >= 0");
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        if (snapshot_times[i] < 0.0 || snapshot_times[i] > t_end)
            throw std::invalid_argument("run: snapshot times must lie in [0, t_end]");
        if (i > 0 && snapshot_times[i] < snapshot_times[i - 1])
            throw std::invalid_argument("run: snapshot times must be sorted");
    }

    SimState state = SimState::create(dom, initial, pset, seed);
    Trajectory traj;
    traj.snapshots.reserve(snapshot_times.size());

    std::size_t next_snap = 0;
    while (true) {
        const double bound = total_bound_rate(state, pset);
        if (!(bound > 0.0)) break;  // absorbing: empty configuration, zero activities
        const double t_next = state.time + state.rng.exponential(bound);
        // Snapshot times strictly before the next event see the current state.
        while (next_snap < snapshot_times.size() && snapshot_times[next_snap] < t_next) {
            traj.snapshots.push_back({snapshot_times[next_snap], state.configuration()});
            ++next_snap;
        }
        if (t_next > t_end) break;
        state.time = t_next;
        const EventRecord rec = apply_proposal(state, pset, propose_channel(state, pset));
        if (options.record_events) traj.events.push_back(rec);
    }

    while (next_snap < snapshot_times.size()) {
        traj.snapshots.push_back({snapshot_times[next_snap], state.configuration()});
        ++next_snap;
    }
    traj.counters = state.counters;
    traj.final_time = t_end;
    traj.final_config = state.configuration();
    return traj;
}

TwoTypeConfiguration poisson_configuration(const Domain& dom, double intensity_plus,
                                           double intensity_minus, Rng& rng) {
    if (intensity_plus < 0.0 || intensity_minus < 0.0)
        throw std::invalid_argument("poisson_configuration: intensities must be >= 0");
    TwoTypeConfiguration cfg;
    const double vol = dom.volume();
    const int n_plus = rng.poisson(intensity_plus * vol);
    const int n_minus = rng.poisson(intensity_minus * vol);
    cfg.plus.reserve(n_plus);
    cfg.minus.reserve(n_minus);
    for (int i = 0; i < n_plus; ++i) cfg.plus.push_back(random_position(dom, rng));
    for (int i = 0; i < n_minus; ++i) cfg.minus.push_back(random_position(dom, rng));
    return cfg;
}

}  // namespace wrg
