#include "smolsim/particles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smolsim {

ParticleState sample_initial_state(const SpeciesTable& table, const GridField& s0,
                                   std::int64_t atoms, std::uint64_t seed) {
    const int R = table.species_count();
    if (s0.species_count() != R)
        throw std::invalid_argument("initial data species count mismatch");
    if (atoms <= 0) throw std::invalid_argument("atom count must be positive");

    std::vector<double> integral(R);
    double total_mass = 0.0;
    for (int r = 0; r < R; ++r) {
        integral[r] = s0.integral(r);
        if (integral[r] < 0.0)
            throw std::invalid_argument("initial density must be nonnegative");
        total_mass += table.masses[r] * integral[r];
    }
    if (total_mass <= 0.0)
        throw std::invalid_argument("initial data has zero total mass");

    ParticleState state;
    state.box = s0.box();
    state.pos.resize(R);
    state.rng.seed(seed);
    state.events_fired.assign(R, std::vector<std::int64_t>(R, 0));

    const int d = state.box.dim;
    const double h = s0.spacing();
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (int r = 0; r < R; ++r) {
        auto n_r = static_cast<std::int64_t>(
            std::llround(static_cast<double>(atoms) * integral[r] / total_mass));
        state.pos[r].resize(static_cast<std::size_t>(n_r) * d);
        if (n_r == 0) continue;
        const std::vector<double>& dens = s0.values[r];

        if (d == 1) {
            // inverse CDF over the piecewise-constant density
            std::vector<double> cum(dens.size() + 1, 0.0);
            for (std::size_t j = 0; j < dens.size(); ++j) cum[j + 1] = cum[j] + dens[j];
            const double total = cum.back();
            for (std::int64_t i = 0; i < n_r; ++i) {
                double u = unif(state.rng) * total;
                auto it = std::upper_bound(cum.begin(), cum.end(), u);
                std::size_t j = std::min<std::size_t>(
                    static_cast<std::size_t>(it - cum.begin()) - 1, dens.size() - 1);
                double frac = dens[j] > 0.0 ? (u - cum[j]) / dens[j] : 0.5;
                state.pos[r][i] = state.box.wrap((j + frac) * h);
            }
        } else {
            // rejection sampling against the grid maximum
            double vmax = *std::max_element(dens.begin(), dens.end());
            for (std::int64_t i = 0; i < n_r; ++i) {
                for (;;) {
                    double x[3];
                    int idx[3];
                    for (int c = 0; c < d; ++c) {
                        x[c] = unif(state.rng) * state.box.length;
                        idx[c] = std::min(static_cast<int>(x[c] / h),
                                          s0.nodes_per_axis - 1);
                    }
                    if (unif(state.rng) * vmax <= dens[s0.node_index(idx)]) {
                        for (int c = 0; c < d; ++c)
                            state.pos[r][i * d + c] = state.box.wrap(x[c]);
                        break;
                    }
                }
            }
        }
    }

    state.atoms = state.atom_total(table);
    return state;
}

void sde_step(ParticleState& state, const SpeciesTable& table, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const int d = state.box.dim;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int r = 0; r < state.species_count(); ++r) {
        const double noise = table.sigma[r] * std::sqrt(dt);
        const VelocityField& vel = table.velocity[r];
        const bool drift = vel.kind != VelocityField::Kind::Zero;
        std::vector<double>& xs = state.pos[r];
        const std::int64_t n = state.count(r);
        for (std::int64_t i = 0; i < n; ++i) {
            double* x = xs.data() + i * d;
            if (drift) {
                Vec3 v = vel.eval(x, state.time, state.box);
                for (int c = 0; c < d; ++c) x[c] += v[c] * dt;
            }
            for (int c = 0; c < d; ++c)
                x[c] = state.box.wrap(x[c] + noise * normal(state.rng));
        }
    }
}

double interaction_rate(const ParticleState& state, const SpeciesTable& table,
                        const GaussKernel& w, int r, std::size_t k, int q) {
    PointSet pts = state.points(q);
    const double* xk = state.pos[r].data() + k * state.box.dim;
    CellList cells(pts, state.box, w.cutoff());
    std::ptrdiff_t exclude = (r == q) ? static_cast<std::ptrdiff_t>(k) : -1;
    double field = convolve_empirical(pts, 1.0 / static_cast<double>(state.atoms), w,
                                      state.box, xk, cells, exclude);
    double a_hat = eval_macroscopic_rate(table, r, q, xk, state.time, state.box);
    return std::min(table.rate_cutoff, a_hat * field);
}

void compute_all_rates_ref(const ParticleState& state, const SpeciesTable& table,
                           const GaussKernel& w, const std::vector<char>& active,
                           std::vector<double>& rates, RateStats& stats) {
    const int R = state.species_count();
    const int d = state.box.dim;
    const double weight = 1.0 / static_cast<double>(state.atoms);
    const double rc2 = w.cutoff() * w.cutoff();
    rates.assign(static_cast<std::size_t>(state.total_particles()) * R, 0.0);
    stats = RateStats{};

    std::size_t g = 0;
    for (int r = 0; r < R; ++r) {
        const std::int64_t n_r = state.count(r);
        for (std::int64_t i = 0; i < n_r; ++i, ++g) {
            if (!active[r]) continue;
            const double* xi = state.pos[r].data() + i * d;
            for (int q = 0; q < R; ++q) {
                double sum = 0.0;
                const std::int64_t n_q = state.count(q);
                for (std::int64_t j = 0; j < n_q; ++j) {
                    if (q == r && j == i) continue;
                    double r2 = 0.0;
                    for (int c = 0; c < d; ++c) {
                        double dx = state.box.min_image(xi[c] - state.pos[q][j * d + c]);
                        r2 += dx * dx;
                    }
                    if (r2 <= rc2) sum += w.eval_r2(r2);
                }
                double a_hat =
                    eval_macroscopic_rate(table, r, q, xi, state.time, state.box);
                double rate = a_hat * weight * sum;
                stats.evals++;
                if (rate > table.rate_cutoff) {
                    rate = table.rate_cutoff;
                    stats.clips++;
                }
                rates[g * R + q] = rate;
            }
        }
    }
}

void interaction_step(ParticleState& state, const SpeciesTable& table,
                      const GaussKernel& w, double dt) {
    const int R = state.species_count();
    const int d = state.box.dim;

    // Channels that map a particle onto itself cannot change the state;
    // species where every channel is such an identity need no rates at all.
    std::vector<char> active(R, 0);
    bool any_active = false;
    for (int r = 0; r < R; ++r)
        for (int q = 0; q < R; ++q)
            if (!table.frag.identity_channel(r, q)) {
                active[r] = 1;
                any_active = true;
                break;
            }
    if (!any_active || macroscopic_rate_bound(table, state.box) == 0.0) return;

    std::vector<double> rates;
    RateStats stats;
    compute_all_rates(state, table, w, active, rates, stats);
    state.rate_evals += stats.evals;
    state.rate_clips += stats.clips;

    // thinning draws against the frozen rates
    struct Event {
        int species;
        std::int64_t index;
        int channel;
    };
    std::vector<Event> events;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::int64_t> offset(R, 0);
    for (int r = 1; r < R; ++r) offset[r] = offset[r - 1] + state.count(r - 1);

    for (int r = 0; r < R; ++r) {
        if (!active[r]) continue;
        const std::int64_t n_r = state.count(r);
        for (std::int64_t i = 0; i < n_r; ++i) {
            const double* row = rates.data() + (offset[r] + i) * R;
            double total = 0.0;
            for (int q = 0; q < R; ++q)
                if (!table.frag.identity_channel(r, q)) total += row[q];
            if (total <= 0.0) continue;
            double p = -std::expm1(-total * dt);
            if (unif(state.rng) >= p) continue;
            double pick = unif(state.rng) * total;
            int channel = -1;
            double acc = 0.0;
            for (int q = 0; q < R; ++q) {
                if (table.frag.identity_channel(r, q)) continue;
                acc += row[q];
                if (pick <= acc) {
                    channel = q;
                    break;
                }
            }
            if (channel < 0) {  // guard against rounding at the top end
                for (int q = R - 1; q >= 0; --q)
                    if (!table.frag.identity_channel(r, q)) {
                        channel = q;
                        break;
                    }
            }
            events.push_back(Event{r, i, channel});
        }
    }
    if (events.empty()) return;

    // apply removals and insertions after all draws
    std::vector<std::vector<char>> removed(R);
    for (int r = 0; r < R; ++r) removed[r].assign(state.count(r), 0);
    for (const Event& ev : events) removed[ev.species][ev.index] = 1;

    std::vector<std::vector<double>> next(R);
    for (int r = 0; r < R; ++r) {
        next[r].reserve(state.pos[r].size());
        const std::int64_t n_r = state.count(r);
        for (std::int64_t i = 0; i < n_r; ++i)
            if (!removed[r][i])
                next[r].insert(next[r].end(), state.pos[r].begin() + i * d,
                               state.pos[r].begin() + (i + 1) * d);
    }
    for (const Event& ev : events) {
        const double* x = state.pos[ev.species].data() + ev.index * d;
        const auto& products = table.frag.e[ev.species][ev.channel];
        for (int l = 0; l < R; ++l)
            for (std::int64_t copy = 0; copy < products[l]; ++copy)
                next[l].insert(next[l].end(), x, x + d);
        state.events_fired[ev.species][ev.channel]++;
    }
    state.pos = std::move(next);
}

std::vector<ParticleState> run(ParticleState state, const SpeciesTable& table,
                               const GaussKernel& w, const StepConfig& cfg,
                               double t_end, const std::vector<double>& snapshot_times) {
    const int R = table.species_count();
    if (cfg.dt * R * table.rate_cutoff > cfg.max_event_prob)
        throw std::invalid_argument(
            "dt * R * C_a exceeds the per-step event probability cap");
    for (std::size_t i = 0; i + 1 < snapshot_times.size(); ++i)
        if (snapshot_times[i] > snapshot_times[i + 1])
            throw std::invalid_argument("snapshot times must be sorted");
    if (!snapshot_times.empty() && snapshot_times.back() > t_end + 0.5 * cfg.dt)
        throw std::invalid_argument("snapshot time beyond t_end");

    state.rng.seed(cfg.seed);
    const std::int64_t steps = std::llround(t_end / cfg.dt);
    std::vector<std::int64_t> snap_steps;
    snap_steps.reserve(snapshot_times.size());
    for (double t : snapshot_times)
        snap_steps.push_back(std::min<std::int64_t>(steps, std::llround(t / cfg.dt)));

    std::vector<ParticleState> snapshots;
    std::size_t next_snap = 0;
    auto emit = [&](std::int64_t step) {
        while (next_snap < snap_steps.size() && snap_steps[next_snap] == step) {
            snapshots.push_back(state);
            ++next_snap;
        }
    };
    auto check_invariants = [&]() {
        if (state.atom_total(table) != state.atoms)
            throw std::logic_error("atom conservation violated");
        if (state.total_particles() > state.atoms) {
            ++state.bound_violations;
            throw std::logic_error("particle count bound violated");
        }
    };

    check_invariants();
    emit(0);
    for (std::int64_t step = 0; step < steps; ++step) {
        sde_step(state, table, cfg.dt);
        interaction_step(state, table, w, cfg.dt);
        state.time = (step + 1) * cfg.dt;
        check_invariants();
        emit(step + 1);
    }
    return snapshots;
}

}  // namespace smolsim
