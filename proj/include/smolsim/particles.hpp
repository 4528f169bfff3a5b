#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "smolsim/geometry.hpp"
#include "smolsim/grid_field.hpp"
#include "smolsim/kernels.hpp"
#include "smolsim/material.hpp"

namespace smolsim {

struct StepConfig {
    double dt = 1e-3;
    double max_event_prob = 0.1;  // cap on per-particle per-step event probability
    std::uint64_t seed = 0;
};

// Microscopic state. The atom functional sum_r m_r N_r is an exact integer
// invariant; `atoms` records its initial value and every step checks it.
struct ParticleState {
    PeriodicBox box;
    std::vector<std::vector<double>> pos;  // [species][i * dim + c]
    double time = 0.0;
    std::int64_t atoms = 0;
    std::mt19937_64 rng;

    // diagnostics
    std::vector<std::vector<std::int64_t>> events_fired;  // [r][q]
    std::int64_t rate_evals = 0;
    std::int64_t rate_clips = 0;
    std::int64_t bound_violations = 0;  // count-bound failures, must stay 0

    int species_count() const { return static_cast<int>(pos.size()); }
    std::int64_t count(int r) const {
        return static_cast<std::int64_t>(pos[r].size()) / box.dim;
    }
    std::int64_t total_particles() const {
        std::int64_t n = 0;
        for (int r = 0; r < species_count(); ++r) n += count(r);
        return n;
    }
    std::int64_t atom_total(const SpeciesTable& table) const {
        std::int64_t n = 0;
        for (int r = 0; r < species_count(); ++r) n += table.masses[r] * count(r);
        return n;
    }
    double clip_fraction() const {
        return rate_evals == 0 ? 0.0
                               : static_cast<double>(rate_clips) / rate_evals;
    }
    PointSet points(int r) const {
        return PointSet{pos[r].data(), static_cast<std::size_t>(count(r))};
    }
};

// Draws N_r(0) = round(N * integral(s0_r)) particles per species i.i.d. from
// s0_r (inverse CDF in d=1, rejection sampling on the grid otherwise) after
// rescaling the initial data to unit total mass. The realized atom count
// sum_r m_r N_r(0) becomes state.atoms. Throws on all-zero initial data.
ParticleState sample_initial_state(const SpeciesTable& table, const GridField& s0,
                                   std::int64_t atoms, std::uint64_t seed);

// Drift-diffusion Euler-Maruyama update; no interaction.
void sde_step(ParticleState& state, const SpeciesTable& table, double dt);

// Effective-field rate of particle k (species r) against the species-q field:
// min{C_a, a_hat_rq(X_k,t) * (1/N) * sum_{l != k} W(X_k - X_l)}.
double interaction_rate(const ParticleState& state, const SpeciesTable& table,
                        const GaussKernel& w, int r, std::size_t k, int q);

struct RateStats {
    std::int64_t evals = 0;
    std::int64_t clips = 0;
};

// Batch rates for all (particle, q) channels against the frozen state.
// Output layout: rates[(offset_r + i) * R + q] where offset_r is the global
// particle offset of species r. `active` masks species whose rates are
// needed; inactive species get zeros and are not counted in stats.
void compute_all_rates(const ParticleState& state, const SpeciesTable& table,
                       const GaussKernel& w, const std::vector<char>& active,
                       std::vector<double>& rates, RateStats& stats);

// Serial O(N^2) reference for compute_all_rates; kept for tests/benchmarks.
void compute_all_rates_ref(const ParticleState& state, const SpeciesTable& table,
                           const GaussKernel& w, const std::vector<char>& active,
                           std::vector<double>& rates, RateStats& stats);

// One frozen-field thinning step: rates from the start-of-step configuration,
// at most one event per particle, channel q picked with probability
// (1 - exp(-sum_q a_q dt)) * a_q / sum_q a_q, removals and insertions applied
// after all draws. Channels whose fragmentation row maps a particle onto
// itself leave the state unchanged and are skipped.
void interaction_step(ParticleState& state, const SpeciesTable& table,
                      const GaussKernel& w, double dt);

// Alternates sde_step and interaction_step on the dt grid; asserts the atom
// and count-bound invariants every step; returns deep-copy snapshots at the
// requested times (plus t = 0 if requested). Deterministic given the seed.
std::vector<ParticleState> run(ParticleState state, const SpeciesTable& table,
                               const GaussKernel& w, const StepConfig& cfg,
                               double t_end, const std::vector<double>& snapshot_times);

}  // namespace smolsim
