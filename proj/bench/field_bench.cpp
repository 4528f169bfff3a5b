// Timing comparison: batched effective-field rates (sorted-window / cell-list,
// OpenMP) against the serial O(N^2) reference, plus single-query convolution.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "smolsim/particles.hpp"

using namespace smolsim;
using clk = std::chrono::steady_clock;

namespace {

SpeciesTable bench_table() {
    SpeciesTable t;
    t.masses = {1, 2};
    t.sigma = {1.0, 1.0};
    t.velocity.resize(2);
    t.rate_spec = CollisionRateSpec::constant(2, 1.0);
    t.frag = FragTable::zeros(2);
    for (int q = 0; q < 2; ++q) {
        t.frag.e[0][q][0] = 1;
        t.frag.e[1][q][0] = 2;
    }
    t.rate_cutoff = 5.0;
    validate_species_table(t);
    return t;
}

ParticleState random_state(int dim, std::int64_t n, double L, std::uint64_t seed) {
    ParticleState st;
    st.box = PeriodicBox{dim, L};
    st.pos.resize(2);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, L);
    for (int r = 0; r < 2; ++r) {
        st.pos[r].resize(static_cast<std::size_t>(n / 2) * dim);
        for (double& x : st.pos[r]) x = unif(rng);
    }
    st.atoms = st.count(0) + 2 * st.count(1);
    st.events_fired.assign(2, std::vector<std::int64_t>(2, 0));
    return st;
}

double time_once(const ParticleState& st, const SpeciesTable& t,
                 const GaussKernel& w, bool reference, double& checksum) {
    std::vector<char> active{1, 1};
    std::vector<double> rates;
    RateStats stats;
    auto t0 = clk::now();
    if (reference)
        compute_all_rates_ref(st, t, w, active, rates, stats);
    else
        compute_all_rates(st, t, w, active, rates, stats);
    auto t1 = clk::now();
    checksum = 0.0;
    for (double r : rates) checksum += r;
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
    SpeciesTable table = bench_table();
    const double L = 10.0;

    std::printf("%-4s %-8s %-6s %12s %12s %8s %10s\n", "dim", "N", "alpha",
                "batched_s", "reference_s", "speedup", "rel_diff");
    for (int dim : {1, 2}) {
        for (std::int64_t n : {2000, 8000, 32000}) {
            if (dim == 2 && n > 8000) continue;  // reference cost O(N^2)
            double alpha = std::pow(static_cast<double>(n), 0.25 / dim);
            GaussKernel w{dim, alpha};
            ParticleState st = random_state(dim, n, L, 1234 + n);
            double sum_fast = 0.0, sum_ref = 0.0;
            double tf = time_once(st, table, w, false, sum_fast);
            double tr = time_once(st, table, w, true, sum_ref);
            double rel = std::abs(sum_fast - sum_ref) /
                         std::max(std::abs(sum_ref), 1e-300);
            std::printf("%-4d %-8lld %-6.2f %12.4f %12.4f %7.1fx %10.2e\n", dim,
                        static_cast<long long>(n), alpha, tf, tr, tr / tf, rel);
        }
    }
    return 0;
}
