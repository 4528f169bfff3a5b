// Batch interaction-rate evaluation. This translation unit is compiled with
// -ffast-math so the hot exp() loops vectorize; everything here is a plain
// reduction, so the relaxed semantics only reorder sums.
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "smolsim/particles.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace smolsim {

namespace {

// d = 1: all species positions sorted and tripled to [0, 3L); a query at
// x + L sees exactly the minimum-image window [x + L - rc, x + L + rc].
void rates_sorted_1d(const ParticleState& state, const SpeciesTable& table,
                     const GaussKernel& w, const std::vector<char>& active,
                     std::vector<double>& rates, RateStats& stats) {
    const int R = state.species_count();
    const double L = state.box.length;
    const double rc = w.cutoff();
    const double peak = w.peak();
    const double c2 = 0.5 * w.alpha * w.alpha;
    const double weight = 1.0 / static_cast<double>(state.atoms);
    const bool const_rates =
        table.rate_spec.kind == CollisionRateSpec::Kind::ConstantMatrix;

    std::vector<std::vector<double>> tripled(R);
    for (int q = 0; q < R; ++q) {
        const std::int64_t n = state.count(q);
        std::vector<double> sorted(state.pos[q]);
        std::sort(sorted.begin(), sorted.end());
        tripled[q].resize(3 * n);
        for (std::int64_t j = 0; j < n; ++j) {
            tripled[q][j] = sorted[j];
            tripled[q][n + j] = sorted[j] + L;
            tripled[q][2 * n + j] = sorted[j] + 2.0 * L;
        }
    }

    struct Query {
        double x;
        std::int64_t row;  // global particle row
        int species;
    };
    std::vector<Query> queries;
    std::int64_t row0 = 0;
    for (int r = 0; r < R; ++r) {
        const std::int64_t n = state.count(r);
        if (active[r])
            for (std::int64_t i = 0; i < n; ++i)
                queries.push_back(Query{state.pos[r][i], row0 + i, r});
        row0 += n;
    }
    std::sort(queries.begin(), queries.end(),
              [](const Query& a, const Query& b) { return a.x < b.x; });
    const std::int64_t nq = static_cast<std::int64_t>(queries.size());

    std::int64_t clips = 0;
#pragma omp parallel reduction(+ : clips)
    {
#ifdef _OPENMP
        const int nt = omp_get_num_threads();
        const int tid = omp_get_thread_num();
#else
        const int nt = 1, tid = 0;
#endif
        const std::int64_t begin = nq * tid / nt;
        const std::int64_t end = nq * (tid + 1) / nt;
        std::vector<std::size_t> lo(R), hi(R);
        if (begin < end)
            for (int q = 0; q < R; ++q) {
                const auto& ys = tripled[q];
                double xc = queries[begin].x + L;
                lo[q] = std::lower_bound(ys.begin(), ys.end(), xc - rc) - ys.begin();
                hi[q] = std::upper_bound(ys.begin(), ys.end(), xc + rc) - ys.begin();
            }
        for (std::int64_t m = begin; m < end; ++m) {
            const Query& qu = queries[m];
            const double xc = qu.x + L;
            double* out = rates.data() + qu.row * R;
            for (int q = 0; q < R; ++q) {
                const auto& ys = tripled[q];
                while (lo[q] < ys.size() && ys[lo[q]] < xc - rc) ++lo[q];
                while (hi[q] < ys.size() && ys[hi[q]] <= xc + rc) ++hi[q];
                double sum = 0.0;
                const double* y = ys.data();
                for (std::size_t j = lo[q]; j < hi[q]; ++j) {
                    double u = y[j] - xc;
                    sum += std::exp(-c2 * u * u);
                }
                if (q == qu.species) sum -= 1.0;  // self term is exactly exp(0)
                double a_hat = const_rates
                                   ? table.rate_spec.a[qu.species][q]
                                   : eval_macroscopic_rate(table, qu.species, q, &qu.x,
                                                           state.time, state.box);
                double rate = a_hat * weight * peak * sum;
                if (rate > table.rate_cutoff) {
                    rate = table.rate_cutoff;
                    ++clips;
                }
                out[q] = rate;
            }
        }
    }
    stats.evals += nq * R;
    stats.clips += clips;
}

void rates_cell_list(const ParticleState& state, const SpeciesTable& table,
                     const GaussKernel& w, const std::vector<char>& active,
                     std::vector<double>& rates, RateStats& stats) {
    const int R = state.species_count();
    const int d = state.box.dim;
    const double weight = 1.0 / static_cast<double>(state.atoms);

    std::vector<PointSet> pts(R);
    std::vector<CellList> cells;
    cells.reserve(R);
    for (int q = 0; q < R; ++q) {
        pts[q] = state.points(q);
        cells.emplace_back(pts[q], state.box, w.cutoff());
    }

    std::int64_t clips = 0, evals = 0;
    std::int64_t row0 = 0;
    for (int r = 0; r < R; ++r) {
        const std::int64_t n_r = state.count(r);
        if (active[r]) {
            evals += n_r * R;
#pragma omp parallel for schedule(static) reduction(+ : clips)
            for (std::int64_t i = 0; i < n_r; ++i) {
                const double* xi = state.pos[r].data() + i * d;
                double* out = rates.data() + (row0 + i) * R;
                for (int q = 0; q < R; ++q) {
                    std::ptrdiff_t exclude = (q == r) ? i : -1;
                    double field = convolve_empirical(pts[q], weight, w, state.box,
                                                      xi, cells[q], exclude);
                    double a_hat = eval_macroscopic_rate(table, r, q, xi, state.time,
                                                         state.box);
                    double rate = a_hat * field;
                    if (rate > table.rate_cutoff) {
                        rate = table.rate_cutoff;
                        ++clips;
                    }
                    out[q] = rate;
                }
            }
        }
        row0 += n_r;
    }
    stats.evals += evals;
    stats.clips += clips;
}

}  // namespace

void compute_all_rates(const ParticleState& state, const SpeciesTable& table,
                       const GaussKernel& w, const std::vector<char>& active,
                       std::vector<double>& rates, RateStats& stats) {
    const int R = state.species_count();
    rates.assign(static_cast<std::size_t>(state.total_particles()) * R, 0.0);
    stats = RateStats{};
    if (state.box.dim == 1 && w.cutoff() < 0.5 * state.box.length)
        rates_sorted_1d(state, table, w, active, rates, stats);
    else
        rates_cell_list(state, table, w, active, rates, stats);
}

}  // namespace smolsim
