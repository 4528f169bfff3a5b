#include "smolsim/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace smolsim {

ValidationReport validate_scaling(int dim, double beta, double beta_hat) {
    ValidationReport rep;
    if (dim < 1 || dim > 3) {
        rep.fail("dimension must be 1, 2 or 3");
        return rep;
    }
    double hat_limit = static_cast<double>(dim) / (dim + 2);
    if (!(beta_hat > 0.0 && beta_hat < hat_limit))
        rep.fail("beta_hat=" + std::to_string(beta_hat) + " outside (0, " +
                 std::to_string(hat_limit) + ")");
    double beta_limit = beta_hat / (dim + 1);
    if (!(beta > 0.0 && beta < beta_limit))
        rep.fail("beta=" + std::to_string(beta) + " outside (0, " +
                 std::to_string(beta_limit) + ")");
    return rep;
}

double kernel_eval(const GaussKernel& k, const double* dx, const PeriodicBox& box) {
    double r2 = 0.0;
    for (int c = 0; c < box.dim; ++c) {
        double d = box.min_image(dx[c]);
        r2 += d * d;
    }
    return k.eval_r2(r2);
}

CellList::CellList(PointSet pts, const PeriodicBox& box, double cell_size) {
    dim_ = box.dim;
    int nc = static_cast<int>(std::floor(box.length / cell_size));
    all_pairs_ = nc < 3;
    cells_per_axis_ = all_pairs_ ? 1 : nc;
    for (int c = 0; c < 3; ++c)
        cell_width_[c] = box.length / cells_per_axis_;

    std::size_t ncells = 1;
    for (int c = 0; c < dim_; ++c) ncells *= static_cast<std::size_t>(cells_per_axis_);

    std::vector<std::size_t> counts(ncells + 1, 0);
    std::vector<std::size_t> cell_of(pts.count);
    for (std::size_t i = 0; i < pts.count; ++i) {
        std::size_t cell = 0;
        for (int c = dim_ - 1; c >= 0; --c) {
            int idx = static_cast<int>(std::floor(pts.x[i * dim_ + c] / cell_width_[c]));
            if (idx >= cells_per_axis_) idx = cells_per_axis_ - 1;
            if (idx < 0) idx = 0;
            cell = cell * cells_per_axis_ + idx;
        }
        cell_of[i] = cell;
        counts[cell + 1]++;
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    cell_start_ = counts;
    order_.resize(pts.count);
    std::vector<std::size_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < pts.count; ++i)
        order_[cursor[cell_of[i]]++] = static_cast<std::uint32_t>(i);
}

double convolve_empirical(PointSet pts, double weight, const GaussKernel& k,
                          const PeriodicBox& box, const double* query,
                          const CellList& cells, std::ptrdiff_t exclude) {
    const int d = box.dim;
    const double rc2 = k.cutoff() * k.cutoff();
    double sum = 0.0;
    cells.visit_candidates(query, [&](std::uint32_t i) {
        if (static_cast<std::ptrdiff_t>(i) == exclude) return;
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
            double dx = box.min_image(query[c] - pts.x[i * d + c]);
            r2 += dx * dx;
        }
        if (r2 <= rc2) sum += k.eval_r2(r2);
    });
    return weight * sum;
}

double convolve_empirical_naive(PointSet pts, double weight, const GaussKernel& k,
                                const PeriodicBox& box, const double* query,
                                std::ptrdiff_t exclude) {
    const int d = box.dim;
    const double rc2 = k.cutoff() * k.cutoff();
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.count; ++i) {
        if (static_cast<std::ptrdiff_t>(i) == exclude) continue;
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
            double dx = box.min_image(query[c] - pts.x[i * d + c]);
            r2 += dx * dx;
        }
        if (r2 <= rc2) sum += k.eval_r2(r2);
    }
    return weight * sum;
}

void smooth_to_grid(const std::vector<PointSet>& per_species, double weight,
                    const GaussKernel& k, GridField& out) {
    if (out.spacing() > 0.25 / k.alpha)
        throw std::runtime_error(
            "grid too coarse for smoothing kernel: spacing " +
            std::to_string(out.spacing()) + " > " + std::to_string(0.25 / k.alpha));
    if (per_species.size() != out.values.size())
        throw std::invalid_argument("species count mismatch in smooth_to_grid");

    const PeriodicBox box = out.box();
    const std::size_t nodes = out.node_count();
    for (std::size_t r = 0; r < per_species.size(); ++r) {
        std::vector<double>& vals = out.values[r];
        if (per_species[r].count == 0) {
            std::fill(vals.begin(), vals.end(), 0.0);
            continue;
        }
        CellList cells(per_species[r], box, k.cutoff());
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t node = 0; node < static_cast<std::ptrdiff_t>(nodes); ++node) {
            double x[3];
            out.node_coord(static_cast<std::size_t>(node), x);
            vals[node] = convolve_empirical(per_species[r], weight, k, box, x, cells);
        }
    }
}

std::vector<double> convolve_grid_1d(const std::vector<double>& field,
                                     double box_length, const GaussKernel& k) {
    const int n = static_cast<int>(field.size());
    const double h = box_length / n;
    const int reach = std::min(n / 2, static_cast<int>(std::ceil(k.cutoff() / h)));
    // tabulate kernel once per offset
    std::vector<double> w(2 * reach + 1);
    for (int off = -reach; off <= reach; ++off)
        w[off + reach] = k.eval_r2(off * h * off * h) * h;
    std::vector<double> out(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int off = -reach; off <= reach; ++off) {
            int j = i + off;
            if (j < 0) j += n;
            if (j >= n) j -= n;
            s += w[off + reach] * field[j];
        }
        out[i] = s;
    }
    return out;
}

std::vector<double> decay_test_field(int nodes, double box_length, double width) {
    std::vector<double> f(nodes);
    double h = box_length / nodes;
    double c = 0.5 * box_length;
    PeriodicBox box{1, box_length};
    for (int i = 0; i < nodes; ++i) {
        double dx = box.min_image((i + 0.5) * h - c);
        f[i] = std::exp(-0.5 * dx * dx / (width * width));
    }
    return f;
}

DecayFit kernel_approx_decay(const std::vector<double>& field, double box_length,
                             const std::vector<double>& alphas) {
    if (alphas.size() < 3)
        throw std::invalid_argument("kernel_approx_decay needs at least 3 alpha values");
    const int n = static_cast<int>(field.size());
    const double h = box_length / n;

    DecayFit fit;
    fit.norms_sq.reserve(alphas.size());
    for (double a : alphas) {
        GaussKernel k{1, a};
        std::vector<double> conv = convolve_grid_1d(field, box_length, k);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = field[i] - conv[i];
            s += d * d;
        }
        fit.norms_sq.push_back(s * h);
    }
    // zero and constant fields leave nothing to fit; the residual floor is the
    // kernel tail truncated at the cutoff (~1e-9 relative, ~1e-17 in norm_sq)
    if (std::all_of(fit.norms_sq.begin(), fit.norms_sq.end(),
                    [](double v) { return v <= 1e-15; })) {
        fit.exact_zero = true;
        return fit;
    }
    // least-squares slope of log norms vs log alpha
    double mx = 0, my = 0;
    const std::size_t m = alphas.size();
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        lx[i] = std::log(alphas[i]);
        ly[i] = std::log(fit.norms_sq[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < m; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    fit.slope = num / den;
    return fit;
}

}  // namespace smolsim
