#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "smolsim/geometry.hpp"
#include "smolsim/grid_field.hpp"
#include "smolsim/validation.hpp"

namespace smolsim {

// Moderate-limit scaling exponents. alpha and alpha_hat are always derived,
// never stored.
struct ScalingParams {
    int dim = 1;
    double beta = 0.1;       // interaction kernel exponent
    double beta_hat = 0.3;   // smoothing kernel exponent
    std::int64_t atoms = 0;  // system size N

    double alpha() const { return std::pow(static_cast<double>(atoms), beta / dim); }
    double alpha_hat() const { return std::pow(static_cast<double>(atoms), beta_hat / dim); }
    ScalingParams with_atoms(std::int64_t n) const { return {dim, beta, beta_hat, n}; }
};

// Accepts iff 0 < beta_hat < d/(d+2) and 0 < beta < beta_hat/(d+1).
ValidationReport validate_scaling(int dim, double beta, double beta_hat);

// Scaled standard Gaussian, truncated at 6 standard deviations.
// Value at displacement x is alpha^d (2 pi)^{-d/2} exp(-|alpha x|^2 / 2).
struct GaussKernel {
    int dim = 1;
    double alpha = 1.0;

    double cutoff() const { return 6.0 / alpha; }
    double peak() const {  // value at 0
        return std::pow(alpha, dim) * std::pow(2.0 * M_PI, -0.5 * dim);
    }
    double eval_r2(double r2) const {
        if (r2 > cutoff() * cutoff()) return 0.0;
        return peak() * std::exp(-0.5 * alpha * alpha * r2);
    }
};

// Kernel value at a raw displacement; wraps to the minimum image first.
double kernel_eval(const GaussKernel& k, const double* dx, const PeriodicBox& box);

// Flat position array with stride box.dim.
struct PointSet {
    const double* x = nullptr;
    std::size_t count = 0;
};

// Spatial binning for O(N) neighbor enumeration. Cell size >= kernel cutoff,
// so a query scans at most 3^d cells. Build is single-writer; queries are
// read-only and safe to run concurrently.
class CellList {
public:
    CellList(PointSet pts, const PeriodicBox& box, double cell_size);

    // Invokes fn(index) for every point whose cell block can contain a
    // neighbor within cell_size of the query position.
    template <class Fn>
    void visit_candidates(const double* query, Fn&& fn) const {
        if (all_pairs_) {
            for (std::size_t i = 0; i < order_.size(); ++i) fn(order_[i]);
            return;
        }
        int base[3];
        for (int c = 0; c < dim_; ++c) {
            int i = static_cast<int>(std::floor(query[c] / cell_width_[c]));
            base[c] = i >= cells_per_axis_ ? cells_per_axis_ - 1 : i;
        }
        int span[3] = {1, 1, 1};
        std::size_t total = 1;
        for (int c = 0; c < dim_; ++c) total *= 3;
        for (std::size_t m = 0; m < total; ++m) {
            std::size_t rem = m;
            int idx[3];
            for (int c = 0; c < dim_; ++c) {
                int off = static_cast<int>(rem % 3) - 1;
                rem /= 3;
                int i = base[c] + off * span[c];
                if (i < 0) i += cells_per_axis_;
                if (i >= cells_per_axis_) i -= cells_per_axis_;
                idx[c] = i;
            }
            std::size_t cell = 0;
            for (int c = dim_ - 1; c >= 0; --c) cell = cell * cells_per_axis_ + idx[c];
            for (std::size_t j = cell_start_[cell]; j < cell_start_[cell + 1]; ++j)
                fn(order_[j]);
        }
    }

private:
    int dim_;
    int cells_per_axis_;
    bool all_pairs_;
    double cell_width_[3];
    std::vector<std::size_t> cell_start_;
    std::vector<std::uint32_t> order_;  // point ids grouped by cell
};

// (weight) * sum_l W(query - X_l) over the point set with minimum-image
// displacements. `exclude` skips one point index (self-interaction).
double convolve_empirical(PointSet pts, double weight, const GaussKernel& k,
                          const PeriodicBox& box, const double* query,
                          const CellList& cells, std::ptrdiff_t exclude = -1);

// O(N^2) reference used by tests and the benchmark.
double convolve_empirical_naive(PointSet pts, double weight, const GaussKernel& k,
                                const PeriodicBox& box, const double* query,
                                std::ptrdiff_t exclude = -1);

// Smoothed empirical densities h_r on the grid: values[r][node] =
// weight * sum_k W(node - X_k). Throws if the grid cannot resolve the kernel
// (spacing must be <= 1/(4 alpha)).
void smooth_to_grid(const std::vector<PointSet>& per_species, double weight,
                    const GaussKernel& k, GridField& out);

// Decay-rate fit of log ||f - f*W_alpha||_2^2 against log alpha for a
// d=1 grid field. Returns the fitted slope; `exact_zero` is set when every
// norm vanishes (zero or constant input field).
struct DecayFit {
    double slope = 0.0;
    bool exact_zero = false;
    std::vector<double> norms_sq;
};
DecayFit kernel_approx_decay(const std::vector<double>& field, double box_length,
                             const std::vector<double>& alphas);

// Built-in narrow Gaussian bump used by the decay regression.
std::vector<double> decay_test_field(int nodes, double box_length,
                                     double width = 0.0625);

// Periodic convolution of a d=1 grid field with the kernel (rectangle rule).
std::vector<double> convolve_grid_1d(const std::vector<double>& field,
                                     double box_length, const GaussKernel& k);

}  // namespace smolsim
