#pragma once

#include <cstdint>
#include <vector>

#include "smolsim/grid_field.hpp"
#include "smolsim/kernels.hpp"
#include "smolsim/particles.hpp"

namespace smolsim {

// One report row: smoothed-empirical vs reference distances at time t.
struct DistanceRecord {
    double t = 0.0;
    std::vector<double> d2;  // per-species ||h_{N,r} - s_r||_2^2
    double metric_d = 0.0;   // dictionary lower bound, max over species
    std::int64_t mass_total = 0;
    double clip_frac = 0.0;
};

// Per-species squared L2 distance between the kernel-smoothed empirical
// density (weight 1/N) and the reference field, on the reference grid.
// Throws if the grid cannot resolve the smoothing kernel.
std::vector<double> l2_distance_sq(const ParticleState& snap, const GridField& s,
                                   const GaussKernel& w_hat);

// Finite family of normalized test functions on the d=1 torus: `modes`
// sine/cosine pairs and `bumps` Gaussian bumps, each scaled so that
// ||f||_inf + ||f'||_inf + ||f||_2 <= 1 (verified numerically on build).
class TestDictionary {
public:
    static TestDictionary standard(double box_length, int modes = 8, int bumps = 8);

    std::size_t size() const { return members_.size(); }
    double box_length() const { return length_; }
    double eval(std::size_t i, double x) const;
    // combined norm ||f||_inf + ||f'||_inf + ||f||_2 of member i
    double combined_norm(std::size_t i) const;
    double l2_norm(std::size_t i) const;
    // member sampled on an n-node cell-centered grid
    std::vector<double> sampled(std::size_t i, int nodes) const;

private:
    struct Member {
        enum class Kind { Sin, Cos, Bump } kind;
        double param = 0.0;   // wavenumber k or bump center
        double width = 0.0;   // bump width
        double scale = 1.0;
        double l2 = 0.0;
    };
    std::vector<Member> members_;
    double length_ = 1.0;
};

// <S_{N,r}, f> = (1/N) sum over species-r particles of f(X_k); d = 1 only.
double pair_empirical(const ParticleState& snap, int r, const TestDictionary& dict,
                      std::size_t i);

// Grid quadrature of s_r * f.
double pair_field(const GridField& s, int r, const TestDictionary& dict,
                  std::size_t i);

// Lower bound of the measure distance: max over dictionary members of
// |<S_{N,r} - s_r, f>|.
double metric_lower_bound(const ParticleState& snap, int r, const GridField& s,
                          const TestDictionary& dict);

struct MassReport {
    std::int64_t total_atoms = 0;
    std::vector<std::int64_t> counts;
    std::vector<std::int64_t> atoms_per_species;
    bool count_bound_ok = true;  // sum_r N_r <= N
};
MassReport mass_report(const ParticleState& snap, const SpeciesTable& table);

// Sample variance across replica values; requires >= 30 entries.
double fluctuation_variance(const std::vector<double>& samples);

// Full record for one snapshot against the matching reference field.
DistanceRecord distance_record(const ParticleState& snap, const SpeciesTable& table,
                               const GridField& s, const GaussKernel& w_hat,
                               const TestDictionary& dict);

}  // namespace smolsim
