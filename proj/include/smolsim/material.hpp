#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "smolsim/geometry.hpp"
#include "smolsim/grid_field.hpp"
#include "smolsim/validation.hpp"

namespace smolsim {

// Fragmentation tensor. e[r][q][l] is the number of species-l particles
// produced when a species-r particle shatters against the species-q field.
// e_hat is derived from e and overwritten by validate_species_table.
struct FragTable {
    std::vector<std::vector<std::vector<std::int64_t>>> e;
    std::vector<std::vector<std::vector<std::int64_t>>> e_hat;

    static FragTable zeros(int species);
    // true when the (r,q) channel maps a species-r particle onto itself
    bool identity_channel(int r, int q) const;
};

// Speed dependence g(|v_r - v_q|) of the cross-section collision rate.
struct SpeedLaw {
    enum class Kind { Constant, Linear, Table };
    Kind kind = Kind::Constant;
    double value = 1.0;                 // Constant: g == value; Linear: g(s) = value * s
    std::vector<double> knots_s;        // Table: piecewise-linear, clamped ends
    std::vector<double> knots_g;

    double operator()(double speed) const;
};

struct CollisionRateSpec {
    enum class Kind { ConstantMatrix, CrossSection };
    Kind kind = Kind::ConstantMatrix;
    std::vector<std::vector<double>> a;  // ConstantMatrix entries a[r][q]
    std::vector<double> radii;           // CrossSection grain radii per species
    SpeedLaw speed_law;

    static CollisionRateSpec constant(int species, double rate);
};

struct VelocityField {
    enum class Kind { Zero, Constant, Rotational, GridSampled };
    Kind kind = Kind::Zero;
    Vec3 u{0, 0, 0};        // Constant
    Vec3 center{0, 0, 0};   // Rotational (d = 2 only)
    double omega = 0.0;
    std::shared_ptr<GridField> grid;  // GridSampled: one field per component

    Vec3 eval(const double* x, double t, const PeriodicBox& box) const;
    // bound on |v| used by CFL checks; conservative for GridSampled
    double sup_norm(const PeriodicBox& box) const;
};

// All model coefficients. Immutable after validation; shared read-only.
struct SpeciesTable {
    std::vector<std::int64_t> masses;  // m[0] = 1, strictly increasing
    std::vector<double> sigma;         // diffusion constants, > 0
    std::vector<VelocityField> velocity;
    CollisionRateSpec rate_spec;
    FragTable frag;
    double rate_cutoff = 1.0;          // C_a

    int species_count() const { return static_cast<int>(masses.size()); }
};

// Checks every invariant, recomputes e_hat from e. Never throws; an empty
// report means the table is usable.
ValidationReport validate_species_table(SpeciesTable& table);

// Macroscopic collision rate for the (r,q) channel at (x,t).
// Throws std::out_of_range on a bad species index.
double eval_macroscopic_rate(const SpeciesTable& table, int r, int q,
                             const double* x, double t, const PeriodicBox& box);

// Upper bound on eval_macroscopic_rate over the box, for rate caps.
double macroscopic_rate_bound(const SpeciesTable& table, const PeriodicBox& box);

}  // namespace smolsim
