#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smolsim/grid_field.hpp"
#include "smolsim/kernels.hpp"
#include "smolsim/material.hpp"
#include "smolsim/validation.hpp"

namespace smolsim {

// Initial density specification; the grid resolution is chosen at run time.
struct InitialSpec {
    enum class Kind { Uniform, GaussianBump, Grid };
    Kind kind = Kind::Uniform;
    std::vector<double> densities;      // Uniform: one constant per species
    int bump_species = 0;               // GaussianBump (d = 1)
    double bump_center = 0.0;
    double bump_width = 1.0;
    double bump_mass = 1.0;             // integral of the bump
    GridField grid;                     // Grid: verbatim fields
};

struct Scenario {
    int schema_version = 1;
    std::string name;
    SpeciesTable table;
    ScalingParams scaling;  // dim / beta / beta_hat; atoms filled per run
    double box_length = 1.0;
    InitialSpec initial;
    int grid_nodes = 0;  // 0 = auto from the finest smoothing kernel

    std::vector<std::int64_t> n_sweep;
    int replicas = 1;
    double dt = 1e-3;
    double t_end = 1.0;
    double dt_pde = 1e-4;
    int snapshots = 20;
    std::uint64_t master_seed = 1;
    double clip_threshold = 1e-4;  // health bound on the rate clip fraction
};

// Built-in scenarios.
// Binary shattering (m = (1,2), species 2 shatters into two of species 1)
// with a Gaussian bump initial condition in d = 1.
Scenario default_shatter_scenario();
// Same reaction table with uniform initial data on a unit box; matches the
// homogeneous ODE reduction.
Scenario homogeneous_scenario();

// JSON config I/O (schema_version 1). Throws std::runtime_error with a
// descriptive message on any malformed input.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

ValidationReport validate_scenario(const Scenario& sc);

// Initial densities realized on an n-node grid, rescaled to unit mass
// functional sum_r m_r <s_r, 1>.
GridField build_initial(const Scenario& sc, int nodes);

// Grid resolution: explicit grid_nodes, or the coarsest grid resolving the
// smoothing kernel at the largest N of the sweep (spacing <= 1/(4 alpha_hat)).
int resolve_grid_nodes(const Scenario& sc, std::int64_t max_atoms);

}  // namespace smolsim
