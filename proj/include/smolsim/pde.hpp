#pragma once

#include <cstdint>
#include <vector>

#include "smolsim/grid_field.hpp"
#include "smolsim/material.hpp"
#include "smolsim/validation.hpp"

namespace smolsim {

struct PdeConfig {
    double dt = 1e-4;
    double t_end = 1.0;
};

// Accumulated negativity-clip diagnostic. `clipped_mass` is the total mass
// functional removed by clipping; solve() aborts when it exceeds 1e-10.
struct ClipStats {
    double clipped_mass = 0.0;
    std::int64_t clip_events = 0;
};

// Diffusion CFL: max_r (sigma_r^2/2) * dt * 2d / h^2 <= 0.5.
// Advection CFL: max |v| * dt / h <= 0.9.
ValidationReport check_cfl(const GridField& fields, const SpeciesTable& table,
                           double dt);

// Mass functional sum_r m_r <s_r, 1>.
double mass_functional(const GridField& fields, const SpeciesTable& table);

// One operator-split step at time t: upwind advection, explicit central
// diffusion, explicit Euler reaction, then negativity clipping into `clips`.
// Throws on CFL violation.
void pde_step(GridField& fields, const SpeciesTable& table, double t, double dt,
              ClipStats& clips);

// Repeated pde_step with snapshots at the requested times (sorted, <= t_end).
// Throws if accumulated clipped mass exceeds 1e-10.
std::vector<GridField> solve(const GridField& s0, const SpeciesTable& table,
                             const PdeConfig& cfg,
                             const std::vector<double>& snapshot_times,
                             ClipStats* clips_out = nullptr);

// RK4 integration of the homogeneous reaction ODE system
//   ds_r/dt = -s_r sum_q a_rq s_q + 1/2 sum_{q,l} a_ql e_hat_qlr s_q s_l
// with rates evaluated at the origin. Independent oracle for both the PDE
// solver and the particle simulator.
std::vector<double> ode_oracle(const SpeciesTable& table, std::vector<double> s0,
                               double t_end, double dt = 1e-4);

}  // namespace smolsim
