#include "smolsim/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smolsim {

namespace {

// per-axis periodic neighbors of a flat node id
struct AxisNeighbors {
    std::size_t plus, minus;
};

AxisNeighbors neighbors(std::size_t node, int n, std::size_t stride) {
    int i = static_cast<int>((node / stride) % n);
    AxisNeighbors nb;
    nb.plus = (i == n - 1) ? node - static_cast<std::size_t>(n - 1) * stride
                           : node + stride;
    nb.minus = (i == 0) ? node + static_cast<std::size_t>(n - 1) * stride
                        : node - stride;
    return nb;
}

// rate matrix at one node; constant-matrix tables bypass the per-node eval
void rate_matrix_at(const SpeciesTable& table, const double* x, double t,
                    const PeriodicBox& box, std::vector<double>& a) {
    const int R = table.species_count();
    for (int r = 0; r < R; ++r)
        for (int q = 0; q < R; ++q)
            a[r * R + q] = eval_macroscopic_rate(table, r, q, x, t, box);
}

}  // namespace

ValidationReport check_cfl(const GridField& fields, const SpeciesTable& table,
                           double dt) {
    ValidationReport rep;
    const double h = fields.spacing();
    const PeriodicBox box = fields.box();
    double sig2 = 0.0, vmax = 0.0;
    for (int r = 0; r < table.species_count(); ++r) {
        sig2 = std::max(sig2, 0.5 * table.sigma[r] * table.sigma[r]);
        vmax = std::max(vmax, table.velocity[r].sup_norm(box));
    }
    double diff = sig2 * dt * 2.0 * fields.dim / (h * h);
    if (diff > 0.5)
        rep.fail("diffusion CFL " + std::to_string(diff) + " exceeds 0.5");
    double adv = vmax * dt / h;
    if (adv > 0.9) rep.fail("advection CFL " + std::to_string(adv) + " exceeds 0.9");
    return rep;
}

double mass_functional(const GridField& fields, const SpeciesTable& table) {
    double total = 0.0;
    for (int r = 0; r < fields.species_count(); ++r)
        total += table.masses[r] * fields.integral(r);
    return total;
}

void pde_step(GridField& fields, const SpeciesTable& table, double t, double dt,
              ClipStats& clips) {
    ValidationReport cfl = check_cfl(fields, table, dt);
    if (!cfl.ok()) throw std::invalid_argument(cfl.joined());

    const int R = fields.species_count();
    const int d = fields.dim;
    const int n = fields.nodes_per_axis;
    const double h = fields.spacing();
    const std::size_t nodes = fields.node_count();
    const PeriodicBox box = fields.box();

    std::size_t stride[3] = {1, 1, 1};
    for (int c = 1; c < d; ++c) stride[c] = stride[c - 1] * n;

    // (i) advection, flux-form first-order upwind, one axis at a time
    std::vector<double> vel;  // [node * d + c]
    std::vector<double> work(nodes);
    for (int r = 0; r < R; ++r) {
        if (table.velocity[r].kind == VelocityField::Kind::Zero) continue;
        vel.resize(nodes * d);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t node = 0; node < static_cast<std::ptrdiff_t>(nodes); ++node) {
            double x[3];
            fields.node_coord(node, x);
            Vec3 v = table.velocity[r].eval(x, t, box);
            for (int c = 0; c < d; ++c) vel[node * d + c] = v[c];
        }
        std::vector<double>& s = fields.values[r];
        for (int c = 0; c < d; ++c) {
            work = s;
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t node = 0; node < static_cast<std::ptrdiff_t>(nodes);
                 ++node) {
                AxisNeighbors nb = neighbors(node, n, stride[c]);
                double vp = 0.5 * (vel[node * d + c] + vel[nb.plus * d + c]);
                double vm = 0.5 * (vel[nb.minus * d + c] + vel[node * d + c]);
                double fp = vp > 0.0 ? vp * work[node] : vp * work[nb.plus];
                double fm = vm > 0.0 ? vm * work[nb.minus] : vm * work[node];
                s[node] = work[node] - dt / h * (fp - fm);
            }
        }
    }

    // (ii) diffusion, explicit central differences
    for (int r = 0; r < R; ++r) {
        const double coef = 0.5 * table.sigma[r] * table.sigma[r] * dt / (h * h);
        if (coef == 0.0) continue;
        std::vector<double>& s = fields.values[r];
        work = s;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t node = 0; node < static_cast<std::ptrdiff_t>(nodes); ++node) {
            double lap = 0.0;
            for (int c = 0; c < d; ++c) {
                AxisNeighbors nb = neighbors(node, n, stride[c]);
                lap += work[nb.plus] - 2.0 * work[node] + work[nb.minus];
            }
            s[node] = work[node] + coef * lap;
        }
    }

    // (iii) reaction, one explicit Euler substep
    const bool const_rates =
        table.rate_spec.kind == CollisionRateSpec::Kind::ConstantMatrix;
    std::vector<double> a_const;
    if (const_rates) {
        a_const.resize(static_cast<std::size_t>(R) * R);
        double origin[3] = {0, 0, 0};
        rate_matrix_at(table, origin, t, box, a_const);
    }
#pragma omp parallel
    {
        std::vector<double> sv(R), ds(R), a(static_cast<std::size_t>(R) * R);
#pragma omp for schedule(static)
        for (std::ptrdiff_t node = 0; node < static_cast<std::ptrdiff_t>(nodes); ++node) {
            for (int r = 0; r < R; ++r) sv[r] = fields.values[r][node];
            const double* arq;
            if (const_rates) {
                arq = a_const.data();
            } else {
                double x[3];
                fields.node_coord(node, x);
                rate_matrix_at(table, x, t, box, a);
                arq = a.data();
            }
            for (int r = 0; r < R; ++r) {
                double loss = 0.0;
                for (int q = 0; q < R; ++q) loss += arq[r * R + q] * sv[q];
                ds[r] = -sv[r] * loss;
            }
            for (int q = 0; q < R; ++q)
                for (int l = 0; l < R; ++l) {
                    double pair = 0.5 * arq[q * R + l] * sv[q] * sv[l];
                    if (pair == 0.0) continue;
                    for (int r = 0; r < R; ++r)
                        ds[r] += pair * table.frag.e_hat[q][l][r];
                }
            for (int r = 0; r < R; ++r) fields.values[r][node] = sv[r] + dt * ds[r];
        }
    }

    // clip floating-point negativity, keep the diagnostic
    const double cell = fields.cell_volume();
    for (int r = 0; r < R; ++r)
        for (double& v : fields.values[r])
            if (v < 0.0) {
                clips.clipped_mass += -v * table.masses[r] * cell;
                clips.clip_events++;
                v = 0.0;
            }
}

std::vector<GridField> solve(const GridField& s0, const SpeciesTable& table,
                             const PdeConfig& cfg,
                             const std::vector<double>& snapshot_times,
                             ClipStats* clips_out) {
    for (std::size_t i = 0; i + 1 < snapshot_times.size(); ++i)
        if (snapshot_times[i] > snapshot_times[i + 1])
            throw std::invalid_argument("snapshot times must be sorted");
    if (!snapshot_times.empty() && snapshot_times.back() > cfg.t_end + 0.5 * cfg.dt)
        throw std::invalid_argument("snapshot time beyond t_end");

    const std::int64_t steps = std::llround(cfg.t_end / cfg.dt);
    std::vector<std::int64_t> snap_steps;
    for (double t : snapshot_times)
        snap_steps.push_back(std::min<std::int64_t>(steps, std::llround(t / cfg.dt)));

    GridField fields = s0;
    ClipStats clips;
    std::vector<GridField> out;
    std::size_t next = 0;
    auto emit = [&](std::int64_t step) {
        while (next < snap_steps.size() && snap_steps[next] == step) {
            out.push_back(fields);
            ++next;
        }
    };
    emit(0);
    for (std::int64_t step = 0; step < steps; ++step) {
        pde_step(fields, table, step * cfg.dt, cfg.dt, clips);
        if (clips.clipped_mass > 1e-10)
            throw std::runtime_error("negativity clipping exceeded 1e-10 total mass");
        emit(step + 1);
    }
    if (clips_out) *clips_out = clips;
    return out;
}

std::vector<double> ode_oracle(const SpeciesTable& table, std::vector<double> s0,
                               double t_end, double dt) {
    const int R = table.species_count();
    if (static_cast<int>(s0.size()) != R)
        throw std::invalid_argument("initial scalars do not match species count");
    std::vector<double> a(static_cast<std::size_t>(R) * R);
    double origin[3] = {0, 0, 0};
    rate_matrix_at(table, origin, 0.0, PeriodicBox{1, 1.0}, a);

    auto deriv = [&](const std::vector<double>& s, std::vector<double>& ds) {
        for (int r = 0; r < R; ++r) {
            double loss = 0.0;
            for (int q = 0; q < R; ++q) loss += a[r * R + q] * s[q];
            ds[r] = -s[r] * loss;
        }
        for (int q = 0; q < R; ++q)
            for (int l = 0; l < R; ++l) {
                double pair = 0.5 * a[q * R + l] * s[q] * s[l];
                if (pair == 0.0) continue;
                for (int r = 0; r < R; ++r) ds[r] += pair * table.frag.e_hat[q][l][r];
            }
    };

    const std::int64_t steps = std::llround(t_end / dt);
    std::vector<double> k1(R), k2(R), k3(R), k4(R), tmp(R);
    for (std::int64_t step = 0; step < steps; ++step) {
        deriv(s0, k1);
        for (int r = 0; r < R; ++r) tmp[r] = s0[r] + 0.5 * dt * k1[r];
        deriv(tmp, k2);
        for (int r = 0; r < R; ++r) tmp[r] = s0[r] + 0.5 * dt * k2[r];
        deriv(tmp, k3);
        for (int r = 0; r < R; ++r) tmp[r] = s0[r] + dt * k3[r];
        deriv(tmp, k4);
        for (int r = 0; r < R; ++r)
            s0[r] += dt / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
    }
    return s0;
}

}  // namespace smolsim
