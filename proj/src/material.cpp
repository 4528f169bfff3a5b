#include "smolsim/material.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smolsim {

namespace {

std::string idx2(const char* name, int r, int q) {
    return std::string(name) + "[" + std::to_string(r + 1) + "][" + std::to_string(q + 1) + "]";
}

}  // namespace

FragTable FragTable::zeros(int species) {
    FragTable f;
    f.e.assign(species, std::vector<std::vector<std::int64_t>>(
                            species, std::vector<std::int64_t>(species, 0)));
    f.e_hat = f.e;
    return f;
}

bool FragTable::identity_channel(int r, int q) const {
    const auto& row = e[r][q];
    for (int l = 0; l < static_cast<int>(row.size()); ++l) {
        if (row[l] != (l == r ? 1 : 0)) return false;
    }
    return true;
}

double SpeedLaw::operator()(double speed) const {
    switch (kind) {
        case Kind::Constant:
            return value;
        case Kind::Linear:
            return value * speed;
        case Kind::Table: {
            if (knots_s.empty()) return 0.0;
            if (speed <= knots_s.front()) return knots_g.front();
            if (speed >= knots_s.back()) return knots_g.back();
            auto it = std::upper_bound(knots_s.begin(), knots_s.end(), speed);
            std::size_t i = static_cast<std::size_t>(it - knots_s.begin());
            double w = (speed - knots_s[i - 1]) / (knots_s[i] - knots_s[i - 1]);
            return knots_g[i - 1] + w * (knots_g[i] - knots_g[i - 1]);
        }
    }
    return 0.0;
}

CollisionRateSpec CollisionRateSpec::constant(int species, double rate) {
    CollisionRateSpec s;
    s.kind = Kind::ConstantMatrix;
    s.a.assign(species, std::vector<double>(species, rate));
    return s;
}

Vec3 VelocityField::eval(const double* x, double t, const PeriodicBox& box) const {
    (void)t;
    switch (kind) {
        case Kind::Zero:
            return {0, 0, 0};
        case Kind::Constant:
            return u;
        case Kind::Rotational: {
            // rigid rotation about `center`, d = 2
            double dx = box.min_image(x[0] - center[0]);
            double dy = box.min_image(x[1] - center[1]);
            return {-omega * dy, omega * dx, 0.0};
        }
        case Kind::GridSampled: {
            // multilinear interpolation between cell centers
            Vec3 v{0, 0, 0};
            const GridField& g = *grid;
            double h = g.spacing();
            int base[3] = {0, 0, 0};
            double frac[3] = {0, 0, 0};
            for (int c = 0; c < box.dim; ++c) {
                double s = box.wrap(x[c]) / h - 0.5;
                double fl = std::floor(s);
                base[c] = static_cast<int>(fl);
                frac[c] = s - fl;
            }
            int corners = 1 << box.dim;
            for (int comp = 0; comp < box.dim && comp < g.species_count(); ++comp) {
                double acc = 0.0;
                for (int m = 0; m < corners; ++m) {
                    double w = 1.0;
                    int idx[3] = {0, 0, 0};
                    for (int c = 0; c < box.dim; ++c) {
                        int bit = (m >> c) & 1;
                        idx[c] = base[c] + bit;
                        w *= bit ? frac[c] : (1.0 - frac[c]);
                    }
                    acc += w * g.values[comp][g.node_index(idx)];
                }
                v[comp] = acc;
            }
            return v;
        }
    }
    return {0, 0, 0};
}

double VelocityField::sup_norm(const PeriodicBox& box) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant: {
            double s = 0.0;
            for (int c = 0; c < box.dim; ++c) s += u[c] * u[c];
            return std::sqrt(s);
        }
        case Kind::Rotational:
            // max distance from center on the torus is L/sqrt(2) per axis bound
            return std::abs(omega) * box.length * std::sqrt(2.0) / 2.0;
        case Kind::GridSampled: {
            double m = 0.0;
            for (std::size_t node = 0; node < grid->node_count(); ++node) {
                double s = 0.0;
                for (int comp = 0; comp < box.dim && comp < grid->species_count(); ++comp)
                    s += grid->values[comp][node] * grid->values[comp][node];
                m = std::max(m, s);
            }
            return std::sqrt(m);
        }
    }
    return 0.0;
}

ValidationReport validate_species_table(SpeciesTable& table) {
    ValidationReport rep;
    const int R = table.species_count();
    if (R == 0) {
        rep.fail("species table is empty");
        return rep;
    }
    if (static_cast<int>(table.sigma.size()) != R ||
        static_cast<int>(table.velocity.size()) != R) {
        rep.fail("sigma/velocity arrays do not match species count");
        return rep;
    }

    if (table.masses[0] != 1) rep.fail("m[1] must equal 1");
    for (int r = 0; r + 1 < R; ++r) {
        if (table.masses[r] >= table.masses[r + 1])
            rep.fail("masses must be strictly increasing at index " + std::to_string(r + 1));
    }
    for (int r = 0; r < R; ++r) {
        if (table.masses[r] <= 0)
            rep.fail("m[" + std::to_string(r + 1) + "] must be positive");
        if (!(table.sigma[r] > 0.0))
            rep.fail("sigma[" + std::to_string(r + 1) + "] must be positive");
    }
    if (!(table.rate_cutoff > 0.0)) rep.fail("C_a must be positive");

    // collision rate spec
    switch (table.rate_spec.kind) {
        case CollisionRateSpec::Kind::ConstantMatrix: {
            if (static_cast<int>(table.rate_spec.a.size()) != R) {
                rep.fail("rate matrix size does not match species count");
                break;
            }
            for (int r = 0; r < R; ++r) {
                if (static_cast<int>(table.rate_spec.a[r].size()) != R) {
                    rep.fail("rate matrix row " + std::to_string(r + 1) + " has wrong size");
                    continue;
                }
                for (int q = 0; q < R; ++q) {
                    if (table.rate_spec.a[r][q] < 0.0)
                        rep.fail(idx2("a_hat", r, q) + " is negative");
                    if (table.rate_spec.a[r][q] != table.rate_spec.a[q][r])
                        rep.fail(idx2("a_hat", r, q) + " breaks symmetry");
                }
            }
            break;
        }
        case CollisionRateSpec::Kind::CrossSection: {
            if (static_cast<int>(table.rate_spec.radii.size()) != R)
                rep.fail("cross-section radii do not match species count");
            for (int r = 0; r < static_cast<int>(table.rate_spec.radii.size()); ++r)
                if (table.rate_spec.radii[r] <= 0.0)
                    rep.fail("radius[" + std::to_string(r + 1) + "] must be positive");
            if (table.rate_spec.speed_law.kind == SpeedLaw::Kind::Table) {
                const auto& s = table.rate_spec.speed_law.knots_s;
                const auto& g = table.rate_spec.speed_law.knots_g;
                if (s.size() < 2 || s.size() != g.size())
                    rep.fail("speed-law table needs >= 2 matching knots");
                for (std::size_t i = 0; i + 1 < s.size(); ++i)
                    if (s[i] >= s[i + 1]) rep.fail("speed-law knots must be increasing");
                for (double v : g)
                    if (v < 0.0) rep.fail("speed-law values must be nonnegative");
            }
            break;
        }
    }

    // fragmentation tensor: per-channel mass conservation, then derive e_hat
    auto shape_ok = [R](const std::vector<std::vector<std::vector<std::int64_t>>>& t) {
        if (static_cast<int>(t.size()) != R) return false;
        for (const auto& a : t) {
            if (static_cast<int>(a.size()) != R) return false;
            for (const auto& b : a)
                if (static_cast<int>(b.size()) != R) return false;
        }
        return true;
    };
    if (!shape_ok(table.frag.e)) {
        rep.fail("fragmentation tensor e has wrong shape");
        return rep;
    }
    for (int r = 0; r < R; ++r)
        for (int q = 0; q < R; ++q) {
            std::int64_t mass = 0;
            for (int l = 0; l < R; ++l) {
                if (table.frag.e[r][q][l] < 0)
                    rep.fail("e[" + std::to_string(r + 1) + "][" + std::to_string(q + 1) +
                             "][" + std::to_string(l + 1) + "] is negative");
                mass += table.masses[l] * table.frag.e[r][q][l];
            }
            if (mass != table.masses[r])
                rep.fail("sum_l m_l e" + idx2("", r, q) + " = " + std::to_string(mass) +
                         " != m[" + std::to_string(r + 1) + "]");
        }

    table.frag.e_hat.assign(R, std::vector<std::vector<std::int64_t>>(
                                   R, std::vector<std::int64_t>(R, 0)));
    for (int r = 0; r < R; ++r)
        for (int q = 0; q < R; ++q)
            for (int l = 0; l < R; ++l)
                table.frag.e_hat[r][q][l] = table.frag.e[r][q][l] + table.frag.e[q][r][l];

    return rep;
}

double eval_macroscopic_rate(const SpeciesTable& table, int r, int q,
                             const double* x, double t, const PeriodicBox& box) {
    const int R = table.species_count();
    if (r < 0 || q < 0 || r >= R || q >= R)
        throw std::out_of_range("species index out of range in eval_macroscopic_rate");
    switch (table.rate_spec.kind) {
        case CollisionRateSpec::Kind::ConstantMatrix:
            return table.rate_spec.a[r][q];
        case CollisionRateSpec::Kind::CrossSection: {
            Vec3 vr = table.velocity[r].eval(x, t, box);
            Vec3 vq = table.velocity[q].eval(x, t, box);
            double s = 0.0;
            for (int c = 0; c < box.dim; ++c) s += (vr[c] - vq[c]) * (vr[c] - vq[c]);
            double rel = std::sqrt(s);
            double cross = std::pow(table.rate_spec.radii[r] + table.rate_spec.radii[q],
                                    box.dim - 1);
            return cross * table.rate_spec.speed_law(rel);
        }
    }
    return 0.0;
}

double macroscopic_rate_bound(const SpeciesTable& table, const PeriodicBox& box) {
    const int R = table.species_count();
    double bound = 0.0;
    switch (table.rate_spec.kind) {
        case CollisionRateSpec::Kind::ConstantMatrix:
            for (int r = 0; r < R; ++r)
                for (int q = 0; q < R; ++q)
                    bound = std::max(bound, table.rate_spec.a[r][q]);
            return bound;
        case CollisionRateSpec::Kind::CrossSection: {
            double vmax = 0.0;
            for (int r = 0; r < R; ++r)
                vmax = std::max(vmax, table.velocity[r].sup_norm(box));
            double gmax = 0.0;
            const SpeedLaw& g = table.rate_spec.speed_law;
            if (g.kind == SpeedLaw::Kind::Table) {
                for (double v : g.knots_g) gmax = std::max(gmax, v);
            } else {
                gmax = std::max(g(0.0), g(2.0 * vmax));
            }
            double rmax = 0.0;
            for (double rad : table.rate_spec.radii) rmax = std::max(rmax, rad);
            return std::pow(2.0 * rmax, box.dim - 1) * gmax;
        }
    }
    return bound;
}

}  // namespace smolsim
