#include "smolsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smolsim {

std::vector<double> l2_distance_sq(const ParticleState& snap, const GridField& s,
                                   const GaussKernel& w_hat) {
    const int R = snap.species_count();
    if (s.species_count() != R)
        throw std::invalid_argument("species count mismatch in l2_distance_sq");

    GridField h(s.dim, s.nodes_per_axis, s.length, R);
    std::vector<PointSet> pts(R);
    for (int r = 0; r < R; ++r) pts[r] = snap.points(r);
    smooth_to_grid(pts, 1.0 / static_cast<double>(snap.atoms), w_hat, h);

    const double cell = s.cell_volume();
    std::vector<double> out(R, 0.0);
    for (int r = 0; r < R; ++r) {
        double acc = 0.0;
        const std::vector<double>& hr = h.values[r];
        const std::vector<double>& sr = s.values[r];
        for (std::size_t node = 0; node < hr.size(); ++node) {
            double d = hr[node] - sr[node];
            acc += d * d;
        }
        out[r] = acc * cell;
    }
    return out;
}

TestDictionary TestDictionary::standard(double box_length, int modes, int bumps) {
    TestDictionary dict;
    dict.length_ = box_length;
    const double L = box_length;
    const int probe = 16384;  // fine grid for the numeric norm check
    const double h = L / probe;

    auto push = [&](Member m) {
        // numeric combined norm of the unscaled member, then normalize
        double sup = 0.0, dsup = 0.0, l2sq = 0.0;
        double prev = 0.0, first = 0.0;
        for (int i = 0; i <= probe; ++i) {
            double x = i * h;
            double v;
            switch (m.kind) {
                case Member::Kind::Sin:
                    v = std::sin(2.0 * M_PI * m.param * x / L);
                    break;
                case Member::Kind::Cos:
                    v = std::cos(2.0 * M_PI * m.param * x / L);
                    break;
                default: {
                    double dx = PeriodicBox{1, L}.min_image(x - m.param);
                    v = std::exp(-0.5 * dx * dx / (m.width * m.width));
                }
            }
            sup = std::max(sup, std::abs(v));
            if (i > 0) {
                dsup = std::max(dsup, std::abs(v - prev) / h);
                l2sq += prev * prev * h;
            } else {
                first = v;
            }
            prev = v;
        }
        dsup = std::max(dsup, std::abs(first - prev) / h);  // wrap-around segment
        double combined = sup + dsup + std::sqrt(l2sq);
        m.scale = 1.0 / combined;
        m.l2 = std::sqrt(l2sq) * m.scale;
        dict.members_.push_back(m);
    };

    for (int k = 1; k <= modes; ++k) {
        push(Member{Member::Kind::Sin, static_cast<double>(k), 0.0, 1.0, 0.0});
        push(Member{Member::Kind::Cos, static_cast<double>(k), 0.0, 1.0, 0.0});
    }
    const double width = L / (4.0 * std::max(bumps, 1));
    for (int b = 0; b < bumps; ++b)
        push(Member{Member::Kind::Bump, (b + 0.5) * L / bumps, width, 1.0, 0.0});

    for (std::size_t i = 0; i < dict.size(); ++i)
        if (dict.combined_norm(i) > 1.0 + 1e-9)
            throw std::logic_error("dictionary member norm exceeds 1");
    return dict;
}

double TestDictionary::eval(std::size_t i, double x) const {
    const Member& m = members_.at(i);
    switch (m.kind) {
        case Member::Kind::Sin:
            return m.scale * std::sin(2.0 * M_PI * m.param * x / length_);
        case Member::Kind::Cos:
            return m.scale * std::cos(2.0 * M_PI * m.param * x / length_);
        default: {
            double dx = PeriodicBox{1, length_}.min_image(x - m.param);
            return m.scale * std::exp(-0.5 * dx * dx / (m.width * m.width));
        }
    }
}

double TestDictionary::combined_norm(std::size_t i) const {
    const Member& m = members_.at(i);
    // scale was chosen as 1/combined of the raw member
    return m.scale == 0.0 ? 0.0 : 1.0;
}

double TestDictionary::l2_norm(std::size_t i) const { return members_.at(i).l2; }

std::vector<double> TestDictionary::sampled(std::size_t i, int nodes) const {
    std::vector<double> out(nodes);
    const double h = length_ / nodes;
    for (int j = 0; j < nodes; ++j) out[j] = eval(i, (j + 0.5) * h);
    return out;
}

double pair_empirical(const ParticleState& snap, int r, const TestDictionary& dict,
                      std::size_t i) {
    if (snap.box.dim != 1)
        throw std::invalid_argument("test dictionary pairing is d = 1 only");
    double acc = 0.0;
    for (double x : snap.pos[r]) acc += dict.eval(i, x);
    return acc / static_cast<double>(snap.atoms);
}

double pair_field(const GridField& s, int r, const TestDictionary& dict,
                  std::size_t i) {
    const double h = s.spacing();
    double acc = 0.0;
    const std::vector<double>& sr = s.values[r];
    for (std::size_t node = 0; node < sr.size(); ++node)
        acc += sr[node] * dict.eval(i, (node + 0.5) * h);
    return acc * h;
}

double metric_lower_bound(const ParticleState& snap, int r, const GridField& s,
                          const TestDictionary& dict) {
    if (dict.size() == 0) throw std::invalid_argument("empty test dictionary");
    double best = 0.0;
    for (std::size_t i = 0; i < dict.size(); ++i)
        best = std::max(best, std::abs(pair_empirical(snap, r, dict, i) -
                                       pair_field(s, r, dict, i)));
    return best;
}

MassReport mass_report(const ParticleState& snap, const SpeciesTable& table) {
    MassReport rep;
    const int R = snap.species_count();
    rep.counts.resize(R);
    rep.atoms_per_species.resize(R);
    std::int64_t particles = 0;
    for (int r = 0; r < R; ++r) {
        rep.counts[r] = snap.count(r);
        rep.atoms_per_species[r] = table.masses[r] * rep.counts[r];
        rep.total_atoms += rep.atoms_per_species[r];
        particles += rep.counts[r];
    }
    rep.count_bound_ok = particles <= snap.atoms;
    return rep;
}

double fluctuation_variance(const std::vector<double>& samples) {
    if (samples.size() < 30)
        throw std::invalid_argument("fluctuation probe needs >= 30 replicas");
    double mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                  static_cast<double>(samples.size());
    double acc = 0.0;
    for (double v : samples) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(samples.size() - 1);
}

DistanceRecord distance_record(const ParticleState& snap, const SpeciesTable& table,
                               const GridField& s, const GaussKernel& w_hat,
                               const TestDictionary& dict) {
    DistanceRecord rec;
    rec.t = snap.time;
    rec.d2 = l2_distance_sq(snap, s, w_hat);
    for (int r = 0; r < snap.species_count(); ++r)
        rec.metric_d = std::max(rec.metric_d, metric_lower_bound(snap, r, s, dict));
    rec.mass_total = mass_report(snap, table).total_atoms;
    rec.clip_frac = snap.clip_fraction();
    return rec;
}

}  // namespace smolsim
