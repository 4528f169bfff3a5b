#pragma once

#include <random>
#include <stdexcept>

#include "smolsim/material.hpp"

namespace testutil {

// m = (1,2); species 2 shatters into two species-1 particles, species 1 inert
inline smolsim::SpeciesTable shatter_table(double rate = 1.0, double cutoff = 5.0) {
    smolsim::SpeciesTable t;
    t.masses = {1, 2};
    t.sigma = {1.0, 1.0};
    t.velocity.resize(2);
    t.rate_spec = smolsim::CollisionRateSpec::constant(2, rate);
    t.frag = smolsim::FragTable::zeros(2);
    for (int q = 0; q < 2; ++q) {
        t.frag.e[0][q][0] = 1;
        t.frag.e[1][q][0] = 2;
    }
    t.rate_cutoff = cutoff;
    smolsim::ValidationReport rep = smolsim::validate_species_table(t);
    if (!rep.ok()) throw std::logic_error(rep.joined());
    return t;
}

inline smolsim::SpeciesTable single_species_table(double sigma,
                                                  double rate = 0.0) {
    smolsim::SpeciesTable t;
    t.masses = {1};
    t.sigma = {sigma};
    t.velocity.resize(1);
    t.rate_spec = smolsim::CollisionRateSpec::constant(1, rate);
    t.frag = smolsim::FragTable::zeros(1);
    t.frag.e[0][0][0] = 1;
    t.rate_cutoff = 1.0;
    smolsim::ValidationReport rep = smolsim::validate_species_table(t);
    if (!rep.ok()) throw std::logic_error(rep.joined());
    return t;
}

// random table with 2-3 species, valid fragmentation partitions
inline smolsim::SpeciesTable random_valid_table(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int R = 2 + static_cast<int>(rng() % 2);
    smolsim::SpeciesTable t;
    t.masses.resize(R);
    t.masses[0] = 1;
    for (int r = 1; r < R; ++r) t.masses[r] = t.masses[r - 1] + 1 + rng() % 3;
    t.sigma.assign(R, 0.5 + unif(rng));
    t.velocity.resize(R);
    t.rate_spec.kind = smolsim::CollisionRateSpec::Kind::ConstantMatrix;
    t.rate_spec.a.assign(R, std::vector<double>(R, 0.0));
    for (int r = 0; r < R; ++r)
        for (int q = r; q < R; ++q)
            t.rate_spec.a[r][q] = t.rate_spec.a[q][r] = unif(rng);
    t.frag = smolsim::FragTable::zeros(R);
    for (int r = 0; r < R; ++r)
        for (int q = 0; q < R; ++q) {
            std::int64_t remaining = t.masses[r];
            while (remaining > 0) {
                int l = static_cast<int>(rng() % R);
                if (t.masses[l] > remaining) l = 0;
                t.frag.e[r][q][l]++;
                remaining -= t.masses[l];
            }
        }
    t.rate_cutoff = 5.0;
    smolsim::ValidationReport rep = smolsim::validate_species_table(t);
    if (!rep.ok()) throw std::logic_error(rep.joined());
    return t;
}

}  // namespace testutil
