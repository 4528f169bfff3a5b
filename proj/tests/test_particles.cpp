#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "smolsim/particles.hpp"

using namespace smolsim;

namespace {

GridField uniform_field(int species, double length, const std::vector<double>& dens) {
    GridField f(1, 64, length, species);
    for (int r = 0; r < species; ++r)
        std::fill(f.values[r].begin(), f.values[r].end(), dens[r]);
    return f;
}

}  // namespace

TEST_CASE("initial sampling: counts and distribution") {
    SUBCASE("uniform single species") {
        SpeciesTable t = testutil::single_species_table(1.0);
        GridField s0 = uniform_field(1, 1.0, {1.0});
        ParticleState st = sample_initial_state(t, s0, 1000, 7);
        REQUIRE(st.count(0) == 1000);
        CHECK(st.atoms == 1000);

        // Kolmogorov-Smirnov against the uniform CDF, alpha = 0.01
        std::vector<double> xs(st.pos[0]);
        std::sort(xs.begin(), xs.end());
        double ks = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double cdf = xs[i];
            ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / xs.size()));
            ks = std::max(ks, std::abs(cdf - static_cast<double>(i + 1) / xs.size()));
        }
        CHECK(ks <= 1.63 / std::sqrt(1000.0));
    }
    SUBCASE("two species rounding rule") {
        SpeciesTable t = testutil::shatter_table();
        GridField s0 = uniform_field(2, 1.0, {0.5, 0.25});  // unit total mass
        ParticleState st = sample_initial_state(t, s0, 1000, 7);
        CHECK(st.count(0) == 500);
        CHECK(st.count(1) == 250);
        CHECK(st.atoms == 1000);
    }
    SUBCASE("all-zero initial data is rejected") {
        SpeciesTable t = testutil::single_species_table(1.0);
        GridField s0 = uniform_field(1, 1.0, {0.0});
        CHECK_THROWS(sample_initial_state(t, s0, 1000, 7));
    }
    SUBCASE("d = 2 rejection sampling hits the support") {
        SpeciesTable t = testutil::single_species_table(1.0);
        GridField s0(2, 8, 1.0, 1);
        // density supported on the left half
        for (std::size_t node = 0; node < s0.node_count(); ++node) {
            double x[2];
            s0.node_coord(node, x);
            s0.values[0][node] = x[0] < 0.5 ? 2.0 : 0.0;
        }
        ParticleState st = sample_initial_state(t, s0, 500, 7);
        REQUIRE(st.count(0) == 500);
        for (std::int64_t i = 0; i < 500; ++i) CHECK(st.pos[0][2 * i] < 0.5);
    }
}

TEST_CASE("SDE stepping") {
    SUBCASE("zero drift and diffusion leaves positions unchanged") {
        SpeciesTable t = testutil::single_species_table(1.0);
        t.sigma[0] = 0.0;  // direct construction, no validation needed here
        GridField s0 = uniform_field(1, 1.0, {1.0});
        ParticleState st = sample_initial_state(t, s0, 100, 3);
        std::vector<double> before = st.pos[0];
        sde_step(st, t, 0.1);
        CHECK(st.pos[0] == before);
    }
    SUBCASE("constant drift shifts deterministically mod L") {
        SpeciesTable t = testutil::single_species_table(1.0);
        t.sigma[0] = 0.0;
        t.velocity[0].kind = VelocityField::Kind::Constant;
        t.velocity[0].u = {1.0, 0.0, 0.0};
        GridField s0 = uniform_field(1, 1.0, {1.0});
        ParticleState st = sample_initial_state(t, s0, 100, 3);
        std::vector<double> before = st.pos[0];
        sde_step(st, t, 0.5);
        for (std::size_t i = 0; i < before.size(); ++i)
            CHECK(st.pos[0][i] ==
                  doctest::Approx(st.box.wrap(before[i] + 0.5)).epsilon(1e-12));
    }
    SUBCASE("Brownian variance matches sigma^2 t") {
        SpeciesTable t = testutil::single_species_table(1.0);
        GridField s0 = uniform_field(1, 10.0, {0.1});
        ParticleState st = sample_initial_state(t, s0, 10000, 3);
        std::fill(st.pos[0].begin(), st.pos[0].end(), 5.0);  // point source
        sde_step(st, t, 0.01);
        double mean = 0.0, var = 0.0;
        for (double x : st.pos[0]) mean += x - 5.0;
        mean /= st.count(0);
        for (double x : st.pos[0]) var += (x - 5.0 - mean) * (x - 5.0 - mean);
        var /= (st.count(0) - 1);
        CHECK(var == doctest::Approx(0.01).epsilon(0.05));
    }
    SUBCASE("dt must be positive") {
        SpeciesTable t = testutil::single_species_table(1.0);
        GridField s0 = uniform_field(1, 1.0, {1.0});
        ParticleState st = sample_initial_state(t, s0, 10, 3);
        CHECK_THROWS(sde_step(st, t, 0.0));
    }
}

TEST_CASE("single-particle interaction rate") {
    SpeciesTable t = testutil::shatter_table(1.0, 10.0);
    GridField s0 = uniform_field(2, 10.0, {0.05, 0.025});
    ParticleState st = sample_initial_state(t, s0, 100, 5);
    // beta = 0.5, N = 100 -> alpha = 10
    GaussKernel w{1, 10.0};

    SUBCASE("coincident partner, r != q") {
        st.pos[0] = {2.5};                // one species-1 particle
        st.pos[1] = {2.5};                // one species-2 particle at the same spot
        st.atoms = 100;                   // weight 1/N fixed by the scenario
        double rate = interaction_rate(st, t, w, 1, 0, 0);
        CHECK(rate == doctest::Approx(0.0398942).epsilon(1e-5));
    }
    SUBCASE("no partners within the cutoff") {
        st.pos[0] = {8.0};
        st.pos[1] = {2.5};
        st.atoms = 100;
        CHECK(interaction_rate(st, t, w, 1, 0, 0) == 0.0);
    }
    SUBCASE("cutoff clamps huge rates") {
        SpeciesTable big = testutil::shatter_table(1e9, 10.0);
        st.pos[0] = {2.5};
        st.pos[1] = {2.5};
        st.atoms = 100;
        CHECK(interaction_rate(st, big, w, 1, 0, 0) == 10.0);
    }
    SUBCASE("self term is excluded") {
        st.pos[0] = {};
        st.pos[1] = {2.5};  // alone
        st.atoms = 100;
        CHECK(interaction_rate(st, t, w, 1, 0, 1) == 0.0);
    }
}

TEST_CASE("batch rates match the serial reference") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SpeciesTable t = testutil::shatter_table(1.3, 50.0);
    for (int trial = 0; trial < 10; ++trial) {
        ParticleState st;
        st.box = PeriodicBox{1, 1.0};
        st.pos.resize(2);
        int n1 = 50 + static_cast<int>(rng() % 400);
        int n2 = 50 + static_cast<int>(rng() % 400);
        for (int i = 0; i < n1; ++i) st.pos[0].push_back(unif(rng));
        for (int i = 0; i < n2; ++i) st.pos[1].push_back(unif(rng));
        st.atoms = n1 + 2 * n2;
        GaussKernel w{1, 30.0 + 100.0 * unif(rng)};
        std::vector<char> active{1, 1};
        std::vector<double> fast, ref;
        RateStats fs, rs;
        compute_all_rates(st, t, w, active, fast, fs);
        compute_all_rates_ref(st, t, w, active, ref, rs);
        REQUIRE(fast.size() == ref.size());
        CHECK(fs.evals == rs.evals);
        CHECK(fs.clips == rs.clips);
        for (std::size_t i = 0; i < fast.size(); ++i)
            CHECK(std::abs(fast[i] - ref[i]) <=
                  1e-10 * std::max(1.0, std::abs(ref[i])));
    }
}

TEST_CASE("batch rates: d = 2 cell-list path matches the reference") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SpeciesTable t = testutil::shatter_table(1.0, 50.0);
    ParticleState st;
    st.box = PeriodicBox{2, 1.0};
    st.pos.resize(2);
    for (int i = 0; i < 400; ++i) st.pos[0].push_back(unif(rng));
    for (int i = 0; i < 600; ++i) st.pos[1].push_back(unif(rng));
    st.atoms = st.count(0) + 2 * st.count(1);
    GaussKernel w{2, 40.0};
    std::vector<char> active{1, 1};
    std::vector<double> fast, ref;
    RateStats fs, rs;
    compute_all_rates(st, t, w, active, fast, fs);
    compute_all_rates_ref(st, t, w, active, ref, rs);
    REQUIRE(fast.size() == ref.size());
    for (std::size_t i = 0; i < fast.size(); ++i)
        CHECK(std::abs(fast[i] - ref[i]) <= 1e-12 * std::max(1.0, std::abs(ref[i])));
}

TEST_CASE("interaction events") {
    SUBCASE("zero rates leave the state unchanged") {
        SpeciesTable t = testutil::shatter_table(0.0);
        GridField s0 = uniform_field(2, 1.0, {0.5, 0.25});
        ParticleState st = sample_initial_state(t, s0, 1000, 5);
        std::vector<std::vector<double>> before = st.pos;
        GaussKernel w{1, 20.0};
        interaction_step(st, t, w, 1e-3);
        CHECK(st.pos == before);
    }
    SUBCASE("a shattering event conserves atoms and spawns at the parent") {
        SpeciesTable t = testutil::shatter_table(1e6, 1e6);  // force the event
        ParticleState st;
        st.box = PeriodicBox{1, 1.0};
        // a species-1 partner provides the field the species-2 particle sees
        st.pos = {{0.37}, {0.37}};
        st.atoms = 3;
        st.events_fired.assign(2, std::vector<std::int64_t>(2, 0));
        st.rng.seed(99);
        GaussKernel w{1, 20.0};
        interaction_step(st, t, w, 1.0);
        REQUIRE(st.count(1) == 0);
        REQUIRE(st.count(0) == 3);
        for (double x : st.pos[0]) CHECK(x == 0.37);
        CHECK(st.atom_total(t) == 3);
        CHECK(st.events_fired[1][0] == 1);
    }
    SUBCASE("thinning probability matches 1 - exp(-rate dt)") {
        // one species-2 particle against one coincident species-1 particle;
        // a_hat tuned so the total channel rate is exactly 0.05
        GaussKernel w{1, 10.0};
        double a_hat = 0.05 * 3.0 / w.peak();
        SpeciesTable t = testutil::shatter_table(a_hat, 10.0);
        const double dt = 0.1;
        const double p = -std::expm1(-0.05 * dt);
        const int trials = 100000;
        int events = 0;
        for (int i = 0; i < trials; ++i) {
            ParticleState st;
            st.box = PeriodicBox{1, 1.0};
            st.pos = {{0.5}, {0.5}};
            st.atoms = 3;
            st.events_fired.assign(2, std::vector<std::int64_t>(2, 0));
            st.rng.seed(1000 + i);
            interaction_step(st, t, w, dt);
            events += static_cast<int>(st.events_fired[1][0] + st.events_fired[1][1]);
        }
        double freq = static_cast<double>(events) / trials;
        double sigma3 = 3.0 * std::sqrt(p * (1.0 - p) / trials);
        CHECK(std::abs(freq - p) <= sigma3);
    }
}

TEST_CASE("trajectory driver") {
    SpeciesTable t = testutil::shatter_table();
    GridField s0 = uniform_field(2, 1.0, {0.5, 0.25});
    GaussKernel w{1, 20.0};

    SUBCASE("zero end time returns the initial state") {
        ParticleState st = sample_initial_state(t, s0, 1000, 5);
        std::vector<double> before = st.pos[0];
        StepConfig cfg;
        auto snaps = run(st, t, w, cfg, 0.0, {0.0});
        REQUIRE(snaps.size() == 1);
        CHECK(snaps[0].pos[0] == before);
    }
    SUBCASE("pure diffusion keeps species counts") {
        SpeciesTable quiet = testutil::shatter_table(0.0);
        ParticleState st = sample_initial_state(quiet, s0, 1000, 5);
        StepConfig cfg;
        cfg.seed = 8;
        auto snaps = run(st, quiet, w, cfg, 0.05, {0.05});
        CHECK(snaps.back().count(0) == 500);
        CHECK(snaps.back().count(1) == 250);
        CHECK(snaps.back().bound_violations == 0);
    }
    SUBCASE("deterministic given the seed") {
        StepConfig cfg;
        cfg.seed = 4242;
        ParticleState a = sample_initial_state(t, s0, 500, 5);
        ParticleState b = sample_initial_state(t, s0, 500, 5);
        auto sa = run(a, t, w, cfg, 0.2, {0.1, 0.2});
        auto sb = run(b, t, w, cfg, 0.2, {0.1, 0.2});
        REQUIRE(sa.size() == sb.size());
        for (std::size_t i = 0; i < sa.size(); ++i) {
            CHECK(sa[i].pos == sb[i].pos);
            CHECK(sa[i].events_fired == sb[i].events_fired);
        }
    }
    SUBCASE("atom conservation holds across a shattering run") {
        ParticleState st = sample_initial_state(t, s0, 2000, 5);
        StepConfig cfg;
        cfg.seed = 77;
        auto snaps = run(st, t, w, cfg, 0.5, {0.25, 0.5});
        for (const auto& s : snaps) {
            CHECK(s.atom_total(t) == 2000);
            CHECK(s.total_particles() <= 2000);
        }
        CHECK(snaps.back().count(0) > 500);  // events actually fired
    }
    SUBCASE("event probability cap is enforced") {
        ParticleState st = sample_initial_state(t, s0, 100, 5);
        StepConfig cfg;
        cfg.dt = 0.1;  // dt * R * C_a = 1 > 0.1
        CHECK_THROWS(run(st, t, w, cfg, 1.0, {}));
    }
    SUBCASE("snapshot times must be sorted and within range") {
        ParticleState st = sample_initial_state(t, s0, 100, 5);
        StepConfig cfg;
        CHECK_THROWS(run(st, t, w, cfg, 0.1, {0.1, 0.05}));
        CHECK_THROWS(run(st, t, w, cfg, 0.1, {0.5}));
    }
}
