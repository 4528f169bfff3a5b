#include "smolsim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "smolsim/rng_util.hpp"

namespace smolsim {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> snapshot_times(const Scenario& sc) {
    if (sc.t_end == 0.0) return {0.0};
    std::vector<double> t;
    for (int k = 0; k <= sc.snapshots; ++k)
        t.push_back(sc.t_end * k / sc.snapshots);
    return t;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void dump_particles_csv(const std::filesystem::path& path,
                        const ParticleState& snap) {
    std::string text = "species";
    for (int c = 0; c < snap.box.dim; ++c)
        text += ",x" + std::to_string(c + 1);
    text += "\n";
    for (int r = 0; r < snap.species_count(); ++r) {
        const std::int64_t n = snap.count(r);
        for (std::int64_t i = 0; i < n; ++i) {
            text += std::to_string(r + 1);
            for (int c = 0; c < snap.box.dim; ++c)
                text += "," + fmt(snap.pos[r][i * snap.box.dim + c]);
            text += "\n";
        }
    }
    write_file(path, text);
}

struct ReplicaResult {
    std::vector<DistanceRecord> records;
    std::int64_t atoms = 0;
};

ReplicaResult run_replica(const Scenario& sc, std::int64_t atoms,
                          std::uint64_t sample_seed, std::uint64_t run_seed,
                          const GridField& s0,
                          const std::vector<GridField>& pde_snaps,
                          const std::vector<double>& times,
                          const TestDictionary& dict) {
    ScalingParams scaling = sc.scaling.with_atoms(atoms);
    GaussKernel w{sc.scaling.dim, scaling.alpha()};
    ParticleState st = sample_initial_state(sc.table, s0, atoms, sample_seed);
    // the realized atom count is the exact system size from here on
    GaussKernel w_hat{sc.scaling.dim, sc.scaling.with_atoms(st.atoms).alpha_hat()};
    StepConfig cfg;
    cfg.dt = sc.dt;
    cfg.seed = run_seed;
    std::vector<ParticleState> snaps = run(st, sc.table, w, cfg, sc.t_end, times);

    ReplicaResult res;
    res.atoms = snaps.front().atoms;
    res.records.reserve(snaps.size());
    for (std::size_t i = 0; i < snaps.size(); ++i)
        res.records.push_back(
            distance_record(snaps[i], sc.table, pde_snaps[i], w_hat, dict));
    return res;
}

// --- regression checks ------------------------------------------------

RegressionResult check_kernel_normalization(bool inject_fault) {
    GaussKernel k{1, 4.0};
    const double L = 10.0;
    const int n = 200000;
    const double h = L / n;
    double quad = 0.0;
    PeriodicBox box{1, L};
    for (int i = 0; i < n; ++i) {
        double dx = box.min_image((i + 0.5) * h - 0.5 * L);
        quad += k.eval_r2(dx * dx) * h;
    }
    if (inject_fault) quad *= 1.001;
    double err = std::abs(quad - 1.0);
    return {"kernel_normalization", err <= 1e-6,
            "quadrature deviation " + fmt(err)};
}

RegressionResult check_kernel_decay() {
    std::vector<double> f = decay_test_field(4096, 10.0);
    DecayFit fit = kernel_approx_decay(f, 10.0, {4.0, 8.0, 16.0, 32.0});
    bool pass = !fit.exact_zero && fit.slope >= -2.3 && fit.slope <= -1.7;
    return {"kernel_decay", pass, "fitted slope " + fmt(fit.slope)};
}

RegressionResult check_cell_list(int configs, int max_particles) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int c = 0; c < configs; ++c) {
        int d = 1 + static_cast<int>(rng() % 2);
        PeriodicBox box{d, 1.0};
        int n = 50 + static_cast<int>(rng() % (max_particles - 49));
        std::vector<double> xs(static_cast<std::size_t>(n) * d);
        for (double& x : xs) x = unif(rng);
        GaussKernel k{d, 20.0 + 20.0 * unif(rng)};
        PointSet pts{xs.data(), static_cast<std::size_t>(n)};
        CellList cells(pts, box, k.cutoff());
        for (int qi = 0; qi < 20; ++qi) {
            double q[3] = {unif(rng), unif(rng), unif(rng)};
            double a = convolve_empirical(pts, 1.0 / n, k, box, q, cells);
            double b = convolve_empirical_naive(pts, 1.0 / n, k, box, q);
            double rel = std::abs(a - b) / std::max(std::abs(b), 1e-300);
            if (b == 0.0) rel = std::abs(a);
            worst = std::max(worst, rel);
        }
    }
    return {"cell_list_exactness", worst <= 1e-12, "worst relative error " + fmt(worst)};
}

SpeciesTable diffusion_only_table(double sigma) {
    SpeciesTable t;
    t.masses = {1};
    t.sigma = {sigma};
    t.velocity.resize(1);
    t.rate_spec = CollisionRateSpec::constant(1, 0.0);
    t.frag = FragTable::zeros(1);
    t.frag.e[0][0][0] = 1;
    t.rate_cutoff = 1.0;
    ValidationReport rep = validate_species_table(t);
    if (!rep.ok()) throw std::logic_error(rep.joined());
    return t;
}

// L2 error of the diffusion-only solver against the periodized heat kernel
double diffusion_l2_error(int nodes, double t_end, double dt) {
    const double L = 10.0, w0 = 1.0, sigma = 1.0;
    SpeciesTable table = diffusion_only_table(sigma);
    GridField f(1, nodes, L, 1);
    PeriodicBox box{1, L};
    const double h = f.spacing();
    for (int i = 0; i < nodes; ++i) {
        double dx = box.min_image((i + 0.5) * h - 0.5 * L);
        f.values[0][i] = std::exp(-0.5 * dx * dx / (w0 * w0)) /
                         (w0 * std::sqrt(2.0 * M_PI));
    }
    PdeConfig cfg{dt, t_end};
    GridField out = solve(f, table, cfg, {t_end}).front();

    const double w2 = w0 * w0 + sigma * sigma * t_end;
    double err2 = 0.0;
    for (int i = 0; i < nodes; ++i) {
        double exact = 0.0;
        for (int img = -2; img <= 2; ++img) {
            double dx = (i + 0.5) * h - 0.5 * L + img * L;
            exact += std::exp(-0.5 * dx * dx / w2) / std::sqrt(2.0 * M_PI * w2);
        }
        double d = out.values[0][i] - exact;
        err2 += d * d;
    }
    return std::sqrt(err2 * h);
}

RegressionResult check_pde_diffusion_order() {
    const double t_end = 0.01, dt = 1e-6;
    double e1 = diffusion_l2_error(64, t_end, dt);
    double e2 = diffusion_l2_error(128, t_end, dt);
    double ratio = e1 / e2;
    return {"pde_diffusion_order", ratio >= 3.5 && ratio <= 4.5,
            "refinement ratio " + fmt(ratio)};
}

RegressionResult check_pde_ode_equivalence() {
    Scenario sc = homogeneous_scenario();
    GridField s0 = build_initial(sc, 64);
    PdeConfig cfg{2e-7, 0.05};
    GridField fin = solve(s0, sc.table, cfg, {cfg.t_end}).front();
    std::vector<double> hom(sc.table.species_count());
    for (int r = 0; r < sc.table.species_count(); ++r) hom[r] = s0.values[r][0];
    std::vector<double> ode = ode_oracle(sc.table, hom, cfg.t_end);
    double worst = 0.0;
    for (int r = 0; r < sc.table.species_count(); ++r)
        for (double v : fin.values[r])
            worst = std::max(worst, std::abs(v - ode[r]));
    return {"pde_ode_equivalence", worst <= 1e-8, "max node deviation " + fmt(worst)};
}

SpeciesTable random_valid_table(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int R = 2 + static_cast<int>(rng() % 2);
    SpeciesTable t;
    t.masses.resize(R);
    t.masses[0] = 1;
    for (int r = 1; r < R; ++r) t.masses[r] = t.masses[r - 1] + 1 + rng() % 3;
    t.sigma.assign(R, 0.5 + unif(rng));
    t.velocity.resize(R);
    t.rate_spec.kind = CollisionRateSpec::Kind::ConstantMatrix;
    t.rate_spec.a.assign(R, std::vector<double>(R, 0.0));
    for (int r = 0; r < R; ++r)
        for (int q = r; q < R; ++q)
            t.rate_spec.a[r][q] = t.rate_spec.a[q][r] = unif(rng);
    t.frag = FragTable::zeros(R);
    for (int r = 0; r < R; ++r)
        for (int q = 0; q < R; ++q) {
            // random partition of m_r into product masses
            std::int64_t remaining = t.masses[r];
            while (remaining > 0) {
                int l = static_cast<int>(rng() % R);
                if (t.masses[l] > remaining) l = 0;  // mass-1 always fits
                t.frag.e[r][q][l]++;
                remaining -= t.masses[l];
            }
        }
    t.rate_cutoff = 5.0;
    ValidationReport rep = validate_species_table(t);
    if (!rep.ok()) throw std::logic_error("random table invalid: " + rep.joined());
    return t;
}

RegressionResult check_reaction_mass(int tables) {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int c = 0; c < tables; ++c) {
        SpeciesTable t = random_valid_table(rng);
        GridField f(1, 64, 1.0, t.species_count());
        for (auto& v : f.values)
            for (double& x : v) x = unif(rng);
        double before = mass_functional(f, t);
        ClipStats clips;
        pde_step(f, t, 0.0, 1e-5, clips);
        double after = mass_functional(f, t);
        worst = std::max(worst, std::abs(after - before) / before);
    }
    return {"reaction_mass_conservation", worst <= 1e-12,
            "worst relative mass drift " + fmt(worst)};
}

// mean species-2 particle fraction at t_end over replicas
std::pair<double, double> shatter_fraction_stats(const Scenario& sc,
                                                 std::int64_t atoms, double dt,
                                                 int replicas,
                                                 std::uint64_t seed_base) {
    GridField s0 = build_initial(sc, 64);
    std::vector<double> fractions;
    for (int rep = 0; rep < replicas; ++rep) {
        ParticleState st = sample_initial_state(sc.table, s0, atoms,
                                                replica_seed(seed_base, 2 * rep));
        GaussKernel w{1, sc.scaling.with_atoms(st.atoms).alpha()};
        StepConfig cfg;
        cfg.dt = dt;
        cfg.seed = replica_seed(seed_base, 2 * rep + 1);
        std::vector<ParticleState> snaps =
            run(st, sc.table, w, cfg, sc.t_end, {sc.t_end});
        const ParticleState& fin = snaps.back();
        fractions.push_back(static_cast<double>(fin.count(1)) /
                            static_cast<double>(fin.atoms));
    }
    double mean = std::accumulate(fractions.begin(), fractions.end(), 0.0) /
                  fractions.size();
    double var = 0.0;
    for (double f : fractions) var += (f - mean) * (f - mean);
    var /= (fractions.size() - 1);
    return {mean, std::sqrt(var / fractions.size())};
}

RegressionResult check_dt_halving() {
    Scenario sc = homogeneous_scenario();
    sc.t_end = 0.5;
    const int reps = 10;
    auto [m1, se1] = shatter_fraction_stats(sc, 1000, 2e-3, reps, 101);
    auto [m2, se2] = shatter_fraction_stats(sc, 1000, 1e-3, reps, 202);
    double diff = std::abs(m1 - m2);
    double se = std::sqrt(se1 * se1 + se2 * se2);
    return {"dt_halving", diff <= 3.0 * se,
            "mean shift " + fmt(diff) + " vs pooled SE " + fmt(se)};
}

RegressionResult check_fluctuation_scaling() {
    SpeciesTable table = diffusion_only_table(1.0);
    Scenario sc;
    sc.table = table;
    sc.scaling = ScalingParams{1, 0.2, 0.3, 0};
    sc.box_length = 1.0;
    sc.initial.kind = InitialSpec::Kind::Uniform;
    sc.initial.densities = {1.0};
    GridField s0 = build_initial(sc, 64);
    TestDictionary dict = TestDictionary::standard(1.0, 2, 2);
    const std::size_t probe = 1;  // a cosine mode
    const double t_end = 0.05, dt = 1e-3;

    auto variance_at = [&](std::int64_t atoms, std::uint64_t seed) {
        std::vector<double> vals;
        for (int rep = 0; rep < 30; ++rep) {
            ParticleState st = sample_initial_state(table, s0, atoms,
                                                    replica_seed(seed, 2 * rep));
            GaussKernel w{1, sc.scaling.with_atoms(st.atoms).alpha()};
            StepConfig cfg;
            cfg.dt = dt;
            cfg.seed = replica_seed(seed, 2 * rep + 1);
            std::vector<ParticleState> snaps = run(st, table, w, cfg, t_end, {t_end});
            vals.push_back(pair_empirical(snaps.back(), 0, dict, probe));
        }
        return fluctuation_variance(vals);
    };
    double v1 = variance_at(500, 11);
    double v2 = variance_at(2000, 22);
    double ratio = v1 / v2;
    return {"fluctuation_scaling", ratio >= 2.5 && ratio <= 6.0,
            "variance ratio N vs 4N: " + fmt(ratio)};
}

}  // namespace

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t counter) {
    return mix_seed(master, counter);
}

ConvergenceReport run_study(const Scenario& sc, const StudyOptions& opt) {
    ValidationReport rep = validate_scenario(sc);
    if (!rep.ok()) throw std::runtime_error("invalid scenario: " + rep.joined());
    if (sc.scaling.dim != 1)
        throw std::runtime_error("studies are implemented for d = 1");

    Scenario scv = sc;
    ValidationReport tv = validate_species_table(scv.table);  // realize e_hat
    if (!tv.ok()) throw std::runtime_error(tv.joined());

    const int nodes = resolve_grid_nodes(scv, scv.n_sweep.back());
    GridField s0 = build_initial(scv, nodes);
    std::vector<double> times = snapshot_times(scv);
    PdeConfig pcfg{scv.dt_pde, scv.t_end};
    std::vector<GridField> pde_snaps = solve(s0, scv.table, pcfg, times);
    TestDictionary dict = TestDictionary::standard(scv.box_length);

    ConvergenceReport report;
    report.species = scv.table.species_count();

    for (std::size_t ni = 0; ni < scv.n_sweep.size(); ++ni) {
        const std::int64_t n = scv.n_sweep[ni];
        auto t0 = std::chrono::steady_clock::now();
        std::vector<ReplicaResult> results(scv.replicas);

        auto job = [&](int rep_idx) {
            std::uint64_t counter =
                2 * (ni * static_cast<std::size_t>(scv.replicas) + rep_idx);
            results[rep_idx] = run_replica(
                scv, n, replica_seed(scv.master_seed, counter),
                replica_seed(scv.master_seed, counter + 1), s0, pde_snaps, times,
                dict);
        };
        const int workers = std::max(1, opt.workers);
        if (workers == 1) {
            for (int r = 0; r < scv.replicas; ++r) job(r);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&, w]() {
                    for (int r = w; r < scv.replicas; r += workers) job(r);
                });
            for (auto& th : pool) th.join();
        }
        auto t1 = std::chrono::steady_clock::now();

        ConvergenceReport::Aggregate agg;
        agg.n_requested = n;
        agg.alpha_hat = scv.scaling.with_atoms(n).alpha_hat();
        agg.replicas = scv.replicas;
        double sum_max = 0.0, sum_sq = 0.0, sum_d = 0.0, sum_mean = 0.0,
               sum_clip = 0.0;
        std::size_t row_count = 0;
        for (int r = 0; r < scv.replicas; ++r) {
            const ReplicaResult& res = results[r];
            double max_d2 = 0.0, mean_d2 = 0.0;
            for (const DistanceRecord& rec : res.records) {
                double total = std::accumulate(rec.d2.begin(), rec.d2.end(), 0.0);
                max_d2 = std::max(max_d2, total);
                mean_d2 += total;
                sum_d += rec.metric_d;
                ++row_count;

                StudyRow row;
                row.n = res.atoms;
                row.replica = r;
                row.t = rec.t;
                row.d2 = rec.d2;
                row.d_est = rec.metric_d;
                row.mass = rec.mass_total;
                row.clip_frac = rec.clip_frac;
                report.rows.push_back(std::move(row));
            }
            mean_d2 /= res.records.size();
            sum_max += max_d2;
            sum_sq += max_d2 * max_d2;
            sum_mean += mean_d2;
            sum_clip += res.records.back().clip_frac;
        }
        agg.mean_max_d2 = sum_max / scv.replicas;
        if (scv.replicas >= 2) {
            double var = (sum_sq - scv.replicas * agg.mean_max_d2 * agg.mean_max_d2) /
                         (scv.replicas - 1);
            agg.stderr_max_d2 = std::sqrt(std::max(var, 0.0) / scv.replicas);
            agg.stderr_ok = true;
        }
        agg.mean_d_est = sum_d / static_cast<double>(row_count);
        agg.mean_snap_d2 = sum_mean / scv.replicas;
        agg.clip_frac = sum_clip / scv.replicas;
        agg.wall_s = std::chrono::duration<double>(t1 - t0).count();
        report.per_n.push_back(agg);
    }

    if (!opt.out_dir.empty()) {
        std::filesystem::create_directories(opt.out_dir);
        write_file(std::filesystem::path(opt.out_dir) / "report.csv",
                   report_csv(report));
        write_file(std::filesystem::path(opt.out_dir) / "summary.json",
                   summary_json(scv, report));
    }
    return report;
}

std::vector<DistanceRecord> run_single(const Scenario& sc, std::int64_t atoms,
                                       const StudyOptions& opt) {
    ValidationReport rep = validate_scenario(sc);
    if (!rep.ok()) throw std::runtime_error("invalid scenario: " + rep.joined());

    Scenario scv = sc;
    ValidationReport tv = validate_species_table(scv.table);
    if (!tv.ok()) throw std::runtime_error(tv.joined());

    const int nodes = resolve_grid_nodes(scv, atoms);
    GridField s0 = build_initial(scv, nodes);
    std::vector<double> times = snapshot_times(scv);
    PdeConfig pcfg{scv.dt_pde, scv.t_end};
    std::vector<GridField> pde_snaps = solve(s0, scv.table, pcfg, times);
    TestDictionary dict = TestDictionary::standard(scv.box_length);

    ScalingParams scaling = scv.scaling.with_atoms(atoms);
    GaussKernel w{scv.scaling.dim, scaling.alpha()};
    ParticleState st = sample_initial_state(scv.table, s0, atoms,
                                            replica_seed(scv.master_seed, 0));
    GaussKernel w_hat{scv.scaling.dim,
                      scv.scaling.with_atoms(st.atoms).alpha_hat()};
    StepConfig cfg;
    cfg.dt = scv.dt;
    cfg.seed = replica_seed(scv.master_seed, 1);
    std::vector<ParticleState> snaps = run(st, scv.table, w, cfg, scv.t_end, times);

    std::vector<DistanceRecord> records;
    for (std::size_t i = 0; i < snaps.size(); ++i)
        records.push_back(
            distance_record(snaps[i], scv.table, pde_snaps[i], w_hat, dict));

    if (!opt.out_dir.empty()) {
        std::filesystem::create_directories(opt.out_dir);
        ConvergenceReport tmp;
        tmp.species = scv.table.species_count();
        for (std::size_t i = 0; i < records.size(); ++i) {
            StudyRow row;
            row.n = snaps[i].atoms;
            row.replica = 0;
            row.t = records[i].t;
            row.d2 = records[i].d2;
            row.d_est = records[i].metric_d;
            row.mass = records[i].mass_total;
            row.clip_frac = records[i].clip_frac;
            tmp.rows.push_back(std::move(row));
        }
        write_file(std::filesystem::path(opt.out_dir) / "records.csv",
                   report_csv(tmp));
        if (opt.dump_particles)
            for (std::size_t i = 0; i < snaps.size(); ++i)
                dump_particles_csv(std::filesystem::path(opt.out_dir) /
                                       ("particles_" + std::to_string(i) + ".csv"),
                                   snaps[i]);
    }
    return records;
}

std::vector<std::string> regression_check_names() {
    return {"kernel_normalization", "kernel_decay",        "cell_list_exactness",
            "pde_diffusion_order",  "pde_ode_equivalence", "reaction_mass_conservation",
            "dt_halving",           "fluctuation_scaling"};
}

std::vector<RegressionResult> run_regressions(const std::vector<std::string>& checks,
                                              unsigned fault_mask) {
    std::vector<RegressionResult> out;
    if (checks.empty()) {
        out.push_back({"vacuous", true, "warning: no checks requested"});
        return out;
    }
    for (const std::string& name : checks) {
        if (name == "kernel_normalization")
            out.push_back(check_kernel_normalization(fault_mask & 1u));
        else if (name == "kernel_decay")
            out.push_back(check_kernel_decay());
        else if (name == "cell_list_exactness")
            out.push_back(check_cell_list(20, 500));
        else if (name == "pde_diffusion_order")
            out.push_back(check_pde_diffusion_order());
        else if (name == "pde_ode_equivalence")
            out.push_back(check_pde_ode_equivalence());
        else if (name == "reaction_mass_conservation")
            out.push_back(check_reaction_mass(20));
        else if (name == "dt_halving")
            out.push_back(check_dt_halving());
        else if (name == "fluctuation_scaling")
            out.push_back(check_fluctuation_scaling());
        else
            out.push_back({name, false, "unknown check"});
    }
    return out;
}

std::string report_csv(const ConvergenceReport& rep) {
    std::string text = "N,replica,t";
    for (int r = 0; r < rep.species; ++r) text += ",d2_" + std::to_string(r + 1);
    text += ",D_est,mass,clip_frac\n";
    for (const StudyRow& row : rep.rows) {
        text += std::to_string(row.n) + "," + std::to_string(row.replica) + "," +
                fmt(row.t);
        for (double v : row.d2) text += "," + fmt(v);
        text += "," + fmt(row.d_est) + "," + std::to_string(row.mass) + "," +
                fmt(row.clip_frac) + "\n";
    }
    return text;
}

std::string summary_json(const Scenario& sc, const ConvergenceReport& rep) {
    nlohmann::json j;
    j["scenario"] = sc.name;
    j["schema_version"] = sc.schema_version;
    j["master_seed"] = sc.master_seed;
    j["dt"] = sc.dt;
    j["t_end"] = sc.t_end;
    j["snapshots"] = sc.snapshots;
    j["replicas"] = sc.replicas;
    j["metric_note"] = "D_est is a finite-dictionary lower bound";
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["generated_at"] = buf;

    nlohmann::json per_n = nlohmann::json::array();
    for (std::size_t ni = 0; ni < rep.per_n.size(); ++ni) {
        const auto& a = rep.per_n[ni];
        nlohmann::json ja;
        ja["N"] = a.n_requested;
        ja["alpha_hat"] = a.alpha_hat;
        ja["replicas"] = a.replicas;
        ja["mean_max_d2"] = a.mean_max_d2;
        ja["stderr_max_d2"] = a.stderr_max_d2;
        ja["stderr_valid"] = a.stderr_ok;
        ja["mean_snapshot_d2"] = a.mean_snap_d2;  // cadence sensitivity
        ja["mean_D_est"] = a.mean_d_est;
        ja["clip_fraction"] = a.clip_frac;
        ja["clip_fraction_ok"] = a.clip_frac <= sc.clip_threshold;
        ja["wall_seconds"] = a.wall_s;
        nlohmann::json seeds = nlohmann::json::array();
        for (int r = 0; r < a.replicas; ++r) {
            std::uint64_t counter =
                2 * (ni * static_cast<std::size_t>(sc.replicas) + r);
            seeds.push_back({{"replica", r},
                             {"sample_seed", replica_seed(sc.master_seed, counter)},
                             {"run_seed", replica_seed(sc.master_seed, counter + 1)}});
        }
        ja["seeds"] = seeds;
        per_n.push_back(ja);
    }
    j["per_N"] = per_n;
    return j.dump(2) + "\n";
}

}  // namespace smolsim
