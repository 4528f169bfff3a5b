#include "smolsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace smolsim {

namespace {

using nlohmann::json;

SpeciesTable binary_shatter_table(double rate, double cutoff) {
    SpeciesTable t;
    t.masses = {1, 2};
    t.sigma = {1.0, 1.0};
    t.velocity.resize(2);
    t.rate_spec = CollisionRateSpec::constant(2, rate);
    t.frag = FragTable::zeros(2);
    // species 1 is inert (identity channels); species 2 shatters into two 1s
    for (int q = 0; q < 2; ++q) {
        t.frag.e[0][q][0] = 1;
        t.frag.e[1][q][0] = 2;
    }
    t.rate_cutoff = cutoff;
    ValidationReport rep = validate_species_table(t);
    if (!rep.ok()) throw std::logic_error("built-in table invalid: " + rep.joined());
    return t;
}

VelocityField parse_velocity(const json& jv) {
    VelocityField v;
    std::string kind = jv.value("kind", "zero");
    if (kind == "zero") {
        v.kind = VelocityField::Kind::Zero;
    } else if (kind == "constant") {
        v.kind = VelocityField::Kind::Constant;
        auto u = jv.at("u").get<std::vector<double>>();
        for (std::size_t c = 0; c < u.size() && c < 3; ++c) v.u[c] = u[c];
    } else if (kind == "rotational") {
        v.kind = VelocityField::Kind::Rotational;
        v.omega = jv.at("omega").get<double>();
        auto c = jv.at("center").get<std::vector<double>>();
        for (std::size_t i = 0; i < c.size() && i < 3; ++i) v.center[i] = c[i];
    } else {
        throw std::runtime_error("unknown velocity kind: " + kind);
    }
    return v;
}

}  // namespace

Scenario default_shatter_scenario() {
    Scenario sc;
    sc.name = "shatter_bump_d1";
    sc.table = binary_shatter_table(1.0, 5.0);
    sc.scaling = ScalingParams{1, 0.1, 0.3, 0};
    sc.box_length = 10.0;
    sc.initial.kind = InitialSpec::Kind::GaussianBump;
    sc.initial.bump_species = 1;  // all mass starts in species 2
    sc.initial.bump_center = 5.0;
    sc.initial.bump_width = 1.0;
    sc.initial.bump_mass = 0.5;  // times m = 2 gives unit mass functional
    sc.n_sweep = {1000, 4000, 16000};
    sc.replicas = 30;
    sc.dt = 1e-3;
    sc.t_end = 1.0;
    sc.dt_pde = 5e-5;  // diffusion CFL on the auto grid at N = 16000
    sc.snapshots = 20;
    return sc;
}

Scenario homogeneous_scenario() {
    Scenario sc;
    sc.name = "shatter_homogeneous_d1";
    sc.table = binary_shatter_table(1.0, 5.0);
    // large beta keeps the interaction range usable at desk-scale N; the
    // homogeneous comparison does not depend on the kernel width
    sc.scaling = ScalingParams{1, 0.7, 0.3, 0};
    sc.box_length = 1.0;
    sc.initial.kind = InitialSpec::Kind::Uniform;
    sc.initial.densities = {0.0, 0.5};
    sc.n_sweep = {10000};
    sc.replicas = 30;
    sc.dt = 1e-3;
    sc.t_end = 1.0;
    sc.dt_pde = 1e-4;
    sc.snapshots = 20;
    return sc;
}

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
    }
    int version = j.value("schema_version", 0);
    if (version != 1)
        throw std::runtime_error("unsupported schema_version " +
                                 std::to_string(version) + " (expected 1)");

    Scenario sc;
    sc.schema_version = version;
    sc.name = j.value("name", "unnamed");
    sc.scaling.dim = j.value("dim", 1);
    sc.box_length = j.at("box_length").get<double>();
    sc.scaling.beta = j.at("beta").get<double>();
    sc.scaling.beta_hat = j.at("beta_hat").get<double>();
    sc.grid_nodes = j.value("grid_nodes", 0);

    const json& sp = j.at("species");
    sc.table.masses = sp.at("masses").get<std::vector<std::int64_t>>();
    sc.table.sigma = sp.at("sigma").get<std::vector<double>>();
    const int R = static_cast<int>(sc.table.masses.size());
    sc.table.velocity.resize(R);
    if (sp.contains("velocity")) {
        const json& jv = sp.at("velocity");
        if (static_cast<int>(jv.size()) != R)
            throw std::runtime_error("velocity list size does not match species");
        for (int r = 0; r < R; ++r) sc.table.velocity[r] = parse_velocity(jv[r]);
    }
    sc.table.rate_cutoff = sp.value("rate_cutoff", 1.0);

    const json& jr = sp.at("rates");
    std::string rkind = jr.value("kind", "constant");
    if (rkind == "constant") {
        sc.table.rate_spec =
            CollisionRateSpec::constant(R, jr.at("value").get<double>());
    } else if (rkind == "matrix") {
        sc.table.rate_spec.kind = CollisionRateSpec::Kind::ConstantMatrix;
        sc.table.rate_spec.a = jr.at("a").get<std::vector<std::vector<double>>>();
    } else if (rkind == "cross_section") {
        sc.table.rate_spec.kind = CollisionRateSpec::Kind::CrossSection;
        sc.table.rate_spec.radii = jr.at("radii").get<std::vector<double>>();
        const json& jg = jr.at("speed_law");
        std::string gk = jg.value("kind", "constant");
        if (gk == "constant") {
            sc.table.rate_spec.speed_law.kind = SpeedLaw::Kind::Constant;
            sc.table.rate_spec.speed_law.value = jg.at("value").get<double>();
        } else if (gk == "linear") {
            sc.table.rate_spec.speed_law.kind = SpeedLaw::Kind::Linear;
            sc.table.rate_spec.speed_law.value = jg.at("value").get<double>();
        } else if (gk == "table") {
            sc.table.rate_spec.speed_law.kind = SpeedLaw::Kind::Table;
            sc.table.rate_spec.speed_law.knots_s =
                jg.at("s").get<std::vector<double>>();
            sc.table.rate_spec.speed_law.knots_g =
                jg.at("g").get<std::vector<double>>();
        } else {
            throw std::runtime_error("unknown speed law kind: " + gk);
        }
    } else {
        throw std::runtime_error("unknown rates kind: " + rkind);
    }

    // fragmentation as 1-based (r, q, l, count) entries
    sc.table.frag = FragTable::zeros(R);
    for (const json& entry : sp.at("fragmentation")) {
        if (entry.size() != 4)
            throw std::runtime_error("fragmentation entries are [r, q, l, count]");
        int r = entry[0].get<int>(), q = entry[1].get<int>(), l = entry[2].get<int>();
        if (r < 1 || q < 1 || l < 1 || r > R || q > R || l > R)
            throw std::runtime_error("fragmentation index out of range");
        sc.table.frag.e[r - 1][q - 1][l - 1] = entry[3].get<std::int64_t>();
    }

    const json& ji = j.at("initial");
    std::string ikind = ji.value("kind", "uniform");
    if (ikind == "uniform") {
        sc.initial.kind = InitialSpec::Kind::Uniform;
        sc.initial.densities = ji.at("densities").get<std::vector<double>>();
        if (static_cast<int>(sc.initial.densities.size()) != R)
            throw std::runtime_error("uniform densities do not match species count");
    } else if (ikind == "gaussian_bump") {
        sc.initial.kind = InitialSpec::Kind::GaussianBump;
        sc.initial.bump_species = ji.at("species").get<int>() - 1;
        sc.initial.bump_center = ji.at("center").get<double>();
        sc.initial.bump_width = ji.at("width").get<double>();
        sc.initial.bump_mass = ji.value("mass", 1.0);
        if (sc.initial.bump_species < 0 || sc.initial.bump_species >= R)
            throw std::runtime_error("bump species out of range");
    } else {
        throw std::runtime_error("unknown initial kind: " + ikind);
    }

    if (j.contains("study")) {
        const json& js = j.at("study");
        sc.n_sweep = js.value("n_sweep", sc.n_sweep);
        sc.replicas = js.value("replicas", sc.replicas);
        sc.dt = js.value("dt", sc.dt);
        sc.t_end = js.value("t_end", sc.t_end);
        sc.dt_pde = js.value("dt_pde", sc.dt_pde);
        sc.snapshots = js.value("snapshots", sc.snapshots);
        sc.master_seed = js.value("seed", sc.master_seed);
        sc.clip_threshold = js.value("clip_threshold", sc.clip_threshold);
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

ValidationReport validate_scenario(const Scenario& sc) {
    ValidationReport rep;
    Scenario copy = sc;  // validate_species_table mutates (recomputes e_hat)
    ValidationReport tab = validate_species_table(copy.table);
    for (const std::string& s : tab.issues) rep.fail(s);

    ValidationReport sca =
        validate_scaling(sc.scaling.dim, sc.scaling.beta, sc.scaling.beta_hat);
    for (const std::string& s : sca.issues) rep.fail(s);

    if (!(sc.box_length > 0.0)) rep.fail("box_length must be positive");
    if (sc.n_sweep.empty()) rep.fail("n_sweep is empty");
    for (std::size_t i = 0; i + 1 < sc.n_sweep.size(); ++i)
        if (sc.n_sweep[i] >= sc.n_sweep[i + 1])
            rep.fail("n_sweep must be strictly increasing");
    for (std::int64_t n : sc.n_sweep)
        if (n < 1) rep.fail("n_sweep entries must be >= 1");
    if (sc.replicas < 1) rep.fail("replicas must be >= 1");
    if (!(sc.dt > 0.0)) rep.fail("dt must be positive");
    if (!(sc.dt_pde > 0.0)) rep.fail("dt_pde must be positive");
    if (!(sc.t_end >= 0.0)) rep.fail("t_end must be nonnegative");
    if (sc.snapshots < 1) rep.fail("snapshots must be >= 1");

    const int R = sc.table.species_count();
    double cap = 0.1;  // default StepConfig event-probability cap
    if (sc.dt * R * sc.table.rate_cutoff > cap)
        rep.fail("dt * R * C_a exceeds the event probability cap " +
                 std::to_string(cap));

    if (sc.initial.kind == InitialSpec::Kind::Uniform &&
        static_cast<int>(sc.initial.densities.size()) != R)
        rep.fail("uniform densities do not match species count");
    if (sc.initial.kind == InitialSpec::Kind::GaussianBump &&
        (sc.initial.bump_species < 0 || sc.initial.bump_species >= R))
        rep.fail("bump species out of range");
    return rep;
}

GridField build_initial(const Scenario& sc, int nodes) {
    const int R = sc.table.species_count();
    GridField f(sc.scaling.dim, nodes, sc.box_length, R);
    switch (sc.initial.kind) {
        case InitialSpec::Kind::Uniform:
            for (int r = 0; r < R; ++r)
                std::fill(f.values[r].begin(), f.values[r].end(),
                          sc.initial.densities[r]);
            break;
        case InitialSpec::Kind::GaussianBump: {
            if (sc.scaling.dim != 1)
                throw std::runtime_error("gaussian_bump initial data is d = 1 only");
            const double h = f.spacing();
            const double w = sc.initial.bump_width;
            const double norm = sc.initial.bump_mass / (w * std::sqrt(2.0 * M_PI));
            PeriodicBox box{1, sc.box_length};
            std::vector<double>& v = f.values[sc.initial.bump_species];
            for (int i = 0; i < nodes; ++i) {
                double dx = box.min_image((i + 0.5) * h - sc.initial.bump_center);
                v[i] = norm * std::exp(-0.5 * dx * dx / (w * w));
            }
            break;
        }
        case InitialSpec::Kind::Grid:
            if (sc.initial.grid.nodes_per_axis != nodes)
                throw std::runtime_error("grid initial data resolution mismatch");
            f = sc.initial.grid;
            break;
    }
    double total = 0.0;
    for (int r = 0; r < R; ++r) total += sc.table.masses[r] * f.integral(r);
    if (total <= 0.0) throw std::runtime_error("initial data has zero total mass");
    for (int r = 0; r < R; ++r)
        for (double& v : f.values[r]) v /= total;
    return f;
}

int resolve_grid_nodes(const Scenario& sc, std::int64_t max_atoms) {
    if (sc.grid_nodes > 0) return sc.grid_nodes;
    double alpha_hat = sc.scaling.with_atoms(max_atoms).alpha_hat();
    // spacing <= 1/(4 alpha_hat)
    int n = static_cast<int>(std::ceil(4.0 * alpha_hat * sc.box_length));
    return std::max(n, 16);
}

}  // namespace smolsim
