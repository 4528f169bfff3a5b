#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "smolsim/harness.hpp"

using namespace smolsim;
namespace fs = std::filesystem;

namespace {

Scenario small_study() {
    Scenario sc = default_shatter_scenario();
    sc.n_sweep = {200};
    sc.replicas = 2;
    sc.t_end = 0.05;
    sc.snapshots = 2;
    return sc;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("smolsim_test_" + tag);
    fs::remove_all(p);
    return p;
}

const char* kConfigJson = R"({
  "schema_version": 1,
  "name": "cfg_roundtrip",
  "dim": 1,
  "box_length": 10.0,
  "beta": 0.1,
  "beta_hat": 0.3,
  "species": {
    "masses": [1, 2],
    "sigma": [1.0, 1.0],
    "rates": {"kind": "constant", "value": 1.0},
    "rate_cutoff": 5.0,
    "fragmentation": [[1, 1, 1, 1], [1, 2, 1, 1], [2, 1, 1, 2], [2, 2, 1, 2]]
  },
  "initial": {"kind": "gaussian_bump", "species": 2, "center": 5.0,
              "width": 1.0, "mass": 0.5},
  "study": {"n_sweep": [500, 1000], "replicas": 3, "dt": 0.001,
            "t_end": 0.25, "dt_pde": 0.0001, "snapshots": 5, "seed": 42}
})";

}  // namespace

TEST_CASE("replica seed splitting") {
    CHECK(replica_seed(1, 0) == replica_seed(1, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t master : {1ull, 2ull, 99ull})
        for (std::uint64_t c = 0; c < 50; ++c) seen.insert(replica_seed(master, c));
    CHECK(seen.size() == 150);  // no collisions across masters and counters
}

TEST_CASE("report csv layout") {
    ConvergenceReport rep;
    rep.species = 2;
    StudyRow row;
    row.n = 1000;
    row.replica = 3;
    row.t = 0.5;
    row.d2 = {1.25e-3, 2.5e-4};
    row.d_est = 0.01;
    row.mass = 1000;
    row.clip_frac = 0.0;
    rep.rows.push_back(row);
    std::string csv = report_csv(rep);
    CHECK(csv == "N,replica,t,d2_1,d2_2,D_est,mass,clip_frac\n"
                 "1000,3,0.5,0.00125,0.00025,0.01,1000,0\n");
}

TEST_CASE("convergence study end to end") {
    Scenario sc = small_study();
    fs::path dir = fresh_dir("study");
    StudyOptions opt;
    opt.out_dir = dir.string();
    ConvergenceReport rep = run_study(sc, opt);

    SUBCASE("row and aggregate bookkeeping") {
        REQUIRE(rep.per_n.size() == 1);
        CHECK(rep.species == 2);
        CHECK(rep.rows.size() == 2u * 3u);  // replicas x (snapshots + 1)
        for (const StudyRow& row : rep.rows) {
            CHECK(row.n == 200);  // atoms realized exactly and conserved
            CHECK(row.mass == 200);
            CHECK(row.d2.size() == 2);
            CHECK(row.clip_frac >= 0.0);
        }
        CHECK(rep.rows.front().t == 0.0);
        CHECK(rep.rows.back().t == doctest::Approx(0.05));
        const auto& agg = rep.per_n[0];
        CHECK(agg.n_requested == 200);
        CHECK(agg.replicas == 2);
        CHECK(agg.stderr_ok);
        CHECK(agg.mean_max_d2 > 0.0);
    }
    SUBCASE("artifacts on disk match the in-memory report") {
        CHECK(read_file(dir / "report.csv") == report_csv(rep));
        nlohmann::json j = nlohmann::json::parse(read_file(dir / "summary.json"));
        CHECK(j["scenario"] == sc.name);
        REQUIRE(j["per_N"].size() == 1);
        CHECK(j["per_N"][0]["N"] == 200);
        CHECK(j["per_N"][0]["seeds"].size() == 2);
        CHECK(j["per_N"][0]["seeds"][0]["sample_seed"] ==
              replica_seed(sc.master_seed, 0));
    }
    SUBCASE("reruns are byte-identical, also under threading") {
        StudyOptions quiet;
        ConvergenceReport again = run_study(sc, quiet);
        CHECK(report_csv(again) == report_csv(rep));
        StudyOptions threaded;
        threaded.workers = 4;
        ConvergenceReport par = run_study(sc, threaded);
        CHECK(report_csv(par) == report_csv(rep));
    }
    fs::remove_all(dir);
}

TEST_CASE("studies reject invalid scenarios before simulating") {
    Scenario sc = small_study();
    SUBCASE("scaling exponent out of window") {
        sc.scaling.beta = 0.2;  // >= beta_hat / (d + 1)
        CHECK_THROWS_AS(run_study(sc, {}), std::runtime_error);
    }
    SUBCASE("step size exceeds the event probability cap") {
        sc.dt = 0.02;  // dt * R * C_a = 0.2
        CHECK_THROWS_AS(run_study(sc, {}), std::runtime_error);
    }
    SUBCASE("unordered sweep") {
        sc.n_sweep = {400, 200};
        CHECK_THROWS_AS(run_study(sc, {}), std::runtime_error);
    }
}

TEST_CASE("single run artifacts") {
    Scenario sc = small_study();
    fs::path dir = fresh_dir("single");
    StudyOptions opt;
    opt.out_dir = dir.string();
    opt.dump_particles = true;

    SUBCASE("zero end time dumps the initial state once") {
        sc.t_end = 0.0;
        auto records = run_single(sc, 200, opt);
        REQUIRE(records.size() == 1);
        CHECK(records[0].t == 0.0);
        CHECK(fs::exists(dir / "records.csv"));
        CHECK(fs::exists(dir / "particles_0.csv"));
        CHECK_FALSE(fs::exists(dir / "particles_1.csv"));
    }
    SUBCASE("full trajectory record count") {
        auto records = run_single(sc, 200, opt);
        CHECK(records.size() == 3u);  // snapshots + initial state
        CHECK(fs::exists(dir / "particles_2.csv"));
        std::string head = read_file(dir / "particles_0.csv").substr(0, 11);
        CHECK(head == "species,x1\n");
    }
    fs::remove_all(dir);
}

TEST_CASE("regression check plumbing") {
    SUBCASE("empty request passes vacuously with a warning") {
        auto res = run_regressions({});
        REQUIRE(res.size() == 1);
        CHECK(res[0].pass);
        CHECK(res[0].detail.find("warning") != std::string::npos);
    }
    SUBCASE("fault injection makes the normalization check fail") {
        auto ok = run_regressions({"kernel_normalization"});
        REQUIRE(ok.size() == 1);
        CHECK(ok[0].pass);
        auto bad = run_regressions({"kernel_normalization"}, 1u);
        REQUIRE(bad.size() == 1);
        CHECK_FALSE(bad[0].pass);
    }
    SUBCASE("unknown names are reported as failures") {
        auto res = run_regressions({"no_such_check"});
        REQUIRE(res.size() == 1);
        CHECK_FALSE(res[0].pass);
    }
    SUBCASE("the built-in name list is exposed") {
        auto names = regression_check_names();
        CHECK(names.size() == 8);
    }
}

TEST_CASE("config parsing") {
    SUBCASE("round trip of the documented schema") {
        Scenario sc = parse_scenario(kConfigJson);
        CHECK(sc.name == "cfg_roundtrip");
        CHECK(sc.box_length == 10.0);
        CHECK(sc.scaling.beta == 0.1);
        CHECK(sc.table.masses == std::vector<std::int64_t>{1, 2});
        CHECK(sc.table.frag.e[1][0][0] == 2);  // 1-based [2,1,1,2]
        CHECK(sc.initial.kind == InitialSpec::Kind::GaussianBump);
        CHECK(sc.initial.bump_species == 1);
        CHECK(sc.n_sweep == std::vector<std::int64_t>{500, 1000});
        CHECK(sc.replicas == 3);
        CHECK(sc.master_seed == 42);
        CHECK(validate_scenario(sc).ok());
    }
    SUBCASE("malformed JSON is rejected") {
        CHECK_THROWS_AS(parse_scenario("{not json"), std::runtime_error);
    }
    SUBCASE("wrong schema version is rejected") {
        nlohmann::json j = nlohmann::json::parse(kConfigJson);
        j["schema_version"] = 2;
        CHECK_THROWS_AS(parse_scenario(j.dump()), std::runtime_error);
    }
    SUBCASE("fragmentation indices are 1-based and bounded") {
        nlohmann::json j = nlohmann::json::parse(kConfigJson);
        j["species"]["fragmentation"].push_back({0, 1, 1, 1});
        CHECK_THROWS_AS(parse_scenario(j.dump()), std::runtime_error);
    }
    SUBCASE("validation catches mass-violating fragmentation") {
        nlohmann::json j = nlohmann::json::parse(kConfigJson);
        j["species"]["fragmentation"] = {{1, 1, 1, 1}, {1, 2, 1, 1},
                                         {2, 1, 1, 1}, {2, 2, 1, 2}};
        Scenario sc = parse_scenario(j.dump());
        CHECK_FALSE(validate_scenario(sc).ok());
    }
}
