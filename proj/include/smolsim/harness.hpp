#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smolsim/observables.hpp"
#include "smolsim/pde.hpp"
#include "smolsim/scenario.hpp"

namespace smolsim {

struct StudyOptions {
    std::string out_dir;  // empty = keep results in memory only
    int workers = 1;
    bool dump_particles = false;
};

// One CSV row: a (N, replica, snapshot) distance record.
struct StudyRow {
    std::int64_t n = 0;  // effective atom count of the replica
    int replica = 0;
    double t = 0.0;
    std::vector<double> d2;
    double d_est = 0.0;
    std::int64_t mass = 0;
    double clip_frac = 0.0;
};

struct ConvergenceReport {
    struct Aggregate {
        std::int64_t n_requested = 0;
        double alpha_hat = 0.0;
        int replicas = 0;
        double mean_max_d2 = 0.0;    // mean over replicas of max-over-snapshots
        double stderr_max_d2 = 0.0;  // flagged invalid below 2 replicas
        bool stderr_ok = false;
        double mean_d_est = 0.0;
        double mean_snap_d2 = 0.0;  // cadence sensitivity: mean instead of max
        double clip_frac = 0.0;
        double wall_s = 0.0;
    };
    std::vector<StudyRow> rows;  // ordered by (N, replica, t)
    std::vector<Aggregate> per_n;
    int species = 0;
};

// N-sweep convergence study: one shared PDE trajectory per scenario, then
// particles + observables per (N, replica). Writes report.csv/summary.json
// into out_dir when set. Deterministic per (scenario, master seed); the
// CSV bytes contain no timestamps.
ConvergenceReport run_study(const Scenario& sc, const StudyOptions& opt);

// One replica at the given atom count; full trajectory artifacts
// (records.csv, optional particles_<k>.csv dumps) for inspection.
std::vector<DistanceRecord> run_single(const Scenario& sc, std::int64_t atoms,
                                       const StudyOptions& opt);

struct RegressionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Built-in check names accepted by run_regressions.
std::vector<std::string> regression_check_names();

// Bundled property checks. `checks` empty yields a vacuous pass with a
// warning entry. `fault_mask` is a test hook: bit 0 perturbs the kernel
// normalization so the corresponding check must fail.
std::vector<RegressionResult> run_regressions(const std::vector<std::string>& checks,
                                              unsigned fault_mask = 0);

// Fixed-column CSV serialization of study rows:
// N,replica,t,d2_1..d2_R,D_est,mass,clip_frac
std::string report_csv(const ConvergenceReport& rep);
std::string summary_json(const Scenario& sc, const ConvergenceReport& rep);

// counter-based split of the master seed (replica forensics)
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t counter);

}  // namespace smolsim
