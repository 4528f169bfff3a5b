#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smolsim/harness.hpp"

namespace {

smolsim::Scenario load_with_overrides(const std::string& path, bool has_seed,
                                      std::uint64_t seed, int snapshots) {
    smolsim::Scenario sc = smolsim::load_scenario(path);
    if (has_seed) sc.master_seed = seed;
    if (snapshots > 0) sc.snapshots = snapshots;
    return sc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shattering-particle simulator and convergence harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int workers = 1, snapshots = 0;
    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("config", config_path, "JSON scenario config")
                ->required()
                ->check(CLI::ExistingFile);
        cmd->add_option("--seed", seed, "master seed override")
            ->each([&](const std::string&) { has_seed = true; });
        cmd->add_option("--workers", workers, "replica worker threads");
        cmd->add_option("--out-dir", out_dir, "output directory");
        cmd->add_option("--snapshots", snapshots, "snapshot count override");
    };

    CLI::App* validate = app.add_subcommand("validate", "check a scenario config");
    add_common(validate, true);

    CLI::App* single = app.add_subcommand("run-single", "one replica with dumps");
    std::int64_t atoms = 0;
    bool dump = false;
    add_common(single, true);
    single->add_option("--n", atoms, "atom count (default: first sweep entry)");
    single->add_flag("--dump-particles", dump, "write particle CSV per snapshot");

    CLI::App* study = app.add_subcommand("study", "N-sweep convergence study");
    add_common(study, true);

    CLI::App* regress = app.add_subcommand("regress", "built-in regression suite");
    std::vector<std::string> checks = smolsim::regression_check_names();
    unsigned fault_mask = 0;
    regress->add_option("--checks", checks, "subset of checks to run")
        ->expected(0, -1);
    regress->add_option("--fault-mask", fault_mask,
                        "test hook: inject faults into checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            smolsim::Scenario sc =
                load_with_overrides(config_path, has_seed, seed, snapshots);
            smolsim::ValidationReport rep = smolsim::validate_scenario(sc);
            if (rep.ok()) {
                std::printf("OK: %s\n", sc.name.c_str());
                return 0;
            }
            for (const std::string& issue : rep.issues)
                std::fprintf(stderr, "invalid: %s\n", issue.c_str());
            return 1;
        }
        if (single->parsed()) {
            smolsim::Scenario sc =
                load_with_overrides(config_path, has_seed, seed, snapshots);
            smolsim::StudyOptions opt;
            opt.out_dir = out_dir;
            opt.workers = workers;
            opt.dump_particles = dump;
            std::int64_t n = atoms > 0 ? atoms : sc.n_sweep.front();
            auto records = smolsim::run_single(sc, n, opt);
            std::printf("%zu snapshots, final mass %lld, final clip fraction %g\n",
                        records.size(),
                        static_cast<long long>(records.back().mass_total),
                        records.back().clip_frac);
            return 0;
        }
        if (study->parsed()) {
            smolsim::Scenario sc =
                load_with_overrides(config_path, has_seed, seed, snapshots);
            smolsim::StudyOptions opt;
            opt.out_dir = out_dir;
            opt.workers = workers;
            smolsim::ConvergenceReport rep = smolsim::run_study(sc, opt);
            for (const auto& a : rep.per_n)
                std::printf("N=%lld mean_max_d2=%.6g stderr=%.6g D_est=%.6g "
                            "clip=%.3g wall=%.1fs\n",
                            static_cast<long long>(a.n_requested), a.mean_max_d2,
                            a.stderr_max_d2, a.mean_d_est, a.clip_frac, a.wall_s);
            return 0;
        }
        if (regress->parsed()) {
            auto results = smolsim::run_regressions(checks, fault_mask);
            bool all = true;
            for (const auto& r : results) {
                std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                            r.detail.c_str());
                all = all && r.pass;
            }
            return all ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
