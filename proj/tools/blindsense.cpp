// Command-line front end for the blind-sensing lab.
//
// Subcommands:
//   pswf    export the canonical concentration basis as CSV
//   landau  eigenvalue staircases and knee locations
//   phase   blind-decoding success vs measurement count
//   dims    dimension estimators (doubling, information dimension, occupancy)
//
// Every subcommand reads an optional key = value config file; individual
// flags override file values.  Exit codes: 0 all checks passed, 1 a
// tolerance check failed, 2 configuration or usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <blindsense/blindsense.hpp>

namespace {

struct Overrides {
    std::string config_path;
    std::optional<double> omega, omega_prime, horizon, nu, delta, sigma_e;
    std::optional<int> grid, max_subbands, trials;
    std::optional<std::vector<std::uint64_t>> seeds;
    std::optional<std::vector<int>> m_sweep;
    std::optional<std::string> out;
};

void add_common_options(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--config", ov.config_path, "key = value configuration file");
    cmd->add_option("--omega", ov.omega, "full band edge (rad/s)");
    cmd->add_option("--omega-prime", ov.omega_prime, "occupied-measure budget parameter");
    cmd->add_option("--horizon", ov.horizon, "observation window length");
    cmd->add_option("--nu", ov.nu, "oversampling margin");
    cmd->add_option("--delta", ov.delta, "allocation endpoint grid pitch");
    cmd->add_option("--grid", ov.grid, "time grid points");
    cmd->add_option("--max-subbands", ov.max_subbands, "sub-bands per allocation half");
    cmd->add_option("--sigma-e", ov.sigma_e, "measurement noise level");
    cmd->add_option("--trials", ov.trials, "Monte Carlo trials per sweep point");
    cmd->add_option("--seeds", ov.seeds, "master seeds")->delimiter(',');
    cmd->add_option("--m-sweep", ov.m_sweep, "measurement counts to sweep")->delimiter(',');
    cmd->add_option("--out", ov.out, "output directory");
}

blindsense::ExperimentConfig resolve_config(const Overrides& ov) {
    blindsense::ExperimentConfig cfg;
    if (!ov.config_path.empty()) cfg = blindsense::load_config(ov.config_path);
    if (ov.omega) cfg.omega = *ov.omega;
    if (ov.omega_prime) cfg.omega_prime = *ov.omega_prime;
    if (ov.horizon) cfg.horizon = *ov.horizon;
    if (ov.nu) cfg.nu = *ov.nu;
    if (ov.delta) cfg.delta = *ov.delta;
    if (ov.sigma_e) cfg.sigma_e = *ov.sigma_e;
    if (ov.grid) cfg.grid = *ov.grid;
    if (ov.max_subbands) cfg.max_subbands = *ov.max_subbands;
    if (ov.trials) cfg.trials = *ov.trials;
    if (ov.seeds) cfg.seeds = *ov.seeds;
    if (ov.m_sweep) cfg.m_sweep = *ov.m_sweep;
    if (ov.out) cfg.out = *ov.out;
    blindsense::validate_config(cfg);
    std::filesystem::create_directories(cfg.out);
    return cfg;
}

int run_pswf(const Overrides& ov, int count_override) {
    namespace bs = blindsense;
    const bs::ExperimentConfig cfg = resolve_config(ov);
    bs::TimeGrid grid(cfg.horizon, cfg.grid);
    const int count = count_override > 0 ? count_override : cfg.nyquist();
    bs::ProlateBasis basis =
        bs::solve_concentration(bs::BandSet::single(-cfg.omega, cfg.omega), grid, count);
    const std::string path = cfg.out + "/pswf.csv";
    bs::export_basis_csv(basis, path);
    const bs::OrthogonalityReport rep = bs::verify_orthogonality(basis);
    std::printf("modes: %d  knee: %d  max offdiag: %.3e  max diag err: %.3e\n", basis.count(),
                bs::significant_count(basis.lambda), rep.max_offdiag, rep.max_diag_error);
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int run_landau(const Overrides& ov) {
    namespace bs = blindsense;
    const bs::ExperimentConfig cfg = resolve_config(ov);
    const bs::LandauWidomResult res = bs::run_landau_widom(cfg);
    bs::write_landau_csv(res, cfg.out + "/landau.csv");
    std::printf("canonical knee: %d (expected %d)\n", res.knee_canonical, res.expected_canonical);
    std::printf("allocation knee: %d (expected %d)\n", res.knee_allocation,
                res.expected_allocation);
    std::printf("wrote %s/landau.csv\n", cfg.out.c_str());
    std::printf("%s\n", res.pass ? "PASS" : "FAIL");
    return res.pass ? 0 : 1;
}

int run_phase(const Overrides& ov) {
    namespace bs = blindsense;
    const bs::ExperimentConfig cfg = resolve_config(ov);
    const bs::SweepResult sweep = bs::run_phase_transition(cfg);
    bs::write_phase_csvs(sweep, cfg.out);
    std::printf("decoding threshold (max pair rank): %d\n", sweep.threshold.rank);
    for (const bs::PhaseRow& r : sweep.rows)
        std::printf("M = %3d  success %.3f  median err %.3e  beta %.3e  %s\n", r.m,
                    r.success_rate, r.median_err, r.beta, r.note.c_str());
    std::printf("wrote %s/phase.csv and %s/trials.csv\n", cfg.out.c_str(), cfg.out.c_str());
    std::printf("%s\n", sweep.pass ? "PASS" : "FAIL");
    return sweep.pass ? 0 : 1;
}

int run_dims(const Overrides& ov) {
    namespace bs = blindsense;
    const bs::ExperimentConfig cfg = resolve_config(ov);
    const bs::DimensionSuiteResult res = bs::run_dimension_suite(cfg);
    bs::write_dimension_csvs(res, cfg.out);
    for (const bs::SuiteRow& r : res.rows)
        std::printf("%-22s value %8.4f  expected %8.4f  tol %.3g  %s\n", r.name.c_str(), r.value,
                    r.expected, r.tol, r.pass ? "ok" : "FAIL");
    std::printf("wrote %s/dims.csv\n", cfg.out.c_str());
    std::printf("%s\n", res.pass ? "PASS" : "FAIL");
    return res.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"blind-sensing numerical laboratory"};
    app.require_subcommand(0, 1);

    bool dump = false;
    app.add_flag("--dump-config", dump, "print the default configuration and exit");

    Overrides ov_pswf, ov_landau, ov_phase, ov_dims;
    int pswf_count = 0;

    CLI::App* pswf = app.add_subcommand("pswf", "export the canonical basis");
    add_common_options(pswf, ov_pswf);
    pswf->add_option("--count", pswf_count, "number of modes to export (default: N)");

    CLI::App* landau = app.add_subcommand("landau", "eigenvalue staircases");
    add_common_options(landau, ov_landau);

    CLI::App* phase = app.add_subcommand("phase", "recovery phase transition");
    add_common_options(phase, ov_phase);

    CLI::App* dims = app.add_subcommand("dims", "dimension estimators");
    add_common_options(dims, ov_dims);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (dump) {
            std::fputs(blindsense::dump_config(blindsense::ExperimentConfig{}).c_str(), stdout);
            return 0;
        }
        if (pswf->parsed()) return run_pswf(ov_pswf, pswf_count);
        if (landau->parsed()) return run_landau(ov_landau);
        if (phase->parsed()) return run_phase(ov_phase);
        if (dims->parsed()) return run_dims(ov_dims);
        std::fputs(app.help().c_str(), stdout);
        return 2;
    } catch (const blindsense::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
