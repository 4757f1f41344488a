// fanscan command line: coverage and optimizer runs plus beam-profile cuts,
// all driven by a JSON config with a few override flags.
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fanscan/pipeline.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    fanscan::CliOverrides overrides;
};

void add_config_arg(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "JSON configuration file")
        ->required()
        ->check(CLI::ExistingFile);
}

int run_coverage_cmd(const CommonArgs& args) {
    fanscan::RunConfig cfg = fanscan::load_config(args.config_path);
    args.overrides.apply(cfg);
    fanscan::CoverageRun run = fanscan::run_coverage(cfg);
    const fanscan::json report = fanscan::coverage_report(run, args.overrides.to_json());
    fanscan::write_coverage_outputs(run, report, cfg.output_dir);
    std::cout << "coverage: hole_ratio=" << run.classification.hole_ratio
              << " k_l=" << run.sched_l.states.size() << " out=" << cfg.output_dir << "\n";
    return 0;
}

int run_optimize_cmd(const CommonArgs& args) {
    fanscan::RunConfig cfg = fanscan::load_config(args.config_path);
    args.overrides.apply(cfg);
    fanscan::OptimizeRun run = fanscan::run_optimize(cfg);
    const fanscan::json report = fanscan::optimize_report(run, args.overrides.to_json());
    fanscan::write_optimize_outputs(run, report, cfg.output_dir);
    std::cout << "optimize: best alpha=" << run.result.best.alpha
              << " dphi0_deg=" << fanscan::rad_to_deg(run.result.best.dphi0)
              << " hole_ratio=" << run.result.best.hole_ratio << " out=" << cfg.output_dir
              << "\n";
    return 0;
}

int run_profile_cmd(const CommonArgs& args) {
    fanscan::RunConfig cfg = fanscan::load_config(args.config_path);
    args.overrides.apply(cfg);
    fanscan::run_profile(cfg, cfg.output_dir);
    std::cout << "profile: wrote " << cfg.output_dir << "/profile.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-fan line-laser scan coverage simulator"};
    app.require_subcommand(1);

    CommonArgs cov_args, opt_args, prof_args;

    CLI::App* cov = app.add_subcommand("coverage", "run the coverage pipeline");
    add_config_arg(cov, cov_args);
    double cov_alpha = 0.0, cov_dphi0 = 0.0, cov_res = 0.0;
    std::string cov_out;
    cov->add_option("--alpha", cov_alpha, "override azimuth expansion ratio");
    cov->add_option("--dphi0", cov_dphi0, "override initial azimuth step, degrees");
    cov->add_option("--grid-res", cov_res, "override grid resolution, meters");
    cov->add_option("--out", cov_out, "override output directory");

    CLI::App* opt = app.add_subcommand("optimize", "search the azimuth scheduling parameters");
    add_config_arg(opt, opt_args);
    std::string opt_out;
    opt->add_option("--out", opt_out, "override output directory");

    CLI::App* prof = app.add_subcommand("profile", "emit normalized beam profile cuts");
    add_config_arg(prof, prof_args);
    std::string prof_out;
    prof->add_option("--out", prof_out, "override output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cov->parsed()) {
            if (cov->count("--alpha")) cov_args.overrides.alpha = cov_alpha;
            if (cov->count("--dphi0")) cov_args.overrides.dphi0_deg = cov_dphi0;
            if (cov->count("--grid-res")) cov_args.overrides.grid_res = cov_res;
            if (cov->count("--out")) cov_args.overrides.out_dir = cov_out;
            return run_coverage_cmd(cov_args);
        }
        if (opt->parsed()) {
            if (opt->count("--out")) opt_args.overrides.out_dir = opt_out;
            return run_optimize_cmd(opt_args);
        }
        if (prof->parsed()) {
            if (prof->count("--out")) prof_args.overrides.out_dir = prof_out;
            return run_profile_cmd(prof_args);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
