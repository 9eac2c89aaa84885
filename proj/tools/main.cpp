#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "elliptic_ident/io.hpp"
#include "elliptic_ident/selfcheck.hpp"

namespace {

struct RunConfig {
    std::vector<int> levels = {3, 6, 12, 24, 48, 96};
    std::uint64_t seed = 1;
    double beta0 = 1.5e-3;
    int max_iters = 800;
    double rho_factor = 1e-3;
    double noise_factor = 10.0;
    double q_lo = 0.05;
    double q_hi = 10.0;
    double solver_tol = 1e-10;
    std::string out_dir = "out";
};

eid::ExperimentConfig to_experiment_config(const RunConfig& cfg) {
    eid::ExperimentConfig ex;
    ex.levels = cfg.levels;
    ex.seed = cfg.seed;
    ex.rho_factor = cfg.rho_factor;
    ex.noise_factor = cfg.noise_factor;
    ex.optimizer.beta0 = cfg.beta0;
    ex.optimizer.max_iters = cfg.max_iters;
    ex.optimizer.solver_tol = cfg.solver_tol;
    ex.optimizer.bounds = {cfg.q_lo, cfg.q_hi};
    return ex;
}

void write_manifest(const RunConfig& cfg) {
    std::ofstream os(cfg.out_dir + "/run_manifest.txt", std::ios::binary);
    os << "rng=splitmix64\n";
    os << "levels=";
    for (std::size_t i = 0; i < cfg.levels.size(); ++i)
        os << (i ? "," : "") << cfg.levels[i];
    os << "\n";
    os << "seed=" << cfg.seed << "\n";
    os << "beta0=" << eid::format_double(cfg.beta0) << "\n";
    os << "max_iters=" << cfg.max_iters << "\n";
    os << "rho_factor=" << eid::format_double(cfg.rho_factor) << "\n";
    os << "noise_factor=" << eid::format_double(cfg.noise_factor) << "\n";
    os << "q_lo=" << eid::format_double(cfg.q_lo) << "\n";
    os << "q_hi=" << eid::format_double(cfg.q_hi) << "\n";
    os << "solver_tol=" << eid::format_double(cfg.solver_tol) << "\n";
}

int cmd_reproduce(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    write_manifest(cfg);

    const auto results = eid::run_multilevel(to_experiment_config(cfg));

    std::vector<eid::LevelReport> reports;
    reports.reserve(results.size());
    const eid::GroundTruth truth;
    for (const auto& level : results) {
        reports.push_back(level.report);
        const eid::TriMesh mesh = eid::build_uniform_mesh(level.report.ell);
        eid::write_result_vtk(cfg.out_dir, mesh, level, truth);
        std::cout << "level " << level.report.ell << ": delta=" << level.report.delta
                  << " iterates=" << level.report.iterations
                  << " Delta=" << level.report.error_coeff
                  << " Sigma=" << level.report.error_l2
                  << " Lambda=" << level.report.error_h1 << "\n";
    }
    eid::write_tables(cfg.out_dir, reports);
    std::cout << "wrote " << cfg.out_dir << "/table_1.csv and table_2.csv\n";
    return 0;
}

int cmd_check(const RunConfig& cfg) {
    const auto results = eid::checks::run_all({2, 3, 6}, cfg.seed);
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

int cmd_forward(const RunConfig& cfg, int ell, const std::string& out_file) {
    const eid::TriMesh mesh = eid::build_uniform_mesh(ell);
    const eid::FemOps fem(mesh);
    const eid::GroundTruth truth;
    const Eigen::VectorXd state = eid::exact_state(mesh, fem, truth, cfg.solver_tol);

    eid::VtkFields fields;
    fields.point_data.emplace_back("state", state);
    eid::write_vtk(out_file, mesh, fields);
    std::cout << "wrote " << out_file << " (ell=" << ell << ", " << mesh.n_nodes()
              << " nodes)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("ELLIPTIC_IDENT_THREADS"))
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));

    CLI::App app{"Simultaneous diffusion-matrix, source and boundary-flux "
                 "identification in an elliptic Neumann problem"};
    app.set_config("--config", "", "Flat key=value configuration file (flags win)");

    RunConfig cfg;
    app.add_option("--levels", cfg.levels, "Nested refinement levels")->delimiter(',');
    app.add_option("--seed", cfg.seed, "64-bit RNG seed");
    app.add_option("--beta0", cfg.beta0, "Initial step control in (0,1)");
    app.add_option("--max-iters", cfg.max_iters, "Iteration cap per level");
    app.add_option("--rho-factor", cfg.rho_factor, "rho = rho_factor * h");
    app.add_option("--noise-factor", cfg.noise_factor,
                   "delta_bar = noise_factor * sqrt(rho) * h^1.5");
    app.add_option("--q-lo", cfg.q_lo, "Lower eigenvalue bound");
    app.add_option("--q-hi", cfg.q_hi, "Upper eigenvalue bound");
    app.add_option("--solver-tol", cfg.solver_tol, "Linear solve residual tolerance");
    app.add_option("--out", cfg.out_dir, "Output directory");

    auto* reproduce = app.add_subcommand("reproduce", "Run the multilevel experiment and emit tables");
    auto* check = app.add_subcommand("check", "Run the property suites");
    auto* forward = app.add_subcommand("forward", "One-off forward solve to VTK");
    int fwd_ell = 24;
    std::string fwd_out = "state.vtk";
    forward->add_option("--ell", fwd_ell, "Subdivision count");
    forward->add_option("--vtk", fwd_out, "Output VTK file");
    app.require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (reproduce->parsed()) return cmd_reproduce(cfg);
        if (check->parsed()) return cmd_check(cfg);
        if (forward->parsed()) return cmd_forward(cfg, fwd_ell, fwd_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
