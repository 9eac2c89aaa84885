#include "elliptic_ident/experiment.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eid {

namespace {

bool outside_domain(const Eigen::Vector2d& x) {
    return std::abs(x.x()) > 1.0 + 1e-12 || std::abs(x.y()) > 1.0 + 1e-12;
}

} // namespace

SymMat2 GroundTruth::Q(const Eigen::Vector2d& x) const {
    if (outside_domain(x))
        throw std::invalid_argument("GroundTruth::Q: point outside the closed square");
    SymMat2 q;
    q.q11 = (std::abs(x.x()) <= 0.75 && std::abs(x.y()) <= 0.75) ? 2.0 : 1.0;
    q.q12 = (std::abs(x.x()) + std::abs(x.y()) <= 0.75) ? 1.0 : 0.0;
    q.q22 = (x.x() * x.x() + x.y() * x.y() <= 9.0 / 16.0) ? 3.0 : 2.0;
    return q;
}

double GroundTruth::f(const Eigen::Vector2d& x) const {
    if (outside_domain(x))
        throw std::invalid_argument("GroundTruth::f: point outside the closed square");
    constexpr double pi = std::numbers::pi;
    const double e1 = 9.0 * (x.x() + 0.5) * (x.x() + 0.5) + 16.0 * (x.y() - 0.5) * (x.y() - 0.5);
    if (e1 <= 1.0) return (93.0 - 2.0 * pi) / 48.0;
    if (std::abs(x.x() - 0.5) <= 0.25 && std::abs(x.y() + 0.5) <= 0.25)
        return (45.0 - 2.0 * pi) / 48.0;
    return -(3.0 + 2.0 * pi) / 48.0;
}

double GroundTruth::g(const Eigen::Vector2d& p, int side) const {
    switch (side) {
        case 0: return p.x() <= 0.0 ? -2.0 : 1.0;  // y = -1
        case 1: return p.y() <= 0.0 ? 4.0 : -3.0;  // x = +1
        case 2: return p.x() <= 0.0 ? -1.0 : 2.0;  // y = +1
        case 3: return p.y() <= 0.0 ? 3.0 : -4.0;  // x = -1
        default: throw std::invalid_argument("GroundTruth::g: side id out of range");
    }
}

Param sample_truth(const TriMesh& mesh, const GroundTruth& truth) {
    Param gamma = Param::zeros(mesh);
    for (int t = 0; t < mesh.n_elements(); ++t)
        gamma.Q[t] = truth.Q(mesh.centroid(t));
    for (int i = 0; i < mesh.n_nodes(); ++i)
        gamma.f[i] = truth.f(mesh.nodes[i]);
    for (int k = 0; k < mesh.n_boundary(); ++k)
        gamma.g[k] = truth.g(mesh.nodes[mesh.boundary_nodes[k]], mesh.boundary_side[k]);
    return gamma;
}

Eigen::VectorXd exact_state(const TriMesh& mesh, const FemOps& fem, const GroundTruth& truth,
                            double solver_tol) {
    return solve_neumann(mesh, fem, sample_truth(mesh, truth), solver_tol);
}

std::pair<Eigen::VectorXd, double> make_noisy_data(const TriMesh& mesh, const FemOps& fem,
                                                   const Eigen::VectorXd& phi, double rho,
                                                   double h, double noise_factor,
                                                   std::uint64_t seed) {
    if (rho <= 0.0 || h <= 0.0)
        throw std::invalid_argument("make_noisy_data: rho and h must be positive");
    const double delta_bar = noise_factor * std::sqrt(rho) * std::pow(h, 1.5);
    SplitMix64 rng(seed);
    Eigen::VectorXd z = phi;
    for (Eigen::Index i = 0; i < z.size(); ++i)
        z[i] += rng.next_symmetric(delta_bar);
    const double delta = fem.l2_norm(z - phi);
    return {std::move(z), delta};
}

std::array<double, 3> compute_errors(const TriMesh& mesh, const FemOps& fem,
                                     const Param& gamma, const Eigen::VectorXd& state,
                                     const GroundTruth& truth,
                                     const Eigen::VectorXd& exact) {
    if (static_cast<int>(gamma.Q.size()) != mesh.n_elements() ||
        state.size() != mesh.n_nodes() || exact.size() != mesh.n_nodes())
        throw std::invalid_argument("compute_errors: level mismatch");
    (void)truth;

    const Eigen::VectorXd du = state - exact;
    const double sigma = fem.l2_norm(du);
    const double lambda = fem.h1_norm(du);

    // The coefficients are not identifiable individually (many triples share
    // one state), so their error is measured through the forward map: the
    // geometric mean of the L2 norm and the Q-weighted energy norm of the
    // output distance — an interpolation norm between L2 and the energy space,
    // which is the metric in which the regularized problem is stable.
    const Eigen::SparseMatrix<double> K = assemble_stiffness(mesh, gamma.Q);
    const double energy = std::sqrt(std::max(0.0, du.dot(K * du)));
    const double delta_out = std::sqrt(sigma * energy);
    return {delta_out, sigma, lambda};
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
    if (errors.size() != hs.size() || errors.size() < 2)
        throw std::invalid_argument("eoc: need matching lists of length >= 2");
    for (double e : errors)
        if (!(e > 0.0)) throw std::invalid_argument("eoc: error values must be positive");
    std::vector<double> out;
    out.reserve(errors.size() - 1);
    for (std::size_t i = 1; i < errors.size(); ++i)
        out.push_back((std::log(errors[i - 1]) - std::log(errors[i])) /
                      (std::log(hs[i - 1]) - std::log(hs[i])));
    return out;
}

Param initial_guess(const TriMesh& mesh) {
    Param p = Param::zeros(mesh);
    for (auto& q : p.Q) q = SymMat2::diag(2.0, 2.0);
    for (int i = 0; i < mesh.n_nodes(); ++i)
        p.f[i] = mesh.nodes[i].x() < 0.0 ? 1.0 : -1.0;
    for (int k = 0; k < mesh.n_boundary(); ++k) {
        const Eigen::Vector2d& x = mesh.nodes[mesh.boundary_nodes[k]];
        // The closed horizontal sides take precedence at the corners.
        if (x.y() <= -1.0 + 1e-12) p.g[k] = -1.0;
        else if (x.y() >= 1.0 - 1e-12) p.g[k] = 1.0;
        else p.g[k] = x.x() > 0.0 ? 1.0 : -1.0;
    }
    return p;
}

Param interpolate_param(const TriMesh& coarse, const Param& gamma, const TriMesh& fine) {
    require_nested(coarse, fine);
    Param out;
    out.Q.resize(fine.n_elements());
    for (int t = 0; t < fine.n_elements(); ++t)
        out.Q[t] = gamma.Q[coarse.locate(fine.centroid(t))];
    out.f = interpolate_nodal(coarse, gamma.f, fine);
    out.g = interpolate_boundary(coarse, gamma.g, fine);
    return out;
}

std::vector<LevelResult> run_multilevel(const ExperimentConfig& config) {
    if (config.levels.empty())
        throw std::invalid_argument("run_multilevel: empty level list");
    for (std::size_t i = 1; i < config.levels.size(); ++i)
        if (config.levels[i] <= config.levels[i - 1] ||
            config.levels[i] % config.levels[i - 1] != 0)
            throw std::invalid_argument("run_multilevel: levels must be strictly increasing and nested");

    const GroundTruth truth;
    std::vector<LevelResult> results;
    results.reserve(config.levels.size());

    TriMesh prev_mesh;
    for (std::size_t i = 0; i < config.levels.size(); ++i) {
        const int ell = config.levels[i];
        TriMesh mesh = build_uniform_mesh(ell);
        FemOps fem(mesh);
        const double rho = config.rho_factor * mesh.h;

        LevelResult level;
        level.exact_state = exact_state(mesh, fem, truth, config.optimizer.solver_tol);

        // Every level observes its own exact state with fresh noise drawn
        // from a per-level stream, so the data error decays under refinement
        // (delta_bar ~ h^2 with the default factors).
        auto [z, delta] = make_noisy_data(mesh, fem, level.exact_state, rho, mesh.h,
                                          config.noise_factor,
                                          config.seed + 1000 * static_cast<std::uint64_t>(ell));
        level.data = std::move(z);
        level.report.delta = delta;

        Param gamma0;
        if (i == 0) {
            gamma0 = initial_guess(mesh);
        } else {
            gamma0 = interpolate_param(prev_mesh, results.back().gamma, mesh);
        }

        OptimizerResult opt = run_optimizer(mesh, fem, level.data, rho, gamma0, config.optimizer);
        level.gamma = std::move(opt.gamma);
        level.state = std::move(opt.eval.state);

        const auto errors =
            compute_errors(mesh, fem, level.gamma, level.state, truth, level.exact_state);
        level.report.ell = ell;
        level.report.h = mesh.h;
        level.report.rho = rho;
        level.report.iterations = opt.history.iterations;
        level.report.error_coeff = errors[0];
        level.report.error_l2 = errors[1];
        level.report.error_h1 = errors[2];

        if (i > 0) {
            const LevelReport& prev = results.back().report;
            const double dh = std::log(prev.h) - std::log(level.report.h);
            level.report.eoc_coeff = (std::log(prev.error_coeff) - std::log(level.report.error_coeff)) / dh;
            level.report.eoc_l2 = (std::log(prev.error_l2) - std::log(level.report.error_l2)) / dh;
            level.report.eoc_h1 = (std::log(prev.error_h1) - std::log(level.report.error_h1)) / dh;
        }

        results.push_back(std::move(level));
        prev_mesh = std::move(mesh);
    }

    return results;
}

} // namespace eid
