#include "elliptic_ident/optimizer.hpp"

#include <stdexcept>

namespace eid {

bool armijo_accept(const TriMesh& mesh, const FemOps& fem,
                   const Param& current, const Param& candidate,
                   double total_current, double total_candidate,
                   double beta, double tau) {
    const double step = product_distance(mesh, fem, current, candidate);
    const double L = total_candidate - total_current + tau * beta * step * step;
    return L <= 0.0;
}

OptimizerResult run_optimizer(const TriMesh& mesh, const FemOps& fem,
                              const Eigen::VectorXd& z, double rho,
                              const Param& gamma0, const OptimizerConfig& config) {
    if (!(config.beta0 > 0.0 && config.beta0 < 1.0))
        throw std::invalid_argument("run_optimizer: beta0 must lie in (0,1)");
    if (config.max_iters < 1)
        throw std::invalid_argument("run_optimizer: max_iters must be >= 1");

    const Eigen::VectorXd z_bar = shift_to_diamond(mesh, z);
    const double tau1 = config.tau1_factor * mesh.h;
    const double tau2 = config.tau2_factor * mesh.h;

    OptimizerResult result;
    result.gamma = gamma0;
    result.eval = eval_objective(mesh, fem, gamma0, z_bar, rho, config.solver_tol);

    const double grad0 = gradient_norm(mesh, fem, result.eval);
    double grad = grad0;
    // Step control carries over between outer iterations (monotone
    // non-increasing), following the literal step-halving rule.
    double beta = config.beta0;

    auto step_from = [&](const ObjectiveEval& eval, const Param& gamma, double b) {
        Param next = gamma;
        for (int t = 0; t < mesh.n_elements(); ++t)
            next.Q[t] = project_box(gamma.Q[t] - eval.grad_Q[t] * b, config.bounds);
        next.f = gamma.f - b * eval.grad_f;
        next.g = gamma.g - b * eval.grad_g;
        return next;
    };

    int k = 0;
    while (true) {
        if (grad - tau1 - tau2 * grad0 <= 0.0) {
            result.history.stop_reason = "tolerance";
            break;
        }
        if (k >= config.max_iters) {
            result.history.stop_reason = "max_iters";
            break;
        }

        int halvings = 0;
        Param candidate = step_from(result.eval, result.gamma, beta);
        ObjectiveEval cand_eval =
            eval_objective(mesh, fem, candidate, z_bar, rho, config.solver_tol);
        while (!armijo_accept(mesh, fem, result.gamma, candidate, result.eval.total,
                              cand_eval.total, beta, config.tau)) {
            beta *= 0.5;
            ++halvings;
            if (beta < 1e-16)
                throw std::runtime_error("line search stalled");
            candidate = step_from(result.eval, result.gamma, beta);
            cand_eval = eval_objective(mesh, fem, candidate, z_bar, rho, config.solver_tol);
        }

        result.gamma = std::move(candidate);
        result.eval = std::move(cand_eval);
        grad = gradient_norm(mesh, fem, result.eval);
        ++k;
        result.history.accepted.push_back({k, result.eval.total, result.eval.misfit,
                                           result.eval.penalty, grad, beta, halvings});
    }

    result.history.iterations = k;
    return result;
}

} // namespace eid
