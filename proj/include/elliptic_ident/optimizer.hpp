#pragma once

#include <string>

#include "elliptic_ident/objective.hpp"

namespace eid {

struct OptimizerConfig {
    double beta0 = 0.75;       // initial step control, in (0,1)
    double tau = 1e-4;         // Armijo constant
    double tau1_factor = 1e-3; // tau_1 = tau1_factor * h
    double tau2_factor = 1e-2; // tau_2 = tau2_factor * h
    int max_iters = 800;
    double solver_tol = 1e-10;
    Bounds bounds{};
};

struct IterateRecord {
    int iteration;
    double total;
    double misfit;
    double penalty;
    double grad_norm;
    double beta;
    int halvings;
};

struct IterateHistory {
    std::vector<IterateRecord> accepted;
    std::string stop_reason; // "tolerance" | "max_iters"
    int iterations = 0;
};

/// Armijo acceptance: L = total(candidate) - total(current) + tau*beta*step^2 <= 0
/// with step^2 the squared product distance between the iterates.
bool armijo_accept(const TriMesh& mesh, const FemOps& fem,
                   const Param& current, const Param& candidate,
                   double total_current, double total_candidate,
                   double beta, double tau);

struct OptimizerResult {
    Param gamma;
    ObjectiveEval eval; // objective at the returned iterate
    IterateHistory history;
};

/// Projected gradient descent with Armijo step halving. The step control beta
/// persists across outer iterations (never reset). Stops when
/// ||grad|| - tau_1 - tau_2*||grad_0|| <= 0 or after max_iters accepted steps.
/// Throws "line search stalled" if beta underflows 1e-16.
OptimizerResult run_optimizer(const TriMesh& mesh, const FemOps& fem,
                              const Eigen::VectorXd& z, double rho,
                              const Param& gamma0, const OptimizerConfig& config);

} // namespace eid
