#pragma once

#include "elliptic_ident/forward.hpp"

namespace eid {

/// Energy misfit, penalty, total objective and the L2 gradient triple at one
/// parameter point. Gradients live in the same finite bases as the unknowns,
/// which is exact: the state gradients are per-element constant and all
/// scalar fields are P1.
struct ObjectiveEval {
    double misfit = 0.0;
    double penalty = 0.0;
    double total = 0.0;
    std::vector<SymMat2> grad_Q;
    Eigen::VectorXd grad_f;
    Eigen::VectorXd grad_g;
    Eigen::VectorXd state;
};

/// Evaluate the regularized energy objective at gamma against the shifted
/// measurement z_bar (zero boundary mean required).
ObjectiveEval eval_objective(const TriMesh& mesh, const FemOps& fem, const Param& gamma,
                             const Eigen::VectorXd& z_bar, double rho,
                             double solver_tol = 1e-10);

/// Product L2 norm of the gradient triple.
double gradient_norm(const TriMesh& mesh, const FemOps& fem, const ObjectiveEval& eval);

/// L2 pairing of the gradient triple with a direction (H, l, s).
double gradient_pairing(const TriMesh& mesh, const FemOps& fem,
                        const ObjectiveEval& eval, const Param& direction);

/// Distance between gamma and its image under the projected fixed-point map
/// characterizing the unique minimizer; zero exactly at the minimizer.
double kkt_residual(const TriMesh& mesh, const FemOps& fem, const Param& gamma,
                    const Eigen::VectorXd& z_bar, double rho, const Bounds& bounds,
                    double solver_tol = 1e-10);

} // namespace eid
