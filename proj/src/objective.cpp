#include "elliptic_ident/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace eid {

namespace {

Eigen::Vector2d element_gradient(const TriMesh& mesh, const Eigen::VectorXd& u, int t) {
    const auto& tri = mesh.triangles[t];
    const auto& g = mesh.element_grads[t];
    return u[tri[0]] * g[0] + u[tri[1]] * g[1] + u[tri[2]] * g[2];
}

} // namespace

ObjectiveEval eval_objective(const TriMesh& mesh, const FemOps& fem, const Param& gamma,
                             const Eigen::VectorXd& z_bar, double rho, double solver_tol) {
    ObjectiveEval out;
    out.state = solve_neumann(mesh, fem, gamma, solver_tol);

    const Eigen::VectorXd e = out.state - z_bar;

    out.grad_Q.resize(mesh.n_elements());
    double misfit = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const Eigen::Vector2d ge = element_gradient(mesh, e, t);
        const Eigen::Vector2d gu = element_gradient(mesh, out.state, t);
        const Eigen::Vector2d gz = element_gradient(mesh, z_bar, t);
        misfit += mesh.element_area * gamma.Q[t].apply(ge).dot(ge);
        out.grad_Q[t] = outer(gz) - outer(gu) + gamma.Q[t] * (2.0 * rho);
    }
    out.misfit = misfit;
    out.grad_f = 2.0 * (e + rho * gamma.f);
    out.grad_g = 2.0 * (fem.restrict_boundary(e) + rho * gamma.g);
    out.penalty = penalty(mesh, fem, gamma);
    out.total = out.misfit + rho * out.penalty;
    return out;
}

double gradient_norm(const TriMesh& mesh, const FemOps& fem, const ObjectiveEval& eval) {
    double sum = q_norm_sq(mesh, eval.grad_Q);
    sum += eval.grad_f.dot(fem.mass * eval.grad_f);
    sum += eval.grad_g.dot(fem.boundary_mass * eval.grad_g);
    return std::sqrt(std::max(0.0, sum));
}

double gradient_pairing(const TriMesh& mesh, const FemOps& fem,
                        const ObjectiveEval& eval, const Param& direction) {
    double sum = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t)
        sum += eval.grad_Q[t].dot(direction.Q[t]);
    sum *= mesh.element_area;
    sum += eval.grad_f.dot(fem.mass * direction.f);
    sum += eval.grad_g.dot(fem.boundary_mass * direction.g);
    return sum;
}

double kkt_residual(const TriMesh& mesh, const FemOps& fem, const Param& gamma,
                    const Eigen::VectorXd& z_bar, double rho, const Bounds& bounds,
                    double solver_tol) {
    if (rho <= 0.0)
        throw std::invalid_argument("kkt_residual: rho must be positive");
    const Eigen::VectorXd state = solve_neumann(mesh, fem, gamma, solver_tol);

    Param fixed_point = Param::zeros(mesh);
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const Eigen::Vector2d gu = element_gradient(mesh, state, t);
        const Eigen::Vector2d gz = element_gradient(mesh, z_bar, t);
        fixed_point.Q[t] = project_box((outer(gu) - outer(gz)) * (1.0 / (2.0 * rho)), bounds);
    }
    fixed_point.f = (z_bar - state) / rho;
    fixed_point.g = fem.restrict_boundary(z_bar - state) / rho;
    return product_distance(mesh, fem, gamma, fixed_point);
}

} // namespace eid
