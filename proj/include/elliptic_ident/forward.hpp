#pragma once

#include <functional>

#include "elliptic_ident/params.hpp"

namespace eid {

/// Stiffness entry (i,j) = sum_T area_T * (Q_T grad(phi_j)) . grad(phi_i),
/// exact for P1. Throws if a per-element matrix is not finite.
Eigen::SparseMatrix<double> assemble_stiffness(const TriMesh& mesh,
                                               const std::vector<SymMat2>& Q);

/// Load vector of (f, phi_i) + <g, gamma phi_i> for nodal f and boundary
/// nodal g, assembled through the exact mass rules.
Eigen::VectorXd assemble_load(const TriMesh& mesh, const FemOps& fem,
                              const Eigen::VectorXd& f, const Eigen::VectorXd& g);

/// Load vector from callable data: f by a degree-5 7-point triangle rule and
/// g by 5-point Gauss per boundary edge, splitting edges at the given
/// arc-length break points so discontinuous fluxes integrate cleanly.
Eigen::VectorXd assemble_load_functions(
    const TriMesh& mesh,
    const std::function<double(const Eigen::Vector2d&)>& f,
    const std::function<double(const Eigen::Vector2d&, int side)>& g,
    const std::vector<double>& g_breaks = {});

/// Pure-Neumann solve on the zero-boundary-mean subspace via the augmented
/// saddle system [[K, b], [b^T, 0]]; the multiplier absorbs incompatible data.
struct NeumannSolver {
    NeumannSolver(const TriMesh& mesh, const FemOps& fem,
                  const std::vector<SymMat2>& Q, double tol = 1e-10);

    /// Solve for the given load; returns the diamond state (multiplier dropped).
    Eigen::VectorXd solve(const Eigen::VectorXd& load) const;

    const TriMesh* mesh;
    const FemOps* fem;
    Eigen::SparseMatrix<double> stiffness;

private:
    Eigen::SparseMatrix<double> saddle_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    double tol_;
};

Eigen::VectorXd solve_neumann(const TriMesh& mesh, const FemOps& fem,
                              const Param& gamma, double tol = 1e-10);

/// Directional (Frechet) derivative of the coefficient-to-solution map:
/// solves int Q grad(xi).grad(phi) = -int H grad(U).grad(phi) + (l,phi) + <s,phi>.
Eigen::VectorXd solve_sensitivity(const TriMesh& mesh, const FemOps& fem,
                                  const Param& gamma, const Eigen::VectorXd& state,
                                  const Param& direction, double tol = 1e-10);

} // namespace eid
