#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace eid {

/// Structured triangulation of the square (-1,1)^2 with ell cells per axis.
/// Each cell is split along its lower-left -> upper-right diagonal, giving
/// 2*ell^2 congruent triangles of area 2/ell^2 and diameter h = sqrt(8)/ell.
struct TriMesh {
    int ell = 0;
    std::vector<Eigen::Vector2d> nodes;             // (ell+1)^2, lexicographic (x fastest)
    std::vector<std::array<int, 3>> triangles;      // 2*ell^2, CCW
    // Boundary chain, counter-clockwise starting at (-1,-1).
    std::vector<int> boundary_nodes;                // 4*ell mesh node indices
    std::vector<std::array<int, 2>> boundary_edges; // 4*ell, positions into boundary_nodes
    std::vector<int> boundary_side;                 // side id per edge: 0 bottom, 1 right, 2 top, 3 left
    double h = 0.0;
    double element_area = 0.0;
    std::vector<std::array<Eigen::Vector2d, 3>> element_grads; // P1 basis gradients per triangle

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_elements() const { return static_cast<int>(triangles.size()); }
    int n_boundary() const { return static_cast<int>(boundary_nodes.size()); }
    double edge_length() const { return 2.0 / ell; }
    int node_index(int i, int j) const { return j * (ell + 1) + i; }

    Eigen::Vector2d centroid(int t) const {
        const auto& tri = triangles[t];
        return (nodes[tri[0]] + nodes[tri[1]] + nodes[tri[2]]) / 3.0;
    }

    /// Index of the triangle containing x (ties resolved toward the lower triangle).
    int locate(const Eigen::Vector2d& x) const;

    /// Evaluate the P1 function with nodal coefficients u at an arbitrary point.
    double eval_p1(const Eigen::VectorXd& u, const Eigen::Vector2d& x) const;
};

TriMesh build_uniform_mesh(int ell);

/// Mesh-level FEM operators that do not depend on the diffusion matrix:
/// P1 mass matrix, boundary-P1 mass matrix (on the boundary chain), the
/// identity-coefficient stiffness matrix and the trace-weight vector
/// b_i = int_{dOmega} phi_i used for the zero-boundary-mean constraint.
struct FemOps {
    explicit FemOps(const TriMesh& mesh);

    const TriMesh* mesh;
    Eigen::SparseMatrix<double> mass;           // n x n
    Eigen::SparseMatrix<double> stiffness_id;   // n x n, Q = I
    Eigen::SparseMatrix<double> boundary_mass;  // m x m on boundary positions
    Eigen::VectorXd trace_weights;              // n, sums to |dOmega| = 8

    /// Restrict a nodal field to the boundary chain.
    Eigen::VectorXd restrict_boundary(const Eigen::VectorXd& u) const;
    /// Scatter a boundary-position vector into a global nodal vector.
    Eigen::VectorXd scatter_boundary(const Eigen::VectorXd& gb) const;

    double l2_norm(const Eigen::VectorXd& f) const;
    double h1_seminorm(const Eigen::VectorXd& u) const;
    double h1_norm(const Eigen::VectorXd& u) const;
    double boundary_l2_norm(const Eigen::VectorXd& gb) const;
};

double boundary_mean(const TriMesh& mesh, const Eigen::VectorXd& u);

/// Subtract boundary_mean(u)/|dOmega| so the trace has zero mean; the gradient
/// is unchanged.
Eigen::VectorXd shift_to_diamond(const TriMesh& mesh, const Eigen::VectorXd& u);

/// Exact P1 node-value interpolation from a coarse mesh onto a nested fine mesh.
/// Throws if fine.ell is not a multiple of coarse.ell.
Eigen::VectorXd interpolate_nodal(const TriMesh& coarse, const Eigen::VectorXd& u,
                                  const TriMesh& fine);

/// Piecewise-linear interpolation of a boundary-chain field onto the nested
/// fine boundary chain (linear in arc length; corners are shared nodes).
Eigen::VectorXd interpolate_boundary(const TriMesh& coarse, const Eigen::VectorXd& gb,
                                     const TriMesh& fine);

void require_nested(const TriMesh& coarse, const TriMesh& fine);

} // namespace eid
