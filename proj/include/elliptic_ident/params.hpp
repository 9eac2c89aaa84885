#pragma once

#include <array>
#include <vector>

#include "elliptic_ident/mesh.hpp"

namespace eid {

/// Symmetric 2x2 matrix stored as (q11, q12, q22).
struct SymMat2 {
    double q11 = 0.0, q12 = 0.0, q22 = 0.0;

    static SymMat2 identity() { return {1.0, 0.0, 1.0}; }
    static SymMat2 diag(double a, double b) { return {a, 0.0, b}; }

    SymMat2 operator+(const SymMat2& o) const { return {q11 + o.q11, q12 + o.q12, q22 + o.q22}; }
    SymMat2 operator-(const SymMat2& o) const { return {q11 - o.q11, q12 - o.q12, q22 - o.q22}; }
    SymMat2 operator*(double s) const { return {q11 * s, q12 * s, q22 * s}; }

    Eigen::Vector2d apply(const Eigen::Vector2d& v) const {
        return {q11 * v.x() + q12 * v.y(), q12 * v.x() + q22 * v.y()};
    }
    /// trace inner product M . N
    double dot(const SymMat2& o) const { return q11 * o.q11 + 2.0 * q12 * o.q12 + q22 * o.q22; }
    double frob_sq() const { return dot(*this); }
    /// Eigenvalues, ascending.
    std::array<double, 2> eigenvalues() const;
};

/// Symmetrized outer product a (x) a.
inline SymMat2 outer(const Eigen::Vector2d& a) {
    return {a.x() * a.x(), a.x() * a.y(), a.y() * a.y()};
}

struct Bounds {
    double q_lo = 0.05;
    double q_hi = 10.0;
};

/// The unknown triple (Q, f, g): per-element symmetric diffusion matrices,
/// nodal source field and boundary nodal flux field.
struct Param {
    std::vector<SymMat2> Q; // per triangle
    Eigen::VectorXd f;      // nodal, (ell+1)^2
    Eigen::VectorXd g;      // boundary chain, 4*ell

    static Param zeros(const TriMesh& mesh);
};

/// Frobenius-orthogonal projection onto matrices with eigenvalues in
/// [q_lo, q_hi]: clip the spectrum, keep the eigenvectors. Near-multiple
/// spectra short-circuit to clip(c)*I.
SymMat2 project_box(const SymMat2& m, const Bounds& bounds);

/// Apply project_box element-wise to Q; f and g pass through.
Param project_admissible(Param gamma, const Bounds& bounds);

bool is_admissible(const Param& gamma, const Bounds& bounds, double slack = 1e-12);

/// ||Q||^2 in the L2 matrix norm (exact, per-element constant integrand).
double q_norm_sq(const TriMesh& mesh, const std::vector<SymMat2>& Q);

/// Tikhonov penalty ||Q||^2 + ||f||^2 + ||g||^2 with exact P1/edge quadrature.
double penalty(const TriMesh& mesh, const FemOps& fem, const Param& gamma);

/// Product L2 distance between two parameter triples on the same level.
double product_distance(const TriMesh& mesh, const FemOps& fem,
                        const Param& a, const Param& b);

double product_norm(const TriMesh& mesh, const FemOps& fem, const Param& gamma);

} // namespace eid
