#include "elliptic_ident/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "elliptic_ident/quadrature.hpp"

namespace eid {

Eigen::SparseMatrix<double> assemble_stiffness(const TriMesh& mesh,
                                               const std::vector<SymMat2>& Q) {
    if (static_cast<int>(Q.size()) != mesh.n_elements())
        throw std::invalid_argument("assemble_stiffness: Q size does not match element count");

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(mesh.n_elements() * 9);
    for (int t = 0; t < mesh.n_elements(); ++t) {
        if (!std::isfinite(Q[t].q11) || !std::isfinite(Q[t].q12) || !std::isfinite(Q[t].q22))
            throw std::invalid_argument("assemble_stiffness: non-finite element matrix");
        const auto& tri = mesh.triangles[t];
        const auto& g = mesh.element_grads[t];
        for (int a = 0; a < 3; ++a) {
            const Eigen::Vector2d qg = Q[t].apply(g[a]);
            for (int b = 0; b < 3; ++b)
                triplets.emplace_back(tri[b], tri[a], mesh.element_area * qg.dot(g[b]));
        }
    }
    Eigen::SparseMatrix<double> K(mesh.n_nodes(), mesh.n_nodes());
    K.setFromTriplets(triplets.begin(), triplets.end());
    return K;
}

Eigen::VectorXd assemble_load(const TriMesh& mesh, const FemOps& fem,
                              const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    return fem.mass * f + fem.scatter_boundary(fem.boundary_mass * g);
}

Eigen::VectorXd assemble_load_functions(
    const TriMesh& mesh,
    const std::function<double(const Eigen::Vector2d&)>& f,
    const std::function<double(const Eigen::Vector2d&, int)>& g,
    const std::vector<double>& g_breaks) {
    Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.n_nodes());

    if (f) {
        for (int t = 0; t < mesh.n_elements(); ++t) {
            const auto& tri = mesh.triangles[t];
            const auto& p0 = mesh.nodes[tri[0]];
            const auto& p1 = mesh.nodes[tri[1]];
            const auto& p2 = mesh.nodes[tri[2]];
            for (const auto& qp : tri_quad_deg5()) {
                const Eigen::Vector2d x = qp.l0 * p0 + qp.l1 * p1 + qp.l2 * p2;
                const double fw = f(x) * qp.w * mesh.element_area;
                load[tri[0]] += fw * qp.l0;
                load[tri[1]] += fw * qp.l1;
                load[tri[2]] += fw * qp.l2;
            }
        }
    }

    if (g) {
        const double len = mesh.edge_length();
        for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
            const int k0 = mesh.boundary_edges[e][0];
            const int k1 = mesh.boundary_edges[e][1];
            const int n0 = mesh.boundary_nodes[k0];
            const int n1 = mesh.boundary_nodes[k1];
            const Eigen::Vector2d p0 = mesh.nodes[n0];
            const Eigen::Vector2d p1 = mesh.nodes[n1];
            const int side = mesh.boundary_side[e];
            const double s0 = static_cast<double>(k0) * len;

            // Split the edge at any break point falling strictly inside it.
            std::vector<double> cuts = {0.0, 1.0};
            for (double sb : g_breaks) {
                const double frac = (sb - s0) / len;
                if (frac > 1e-12 && frac < 1.0 - 1e-12) cuts.push_back(frac);
            }
            std::sort(cuts.begin(), cuts.end());

            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                const double fa = cuts[c], fb = cuts[c + 1];
                const double half = 0.5 * (fb - fa);
                const double mid = 0.5 * (fa + fb);
                for (const auto& [xi, w] : gauss5()) {
                    const double frac = mid + half * xi;
                    const Eigen::Vector2d p = (1.0 - frac) * p0 + frac * p1;
                    const double gw = g(p, side) * w * half * len;
                    load[n0] += gw * (1.0 - frac);
                    load[n1] += gw * frac;
                }
            }
        }
    }

    return load;
}

NeumannSolver::NeumannSolver(const TriMesh& m, const FemOps& f,
                             const std::vector<SymMat2>& Q, double tol)
    : mesh(&m), fem(&f), stiffness(assemble_stiffness(m, Q)), tol_(tol) {
    const int n = m.n_nodes();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(stiffness.nonZeros() + 2 * m.n_boundary());
    for (int col = 0; col < stiffness.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness, col); it; ++it)
            triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int i = 0; i < n; ++i) {
        const double b = f.trace_weights[i];
        if (b != 0.0) {
            triplets.emplace_back(i, n, b);
            triplets.emplace_back(n, i, b);
        }
    }
    saddle_.resize(n + 1, n + 1);
    saddle_.setFromTriplets(triplets.begin(), triplets.end());
    saddle_.makeCompressed();
    lu_.compute(saddle_);
    if (lu_.info() != Eigen::Success)
        throw std::runtime_error("NeumannSolver: saddle factorization failed");
}

Eigen::VectorXd NeumannSolver::solve(const Eigen::VectorXd& load) const {
    const int n = mesh->n_nodes();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = load;
    rhs[n] = 0.0;
    const Eigen::VectorXd sol = lu_.solve(rhs);
    const double res = (saddle_ * sol - rhs).norm();
    const double scale = std::max(1.0, rhs.norm());
    if (!sol.allFinite() || res > tol_ * scale)
        throw std::runtime_error("NeumannSolver: linear solve residual " + std::to_string(res / scale) +
                                 " exceeds tolerance");
    return sol.head(n);
}

Eigen::VectorXd solve_neumann(const TriMesh& mesh, const FemOps& fem,
                              const Param& gamma, double tol) {
    NeumannSolver solver(mesh, fem, gamma.Q, tol);
    return solver.solve(assemble_load(mesh, fem, gamma.f, gamma.g));
}

Eigen::VectorXd solve_sensitivity(const TriMesh& mesh, const FemOps& fem,
                                  const Param& gamma, const Eigen::VectorXd& state,
                                  const Param& direction, double tol) {
    Eigen::VectorXd load = assemble_load(mesh, fem, direction.f, direction.g);
    // -int H grad(U) . grad(phi), exact per element.
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto& g = mesh.element_grads[t];
        Eigen::Vector2d gu = Eigen::Vector2d::Zero();
        for (int a = 0; a < 3; ++a) gu += state[tri[a]] * g[a];
        const Eigen::Vector2d hgu = direction.Q[t].apply(gu);
        for (int a = 0; a < 3; ++a)
            load[tri[a]] -= mesh.element_area * hgu.dot(g[a]);
    }
    NeumannSolver solver(mesh, fem, gamma.Q, tol);
    return solver.solve(load);
}

} // namespace eid
