#include "elliptic_ident/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eid {

TriMesh build_uniform_mesh(int ell) {
    if (ell < 1)
        throw std::invalid_argument("build_uniform_mesh: subdivision count must be >= 1");

    TriMesh mesh;
    mesh.ell = ell;
    mesh.h = std::sqrt(8.0) / ell;
    mesh.element_area = 2.0 / (static_cast<double>(ell) * ell);

    const int n1 = ell + 1;
    mesh.nodes.reserve(n1 * n1);
    const double step = 2.0 / ell;
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n1; ++i)
            mesh.nodes.emplace_back(-1.0 + i * step, -1.0 + j * step);

    mesh.triangles.reserve(2 * ell * ell);
    for (int j = 0; j < ell; ++j) {
        for (int i = 0; i < ell; ++i) {
            const int ll = mesh.node_index(i, j);
            const int lr = mesh.node_index(i + 1, j);
            const int ul = mesh.node_index(i, j + 1);
            const int ur = mesh.node_index(i + 1, j + 1);
            mesh.triangles.push_back({ll, lr, ur}); // lower triangle
            mesh.triangles.push_back({ll, ur, ul}); // upper triangle
        }
    }

    // Counter-clockwise boundary chain from (-1,-1).
    mesh.boundary_nodes.reserve(4 * ell);
    for (int i = 0; i < ell; ++i) mesh.boundary_nodes.push_back(mesh.node_index(i, 0));
    for (int j = 0; j < ell; ++j) mesh.boundary_nodes.push_back(mesh.node_index(ell, j));
    for (int i = ell; i > 0; --i) mesh.boundary_nodes.push_back(mesh.node_index(i, ell));
    for (int j = ell; j > 0; --j) mesh.boundary_nodes.push_back(mesh.node_index(0, j));

    const int m = 4 * ell;
    mesh.boundary_edges.reserve(m);
    mesh.boundary_side.reserve(m);
    for (int k = 0; k < m; ++k) {
        mesh.boundary_edges.push_back({k, (k + 1) % m});
        mesh.boundary_side.push_back(k / ell);
    }

    mesh.element_grads.reserve(mesh.triangles.size());
    for (const auto& tri : mesh.triangles) {
        const auto& p0 = mesh.nodes[tri[0]];
        const auto& p1 = mesh.nodes[tri[1]];
        const auto& p2 = mesh.nodes[tri[2]];
        const double twoA = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                            (p2.x() - p0.x()) * (p1.y() - p0.y());
        std::array<Eigen::Vector2d, 3> g;
        g[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / twoA;
        g[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / twoA;
        g[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / twoA;
        mesh.element_grads.push_back(g);
    }

    return mesh;
}

int TriMesh::locate(const Eigen::Vector2d& x) const {
    const double step = 2.0 / ell;
    int i = static_cast<int>(std::floor((x.x() + 1.0) / step));
    int j = static_cast<int>(std::floor((x.y() + 1.0) / step));
    i = std::clamp(i, 0, ell - 1);
    j = std::clamp(j, 0, ell - 1);
    const double xi = (x.x() + 1.0) / step - i;
    const double eta = (x.y() + 1.0) / step - j;
    const int cell = 2 * (j * ell + i);
    return (eta <= xi) ? cell : cell + 1;
}

double TriMesh::eval_p1(const Eigen::VectorXd& u, const Eigen::Vector2d& x) const {
    const int t = locate(x);
    const auto& tri = triangles[t];
    const auto& g = element_grads[t];
    double value = 0.0;
    for (int a = 0; a < 3; ++a) {
        // phi_a(x) = phi_a(p_a) + grad . (x - p_a) = 1 + grad . (x - p_a)
        const double phi = 1.0 + g[a].dot(x - nodes[tri[a]]);
        value += u[tri[a]] * phi;
    }
    return value;
}

FemOps::FemOps(const TriMesh& m) : mesh(&m) {
    const int n = m.n_nodes();
    const int nb = m.n_boundary();

    std::vector<Eigen::Triplet<double>> mt, kt, bt;
    mt.reserve(m.n_elements() * 9);
    kt.reserve(m.n_elements() * 9);

    const double a12 = m.element_area / 12.0;
    for (int t = 0; t < m.n_elements(); ++t) {
        const auto& tri = m.triangles[t];
        const auto& g = m.element_grads[t];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                mt.emplace_back(tri[a], tri[b], a12 * (a == b ? 2.0 : 1.0));
                kt.emplace_back(tri[a], tri[b], m.element_area * g[a].dot(g[b]));
            }
        }
    }
    mass.resize(n, n);
    mass.setFromTriplets(mt.begin(), mt.end());
    stiffness_id.resize(n, n);
    stiffness_id.setFromTriplets(kt.begin(), kt.end());

    const double len = m.edge_length();
    bt.reserve(nb * 4);
    for (const auto& e : m.boundary_edges) {
        bt.emplace_back(e[0], e[0], len / 3.0);
        bt.emplace_back(e[0], e[1], len / 6.0);
        bt.emplace_back(e[1], e[0], len / 6.0);
        bt.emplace_back(e[1], e[1], len / 3.0);
    }
    boundary_mass.resize(nb, nb);
    boundary_mass.setFromTriplets(bt.begin(), bt.end());

    trace_weights = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < nb; ++k)
        trace_weights[m.boundary_nodes[k]] = len; // two half-edges per boundary node
}

Eigen::VectorXd FemOps::restrict_boundary(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(mesh->n_boundary());
    for (int k = 0; k < mesh->n_boundary(); ++k)
        out[k] = u[mesh->boundary_nodes[k]];
    return out;
}

Eigen::VectorXd FemOps::scatter_boundary(const Eigen::VectorXd& gb) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh->n_nodes());
    for (int k = 0; k < mesh->n_boundary(); ++k)
        out[mesh->boundary_nodes[k]] += gb[k];
    return out;
}

double FemOps::l2_norm(const Eigen::VectorXd& f) const {
    return std::sqrt(std::max(0.0, f.dot(mass * f)));
}

double FemOps::h1_seminorm(const Eigen::VectorXd& u) const {
    return std::sqrt(std::max(0.0, u.dot(stiffness_id * u)));
}

double FemOps::h1_norm(const Eigen::VectorXd& u) const {
    return std::sqrt(std::max(0.0, u.dot(mass * u) + u.dot(stiffness_id * u)));
}

double FemOps::boundary_l2_norm(const Eigen::VectorXd& gb) const {
    return std::sqrt(std::max(0.0, gb.dot(boundary_mass * gb)));
}

double boundary_mean(const TriMesh& mesh, const Eigen::VectorXd& u) {
    // Exact for P1 traces: per-edge trapezoid value.
    const double len = mesh.edge_length();
    double sum = 0.0;
    for (const auto& e : mesh.boundary_edges) {
        const double u0 = u[mesh.boundary_nodes[e[0]]];
        const double u1 = u[mesh.boundary_nodes[e[1]]];
        sum += len * 0.5 * (u0 + u1);
    }
    return sum;
}

Eigen::VectorXd shift_to_diamond(const TriMesh& mesh, const Eigen::VectorXd& u) {
    const double mean = boundary_mean(mesh, u) / 8.0;
    return u.array() - mean;
}

void require_nested(const TriMesh& coarse, const TriMesh& fine) {
    if (coarse.ell < 1 || fine.ell % coarse.ell != 0)
        throw std::invalid_argument("meshes are not nested: fine ell must be a multiple of coarse ell");
}

Eigen::VectorXd interpolate_nodal(const TriMesh& coarse, const Eigen::VectorXd& u,
                                  const TriMesh& fine) {
    require_nested(coarse, fine);
    Eigen::VectorXd out(fine.n_nodes());
    for (int k = 0; k < fine.n_nodes(); ++k)
        out[k] = coarse.eval_p1(u, fine.nodes[k]);
    return out;
}

Eigen::VectorXd interpolate_boundary(const TriMesh& coarse, const Eigen::VectorXd& gb,
                                     const TriMesh& fine) {
    require_nested(coarse, fine);
    const int ratio = fine.ell / coarse.ell;
    const int mc = coarse.n_boundary();
    Eigen::VectorXd out(fine.n_boundary());
    for (int k = 0; k < fine.n_boundary(); ++k) {
        const int kc = k / ratio;
        const double frac = static_cast<double>(k % ratio) / ratio;
        out[k] = (1.0 - frac) * gb[kc] + frac * gb[(kc + 1) % mc];
    }
    return out;
}

} // namespace eid
