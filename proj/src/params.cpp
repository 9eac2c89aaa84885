#include "elliptic_ident/params.hpp"

#include <cmath>
#include <stdexcept>

namespace eid {

std::array<double, 2> SymMat2::eigenvalues() const {
    const double mean = 0.5 * (q11 + q22);
    const double r = std::hypot(0.5 * (q11 - q22), q12);
    return {mean - r, mean + r};
}

Param Param::zeros(const TriMesh& mesh) {
    Param p;
    p.Q.assign(mesh.n_elements(), SymMat2{});
    p.f = Eigen::VectorXd::Zero(mesh.n_nodes());
    p.g = Eigen::VectorXd::Zero(mesh.n_boundary());
    return p;
}

SymMat2 project_box(const SymMat2& m, const Bounds& bounds) {
    const double mean = 0.5 * (m.q11 + m.q22);
    const double dx = 0.5 * (m.q11 - m.q22);
    const double r = std::hypot(dx, m.q12);

    auto clip = [&](double v) { return std::min(std::max(v, bounds.q_lo), bounds.q_hi); };

    // Near-multiple spectrum: the projection is clip(mean)*I regardless of
    // eigenvectors.
    const double scale = std::abs(mean) + r;
    if (r <= 1e-14 * std::max(1.0, scale))
        return SymMat2::diag(clip(mean), clip(mean));

    const double lo = clip(mean - r);
    const double hi = clip(mean + r);
    // Eigenvector for eigenvalue mean+r is (cos t, sin t) with
    // cos(2t) = dx/r, sin(2t) = q12/r. Reassemble with clipped spectrum.
    const double c2 = dx / r;
    const double s2 = m.q12 / r;
    const double avg = 0.5 * (hi + lo);
    const double dif = 0.5 * (hi - lo);
    return {avg + dif * c2, dif * s2, avg - dif * c2};
}

Param project_admissible(Param gamma, const Bounds& bounds) {
    for (auto& q : gamma.Q) q = project_box(q, bounds);
    return gamma;
}

bool is_admissible(const Param& gamma, const Bounds& bounds, double slack) {
    for (const auto& q : gamma.Q) {
        const auto ev = q.eigenvalues();
        if (ev[0] < bounds.q_lo - slack || ev[1] > bounds.q_hi + slack) return false;
    }
    return true;
}

double q_norm_sq(const TriMesh& mesh, const std::vector<SymMat2>& Q) {
    double sum = 0.0;
    for (const auto& q : Q) sum += q.frob_sq();
    return mesh.element_area * sum;
}

double penalty(const TriMesh& mesh, const FemOps& fem, const Param& gamma) {
    const double qf = q_norm_sq(mesh, gamma.Q);
    const double fl = gamma.f.dot(fem.mass * gamma.f);
    const double gl = gamma.g.dot(fem.boundary_mass * gamma.g);
    return qf + fl + gl;
}

double product_distance(const TriMesh& mesh, const FemOps& fem,
                        const Param& a, const Param& b) {
    if (a.Q.size() != b.Q.size() || a.f.size() != b.f.size() || a.g.size() != b.g.size())
        throw std::invalid_argument("product_distance: parameters live on different levels");
    double sum = 0.0;
    for (std::size_t t = 0; t < a.Q.size(); ++t)
        sum += (a.Q[t] - b.Q[t]).frob_sq();
    sum *= mesh.element_area;
    const Eigen::VectorXd df = a.f - b.f;
    const Eigen::VectorXd dg = a.g - b.g;
    sum += df.dot(fem.mass * df) + dg.dot(fem.boundary_mass * dg);
    return std::sqrt(std::max(0.0, sum));
}

double product_norm(const TriMesh& mesh, const FemOps& fem, const Param& gamma) {
    return std::sqrt(std::max(0.0, penalty(mesh, fem, gamma)));
}

} // namespace eid
