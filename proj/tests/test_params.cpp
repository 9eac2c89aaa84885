#include <doctest.h>

#include <cmath>

#include "elliptic_ident/experiment.hpp"
#include "elliptic_ident/params.hpp"

using namespace eid;

TEST_CASE("spectral projection onto the admissible box") {
    const Bounds bounds;

    SUBCASE("interior point fixed") {
        const SymMat2 p = project_box(SymMat2::identity(), bounds);
        CHECK(p.q11 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(p.q12 == doctest::Approx(0.0));
        CHECK(p.q22 == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("diagonal clipping") {
        const SymMat2 p = project_box(SymMat2::diag(20.0, 1.0), bounds);
        CHECK(p.q11 == doctest::Approx(10.0).epsilon(1e-14));
        CHECK(p.q12 == doctest::Approx(0.0));
        CHECK(p.q22 == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("worked off-diagonal example") {
        const SymMat2 p = project_box({0.0, 1.0, 0.0}, bounds);
        CHECK(std::abs(p.q11 - 0.525) < 1e-12);
        CHECK(std::abs(p.q12 - 0.475) < 1e-12);
        CHECK(std::abs(p.q22 - 0.525) < 1e-12);
    }
    SUBCASE("repeated eigenvalues shortcut") {
        const SymMat2 p = project_box(SymMat2::diag(42.0, 42.0), bounds);
        CHECK(p.q11 == doctest::Approx(10.0));
        CHECK(p.q12 == 0.0);
        CHECK(p.q22 == doctest::Approx(10.0));
    }
    SUBCASE("variational inequality against random feasible points") {
        SplitMix64 rng(7);
        for (int trial = 0; trial < 200; ++trial) {
            const SymMat2 a = {rng.next_symmetric(15.0), rng.next_symmetric(15.0),
                               rng.next_symmetric(15.0)};
            const SymMat2 pa = project_box(a, bounds);
            // Random feasible B via clipped spectrum of another random matrix.
            const SymMat2 b = project_box({rng.next_symmetric(15.0), rng.next_symmetric(15.0),
                                           rng.next_symmetric(15.0)},
                                          bounds);
            CHECK((a - pa).dot(b - pa) <= 1e-10);
        }
    }
    SUBCASE("rayleigh quotients contained for random directions") {
        SplitMix64 rng(11);
        for (int trial = 0; trial < 100; ++trial) {
            const SymMat2 pa = project_box({rng.next_symmetric(30.0), rng.next_symmetric(30.0),
                                            rng.next_symmetric(30.0)},
                                           bounds);
            const double theta = 6.283185307 * rng.next_unit();
            const Eigen::Vector2d xi(std::cos(theta), std::sin(theta));
            const double quotient = pa.apply(xi).dot(xi);
            CHECK(quotient >= bounds.q_lo - 1e-12);
            CHECK(quotient <= bounds.q_hi + 1e-12);
        }
    }
}

TEST_CASE("project_admissible acts element-wise on Q only") {
    const TriMesh mesh = build_uniform_mesh(2);
    Param gamma = Param::zeros(mesh);
    for (auto& q : gamma.Q) q = SymMat2::identity();
    gamma.f.setConstant(3.0);
    gamma.g.setConstant(-2.0);

    SUBCASE("idempotent on admissible input") {
        const Param p = project_admissible(gamma, Bounds{});
        for (std::size_t t = 0; t < p.Q.size(); ++t)
            CHECK((p.Q[t] - gamma.Q[t]).frob_sq() < 1e-28);
        CHECK((p.f - gamma.f).norm() == 0.0);
        CHECK((p.g - gamma.g).norm() == 0.0);
    }
    SUBCASE("zero matrices clip up to q_lo * I") {
        Param zero = Param::zeros(mesh);
        const Param p = project_admissible(zero, Bounds{});
        for (const auto& q : p.Q) {
            CHECK(q.q11 == doctest::Approx(0.05));
            CHECK(q.q12 == 0.0);
            CHECK(q.q22 == doctest::Approx(0.05));
        }
    }
    SUBCASE("locality") {
        gamma.Q[3] = SymMat2::diag(20.0, 1.0);
        const Param p = project_admissible(gamma, Bounds{});
        CHECK(p.Q[3].q11 == doctest::Approx(10.0));
        CHECK(p.Q[3].q22 == doctest::Approx(1.0));
        for (std::size_t t = 0; t < p.Q.size(); ++t)
            if (t != 3) CHECK((p.Q[t] - gamma.Q[t]).frob_sq() < 1e-28);
    }
}

TEST_CASE("penalty with exact quadratures") {
    const TriMesh mesh = build_uniform_mesh(3);
    const FemOps fem(mesh);

    CHECK(penalty(mesh, fem, Param::zeros(mesh)) == 0.0);

    Param qi = Param::zeros(mesh);
    for (auto& q : qi.Q) q = SymMat2::identity();
    CHECK(penalty(mesh, fem, qi) == doctest::Approx(8.0).epsilon(1e-13));

    Param f1 = Param::zeros(mesh);
    f1.f.setOnes();
    CHECK(penalty(mesh, fem, f1) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("product distance") {
    const TriMesh mesh = build_uniform_mesh(3);
    const FemOps fem(mesh);
    SplitMix64 rng(3);

    auto random_param = [&]() {
        Param p = Param::zeros(mesh);
        for (auto& q : p.Q)
            q = {rng.next_symmetric(2.0), rng.next_symmetric(2.0), rng.next_symmetric(2.0)};
        for (Eigen::Index i = 0; i < p.f.size(); ++i) p.f[i] = rng.next_symmetric(2.0);
        for (Eigen::Index k = 0; k < p.g.size(); ++k) p.g[k] = rng.next_symmetric(2.0);
        return p;
    };

    const Param a = random_param();
    const Param b = random_param();
    const Param c = random_param();

    CHECK(product_distance(mesh, fem, a, a) == 0.0);
    CHECK(product_distance(mesh, fem, a, b) ==
          doctest::Approx(product_distance(mesh, fem, b, a)).epsilon(1e-14));
    CHECK(product_distance(mesh, fem, a, c) <=
          product_distance(mesh, fem, a, b) + product_distance(mesh, fem, b, c) + 1e-12);

    const TriMesh other = build_uniform_mesh(4);
    const FemOps other_fem(other);
    CHECK_THROWS_AS(product_distance(mesh, fem, a, Param::zeros(other)), std::invalid_argument);
}

TEST_CASE("projection is Frobenius nonexpansive") {
    SplitMix64 rng(5);
    const Bounds bounds;
    for (int trial = 0; trial < 300; ++trial) {
        const SymMat2 a = {rng.next_symmetric(25.0), rng.next_symmetric(25.0),
                           rng.next_symmetric(25.0)};
        const SymMat2 b = {rng.next_symmetric(25.0), rng.next_symmetric(25.0),
                           rng.next_symmetric(25.0)};
        const double lhs = std::sqrt((project_box(a, bounds) - project_box(b, bounds)).frob_sq());
        const double rhs = std::sqrt((a - b).frob_sq());
        CHECK(lhs <= rhs + 1e-12);
    }
}
