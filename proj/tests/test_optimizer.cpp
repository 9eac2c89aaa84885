#include <doctest.h>

#include <cmath>

#include "elliptic_ident/optimizer.hpp"
#include "elliptic_ident/selfcheck.hpp"

using namespace eid;

TEST_CASE("armijo acceptance rule") {
    const TriMesh mesh = build_uniform_mesh(3);
    const FemOps fem(mesh);
    SplitMix64 rng(61);
    const Param gamma = checks::random_admissible(mesh, rng);

    SUBCASE("stationary point accepts") {
        CHECK(armijo_accept(mesh, fem, gamma, gamma, 1.0, 1.0, 0.5, 1e-4));
    }
    SUBCASE("descent dominating the step penalty accepts") {
        Param tilde = gamma;
        tilde.f.array() += 1e-6;
        CHECK(armijo_accept(mesh, fem, gamma, tilde, 1.0, 0.9, 0.5, 1e-4));
    }
    SUBCASE("ascent rejects") {
        Param tilde = gamma;
        tilde.f.array() += 0.5;
        CHECK_FALSE(armijo_accept(mesh, fem, gamma, tilde, 1.0, 1.5, 0.5, 1e-4));
    }
}

TEST_CASE("stationary start returns immediately") {
    const TriMesh mesh = build_uniform_mesh(3);
    const FemOps fem(mesh);
    SplitMix64 rng(71);
    const Param gamma0 = checks::random_admissible(mesh, rng);
    const Eigen::VectorXd z = solve_neumann(mesh, fem, gamma0);

    OptimizerConfig config;
    const OptimizerResult result = run_optimizer(mesh, fem, z, 0.0, gamma0, config);
    CHECK(result.history.iterations == 0);
    CHECK(result.history.stop_reason == "tolerance");
    CHECK(product_distance(mesh, fem, result.gamma, gamma0) == 0.0);
}

TEST_CASE("accepted objective sequence is non-increasing and admissible") {
    for (int ell : {2, 3, 4}) {
        const TriMesh mesh = build_uniform_mesh(ell);
        const FemOps fem(mesh);
        SplitMix64 rng(100 + ell);
        const Param truth = checks::random_admissible(mesh, rng);
        Eigen::VectorXd z = solve_neumann(mesh, fem, truth);
        for (Eigen::Index i = 0; i < z.size(); ++i) z[i] += rng.next_symmetric(0.01);

        OptimizerConfig config;
        config.max_iters = 60;
        const Param gamma0 = project_admissible(checks::random_admissible(mesh, rng), config.bounds);
        const OptimizerResult result =
            run_optimizer(mesh, fem, z, 1e-3 * mesh.h, gamma0, config);

        REQUIRE(!result.history.accepted.empty());
        double previous = std::numeric_limits<double>::infinity();
        for (const auto& rec : result.history.accepted) {
            CHECK(rec.total <= previous + 1e-14);
            previous = rec.total;
        }
        CHECK(is_admissible(result.gamma, config.bounds, 1e-10));
    }
}

TEST_CASE("kkt residual decreases with the iteration budget") {
    const TriMesh mesh = build_uniform_mesh(6);
    const FemOps fem(mesh);
    const GroundTruth truth;
    const Eigen::VectorXd phi = exact_state(mesh, fem, truth);
    const double rho = 0.05;
    const auto [z, delta] = make_noisy_data(mesh, fem, phi, rho, mesh.h, 10.0, 3);
    const Eigen::VectorXd z_bar = shift_to_diamond(mesh, z);
    const Param gamma0 = initial_guess(mesh);

    OptimizerConfig config;
    config.tau1_factor = 0.0;
    config.tau2_factor = 0.0;

    double previous = std::numeric_limits<double>::infinity();
    for (int iters : {100, 400, 1600}) {
        config.max_iters = iters;
        const OptimizerResult result = run_optimizer(mesh, fem, z, rho, gamma0, config);
        const double residual = kkt_residual(mesh, fem, result.gamma, z_bar, rho, config.bounds);
        CHECK(residual < previous);
        previous = residual;
    }
}

TEST_CASE("invalid configurations rejected") {
    const TriMesh mesh = build_uniform_mesh(2);
    const FemOps fem(mesh);
    const Param gamma0 = initial_guess(mesh);
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(mesh.n_nodes());

    OptimizerConfig config;
    config.beta0 = 1.5;
    CHECK_THROWS_AS(run_optimizer(mesh, fem, z, 1e-3, gamma0, config), std::invalid_argument);
    config.beta0 = 0.75;
    config.max_iters = 0;
    CHECK_THROWS_AS(run_optimizer(mesh, fem, z, 1e-3, gamma0, config), std::invalid_argument);
}
