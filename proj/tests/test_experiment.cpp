#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "elliptic_ident/experiment.hpp"
#include "elliptic_ident/io.hpp"

using namespace eid;

TEST_CASE("ground truth coefficients") {
    const GroundTruth truth;

    SUBCASE("values at the origin") {
        const SymMat2 q = truth.Q({0.0, 0.0});
        CHECK(q.q11 == 2.0);
        CHECK(q.q12 == 1.0);
        CHECK(q.q22 == 3.0);
        CHECK(truth.f({0.0, 0.0}) ==
              doctest::Approx(-(3.0 + 2.0 * std::numbers::pi) / 48.0).epsilon(1e-14));
    }
    SUBCASE("region values") {
        CHECK(truth.Q({0.9, 0.9}).q11 == 1.0);
        CHECK(truth.Q({0.9, 0.9}).q12 == 0.0);
        CHECK(truth.Q({0.9, 0.9}).q22 == 2.0);
        CHECK(truth.f({-0.5, 0.5}) ==
              doctest::Approx((93.0 - 2.0 * std::numbers::pi) / 48.0));
        CHECK(truth.f({0.5, -0.5}) ==
              doctest::Approx((45.0 - 2.0 * std::numbers::pi) / 48.0));
    }
    SUBCASE("boundary flux") {
        CHECK(truth.g({0.5, -1.0}, 0) == 1.0);
        CHECK(truth.g({-0.5, -1.0}, 0) == -2.0);
        CHECK(truth.g({1.0, -0.5}, 1) == 4.0);
        CHECK(truth.g({1.0, 0.5}, 1) == -3.0);
        CHECK(truth.g({-0.5, 1.0}, 2) == -1.0);
        CHECK(truth.g({0.5, 1.0}, 2) == 2.0);
        CHECK(truth.g({-1.0, -0.5}, 3) == 3.0);
        CHECK(truth.g({-1.0, 0.5}, 3) == -4.0);
    }
    SUBCASE("points outside the closed square rejected") {
        CHECK_THROWS_AS(truth.Q({1.5, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(truth.f({0.0, -1.5}), std::invalid_argument);
    }
    SUBCASE("admissible everywhere on a sample grid") {
        for (int i = 0; i < 200; ++i) {
            for (int j = 0; j < 200; ++j) {
                const Eigen::Vector2d x(-1.0 + 2.0 * i / 199.0, -1.0 + 2.0 * j / 199.0);
                const auto ev = truth.Q(x).eigenvalues();
                CHECK(ev[0] >= 1.0 - 1e-12);
                CHECK(ev[1] <= 2.5 + std::sqrt(1.25) + 1e-12);
            }
        }
    }
}

TEST_CASE("exact state") {
    const GroundTruth truth;
    for (int ell : {3, 6}) {
        const TriMesh mesh = build_uniform_mesh(ell);
        const FemOps fem(mesh);
        const Eigen::VectorXd phi = exact_state(mesh, fem, truth);
        CHECK(phi.size() == (ell + 1) * (ell + 1));
        CHECK(std::abs(boundary_mean(mesh, phi)) < 1e-10 * std::max(1.0, phi.norm()));
    }

    SUBCASE("trivial coefficients give the zero state") {
        const TriMesh mesh = build_uniform_mesh(4);
        const FemOps fem(mesh);
        struct Trivial : GroundTruth {
        } trivial;
        // Replace by hand: identity diffusion, no sources.
        std::vector<SymMat2> Q(mesh.n_elements(), SymMat2::identity());
        const Eigen::VectorXd load = assemble_load_functions(
            mesh, [](const Eigen::Vector2d&) { return 0.0; },
            [](const Eigen::Vector2d&, int) { return 0.0; });
        NeumannSolver solver(mesh, fem, Q, 1e-10);
        CHECK(solver.solve(load).norm() < 1e-12);
    }
}

TEST_CASE("noise generation") {
    const TriMesh mesh = build_uniform_mesh(3);
    const FemOps fem(mesh);
    const GroundTruth truth;
    const Eigen::VectorXd phi = exact_state(mesh, fem, truth);
    const double rho = 1e-3 * mesh.h;

    SUBCASE("analytic noise amplitude") {
        const double delta_bar = 10.0 * std::sqrt(rho) * std::pow(mesh.h, 1.5);
        CHECK(delta_bar == doctest::Approx(0.2811).epsilon(1e-3));
    }
    SUBCASE("deterministic for a fixed seed") {
        const auto [z1, d1] = make_noisy_data(mesh, fem, phi, rho, mesh.h, 10.0, 42);
        const auto [z2, d2] = make_noisy_data(mesh, fem, phi, rho, mesh.h, 10.0, 42);
        CHECK((z1 - z2).norm() == 0.0);
        CHECK(d1 == d2);
        const auto [z3, d3] = make_noisy_data(mesh, fem, phi, rho, mesh.h, 10.0, 43);
        CHECK((z1 - z3).norm() > 0.0);
    }
    SUBCASE("noise stays within the stated amplitude") {
        const double delta_bar = 10.0 * std::sqrt(rho) * std::pow(mesh.h, 1.5);
        const auto [z, d] = make_noisy_data(mesh, fem, phi, rho, mesh.h, 10.0, 7);
        CHECK(((z - phi).cwiseAbs().array() <= delta_bar).all());
        CHECK(d > 0.0);
    }
}

TEST_CASE("error metrics") {
    const TriMesh mesh = build_uniform_mesh(6);
    const FemOps fem(mesh);
    const GroundTruth truth;
    const Eigen::VectorXd phi = exact_state(mesh, fem, truth);

    const Param sampled = sample_truth(mesh, truth);

    // All three metrics vanish when the state matches the reference exactly.
    const auto errors = compute_errors(mesh, fem, sampled, phi, truth, phi);
    CHECK(errors[0] == 0.0); // Delta
    CHECK(errors[1] == 0.0); // Sigma
    CHECK(errors[2] == 0.0); // Lambda

    SUBCASE("output-metric Delta interpolates between L2 and energy") {
        Eigen::VectorXd perturbed = phi;
        SplitMix64 rng(5);
        for (Eigen::Index i = 0; i < perturbed.size(); ++i)
            perturbed[i] += rng.next_symmetric(0.1);
        const auto e = compute_errors(mesh, fem, sampled, perturbed, truth, phi);
        CHECK(e[0] > 0.0);
        CHECK(e[1] > 0.0);
        CHECK(e[2] > 0.0);
        // Delta^2 = Sigma * (Q-energy norm of the state error).
        const Eigen::VectorXd du = perturbed - phi;
        const Eigen::SparseMatrix<double> K = assemble_stiffness(mesh, sampled.Q);
        const double energy = std::sqrt(du.dot(K * du));
        CHECK(e[0] * e[0] == doctest::Approx(e[1] * energy).epsilon(1e-12));
    }

    SUBCASE("level mismatch rejected") {
        const TriMesh other = build_uniform_mesh(3);
        const FemOps other_fem(other);
        CHECK_THROWS_AS(compute_errors(other, other_fem, sampled, phi, truth, phi),
                        std::invalid_argument);
    }
}

TEST_CASE("experimental order of convergence") {
    CHECK(eoc({0.6349, 0.1974}, {0.9428, 0.4714})[0] == doctest::Approx(1.6854).epsilon(1e-4));
    CHECK(eoc({0.5, 0.5}, {0.8, 0.4})[0] == doctest::Approx(0.0));
    CHECK(eoc({0.4, 0.2}, {0.8, 0.4})[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(eoc({1.0}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(eoc({1.0, 0.0}, {0.8, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(eoc({1.0, -0.1}, {0.8, 0.4}), std::invalid_argument);
}

TEST_CASE("parameter interpolation to a finer level") {
    const TriMesh coarse = build_uniform_mesh(3);
    const TriMesh fine = build_uniform_mesh(6);
    SplitMix64 rng(17);

    Param gamma = Param::zeros(coarse);
    for (auto& q : gamma.Q)
        q = {1.0 + rng.next_unit(), rng.next_symmetric(0.3), 1.0 + rng.next_unit()};
    for (Eigen::Index i = 0; i < gamma.f.size(); ++i) gamma.f[i] = rng.next_symmetric(1.0);
    for (Eigen::Index k = 0; k < gamma.g.size(); ++k) gamma.g[k] = rng.next_symmetric(1.0);

    const Param fine_gamma = interpolate_param(coarse, gamma, fine);
    CHECK(fine_gamma.Q.size() == static_cast<std::size_t>(fine.n_elements()));

    // Fine elements inherit the containing coarse element's matrix.
    for (int t = 0; t < fine.n_elements(); ++t) {
        const int tc = coarse.locate(fine.centroid(t));
        CHECK((fine_gamma.Q[t] - gamma.Q[tc]).frob_sq() == 0.0);
    }
    // Shared boundary nodes keep their values.
    for (int k = 0; k < coarse.n_boundary(); ++k)
        CHECK(fine_gamma.g[2 * k] == doctest::Approx(gamma.g[k]).epsilon(1e-14));
}

TEST_CASE("multilevel driver on a short cascade") {
    ExperimentConfig config;
    config.levels = {3, 6};
    config.seed = 11;
    config.optimizer.max_iters = 40;

    const auto results = run_multilevel(config);
    REQUIRE(results.size() == 2);
    CHECK(results[0].report.ell == 3);
    CHECK(results[0].report.rho == doctest::Approx(1e-3 * std::sqrt(8.0) / 3.0).epsilon(1e-14));
    CHECK(results[0].report.delta > 0.0);
    CHECK(results[1].report.eoc_coeff.has_value());
    CHECK_FALSE(results[0].report.eoc_coeff.has_value());

    SUBCASE("deterministic for the same seed") {
        const auto again = run_multilevel(config);
        std::ostringstream a, b;
        write_table1(a, {results[0].report, results[1].report});
        write_table1(b, {again[0].report, again[1].report});
        CHECK(a.str() == b.str());
        std::ostringstream a2, b2;
        write_table2(a2, {results[0].report, results[1].report});
        write_table2(b2, {again[0].report, again[1].report});
        CHECK(a2.str() == b2.str());
    }

    SUBCASE("invalid level lists rejected") {
        ExperimentConfig bad = config;
        bad.levels = {4, 6};
        CHECK_THROWS_AS(run_multilevel(bad), std::invalid_argument);
        bad.levels = {6, 3};
        CHECK_THROWS_AS(run_multilevel(bad), std::invalid_argument);
        bad.levels = {};
        CHECK_THROWS_AS(run_multilevel(bad), std::invalid_argument);
    }
}
