#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "elliptic_ident/experiment.hpp"

namespace eid::checks {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

/// Q = I, f = 0, g = outward-normal x-component must recover U = x1 to the
/// stated relative H1 error; the boundary load integrates the discontinuous
/// flux exactly per edge.
CheckResult manufactured_solution(const std::vector<int>& ells, double tol,
                                  double solver_tol = 1e-10);

/// L2-paired gradient vs central finite differences of the objective, and vs
/// the sensitivity-solve route. flip_grad_q injects a sign error (mutation
/// detection in tests).
CheckResult gradient_check(int ell, int trials, double eps, double tol_fd,
                           double tol_sens, std::uint64_t seed,
                           bool flip_grad_q = false);

/// Midpoint convexity of the objective on random admissible pairs.
CheckResult convexity_check(int ell, int pairs, double slack, std::uint64_t seed);

/// Spectral projection: idempotence, nonexpansiveness, eigenvalue containment
/// and the closed-form worked example.
CheckResult projection_check(int pairs, std::uint64_t seed);

/// Run the optimizer to high accuracy and verify the fixed-point residual.
CheckResult kkt_check(int ell, double rho, int max_iters, double tol, std::uint64_t seed);

/// Seeded random admissible parameter / direction generators shared by checks
/// and tests.
Param random_admissible(const TriMesh& mesh, SplitMix64& rng,
                        double eig_lo = 0.3, double eig_hi = 5.0);
Param random_direction(const TriMesh& mesh, SplitMix64& rng);

std::vector<CheckResult> run_all(const std::vector<int>& ells, std::uint64_t seed);

} // namespace eid::checks
