#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "elliptic_ident/io.hpp"
#include "elliptic_ident/selfcheck.hpp"

namespace py = pybind11;
using namespace eid;

PYBIND11_MODULE(elliptic_ident, m) {
    m.doc() = "Identification of diffusion matrix, source and boundary flux of an "
              "elliptic Neumann problem from noisy state measurements.";

    py::class_<SymMat2>(m, "SymMat2")
        .def(py::init<double, double, double>(), py::arg("q11"), py::arg("q12"), py::arg("q22"))
        .def_readwrite("q11", &SymMat2::q11)
        .def_readwrite("q12", &SymMat2::q12)
        .def_readwrite("q22", &SymMat2::q22)
        .def("eigenvalues", &SymMat2::eigenvalues)
        .def("__repr__", [](const SymMat2& q) {
            return "SymMat2(" + format_double(q.q11) + ", " + format_double(q.q12) + ", " +
                   format_double(q.q22) + ")";
        });

    py::class_<Bounds>(m, "Bounds")
        .def(py::init<>())
        .def_readwrite("q_lo", &Bounds::q_lo)
        .def_readwrite("q_hi", &Bounds::q_hi);

    py::class_<TriMesh>(m, "TriMesh")
        .def_readonly("ell", &TriMesh::ell)
        .def_readonly("h", &TriMesh::h)
        .def_readonly("nodes", &TriMesh::nodes)
        .def_readonly("triangles", &TriMesh::triangles)
        .def_property_readonly("n_nodes", &TriMesh::n_nodes)
        .def_property_readonly("n_elements", &TriMesh::n_elements)
        .def_property_readonly("n_boundary", &TriMesh::n_boundary);

    py::class_<Param>(m, "Param")
        .def_readwrite("Q", &Param::Q)
        .def_readwrite("f", &Param::f)
        .def_readwrite("g", &Param::g);

    py::class_<ObjectiveEval>(m, "ObjectiveEval")
        .def_readonly("misfit", &ObjectiveEval::misfit)
        .def_readonly("penalty", &ObjectiveEval::penalty)
        .def_readonly("total", &ObjectiveEval::total)
        .def_readonly("grad_f", &ObjectiveEval::grad_f)
        .def_readonly("grad_g", &ObjectiveEval::grad_g)
        .def_readonly("state", &ObjectiveEval::state);

    py::class_<IterateHistory>(m, "IterateHistory")
        .def_readonly("stop_reason", &IterateHistory::stop_reason)
        .def_readonly("iterations", &IterateHistory::iterations);

    py::class_<OptimizerResult>(m, "OptimizerResult")
        .def_readonly("gamma", &OptimizerResult::gamma)
        .def_readonly("eval", &OptimizerResult::eval)
        .def_readonly("history", &OptimizerResult::history);

    py::class_<LevelReport>(m, "LevelReport")
        .def_readonly("ell", &LevelReport::ell)
        .def_readonly("h", &LevelReport::h)
        .def_readonly("rho", &LevelReport::rho)
        .def_readonly("delta", &LevelReport::delta)
        .def_readonly("iterations", &LevelReport::iterations)
        .def_readonly("error_coeff", &LevelReport::error_coeff)
        .def_readonly("error_l2", &LevelReport::error_l2)
        .def_readonly("error_h1", &LevelReport::error_h1)
        .def_readonly("eoc_coeff", &LevelReport::eoc_coeff)
        .def_readonly("eoc_l2", &LevelReport::eoc_l2)
        .def_readonly("eoc_h1", &LevelReport::eoc_h1);

    m.def("build_mesh", &build_uniform_mesh, py::arg("ell"));

    m.def("project_box", &project_box, py::arg("m"), py::arg("bounds") = Bounds{});

    m.def(
        "solve_forward",
        [](const TriMesh& mesh, const Param& gamma) {
            const FemOps fem(mesh);
            return solve_neumann(mesh, fem, gamma);
        },
        py::arg("mesh"), py::arg("gamma"),
        "Pure-Neumann forward solve on the zero-boundary-mean subspace.");

    m.def(
        "exact_state",
        [](const TriMesh& mesh) {
            const FemOps fem(mesh);
            return exact_state(mesh, fem, GroundTruth{});
        },
        py::arg("mesh"), "Discrete state of the reference ground-truth coefficients.");

    m.def(
        "noisy_data",
        [](const TriMesh& mesh, const Eigen::VectorXd& phi, double rho, double noise_factor,
           std::uint64_t seed) {
            const FemOps fem(mesh);
            return make_noisy_data(mesh, fem, phi, rho, mesh.h, noise_factor, seed);
        },
        py::arg("mesh"), py::arg("phi"), py::arg("rho"), py::arg("noise_factor"), py::arg("seed"),
        "Perturbed observation and its realized L2 data error.");

    m.def(
        "evaluate",
        [](const TriMesh& mesh, const Param& gamma, const Eigen::VectorXd& z, double rho) {
            const FemOps fem(mesh);
            return eval_objective(mesh, fem, gamma, shift_to_diamond(mesh, z), rho);
        },
        py::arg("mesh"), py::arg("gamma"), py::arg("z"), py::arg("rho"));

    m.def(
        "minimize",
        [](const TriMesh& mesh, const Eigen::VectorXd& z, double rho, const Param& gamma0,
           int max_iters, double beta0) {
            const FemOps fem(mesh);
            OptimizerConfig config;
            config.max_iters = max_iters;
            config.beta0 = beta0;
            return run_optimizer(mesh, fem, z, rho, gamma0, config);
        },
        py::arg("mesh"), py::arg("z"), py::arg("rho"), py::arg("gamma0"),
        py::arg("max_iters") = 800, py::arg("beta0") = 0.75,
        "Projected gradient descent with Armijo step halving.");

    m.def("initial_guess", &initial_guess, py::arg("mesh"));

    m.def(
        "kkt_residual",
        [](const TriMesh& mesh, const Param& gamma, const Eigen::VectorXd& z, double rho) {
            const FemOps fem(mesh);
            return kkt_residual(mesh, fem, gamma, shift_to_diamond(mesh, z), rho, Bounds{});
        },
        py::arg("mesh"), py::arg("gamma"), py::arg("z"), py::arg("rho"));

    m.def("eoc", &eoc, py::arg("errors"), py::arg("hs"),
          "Pairwise experimental orders of convergence.");

    m.def(
        "run_multilevel",
        [](const std::vector<int>& levels, std::uint64_t seed, int max_iters) {
            ExperimentConfig config;
            config.levels = levels;
            config.seed = seed;
            config.optimizer.max_iters = max_iters;
            std::vector<LevelReport> reports;
            for (const auto& result : run_multilevel(config)) reports.push_back(result.report);
            return reports;
        },
        py::arg("levels"), py::arg("seed") = 1, py::arg("max_iters") = 800,
        "Cascadic multilevel identification; returns one report per level.");

    m.def(
        "self_check",
        [](const std::vector<int>& ells, std::uint64_t seed) {
            std::vector<std::tuple<std::string, bool, std::string>> out;
            for (const auto& r : checks::run_all(ells, seed))
                out.emplace_back(r.name, r.pass, r.detail);
            return out;
        },
        py::arg("ells"), py::arg("seed") = 1,
        "Run the built-in property suites; returns (name, pass, detail) tuples.");
}
