#include "elliptic_ident/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace eid {

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

} // namespace

void write_vtk(const std::string& path, const TriMesh& mesh, const VtkFields& fields) {
    std::ofstream os = open_out(path);
    os << "# vtk DataFile Version 3.0\n";
    os << "elliptic_ident mesh ell=" << mesh.ell << "\n";
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.n_nodes() << " double\n";
    for (const auto& p : mesh.nodes)
        os << format_double(p.x()) << " " << format_double(p.y()) << " 0\n";
    os << "CELLS " << mesh.n_elements() << " " << 4 * mesh.n_elements() << "\n";
    for (const auto& tri : mesh.triangles)
        os << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
    os << "CELL_TYPES " << mesh.n_elements() << "\n";
    for (int t = 0; t < mesh.n_elements(); ++t)
        os << "5\n";

    if (!fields.point_data.empty()) {
        os << "POINT_DATA " << mesh.n_nodes() << "\n";
        for (const auto& [name, values] : fields.point_data) {
            os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
            for (Eigen::Index i = 0; i < values.size(); ++i)
                os << format_double(values[i]) << "\n";
        }
    }
    if (!fields.cell_data.empty()) {
        os << "CELL_DATA " << mesh.n_elements() << "\n";
        for (const auto& [name, values] : fields.cell_data) {
            os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
            for (double v : values)
                os << format_double(v) << "\n";
        }
    }
}

void write_table1(std::ostream& os, const std::vector<LevelReport>& reports) {
    os << "ell,h,rho,delta,iterates\n";
    for (const auto& r : reports)
        os << r.ell << "," << format_double(r.h) << "," << format_double(r.rho) << ","
           << format_double(r.delta) << "," << r.iterations << "\n";
}

void write_table2(std::ostream& os, const std::vector<LevelReport>& reports) {
    os << "Delta,Sigma,Lambda,EOC_Delta,EOC_Sigma,EOC_Lambda\n";
    double sum[3] = {0.0, 0.0, 0.0};
    int count = 0;
    for (const auto& r : reports) {
        os << format_double(r.error_coeff) << "," << format_double(r.error_l2) << ","
           << format_double(r.error_h1);
        if (r.eoc_coeff) {
            os << "," << format_double(*r.eoc_coeff) << "," << format_double(*r.eoc_l2)
               << "," << format_double(*r.eoc_h1);
            sum[0] += *r.eoc_coeff;
            sum[1] += *r.eoc_l2;
            sum[2] += *r.eoc_h1;
            ++count;
        } else {
            os << ",,,";
        }
        os << "\n";
    }
    if (count > 0)
        os << "Mean of EOC,,," << format_double(sum[0] / count) << ","
           << format_double(sum[1] / count) << "," << format_double(sum[2] / count) << "\n";
}

void write_tables(const std::string& dir, const std::vector<LevelReport>& reports) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream os = open_out(dir + "/table_1.csv");
        write_table1(os, reports);
    }
    {
        std::ofstream os = open_out(dir + "/table_2.csv");
        write_table2(os, reports);
    }
}

void write_param_csv(const std::string& dir, const TriMesh& mesh, const Param& gamma) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream os = open_out(dir + "/q.csv");
        os << "element,q11,q12,q22\n";
        for (std::size_t t = 0; t < gamma.Q.size(); ++t)
            os << t << "," << format_double(gamma.Q[t].q11) << "," << format_double(gamma.Q[t].q12)
               << "," << format_double(gamma.Q[t].q22) << "\n";
    }
    {
        std::ofstream os = open_out(dir + "/f.csv");
        os << "node,x,y,f\n";
        for (Eigen::Index i = 0; i < gamma.f.size(); ++i)
            os << i << "," << format_double(mesh.nodes[i].x()) << ","
               << format_double(mesh.nodes[i].y()) << "," << format_double(gamma.f[i]) << "\n";
    }
    {
        std::ofstream os = open_out(dir + "/g.csv");
        os << "boundary_node,x,y,g\n";
        for (Eigen::Index k = 0; k < gamma.g.size(); ++k) {
            const auto& p = mesh.nodes[mesh.boundary_nodes[k]];
            os << k << "," << format_double(p.x()) << "," << format_double(p.y()) << ","
               << format_double(gamma.g[k]) << "\n";
        }
    }
}

void write_result_vtk(const std::string& dir, const TriMesh& mesh, const LevelResult& result,
                      const GroundTruth& truth) {
    std::filesystem::create_directories(dir);

    Eigen::VectorXd f_true(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i)
        f_true[i] = truth.f(mesh.nodes[i]);

    VtkFields fields;
    fields.point_data.emplace_back("state", result.state);
    fields.point_data.emplace_back("exact_state", result.exact_state);
    fields.point_data.emplace_back("state_error", result.state - result.exact_state);
    fields.point_data.emplace_back("f", result.gamma.f);
    fields.point_data.emplace_back("f_error", result.gamma.f - f_true);

    std::vector<double> q11(mesh.n_elements()), q12(mesh.n_elements()), q22(mesh.n_elements());
    std::vector<double> dq11(mesh.n_elements()), dq12(mesh.n_elements()), dq22(mesh.n_elements());
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const SymMat2 qt = truth.Q(mesh.centroid(t));
        q11[t] = result.gamma.Q[t].q11;
        q12[t] = result.gamma.Q[t].q12;
        q22[t] = result.gamma.Q[t].q22;
        dq11[t] = q11[t] - qt.q11;
        dq12[t] = q12[t] - qt.q12;
        dq22[t] = q22[t] - qt.q22;
    }
    fields.cell_data.emplace_back("q11", q11);
    fields.cell_data.emplace_back("q12", q12);
    fields.cell_data.emplace_back("q22", q22);
    fields.cell_data.emplace_back("q11_error", dq11);
    fields.cell_data.emplace_back("q12_error", dq12);
    fields.cell_data.emplace_back("q22_error", dq22);

    write_vtk(dir + "/level_" + std::to_string(result.report.ell) + ".vtk", mesh, fields);

    // Boundary flux and its error as CSV (1D field along the boundary chain).
    std::ofstream os = open_out(dir + "/level_" + std::to_string(result.report.ell) + "_g.csv");
    os << "boundary_node,x,y,g,g_error\n";
    for (int k = 0; k < mesh.n_boundary(); ++k) {
        const auto& p = mesh.nodes[mesh.boundary_nodes[k]];
        const int side = mesh.boundary_side[k];
        os << k << "," << format_double(p.x()) << "," << format_double(p.y()) << ","
           << format_double(result.gamma.g[k]) << ","
           << format_double(result.gamma.g[k] - truth.g(p, side)) << "\n";
    }
}

void write_history_csv(std::ostream& os, const IterateHistory& history) {
    os << "iteration,total,misfit,penalty,grad_norm,beta,halvings\n";
    for (const auto& r : history.accepted)
        os << r.iteration << "," << format_double(r.total) << "," << format_double(r.misfit)
           << "," << format_double(r.penalty) << "," << format_double(r.grad_norm) << ","
           << format_double(r.beta) << "," << r.halvings << "\n";
}

} // namespace eid
