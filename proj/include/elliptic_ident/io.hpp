#pragma once

#include <iosfwd>
#include <string>

#include "elliptic_ident/experiment.hpp"

namespace eid {

/// Shortest round-trip decimal representation (std::to_chars), so CSV output
/// is locale-independent and byte-reproducible.
std::string format_double(double x);

/// VTK legacy ASCII unstructured grid: points + triangle cells, plus optional
/// named point- and cell-data scalar fields.
struct VtkFields {
    std::vector<std::pair<std::string, Eigen::VectorXd>> point_data;
    std::vector<std::pair<std::string, std::vector<double>>> cell_data;
};

void write_vtk(const std::string& path, const TriMesh& mesh, const VtkFields& fields = {});

/// table_1.csv: ell,h,rho,delta,iterates
void write_table1(std::ostream& os, const std::vector<LevelReport>& reports);
/// table_2.csv: Delta,Sigma,Lambda,EOC_Delta,EOC_Sigma,EOC_Lambda plus a mean row
void write_table2(std::ostream& os, const std::vector<LevelReport>& reports);

void write_tables(const std::string& dir, const std::vector<LevelReport>& reports);

/// Per-element Q rows, nodal f and boundary-chain g as CSV files in dir.
void write_param_csv(const std::string& dir, const TriMesh& mesh, const Param& gamma);

/// Final-iterate fields and their differences to the truth as VTK.
void write_result_vtk(const std::string& dir, const TriMesh& mesh, const LevelResult& result,
                      const GroundTruth& truth);

void write_history_csv(std::ostream& os, const IterateHistory& history);

} // namespace eid
