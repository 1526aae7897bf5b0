#pragma once

#include <map>
#include <string>
#include <vector>

#include "walklab/graph.hpp"
#include "walklab/verify.hpp"

namespace walklab {

/// Graph interchange: header "vertices N", then one edge per line
/// "u v weight" in canonical (u < v, sorted) order. Deterministic bytes.
std::string graph_file_text(const WeightedGraph& g);
GraphPtr read_graph_text(const std::string& text);

/// Kernel dump: header "kernel <size> <label>", a measure checksum line,
/// then one row of k(x,.) per line.
std::string kernel_file_text(const MarkovKernel& K);

struct KernelDump {
    int size = 0;
    std::string label;
    double measure_checksum = 0.0;
    Eigen::MatrixXd entries;
};
KernelDump read_kernel_text(const std::string& text);

/// pmf dump: CSV with columns (i, A).
std::string pmf_csv_text(const std::vector<double>& pmf);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int column(const std::string& name) const;  // -1 when absent
};

std::string csv_text(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

/// Single-report JSON object: {inequality_id, grid, constants, band{min,max},
/// slope{value,stderr}, violations, pass}.
std::string report_json(const ConstantReport& rep);

/// Full verifier output: metadata + one object per report + overall pass.
std::string verify_json(const std::vector<ConstantReport>& reports,
                        const std::map<std::string, std::string>& meta, bool all_pass);

std::vector<ConstantReport> parse_verify_json(const std::string& text,
                                              std::map<std::string, std::string>* meta = nullptr,
                                              bool* all_pass = nullptr);

}  // namespace walklab
