#include "walklab/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace walklab {

using ordered_json = nlohmann::ordered_json;

std::string graph_file_text(const WeightedGraph& g) {
    std::string out = "vertices " + std::to_string(g.vertex_count()) + "\n";
    for (const Edge& e : g.edges()) {
        out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + format_g17(e.w) + "\n";
    }
    return out;
}

GraphPtr read_graph_text(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    if (!(in >> word) || word != "vertices") throw error("graph file: missing 'vertices' header");
    int n = 0;
    if (!(in >> n) || n <= 0) throw error("graph file: bad vertex count");
    std::vector<Edge> edges;
    int u, v;
    double w;
    while (in >> u >> v >> w) edges.push_back({u, v, w});
    if (!in.eof()) throw error("graph file: malformed edge line");
    return WeightedGraph::from_edges(std::move(edges), n);
}

std::string kernel_file_text(const MarkovKernel& K) {
    KahanSum mu_sum;
    for (int x = 0; x < K.size(); ++x) mu_sum.add(K.measure_vec()[x]);
    std::string out = "kernel " + std::to_string(K.size()) + " " + K.label() + "\n";
    out += "measure_checksum " + format_g17(mu_sum.value()) + "\n";
    for (int x = 0; x < K.size(); ++x) {
        for (int y = 0; y < K.size(); ++y) {
            out += format_g17(K.entry(x, y));
            out += y + 1 < K.size() ? " " : "";
        }
        out += "\n";
    }
    return out;
}

KernelDump read_kernel_text(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    KernelDump dump;
    if (!(in >> word) || word != "kernel") throw error("kernel file: missing header");
    if (!(in >> dump.size) || dump.size <= 0) throw error("kernel file: bad size");
    std::getline(in, dump.label);
    if (!dump.label.empty() && dump.label.front() == ' ') dump.label.erase(0, 1);
    if (!(in >> word) || word != "measure_checksum")
        throw error("kernel file: missing measure checksum");
    in >> dump.measure_checksum;
    dump.entries.resize(dump.size, dump.size);
    for (int x = 0; x < dump.size; ++x)
        for (int y = 0; y < dump.size; ++y)
            if (!(in >> dump.entries(x, y))) throw error("kernel file: truncated entries");
    return dump;
}

std::string pmf_csv_text(const std::vector<double>& pmf) {
    std::string out = "i,A\n";
    for (std::size_t i = 0; i < pmf.size(); ++i)
        out += std::to_string(i) + "," + format_g17(pmf[i]) + "\n";
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write '" + path + "'");
    out << text;
    if (!out) throw error("short write to '" + path + "'");
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

std::string csv_text(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out += table.header[i];
        out += i + 1 < table.header.size() ? "," : "";
    }
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out += i + 1 < row.size() ? "," : "";
        }
        out += "\n";
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

namespace {

ordered_json report_to_json_obj(const ConstantReport& rep) {
    ordered_json j;
    j["inequality_id"] = rep.inequality_id;
    ordered_json grid = ordered_json::object();
    grid["test_family"] = rep.test_family;
    for (const auto& [k, v] : rep.grid) grid[k] = v;
    j["grid"] = grid;
    ordered_json constants = ordered_json::object();
    for (const auto& [k, v] : rep.constants) constants[k] = v;
    j["constants"] = constants;
    if (rep.has_band)
        j["band"] = ordered_json{{"min", rep.band_min}, {"max", rep.band_max}};
    else
        j["band"] = nullptr;
    if (rep.has_slope)
        j["slope"] = ordered_json{{"value", rep.slope_value}, {"stderr", rep.slope_stderr}};
    else
        j["slope"] = nullptr;
    j["violations"] = rep.violations;
    j["pass"] = rep.pass;
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    return j;
}

ConstantReport report_from_json_obj(const ordered_json& j) {
    ConstantReport rep;
    rep.inequality_id = j.at("inequality_id").get<std::string>();
    if (j.contains("grid") && j["grid"].is_object()) {
        for (auto it = j["grid"].begin(); it != j["grid"].end(); ++it) {
            if (it.key() == "test_family")
                rep.test_family = it.value().get<std::string>();
            else if (it.value().is_string())
                rep.grid[it.key()] = it.value().get<std::string>();
        }
    }
    if (j.contains("constants")) {
        for (auto it = j["constants"].begin(); it != j["constants"].end(); ++it)
            rep.constants[it.key()] = it.value().get<double>();
    }
    if (j.contains("band") && !j["band"].is_null()) {
        rep.has_band = true;
        rep.band_min = j["band"]["min"].get<double>();
        rep.band_max = j["band"]["max"].get<double>();
    }
    if (j.contains("slope") && !j["slope"].is_null()) {
        rep.has_slope = true;
        rep.slope_value = j["slope"]["value"].get<double>();
        rep.slope_stderr = j["slope"]["stderr"].get<double>();
    }
    rep.violations = j.value("violations", 0LL);
    rep.pass = j.at("pass").get<bool>();
    rep.notes = j.value("notes", std::string());
    return rep;
}

}  // namespace

std::string report_json(const ConstantReport& rep) {
    return report_to_json_obj(rep).dump(2) + "\n";
}

std::string verify_json(const std::vector<ConstantReport>& reports,
                        const std::map<std::string, std::string>& meta, bool all_pass) {
    ordered_json j;
    ordered_json m = ordered_json::object();
    for (const auto& [k, v] : meta) m[k] = v;
    j["scenario"] = m;
    ordered_json arr = ordered_json::array();
    for (const auto& rep : reports) arr.push_back(report_to_json_obj(rep));
    j["reports"] = arr;
    j["pass"] = all_pass;
    return j.dump(2) + "\n";
}

std::vector<ConstantReport> parse_verify_json(const std::string& text,
                                              std::map<std::string, std::string>* meta,
                                              bool* all_pass) {
    ordered_json j = ordered_json::parse(text);
    std::vector<ConstantReport> reports;
    if (j.contains("reports")) {
        for (const auto& item : j["reports"]) reports.push_back(report_from_json_obj(item));
    } else {
        reports.push_back(report_from_json_obj(j));
    }
    if (meta && j.contains("scenario")) {
        for (auto it = j["scenario"].begin(); it != j["scenario"].end(); ++it)
            if (it.value().is_string()) (*meta)[it.key()] = it.value().get<std::string>();
    }
    if (all_pass) *all_pass = j.value("pass", true);
    return reports;
}

}  // namespace walklab
