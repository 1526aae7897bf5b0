#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "walklab/families.hpp"
#include "walklab/io.hpp"
#include "walklab/kernel.hpp"
#include "walklab/stable.hpp"
#include "walklab/verify.hpp"

namespace walklab {

/// Flat key = value scenario file (# comments). Unknown keys are rejected
/// so a stale config cannot silently change meaning.
struct ScenarioConfig {
    // graph
    std::string family = "gasket";
    int level = 3;
    int dimension = 2;
    bool perturb = false;
    std::uint64_t seed = 1;
    // kernel
    std::string kernel = "lazy";  // natural | lazy | jump | subordinated | stable
    double beta = 1.0;
    double log_exponent = 0.0;
    double gamma = 0.0;  // 0: family default
    double beta0 = 0.5;
    double t = 1.0;
    std::vector<int> t_list;  // stable evidence times
    int subord_truncation = -1;
    double stable_eps = 1e-3;
    int stable_budget = 4000;
    // experiment
    int n_min = 0;
    int n_max = 0;
    bool allow_unsafe = false;
    int base_count = 24;
    int pool = 1;
    std::string volume_base = "median";  // median | fixed
    std::string checks = "all";
    // tolerances
    double band_max = 10.0;
    double comp_band_max = 100.0;
    double pp_spread_max = 5.0;
    double nash_uniformity = 10.0;
    double slope_target = 0.0;
    double slope_tol = 0.0;
    // io
    std::string out;
    std::string curve;

    static ScenarioConfig from_text(const std::string& text);
    static ScenarioConfig from_file(const std::string& path);
};

/// Everything a command needs, built deterministically from the config.
struct ScenarioContext {
    ScenarioConfig cfg;
    GraphPtr graph;
    VolumeProfile V;
    double gamma = 2.0;
    double alpha_ref = 0.0;  // family reference volume exponent (0: none)
    JumpProfile phi;
    std::optional<EtaZeta> ez;
    std::optional<MarkovKernel> kernel;
    double margin = 0.0;  // interior margin used by the checks

    /// zeta for jump/subordinated kernels, n^{1/gamma} for the natural pair,
    /// n^{1/(beta0 gamma)} for stable kernels.
    double clock(double n) const;
    std::string clock_name() const;
};

ScenarioContext build_context(const ScenarioConfig& cfg, bool need_kernel = true);

/// Output path resolution: relative paths land in $WALKLAB_OUT_DIR when set.
std::string resolve_output(const std::string& path);

// subcommands; exit codes: 0 success / all-pass, 1 verification failure,
// 2 usage or config error (thrown as walklab::error by the callees)
int cmd_gen(const ScenarioConfig& cfg, std::ostream& log);
int cmd_psi(const ScenarioConfig& cfg, std::ostream& log);
int cmd_verify(const ScenarioConfig& cfg, std::ostream& log);
int cmd_fit(const ScenarioConfig& cfg, std::ostream& log);
int cmd_report(const std::vector<std::string>& json_paths, std::ostream& log);

// deterministic artifact builders (shared by the commands and the tests)
std::string psi_csv_text(const ScenarioContext& ctx);
std::string gen_diagnostics_json(const ScenarioContext& ctx);
std::vector<ConstantReport> run_checks(const ScenarioContext& ctx,
                                       const std::vector<std::string>& ids);
std::vector<std::string> parse_check_list(const ScenarioContext& ctx, const std::string& spec);

}  // namespace walklab
