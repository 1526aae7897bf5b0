#include "walklab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace walklab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

double interior_margin_of(const WeightedGraph& g) {
    return std::min(g.safe_radius(), g.max_boundary_distance() / 2.0);
}

}  // namespace

ScenarioConfig ScenarioConfig::from_text(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw error("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "family") cfg.family = value;
            else if (key == "level" || key == "size") cfg.level = std::stoi(value);
            else if (key == "dimension") cfg.dimension = std::stoi(value);
            else if (key == "perturb") cfg.perturb = std::stoi(value) != 0;
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "kernel") cfg.kernel = value;
            else if (key == "beta") cfg.beta = std::stod(value);
            else if (key == "log_exponent") cfg.log_exponent = std::stod(value);
            else if (key == "gamma") cfg.gamma = std::stod(value);
            else if (key == "beta0") cfg.beta0 = std::stod(value);
            else if (key == "t") cfg.t = std::stod(value);
            else if (key == "t_list") cfg.t_list = parse_int_list(value);
            else if (key == "subord_truncation") cfg.subord_truncation = std::stoi(value);
            else if (key == "stable_eps") cfg.stable_eps = std::stod(value);
            else if (key == "stable_budget") cfg.stable_budget = std::stoi(value);
            else if (key == "n_min") cfg.n_min = std::stoi(value);
            else if (key == "n_max") cfg.n_max = std::stoi(value);
            else if (key == "allow_unsafe") cfg.allow_unsafe = std::stoi(value) != 0;
            else if (key == "base_count") cfg.base_count = std::stoi(value);
            else if (key == "pool") cfg.pool = std::stoi(value);
            else if (key == "volume_base") cfg.volume_base = value;
            else if (key == "checks") cfg.checks = value;
            else if (key == "band_max") cfg.band_max = std::stod(value);
            else if (key == "comp_band_max") cfg.comp_band_max = std::stod(value);
            else if (key == "pp_spread_max") cfg.pp_spread_max = std::stod(value);
            else if (key == "nash_uniformity") cfg.nash_uniformity = std::stod(value);
            else if (key == "slope_target") cfg.slope_target = std::stod(value);
            else if (key == "slope_tol") cfg.slope_tol = std::stod(value);
            else if (key == "out") cfg.out = value;
            else if (key == "curve") cfg.curve = value;
            else throw error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw error("config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
        } catch (const std::out_of_range&) {
            throw error("config line " + std::to_string(lineno) + ": value out of range for '" + key + "'");
        }
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    return from_text(read_text_file(path));
}

double ScenarioContext::clock(double n) const {
    if (cfg.kernel == "jump" || cfg.kernel == "subordinated") return ez->zeta(n);
    if (cfg.kernel == "stable") return std::pow(n, 1.0 / (cfg.beta0 * gamma));
    return std::pow(n, 1.0 / gamma);
}

std::string ScenarioContext::clock_name() const {
    if (cfg.kernel == "jump" || cfg.kernel == "subordinated") return "zeta";
    if (cfg.kernel == "stable") return "n^(1/beta0*gamma)";
    return "n^(1/gamma)";
}

ScenarioContext build_context(const ScenarioConfig& cfg, bool need_kernel) {
    ScenarioContext ctx;
    ctx.cfg = cfg;

    Family fam = family_from_string(cfg.family);
    FamilySpec spec{fam, cfg.level, cfg.dimension, cfg.perturb, cfg.seed};
    ctx.graph = generate(spec);
    ctx.margin = interior_margin_of(*ctx.graph);

    auto base = cfg.volume_base == "fixed" ? VolumeProfile::Base::fixed_vertex
                                           : VolumeProfile::Base::median_interior;
    if (cfg.volume_base != "fixed" && cfg.volume_base != "median")
        throw error("config: volume_base must be 'median' or 'fixed'");
    ctx.V = VolumeProfile::build(*ctx.graph, base);

    auto expo = expected_exponents(fam, cfg.dimension);
    if (cfg.gamma > 0) {
        ctx.gamma = cfg.gamma;
    } else if (expo) {
        ctx.gamma = expo->second;
    } else {
        throw error("config: gamma must be set explicitly for the " + cfg.family + " family");
    }
    if (ctx.gamma < 2.0) throw error("config: gamma must be >= 2");
    ctx.alpha_ref = expo ? expo->first : 0.0;

    if (!(cfg.beta > 0)) throw error("config: beta must be positive");
    ctx.phi = JumpProfile{cfg.beta, cfg.log_exponent};

    // eta table reach: the zeta window needs eta_tilde(margin); the Nash
    // check can push V^{-1} arguments up to C2 * mu(Gamma)
    double nash_reach =
        ctx.V.inverse(ctx.V.value(1.0) / ctx.graph->min_measure() * ctx.graph->total_measure());
    double s_max = std::max({1.0e6, 8.0 * ctx.graph->diameter(), 2.0 * nash_reach});
    ctx.ez.emplace(ctx.phi, ctx.gamma, s_max);

    if (need_kernel) {
        if (cfg.kernel == "natural") {
            ctx.kernel = natural_walk(ctx.graph);
        } else if (cfg.kernel == "lazy") {
            ctx.kernel = lazy_pair(natural_walk(ctx.graph));
        } else if (cfg.kernel == "jump") {
            ctx.kernel = jump_kernel(ctx.graph, ctx.phi, ctx.V);
        } else if (cfg.kernel == "subordinated") {
            auto Q = lazy_pair(natural_walk(ctx.graph));
            ctx.kernel = subordinated_kernel(Q, ctx.phi, ctx.gamma, cfg.subord_truncation,
                                             nullptr, cfg.pool);
        } else if (cfg.kernel == "stable") {
            if (!(cfg.beta0 > 0.0) || cfg.beta0 >= 1.0)
                throw error("config: beta0 must lie in (0,1) for stable kernels");
            auto Q = lazy_pair(natural_walk(ctx.graph));
            StableKernelOptions opts;
            opts.eps = cfg.stable_eps;
            opts.i_budget = cfg.stable_budget;
            opts.pool = cfg.pool;
            ctx.kernel = stable_kernel(Q, cfg.t, cfg.beta0, opts);
        } else {
            throw error("config: unknown kernel '" + cfg.kernel + "'");
        }
    }
    return ctx;
}

std::string resolve_output(const std::string& path) {
    if (path.empty()) return path;
    if (path.front() == '/') return path;
    const char* dir = std::getenv("WALKLAB_OUT_DIR");
    if (!dir || !*dir) return path;
    std::string d(dir);
    if (d.back() != '/') d += '/';
    return d + path;
}

std::string gen_diagnostics_json(const ScenarioContext& ctx) {
    const WeightedGraph& g = *ctx.graph;
    std::vector<int> grid;
    int r_meas = ctx.V.measured_radius();
    for (int r = 1; r <= r_meas; r *= 2) grid.push_back(r);
    if (grid.empty()) grid.push_back(1);
    auto diag = diagnostics(g, ctx.V, grid);

    // the volume exponent prefers the widest safe window (small radii carry
    // strong lattice corrections)
    std::vector<int> alpha_grid;
    for (int r = std::min(4, std::max(1, r_meas / 4)); r <= r_meas; ++r)
        alpha_grid.push_back(r);
    double alpha_fit = diag.alpha_fit;
    if (alpha_grid.size() >= 2) {
        std::vector<double> xs, ys;
        for (int r : alpha_grid) {
            xs.push_back(r);
            ys.push_back(ctx.V.value(r));
        }
        alpha_fit = fit_loglog(xs, ys).slope;
    }

    nlohmann::ordered_json j;
    j["family"] = ctx.cfg.family;
    j["level"] = ctx.cfg.level;
    if (ctx.cfg.family == "lattice") j["dimension"] = ctx.cfg.dimension;
    j["perturb"] = ctx.cfg.perturb;
    j["seed"] = ctx.cfg.seed;
    j["vertices"] = g.vertex_count();
    j["edges"] = g.edge_count();
    j["tree"] = g.edge_count() == static_cast<std::size_t>(g.vertex_count()) - 1;
    j["diameter"] = g.diameter();
    j["boundary_size"] = g.boundary().size();
    j["bipartite"] = g.is_bipartite();
    j["volume_base"] = ctx.cfg.volume_base;
    j["measured_radius"] = r_meas;
    j["C_mu"] = diag.C_mu;
    j["C_D"] = diag.C_D;
    j["C_h"] = diag.C_h;
    j["p0"] = diag.p0;
    j["alpha_fit"] = alpha_fit;
    j["reverse_doubling"] = {{"A", diag.reverse_doubling_A}, {"c1", diag.reverse_doubling_c1}};
    j["gamma"] = ctx.gamma;
    return j.dump(2) + "\n";
}

int cmd_gen(const ScenarioConfig& cfg, std::ostream& log) {
    auto ctx = build_context(cfg, false);
    std::string base = cfg.out.empty()
                           ? cfg.family + "-" + std::to_string(cfg.level) + ".graph"
                           : cfg.out;
    std::string path = resolve_output(base);
    write_text_file(path, graph_file_text(*ctx.graph));
    write_text_file(path + ".diag.json", gen_diagnostics_json(ctx));
    log << "wrote " << path << " (" << ctx.graph->vertex_count() << " vertices, "
        << ctx.graph->edge_count() << " edges) and " << path << ".diag.json\n";
    return 0;
}

std::string psi_csv_text(const ScenarioContext& ctx) {
    const ScenarioConfig& cfg = ctx.cfg;
    const MarkovKernel& K = *ctx.kernel;

    double safe_n;
    if (cfg.kernel == "jump" || cfg.kernel == "subordinated")
        safe_n = std::floor(ctx.ez->eta_tilde(ctx.margin));
    else if (cfg.kernel == "stable")
        safe_n = std::floor(std::pow(ctx.margin, cfg.beta0 * ctx.gamma));
    else
        safe_n = std::floor(std::pow(ctx.margin, ctx.gamma));

    int n_max = cfg.n_max > 0 ? cfg.n_max : static_cast<int>(safe_n);
    if (n_max > safe_n && !cfg.allow_unsafe)
        throw error("psi: n_max " + std::to_string(n_max) +
                    " exceeds the boundary-safe window (max " +
                    std::to_string(static_cast<int>(safe_n)) +
                    "); set allow_unsafe = 1 to proceed with flags");
    if (n_max < 1) throw error("psi: empty window (graph too small)");

    std::vector<int> ns;
    for (int n = std::max(0, cfg.n_min); n <= n_max; ++n) ns.push_back(n);
    auto base = ctx.graph->interior_sample(ctx.margin, cfg.base_count);
    if (base.empty()) throw error("psi: empty interior base set");
    auto curve = psi_curve(K, ns, base, safe_n, cfg.pool);

    CsvTable table;
    table.header = {"n", "psi", "V_of_zeta", "ratio", "flag_boundary", "base_vertex_argmax"};
    for (std::size_t j = 0; j < ns.size(); ++j) {
        double clock_r = ctx.clock(std::max(0, ns[j]));
        double vz = ctx.V.value(clock_r);
        table.rows.push_back({std::to_string(ns[j]), format_g17(curve.psi[j]), format_g17(vz),
                              format_g17(curve.psi[j] * vz), curve.flagged[j] ? "1" : "0",
                              std::to_string(curve.argmax_vertex[j])});
    }
    return csv_text(table);
}

int cmd_psi(const ScenarioConfig& cfg, std::ostream& log) {
    auto ctx = build_context(cfg);
    std::string text = psi_csv_text(ctx);
    std::string path = resolve_output(cfg.out.empty() ? "psi.csv" : cfg.out);
    write_text_file(path, text);
    log << "wrote " << path << "\n";
    return 0;
}

namespace {

ConstantReport stable_tail_report(const ScenarioConfig& cfg) {
    ConstantReport rep;
    rep.inequality_id = "stable-tail";
    rep.test_family = "pmf-recurrence";
    double t = cfg.t, beta0 = cfg.beta0;
    // fit window inside the asymptotic tail, past the validity threshold
    // 4 t^{1/beta0} and past the second-order bias scale
    int L = stable_tail_fit_start(t, beta0);
    int hi = 16 * L;
    auto w = discrete_stable_pmf(t, beta0, hi);
    std::vector<double> is, ps;
    for (int i = L; i <= hi; ++i) {
        is.push_back(i);
        ps.push_back(w.pmf[i]);
    }
    auto fit = fit_loglog(is, ps);
    rep.slope_value = fit.slope;
    rep.slope_stderr = fit.stderr_slope;
    rep.has_slope = true;
    rep.constants["slope_target"] = -(1.0 + beta0);
    rep.constants["fit_lo"] = L;
    rep.constants["fit_hi"] = hi;

    double lo_ratio = std::numeric_limits<double>::infinity(), hi_ratio = 0.0;
    int start = std::max(6, static_cast<int>(std::ceil(4.0 * std::pow(t, 1.0 / beta0))));
    for (int i = start; i <= hi; ++i) {
        double ratio = t * std::pow(static_cast<double>(i), -1.0 - beta0) / w.pmf[i];
        lo_ratio = std::min(lo_ratio, ratio);
        hi_ratio = std::max(hi_ratio, ratio);
    }
    rep.band_min = lo_ratio;
    rep.band_max = hi_ratio;
    rep.has_band = true;
    rep.constants["band_spread"] = hi_ratio / lo_ratio;
    double slope_tol = cfg.slope_tol > 0 ? cfg.slope_tol : 0.05;
    rep.pass = std::fabs(fit.slope + 1.0 + beta0) <= slope_tol && hi_ratio / lo_ratio <= 20.0;
    return rep;
}

}  // namespace

std::vector<std::string> parse_check_list(const ScenarioContext& ctx, const std::string& spec) {
    const std::vector<std::string> known = {
        "dirichlet-lemmas", "pseudo-poincare",   "nash",
        "resistance-band",  "subgaussian-P",     "subgaussian-Q",
        "lambda-lower-bound", "threshold",       "poisson-volume",
        "moment-threshold", "stable-tail",       "stable-evidence"};
    std::vector<std::string> ids;
    if (spec == "all") {
        ids = {"dirichlet-lemmas", "pseudo-poincare", "nash",      "resistance-band",
               "subgaussian-P",    "subgaussian-Q",   "threshold", "lambda-lower-bound",
               "poisson-volume"};
        if (ctx.cfg.kernel == "stable") {
            ids.push_back("stable-tail");
            ids.push_back("stable-evidence");
        }
        return ids;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (std::find(known.begin(), known.end(), item) == known.end())
            throw error("unknown inequality id '" + item + "'");
        ids.push_back(item);
    }
    if (ids.empty()) throw error("empty check list");
    return ids;
}

std::vector<ConstantReport> run_checks(const ScenarioContext& ctx,
                                       const std::vector<std::string>& ids) {
    const ScenarioConfig& cfg = ctx.cfg;
    std::vector<ConstantReport> reports;
    std::vector<Eigen::VectorXd> family;  // built lazily, shared across checks
    auto the_family = [&]() -> const std::vector<Eigen::VectorXd>& {
        if (family.empty()) family = test_function_family(ctx.graph);
        return family;
    };
    auto dyadic_upto = [](double cap) {
        std::vector<int> rs;
        for (int r = 2; r <= static_cast<int>(cap); r *= 2) rs.push_back(r);
        if (rs.empty()) rs.push_back(1);
        return rs;
    };

    for (const std::string& id : ids) {
        if (id == "dirichlet-lemmas") {
            LemmaSuiteOptions opts;
            opts.seed = cfg.seed + 11;
            std::vector<const MarkovKernel*> ks{&*ctx.kernel};
            reports.push_back(verify_dirichlet_lemmas(ks, opts));
        } else if (id == "pseudo-poincare") {
            PseudoPoincareOptions opts;
            for (int r : dyadic_upto(ctx.margin)) opts.R_grid.push_back(r);
            opts.max_spread = cfg.pp_spread_max;
            reports.push_back(verify_pseudo_poincare(*ctx.kernel, *ctx.ez, the_family(), opts));
        } else if (id == "nash") {
            NashOptions opts;
            opts.uniformity_band = cfg.nash_uniformity;
            reports.push_back(verify_nash(*ctx.kernel, ctx.V, *ctx.ez, the_family(), opts));
        } else if (id == "resistance-band") {
            ResistanceBandOptions opts;
            opts.r_grid = dyadic_upto(ctx.margin / 2.0);
            reports.push_back(verify_resistance_band(ctx.graph, ctx.gamma, ctx.V, opts));
        } else if (id == "subgaussian-P") {
            reports.push_back(verify_subgaussian(ctx.graph, SubgaussianKind::P_pair, ctx.gamma,
                                                 ctx.V));
        } else if (id == "subgaussian-Q") {
            reports.push_back(verify_subgaussian(ctx.graph, SubgaussianKind::Q_single, ctx.gamma,
                                                 ctx.V));
        } else if (id == "lambda-lower-bound") {
            LowerBoundOptions opts;
            opts.r_grid = dyadic_upto(ctx.margin);
            int cap = static_cast<int>(std::floor(std::pow(ctx.margin, ctx.gamma)));
            opts.n_grid = geometric_grid(1, std::max(2, cap), 2);
            opts.pool = cfg.pool;
            reports.push_back(verify_lower_bound_mechanics(*ctx.kernel, *ctx.ez, opts));
        } else if (id == "threshold") {
            ThresholdOptions opts;
            opts.clock = (cfg.kernel == "jump" || cfg.kernel == "subordinated")
                             ? ThresholdOptions::Clock::zeta
                             : ThresholdOptions::Clock::plain_gamma;
            opts.n_min = cfg.n_min;
            opts.n_max = cfg.n_max;
            opts.base_count = cfg.base_count;
            opts.band_max = cfg.band_max;
            opts.slope_target = cfg.slope_target;
            opts.slope_tol = cfg.slope_tol;
            opts.pool = cfg.pool;
            reports.push_back(verify_threshold(*ctx.kernel, ctx.V, *ctx.ez, opts));
        } else if (id == "poisson-volume") {
            std::vector<double> us{0.0};
            for (double u = 4.0; u <= std::pow(ctx.margin, ctx.gamma); u *= 4.0) us.push_back(u);
            auto xs = ctx.graph->interior_sample(ctx.margin, 3);
            if (xs.empty()) throw error("poisson-volume: empty interior sample");
            ConstantReport rep;
            rep.inequality_id = "poisson-volume";
            rep.test_family = "poisson-average";
            double overall = 0.0, worst_spread = 0.0;
            for (int x : xs) {
                auto chk = poisson_volume_bound_check(*ctx.graph, x, ctx.gamma, us);
                double lo = *std::min_element(chk.per_u.begin(), chk.per_u.end());
                overall = std::max(overall, chk.max_ratio);
                worst_spread = std::max(worst_spread, chk.max_ratio / lo);
            }
            rep.constants["C1"] = overall;
            rep.constants["max_spread_across_u"] = worst_spread;
            rep.pass = std::isfinite(overall) && worst_spread < 2.0;
            reports.push_back(rep);
        } else if (id == "moment-threshold") {
            if (cfg.level < 3) throw error("moment-threshold: need level >= 3");
            std::vector<GraphPtr> fam;
            for (int l = cfg.level - 2; l <= cfg.level; ++l)
                fam.push_back(generate({family_from_string(cfg.family), l, cfg.dimension,
                                        cfg.perturb, cfg.seed}));
            MomentThresholdOptions opts;
            opts.expect =
                cfg.beta > ctx.gamma ? MomentRegime::finite : MomentRegime::divergent;
            opts.pool = cfg.pool;
            opts.band_max = cfg.band_max;
            reports.push_back(verify_moment_threshold(fam, ctx.phi, ctx.gamma, opts));
        } else if (id == "stable-tail") {
            reports.push_back(stable_tail_report(cfg));
        } else if (id == "stable-evidence") {
            auto Q = lazy_pair(natural_walk(ctx.graph));
            EvidenceOptions opts;
            opts.pool = cfg.pool;
            std::vector<int> ts = cfg.t_list;
            if (ts.empty()) {
                double beta = cfg.beta0 * ctx.gamma;
                int cap = static_cast<int>(std::floor(std::pow(ctx.margin, beta)));
                ts = geometric_grid(1, std::max(2, cap), 1);
            }
            auto ev = evidence_band_check(Q, ts, cfg.beta0, ctx.gamma, opts);
            ConstantReport rep;
            rep.inequality_id = "stable-evidence";
            rep.test_family = "two-sided-envelope";
            rep.band_min = ev.ratio_min;
            rep.band_max = ev.ratio_max;
            rep.has_band = true;
            rep.constants["band_spread"] = ev.ratio_max / ev.ratio_min;
            rep.constants["beta"] = ev.beta;
            rep.constants["i_max"] = ev.i_max;
            rep.constants["folded_tail"] = ev.max_tail;
            rep.constants["samples"] = static_cast<double>(ev.samples.size());
            rep.pass = ev.ratio_max / ev.ratio_min <= cfg.comp_band_max;
            reports.push_back(rep);
        } else {
            throw error("unknown inequality id '" + id + "'");
        }
    }
    return reports;
}

int cmd_verify(const ScenarioConfig& cfg, std::ostream& log) {
    auto ctx = build_context(cfg);
    auto ids = parse_check_list(ctx, cfg.checks);
    auto reports = run_checks(ctx, ids);
    bool all_pass = true;
    for (const auto& rep : reports) {
        all_pass = all_pass && rep.pass;
        log << (rep.pass ? "[pass] " : "[FAIL] ") << rep.inequality_id;
        if (rep.has_band) log << "  band [" << rep.band_min << ", " << rep.band_max << "]";
        if (rep.has_slope) log << "  slope " << rep.slope_value;
        if (rep.violations) log << "  violations " << rep.violations;
        log << "\n";
    }
    std::map<std::string, std::string> meta{
        {"family", cfg.family},
        {"level", std::to_string(cfg.level)},
        {"kernel", cfg.kernel},
        {"beta", format_g17(cfg.beta)},
        {"gamma", format_g17(ctx.gamma)},
        {"volume_base", cfg.volume_base},
        {"seed", std::to_string(cfg.seed)},
    };
    std::string path = resolve_output(cfg.out.empty() ? "verify.json" : cfg.out);
    write_text_file(path, verify_json(reports, meta, all_pass));
    log << "wrote " << path << "\n";
    return all_pass ? 0 : 1;
}

int cmd_fit(const ScenarioConfig& cfg, std::ostream& log) {
    if (cfg.curve.empty()) throw error("fit: set curve = <psi csv path>");
    auto table = parse_csv(read_text_file(cfg.curve));
    int ncol = table.column("n"), pcol = table.column("psi");
    if (ncol < 0 || pcol < 0) throw error("fit: curve file lacks n/psi columns");
    std::vector<double> ns, psis;
    for (const auto& row : table.rows) {
        double n = std::stod(row[ncol]);
        double p = std::stod(row[pcol]);
        if (n >= 1 && p > 0) {
            ns.push_back(n);
            psis.push_back(p);
        }
    }
    if (ns.size() < 6) throw error("fit: curve too short (need at least 6 usable rows)");

    // trim 10% of the log window at both ends
    double ln_lo = std::log(ns.front()), ln_hi = std::log(ns.back());
    double trim = 0.1 * (ln_hi - ln_lo);
    std::vector<double> fn, fp;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        double ln = std::log(ns[i]);
        if (ln >= ln_lo + trim && ln <= ln_hi - trim) {
            fn.push_back(ns[i]);
            fp.push_back(psis[i]);
        }
    }
    if (fn.size() < 3) throw error("fit: curve too short after trimming");
    auto fit = fit_loglog(fn, fp);

    auto ctx = build_context(cfg, false);
    double alpha = ctx.alpha_ref > 0 ? ctx.alpha_ref : 1.0;
    double s_lt = -alpha / cfg.beta;
    double s_gt = -alpha / ctx.gamma;
    std::string regime;
    if (std::fabs(s_lt - s_gt) <= 0.05)
        regime = "beta~gamma";
    else if (std::fabs(fit.slope - s_lt) <= std::fabs(fit.slope - s_gt))
        regime = "beta<gamma";
    else
        regime = "beta>gamma";

    nlohmann::ordered_json j;
    j["slope"] = fit.slope;
    j["stderr"] = fit.stderr_slope;
    j["points"] = fit.points;
    j["candidate_beta_clock"] = s_lt;
    j["candidate_gamma_clock"] = s_gt;
    j["regime"] = regime;
    std::string path = resolve_output(cfg.out.empty() ? "fit.json" : cfg.out);
    write_text_file(path, j.dump(2) + "\n");
    log << "slope " << fit.slope << " (" << regime << "), wrote " << path << "\n";
    return 0;
}

int cmd_report(const std::vector<std::string>& json_paths, std::ostream& log) {
    if (json_paths.empty()) throw error("report: no input files");
    bool all_pass = true;
    for (const auto& path : json_paths) {
        bool file_pass = true;
        auto reports = parse_verify_json(read_text_file(path), nullptr, &file_pass);
        log << path << ":\n";
        for (const auto& rep : reports) {
            log << "  " << (rep.pass ? "pass" : "FAIL") << "  " << rep.inequality_id;
            if (rep.has_band)
                log << "  band=[" << format_g17(rep.band_min) << "," << format_g17(rep.band_max)
                    << "]";
            if (rep.has_slope) log << "  slope=" << format_g17(rep.slope_value);
            log << "  violations=" << rep.violations << "\n";
            all_pass = all_pass && rep.pass;
        }
    }
    return all_pass ? 0 : 1;
}

}  // namespace walklab
