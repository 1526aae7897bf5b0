#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "walklab/families.hpp"
#include "walklab/io.hpp"
#include "walklab/scenario.hpp"
#include "walklab/stable.hpp"
#include "walklab/verify.hpp"

namespace py = pybind11;
using namespace walklab;

namespace {

// pybind11 holders cannot be shared_ptr-to-const, so the graph rides in a
// tiny value wrapper
struct PyGraph {
    GraphPtr g;
    const WeightedGraph& ref() const { return *g; }
};

PyGraph py_generate(const std::string& family, int level, int dimension, bool perturb,
                    std::uint64_t seed) {
    return {generate({family_from_string(family), level, dimension, perturb, seed})};
}

VolumeProfile py_volume_profile(const PyGraph& g, const std::string& base) {
    auto mode = base == "fixed" ? VolumeProfile::Base::fixed_vertex
                                : VolumeProfile::Base::median_interior;
    return VolumeProfile::build(*g.g, mode);
}

py::dict curve_to_dict(const DecayCurve& c) {
    py::dict d;
    d["n"] = c.n;
    d["psi"] = c.psi;
    d["argmax_vertex"] = c.argmax_vertex;
    std::vector<bool> flags(c.flagged.begin(), c.flagged.end());
    d["flagged"] = flags;
    return d;
}

}  // namespace

PYBIND11_MODULE(_walklab, m) {
    m.doc() = "Long-range random walk laboratory: graphs, kernels, decay clocks";

    py::register_exception<error>(m, "WalklabError");

    py::class_<PyGraph>(m, "Graph")
        .def_property_readonly("vertex_count",
                               [](const PyGraph& g) { return g.ref().vertex_count(); })
        .def_property_readonly("edge_count",
                               [](const PyGraph& g) { return g.ref().edge_count(); })
        .def_property_readonly("diameter", [](const PyGraph& g) { return g.ref().diameter(); })
        .def_property_readonly("boundary", [](const PyGraph& g) { return g.ref().boundary(); })
        .def("vertex_measure",
             [](const PyGraph& g, int x) { return g.ref().vertex_measure(x); }, py::arg("x"))
        .def("distance", [](const PyGraph& g, int x, int y) { return g.ref().distance(x, y); },
             py::arg("x"), py::arg("y"))
        .def("distances_from",
             [](const PyGraph& g, int x) { return g.ref().distances_from(x); }, py::arg("x"))
        .def("ball", [](const PyGraph& g, int x, double r) { return g.ref().ball(x, r); },
             py::arg("x"), py::arg("r"))
        .def("ball_volume",
             [](const PyGraph& g, int x, double r) { return g.ref().ball_volume(x, r); },
             py::arg("x"), py::arg("r"))
        .def("interior",
             [](const PyGraph& g, double margin, int max_count) {
                 return g.ref().interior_sample(margin, max_count);
             },
             py::arg("margin"), py::arg("max_count") = 0)
        .def("is_bipartite", [](const PyGraph& g) { return g.ref().is_bipartite(); })
        .def("edges", [](const PyGraph& g) {
            std::vector<std::tuple<int, int, double>> out;
            for (const Edge& e : g.ref().edges()) out.emplace_back(e.u, e.v, e.w);
            return out;
        });

    m.def("generate", &py_generate, py::arg("family"), py::arg("level"),
          py::arg("dimension") = 2, py::arg("perturb") = false, py::arg("seed") = 1,
          "Deterministic graph family generator");
    m.def("from_edges",
          [](const std::vector<std::tuple<int, int, double>>& edges) {
              std::vector<Edge> es;
              for (auto [u, v, w] : edges) es.push_back({u, v, w});
              return PyGraph{WeightedGraph::from_edges(std::move(es))};
          },
          py::arg("edges"));
    m.def("expected_exponents", [](const std::string& family, int dimension) {
        return expected_exponents(family_from_string(family), dimension);
    }, py::arg("family"), py::arg("dimension") = 2);

    py::class_<VolumeProfile>(m, "VolumeProfile")
        .def("__call__", &VolumeProfile::value, py::arg("r"))
        .def("inverse", &VolumeProfile::inverse, py::arg("v"))
        .def_property_readonly("measured_radius", &VolumeProfile::measured_radius)
        .def_property_readonly("extension_exponent", &VolumeProfile::extension_exponent);
    m.def("volume_profile", &py_volume_profile, py::arg("graph"), py::arg("base") = "median");

    py::class_<JumpProfile>(m, "JumpProfile")
        .def(py::init([](double beta, double log_exponent) {
                 return JumpProfile{beta, log_exponent};
             }),
             py::arg("beta"), py::arg("log_exponent") = 0.0)
        .def("__call__", &JumpProfile::operator(), py::arg("t"))
        .def_readonly("beta", &JumpProfile::beta)
        .def_readonly("log_exponent", &JumpProfile::log_exponent);

    py::class_<EtaZeta>(m, "EtaZeta")
        .def(py::init([](const JumpProfile& phi, double gamma, double s_max) {
                 return EtaZeta(phi, gamma, s_max);
             }),
             py::arg("profile"), py::arg("gamma"), py::arg("s_max") = 1.0e6)
        .def("eta", &EtaZeta::eta, py::arg("t"))
        .def("eta_tilde", &EtaZeta::eta_tilde, py::arg("t"))
        .def("zeta",
             [](const EtaZeta& ez, double t) {
                 bool clamped = false;
                 double s = ez.zeta(t, &clamped);
                 return py::make_tuple(s, clamped);
             },
             py::arg("t"))
        .def_property_readonly("gamma", &EtaZeta::gamma)
        .def_property_readonly("eta_max", &EtaZeta::eta_max);

    py::class_<MarkovKernel>(m, "MarkovKernel")
        .def_property_readonly("size", &MarkovKernel::size)
        .def_property_readonly("label", &MarkovKernel::label)
        .def_property_readonly("is_sparse", &MarkovKernel::is_sparse)
        .def("entry", &MarkovKernel::entry, py::arg("x"), py::arg("y"))
        .def("row_sum", &MarkovKernel::row_sum, py::arg("x"))
        .def("apply", &MarkovKernel::apply, py::arg("f"))
        .def("apply_power", &MarkovKernel::apply_power, py::arg("f"), py::arg("n"))
        .def("kernel_row", &MarkovKernel::kernel_row, py::arg("x"), py::arg("n") = 1);

    m.def("natural_walk", [](const PyGraph& g) {
        double p0 = 0.0;
        auto P = natural_walk(g.g, &p0);
        return py::make_tuple(std::move(P), p0);
    }, py::arg("graph"));
    m.def("lazy_pair", &lazy_pair, py::arg("P"));
    m.def("jump_kernel",
          [](const PyGraph& g, const JumpProfile& phi, const VolumeProfile& V) {
              JumpKernelReport rep;
              auto K = jump_kernel(g.g, phi, V, &rep);
              py::dict info;
              info["normalization"] = rep.normalization;
              info["C_phi"] = rep.C_phi;
              info["interior_margin"] = rep.interior_margin;
              return py::make_tuple(std::move(K), info);
          },
          py::arg("graph"), py::arg("profile"), py::arg("volume"));
    m.def("subordinated_kernel",
          [](const MarkovKernel& Q, const JumpProfile& phi, double gamma, int truncation,
             int pool) {
              SubordinatedReport rep;
              auto K = subordinated_kernel(Q, phi, gamma, truncation, &rep, pool);
              py::dict info;
              info["truncation"] = rep.truncation;
              info["c_phi"] = rep.c_phi;
              info["max_power"] = rep.max_power;
              info["covers_diameter"] = rep.covers_diameter;
              return py::make_tuple(std::move(K), info);
          },
          py::arg("Q"), py::arg("profile"), py::arg("gamma"), py::arg("truncation") = -1,
          py::arg("pool") = 1);
    m.def("stable_kernel",
          [](const MarkovKernel& Q, double t, double beta0, double eps, int budget, int pool) {
              StableKernelOptions opts;
              opts.eps = eps;
              opts.i_budget = budget;
              opts.pool = pool;
              StableKernelReport rep;
              auto K = stable_kernel(Q, t, beta0, opts, &rep);
              py::dict info;
              info["i_max"] = rep.i_max;
              info["tail_mass"] = rep.tail_mass;
              info["complete"] = rep.complete;
              return py::make_tuple(std::move(K), info);
          },
          py::arg("Q"), py::arg("t"), py::arg("beta0"), py::arg("eps") = 1e-3,
          py::arg("budget") = 4000, py::arg("pool") = 1);

    m.def("psi_curve",
          [](const MarkovKernel& K, const std::vector<int>& n_list,
             const std::vector<int>& base, double safe_n_max, int pool) {
              return curve_to_dict(psi_curve(K, n_list, base, safe_n_max, pool));
          },
          py::arg("K"), py::arg("n_list"), py::arg("base_set"), py::arg("safe_n_max") = -1.0,
          py::arg("pool") = 1);
    m.def("moment",
          [](const MarkovKernel& K, double r, double margin) {
              auto res = moment(K, r, margin);
              return py::make_tuple(res.value, res.argmax_vertex);
          },
          py::arg("K"), py::arg("r"), py::arg("margin") = -1.0);
    m.def("dirichlet",
          [](const MarkovKernel& K, const Eigen::VectorXd& f) {
              auto rep = dirichlet(K, f);
              py::dict d;
              d["energy"] = rep.energy;
              d["energy_pairwise"] = rep.energy_pairwise;
              d["norm_l1"] = rep.norm_l1;
              d["norm_l2"] = rep.norm_l2;
              d["norm_linf"] = rep.norm_linf;
              return d;
          },
          py::arg("K"), py::arg("f"));
    m.def("ball_average",
          [](const PyGraph& g, const Eigen::VectorXd& f, double R) {
              return ball_average(*g.g, f, R);
          },
          py::arg("graph"), py::arg("f"), py::arg("R"));
    m.def("resistance",
          [](const PyGraph& g, const std::vector<int>& A, const std::vector<int>& B,
             double tol) {
              auto res = resistance(ConductanceNetwork::from_graph(*g.g), A, B, tol);
              py::dict d;
              d["resistance"] = res.resistance;
              d["energy"] = res.energy;
              d["converged"] = res.converged;
              d["infinite"] = res.infinite;
              d["iterations"] = res.iterations;
              return d;
          },
          py::arg("graph"), py::arg("A"), py::arg("B"), py::arg("tol") = 1e-10);
    m.def("kernel_resistance",
          [](const MarkovKernel& K, const std::vector<int>& A, const std::vector<int>& B,
             double tol) {
              auto res = resistance(ConductanceNetwork::from_kernel(K), A, B, tol);
              return res.resistance;
          },
          py::arg("K"), py::arg("A"), py::arg("B"), py::arg("tol") = 1e-10);
    m.def("lambda_ball", &lambda_ball, py::arg("K"), py::arg("ball"), py::arg("tol") = 1e-10,
          py::arg("max_iter") = 20000);

    m.def("discrete_stable_pmf",
          [](double t, double beta0, int i_max) {
              auto w = discrete_stable_pmf(t, beta0, i_max);
              return py::make_tuple(w.pmf, w.tail_mass);
          },
          py::arg("t"), py::arg("beta0"), py::arg("i_max"));

    m.def("psi_scenario",
          [](const std::string& config_text) {
              auto ctx = build_context(ScenarioConfig::from_text(config_text));
              return psi_csv_text(ctx);
          },
          py::arg("config_text"), "DecayCurve CSV for a scenario config");
    m.def("verify_scenario",
          [](const std::string& config_text) {
              auto cfg = ScenarioConfig::from_text(config_text);
              auto ctx = build_context(cfg);
              auto ids = parse_check_list(ctx, cfg.checks);
              auto reports = run_checks(ctx, ids);
              bool all_pass = true;
              for (const auto& r : reports) all_pass = all_pass && r.pass;
              std::map<std::string, std::string> meta{{"family", cfg.family},
                                                      {"kernel", cfg.kernel}};
              return py::make_tuple(verify_json(reports, meta, all_pass), all_pass);
          },
          py::arg("config_text"), "Run inequality checks; returns (json, all_pass)");
}
