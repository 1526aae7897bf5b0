#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/IterativeLinearSolvers>

#include "walklab/kernel.hpp"

namespace walklab {

double mu_dot(const Eigen::VectorXd& mu, const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    KahanSum acc;
    for (int i = 0; i < mu.size(); ++i) acc.add(mu[i] * f[i] * g[i]);
    return acc.value();
}

double mu_norm1(const Eigen::VectorXd& mu, const Eigen::VectorXd& f) {
    KahanSum acc;
    for (int i = 0; i < mu.size(); ++i) acc.add(mu[i] * std::fabs(f[i]));
    return acc.value();
}

double mu_norm2(const Eigen::VectorXd& mu, const Eigen::VectorXd& f) {
    return std::sqrt(mu_dot(mu, f, f));
}

DirichletReport dirichlet(const MarkovKernel& K, const Eigen::VectorXd& f) {
    if (f.size() != K.size()) throw error("dirichlet: size mismatch");
    const Eigen::VectorXd& mu = K.measure_vec();
    DirichletReport rep;
    Eigen::VectorXd Kf = K.apply(f);
    rep.energy = mu_dot(mu, f - Kf, f);

    KahanSum pair;
    if (K.is_sparse()) {
        const auto& s = K.sparse_matrix();
        for (int col = 0; col < s.outerSize(); ++col) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(s, col); it; ++it) {
                int x = static_cast<int>(it.row()), y = col;
                if (x >= y) continue;
                double d = f[x] - f[y];
                pair.add(d * d * it.value() * mu[x] * mu[y]);
            }
        }
    } else {
        const auto& kd = K.dense_matrix();
        for (int x = 0; x < K.size(); ++x) {
            for (int y = x + 1; y < K.size(); ++y) {
                double d = f[x] - f[y];
                pair.add(d * d * kd(x, y) * mu[x] * mu[y]);
            }
        }
    }
    rep.energy_pairwise = pair.value();
    rep.norm_l1 = mu_norm1(mu, f);
    rep.norm_l2 = mu_norm2(mu, f);
    rep.norm_linf = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    return rep;
}

double dirichlet_power(const MarkovKernel& K, const Eigen::VectorXd& f, int n) {
    const Eigen::VectorXd& mu = K.measure_vec();
    Eigen::VectorXd fn = K.apply_power(f, n);
    return mu_dot(mu, f, f) - mu_dot(mu, fn, f);
}

DecayCurve psi_curve(const MarkovKernel& K, const std::vector<int>& n_list,
                     const std::vector<int>& base_set, double safe_n_max, int pool) {
    if (n_list.empty()) throw error("psi: empty n list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw error("psi: n list must be strictly increasing");
    if (n_list.front() < 0) throw error("psi: n must be nonnegative");
    if (base_set.empty()) throw error("psi: empty base set");
    for (int x : base_set) K.graph()->check_vertex(x);

    const Eigen::VectorXd& mu = K.measure_vec();
    const int points = static_cast<int>(n_list.size());
    std::vector<std::vector<double>> per_base(base_set.size());

    parallel_for(static_cast<int>(base_set.size()), pool, [&](int bi) {
        int x = base_set[bi];
        Eigen::VectorXd row = Eigen::VectorXd::Zero(K.size());
        row[x] = 1.0 / mu[x];
        std::vector<double> vals(points);
        int m = 0;
        for (int j = 0; j < points; ++j) {
            while (m < n_list[j]) {
                row = K.apply(row);
                ++m;
            }
            KahanSum acc;
            for (int y = 0; y < K.size(); ++y) acc.add(row[y] * row[y] * mu[y]);
            vals[j] = acc.value();
        }
        per_base[bi] = std::move(vals);
    });

    DecayCurve curve;
    curve.n = n_list;
    curve.psi.resize(points);
    curve.argmax_vertex.resize(points);
    curve.flagged.resize(points);
    for (int j = 0; j < points; ++j) {
        double best = -1.0;
        int arg = base_set[0];
        for (std::size_t bi = 0; bi < base_set.size(); ++bi) {
            if (per_base[bi][j] > best) {
                best = per_base[bi][j];
                arg = base_set[bi];
            }
        }
        curve.psi[j] = best;
        curve.argmax_vertex[j] = arg;
        curve.flagged[j] = safe_n_max >= 0 && n_list[j] > safe_n_max;
    }
    return curve;
}

MomentResult moment(const MarkovKernel& K, double r, double margin) {
    if (r <= 0) throw error("moment: order must be positive");
    const GraphPtr& g = K.graph();
    std::vector<int> base =
        margin < 0 ? [&] {
            std::vector<int> all(g->vertex_count());
            for (int i = 0; i < g->vertex_count(); ++i) all[i] = i;
            return all;
        }()
                   : g->interior_vertices(margin);
    if (base.empty()) throw error("moment: empty base set at margin " + format_g17(margin));

    MomentResult out;
    out.argmax_vertex = base[0];
    std::vector<int> dist;
    for (int x : base) {
        dist.assign(g->vertex_count(), -1);
        std::deque<int> q{x};
        dist[x] = 0;
        while (!q.empty()) {
            int a = q.front();
            q.pop_front();
            for (auto [b, w] : g->neighbors(a)) {
                if (dist[b] < 0) {
                    dist[b] = dist[a] + 1;
                    q.push_back(b);
                }
            }
        }
        KahanSum acc;
        if (K.is_sparse()) {
            const auto& s = K.sparse_matrix();
            for (Eigen::SparseMatrix<double>::InnerIterator it(s, x); it; ++it) {
                int y = static_cast<int>(it.row());
                if (y == x) continue;
                acc.add(std::pow(static_cast<double>(dist[y]), r) * it.value() *
                        g->vertex_measure(y));
            }
        } else {
            const auto& kd = K.dense_matrix();
            for (int y = 0; y < K.size(); ++y) {
                if (y == x) continue;
                acc.add(std::pow(static_cast<double>(dist[y]), r) * kd(x, y) *
                        g->vertex_measure(y));
            }
        }
        if (acc.value() > out.value) {
            out.value = acc.value();
            out.argmax_vertex = x;
        }
    }
    return out;
}

Eigen::VectorXd ball_average(const WeightedGraph& g, const Eigen::VectorXd& f, double R) {
    if (f.size() != g.vertex_count()) throw error("ball_average: size mismatch");
    if (R < 0) throw error("ball_average: negative radius");
    Eigen::VectorXd out(f.size());
    for (int x = 0; x < g.vertex_count(); ++x) {
        KahanSum num, den;
        for (int y : g.ball(x, R)) {
            num.add(f[y] * g.vertex_measure(y));
            den.add(g.vertex_measure(y));
        }
        out[x] = num.value() / den.value();
    }
    return out;
}

ConductanceNetwork ConductanceNetwork::from_graph(const WeightedGraph& g) {
    ConductanceNetwork net;
    net.n_ = g.vertex_count();
    net.entries_.reserve(g.edge_count());
    for (const Edge& e : g.edges()) net.entries_.emplace_back(e.u, e.v, e.w);
    return net;
}

ConductanceNetwork ConductanceNetwork::from_kernel(const MarkovKernel& K) {
    ConductanceNetwork net;
    net.n_ = K.size();
    const Eigen::VectorXd& mu = K.measure_vec();
    if (K.is_sparse()) {
        const auto& s = K.sparse_matrix();
        for (int col = 0; col < s.outerSize(); ++col) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(s, col); it; ++it) {
                int x = static_cast<int>(it.row());
                if (x < col && it.value() > 0)
                    net.entries_.emplace_back(x, col, it.value() * mu[x] * mu[col]);
            }
        }
    } else {
        const auto& kd = K.dense_matrix();
        for (int x = 0; x < K.size(); ++x) {
            for (int y = x + 1; y < K.size(); ++y) {
                if (kd(x, y) > 0) net.entries_.emplace_back(x, y, kd(x, y) * mu[x] * mu[y]);
            }
        }
    }
    return net;
}

double ConductanceNetwork::energy(const Eigen::VectorXd& f) const {
    KahanSum acc;
    for (const auto& t : entries_) {
        double d = f[t.row()] - f[t.col()];
        acc.add(d * d * t.value());
    }
    return acc.value();
}

ResistanceResult resistance(const ConductanceNetwork& net, const std::vector<int>& A,
                            const std::vector<int>& B, double tol) {
    const int n = net.size();
    if (A.empty() || B.empty()) throw error("resistance: terminal sets must be nonempty");
    std::vector<int> role(n, -1);  // 0 interior, 1 = A, 2 = B
    for (int a : A) {
        if (a < 0 || a >= n) throw error("resistance: vertex out of range");
        role[a] = 1;
    }
    for (int b : B) {
        if (b < 0 || b >= n) throw error("resistance: vertex out of range");
        if (role[b] == 1) throw error("resistance: terminal sets must be disjoint");
        role[b] = 2;
    }

    // adjacency over positive conductances, for the component check
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& t : net.entries()) {
        adj[t.row()].push_back({t.col(), t.value()});
        adj[t.col()].push_back({t.row(), t.value()});
    }
    std::vector<char> reach(n, 0);
    std::deque<int> q;
    for (int a : A) {
        reach[a] = 1;
        q.push_back(a);
    }
    bool touches_b = false;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        if (role[x] == 2) {
            touches_b = true;
            continue;  // B is grounded; do not walk through it
        }
        for (auto [y, c] : adj[x]) {
            if (!reach[y]) {
                reach[y] = 1;
                q.push_back(y);
            }
        }
    }
    ResistanceResult res;
    if (!touches_b) {
        res.infinite = true;
        res.resistance = std::numeric_limits<double>::infinity();
        res.energy = 0.0;
        res.potential = Eigen::VectorXd::Zero(n);
        for (int x = 0; x < n; ++x)
            if (reach[x]) res.potential[x] = 1.0;
        return res;
    }

    std::vector<int> unknown_index(n, -1);
    std::vector<int> unknowns;
    for (int x = 0; x < n; ++x) {
        if (role[x] == -1) {
            unknown_index[x] = static_cast<int>(unknowns.size());
            unknowns.push_back(x);
        }
    }

    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    for (int a : A) f[a] = 1.0;

    res.iterations = 0;
    if (!unknowns.empty()) {
        const int m = static_cast<int>(unknowns.size());
        std::vector<Eigen::Triplet<double>> trips;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
        std::vector<double> diag(m, 0.0);
        for (const auto& t : net.entries()) {
            int x = t.row(), y = t.col();
            double c = t.value();
            int ix = unknown_index[x], iy = unknown_index[y];
            if (ix >= 0) diag[ix] += c;
            if (iy >= 0) diag[iy] += c;
            if (ix >= 0 && iy >= 0) {
                trips.emplace_back(ix, iy, -c);
                trips.emplace_back(iy, ix, -c);
            } else if (ix >= 0 && role[y] == 1) {
                rhs[ix] += c;
            } else if (iy >= 0 && role[x] == 1) {
                rhs[iy] += c;
            }
        }
        for (int i = 0; i < m; ++i) trips.emplace_back(i, i, diag[i]);
        Eigen::SparseMatrix<double> L(m, m);
        L.setFromTriplets(trips.begin(), trips.end());

        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>
            solver;
        solver.setTolerance(tol);
        solver.setMaxIterations(static_cast<int>(50.0 * std::sqrt(static_cast<double>(m))) + 20);
        solver.compute(L);
        Eigen::VectorXd sol = solver.solve(rhs);
        res.iterations = static_cast<int>(solver.iterations());
        res.converged = solver.info() == Eigen::Success;
        for (int i = 0; i < m; ++i) f[unknowns[i]] = sol[i];
    }

    res.potential = f;
    res.energy = net.energy(f);
    if (res.energy <= 0) {
        res.infinite = true;
        res.resistance = std::numeric_limits<double>::infinity();
    } else {
        res.resistance = 1.0 / res.energy;
    }
    return res;
}

double lambda_ball(const MarkovKernel& K, const std::vector<int>& ball, double tol,
                   int max_iter) {
    if (ball.empty()) throw error("lambda_ball: empty support");
    for (int x : ball) K.graph()->check_vertex(x);
    const Eigen::VectorXd& mu = K.measure_vec();
    std::vector<char> in_ball(K.size(), 0);
    for (int x : ball) in_ball[x] = 1;

    Rng rng(0xba11u);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(K.size());
    for (int x : ball) v[x] = rng.uniform(0.5, 1.0);
    v /= mu_norm2(mu, v);

    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = K.apply(K.apply(v));
        for (int x = 0; x < K.size(); ++x)
            if (!in_ball[x]) w[x] = 0.0;
        double rayleigh = mu_dot(mu, w, v);  // = ||K v||^2 since v is unit
        double norm = mu_norm2(mu, w);
        if (norm <= 0) return 0.0;
        v = w / norm;
        if (it > 2 && std::fabs(rayleigh - lambda) <= tol * std::max(rayleigh, 1e-300)) {
            lambda = rayleigh;
            break;
        }
        lambda = rayleigh;
    }
    return lambda;
}

}  // namespace walklab
