#include "walklab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace walklab {

namespace {

Eigen::VectorXd measure_vector(const WeightedGraph& g) {
    Eigen::VectorXd mu(g.vertex_count());
    for (int x = 0; x < g.vertex_count(); ++x) mu[x] = g.vertex_measure(x);
    return mu;
}

void check_nonnegative(double v, const std::string& label) {
    if (v < -1e-12)
        throw error("kernel " + label + ": negative entry " + format_g17(v));
}

// distances without touching the graph's shared cache (bulk sweeps)
void local_distances(const WeightedGraph& g, int x, std::vector<int>& dist) {
    dist.assign(g.vertex_count(), -1);
    std::deque<int> q{x};
    dist[x] = 0;
    while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        for (auto [b, w] : g.neighbors(a)) {
            if (dist[b] < 0) {
                dist[b] = dist[a] + 1;
                q.push_back(b);
            }
        }
    }
}

}  // namespace

MarkovKernel MarkovKernel::from_dense(GraphPtr g, Eigen::MatrixXd k, std::string label) {
    if (k.rows() != k.cols() || k.rows() != g->vertex_count())
        throw error("kernel: dense size mismatch");
    Eigen::MatrixXd sym = 0.5 * (k + k.transpose());
    for (int j = 0; j < sym.cols(); ++j) {
        for (int i = 0; i < sym.rows(); ++i) {
            check_nonnegative(sym(i, j), label);
            if (sym(i, j) < 0) sym(i, j) = 0.0;
        }
    }
    MarkovKernel m;
    m.graph_ = std::move(g);
    m.mu_ = measure_vector(*m.graph_);
    m.label_ = std::move(label);
    m.sparse_storage_ = false;
    m.kd_ = std::move(sym);
    return m;
}

MarkovKernel MarkovKernel::from_sparse(GraphPtr g, Eigen::SparseMatrix<double> k,
                                       std::string label) {
    if (k.rows() != k.cols() || k.rows() != g->vertex_count())
        throw error("kernel: sparse size mismatch");
    Eigen::SparseMatrix<double> t = k.transpose();
    Eigen::SparseMatrix<double> sym = 0.5 * (k + t);
    sym.prune([&](int, int, double v) {
        check_nonnegative(v, label);
        return v > 0.0;
    });
    sym.makeCompressed();
    MarkovKernel m;
    m.graph_ = std::move(g);
    m.mu_ = measure_vector(*m.graph_);
    m.label_ = std::move(label);
    m.sparse_storage_ = true;
    m.ks_ = std::move(sym);
    return m;
}

MarkovKernel MarkovKernel::identity(GraphPtr g) {
    const int n = g->vertex_count();
    Eigen::SparseMatrix<double> k(n, n);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(n);
    for (int x = 0; x < n; ++x) trips.emplace_back(x, x, 1.0 / g->vertex_measure(x));
    k.setFromTriplets(trips.begin(), trips.end());
    return from_sparse(std::move(g), std::move(k), "identity");
}

double MarkovKernel::entry(int x, int y) const {
    graph_->check_vertex(x);
    graph_->check_vertex(y);
    if (!sparse_storage_) return kd_(x, y);
    return ks_.coeff(x, y);
}

double MarkovKernel::row_sum(int x) const {
    graph_->check_vertex(x);
    KahanSum acc;
    if (!sparse_storage_) {
        for (int y = 0; y < size(); ++y) acc.add(kd_(x, y) * mu_[y]);
    } else {
        for (Eigen::SparseMatrix<double>::InnerIterator it(ks_, x); it; ++it)
            acc.add(it.value() * mu_[it.row()]);  // column x == row x by symmetry
    }
    return acc.value();
}

Eigen::VectorXd MarkovKernel::apply(const Eigen::VectorXd& f) const {
    if (f.size() != mu_.size()) throw error("kernel apply: size mismatch");
    Eigen::VectorXd weighted = mu_.cwiseProduct(f);
    if (!sparse_storage_) return kd_ * weighted;
    return ks_ * weighted;
}

Eigen::VectorXd MarkovKernel::apply_power(const Eigen::VectorXd& f, int n) const {
    if (n < 0) throw error("kernel power: negative exponent");
    Eigen::VectorXd v = f;
    for (int i = 0; i < n; ++i) v = apply(v);
    return v;
}

Eigen::VectorXd MarkovKernel::kernel_row(int x, int n) const {
    graph_->check_vertex(x);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(size());
    e[x] = 1.0 / mu_[x];
    return apply_power(e, n);
}

const Eigen::MatrixXd& MarkovKernel::dense_matrix() const {
    if (sparse_storage_) throw error("kernel: dense storage requested from sparse kernel");
    return kd_;
}

const Eigen::SparseMatrix<double>& MarkovKernel::sparse_matrix() const {
    if (!sparse_storage_) throw error("kernel: sparse storage requested from dense kernel");
    return ks_;
}

MarkovKernel natural_walk(GraphPtr g, double* p0) {
    const int n = g->vertex_count();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * g->edge_count());
    double min_p = 1.0;
    for (const Edge& e : g->edges()) {
        double mu_u = g->vertex_measure(e.u);
        double mu_v = g->vertex_measure(e.v);
        double k = e.w / (mu_u * mu_v);
        trips.emplace_back(e.u, e.v, k);
        trips.emplace_back(e.v, e.u, k);
        min_p = std::min(min_p, std::min(e.w / mu_u, e.w / mu_v));
    }
    if (p0) *p0 = min_p;
    Eigen::SparseMatrix<double> k(n, n);
    k.setFromTriplets(trips.begin(), trips.end());
    return MarkovKernel::from_sparse(std::move(g), std::move(k), "P");
}

MarkovKernel lazy_pair(const MarkovKernel& P) {
    if (!P.is_sparse()) throw error("lazy_pair: expects the sparse natural walk");
    const Eigen::SparseMatrix<double>& sp = P.sparse_matrix();
    Eigen::SparseMatrix<double> p2 = sp * P.measure_vec().asDiagonal() * sp;
    Eigen::SparseMatrix<double> q = 0.5 * (sp + p2);
    return MarkovKernel::from_sparse(P.graph(), std::move(q), "Q");
}

MarkovKernel jump_kernel(GraphPtr g, const JumpProfile& phi, const VolumeProfile& V,
                         JumpKernelReport* report) {
    const int n = g->vertex_count();
    const int diam = g->diameter();
    std::vector<double> w(diam + 1, 0.0);
    for (int d = 1; d <= diam; ++d) w[d] = 1.0 / (V.value(d) * phi(d));

    Eigen::MatrixXd kd(n, n);
    std::vector<double> mass(n, 0.0);
    std::vector<int> dist;
    for (int x = 0; x < n; ++x) {
        local_distances(*g, x, dist);
        KahanSum row;
        for (int y = 0; y < n; ++y) {
            double v = y == x ? 0.0 : w[dist[y]];
            kd(x, y) = v;
            row.add(v * g->vertex_measure(y));
        }
        mass[x] = row.value();
    }
    int argmax = 0;
    for (int x = 1; x < n; ++x)
        if (mass[x] > mass[argmax]) argmax = x;
    const double Z = 2.0 * mass[argmax];
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) kd(x, y) /= Z;
        kd(x, x) = (1.0 - mass[x] / Z) / g->vertex_measure(x);
    }

    JumpKernelReport rep;
    rep.normalization = Z;
    rep.max_mass_vertex = argmax;
    double margin = std::min(g->safe_radius(), g->max_boundary_distance() / 2.0);
    rep.interior_margin = margin;
    auto interior = g->interior_vertices(margin);
    double C = 1.0;
    for (std::size_t i = 0; i < interior.size(); ++i) {
        local_distances(*g, interior[i], dist);
        for (std::size_t j = i; j < interior.size(); ++j) {
            int x = interior[i], y = interior[j];
            int d = dist[y];
            double target = 1.0 / (V.value(d) * phi(d));
            double rho = kd(x, y) / target;
            C = std::max(C, std::max(rho, 1.0 / rho));
        }
    }
    rep.C_phi = C;
    if (report) *report = rep;

    std::string label = "jump(beta=" + format_g17(phi.beta) +
                        (phi.log_exponent != 0.0 ? ",lambda=" + format_g17(phi.log_exponent) : "") +
                        ")";
    return MarkovKernel::from_dense(std::move(g), std::move(kd), std::move(label));
}

namespace {

// c_phi^{-1} = sum_{n>=1} 1/(n phi(n)): exact partial sum plus an integral
// tail estimate (the summand is smooth and decreasing).
double series_inverse_cphi(const JumpProfile& phi) {
    KahanSum acc;
    const long long N0 = 65536;
    for (long long m = 1; m <= N0; ++m) acc.add(1.0 / (m * phi(static_cast<double>(m))));
    auto f = [&phi](double s) { return 1.0 / (s * phi(s)); };
    double a = static_cast<double>(N0) + 0.5;
    for (int block = 0; block < 400; ++block) {
        double piece = integrate_adaptive(f, a, 2.0 * a, 1e-12);
        acc.add(piece);
        a *= 2.0;
        if (piece < 1e-16 * acc.value()) break;
    }
    return acc.value();
}

}  // namespace

MarkovKernel subordinated_kernel(const MarkovKernel& Q, const JumpProfile& phi, double gamma,
                                 int N_T, SubordinatedReport* report, int pool) {
    if (gamma < 2.0) throw error("subordinated kernel: gamma must be >= 2");
    const GraphPtr& g = Q.graph();
    const int n = Q.size();
    const int diam = g->diameter();

    auto power_of = [&](int m) {
        return 2LL * static_cast<long long>(std::floor(std::pow(static_cast<double>(m), gamma)));
    };
    if (N_T < 1) {
        N_T = 1;
        while (power_of(N_T) < 4LL * diam) ++N_T;
    }

    const double inv_cphi = series_inverse_cphi(phi);
    const double c_phi = 1.0 / inv_cphi;
    std::vector<double> weight(N_T + 1, 0.0);
    KahanSum partial;
    for (int m = 1; m < N_T; ++m) {
        weight[m] = c_phi / (m * phi(static_cast<double>(m)));
        partial.add(weight[m]);
    }
    double folded = 1.0 - partial.value();  // weight of n = N_T plus the series tail
    weight[N_T] = folded;

    std::vector<long long> powers(N_T + 1, 0);
    for (int m = 1; m <= N_T; ++m) powers[m] = power_of(m);

    Eigen::MatrixXd kd(n, n);
    parallel_for(n, pool, [&](int y) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        v[y] = 1.0 / g->vertex_measure(y);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
        long long step = 0;
        for (int m = 1; m <= N_T; ++m) {
            while (step < powers[m]) {
                v = Q.apply(v);
                ++step;
            }
            acc += weight[m] * v;
        }
        kd.col(y) = acc;
    });

    if (report) {
        report->truncation = N_T;
        report->folded_tail = folded - c_phi / (N_T * phi(static_cast<double>(N_T)));
        report->c_phi = c_phi;
        report->max_power = static_cast<int>(powers[N_T]);
        report->covers_diameter = powers[N_T] >= diam;
    }

    std::string label = "subordinated(beta=" + format_g17(phi.beta) +
                        ",gamma=" + format_g17(gamma) + ")";
    return MarkovKernel::from_dense(g, std::move(kd), std::move(label));
}

}  // namespace walklab
