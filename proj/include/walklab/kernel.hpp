#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <string>
#include <vector>

#include "walklab/asymptotics.hpp"
#include "walklab/graph.hpp"

namespace walklab {

/// Markov operator symmetric with respect to mu, stored through its kernel
/// k(x,y) = P(x,y)/mu(y). Sparse storage for the nearest-neighbour walks,
/// dense for the long-range constructions. Immutable after construction.
class MarkovKernel {
public:
    static MarkovKernel from_dense(GraphPtr g, Eigen::MatrixXd k, std::string label);
    static MarkovKernel from_sparse(GraphPtr g, Eigen::SparseMatrix<double> k, std::string label);
    static MarkovKernel identity(GraphPtr g);

    int size() const { return static_cast<int>(mu_.size()); }
    const GraphPtr& graph() const { return graph_; }
    const Eigen::VectorXd& measure_vec() const { return mu_; }
    const std::string& label() const { return label_; }
    bool is_sparse() const { return sparse_storage_; }

    double entry(int x, int y) const;
    /// sum_y k(x,y) mu(y); 1 within FP for every construction here.
    double row_sum(int x) const;

    /// K f, one application.
    Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
    /// K^n f by n successive applications.
    Eigen::VectorXd apply_power(const Eigen::VectorXd& f, int n) const;
    /// k_n(x, .) computed by applying K^n to the normalized indicator 1_x/mu(x).
    Eigen::VectorXd kernel_row(int x, int n = 1) const;

    const Eigen::MatrixXd& dense_matrix() const;
    const Eigen::SparseMatrix<double>& sparse_matrix() const;

private:
    MarkovKernel() = default;

    GraphPtr graph_;
    Eigen::VectorXd mu_;
    std::string label_;
    bool sparse_storage_ = false;
    Eigen::MatrixXd kd_;
    Eigen::SparseMatrix<double> ks_;
};

/// Natural walk P(x,y) = mu_xy / mu(x); reports p0 = min edge probability.
MarkovKernel natural_walk(GraphPtr g, double* p0 = nullptr);

/// Q = (P + P^2)/2.
MarkovKernel lazy_pair(const MarkovKernel& P);

struct JumpKernelReport {
    double normalization = 0.0;   // Z = 2 * max row mass
    int max_mass_vertex = 0;
    double C_phi = 0.0;           // measured comparability constant, interior pairs
    double interior_margin = 0.0;
};

/// Long-range kernel with off-diagonal k(x,y) = w(d(x,y))/Z,
/// w(d) = 1/(V(d) phi(d)), Z = 2 max_x sum_{y!=x} w mu(y); leftover mass
/// sits on the diagonal, which keeps every row exactly stochastic and
/// k(x,x) >= 1/(2 mu(x)).
MarkovKernel jump_kernel(GraphPtr g, const JumpProfile& phi, const VolumeProfile& V,
                         JumpKernelReport* report = nullptr);

struct SubordinatedReport {
    int truncation = 0;           // N_T
    double folded_tail = 0.0;     // series weight beyond N_T, folded into the last term
    double c_phi = 0.0;
    int max_power = 0;            // 2 floor(N_T^gamma)
    bool covers_diameter = true;  // warning flag when 2 floor(N_T^gamma) < diameter
};

/// Q_phi = sum_{n=1}^{N_T} c_phi/(n phi(n)) Q^{2 floor(n^gamma)} with the
/// series tail folded into the n = N_T term. N_T < 1 selects the default
/// (smallest N_T whose top power covers 4x the diameter).
MarkovKernel subordinated_kernel(const MarkovKernel& Q, const JumpProfile& phi, double gamma,
                                 int N_T = -1, SubordinatedReport* report = nullptr,
                                 int pool = 1);

struct DirichletReport {
    double energy = 0.0;           // <(I-K)f, f>
    double energy_pairwise = 0.0;  // 1/2 sum (f(x)-f(y))^2 k(x,y) mu(x) mu(y)
    double norm_l1 = 0.0;
    double norm_l2 = 0.0;
    double norm_linf = 0.0;
};

DirichletReport dirichlet(const MarkovKernel& K, const Eigen::VectorXd& f);

/// E_{K^n}(f,f) = ||f||_2^2 - <K^n f, f>.
double dirichlet_power(const MarkovKernel& K, const Eigen::VectorXd& f, int n);

struct DecayCurve {
    std::vector<int> n;
    std::vector<double> psi;
    std::vector<int> argmax_vertex;
    std::vector<bool> flagged;  // beyond the boundary-safe window
};

/// psi_K(n) = max over base_set of k_{2n}(x,x), evaluated as
/// sum_y k_n(x,y)^2 mu(y) with the rows advanced incrementally across n.
/// Entries with n > safe_n_max are flagged (safe_n_max < 0: never).
DecayCurve psi_curve(const MarkovKernel& K, const std::vector<int>& n_list,
                     const std::vector<int>& base_set, double safe_n_max = -1.0, int pool = 1);

struct MomentResult {
    double value = 0.0;
    int argmax_vertex = 0;
};

/// M_{r,K} = max over base vertices of sum_y d(x,y)^r k(x,y) mu(y).
/// margin < 0 probes the full graph.
MomentResult moment(const MarkovKernel& K, double r, double margin = -1.0);

/// mu-average of f over B(x, R); R < 1 returns f unchanged.
Eigen::VectorXd ball_average(const WeightedGraph& g, const Eigen::VectorXd& f, double R);

/// Symmetric nonnegative edge conductances; the Dirichlet energies of P and
/// of a general kernel K both live here (c_xy = mu_xy resp. k(x,y)mu(x)mu(y)).
class ConductanceNetwork {
public:
    static ConductanceNetwork from_graph(const WeightedGraph& g);
    static ConductanceNetwork from_kernel(const MarkovKernel& K);

    int size() const { return n_; }
    const std::vector<Eigen::Triplet<double>>& entries() const { return entries_; }  // u < v
    double energy(const Eigen::VectorXd& f) const;

private:
    int n_ = 0;
    std::vector<Eigen::Triplet<double>> entries_;
};

struct ResistanceResult {
    double resistance = 0.0;
    double energy = 0.0;
    Eigen::VectorXd potential;
    int iterations = 0;
    bool converged = true;
    bool infinite = false;
};

/// Effective resistance between disjoint vertex sets: solves the discrete
/// Dirichlet problem (f = 1 on A, 0 on B, harmonic elsewhere) with
/// Jacobi-preconditioned conjugate gradients and returns 1/E(f).
ResistanceResult resistance(const ConductanceNetwork& net, const std::vector<int>& A,
                            const std::vector<int>& B, double tol = 1e-10);

/// lambda(B) = sup ||Kf||_2^2 / ||f||_2^2 over f supported in `ball`,
/// by power iteration on the restricted K^2 (Rayleigh estimate, so the
/// result never exceeds the true value).
double lambda_ball(const MarkovKernel& K, const std::vector<int>& ball, double tol = 1e-10,
                   int max_iter = 20000);

// l^p(mu) helpers
double mu_dot(const Eigen::VectorXd& mu, const Eigen::VectorXd& f, const Eigen::VectorXd& g);
double mu_norm1(const Eigen::VectorXd& mu, const Eigen::VectorXd& f);
double mu_norm2(const Eigen::VectorXd& mu, const Eigen::VectorXd& f);

}  // namespace walklab
