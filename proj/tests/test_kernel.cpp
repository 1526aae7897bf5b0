#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "walklab/families.hpp"
#include "walklab/kernel.hpp"

using namespace walklab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// dense row-stochastic operator matrix A(x,y) = k(x,y) mu(y)
MatrixXd operator_matrix(const MarkovKernel& K) {
    const int n = K.size();
    MatrixXd A(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) A(x, y) = K.entry(x, y) * K.measure_vec()[y];
    return A;
}

MatrixXd matrix_power(const MatrixXd& A, int n) {
    MatrixXd out = MatrixXd::Identity(A.rows(), A.cols());
    for (int i = 0; i < n; ++i) out = out * A;
    return out;
}

// mu-symmetrized form S = D^{1/2} k D^{1/2}, shares the operator spectrum
MatrixXd symmetrized(const MarkovKernel& K) {
    const int n = K.size();
    MatrixXd S(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            S(x, y) = std::sqrt(K.measure_vec()[x]) * K.entry(x, y) *
                      std::sqrt(K.measure_vec()[y]);
    return S;
}

VectorXd random_vector(int n, std::uint64_t seed) {
    Rng rng(seed);
    VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = rng.normal();
    return f;
}

}  // namespace

TEST_CASE("natural walk") {
    auto g2 = WeightedGraph::from_edges({{0, 1, 1.0}});
    double p0 = 0;
    auto P = natural_walk(g2, &p0);
    CHECK(P.entry(0, 1) * P.measure_vec()[1] == doctest::Approx(1.0));  // P(0,1) = 1
    CHECK(p0 == doctest::Approx(1.0));

    auto cyc = generate({Family::cycle, 4});
    auto Pc = natural_walk(cyc);
    for (int x = 0; x < 4; ++x) {
        CHECK(Pc.entry(x, (x + 1) % 4) * Pc.measure_vec()[(x + 1) % 4] ==
              doctest::Approx(0.5));
        CHECK(Pc.row_sum(x) == doctest::Approx(1.0).epsilon(1e-14));
    }

    // weighted star: transition probabilities proportional to the weights
    auto star = WeightedGraph::from_edges({{0, 1, 1.0}, {0, 2, 2.0}});
    auto Ps = natural_walk(star);
    CHECK(Ps.entry(0, 1) * Ps.measure_vec()[1] == doctest::Approx(1.0 / 3.0));
    CHECK(Ps.entry(0, 2) * Ps.measure_vec()[2] == doctest::Approx(2.0 / 3.0));
    CHECK(Ps.row_sum(0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("lazy pair") {
    auto g2 = WeightedGraph::from_edges({{0, 1, 1.0}});
    auto Q2 = lazy_pair(natural_walk(g2));
    // P^2 = I on two vertices, so Q = (P + I)/2 has all transitions 1/2
    CHECK(Q2.entry(0, 0) * Q2.measure_vec()[0] == doctest::Approx(0.5));
    CHECK(Q2.entry(0, 1) * Q2.measure_vec()[1] == doctest::Approx(0.5));

    auto cyc = generate({Family::cycle, 4});
    auto P = natural_walk(cyc);
    auto Q = lazy_pair(P);
    MatrixXd A = operator_matrix(P);
    MatrixXd AQ = 0.5 * (A + A * A);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            CHECK(Q.entry(x, y) * Q.measure_vec()[y] ==
                  doctest::Approx(AQ(x, y)).epsilon(1e-14));

    // spectrum of Q = (lambda + lambda^2)/2 >= -1/8
    for (auto spec : {FamilySpec{Family::cycle, 5}, FamilySpec{Family::path, 6},
                      FamilySpec{Family::sierpinski_gasket, 1}}) {
        auto g = generate(spec);
        auto Qs = lazy_pair(natural_walk(g));
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(Qs));
        CHECK(es.eigenvalues().minCoeff() >= -0.125 - 1e-12);
        CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
    }
}

TEST_CASE("power apply against the dense oracle") {
    auto cyc = generate({Family::cycle, 8});
    auto Q = lazy_pair(natural_walk(cyc));
    VectorXd f = random_vector(8, 99);

    CHECK((Q.apply_power(f, 0) - f).norm() == 0.0);  // n = 0 is the identity

    MatrixXd A = operator_matrix(Q);
    VectorXd oracle = matrix_power(A, 5) * f;
    CHECK((Q.apply_power(f, 5) - oracle).lpNorm<Eigen::Infinity>() < 1e-12);

    VectorXd ones = VectorXd::Ones(8);
    CHECK((Q.apply_power(ones, 7) - ones).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("kernel rows") {
    auto g = generate({Family::sierpinski_gasket, 3});
    auto Q = lazy_pair(natural_walk(g));

    // n = 0 is the normalized indicator
    VectorXd r0 = Q.kernel_row(5, 0);
    for (int y = 0; y < Q.size(); ++y)
        CHECK(r0[y] == (y == 5 ? doctest::Approx(1.0 / Q.measure_vec()[5]) : doctest::Approx(0.0)));

    // symmetry of two independently computed rows at n = 10
    VectorXd ra = Q.kernel_row(3, 10), rb = Q.kernel_row(17, 10);
    CHECK(ra[17] == doctest::Approx(rb[3]).epsilon(1e-12));

    // stochasticity: sum_y k_n(x,y) mu(y) = 1
    double total = 0;
    for (int y = 0; y < Q.size(); ++y) total += ra[y] * Q.measure_vec()[y];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Chapman-Kolmogorov: k_{m+n}(x,.) = K^m k_n(x,.)
    VectorXd lhs = Q.kernel_row(3, 7);
    VectorXd rhs = Q.apply_power(Q.kernel_row(3, 4), 3);
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("jump kernel") {
    auto g2 = WeightedGraph::from_edges({{0, 1, 1.0}});
    auto V2 = VolumeProfile::build(*g2);
    JumpKernelReport rep;
    auto K2 = jump_kernel(g2, JumpProfile{1.0, 0.0}, V2, &rep);
    // single off-diagonal pair: k(0,1) mu(1) = 1/2 by the choice of Z
    CHECK(K2.entry(0, 1) * K2.measure_vec()[1] == doctest::Approx(0.5));
    CHECK(K2.entry(0, 0) * K2.measure_vec()[0] == doctest::Approx(0.5));
    CHECK(K2.row_sum(0) == doctest::Approx(1.0).epsilon(1e-14));

    auto g = generate({Family::sierpinski_gasket, 4});
    auto V = VolumeProfile::build(*g);
    JumpKernelReport repg;
    auto K = jump_kernel(g, JumpProfile{1.0, 0.0}, V, &repg);
    for (int x = 0; x < K.size(); x += 7)
        CHECK(K.row_sum(x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(repg.C_phi > 1.0);
    CHECK(std::isfinite(repg.C_phi));
    // diagonal laziness >= 1/(2 mu(x))
    for (int x = 0; x < K.size(); ++x)
        CHECK(K.entry(x, x) >= 0.5 / K.measure_vec()[x] - 1e-15);

    // off-diagonal mass is exactly 1/2 at the maximizing vertex
    auto lat = generate({Family::lattice_box, 9, 2});
    auto Vl = VolumeProfile::build(*lat);
    JumpKernelReport repl;
    auto Kl = jump_kernel(lat, JumpProfile{4.0, 0.0}, Vl, &repl);
    int xm = repl.max_mass_vertex;
    double off = Kl.row_sum(xm) - Kl.entry(xm, xm) * Kl.measure_vec()[xm];
    CHECK(off == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("subordinated kernel") {
    // two vertices: Q is the projector onto constants, so Q^m = Q and
    // the subordinated kernel equals Q itself
    auto g2 = WeightedGraph::from_edges({{0, 1, 1.0}});
    auto Q2 = lazy_pair(natural_walk(g2));
    SubordinatedReport rep2;
    auto K2 = subordinated_kernel(Q2, JumpProfile{1.5, 0.0}, 2.0, -1, &rep2);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            CHECK(K2.entry(x, y) == doctest::Approx(Q2.entry(x, y)).epsilon(1e-13));
    CHECK(rep2.covers_diameter);

    auto g = generate({Family::sierpinski_gasket, 3});
    auto Q = lazy_pair(natural_walk(g));
    double gamma = expected_exponents(Family::sierpinski_gasket)->second;
    SubordinatedReport rep;
    auto K = subordinated_kernel(Q, JumpProfile{1.5, 0.0}, gamma, -1, &rep, 2);
    CHECK(rep.covers_diameter);
    CHECK(rep.c_phi > 0.0);
    for (int x = 0; x < K.size(); x += 3)
        CHECK(K.row_sum(x) == doctest::Approx(1.0).epsilon(1e-10));

    // two-sided comparability band on interior pairs with d >= 2
    auto V = VolumeProfile::build(*g);
    double lo = 1e300, hi = 0.0;
    auto interior = g->interior_vertices(2.0);
    for (int x : interior) {
        for (int y : interior) {
            int d = g->distance(x, y);
            if (d < 2) continue;
            double r = K.entry(x, y) * V.value(d) * JumpProfile{1.5, 0.0}(d);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    }
    CHECK(hi / lo < 100.0);
}

TEST_CASE("dirichlet forms") {
    auto g2 = WeightedGraph::from_edges({{0, 1, 1.0}});
    auto P2 = natural_walk(g2);
    VectorXd f(2);
    f << 1.0, 0.0;
    auto rep = dirichlet(P2, f);
    CHECK(rep.energy == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.energy_pairwise == doctest::Approx(1.0).epsilon(1e-14));

    auto cyc = generate({Family::cycle, 8});
    auto Q = lazy_pair(natural_walk(cyc));
    VectorXd c = VectorXd::Constant(8, 3.25);
    CHECK(dirichlet(Q, c).energy == doctest::Approx(0.0).epsilon(1e-14));

    VectorXd r = random_vector(8, 1234);
    auto rr = dirichlet(Q, r);
    CHECK(rr.energy == doctest::Approx(rr.energy_pairwise).epsilon(1e-12));

    // jump kernel: the two evaluation routes agree too
    auto V = VolumeProfile::build(*cyc);
    auto K = jump_kernel(cyc, JumpProfile{2.0, 0.0}, V);
    auto rj = dirichlet(K, r);
    CHECK(rj.energy == doctest::Approx(rj.energy_pairwise).epsilon(1e-12));
}

TEST_CASE("psi curve") {
    auto cyc = generate({Family::cycle, 8});
    auto Q = lazy_pair(natural_walk(cyc));
    std::vector<int> base(8);
    for (int i = 0; i < 8; ++i) base[i] = i;
    std::vector<int> ns{0, 1, 2, 3, 5, 8};
    auto curve = psi_curve(Q, ns, base);

    // n = 0: max over x of 1/mu(x)
    CHECK(curve.psi[0] == doctest::Approx(0.5));

    // spectral oracle: psi(n) = max_x sum_j lambda_j^{2n} u_j(x)^2 / mu(x)
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(Q));
    for (std::size_t j = 0; j < ns.size(); ++j) {
        double oracle = 0.0;
        for (int x = 0; x < 8; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 8; ++k)
                acc += std::pow(es.eigenvalues()[k], 2 * ns[j]) *
                       es.eigenvectors()(x, k) * es.eigenvectors()(x, k);
            oracle = std::max(oracle, acc / Q.measure_vec()[x]);
        }
        CHECK(curve.psi[j] == doctest::Approx(oracle).epsilon(1e-12));
    }

    // non-increasing in n
    for (std::size_t j = 1; j < ns.size(); ++j)
        CHECK(curve.psi[j] <= curve.psi[j - 1] + 1e-14);

    // the diagonal sup equals the full sup (dense oracle)
    MatrixXd A = operator_matrix(Q);
    for (int n : {1, 2, 4}) {
        MatrixXd A2n = matrix_power(A, 2 * n);
        double diag = 0, full = 0;
        for (int x = 0; x < 8; ++x) {
            diag = std::max(diag, A2n(x, x) / Q.measure_vec()[x]);
            for (int y = 0; y < 8; ++y)
                full = std::max(full, A2n(x, y) / Q.measure_vec()[y]);
        }
        CHECK(diag == doctest::Approx(full).epsilon(1e-12));
    }

    // boundary flag
    auto flagged = psi_curve(Q, ns, base, 4.0);
    CHECK(!flagged.flagged[2]);
    CHECK(flagged.flagged[5]);

    // pool independence
    auto c2 = psi_curve(Q, ns, base, -1.0, 4);
    CHECK(c2.psi == curve.psi);
    CHECK(c2.argmax_vertex == curve.argmax_vertex);
}

TEST_CASE("moments") {
    auto g2 = WeightedGraph::from_edges({{0, 1, 1.0}});
    CHECK(moment(MarkovKernel::identity(g2), 2.0).value == doctest::Approx(0.0));
    CHECK(moment(natural_walk(g2), 3.7).value == doctest::Approx(1.0));

    // jump kernel with beta < gamma on growing boxes: the gamma-moment grows
    // like L^{gamma-beta}
    std::vector<double> sizes, moments;
    for (int s : {17, 33, 65}) {
        auto lat = generate({Family::lattice_box, s, 2});
        auto V = VolumeProfile::build(*lat);
        auto K = jump_kernel(lat, JumpProfile{1.0, 0.0}, V);
        double margin = std::min(lat->safe_radius(), lat->max_boundary_distance() / 2.0);
        sizes.push_back(s);
        moments.push_back(moment(K, 2.0, margin).value);
    }
    double slope = fit_loglog(sizes, moments).slope;
    CHECK(std::fabs(slope - 1.0) < 0.2);

    // beta = gamma: the gamma-moment grows logarithmically in the diameter,
    // so equal dyadic steps add roughly equal increments
    std::vector<double> logm;
    for (int s : {17, 33, 65}) {
        auto lat = generate({Family::lattice_box, s, 2});
        auto V = VolumeProfile::build(*lat);
        auto K = jump_kernel(lat, JumpProfile{2.0, 0.0}, V);
        double margin = std::min(lat->safe_radius(), lat->max_boundary_distance() / 2.0);
        logm.push_back(moment(K, 2.0, margin).value);
    }
    double d1 = logm[1] - logm[0], d2 = logm[2] - logm[1];
    CHECK(d1 > 0.0);
    CHECK(d2 > 0.0);
    CHECK(d2 / d1 > 0.6);
    CHECK(d2 / d1 < 1.6);
}

TEST_CASE("resistance") {
    for (int n : {4, 10, 25}) {
        auto path = generate({Family::path, n + 1});
        auto res = resistance(ConductanceNetwork::from_graph(*path), {0}, {n});
        CHECK(res.resistance == doctest::Approx(n).epsilon(1e-8));
        CHECK(res.converged);
    }

    auto g2 = WeightedGraph::from_edges({{0, 1, 2.0}});
    auto r2 = resistance(ConductanceNetwork::from_graph(*g2), {0}, {1});
    CHECK(r2.resistance == doctest::Approx(0.5).epsilon(1e-12));

    // kernel without any off-diagonal conductance: infinite-resistance marker
    auto id = MarkovKernel::identity(g2);
    auto rid = resistance(ConductanceNetwork::from_kernel(id), {0}, {1});
    CHECK(rid.infinite);

    CHECK_THROWS_AS(resistance(ConductanceNetwork::from_graph(*g2), {0}, {0}), error);
}

TEST_CASE("ball averages") {
    auto cyc = generate({Family::cycle, 8});
    VectorXd f = random_vector(8, 5);
    CHECK((ball_average(*cyc, f, 0.0) - f).lpNorm<Eigen::Infinity>() == 0.0);

    VectorXd c = VectorXd::Constant(8, -2.5);
    CHECK((ball_average(*cyc, c, 3.0) - c).lpNorm<Eigen::Infinity>() < 1e-14);

    VectorXd ind = VectorXd::Zero(8);
    ind[0] = 1.0;
    VectorXd avg = ball_average(*cyc, ind, 1.0);
    for (int x = 0; x < 8; ++x) {
        double expect = (x == 0 || x == 1 || x == 7) ? 1.0 / 3.0 : 0.0;
        CHECK(avg[x] == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("contraction and self-adjointness") {
    auto g = generate({Family::sierpinski_gasket, 2});
    auto V = VolumeProfile::build(*g);
    auto P = natural_walk(g);
    auto Q = lazy_pair(P);
    auto J = jump_kernel(g, JumpProfile{1.5, 0.0}, V);
    const auto& mu = P.measure_vec();

    for (const MarkovKernel* K : {&P, &Q, &J}) {
        for (std::uint64_t seed : {11u, 22u, 33u}) {
            VectorXd f = random_vector(K->size(), seed);
            VectorXd g2 = random_vector(K->size(), seed + 100);
            VectorXd Kf = K->apply(f);
            CHECK(mu_norm1(mu, Kf) <= mu_norm1(mu, f) + 1e-12);
            CHECK(mu_norm2(mu, Kf) <= mu_norm2(mu, f) + 1e-12);
            CHECK(Kf.cwiseAbs().maxCoeff() <= f.cwiseAbs().maxCoeff() + 1e-12);
            CHECK(mu_dot(mu, Kf, g2) ==
                  doctest::Approx(mu_dot(mu, f, K->apply(g2))).epsilon(1e-12));
        }
    }
}

TEST_CASE("dirichlet comparison and ratio monotonicity lemmas") {
    auto g = generate({Family::sierpinski_gasket, 2});
    auto V = VolumeProfile::build(*g);
    auto Q = lazy_pair(natural_walk(g));
    auto J = jump_kernel(g, JumpProfile{2.5, 0.0}, V);
    const auto& mu = Q.measure_vec();

    for (const MarkovKernel* K : {&Q, &J}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            VectorXd f = random_vector(K->size(), 777 + seed);
            f /= mu_norm2(mu, f);
            double e1 = dirichlet(*K, f).energy;
            for (int n : {2, 3, 5, 8, 16}) {
                double en = dirichlet_power(*K, f, n);
                CHECK(en <= n * e1 + 1e-12);
            }
            // ||K^i f|| ratios are non-decreasing
            double prev_ratio = 0.0;
            VectorXd cur = f;
            double prev_norm = mu_norm2(mu, cur);
            for (int i = 1; i <= 12; ++i) {
                cur = K->apply(cur);
                double norm = mu_norm2(mu, cur);
                double ratio = norm / prev_norm;
                CHECK(ratio >= prev_ratio - 1e-12);
                prev_ratio = ratio;
                prev_norm = norm;
            }
        }
    }
}

TEST_CASE("lambda over balls") {
    auto g = generate({Family::sierpinski_gasket, 2});
    auto Q = lazy_pair(natural_walk(g));

    // whole graph: the constant function gives 1
    std::vector<int> all(Q.size());
    for (int i = 0; i < Q.size(); ++i) all[i] = i;
    CHECK(lambda_ball(Q, all, 1e-13) == doctest::Approx(1.0).epsilon(1e-9));

    // monotone under ball inclusion
    auto b1 = g->ball(4, 1), b2 = g->ball(4, 2), b3 = g->ball(4, 3);
    double l1 = lambda_ball(Q, b1, 1e-13);
    double l2 = lambda_ball(Q, b2, 1e-13);
    double l3 = lambda_ball(Q, b3, 1e-13);
    CHECK(l1 <= l2 + 1e-12);
    CHECK(l2 <= l3 + 1e-12);

    // dense restricted-operator oracle on the 2-vertex graph
    auto g2 = WeightedGraph::from_edges({{0, 1, 1.0}});
    auto Q2 = lazy_pair(natural_walk(g2));
    MatrixXd S = symmetrized(Q2);
    MatrixXd col = S.col(0);  // support {0}
    double oracle = (col.transpose() * col)(0, 0);
    CHECK(lambda_ball(Q2, {0}, 1e-14) == doctest::Approx(oracle).epsilon(1e-12));
}
