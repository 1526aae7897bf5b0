#include "walklab/stable.hpp"

#include <algorithm>
#include <cmath>

namespace walklab {

DiscreteStableWeights discrete_stable_pmf(double t, double beta0, int i_max) {
    if (!(t > 0)) throw error("discrete stable: t must be positive");
    if (!(beta0 > 0.0) || beta0 > 1.0) throw error("discrete stable: beta0 must lie in (0,1]");
    if (i_max < 1) throw error("discrete stable: i_max must be >= 1");

    DiscreteStableWeights w;
    w.t = t;
    w.beta0 = beta0;
    w.pmf.resize(i_max + 1);

    // coefficients stored reversed so the convolution runs with two forward
    // strides (vectorizable); every term is nonnegative
    std::vector<double> arev(i_max + 1);
    arev[i_max] = 1.0;
    for (int j = 0; j + 1 <= i_max; ++j)
        arev[i_max - j - 1] = arev[i_max - j] * (j + 1.0 - beta0) / (j + 1.0);

    w.pmf[0] = std::exp(-t);
    for (int i = 0; i + 1 <= i_max; ++i) {
        const double* pa = arev.data() + (i_max - i);
        const double* pp = w.pmf.data();
        // four independent partial sums; fixed order, so still deterministic
        double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
        int k = 0;
        for (; k + 4 <= i + 1; k += 4) {
            c0 += pa[k] * pp[k];
            c1 += pa[k + 1] * pp[k + 1];
            c2 += pa[k + 2] * pp[k + 2];
            c3 += pa[k + 3] * pp[k + 3];
        }
        double conv = (c0 + c1) + (c2 + c3);
        for (; k <= i; ++k) conv += pa[k] * pp[k];
        w.pmf[i + 1] = t * beta0 * conv / (i + 1.0);
    }

    KahanSum total;
    for (double p : w.pmf) total.add(p);
    w.tail_mass = std::max(0.0, 1.0 - total.value());
    return w;
}


namespace {

// weight of the second-order tail term relative to the leading one; the
// leading-order fit window must start where this is small
double tail_bias_coefficient(double beta0) {
    double s2 = std::fabs(std::sin(2.0 * M_PI * beta0));
    if (s2 < 1e-15) return 0.0;
    return std::tgamma(2.0 * beta0 + 1.0) * s2 /
           (2.0 * std::tgamma(beta0 + 1.0) * std::sin(M_PI * beta0));
}

}  // namespace

int stable_tail_fit_start(double t, double beta0) {
    double L = 32.0;
    L = std::max(L, std::ceil(4.0 * std::pow(t, 1.0 / beta0)));
    double c2 = tail_bias_coefficient(beta0);
    if (c2 > 0)
        L = std::max(L, std::ceil(std::pow(c2 * t / 0.16, 1.0 / beta0)));
    return static_cast<int>(L);
}

namespace {

// One-sided stable S with Laplace transform exp(-lambda^alpha)
// (Kanter's representation).
double subordinator_sample(Rng& rng, double alpha) {
    double u;
    do {
        u = rng.uniform();
    } while (u == 0.0 || u == 1.0);
    double U = M_PI * u;
    double W = rng.exponential();
    double A = std::sin((1.0 - alpha) * U) * std::pow(std::sin(alpha * U), alpha / (1.0 - alpha)) /
               std::pow(std::sin(U), 1.0 / (1.0 - alpha));
    return std::pow(A / W, (1.0 - alpha) / alpha);
}

long long poisson_sample(Rng& rng, double lambda) {
    if (lambda <= 0) return 0;
    if (lambda < 10.0) {
        double limit = std::exp(-lambda);
        long long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= rng.uniform();
        } while (p > limit);
        return k - 1;
    }
    // transformed rejection (Hoermann's PTRS)
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_lambda = std::log(lambda);
    while (true) {
        double u = rng.uniform() - 0.5;
        double v = rng.uniform();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
        if (kf < 0 || (us < 0.013 && v > us)) continue;
        double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            -lambda + k * log_lambda - std::lgamma(k + 1.0))
            return static_cast<long long>(kf);
    }
}

}  // namespace

std::vector<long long> discrete_stable_histogram(double t, double beta0, long long draws,
                                                 std::uint64_t seed, int cap) {
    if (!(beta0 > 0.0) || beta0 >= 1.0)
        throw error("discrete stable sampling: beta0 must lie in (0,1)");
    std::vector<long long> hist(cap + 2, 0);
    Rng rng(seed);
    const double scale = std::pow(t, 1.0 / beta0);
    for (long long k = 0; k < draws; ++k) {
        double s = scale * subordinator_sample(rng, beta0);
        long long n = poisson_sample(rng, s);
        if (n > cap)
            ++hist[cap + 1];
        else
            ++hist[static_cast<int>(n)];
    }
    return hist;
}

Chi2Result chi2_pmf_test(const DiscreteStableWeights& w, const std::vector<long long>& hist,
                         long long draws, double min_expected) {
    const int cap = static_cast<int>(hist.size()) - 2;
    if (cap < 1) throw error("chi2: histogram too short");

    // consecutive indices merge until each bin carries at least the minimum
    // expected count (the pmf can dip between the lazy cluster at 0 and the
    // subordinator body); everything past the histogram cap, including the
    // pmf tail, lands in the final bin
    std::vector<std::pair<double, long long>> bins;  // (expected, observed)
    double acc_e = 0.0;
    long long acc_o = 0;
    const int top = std::min(cap, w.i_max());
    for (int i = 0; i <= top; ++i) {
        acc_e += draws * w.pmf[i];
        acc_o += hist[i];
        if (acc_e >= min_expected) {
            bins.push_back({acc_e, acc_o});
            acc_e = 0.0;
            acc_o = 0;
        }
    }
    KahanSum tail_p;
    for (int i = top + 1; i <= w.i_max(); ++i) tail_p.add(w.pmf[i]);
    tail_p.add(w.tail_mass);
    acc_e += draws * tail_p.value();
    for (int i = top + 1; i <= cap + 1; ++i) acc_o += hist[i];
    if (acc_e > 0 || acc_o > 0) bins.push_back({acc_e, acc_o});
    while (bins.size() >= 2 && bins.back().first < min_expected) {
        bins[bins.size() - 2].first += bins.back().first;
        bins[bins.size() - 2].second += bins.back().second;
        bins.pop_back();
    }
    if (bins.size() < 2) throw error("chi2: not enough expected mass for a test");

    Chi2Result res;
    KahanSum stat;
    for (const auto& [e, o] : bins) {
        double d = o - e;
        stat.add(d * d / e);
    }
    res.bins = static_cast<int>(bins.size());
    res.stat = stat.value();
    res.dof = res.bins - 1;
    res.p_value = chi2_sf(res.stat, res.dof);
    return res;
}

MarkovKernel stable_kernel(const MarkovKernel& Q, double t, double beta0,
                           const StableKernelOptions& opts, StableKernelReport* report) {
    if (!(beta0 > 0.0) || beta0 >= 1.0) throw error("stable kernel: beta0 must lie in (0,1)");
    if (!(t > 0)) throw error("stable kernel: t must be positive");

    DiscreteStableWeights w = discrete_stable_pmf(t, beta0, opts.i_budget);
    // smallest truncation with tail below eps, or the whole budget
    KahanSum partial;
    int i_max = w.i_max();
    bool complete = false;
    for (int i = 0; i <= w.i_max(); ++i) {
        partial.add(w.pmf[i]);
        if (1.0 - partial.value() < opts.eps) {
            i_max = i;
            complete = true;
            break;
        }
    }
    std::vector<double> weight(w.pmf.begin(), w.pmf.begin() + i_max + 1);
    KahanSum acc_w;
    for (double v : weight) acc_w.add(v);
    double tail = std::max(0.0, 1.0 - acc_w.value());
    weight[i_max] += tail;  // fold: the mixture stays exactly stochastic

    const GraphPtr& g = Q.graph();
    const int n = Q.size();
    Eigen::MatrixXd kd(n, n);
    parallel_for(n, opts.pool, [&](int y) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        v[y] = 1.0 / g->vertex_measure(y);
        Eigen::VectorXd acc = weight[0] * v;
        for (int i = 1; i <= i_max; ++i) {
            v = Q.apply(v);
            acc += weight[i] * v;
        }
        kd.col(y) = acc;
    });

    if (report) {
        report->i_max = i_max;
        report->tail_mass = tail;
        report->complete = complete;
    }
    std::string label =
        "stable(t=" + format_g17(t) + ",beta0=" + format_g17(beta0) + ")";
    return MarkovKernel::from_dense(g, std::move(kd), std::move(label));
}

PoissonVolumeCheck poisson_volume_bound_check(const WeightedGraph& g, int x, double gamma,
                                              const std::vector<double>& u_grid) {
    g.check_vertex(x);
    PoissonVolumeCheck out;
    for (double u : u_grid) {
        if (u < 0) throw error("poisson volume check: negative u");
        double ratio;
        if (u == 0.0) {
            ratio = 1.0;
        } else {
            int i_top = static_cast<int>(std::ceil(u + 12.0 * std::sqrt(u))) + 40;
            KahanSum acc;
            double log_u = std::log(u);
            for (int i = 0; i <= i_top; ++i) {
                double logp = -u + i * log_u - std::lgamma(i + 1.0);
                double p = std::exp(logp);
                acc.add(p / g.ball_volume(x, std::pow(static_cast<double>(i), 1.0 / gamma)));
            }
            ratio = acc.value() * g.ball_volume(x, std::pow(u, 1.0 / gamma));
        }
        out.per_u.push_back(ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
    }
    return out;
}

EvidenceBandReport evidence_band_check(const MarkovKernel& Q, const std::vector<int>& t_list,
                                       double beta0, double gamma, const EvidenceOptions& opts) {
    if (!(beta0 > 0.0) || beta0 >= 1.0) throw error("evidence band: beta0 must lie in (0,1)");
    if (t_list.empty()) throw error("evidence band: empty n list");
    const GraphPtr& g = Q.graph();
    const double beta = beta0 * gamma;

    double margin = std::min(g->safe_radius(), g->max_boundary_distance() / 2.0);
    int n_max = *std::max_element(t_list.begin(), t_list.end());
    int n_min = *std::min_element(t_list.begin(), t_list.end());
    if (n_min < 1) throw error("evidence band: n must be >= 1");
    if (std::pow(static_cast<double>(n_max), 1.0 / beta) > margin)
        throw error("evidence band: n = " + std::to_string(n_max) +
                    " exceeds the boundary-safe window (n^{1/beta} <= " + format_g17(margin) +
                    ")");

    auto base = g->interior_sample(margin, opts.base_count);
    if (base.empty()) throw error("evidence band: empty interior sample");

    // shared truncation for every t in the list
    std::vector<DiscreteStableWeights> pmfs;
    pmfs.reserve(t_list.size());
    for (int t : t_list) pmfs.push_back(discrete_stable_pmf(t, beta0, opts.i_budget));
    int i_max = 1;
    bool complete = true;
    double max_tail = 0.0;
    for (auto& w : pmfs) {
        KahanSum partial;
        int need = w.i_max();
        bool ok = false;
        for (int i = 0; i <= w.i_max(); ++i) {
            partial.add(w.pmf[i]);
            if (1.0 - partial.value() < opts.eps) {
                need = i;
                ok = true;
                break;
            }
        }
        complete = complete && ok;
        i_max = std::max(i_max, need);
    }
    std::vector<std::vector<double>> weights(t_list.size());
    for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
        weights[ti].assign(pmfs[ti].pmf.begin(), pmfs[ti].pmf.begin() + i_max + 1);
        KahanSum acc;
        for (double v : weights[ti]) acc.add(v);
        double tail = std::max(0.0, 1.0 - acc.value());
        weights[ti][i_max] += tail;
        max_tail = std::max(max_tail, tail);
    }

    // interior targets per base point: first vertex at each dyadic distance
    std::vector<std::vector<int>> targets(base.size());
    for (std::size_t bi = 0; bi < base.size(); ++bi) {
        const auto& dist = g->distances_from(base[bi]);
        std::vector<int> wanted;
        for (int d = 1; d <= static_cast<int>(margin); d *= 2) wanted.push_back(d);
        targets[bi].push_back(base[bi]);  // d = 0
        for (int d : wanted) {
            for (int y = 0; y < g->vertex_count(); ++y) {
                if (dist[y] == d && static_cast<double>(g->boundary_distance(y)) > margin) {
                    targets[bi].push_back(y);
                    break;
                }
            }
        }
    }

    // accumulate the mixtures for all t simultaneously, one sweep per base x
    std::vector<std::vector<Eigen::VectorXd>> acc(base.size());
    parallel_for(static_cast<int>(base.size()), opts.pool, [&](int bi) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(g->vertex_count());
        v[base[bi]] = 1.0 / g->vertex_measure(base[bi]);
        std::vector<Eigen::VectorXd> a(t_list.size(),
                                       Eigen::VectorXd::Zero(g->vertex_count()));
        for (int i = 0; i <= i_max; ++i) {
            if (i > 0) v = Q.apply(v);
            for (std::size_t ti = 0; ti < t_list.size(); ++ti) a[ti] += weights[ti][i] * v;
        }
        acc[bi] = std::move(a);
    });

    EvidenceBandReport rep;
    rep.beta = beta;
    rep.i_max = i_max;
    rep.max_tail = max_tail;
    rep.complete = complete;
    rep.ratio_min = std::numeric_limits<double>::infinity();
    rep.ratio_max = 0.0;
    for (std::size_t bi = 0; bi < base.size(); ++bi) {
        int x = base[bi];
        const auto& dist = g->distances_from(x);
        for (int y : targets[bi]) {
            int d = dist[y];
            for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
                int n = t_list[ti];
                double near = 1.0 / g->ball_volume(x, std::pow(n, 1.0 / beta));
                double far = n / (g->ball_volume(x, d) * std::pow(1.0 + d, beta));
                EvidenceSample s;
                s.x = x;
                s.y = y;
                s.d = d;
                s.n = n;
                s.kernel_value = acc[bi][ti][y];
                s.envelope = std::min(near, far);
                s.ratio = s.kernel_value / s.envelope;
                rep.samples.push_back(s);
                rep.ratio_min = std::min(rep.ratio_min, s.ratio);
                rep.ratio_max = std::max(rep.ratio_max, s.ratio);
            }
        }
    }
    return rep;
}

}  // namespace walklab
