#pragma once

#include <cstdint>
#include <vector>

#include "walklab/kernel.hpp"

namespace walklab {

/// Probability weights A(t, i) = P(N(S_{beta0}(t)) = i) of the discrete
/// stable law with generating function exp(-t (1-z)^{beta0}).
struct DiscreteStableWeights {
    double t = 0.0;
    double beta0 = 0.5;
    std::vector<double> pmf;  // indices 0..i_max
    double tail_mass = 0.0;   // 1 - sum(pmf), compensated accounting

    int i_max() const { return static_cast<int>(pmf.size()) - 1; }
    bool complete(double eps) const { return tail_mass < eps; }
};

/// Nonnegative generating-function recurrence:
///   p_0 = e^{-t},  (i+1) p_{i+1} = t beta0 sum_j a_j p_{i-j},
///   a_0 = 1,       a_{j+1} = a_j (j+1-beta0)/(j+1).
/// beta0 = 1 degenerates to the Poisson law exactly.
DiscreteStableWeights discrete_stable_pmf(double t, double beta0, int i_max);

/// First index where the leading tail power law dominates the pmf well
/// enough for an unbiased log-log slope fit over [L, 16L].
int stable_tail_fit_start(double t, double beta0);

/// Monte-Carlo oracle: histogram of `draws` samples of N(S_{beta0}(t)) using
/// Chambers-Mallows-Stuck style subordinator sampling; the returned vector
/// has `cap`+2 entries, the last one collecting everything above `cap`.
std::vector<long long> discrete_stable_histogram(double t, double beta0, long long draws,
                                                 std::uint64_t seed, int cap);

struct Chi2Result {
    double stat = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int bins = 0;
};

/// Chi-squared goodness of fit of a histogram (overflow bin last) against
/// the pmf; bins with expected count below `min_expected` merge into the tail.
Chi2Result chi2_pmf_test(const DiscreteStableWeights& w, const std::vector<long long>& hist,
                         long long draws, double min_expected = 5.0);

struct StableKernelOptions {
    double eps = 1e-10;
    int i_budget = 4000;
    int pool = 1;
};

struct StableKernelReport {
    int i_max = 0;
    double tail_mass = 0.0;
    bool complete = true;
};

/// k_{t,beta0} = sum_{i <= i_max} A(t,i) q_i with the tail mass folded into
/// the final retained index (the mixture stays exactly stochastic). i_max is
/// the smallest index with tail below eps, capped by the budget (incomplete
/// flag in the report).
MarkovKernel stable_kernel(const MarkovKernel& Q, double t, double beta0,
                           const StableKernelOptions& opts = {},
                           StableKernelReport* report = nullptr);

struct PoissonVolumeCheck {
    double max_ratio = 0.0;
    std::vector<double> per_u;
};

/// V(x, u^{1/gamma}) * sum_i pois(u, i) / V(x, i^{1/gamma}) over the grid;
/// boundedness of the maximum is the content of the estimate.
PoissonVolumeCheck poisson_volume_bound_check(const WeightedGraph& g, int x, double gamma,
                                              const std::vector<double>& u_grid);

struct EvidenceSample {
    int x = 0;
    int y = 0;
    int d = 0;
    int n = 0;
    double kernel_value = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
};

struct EvidenceBandReport {
    double beta = 0.0;  // beta0 * gamma
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    std::vector<EvidenceSample> samples;
    int i_max = 0;
    double max_tail = 0.0;
    bool complete = true;
};

struct EvidenceOptions {
    int base_count = 6;
    int i_budget = 100000;
    double eps = 1e-6;
    int pool = 1;
};

/// Ratio of k_{n,beta0}(x,y) to
/// min(1/V(x, n^{1/beta}), n/(V(x,d) (1+d)^beta)) with beta = beta0*gamma,
/// over interior pairs and the given n list (pointwise ball volumes).
EvidenceBandReport evidence_band_check(const MarkovKernel& Q, const std::vector<int>& t_list,
                                       double beta0, double gamma,
                                       const EvidenceOptions& opts = {});

}  // namespace walklab
