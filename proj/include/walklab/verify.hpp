#pragma once

#include <map>
#include <string>
#include <vector>

#include "walklab/kernel.hpp"
#include "walklab/stable.hpp"

namespace walklab {

/// Measured-constant report for one inequality. `constants` carries the
/// fitted values (deterministic key order); `violations` counts exact
/// breaches beyond the stated slack, never sampled away.
struct ConstantReport {
    std::string inequality_id;
    std::string test_family;
    std::map<std::string, double> constants;
    std::map<std::string, std::string> grid;
    double band_min = 0.0;
    double band_max = 0.0;
    bool has_band = false;
    double slope_value = 0.0;
    double slope_stderr = 0.0;
    bool has_slope = false;
    long long violations = 0;
    bool pass = true;
    std::string notes;
};

struct TestFunctionOptions {
    int random_count = 8;
    std::uint64_t seed = 7;
    int eigenvector_count = 3;   // only when the graph is small enough
    int eigenvector_limit = 400;
    int ball_centers = 3;
};

/// Canonical battery: normalized ball indicators (radii 1,2,4,...), the
/// harmonic minimizers of the resistance problems on those balls, seeded
/// random unit vectors, and (on small graphs) top nontrivial eigenvectors.
std::vector<Eigen::VectorXd> test_function_family(GraphPtr g,
                                                  const TestFunctionOptions& opts = {});

struct PseudoPoincareOptions {
    std::vector<double> R_grid;
    double max_spread = 5.0;  // per-R maxima may vary at most this much
};

/// ||f - f_R||_2^2 <= C eta(R) E_K(f,f): reports the needed C over the family.
ConstantReport verify_pseudo_poincare(const MarkovKernel& K, const EtaZeta& ez,
                                      const std::vector<Eigen::VectorXd>& family,
                                      const PseudoPoincareOptions& opts);

struct NashOptions {
    double uniformity_band = 10.0;  // max C1 within this factor of the median
};

/// ||f||_2^2 <= C1 E_{K^2}(f,f) eta_tilde(V^{-1}(C2 ||f||_1^2/||f||_2^2)),
/// with C2 = V(1)/mu_min so the V^{-1} argument stays >= 1.
ConstantReport verify_nash(const MarkovKernel& K, const VolumeProfile& V, const EtaZeta& ez,
                           const std::vector<Eigen::VectorXd>& family,
                           const NashOptions& opts = {});

struct ResistanceBandOptions {
    std::vector<int> r_grid;
    int annulus_factor = 2;  // A in R(B(x,r), B(x,Ar)^c)
    int x_samples = 6;
    double band_max = 10.0;
    double lres_slack = 1e-12;
};

/// R_P(B(x,r), B(x,Ar)^c) V(r)/r^gamma band, plus the comparison of R_Q
/// with R_P (must stay within [1/2, 2]).
ConstantReport verify_resistance_band(GraphPtr g, double gamma, const VolumeProfile& V,
                                      const ResistanceBandOptions& opts);

enum class SubgaussianKind { P_pair, Q_single };

struct SubgaussianOptions {
    int x_samples = 6;
    int n_max = 0;  // 0: auto from the boundary-safe window
    int points_per_octave = 4;
};

/// Fits the smallest upper constant and the largest lower constant making
/// the sub-Gaussian bounds hold on the sample; the lower bound pairs
/// consecutive steps for P and uses single steps for Q. Bipartite inputs
/// are flagged and the unpaired-P constant is reported alongside.
ConstantReport verify_subgaussian(GraphPtr g, SubgaussianKind kind, double gamma,
                                  const VolumeProfile& V, const SubgaussianOptions& opts = {});

struct LowerBoundOptions {
    std::vector<int> r_grid;
    std::vector<int> n_grid;
    int x_samples = 4;
    double slack = 1e-12;
    double sharpness_max = 1e3;  // psi / best ball bound at r = zeta(n)
    int pool = 1;
};

/// psi_K(n) >= lambda(B(x,r))^n / mu(B(x,r)) on the grid (zero violations),
/// with the sharpness of the r = zeta(n) choice reported.
ConstantReport verify_lower_bound_mechanics(const MarkovKernel& K, const EtaZeta& ez,
                                            const LowerBoundOptions& opts);

struct ThresholdOptions {
    enum class Clock { zeta, plain_gamma };
    Clock clock = Clock::zeta;
    int n_min = 0;  // 0: first unclamped n (zeta) resp. 1 (plain)
    int n_max = 0;  // 0: largest n inside the boundary-safe window
    int base_count = 24;
    int points_per_octave = 8;
    double band_max = 10.0;     // <= 0 skips the band gate
    double slope_target = 0.0;  // used when slope_tol > 0
    double slope_tol = 0.0;
    double trim = 0.1;  // log-window fraction trimmed from the slope fit
    int pool = 1;
};

/// psi_K(n) V(clock(n)) over the window: band extremes and log-log slope.
ConstantReport verify_threshold(const MarkovKernel& K, const VolumeProfile& V,
                                const EtaZeta& ez, const ThresholdOptions& opts);

enum class MomentRegime { finite, divergent };

struct MomentThresholdOptions {
    MomentRegime expect = MomentRegime::finite;
    double spread_max = 2.0;     // finite regime: max/min of M over the family
    double growth_slope = 0.3;   // divergent regime: log M vs log diameter
    double band_max = 10.0;      // finite regime: psi V(n^{1/gamma}) band
    int base_count = 24;
    int points_per_octave = 2;   // divergent regime monotonicity grid
    int n_min = 4;
    int pool = 1;
};

/// Across a growing family: the gamma-moment stays bounded exactly when the
/// walk keeps the natural decay clock. The largest graph carries the psi
/// band (finite regime) resp. the monotone decay of psi V(n^{1/gamma})
/// (divergent regime).
ConstantReport verify_moment_threshold(const std::vector<GraphPtr>& family,
                                       const JumpProfile& phi, double gamma,
                                       const MomentThresholdOptions& opts);

struct LemmaSuiteOptions {
    int function_count = 200;
    std::uint64_t seed = 11;
    std::vector<int> n_set = {2, 3, 4, 6, 8, 12, 16};
    int ratio_steps = 12;
    double slack = 1e-12;
};

/// Dirichlet-form comparison E_{K^n} <= n E_K and the monotonicity of the
/// norm ratios i -> ||K^i f||/||K^{i-1} f||, over a random battery.
ConstantReport verify_dirichlet_lemmas(const std::vector<const MarkovKernel*>& kernels,
                                       const LemmaSuiteOptions& opts = {});

}  // namespace walklab
