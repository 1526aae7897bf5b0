#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace walklab {

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic RNG. mt19937_64 is fully specified by the standard and the
/// value mappings below are hand-rolled, so streams are reproducible across
/// platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t raw();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n);

    /// Standard normal via the polar method (deterministic rejection loop).
    double normal();

    /// Exp(1).
    double exponential();

private:
    std::uint64_t next_u64();
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Compensated (Kahan) accumulator for long sums.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

double kahan_total(const std::vector<double>& xs);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    int points = 0;
};

/// Ordinary least squares y = a + b x.
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

/// Least-squares slope of log(y) against log(x); entries with x<=0 or y<=0
/// are rejected.
LineFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
double gamma_q(double a, double x);

/// Survival function of the chi-squared distribution (p-value of `stat`).
double chi2_sf(double stat, int dof);

/// Runs fn(i) for i in [0, n) on `pool` threads. Each index owns its output
/// slot, so results are identical for every pool size.
void parallel_for(int n, int pool, const std::function<void(int)>& fn);

/// Geometric integer grid in [lo, hi], deduplicated and increasing.
std::vector<int> geometric_grid(int lo, int hi, int points_per_octave);

/// Trapezoid quadrature with interval doubling and Richardson acceleration.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol);

/// Shortest-width deterministic formatting used for all emitted numbers.
std::string format_g17(double x);

}  // namespace walklab
