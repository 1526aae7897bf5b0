#include "walklab/util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace walklab {

// splitmix64; passes through a fixed scramble so that nearby seeds give
// unrelated streams.
std::uint64_t Rng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::raw() { return next_u64(); }

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    if (n == 0) throw error("uniform_int: n must be positive");
    // rejection to avoid modulo bias
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
}

double Rng::exponential() {
    double u;
    do {
        u = uniform();
    } while (u == 0.0);
    return -std::log(u);
}

double kahan_total(const std::vector<double>& xs) {
    KahanSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw error("fit_line: need at least two points");
    const int n = static_cast<int>(xs.size());
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw error("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.points = n;
    if (n > 2) {
        double rss = 0;
        for (int i = 0; i < n; ++i) {
            double r = ys[i] - (f.intercept + f.slope * xs[i]);
            rss += r * r;
        }
        f.stderr_slope = std::sqrt(rss / (n - 2) / sxx);
    }
    return f;
}

LineFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> lx, ly;
    lx.reserve(xs.size());
    ly.reserve(ys.size());
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (xs[i] > 0 && ys[i] > 0) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(ys[i]));
        }
    }
    return fit_line(lx, ly);
}

namespace {

double gamma_p_series(double a, double x) {
    // series for P(a,x), valid for x < a+1
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    // Lentz continued fraction for Q(a,x), valid for x >= a+1
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (a <= 0) throw error("gamma_q: a must be positive");
    if (x < 0) throw error("gamma_q: x must be nonnegative");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

double chi2_sf(double stat, int dof) {
    if (dof <= 0) throw error("chi2_sf: dof must be positive");
    if (stat <= 0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * stat);
}

void parallel_for(int n, int pool, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    pool = std::max(1, std::min(pool, n));
    if (pool == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failed.load() && err) std::rethrow_exception(err);
}

std::vector<int> geometric_grid(int lo, int hi, int points_per_octave) {
    if (lo < 1 || hi < lo) throw error("geometric_grid: bad range");
    std::vector<int> out;
    double ratio = std::pow(2.0, 1.0 / std::max(1, points_per_octave));
    double v = lo;
    int last = -1;
    while (true) {
        int n = static_cast<int>(std::lround(v));
        if (n > hi) break;
        if (n != last) {
            out.push_back(n);
            last = n;
        }
        v = std::max(v * ratio, v + 1.0);
    }
    if (out.empty() || out.back() != hi) out.push_back(hi);
    return out;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol) {
    if (b <= a) return 0.0;
    constexpr int kMaxLevel = 18;
    double table[kMaxLevel][kMaxLevel];
    double h = b - a;
    table[0][0] = 0.5 * h * (f(a) + f(b));
    for (int k = 1; k < kMaxLevel; ++k) {
        h *= 0.5;
        long long points = 1LL << (k - 1);
        KahanSum acc;
        for (long long i = 0; i < points; ++i) acc.add(f(a + (2 * i + 1) * h));
        table[k][0] = 0.5 * table[k - 1][0] + h * acc.value();
        double factor = 4.0;
        for (int j = 1; j <= k; ++j) {
            table[k][j] =
                table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (factor - 1.0);
            factor *= 4.0;
        }
        if (k >= 4) {
            double cur = table[k][k], prev = table[k - 1][k - 1];
            if (std::fabs(cur - prev) <= tol * (std::fabs(cur) + 1e-300)) return cur;
        }
    }
    return table[kMaxLevel - 1][kMaxLevel - 1];
}

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

}  // namespace walklab
