#include "walklab/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace walklab {

double JumpProfile::operator()(double t) const {
    if (t < 0) throw error("jump profile: negative argument");
    double v = std::pow(1.0 + t, beta);
    if (log_exponent != 0.0) v *= std::pow(std::log(std::exp(1.0) + t), log_exponent);
    return std::max(1.0, v);
}

EtaZeta::EtaZeta(JumpProfile phi, double gamma, double s_max, int knots_per_octave,
                 double quad_tol)
    : phi_(phi), gamma_(gamma), s_max_(s_max), quad_tol_(quad_tol) {
    if (gamma_ <= 1.0) throw error("eta: gamma must exceed 1");
    if (s_max_ <= 1.0) throw error("eta: s_max must exceed 1");

    knots_.push_back(0.0);
    const double first = 1.0 / 64.0;
    const double ratio = std::pow(2.0, 1.0 / std::max(1, knots_per_octave));
    for (double t = first; t < s_max_; t *= ratio) knots_.push_back(t);
    knots_.push_back(s_max_);

    auto integrand = [this](double s) { return std::pow(s, gamma_ - 1.0) / phi_(s); };

    cum_integral_.assign(knots_.size(), 0.0);
    KahanSum acc;
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        acc.add(integrate_adaptive(integrand, knots_[k - 1], knots_[k], quad_tol_));
        cum_integral_[k] = acc.value();
    }

    eta_at_knot_.assign(knots_.size(), 0.0);
    eta_at_knot_[0] = gamma_ * phi_(0.0);
    for (std::size_t k = 1; k < knots_.size(); ++k)
        eta_at_knot_[k] = std::pow(knots_[k], gamma_) / cum_integral_[k];

    running_max_.assign(knots_.size(), 0.0);
    double m = eta_at_knot_[0];
    for (std::size_t k = 0; k < knots_.size(); ++k) {
        if (eta_at_knot_[k] < m) eta_monotone_ = false;
        m = std::max(m, eta_at_knot_[k]);
        running_max_[k] = m;
    }
}

double EtaZeta::integral_to(double t) const {
    auto integrand = [this](double s) { return std::pow(s, gamma_ - 1.0) / phi_(s); };
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
    double base = cum_integral_[k];
    if (t > knots_[k]) base += integrate_adaptive(integrand, knots_[k], t, quad_tol_);
    return base;
}

double EtaZeta::eta(double t) const {
    if (t < 0) throw error("eta: negative argument");
    if (t == 0.0) return gamma_ * phi_(0.0);
    if (t > s_max_ * (1.0 + 1e-12)) throw error("eta: argument beyond table range");
    t = std::min(t, s_max_);
    return std::pow(t, gamma_) / integral_to(t);
}

double EtaZeta::eta_tilde(double t) const {
    double e = eta(t);
    if (eta_monotone_) return e;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
    return std::max(running_max_[k], e);
}

double EtaZeta::zeta(double t, bool* clamped) const {
    if (clamped) *clamped = false;
    if (t > eta_max() * (1.0 + 1e-12))
        throw error("zeta: argument " + format_g17(t) + " beyond invertible range " +
                    format_g17(eta_max()) + " (rebuild with larger s_max)");
    if (t <= running_max_.front()) {
        if (clamped) *clamped = true;
        return 1.0;
    }
    // first knot interval whose running max reaches t, then log-log
    // inverse interpolation inside it (the knot grid carries the quadrature)
    auto it = std::lower_bound(running_max_.begin(), running_max_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - running_max_.begin());
    double lo_t = knots_[k - 1], hi_t = knots_[k];
    double lo_v = running_max_[k - 1], hi_v = running_max_[k];
    double s;
    if (lo_t <= 0.0 || hi_v <= lo_v) {
        s = hi_v <= lo_v ? lo_t : hi_t;  // plateau: first attainment
    } else {
        double frac = (std::log(t) - std::log(lo_v)) / (std::log(hi_v) - std::log(lo_v));
        s = std::exp(std::log(lo_t) + frac * (std::log(hi_t) - std::log(lo_t)));
    }
    if (s < 1.0) {
        if (clamped) *clamped = true;
        return 1.0;
    }
    return s;
}

LineFit rv_index_fit(const std::vector<double>& ts, const std::vector<double>& fs) {
    if (ts.size() != fs.size() || ts.size() < 4) throw error("rv_index_fit: table too short");
    double t_min = *std::min_element(ts.begin(), ts.end());
    double t_max = *std::max_element(ts.begin(), ts.end());
    if (t_min <= 0 || t_max / t_min < 1e3)
        throw error("rv_index_fit: table must span at least three decades");
    std::vector<double> xs, ys;
    double cutoff = t_max / 100.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] >= cutoff && fs[i] > 0) {
            xs.push_back(ts[i]);
            ys.push_back(fs[i]);
        }
    }
    return fit_loglog(xs, ys);
}

EtaPhiRatio eta_le_phi_check(const EtaZeta& ez, const std::vector<double>& grid) {
    if (grid.empty()) throw error("eta_le_phi_check: empty grid");
    EtaPhiRatio out;
    for (double t : grid) {
        if (t < 0) throw error("eta_le_phi_check: negative grid point");
        double r = ez.eta(t) / ez.profile()(t);
        if (r > out.max_ratio) {
            out.max_ratio = r;
            out.argmax_t = t;
        }
    }
    return out;
}

}  // namespace walklab
