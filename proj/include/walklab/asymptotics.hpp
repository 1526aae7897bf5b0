#pragma once

#include <vector>

#include "walklab/util.hpp"

namespace walklab {

/// Regularly varying jump profile phi(t) = (1+t)^beta * log(e+t)^lambda,
/// floored at 1 so the range stays [1, inf).
struct JumpProfile {
    double beta = 1.0;
    double log_exponent = 0.0;

    double operator()(double t) const;

    static JumpProfile pure_power(double beta) { return JumpProfile{beta, 0.0}; }
};

/// The clock functions: eta(R) = R^gamma / integral_0^R s^{gamma-1}/phi(s) ds,
/// eta_tilde its running supremum, zeta the numeric inverse of eta_tilde.
/// Tables are built once over [0, s_max] and immutable afterwards.
class EtaZeta {
public:
    EtaZeta(JumpProfile phi, double gamma, double s_max, int knots_per_octave = 32,
            double quad_tol = 1e-10);

    double gamma() const { return gamma_; }
    const JumpProfile& profile() const { return phi_; }
    double s_max() const { return s_max_; }
    /// Largest invertible value, eta_tilde(s_max).
    double eta_max() const { return running_max_.back(); }

    /// Quadrature-backed eta; eta(0) = gamma * phi(0).
    double eta(double t) const;
    double eta_tilde(double t) const;

    /// Unique s with eta_tilde(s) = t, clamped below at 1. `clamped` reports
    /// when the clamp (or an argument below eta_tilde(0)) was hit.
    double zeta(double t, bool* clamped = nullptr) const;

    const std::vector<double>& knots() const { return knots_; }

private:
    double integral_to(double t) const;

    JumpProfile phi_;
    double gamma_;
    double s_max_;
    double quad_tol_;
    std::vector<double> knots_;        // 0 = knots_[0] < knots_[1] < ...
    std::vector<double> cum_integral_; // integral of s^{gamma-1}/phi up to knot
    std::vector<double> eta_at_knot_;
    std::vector<double> running_max_;
    bool eta_monotone_ = true;
};

/// Least-squares index of a positive table over its top two decades;
/// requires the abscissae to span at least three decades.
LineFit rv_index_fit(const std::vector<double>& ts, const std::vector<double>& fs);

struct EtaPhiRatio {
    double max_ratio = 0.0;
    double argmax_t = 0.0;
};

/// max over the grid of eta(t)/phi(t).
EtaPhiRatio eta_le_phi_check(const EtaZeta& ez, const std::vector<double>& grid);

}  // namespace walklab
