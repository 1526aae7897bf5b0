#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "walklab/asymptotics.hpp"

using namespace walklab;

TEST_CASE("jump profile evaluation and floor") {
    JumpProfile phi{1.5, 0.0};
    CHECK(phi(0.0) == doctest::Approx(1.0));
    CHECK(phi(3.0) == doctest::Approx(std::pow(4.0, 1.5)));

    JumpProfile withlog{2.0, 1.0};
    CHECK(withlog(0.0) == doctest::Approx(1.0));
    CHECK(withlog(5.0) ==
          doctest::Approx(std::pow(6.0, 2.0) * std::log(std::exp(1.0) + 5.0)));

    // lambda < 0 floors at 1
    JumpProfile floored{0.05, -4.0};
    for (double t : {0.0, 0.5, 1.0, 4.0, 20.0}) CHECK(floored(t) >= 1.0);
}

TEST_CASE("eta at zero and against the closed form") {
    // gamma=2, beta=1, lambda=0: integral_0^t s/(1+s) ds = t - log(1+t)
    EtaZeta ez(JumpProfile{1.0, 0.0}, 2.0, 1.0e7);
    CHECK(ez.eta(0.0) == doctest::Approx(2.0));
    for (double t : {1.0, 10.0, 100.0, 1000.0}) {
        double expected = t * t / (t - std::log(1.0 + t));
        CHECK(ez.eta(t) == doctest::Approx(expected).epsilon(1e-9));
    }
    // spot value from the closed form
    CHECK(ez.eta(100.0) == doctest::Approx(10000.0 / (100.0 - std::log(101.0))).epsilon(1e-9));
}

TEST_CASE("eta for beta > gamma approaches t^gamma / I_infinity") {
    // beta=4, gamma=2: integral_0^inf s/(1+s)^4 ds = 1/6 exactly
    EtaZeta ez(JumpProfile{4.0, 0.0}, 2.0, 1.0e7);
    double t = 1.0e6;
    CHECK(ez.eta(t) / (t * t) == doctest::Approx(6.0).epsilon(1e-3));
}

TEST_CASE("quadrature is stable under knot doubling") {
    EtaZeta coarse(JumpProfile{1.5, 0.5}, 2.3, 1.0e6, 32);
    EtaZeta fine(JumpProfile{1.5, 0.5}, 2.3, 1.0e6, 64);
    for (double t : {0.3, 1.0, 7.0, 123.0, 4567.0, 1.0e5}) {
        CHECK(std::fabs(coarse.eta(t) - fine.eta(t)) <= 1e-8 * fine.eta(t));
    }
}

TEST_CASE("eta_tilde is a non-decreasing majorant asymptotically equal to eta") {
    for (JumpProfile phi : {JumpProfile{1.0, 0.0}, JumpProfile{2.0, 0.0},
                            JumpProfile{0.4, -2.0}}) {
        EtaZeta ez(phi, 2.0, 1.0e6);
        double prev = 0.0;
        for (double t : ez.knots()) {
            double et = ez.eta_tilde(t);
            CHECK(et >= prev);
            CHECK(et >= ez.eta(t) - 1e-12 * et);
            prev = et;
        }
        CHECK(ez.eta_tilde(1.0e6) / ez.eta(1.0e6) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("zeta inverts eta_tilde") {
    EtaZeta ez(JumpProfile{1.3, 0.0}, 2.2, 1.0e6);
    // round trip on a log grid of arguments
    for (double t = 2.0 * ez.eta_tilde(1.0); t < 0.9 * ez.eta_max(); t *= 3.7) {
        bool clamped = false;
        double s = ez.zeta(t, &clamped);
        CHECK(!clamped);
        double back = ez.eta_tilde(s);
        CHECK(back / t > 0.999);
        CHECK(back / t < 1.001);
    }
    // and the other way, on table knots with s >= 1
    for (double s : {1.5, 4.0, 77.0, 1234.0, 98765.0}) {
        double z = ez.zeta(ez.eta_tilde(s));
        CHECK(z / s > 1.0 / 1.001);
        CHECK(z / s < 1.001);
    }
    // below range: clamped with flag
    bool clamped = false;
    double z = ez.zeta(0.5 * ez.eta_tilde(0.0), &clamped);
    CHECK(clamped);
    CHECK(z == 1.0);
    // monotone and >= 1
    double prev = 0.0;
    for (double t = 1.0; t < 0.9 * ez.eta_max(); t *= 2.3) {
        double s = ez.zeta(t);
        CHECK(s >= 1.0);
        CHECK(s >= prev);
        prev = s;
    }
    CHECK_THROWS_AS(ez.zeta(ez.eta_max() * 10.0), error);
}

TEST_CASE("zeta regimes from the jump index") {
    // beta < gamma: index 1/beta, i.e. log zeta / log t -> 1 for beta = 1
    {
        EtaZeta ez(JumpProfile{1.0, 0.0}, 2.0, 3.0e6);
        double t = 1.0e6;
        CHECK(std::log(ez.zeta(t)) / std::log(t) == doctest::Approx(1.0).epsilon(0.02));
    }
    // beta = gamma, lambda = 0: zeta(t) comparable to (t log t)^{1/gamma}
    {
        double gamma = 2.0;
        EtaZeta ez(JumpProfile{gamma, 0.0}, gamma, 3.0e4);
        for (double t = 1.0e2; t <= 1.0e6; t *= 10.0) {
            double ratio = ez.zeta(t) / std::pow(t * std::log(t), 1.0 / gamma);
            CHECK(ratio > 1.0 / 3.0);
            CHECK(ratio < 3.0);
        }
    }
}

TEST_CASE("regular variation index fits") {
    auto table_of = [](const EtaZeta& ez) {
        std::vector<double> ts, fs;
        for (double t = 1.0; t <= 1.0e6; t *= 1.25) {
            ts.push_back(t);
            fs.push_back(ez.eta(t));
        }
        return std::make_pair(ts, fs);
    };
    {
        EtaZeta ez(JumpProfile{1.0, 0.0}, 2.0, 1.0e7);
        auto [ts, fs] = table_of(ez);
        CHECK(std::fabs(rv_index_fit(ts, fs).slope - 1.0) < 0.05);
    }
    {
        EtaZeta ez(JumpProfile{4.0, 0.0}, 2.0, 1.0e7);
        auto [ts, fs] = table_of(ez);
        CHECK(std::fabs(rv_index_fit(ts, fs).slope - 2.0) < 0.05);
    }
    {
        JumpProfile phi{1.5, 0.0};
        std::vector<double> ts, fs;
        for (double t = 1.0; t <= 1.0e5; t *= 1.3) {
            ts.push_back(t);
            fs.push_back(phi(t));
        }
        CHECK(std::fabs(rv_index_fit(ts, fs).slope - 1.5) < 0.02);
    }
    // short table is rejected
    std::vector<double> ts{1, 2, 4, 8}, fs{1, 2, 4, 8};
    CHECK_THROWS_AS(rv_index_fit(ts, fs), error);
}

TEST_CASE("eta stays below a multiple of phi") {
    std::vector<double> grid;
    for (double t = 1.0; t <= 1.0e6; t *= 2.0) grid.push_back(t);
    {
        // beta < gamma: ratio tends to gamma - beta
        EtaZeta ez(JumpProfile{1.0, 0.0}, 2.0, 1.0e7);
        double r = ez.eta(1.0e6) / ez.profile()(1.0e6);
        CHECK(r == doctest::Approx(1.0).epsilon(0.05));
        auto scan = eta_le_phi_check(ez, grid);
        CHECK(scan.max_ratio < 2.5);  // bounded overall
    }
    {
        // beta = gamma: ratio decays like 1/log t
        EtaZeta ez(JumpProfile{2.0, 0.0}, 2.0, 1.0e7);
        double r = ez.eta(1.0e6) / ez.profile()(1.0e6);
        CHECK(r * std::log(1.0e6) > 0.5);
        CHECK(r * std::log(1.0e6) < 2.0);
        CHECK(eta_le_phi_check(ez, grid).max_ratio < 3.0);
    }
    {
        // beta > gamma: ratio tends to zero
        EtaZeta ez(JumpProfile{4.0, 0.0}, 2.0, 1.0e7);
        double r = ez.eta(1.0e6) / ez.profile()(1.0e6);
        CHECK(r < 1e-3);
    }
}
