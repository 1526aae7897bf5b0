#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "doctest.h"
#include "walklab/families.hpp"
#include "walklab/graph.hpp"

using namespace walklab;

TEST_CASE("build_graph basics") {
    auto g = WeightedGraph::from_edges({{0, 1, 1.0}});
    CHECK(g->vertex_count() == 2);
    CHECK(g->vertex_measure(0) == 1.0);
    CHECK(g->vertex_measure(1) == 1.0);

    auto path = generate({Family::path, 5});
    CHECK(path->vertex_measure(0) == 1.0);
    CHECK(path->vertex_measure(4) == 1.0);
    for (int x = 1; x <= 3; ++x) CHECK(path->vertex_measure(x) == 2.0);
}

TEST_CASE("build_graph rejections") {
    CHECK_THROWS_AS(WeightedGraph::from_edges({{0, 1, -1.0}}), error);
    CHECK_THROWS_AS(WeightedGraph::from_edges({{0, 1, 0.0}}), error);
    CHECK_THROWS_AS(WeightedGraph::from_edges({{0, 0, 1.0}}), error);
    CHECK_THROWS_AS(WeightedGraph::from_edges({{0, 1, 1.0}, {1, 0, 2.0}}), error);
    CHECK_THROWS_AS(WeightedGraph::from_edges({}), error);
    try {
        WeightedGraph::from_edges({{0, 1, 1.0}, {2, 3, 1.0}});
        CHECK(false);
    } catch (const error& e) {
        CHECK(std::string(e.what()).find("disconnected") != std::string::npos);
        CHECK(std::string(e.what()).find("2 components") != std::string::npos);
    }
}

TEST_CASE("distances") {
    auto cyc = generate({Family::cycle, 6});
    const auto& d = cyc->distances_from(0);
    CHECK(d == std::vector<int>{0, 1, 2, 3, 2, 1});

    // path with n edges has endpoint distance n
    auto path = generate({Family::path, 9});
    CHECK(path->distance(0, 8) == 8);

    auto gasket = generate({Family::sierpinski_gasket, 2});
    auto corners = gasket->boundary();
    REQUIRE(corners.size() == 3);
    CHECK(gasket->distance(corners[0], corners[1]) == 4);
    CHECK(gasket->distance(corners[0], corners[2]) == 4);
    CHECK(gasket->distance(corners[1], corners[2]) == 4);
}

TEST_CASE("distance axioms on sampled triples") {
    auto g = generate({Family::sierpinski_gasket, 3});
    int n = g->vertex_count();
    for (int x = 0; x < n; x += 5) {
        CHECK(g->distance(x, x) == 0);
        for (int y = 1; y < n; y += 7) {
            CHECK(g->distance(x, y) == g->distance(y, x));
            CHECK((g->distance(x, y) == 0) == (x == y));
            for (int z = 2; z < n; z += 11)
                CHECK(g->distance(x, z) <= g->distance(x, y) + g->distance(y, z));
        }
    }
}

TEST_CASE("ball volume") {
    auto g2 = WeightedGraph::from_edges({{0, 1, 1.0}});
    CHECK(g2->ball_volume(0, 0) == g2->vertex_measure(0));
    CHECK(g2->ball_volume(0, 1) == 2.0);

    // lattice box side 21, center, r = 5: independent diamond enumeration
    const int s = 21;
    auto lat = generate({Family::lattice_box, s, 2});
    int center = (s / 2) * s + s / 2;
    double direct = 0.0;
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            if (std::abs(i - s / 2) + std::abs(j - s / 2) <= 5) {
                int deg = 4;
                if (i == 0 || i == s - 1) --deg;
                if (j == 0 || j == s - 1) --deg;
                direct += deg;
            }
        }
    }
    CHECK(lat->ball_volume(center, 5) == doctest::Approx(direct).epsilon(1e-14));

    // oracle equality against an independently enumerated ball
    auto g = generate({Family::sierpinski_gasket, 3});
    for (int x : {0, 7, 20}) {
        for (int r : {0, 1, 3, 6}) {
            double acc = 0.0;
            for (int y = 0; y < g->vertex_count(); ++y)
                if (g->distance(x, y) <= r) acc += g->vertex_measure(y);
            CHECK(g->ball_volume(x, r) == doctest::Approx(acc).epsilon(1e-13));
        }
    }

    // non-decreasing in r
    auto v1 = g->ball_volume(4, 2.0);
    auto v2 = g->ball_volume(4, 3.5);
    CHECK(v2 >= v1);
}

TEST_CASE("volume profile on the path") {
    auto path = generate({Family::path, 41});
    auto V = VolumeProfile::build(*path, VolumeProfile::Base::fixed_vertex);
    CHECK(V.base_vertex() == 20);
    CHECK(V.value(0) > 0.0);
    // interior vertices carry measure 2, so V(r) = 2(2r+1) below half-length
    for (int r = 1; r <= 10; ++r) CHECK(V.value(r) == doctest::Approx(4.0 * r + 2.0));
    // interpolation between integers is linear
    CHECK(V.value(2.5) == doctest::Approx(0.5 * (V.value(2) + V.value(3))));
    // strictly increasing, also through the extension region
    double prev = V.value(0);
    for (double r = 0.5; r < 80.0; r += 0.5) {
        CHECK(V.value(r) > prev);
        prev = V.value(r);
    }
    // inverse round trip
    for (double r : {0.5, 3.0, 9.5, 17.0, 60.0})
        CHECK(V.inverse(V.value(r)) == doctest::Approx(r).epsilon(1e-9));
}

TEST_CASE("volume profile self-similar growth on the gasket") {
    auto g = generate({Family::sierpinski_gasket, 6});
    auto V = VolumeProfile::build(*g);
    CHECK(V.value(0) > 0.0);
    // tripling per doubled radius, up to lattice-scale wobble
    double r1 = V.value(16) / V.value(8);
    double r2 = V.value(8) / V.value(4);
    CHECK(r1 > 2.4);
    CHECK(r1 < 3.6);
    CHECK(r2 > 2.4);
    CHECK(r2 < 3.6);
}

TEST_CASE("diagnostics constants") {
    auto g2 = WeightedGraph::from_edges({{0, 1, 1.0}});
    auto V2 = VolumeProfile::build(*g2);
    // two-vertex graph: C_mu = 1
    auto d2 = diagnostics(*g2, V2, {1}, 16);
    CHECK(d2.C_mu == doctest::Approx(1.0));
    CHECK(d2.p0 == doctest::Approx(1.0));

    auto lat = generate({Family::lattice_box, 101, 2});
    auto Vl = VolumeProfile::build(*lat);
    auto dl = diagnostics(*lat, Vl, {12, 24}, 32);
    CHECK(dl.alpha_fit > 1.9);
    CHECK(dl.alpha_fit < 2.1);
    CHECK(dl.C_mu == doctest::Approx(4.0));   // degrees 2..4, measure in [2,4]
    CHECK(dl.p0 == doctest::Approx(0.25));
    CHECK(dl.reverse_doubling_c1 > 0.0);

    auto gask = generate({Family::sierpinski_gasket, 6});
    auto Vg = VolumeProfile::build(*gask);
    std::vector<int> alpha_grid;
    for (int r = 4; r <= Vg.measured_radius(); ++r) alpha_grid.push_back(r);
    auto dg = diagnostics(*gask, Vg, alpha_grid, 48);
    CHECK(std::fabs(dg.alpha_fit - std::log(3.0) / std::log(2.0)) < 0.1);
    CHECK(dg.C_mu <= 4.0);  // bounded by the family degree bound
    CHECK(dg.C_D >= 1.0);
    CHECK(dg.C_h >= 1.0);
    CHECK(dg.reverse_doubling_c1 > 0.0);

    // scale stability: moving the probe grid shifts constants by < 20%
    auto da = diagnostics(*gask, Vg, {2, 4}, 48);
    auto db = diagnostics(*gask, Vg, {4, 8}, 48);
    CHECK(std::fabs(da.C_D - db.C_D) / da.C_D < 0.2);
    CHECK(std::fabs(da.C_h - db.C_h) / da.C_h < 0.2);

    // grid beyond the safe radius names the bound
    try {
        diagnostics(*gask, Vg, {40}, 16);
        CHECK(false);
    } catch (const error& e) {
        CHECK(std::string(e.what()).find("safe bound") != std::string::npos);
    }
}

TEST_CASE("interior vertices respect the boundary margin") {
    auto g = generate({Family::sierpinski_gasket, 4});
    auto inner = g->interior_vertices(4.0);
    CHECK(!inner.empty());
    for (int x : inner) CHECK(g->boundary_distance(x) > 4);
    auto sample = g->interior_sample(4.0, 10);
    CHECK(sample.size() <= 10);
    std::set<int> allowed(inner.begin(), inner.end());
    for (int x : sample) CHECK(allowed.count(x) == 1);

    // cycle has no boundary: everything is interior
    auto cyc = generate({Family::cycle, 8});
    CHECK(cyc->interior_vertices(1000.0).size() == 8);
}

TEST_CASE("bipartite detection") {
    CHECK(generate({Family::cycle, 8})->is_bipartite());
    CHECK(!generate({Family::cycle, 7})->is_bipartite());
    CHECK(generate({Family::lattice_box, 5, 2})->is_bipartite());
    CHECK(!generate({Family::sierpinski_gasket, 2})->is_bipartite());
}
