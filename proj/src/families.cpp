#include "walklab/families.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "walklab/util.hpp"

namespace walklab {

Family family_from_string(const std::string& name) {
    if (name == "gasket" || name == "sierpinski_gasket" || name == "sierpinski")
        return Family::sierpinski_gasket;
    if (name == "vicsek" || name == "vicsek_tree") return Family::vicsek_tree;
    if (name == "lattice" || name == "lattice_box") return Family::lattice_box;
    if (name == "cycle") return Family::cycle;
    if (name == "path") return Family::path;
    throw error("unknown graph family '" + name + "'");
}

std::string family_name(Family f) {
    switch (f) {
        case Family::sierpinski_gasket: return "gasket";
        case Family::vicsek_tree: return "vicsek";
        case Family::lattice_box: return "lattice";
        case Family::cycle: return "cycle";
        case Family::path: return "path";
    }
    return "?";
}

long long predicted_vertex_count(const FamilySpec& spec) {
    const int L = spec.level_or_size;
    switch (spec.family) {
        case Family::sierpinski_gasket: {
            long long p = 1;
            for (int i = 0; i < L; ++i) p *= 3;
            return 3 * (p + 1) / 2;
        }
        case Family::vicsek_tree: {
            long long p = 1;
            for (int i = 0; i < L; ++i) p *= 5;
            return 4 * p + 1;
        }
        case Family::lattice_box: {
            long long p = 1;
            for (int i = 0; i < spec.dimension; ++i) {
                p *= L;
                if (p > (1LL << 40)) return p;
            }
            return p;
        }
        case Family::cycle:
        case Family::path:
            return L;
    }
    return 0;
}

namespace {

using Coord = std::pair<long long, long long>;

struct GasketParts {
    std::vector<Coord> coords;            // canonical order
    std::vector<std::pair<int, int>> edges;
    std::vector<int> corners;
};

GasketParts build_gasket(int level) {
    // corners (0,0), (2^{L+1},0), (2^L,2^L); subdividing L times leaves unit
    // triangles of x-width 2, so all midpoints stay integral
    struct Tri {
        Coord a, b, c;
    };
    long long s = 1LL << level;
    std::vector<Tri> tris{{{0, 0}, {2 * s, 0}, {s, s}}};
    for (int l = 0; l < level; ++l) {
        std::vector<Tri> next;
        next.reserve(tris.size() * 3);
        auto mid = [](Coord p, Coord q) -> Coord {
            return {(p.first + q.first) / 2, (p.second + q.second) / 2};
        };
        for (const Tri& t : tris) {
            Coord mab = mid(t.a, t.b), mac = mid(t.a, t.c), mbc = mid(t.b, t.c);
            next.push_back({t.a, mab, mac});
            next.push_back({mab, t.b, mbc});
            next.push_back({mac, mbc, t.c});
        }
        tris = std::move(next);
    }

    std::set<Coord> vset;
    for (const Tri& t : tris) {
        vset.insert(t.a);
        vset.insert(t.b);
        vset.insert(t.c);
    }
    GasketParts parts;
    parts.coords.assign(vset.begin(), vset.end());
    std::map<Coord, int> id;
    for (int i = 0; i < static_cast<int>(parts.coords.size()); ++i) id[parts.coords[i]] = i;

    std::set<std::pair<int, int>> eset;
    auto add_edge = [&](Coord p, Coord q) {
        int u = id[p], v = id[q];
        if (u > v) std::swap(u, v);
        eset.insert({u, v});
    };
    for (const Tri& t : tris) {
        add_edge(t.a, t.b);
        add_edge(t.b, t.c);
        add_edge(t.a, t.c);
    }
    parts.edges.assign(eset.begin(), eset.end());
    parts.corners = {id[{0, 0}], id[{2 * s, 0}], id[{s, s}]};
    std::sort(parts.corners.begin(), parts.corners.end());
    return parts;
}

struct VicsekParts {
    std::vector<Coord> coords;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> outer_corners;
};

VicsekParts build_vicsek(int level) {
    // level 0: center plus four diagonal leaves; level k+1 glues five copies
    // at the shared box corners
    std::set<Coord> vset{{0, 0}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    std::set<std::pair<Coord, Coord>> eset;
    auto norm_edge = [](Coord p, Coord q) {
        return p < q ? std::make_pair(p, q) : std::make_pair(q, p);
    };
    for (Coord leaf : {Coord{1, 1}, Coord{1, -1}, Coord{-1, 1}, Coord{-1, -1}})
        eset.insert(norm_edge({0, 0}, leaf));

    long long half = 1;
    for (int l = 0; l < level; ++l) {
        std::set<Coord> vnext = vset;
        std::set<std::pair<Coord, Coord>> enext = eset;
        for (Coord off : {Coord{2 * half, 2 * half}, Coord{2 * half, -2 * half},
                          Coord{-2 * half, 2 * half}, Coord{-2 * half, -2 * half}}) {
            for (Coord v : vset) vnext.insert({v.first + off.first, v.second + off.second});
            for (auto [p, q] : eset)
                enext.insert(norm_edge({p.first + off.first, p.second + off.second},
                                       {q.first + off.first, q.second + off.second}));
        }
        vset = std::move(vnext);
        eset = std::move(enext);
        half *= 3;
    }

    VicsekParts parts;
    parts.coords.assign(vset.begin(), vset.end());
    std::map<Coord, int> id;
    for (int i = 0; i < static_cast<int>(parts.coords.size()); ++i) id[parts.coords[i]] = i;
    for (auto [p, q] : eset) {
        int u = id[p], v = id[q];
        if (u > v) std::swap(u, v);
        parts.edges.push_back({u, v});
    }
    std::sort(parts.edges.begin(), parts.edges.end());
    for (Coord c : {Coord{half, half}, Coord{half, -half}, Coord{-half, half},
                    Coord{-half, -half}})
        parts.outer_corners.push_back(id[c]);
    std::sort(parts.outer_corners.begin(), parts.outer_corners.end());
    return parts;
}

std::vector<double> perturbation_factors(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> f(count);
    for (auto& v : f) v = rng.uniform(0.5, 2.0);
    return f;
}

GraphPtr assemble(std::vector<Edge> edges, int n, std::vector<int> boundary,
                  const FamilySpec& spec) {
    if (spec.perturb) {
        auto factors = perturbation_factors(edges.size(), spec.seed);
        for (std::size_t i = 0; i < edges.size(); ++i) edges[i].w *= factors[i];
    }
    auto g = WeightedGraph::from_edges(std::move(edges), n);
    g->set_boundary(std::move(boundary));
    return g;
}

}  // namespace

GraphPtr generate(const FamilySpec& spec) {
    if (spec.level_or_size < 0 || (spec.family != Family::sierpinski_gasket &&
                                   spec.family != Family::vicsek_tree && spec.level_or_size < 1))
        throw error("generate: level/size must be positive");
    long long predicted = predicted_vertex_count(spec);
    if (predicted > spec.vertex_budget)
        throw error("generate: predicted vertex count " + std::to_string(predicted) +
                    " exceeds budget " + std::to_string(spec.vertex_budget));

    switch (spec.family) {
        case Family::sierpinski_gasket: {
            auto parts = build_gasket(spec.level_or_size);
            std::vector<Edge> edges;
            edges.reserve(parts.edges.size());
            for (auto [u, v] : parts.edges) edges.push_back({u, v, 1.0});
            return assemble(std::move(edges), static_cast<int>(parts.coords.size()),
                            parts.corners, spec);
        }
        case Family::vicsek_tree: {
            auto parts = build_vicsek(spec.level_or_size);
            std::vector<Edge> edges;
            edges.reserve(parts.edges.size());
            for (auto [u, v] : parts.edges) edges.push_back({u, v, 1.0});
            return assemble(std::move(edges), static_cast<int>(parts.coords.size()),
                            parts.outer_corners, spec);
        }
        case Family::lattice_box: {
            const int s = spec.level_or_size;
            const int d = spec.dimension;
            if (d < 1 || d > 4) throw error("generate: lattice dimension must be in [1,4]");
            if (s < 2) throw error("generate: lattice side must be >= 2");
            long long n = predicted;
            auto coords_of = [&](long long idx) {
                std::vector<int> c(d);
                for (int k = d - 1; k >= 0; --k) {
                    c[k] = static_cast<int>(idx % s);
                    idx /= s;
                }
                return c;
            };
            std::vector<Edge> edges;
            std::vector<int> boundary;
            for (long long i = 0; i < n; ++i) {
                auto c = coords_of(i);
                bool on_shell = false;
                long long stride = 1;
                for (int k = d - 1; k >= 0; --k) {
                    if (c[k] == 0 || c[k] == s - 1) on_shell = true;
                    if (c[k] + 1 < s)
                        edges.push_back({static_cast<int>(i), static_cast<int>(i + stride), 1.0});
                    stride *= s;
                }
                if (on_shell) boundary.push_back(static_cast<int>(i));
            }
            return assemble(std::move(edges), static_cast<int>(n), std::move(boundary), spec);
        }
        case Family::cycle: {
            const int n = spec.level_or_size;
            if (n < 3) throw error("generate: cycle needs at least 3 vertices");
            std::vector<Edge> edges;
            for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
            return assemble(std::move(edges), n, {}, spec);
        }
        case Family::path: {
            const int n = spec.level_or_size;
            if (n < 2) throw error("generate: path needs at least 2 vertices");
            std::vector<Edge> edges;
            for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
            return assemble(std::move(edges), n, {0, n - 1}, spec);
        }
    }
    throw error("generate: unreachable");
}

std::optional<std::pair<double, double>> expected_exponents(Family f, int dimension) {
    const double log2 = std::log(2.0), log3 = std::log(3.0), log5 = std::log(5.0);
    switch (f) {
        case Family::sierpinski_gasket:
            return std::make_pair(log3 / log2, log5 / log2);
        case Family::vicsek_tree:
            return std::make_pair(log5 / log3, 1.0 + log5 / log3);
        case Family::lattice_box:
            return std::make_pair(static_cast<double>(dimension), 2.0);
        case Family::cycle:
        case Family::path:
            return std::nullopt;
    }
    return std::nullopt;
}

namespace detail {
std::vector<std::pair<long long, long long>> gasket_coordinates(int level) {
    return build_gasket(level).coords;
}
}  // namespace detail

}  // namespace walklab
