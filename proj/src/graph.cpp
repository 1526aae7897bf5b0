#include "walklab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "walklab/util.hpp"

namespace walklab {

namespace {
constexpr int kUnreached = -1;
}

std::shared_ptr<WeightedGraph> WeightedGraph::from_edges(std::vector<Edge> edges,
                                                         int vertex_count) {
    if (edges.empty()) throw error("graph: edge list is empty");
    int max_id = -1;
    for (const Edge& e : edges) {
        if (e.u < 0 || e.v < 0) throw error("graph: negative vertex id");
        if (e.u == e.v) throw error("graph: self-loops are not supported");
        if (!(e.w > 0.0)) throw error("graph: edge weights must be positive");
        max_id = std::max(max_id, std::max(e.u, e.v));
    }
    int n = vertex_count < 0 ? max_id + 1 : vertex_count;
    if (max_id >= n) throw error("graph: vertex id exceeds declared vertex count");

    for (Edge& e : edges) {
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
            throw error("graph: duplicate edge " + std::to_string(edges[i].u) + "-" +
                        std::to_string(edges[i].v));
    }

    auto g = std::shared_ptr<WeightedGraph>(new WeightedGraph());
    g->n_ = n;
    g->edges_ = std::move(edges);
    g->adj_.assign(n, {});
    g->mu_.assign(n, 0.0);
    for (const Edge& e : g->edges_) {
        g->adj_[e.u].emplace_back(e.v, e.w);
        g->adj_[e.v].emplace_back(e.u, e.w);
        g->mu_[e.u] += e.w;
        g->mu_[e.v] += e.w;
    }
    for (auto& nb : g->adj_) std::sort(nb.begin(), nb.end());

    // connectivity: single BFS component covering every vertex
    std::vector<int> comp(n, -1);
    int comp_count = 0;
    std::vector<int> comp_size;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        int size = 0;
        std::deque<int> q{s};
        comp[s] = comp_count;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            ++size;
            for (auto [y, w] : g->adj_[x]) {
                if (comp[y] < 0) {
                    comp[y] = comp_count;
                    q.push_back(y);
                }
            }
        }
        comp_size.push_back(size);
        ++comp_count;
    }
    if (comp_count > 1) {
        std::string report = "graph: input is disconnected (" + std::to_string(comp_count) +
                             " components; sizes";
        for (std::size_t i = 0; i < comp_size.size() && i < 8; ++i)
            report += " " + std::to_string(comp_size[i]);
        if (comp_size.size() > 8) report += " ...";
        report += ")";
        throw error(report);
    }

    KahanSum total;
    for (double m : g->mu_) total.add(m);
    g->total_mu_ = total.value();
    g->mu_min_ = *std::min_element(g->mu_.begin(), g->mu_.end());
    g->mu_max_ = *std::max_element(g->mu_.begin(), g->mu_.end());
    return g;
}

void WeightedGraph::check_vertex(int x) const {
    if (x < 0 || x >= n_) throw error("graph: vertex " + std::to_string(x) + " out of range");
}

std::vector<int> WeightedGraph::bfs_from(int x) const {
    std::vector<int> dist(n_, kUnreached);
    std::deque<int> q{x};
    dist[x] = 0;
    while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        for (auto [b, w] : adj_[a]) {
            if (dist[b] == kUnreached) {
                dist[b] = dist[a] + 1;
                q.push_back(b);
            }
        }
    }
    return dist;
}

const std::vector<int>& WeightedGraph::distances_from(int x) const {
    check_vertex(x);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = dist_cache_.find(x);
        if (it != dist_cache_.end()) return *it->second;
    }
    auto row = std::make_unique<std::vector<int>>(bfs_from(x));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto [it, inserted] = dist_cache_.emplace(x, std::move(row));
    return *it->second;
}

std::vector<int> WeightedGraph::ball(int x, double r) const {
    check_vertex(x);
    if (r < 0) throw error("ball: radius must be nonnegative");
    std::vector<int> out;
    if (r < 1.0) {
        out.push_back(x);
        return out;
    }
    int ir = static_cast<int>(std::floor(r));
    // truncated BFS; does not touch the distance cache
    std::vector<int> dist(n_, kUnreached);
    std::deque<int> q{x};
    dist[x] = 0;
    out.push_back(x);
    while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        if (dist[a] >= ir) continue;
        for (auto [b, w] : adj_[a]) {
            if (dist[b] == kUnreached) {
                dist[b] = dist[a] + 1;
                out.push_back(b);
                q.push_back(b);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double WeightedGraph::ball_volume(int x, double r) const {
    KahanSum acc;
    for (int y : ball(x, r)) acc.add(mu_[y]);
    return acc.value();
}

int WeightedGraph::diameter() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (diameter_ >= 0) return diameter_;
    int d = 0;
    for (int x = 0; x < n_; ++x) {
        auto dist = bfs_from(x);
        for (int v : dist) d = std::max(d, v);
    }
    diameter_ = d;
    return diameter_;
}

void WeightedGraph::set_boundary(std::vector<int> boundary) {
    for (int b : boundary) check_vertex(b);
    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    boundary_ = std::move(boundary);
    boundary_dist_.assign(n_, std::numeric_limits<int>::max());
    if (boundary_.empty()) return;
    std::deque<int> q;
    for (int b : boundary_) {
        boundary_dist_[b] = 0;
        q.push_back(b);
    }
    while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        for (auto [b, w] : adj_[a]) {
            if (boundary_dist_[b] > boundary_dist_[a] + 1) {
                boundary_dist_[b] = boundary_dist_[a] + 1;
                q.push_back(b);
            }
        }
    }
}

int WeightedGraph::boundary_distance(int x) const {
    check_vertex(x);
    if (boundary_dist_.empty()) return std::numeric_limits<int>::max();
    return boundary_dist_[x];
}

int WeightedGraph::max_boundary_distance() const {
    if (boundary_.empty() || boundary_dist_.empty()) return std::numeric_limits<int>::max();
    return *std::max_element(boundary_dist_.begin(), boundary_dist_.end());
}

std::vector<int> WeightedGraph::interior_vertices(double margin) const {
    std::vector<int> out;
    for (int x = 0; x < n_; ++x) {
        if (static_cast<double>(boundary_distance(x)) > margin) out.push_back(x);
    }
    return out;
}

std::vector<int> WeightedGraph::interior_sample(double margin, int max_count) const {
    auto all = interior_vertices(margin);
    if (max_count <= 0 || static_cast<int>(all.size()) <= max_count) return all;
    std::vector<int> out;
    out.reserve(max_count);
    double step = static_cast<double>(all.size() - 1) / (max_count - 1);
    int last = -1;
    for (int k = 0; k < max_count; ++k) {
        int idx = static_cast<int>(std::lround(k * step));
        if (all[idx] != last) {
            out.push_back(all[idx]);
            last = all[idx];
        }
    }
    return out;
}

bool WeightedGraph::is_bipartite() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (bipartite_ >= 0) return bipartite_ == 1;
    std::vector<int> color(n_, -1);
    std::deque<int> q{0};
    color[0] = 0;
    bool ok = true;
    while (!q.empty() && ok) {
        int a = q.front();
        q.pop_front();
        for (auto [b, w] : adj_[a]) {
            if (color[b] < 0) {
                color[b] = 1 - color[a];
                q.push_back(b);
            } else if (color[b] == color[a]) {
                ok = false;
                break;
            }
        }
    }
    bipartite_ = ok ? 1 : 0;
    return ok;
}

VolumeProfile VolumeProfile::build(const WeightedGraph& g, Base base) {
    VolumeProfile p;
    p.base_ = base;

    const int n = g.vertex_count();
    int base_vertex = -1;
    if (base == Base::fixed_vertex) {
        // deepest interior vertex, smallest id on ties
        int best = -1;
        for (int x = 0; x < n; ++x) {
            int d = g.boundary_distance(x);
            if (d > best) {
                best = d;
                base_vertex = x;
            }
        }
        p.base_vertex_ = base_vertex;
    }

    // Walk r upward while a boundary-safe base set exists and the profile
    // keeps strictly increasing; the power-law extension takes over beyond.
    std::vector<double> table;
    for (int r = 0;; ++r) {
        double value;
        if (base == Base::fixed_vertex) {
            if (static_cast<double>(g.boundary_distance(base_vertex)) <= r && r > 0) break;
            value = g.ball_volume(base_vertex, r);
        } else {
            std::vector<int> eligible = g.interior_vertices(r);
            // degenerate graphs whose designated boundary covers everything
            if (eligible.empty() && r == 0) eligible = g.interior_vertices(-1.0);
            if (eligible.empty()) break;
            // cap the scan; evenly spaced so the subset is deterministic
            std::vector<int> sample;
            if (static_cast<int>(eligible.size()) > 256) {
                double step = static_cast<double>(eligible.size() - 1) / 255.0;
                for (int k = 0; k < 256; ++k)
                    sample.push_back(eligible[static_cast<int>(std::lround(k * step))]);
                sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
            } else {
                sample = eligible;
            }
            std::vector<double> vols;
            vols.reserve(sample.size());
            for (int x : sample) vols.push_back(g.ball_volume(x, r));
            std::sort(vols.begin(), vols.end());
            std::size_t m = vols.size();
            value = (m % 2 == 1) ? vols[m / 2] : 0.5 * (vols[m / 2 - 1] + vols[m / 2]);
        }
        if (!table.empty() && value <= table.back()) break;
        table.push_back(value);
        if (r > 4 * n) break;  // degenerate safety stop
    }
    if (table.empty()) throw error("volume profile: no measurable radius");
    if (table.size() == 1) table.push_back(table[0] * 2.0);  // two-vertex-style graphs

    p.table_ = std::move(table);

    // extension exponent from the top octave of the measured range
    int r_meas = static_cast<int>(p.table_.size()) - 1;
    int lo = std::max(1, r_meas / 2);
    std::vector<double> xs, ys;
    for (int r = lo; r <= r_meas; ++r) {
        xs.push_back(r);
        ys.push_back(p.table_[r]);
    }
    if (xs.size() >= 2) {
        p.alpha_ext_ = std::max(0.1, fit_loglog(xs, ys).slope);
    } else {
        p.alpha_ext_ = 1.0;
    }
    return p;
}

double VolumeProfile::value(double r) const {
    if (r < 0) throw error("volume profile: negative radius");
    int r_meas = measured_radius();
    if (r <= static_cast<double>(r_meas)) {
        int k = static_cast<int>(std::floor(r));
        if (k >= r_meas) return table_[r_meas];
        double frac = r - k;
        return table_[k] + frac * (table_[k + 1] - table_[k]);
    }
    return table_[r_meas] * std::pow(r / r_meas, alpha_ext_);
}

double VolumeProfile::inverse(double v) const {
    if (v <= table_.front()) return 0.0;
    int r_meas = measured_radius();
    if (v >= table_[r_meas])
        return r_meas * std::pow(v / table_[r_meas], 1.0 / alpha_ext_);
    auto it = std::upper_bound(table_.begin(), table_.end(), v);
    int k = static_cast<int>(it - table_.begin()) - 1;
    double lo = table_[k], hi = table_[k + 1];
    return k + (v - lo) / (hi - lo);
}

GraphDiagnostics diagnostics(const WeightedGraph& g, const VolumeProfile& V,
                             const std::vector<int>& r_grid, int max_base_samples) {
    if (r_grid.empty()) throw error("diagnostics: empty radius grid");
    GraphDiagnostics d;
    d.r_grid = r_grid;
    int r_max = *std::max_element(r_grid.begin(), r_grid.end());
    int r_min = *std::min_element(r_grid.begin(), r_grid.end());
    if (r_min < 1) throw error("diagnostics: radii must be >= 1");
    // graphs with a designated boundary: probes must stay inside the
    // measured profile; the 2r doubling probe skips points it cannot reach
    const bool bounded = !g.boundary().empty();
    if (bounded && r_max > V.measured_radius())
        throw error("diagnostics: grid radius " + std::to_string(r_max) +
                    " exceeds the safe bound " + std::to_string(V.measured_radius()) +
                    " (probes must stay within the measured profile)");
    if (bounded && 2 * r_min > V.measured_radius())
        throw error("diagnostics: no grid radius allows the doubling probe (needs r <= " +
                    std::to_string(V.measured_radius() / 2) + ")");

    d.C_mu = std::max(g.max_measure(), 1.0 / g.min_measure());

    double p0 = 1.0;
    for (int x = 0; x < g.vertex_count(); ++x) {
        for (auto [y, w] : g.neighbors(x)) p0 = std::min(p0, w / g.vertex_measure(x));
    }
    d.p0 = p0;

    std::vector<double> xs, ys;
    for (int r : r_grid) {
        if (!bounded || 2 * r <= V.measured_radius())
            d.C_D = std::max(d.C_D, V.value(2.0 * r) / V.value(r));
        xs.push_back(r);
        ys.push_back(V.value(r));
        auto sample = g.interior_sample(r, max_base_samples);
        if (sample.empty()) continue;
        for (int x : sample) {
            double vx = g.ball_volume(x, r);
            d.C_h = std::max(d.C_h, std::max(vx / V.value(r), V.value(r) / vx));
        }
    }
    if (xs.size() >= 2) d.alpha_fit = fit_loglog(xs, ys).slope;

    // reverse doubling: smallest A in {2,3,4} with a positive uniform c1
    for (int A = 2; A <= 4; ++A) {
        double c1 = std::numeric_limits<double>::max();
        std::vector<double> radii{0.5};
        for (int r : r_grid) radii.push_back(r);
        bool any = false;
        for (double r : radii) {
            auto sample = g.interior_sample(A * r, max_base_samples);
            for (int x : sample) {
                double gain = (g.ball_volume(x, A * r) - g.ball_volume(x, r)) / V.value(r);
                c1 = std::min(c1, gain);
                any = true;
            }
        }
        if (any && c1 > 0) {
            d.reverse_doubling_A = A;
            d.reverse_doubling_c1 = c1;
            break;
        }
    }
    return d;
}

}  // namespace walklab
