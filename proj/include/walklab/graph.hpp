#pragma once

#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "walklab/util.hpp"

namespace walklab {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

/// Undirected weighted graph with the induced vertex measure
/// mu(x) = sum of incident edge weights. Immutable after construction;
/// distance rows are cached write-once and may be filled concurrently.
class WeightedGraph {
public:
    /// Validates, symmetrizes and connects. `vertex_count` -1 means deduce
    /// from the largest endpoint. Rejects nonpositive weights, self-loops,
    /// duplicate edges and disconnected input (with a component report).
    static std::shared_ptr<WeightedGraph> from_edges(std::vector<Edge> edges,
                                                     int vertex_count = -1);

    int vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }  // canonical u<v order

    double vertex_measure(int x) const { return mu_[x]; }
    const std::vector<double>& measure() const { return mu_; }
    double total_measure() const { return total_mu_; }
    double min_measure() const { return mu_min_; }
    double max_measure() const { return mu_max_; }

    const std::vector<std::pair<int, double>>& neighbors(int x) const { return adj_[x]; }
    int degree(int x) const { return static_cast<int>(adj_[x].size()); }

    /// Hop-count distances from x (edges are unweighted for distances).
    const std::vector<int>& distances_from(int x) const;
    int distance(int x, int y) const { return distances_from(x)[y]; }

    /// Vertices with d(x, y) <= r, ascending ids.
    std::vector<int> ball(int x, double r) const;
    /// mu(B(x, r)).
    double ball_volume(int x, double r) const;

    int diameter() const;
    double safe_radius() const { return diameter() / 4.0; }

    /// Designated boundary (set at generation). May be empty, in which case
    /// every vertex counts as interior at any margin.
    void set_boundary(std::vector<int> boundary);
    const std::vector<int>& boundary() const { return boundary_; }
    /// Hop distance to the boundary set; INT_MAX when the boundary is empty.
    int boundary_distance(int x) const;
    int max_boundary_distance() const;

    /// Vertices with boundary_distance > margin, ascending ids.
    std::vector<int> interior_vertices(double margin) const;
    /// Evenly-spaced deterministic subsample of interior_vertices(margin).
    std::vector<int> interior_sample(double margin, int max_count) const;

    bool is_bipartite() const;

    void check_vertex(int x) const;

private:
    WeightedGraph() = default;

    std::vector<int> bfs_from(int x) const;

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::vector<double> mu_;
    double total_mu_ = 0.0;
    double mu_min_ = 0.0;
    double mu_max_ = 0.0;

    std::vector<int> boundary_;
    std::vector<int> boundary_dist_;

    mutable std::mutex cache_mutex_;
    mutable std::unordered_map<int, std::unique_ptr<std::vector<int>>> dist_cache_;
    mutable int diameter_ = -1;
    mutable int bipartite_ = -1;
};

using GraphPtr = std::shared_ptr<const WeightedGraph>;

/// Global volume profile V(r). Measured on the largest boundary-safe range,
/// linearly interpolated between integer radii and extended beyond the
/// measured range by the fitted power law so that V stays strictly
/// increasing on [0, inf).
class VolumeProfile {
public:
    enum class Base { median_interior, fixed_vertex };

    static VolumeProfile build(const WeightedGraph& g, Base base = Base::median_interior);

    double operator()(double r) const { return value(r); }
    double value(double r) const;
    double inverse(double v) const;

    int measured_radius() const { return static_cast<int>(table_.size()) - 1; }
    double extension_exponent() const { return alpha_ext_; }
    Base base() const { return base_; }
    int base_vertex() const { return base_vertex_; }  // -1 in median mode
    const std::vector<double>& table() const { return table_; }

private:
    std::vector<double> table_;  // V(0), V(1), ..., V(r_meas)
    double alpha_ext_ = 1.0;
    Base base_ = Base::median_interior;
    int base_vertex_ = -1;
};

struct GraphDiagnostics {
    double C_mu = 1.0;
    double C_D = 1.0;
    double C_h = 1.0;
    double p0 = 0.0;
    double alpha_fit = 0.0;
    int reverse_doubling_A = 2;
    double reverse_doubling_c1 = 0.0;
    std::vector<int> r_grid;
};

/// Measures the standing-assumption constants over `r_grid`. Radii must fit
/// the profile's measured range (doubling probes reach 2r); otherwise an
/// error naming the safe bound is thrown.
GraphDiagnostics diagnostics(const WeightedGraph& g, const VolumeProfile& V,
                             const std::vector<int>& r_grid, int max_base_samples = 64);

}  // namespace walklab
