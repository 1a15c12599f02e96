#pragma once

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pbc/error.hpp"
#include "pbc/kd_tree.hpp"
#include "pbc/parallel.hpp"
#include "pbc/point_cloud.hpp"

namespace pbc {

enum class GraphRule { knn, eps_ball, annulus };

/// Neighborhood rule. Use the named constructors.
struct GraphConfig {
    GraphRule rule = GraphRule::knn;
    std::size_t q = 10;           // knn
    double epsilon = 0.0;         // eps_ball, annulus
    double inner_fraction = 0.5;  // annulus: edges need length in [inner_fraction*eps, eps]

    static GraphConfig knn(std::size_t q) { return {GraphRule::knn, q, 0.0, 0.5}; }
    static GraphConfig eps_ball(double epsilon) { return {GraphRule::eps_ball, 0, epsilon, 0.5}; }
    static GraphConfig annulus(double epsilon, double inner_fraction = 0.5) {
        return {GraphRule::annulus, 0, epsilon, inner_fraction};
    }

    void validate(std::size_t n_points) const {
        switch (rule) {
            case GraphRule::knn:
                if (q < 1 || q >= n_points) throw DomainError("knn graph needs 1 <= q < N");
                break;
            case GraphRule::annulus:
                if (!(inner_fraction > 0.0 && inner_fraction < 1.0))
                    throw DomainError("annulus inner_fraction must lie in (0, 1)");
                [[fallthrough]];
            case GraphRule::eps_ball:
                if (!(epsilon > 0.0)) throw DomainError("graph epsilon must be positive");
                break;
        }
    }
};

inline std::string to_string(GraphRule r) {
    switch (r) {
        case GraphRule::knn: return "knn";
        case GraphRule::eps_ball: return "eps_ball";
        case GraphRule::annulus: return "annulus";
    }
    return "?";
}

inline GraphRule parse_graph_rule(const std::string& s) {
    if (s == "knn") return GraphRule::knn;
    if (s == "eps_ball") return GraphRule::eps_ball;
    if (s == "annulus") return GraphRule::annulus;
    throw DomainError("unknown graph rule '" + s + "' (expected knn, eps_ball or annulus)");
}

struct Edge {
    std::size_t to;
    double weight;
};

/// Immutable undirected weighted graph over the points of a cloud, stored as
/// compressed adjacency lists sorted by neighbor index. Keeps a copy of the
/// vertex coordinates so path engines can evaluate triplet geometry.
class NeighborhoodGraph {
public:
    NeighborhoodGraph() = default;

    /// From per-vertex neighbor lists; symmetrizes, drops self-loops and sets
    /// every weight to the Euclidean distance.
    NeighborhoodGraph(PointCloud points, const std::vector<std::vector<std::size_t>>& neighbors)
        : points_(std::move(points)) {
        const std::size_t n = points_.size();
        if (neighbors.size() != n) throw DomainError("neighbor list count does not match vertex count");
        std::vector<std::vector<std::size_t>> sym(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j : neighbors[i]) {
                if (j >= n) throw DomainError("neighbor index out of range");
                if (j == i) continue;
                sym[i].push_back(j);
                sym[j].push_back(i);
            }
        offsets_.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& l = sym[i];
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
            offsets_[i + 1] = offsets_[i] + l.size();
            max_degree_ = std::max(max_degree_, l.size());
        }
        edges_.reserve(offsets_[n]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j : sym[i]) {
                const double w = distance(points_[i], points_[j]);
                if (!(w > 0.0)) throw DegenerateCloud("edge between coincident points " + std::to_string(i) + " and " + std::to_string(j));
                edges_.push_back({j, w});
            }
    }

    std::size_t n_vertices() const noexcept { return points_.size(); }
    std::size_t n_edges() const noexcept { return edges_.size() / 2; }
    std::size_t max_degree() const noexcept { return max_degree_; }
    std::size_t degree(std::size_t v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

    std::span<const Edge> neighbors(std::size_t v) const noexcept {
        return {edges_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }

    /// Index of the directed edge v -> neighbors(v)[k] in [0, 2E).
    std::size_t edge_id(std::size_t v, std::size_t k) const noexcept { return offsets_[v] + k; }
    std::size_t n_directed_edges() const noexcept { return edges_.size(); }
    std::size_t edge_offset(std::size_t v) const noexcept { return offsets_[v]; }
    const Edge& directed_edge(std::size_t id) const noexcept { return edges_[id]; }

    bool has_edge(std::size_t u, std::size_t v) const noexcept {
        const auto nb = neighbors(u);
        auto it = std::lower_bound(nb.begin(), nb.end(), v, [](const Edge& e, std::size_t x) { return e.to < x; });
        return it != nb.end() && it->to == v;
    }

    double weight(std::size_t u, std::size_t v) const {
        const auto nb = neighbors(u);
        auto it = std::lower_bound(nb.begin(), nb.end(), v, [](const Edge& e, std::size_t x) { return e.to < x; });
        if (it == nb.end() || it->to != v) throw DomainError("no edge between the given vertices");
        return it->weight;
    }

    const PointCloud& points() const noexcept { return points_; }
    Point position(std::size_t v) const noexcept { return points_[v]; }

    /// Undirected edges (i < j) in lexicographic order.
    std::vector<std::pair<std::size_t, std::size_t>> edge_list() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < n_vertices(); ++i)
            for (const Edge& e : neighbors(i))
                if (i < e.to) out.emplace_back(i, e.to);
        return out;
    }

private:
    PointCloud points_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Edge> edges_;
    std::size_t max_degree_ = 0;
};

/// Dimension up to which neighbor queries go through a k-d tree.
inline constexpr std::size_t spatial_index_max_dim = 16;

namespace detail {

inline bool in_band(double d2, const GraphConfig& c) {
    const double d = std::sqrt(d2);
    if (d > c.epsilon) return false;
    return c.rule != GraphRule::annulus || d >= c.inner_fraction * c.epsilon;
}

inline std::vector<std::vector<std::size_t>> knn_lists(const PointCloud& cloud, std::size_t q, bool use_index) {
    const std::size_t n = cloud.size();
    std::vector<std::vector<std::size_t>> out(n);
    if (use_index) {
        const KdTree tree(cloud);
        parallel_for(n, [&](std::size_t i) {
            for (const auto& [d2, j] : tree.nearest(cloud[i], q, i)) out[i].push_back(j);
        });
    } else {
        parallel_for(n, [&](std::size_t i) {
            std::vector<std::pair<double, std::size_t>> cand;
            cand.reserve(n - 1);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) cand.emplace_back(squared_distance(cloud[i], cloud[j]), j);
            std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(q), cand.end());
            for (std::size_t r = 0; r < q; ++r) out[i].push_back(cand[r].second);
        });
    }
    return out;
}

inline std::vector<std::vector<std::size_t>> radius_lists(const PointCloud& cloud, const GraphConfig& c, bool use_index) {
    const std::size_t n = cloud.size();
    std::vector<std::vector<std::size_t>> out(n);
    const double r2 = c.epsilon * c.epsilon * (1.0 + 1e-12);
    if (use_index) {
        const KdTree tree(cloud);
        parallel_for(n, [&](std::size_t i) {
            for (std::size_t j : tree.within(cloud[i], r2))
                if (j > i && in_band(squared_distance(cloud[i], cloud[j]), c)) out[i].push_back(j);
        });
    } else {
        parallel_for(n, [&](std::size_t i) {
            for (std::size_t j = i + 1; j < n; ++j)
                if (in_band(squared_distance(cloud[i], cloud[j]), c)) out[i].push_back(j);
        });
    }
    return out;
}

}  // namespace detail

/**
 * Builds the neighborhood graph of `cloud` under `config`.
 *
 *  - knn:      i ~ j iff j is among the q nearest of i or vice versa. Ties at
 *              the q-th distance go to the lower index.
 *  - eps_ball: i ~ j iff |x_i - x_j| <= epsilon.
 *  - annulus:  i ~ j iff inner_fraction * epsilon <= |x_i - x_j| <= epsilon.
 *
 * Neighbors are exact in every dimension; a k-d tree is used up to
 * spatial_index_max_dim and an exhaustive scan above.
 *
 * Throws DegenerateCloud when the cloud has fewer than two points or
 * contains duplicates (see deduplicate()).
 */
inline NeighborhoodGraph build_graph(const PointCloud& cloud, const GraphConfig& config) {
    if (cloud.size() < 2) throw DegenerateCloud("graph construction needs at least two points");
    config.validate(cloud.size());
    if (has_duplicate_points(cloud))
        throw DegenerateCloud("cloud contains duplicate points; deduplicate first (or enable dedupe)");
    const bool use_index = cloud.dim() <= spatial_index_max_dim;
    auto lists = config.rule == GraphRule::knn ? detail::knn_lists(cloud, config.q, use_index)
                                               : detail::radius_lists(cloud, config, use_index);
    PointCloud positions(cloud.dim(), cloud.coords());
    return NeighborhoodGraph(std::move(positions), lists);
}

/// Exhaustive reference builder; same rules as build_graph, O(N^2).
inline NeighborhoodGraph build_graph_brute_force(const PointCloud& cloud, const GraphConfig& config) {
    if (cloud.size() < 2) throw DegenerateCloud("graph construction needs at least two points");
    config.validate(cloud.size());
    if (has_duplicate_points(cloud))
        throw DegenerateCloud("cloud contains duplicate points; deduplicate first (or enable dedupe)");
    auto lists = config.rule == GraphRule::knn ? detail::knn_lists(cloud, config.q, false)
                                               : detail::radius_lists(cloud, config, false);
    PointCloud positions(cloud.dim(), cloud.coords());
    return NeighborhoodGraph(std::move(positions), lists);
}

/// Undirected connected components, labeled 0.. in order of lowest vertex.
inline std::vector<std::size_t> connected_components(const NeighborhoodGraph& g) {
    constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> label(g.n_vertices(), unset);
    std::vector<std::size_t> stack;
    std::size_t next = 0;
    for (std::size_t s = 0; s < g.n_vertices(); ++s) {
        if (label[s] != unset) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (const Edge& e : g.neighbors(v))
                if (label[e.to] == unset) {
                    label[e.to] = next;
                    stack.push_back(e.to);
                }
        }
        ++next;
    }
    return label;
}

/// Writes `i,j,weight` lines, one per undirected edge with i < j.
inline void write_edge_list_csv(std::ostream& out, const NeighborhoodGraph& g) {
    std::ostringstream line;
    line << std::setprecision(17);
    out << "i,j,weight\n";
    for (std::size_t i = 0; i < g.n_vertices(); ++i)
        for (const Edge& e : g.neighbors(i))
            if (i < e.to) {
                line.str("");
                line << i << ',' << e.to << ',' << e.weight << '\n';
                out << line.str();
            }
}

}  // namespace pbc
