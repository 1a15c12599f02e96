#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pbc/constrained_path.hpp"
#include "pbc/geometry.hpp"

// Reference implementations that share no search code with the engines in
// constrained_path.hpp. Used by the test suites.

namespace pbc {

namespace detail {

/// The constraint predicate restated from the geometry primitives.
inline bool oracle_admits(const ConstraintSpec& c, Point x, Point y, Point z) {
    const Triplet t{x, y, z};
    const double tolerance = 1.0 + ConstraintSpec::slack;
    if (c.kind == ConstraintKind::angle) return turn_angle(t) <= c.bound * tolerance;
    const double k = curvature(t);
    return std::isfinite(k) && k < c.bound * tolerance;
}

}  // namespace detail

inline constexpr std::size_t brute_force_default_cap = 25;

/**
 * Exhaustive constrained reachability on a small graph.
 *
 * max_hops == 0: fixed-point iteration over the dense (previous, current)
 * state table. Reachability comes from a breadth-first sweep, costs from
 * Bellman-Ford relaxation until nothing changes. Exact for walks of any
 * length.
 *
 * max_hops > 0: depth-first enumeration of every constrained walk with at
 * most max_hops edges that never repeats a directed edge.
 *
 * Throws InstanceTooLarge when the graph has more than `cap` vertices.
 */
inline ReachabilityResult brute_force_reachability(const NeighborhoodGraph& g, std::size_t source,
                                                   const ConstraintSpec& c, std::size_t max_hops = 0,
                                                   std::size_t cap = brute_force_default_cap) {
    const std::size_t n = g.n_vertices();
    if (n > cap) throw InstanceTooLarge("brute-force oracle limited to " + std::to_string(cap) + " vertices");
    if (source >= n) throw DomainError("source vertex out of range");
    c.validate();

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> w(n * n, inf);
    for (std::size_t i = 0; i < n; ++i)
        for (const Edge& e : g.neighbors(i)) w[i * n + e.to] = e.weight;
    auto adjacent = [&](std::size_t a, std::size_t b) { return std::isfinite(w[a * n + b]); };
    auto ok = [&](std::size_t a, std::size_t b, std::size_t d) {
        return detail::oracle_admits(c, g.position(a), g.position(b), g.position(d));
    };

    ReachabilityResult r;
    r.source = source;
    r.reachable.assign(n, false);
    r.cost.assign(n, inf);
    r.paths.assign(n, {});
    r.reachable[source] = true;
    r.cost[source] = 0.0;

    if (max_hops == 0) {
        // State (p, v): at v having arrived from p. Row n is "no predecessor".
        const std::size_t rows = n + 1;
        std::vector<double> dist(rows * n, inf);
        std::vector<std::size_t> back(rows * n, no_vertex);
        dist[n * n + source] = 0.0;

        std::vector<bool> seen(rows * n, false);
        std::deque<std::pair<std::size_t, std::size_t>> queue{{n, source}};
        seen[n * n + source] = true;
        while (!queue.empty()) {
            const auto [p, v] = queue.front();
            queue.pop_front();
            r.reachable[v] = true;
            for (std::size_t x = 0; x < n; ++x) {
                if (!adjacent(v, x) || seen[v * n + x]) continue;
                if (p != n && !ok(p, v, x)) continue;
                seen[v * n + x] = true;
                queue.emplace_back(v, x);
            }
        }

        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t p = 0; p < rows; ++p)
                for (std::size_t v = 0; v < n; ++v) {
                    const double d = dist[p * n + v];
                    if (!std::isfinite(d)) continue;
                    for (std::size_t x = 0; x < n; ++x) {
                        if (!adjacent(v, x)) continue;
                        if (p != n && !ok(p, v, x)) continue;
                        const double nd = d + w[v * n + x];
                        if (nd < dist[v * n + x]) {
                            dist[v * n + x] = nd;
                            back[v * n + x] = p;
                            changed = true;
                        }
                    }
                }
        }

        for (std::size_t v = 0; v < n; ++v) {
            if (v == source) continue;
            std::size_t best_p = no_vertex;
            for (std::size_t p = 0; p < n; ++p)
                if (dist[p * n + v] < r.cost[v]) {
                    r.cost[v] = dist[p * n + v];
                    best_p = p;
                }
            if (best_p == no_vertex) continue;
            std::vector<std::size_t> path{v};
            for (std::size_t p = best_p, cur = v; p != n;) {
                path.push_back(p);
                const std::size_t pp = back[p * n + cur];
                cur = p;
                p = pp;
            }
            r.paths[v].assign(path.rbegin(), path.rend());
        }
        return r;
    }

    std::vector<bool> used(n * n, false);
    std::vector<std::size_t> walk{source};
    std::function<void(double)> extend = [&](double cost) {
        const std::size_t v = walk.back();
        if (cost < r.cost[v]) {
            r.cost[v] = cost;
            r.reachable[v] = true;
            if (v != source) r.paths[v] = walk;
        }
        if (walk.size() > max_hops) return;
        for (std::size_t x = 0; x < n; ++x) {
            if (!adjacent(v, x) || used[v * n + x]) continue;
            if (walk.size() >= 2 && !ok(walk[walk.size() - 2], v, x)) continue;
            used[v * n + x] = true;
            walk.push_back(x);
            extend(cost + w[v * n + x]);
            walk.pop_back();
            used[v * n + x] = false;
        }
    };
    extend(0.0);
    r.cost[source] = 0.0;
    r.paths[source].clear();
    return r;
}

/// Problems found by validate_reachability, empty when the result is sound.
/// Re-checks every stored path: starts at the source, ends at its target,
/// uses graph edges only, passes the constraint at every interior vertex and
/// has the recorded cost (relative tolerance 1e-9).
inline std::vector<std::string> validate_reachability(const NeighborhoodGraph& g, const ConstraintSpec& c,
                                                      const ReachabilityResult& r) {
    std::vector<std::string> problems;
    const std::size_t n = g.n_vertices();
    auto fail = [&](std::size_t v, const std::string& what) {
        problems.push_back("vertex " + std::to_string(v) + ": " + what);
    };
    if (r.reachable.size() != n || r.cost.size() != n) {
        problems.push_back("result size does not match the graph");
        return problems;
    }
    if (!r.reachable[r.source] || r.cost[r.source] != 0.0) fail(r.source, "source must be reachable at cost 0");
    if (!r.has_paths()) return problems;
    if (!r.paths[r.source].empty()) fail(r.source, "source path must be empty");
    for (std::size_t v = 0; v < n; ++v) {
        if (v == r.source) continue;
        const auto& path = r.paths[v];
        if (!r.reachable[v]) {
            if (!path.empty()) fail(v, "unreachable vertex has a path");
            continue;
        }
        if (path.size() < 2 || path.front() != r.source || path.back() != v) {
            fail(v, "path does not run from the source to the vertex");
            continue;
        }
        double total = 0.0;
        bool edges_ok = true;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            if (!g.has_edge(path[k], path[k + 1])) {
                fail(v, "path uses a non-edge");
                edges_ok = false;
                break;
            }
            total += distance(g.position(path[k]), g.position(path[k + 1]));
        }
        if (!edges_ok) continue;
        for (std::size_t k = 1; k + 1 < path.size(); ++k)
            if (!detail::oracle_admits(c, g.position(path[k - 1]), g.position(path[k]), g.position(path[k + 1]))) {
                fail(v, "constraint violated at path position " + std::to_string(k));
                break;
            }
        if (std::abs(total - r.cost[v]) > 1e-9 * std::max(1.0, total)) fail(v, "cost does not match path length");
    }
    return problems;
}

}  // namespace pbc
