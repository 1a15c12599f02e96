#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "pbc/constraint.hpp"
#include "pbc/error.hpp"
#include "pbc/geometry.hpp"
#include "pbc/neighborhood_graph.hpp"

namespace pbc {

inline constexpr std::size_t no_vertex = std::numeric_limits<std::size_t>::max();
inline constexpr double infinite_cost = std::numeric_limits<double>::infinity();

/// Constrained reachability from one source vertex.
struct ReachabilityResult {
    std::size_t source = no_vertex;
    std::vector<bool> reachable;
    std::vector<double> cost;                     ///< infinite_cost when unreachable
    std::vector<std::vector<std::size_t>> paths;  ///< filled only when requested; empty for the source

    std::size_t reachable_count() const {
        return static_cast<std::size_t>(std::count(reachable.begin(), reachable.end(), true));
    }
    bool has_paths() const { return !paths.empty(); }
};

enum class Engine { greedy, exact };

inline std::string to_string(Engine e) { return e == Engine::greedy ? "greedy" : "exact"; }

inline Engine parse_engine(const std::string& s) {
    if (s == "greedy") return Engine::greedy;
    if (s == "exact") return Engine::exact;
    throw DomainError("unknown engine '" + s + "' (expected greedy or exact)");
}

struct SearchOptions {
    bool record_paths = false;
    /// When set, receives one line per settled label and per rejected
    /// relaxation: `settle <v> <parent> <cost>` / `reject <parent> <v> <w>`.
    std::ostream* trace = nullptr;
};

namespace detail {

inline bool admits(const NeighborhoodGraph& g, const ConstraintSpec& c, std::size_t u, std::size_t v, std::size_t w) {
    return c.admits({g.position(u), g.position(v), g.position(w)});
}

inline void check_source(const NeighborhoodGraph& g, std::size_t source) {
    if (source >= g.n_vertices()) throw DomainError("source vertex out of range");
}

inline void trace_settle(std::ostream* out, std::size_t v, std::size_t parent, double cost) {
    if (!out) return;
    *out << "settle " << v << ' ';
    if (parent == no_vertex) *out << '-';
    else *out << parent;
    *out << ' ' << std::setprecision(17) << cost << '\n';
}

inline void trace_reject(std::ostream* out, std::size_t u, std::size_t v, std::size_t w) {
    if (out) *out << "reject " << u << ' ' << v << ' ' << w << '\n';
}

}  // namespace detail

/**
 * Single-label constrained Dijkstra.
 *
 * Every vertex is settled at most once, with one parent. When vertex t is
 * settled with parent p, a neighbor w is relaxed only if the triplet
 * (p, t, w) satisfies the constraint (no check when t is the source).
 * Settled vertices are never revisited, so a vertex whose cheapest admissible
 * arrival direction blocks an extension hides any costlier route that would
 * have allowed it. Priority order is (cost, vertex, parent).
 *
 * O(Delta N log N) per source.
 */
inline ReachabilityResult greedy_constrained_dijkstra(const NeighborhoodGraph& g, std::size_t source,
                                                      const ConstraintSpec& c, const SearchOptions& opt = {}) {
    detail::check_source(g, source);
    c.validate();
    const std::size_t n = g.n_vertices();

    using Label = std::tuple<double, std::size_t, std::size_t>;  // cost, vertex, parent
    std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
    std::vector<double> best(n, infinite_cost);
    std::vector<std::size_t> parent(n, no_vertex);
    std::vector<bool> settled(n, false);

    ReachabilityResult r;
    r.source = source;
    r.reachable.assign(n, false);
    r.cost.assign(n, infinite_cost);

    best[source] = 0.0;
    heap.emplace(0.0, source, no_vertex);
    while (!heap.empty()) {
        const auto [cost, t, p] = heap.top();
        heap.pop();
        if (settled[t]) continue;
        settled[t] = true;
        parent[t] = p;
        r.reachable[t] = true;
        r.cost[t] = cost;
        detail::trace_settle(opt.trace, t, p, cost);
        for (const Edge& e : g.neighbors(t)) {
            if (settled[e.to]) continue;
            const double nc = cost + e.weight;
            if (nc > best[e.to]) continue;
            if (t != source && !detail::admits(g, c, p, t, e.to)) {
                detail::trace_reject(opt.trace, p, t, e.to);
                continue;
            }
            best[e.to] = nc;
            heap.emplace(nc, e.to, t);
        }
    }

    if (opt.record_paths) {
        r.paths.assign(n, {});
        for (std::size_t v = 0; v < n; ++v) {
            if (!r.reachable[v] || v == source) continue;
            auto& path = r.paths[v];
            for (std::size_t x = v; x != no_vertex; x = parent[x]) path.push_back(x);
            std::reverse(path.begin(), path.end());
        }
    }
    return r;
}

/**
 * Exact constrained shortest paths by label-setting search over directed
 * edge states. State (u, v) means "at v, arrived from u"; it moves to
 * (v, w) iff the triplet (u, v, w) satisfies the constraint. The source is
 * a virtual state with no predecessor that admits any first edge. Because
 * the constraint only couples consecutive edges, the cheapest state into
 * each vertex gives the exact constrained distance and exact reachability.
 *
 * Returned paths are walks and may repeat vertices. O(Delta^2 N log(Delta N)).
 */
inline ReachabilityResult exact_constrained_dijkstra(const NeighborhoodGraph& g, std::size_t source,
                                                     const ConstraintSpec& c, const SearchOptions& opt = {}) {
    detail::check_source(g, source);
    c.validate();
    const std::size_t n = g.n_vertices();
    const std::size_t n_states = g.n_directed_edges();

    // cost, head vertex, tail vertex, predecessor tail, state id, predecessor state
    using Label = std::tuple<double, std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;
    std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
    std::vector<double> best(n_states, infinite_cost);
    std::vector<bool> done(n_states, false);
    std::vector<std::size_t> pred(n_states, no_vertex);
    std::vector<std::size_t> tail(n_states, no_vertex);
    std::vector<std::size_t> entry_state(n, no_vertex);

    ReachabilityResult r;
    r.source = source;
    r.reachable.assign(n, false);
    r.cost.assign(n, infinite_cost);
    r.reachable[source] = true;
    r.cost[source] = 0.0;
    detail::trace_settle(opt.trace, source, no_vertex, 0.0);

    const auto src_edges = g.neighbors(source);
    for (std::size_t k = 0; k < src_edges.size(); ++k) {
        const std::size_t id = g.edge_id(source, k);
        best[id] = src_edges[k].weight;
        heap.emplace(src_edges[k].weight, src_edges[k].to, source, no_vertex, id, no_vertex);
    }

    while (!heap.empty()) {
        const auto [cost, v, u, pu, id, pid] = heap.top();
        heap.pop();
        if (done[id]) continue;
        done[id] = true;
        pred[id] = pid;
        tail[id] = u;
        if (!r.reachable[v]) {
            r.reachable[v] = true;
            r.cost[v] = cost;
            entry_state[v] = id;
            detail::trace_settle(opt.trace, v, u, cost);
        }
        const auto nb = g.neighbors(v);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const std::size_t next = g.edge_id(v, k);
            if (done[next]) continue;
            const double nc = cost + nb[k].weight;
            if (nc > best[next]) continue;
            if (!detail::admits(g, c, u, v, nb[k].to)) {
                detail::trace_reject(opt.trace, u, v, nb[k].to);
                continue;
            }
            best[next] = nc;
            heap.emplace(nc, nb[k].to, v, u, next, id);
        }
    }

    if (opt.record_paths) {
        r.paths.assign(n, {});
        for (std::size_t v = 0; v < n; ++v) {
            if (!r.reachable[v] || v == source) continue;
            auto& path = r.paths[v];
            path.push_back(v);
            for (std::size_t s = entry_state[v]; s != no_vertex; s = pred[s]) path.push_back(tail[s]);
            std::reverse(path.begin(), path.end());
        }
    }
    return r;
}

inline ReachabilityResult constrained_reachability(const NeighborhoodGraph& g, std::size_t source,
                                                   const ConstraintSpec& c, Engine engine,
                                                   const SearchOptions& opt = {}) {
    return engine == Engine::greedy ? greedy_constrained_dijkstra(g, source, c, opt)
                                    : exact_constrained_dijkstra(g, source, c, opt);
}

/// Plain Dijkstra distances, with (cost, vertex, parent) tie-breaking.
/// Returns costs and parents (no_vertex for the source and unreachable).
struct ShortestPathTree {
    std::vector<double> cost;
    std::vector<std::size_t> parent;
};

inline ShortestPathTree dijkstra(const NeighborhoodGraph& g, std::size_t source) {
    detail::check_source(g, source);
    const std::size_t n = g.n_vertices();
    using Label = std::tuple<double, std::size_t, std::size_t>;
    std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
    std::vector<double> best(n, infinite_cost);
    std::vector<bool> settled(n, false);
    ShortestPathTree tree{std::vector<double>(n, infinite_cost), std::vector<std::size_t>(n, no_vertex)};
    best[source] = 0.0;
    heap.emplace(0.0, source, no_vertex);
    while (!heap.empty()) {
        const auto [cost, t, p] = heap.top();
        heap.pop();
        if (settled[t]) continue;
        settled[t] = true;
        tree.cost[t] = cost;
        tree.parent[t] = p;
        for (const Edge& e : g.neighbors(t)) {
            const double nc = cost + e.weight;
            if (settled[e.to] || nc > best[e.to]) continue;
            best[e.to] = nc;
            heap.emplace(nc, e.to, t);
        }
    }
    return tree;
}

/// Wall time of a single-source run.
struct TimingRecord {
    Engine engine = Engine::greedy;
    std::size_t n_vertices = 0;
    std::size_t max_degree = 0;
    std::size_t reachable = 0;
    double seconds = 0.0;  ///< best of `repeats` runs
};

inline TimingRecord per_source_complexity_probe(const NeighborhoodGraph& g, Engine engine, const ConstraintSpec& c,
                                                std::size_t source = 0, std::size_t repeats = 1) {
    TimingRecord rec{engine, g.n_vertices(), g.max_degree(), 0, infinite_cost};
    for (std::size_t i = 0; i < std::max<std::size_t>(repeats, 1); ++i) {
        const auto start = std::chrono::steady_clock::now();
        const auto r = constrained_reachability(g, source, c, engine);
        const auto stop = std::chrono::steady_clock::now();
        rec.reachable = r.reachable_count();
        rec.seconds = std::min(rec.seconds, std::chrono::duration<double>(stop - start).count());
    }
    return rec;
}

}  // namespace pbc
