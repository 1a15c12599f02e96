#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "pbc/accuracy.hpp"
#include "pbc/constrained_path.hpp"
#include "pbc/error.hpp"
#include "pbc/linkage.hpp"
#include "pbc/neighborhood_graph.hpp"
#include "pbc/parallel.hpp"
#include "pbc/random.hpp"

namespace pbc {

/// Parameters of a path-based clustering run.
struct PBCConfig {
    GraphConfig graph = GraphConfig::knn(10);
    std::size_t k = 2;                ///< clusters
    std::size_t m = 0;                ///< landmarks; 0 selects default_landmarks(k)
    ConstraintSpec constraint = ConstraintSpec{ConstraintKind::angle, std::numbers::pi * 50.0 / 180.0};
    Engine engine = Engine::greedy;
    std::uint64_t seed = 1;
    bool dedupe = false;              ///< drop duplicate points instead of rejecting the cloud
    bool stratified_landmarks = false;///< needs ground-truth labels on the cloud

    static std::size_t default_landmarks(std::size_t k) { return std::max(2 * k, k + 5); }
    std::size_t landmarks() const { return m == 0 ? default_landmarks(k) : m; }

    void validate() const {
        if (k < 1) throw DomainError("k must be at least 1");
        if (landmarks() < k) throw DomainError("landmark count m must be at least k");
        constraint.validate();
    }
};

/// M distinct indices drawn uniformly without replacement from [0, n).
inline std::vector<std::size_t> select_landmarks(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m > n) throw DomainError("cannot select more landmarks than points");
    Rng rng(mix_seed(seed, 0x4C4D));
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < m; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
    pool.resize(m);
    return pool;
}

/// Landmarks spread round-robin over the classes of `labels` (classes in
/// ascending label order, members in random order).
inline std::vector<std::size_t> select_landmarks_stratified(const std::vector<int>& labels, std::size_t m,
                                                            std::uint64_t seed) {
    if (m > labels.size()) throw DomainError("cannot select more landmarks than points");
    std::map<int, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < labels.size(); ++i) classes[labels[i]].push_back(i);
    Rng rng(mix_seed(seed, 0x5354));
    for (auto& [label, members] : classes)
        for (std::size_t i = 0; i + 1 < members.size(); ++i)
            std::swap(members[i], members[i + rng.below(members.size() - i)]);
    std::vector<std::size_t> out;
    for (std::size_t round = 0; out.size() < m; ++round)
        for (auto& [label, members] : classes)
            if (round < members.size() && out.size() < m) out.push_back(members[round]);
    return out;
}

/// xi[i][l] = 1 iff vertex i is reachable from landmark l under `c`.
inline FeatureMatrix build_features(const NeighborhoodGraph& g, const std::vector<std::size_t>& landmarks,
                                    const ConstraintSpec& c, Engine engine) {
    {
        auto sorted = landmarks;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw DomainError("landmarks must be distinct");
    }
    FeatureMatrix f(g.n_vertices(), landmarks);
    parallel_for(landmarks.size(), [&](std::size_t l) {
        const auto r = constrained_reachability(g, landmarks[l], c, engine);
        for (std::size_t i = 0; i < g.n_vertices(); ++i) f.at(i, l) = r.reachable[i] ? 1 : 0;
    });
    return f;
}

struct ClusteringResult {
    std::vector<int> labels;             ///< per input point, in [0, k)
    std::vector<std::size_t> landmarks;  ///< input point indices
    FeatureMatrix features;              ///< rows follow the clustered (deduplicated) points
    std::vector<std::size_t> cluster_sizes;
    std::size_t n_distinct_vectors = 0;
    std::size_t n_unreached = 0;         ///< points reached by no landmark
    std::size_t n_edges = 0;
    std::size_t max_degree = 0;
    std::size_t n_components = 0;
    std::vector<std::string> warnings;
    double seconds_graph = 0.0;
    double seconds_features = 0.0;
    double seconds_linkage = 0.0;
};

namespace detail {

template <class F>
auto tagged(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (Error& e) {
        if (e.stage().empty()) e.set_stage(stage);
        throw;
    }
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Landmark selection, features and linkage on a prepared graph.
inline void cluster_on_graph(const NeighborhoodGraph& g, const std::vector<int>& labels_for_strata,
                             const PBCConfig& config, ClusteringResult& out) {
    const std::size_t m = config.landmarks();
    out.landmarks = tagged("select_landmarks", [&] {
        return config.stratified_landmarks ? select_landmarks_stratified(labels_for_strata, m, config.seed)
                                           : select_landmarks(g.n_vertices(), m, config.seed);
    });
    auto t0 = std::chrono::steady_clock::now();
    out.features = tagged("build_features", [&] { return build_features(g, out.landmarks, config.constraint, config.engine); });
    out.seconds_features = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const LinkageResult link = tagged("linkage", [&] { return hierarchical_complete_linkage(out.features, config.k); });
    out.seconds_linkage = seconds_since(t0);
    out.labels = link.labels;
    out.n_distinct_vectors = link.n_groups;

    out.n_unreached = 0;
    for (std::size_t i = 0; i < g.n_vertices(); ++i) {
        const auto row = out.features.row(i);
        if (std::all_of(row.begin(), row.end(), [](std::uint8_t b) { return b == 0; })) ++out.n_unreached;
    }
    out.cluster_sizes.assign(config.k, 0);
    std::vector<bool> has_landmark(config.k, false);
    for (int l : out.labels) ++out.cluster_sizes[static_cast<std::size_t>(l)];
    for (std::size_t lm : out.landmarks) has_landmark[static_cast<std::size_t>(out.labels[lm])] = true;
    for (std::size_t c = 0; c < config.k; ++c)
        if (!has_landmark[c])
            out.warnings.push_back("cluster " + std::to_string(c) + " contains no landmark");
    if (out.n_unreached > 0)
        out.warnings.push_back(std::to_string(out.n_unreached) + " points are reached by no landmark");
}

}  // namespace detail

/**
 * Path-based clustering: neighborhood graph, random landmarks, binary
 * constrained-reachability features, complete-linkage clustering into k
 * groups. Deterministic for a fixed seed. Errors carry the failing stage.
 */
inline ClusteringResult run_pbc(const PointCloud& cloud, const PBCConfig& config) {
    detail::tagged("config", [&] {
        config.validate();
        if (cloud.empty()) throw DomainError("point cloud is empty");
        if (config.stratified_landmarks && !cloud.has_labels())
            throw DomainError("stratified landmarks need ground-truth labels");
        return 0;
    });

    const bool dup = config.dedupe && has_duplicate_points(cloud);
    const Deduplication dd = dup ? deduplicate(cloud) : Deduplication{};
    const PointCloud& work = dup ? dd.cloud : cloud;

    ClusteringResult out;
    auto t0 = std::chrono::steady_clock::now();
    const NeighborhoodGraph g = detail::tagged("build_graph", [&] { return build_graph(work, config.graph); });
    out.seconds_graph = detail::seconds_since(t0);
    out.n_edges = g.n_edges();
    out.max_degree = g.max_degree();
    {
        const auto comp = connected_components(g);
        out.n_components = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    }
    detail::cluster_on_graph(g, work.labels, config, out);

    if (dup) {
        std::vector<int> labels(cloud.size());
        for (std::size_t i = 0; i < cloud.size(); ++i) labels[i] = out.labels[dd.mapping[i]];
        out.labels = std::move(labels);
        for (auto& lm : out.landmarks) lm = dd.kept[lm];
        out.warnings.push_back(std::to_string(cloud.size() - dd.cloud.size()) + " duplicate points merged");
    }
    return out;
}

struct TuneStep {
    double theta;
    double error;
};

struct TuneResult {
    ConstraintSpec constraint;
    double error = 1.0;
    std::vector<TuneStep> trace;  ///< every evaluation, in order (first = initial angle)
};

inline constexpr double default_initial_angle = std::numbers::pi * 50.0 / 180.0;

/**
 * Angle search driven by an error function. Starting from `initial`, the
 * angle is halved while the error strictly decreases; once it does not, the
 * best angle is multiplied by 4/3 while the error strictly decreases. At most
 * `max_iters` probes follow the initial evaluation. Returns the best angle.
 */
inline TuneResult tune_angle(const std::function<double(double)>& error_of, double initial = default_initial_angle,
                             std::size_t max_iters = 10) {
    if (!(initial > 0.0 && initial < std::numbers::pi)) throw DomainError("initial angle must lie in (0, pi)");
    TuneResult out;
    double best_theta = initial;
    double best_error = error_of(initial);
    out.trace.push_back({initial, best_error});
    std::size_t probes = 0;

    for (const double factor : {0.5, 4.0 / 3.0}) {
        while (probes < max_iters) {
            const double theta = best_theta * factor;
            if (!(theta < std::numbers::pi)) break;
            const double e = error_of(theta);
            ++probes;
            out.trace.push_back({theta, e});
            if (!(e < best_error)) break;
            best_theta = theta;
            best_error = e;
        }
    }
    out.constraint = ConstraintSpec::angle(best_theta);
    out.error = best_error;
    return out;
}

/// Points drawn per ground-truth class: ceil(fraction * class size), at
/// least one each.
inline std::vector<bool> sample_labeled_subset(const std::vector<int>& labels, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("labeled fraction must lie in (0, 1]");
    if (labels.empty()) throw DomainError("labeled subset needs ground-truth labels");
    std::map<int, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < labels.size(); ++i) classes[labels[i]].push_back(i);
    Rng rng(mix_seed(seed, 0x4C42));
    std::vector<bool> chosen(labels.size(), false);
    for (auto& [label, members] : classes) {
        const auto take = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(members.size()))));
        for (std::size_t i = 0; i < take; ++i) {
            std::swap(members[i], members[i + rng.below(members.size() - i)]);
            chosen[members[i]] = true;
        }
    }
    return chosen;
}

/**
 * Semi-supervised angle tuning: the error at each probed angle is the
 * misclustering rate of a full clustering run, measured on a labeled subset
 * sampled per class. The graph is built once and reused; the configured
 * constraint is replaced by angle constraints.
 */
inline TuneResult tune_constraint(const PointCloud& cloud, const PBCConfig& config, double labeled_fraction = 0.01,
                                  double initial_theta = default_initial_angle, std::size_t max_iters = 10) {
    if (!cloud.has_labels()) throw DomainError("tuning needs ground-truth labels");
    const auto labeled = sample_labeled_subset(cloud.labels, labeled_fraction, config.seed);
    std::vector<bool> excluded(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) excluded[i] = !labeled[i];

    const NeighborhoodGraph g = detail::tagged("build_graph", [&] { return build_graph(cloud, config.graph); });
    auto error_of = [&](double theta) {
        PBCConfig probe = config;
        probe.constraint = ConstraintSpec::angle(theta);
        ClusteringResult r;
        try {
            detail::cluster_on_graph(g, cloud.labels, probe, r);
        } catch (const TooFewDistinctVectors&) {
            return 1.0;
        }
        return 1.0 - misclustering_rate(r.labels, cloud.labels, excluded).accuracy;
    };
    return tune_angle(error_of, initial_theta, max_iters);
}

}  // namespace pbc
