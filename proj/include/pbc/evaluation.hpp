#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pbc/accuracy.hpp"
#include "pbc/clustering.hpp"
#include "pbc/constrained_path.hpp"
#include "pbc/geometry.hpp"
#include "pbc/synthdata.hpp"

namespace pbc {

// ---------------------------------------------------------------- noise sweep

struct SweepRun {
    std::uint64_t seed;
    double accuracy;
    std::size_t n_excluded;
    bool degenerate;  ///< clustering fell back to a single cluster
};

struct SweepRow {
    double tau = 0.0;
    double mean_accuracy = 0.0;
    double std = 0.0;  ///< sample standard deviation, 0 for a single run
    std::vector<SweepRun> runs;
};

/// Seed of run `r` at level `level` of a sweep over `repeats` repeats.
inline std::uint64_t sweep_seed(std::uint64_t base, std::size_t level, std::size_t r, std::size_t repeats) {
    return base + 1 + level * repeats + r;
}

/// Converts noise levels expressed as fractions of the clean dataset's
/// bounding-box diagonal into absolute radii.
inline std::vector<double> relative_noise_to_tau(const DatasetSpec& base, const std::vector<double>& levels) {
    DatasetSpec clean = base;
    clean.noise = 0.0;
    const double diag = bounding_box_diagonal(sample_dataset(clean).points);
    std::vector<double> taus;
    for (double l : levels) taus.push_back(l * diag);
    return taus;
}

/// Accuracy of one clustering run on one regenerated dataset, ambiguous
/// points excluded. Runs with too few distinct feature vectors count as a
/// single cluster.
inline SweepRun evaluate_once(const DatasetSpec& spec, const PBCConfig& config) {
    const LabeledCloud data = sample_dataset(spec);
    PBCConfig c = config;
    c.seed = spec.seed;
    std::vector<int> labels;
    bool degenerate = false;
    try {
        labels = run_pbc(data.points, c).labels;
    } catch (const TooFewDistinctVectors&) {
        labels.assign(data.points.size(), 0);
        degenerate = true;
    }
    const auto rep = misclustering_rate(labels, data.points.labels, data.points.ambiguous);
    return {spec.seed, rep.accuracy, rep.n_excluded, degenerate};
}

/**
 * For each noise radius, regenerates the dataset `repeats` times with
 * distinct seeds, clusters it and aggregates accuracy.
 */
inline std::vector<SweepRow> noise_sweep(const DatasetSpec& base, const std::vector<double>& taus,
                                         const PBCConfig& config, std::size_t repeats) {
    if (repeats == 0) throw DomainError("repeats must be positive");
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] >= 0.0)) throw DomainError("noise levels must be non-negative");
        if (i > 0 && taus[i] < taus[i - 1]) throw DomainError("noise levels must be ascending");
    }
    std::vector<SweepRow> rows;
    for (std::size_t li = 0; li < taus.size(); ++li) {
        SweepRow row;
        row.tau = taus[li];
        for (std::size_t r = 0; r < repeats; ++r) {
            DatasetSpec spec = base;
            spec.noise = taus[li];
            spec.seed = sweep_seed(base.seed, li, r, repeats);
            row.runs.push_back(evaluate_once(spec, config));
        }
        double sum = 0;
        for (const auto& run : row.runs) sum += run.accuracy;
        row.mean_accuracy = sum / static_cast<double>(repeats);
        double ss = 0;
        for (const auto& run : row.runs) ss += (run.accuracy - row.mean_accuracy) * (run.accuracy - row.mean_accuracy);
        row.std = repeats > 1 ? std::sqrt(ss / static_cast<double>(repeats - 1)) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "tau,mean_accuracy,std,n_runs\n";
    std::ostringstream line;
    line << std::setprecision(17);
    for (const auto& r : rows) {
        line.str("");
        line << r.tau << ',' << r.mean_accuracy << ',' << r.std << ',' << r.runs.size() << '\n';
        out << line.str();
    }
}

// ------------------------------------------------------ max-angle histogram

struct HistogramBucket {
    double lo;
    double hi;
    std::size_t count;
    int component;  ///< ground-truth label of the counted vertices, -1 when unlabeled
};

struct MaxAngleHistogram {
    /// Per vertex: largest turn angle along its unconstrained shortest path
    /// from the landmark (NaN when unreachable, 0 for paths of < 2 edges).
    std::vector<double> max_angle;
    std::vector<HistogramBucket> buckets;
    std::size_t reachable = 0;
};

/**
 * Runs plain Dijkstra from `landmark` and records, per vertex, the maximum
 * turn angle along its shortest path. Angles are bucketed uniformly over
 * [0, pi]; with `labels` the buckets are split by ground-truth label.
 */
inline MaxAngleHistogram max_angle_histogram(const NeighborhoodGraph& g, std::size_t landmark,
                                             const std::vector<int>& labels = {}, std::size_t n_buckets = 18) {
    if (landmark >= g.n_vertices()) throw DomainError("landmark out of range");
    if (n_buckets == 0) throw DomainError("bucket count must be positive");
    if (!labels.empty() && labels.size() != g.n_vertices()) throw DomainError("label count differs from vertex count");
    const ShortestPathTree tree = dijkstra(g, landmark);
    const std::size_t n = g.n_vertices();

    MaxAngleHistogram out;
    out.max_angle.assign(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::size_t> order;
    for (std::size_t v = 0; v < n; ++v)
        if (std::isfinite(tree.cost[v])) order.push_back(v);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::pair(tree.cost[a], a) < std::pair(tree.cost[b], b); });
    for (std::size_t v : order) {
        const std::size_t p = tree.parent[v];
        if (p == no_vertex || tree.parent[p] == no_vertex) {
            out.max_angle[v] = 0.0;
            continue;
        }
        const double a = turn_angle({g.position(tree.parent[p]), g.position(p), g.position(v)});
        out.max_angle[v] = std::max(out.max_angle[p], a);
    }
    out.reachable = order.size();

    std::vector<int> groups{-1};
    if (!labels.empty()) {
        groups = labels;
        std::sort(groups.begin(), groups.end());
        groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    }
    const double width = std::numbers::pi / static_cast<double>(n_buckets);
    for (int group : groups) {
        std::vector<std::size_t> counts(n_buckets, 0);
        for (std::size_t v : order) {
            if (!labels.empty() && labels[v] != group) continue;
            const auto b = std::min(n_buckets - 1, static_cast<std::size_t>(out.max_angle[v] / width));
            ++counts[b];
        }
        for (std::size_t b = 0; b < n_buckets; ++b)
            out.buckets.push_back({b * width, (b + 1) * width, counts[b], group});
    }
    return out;
}

/// Sum over buckets of min(p_a, p_b) for the normalized histograms of two
/// groups; 0 for disjoint support, 1 for identical distributions.
inline double overlap_coefficient(const MaxAngleHistogram& h, int group_a, int group_b) {
    std::map<double, std::pair<double, double>> by_lo;
    double ta = 0, tb = 0;
    for (const auto& b : h.buckets) {
        if (b.component == group_a) {
            by_lo[b.lo].first += static_cast<double>(b.count);
            ta += static_cast<double>(b.count);
        }
        if (b.component == group_b) {
            by_lo[b.lo].second += static_cast<double>(b.count);
            tb += static_cast<double>(b.count);
        }
    }
    if (ta == 0 || tb == 0) throw DomainError("overlap needs two non-empty groups");
    double s = 0;
    for (const auto& [lo, ab] : by_lo) s += std::min(ab.first / ta, ab.second / tb);
    return s;
}

inline void write_histogram_csv(std::ostream& out, const MaxAngleHistogram& h) {
    out << "bucket_lo,bucket_hi,count,component\n";
    std::ostringstream line;
    line << std::setprecision(17);
    for (const auto& b : h.buckets) {
        line.str("");
        line << b.lo << ',' << b.hi << ',' << b.count << ',' << b.component << '\n';
        out << line.str();
    }
}

}  // namespace pbc
