#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pbc/error.hpp"

namespace pbc {

/// N x M binary landmark-connectivity matrix, row-major (one row per point).
struct FeatureMatrix {
    std::size_t n_points = 0;
    std::vector<std::size_t> landmarks;  ///< vertex index of each column
    std::vector<std::uint8_t> xi;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t n, std::vector<std::size_t> lm)
        : n_points(n), landmarks(std::move(lm)), xi(n * landmarks.size(), 0) {}

    std::size_t n_landmarks() const noexcept { return landmarks.size(); }
    std::span<const std::uint8_t> row(std::size_t i) const noexcept {
        return {xi.data() + i * n_landmarks(), n_landmarks()};
    }
    std::uint8_t& at(std::size_t i, std::size_t l) noexcept { return xi[i * n_landmarks() + l]; }
    std::uint8_t at(std::size_t i, std::size_t l) const noexcept { return xi[i * n_landmarks() + l]; }
};

inline std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) noexcept {
    std::size_t d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) d += a[k] != b[k];
    return d;
}

/// One agglomeration step over groups of identical feature vectors.
/// Cluster ids are group ids; the merged cluster keeps the lower id `a`.
struct Merge {
    std::size_t a;
    std::size_t b;
    std::size_t distance;
    bool operator==(const Merge&) const = default;
};

struct LinkageResult {
    std::vector<int> labels;                 ///< per point, in [0, k)
    std::vector<std::size_t> group_of_point; ///< index of the point's distinct vector
    std::size_t n_groups = 0;
    std::vector<Merge> merges;               ///< in merge order
};

/// Groups identical rows. Groups are numbered by first occurrence.
inline std::vector<std::size_t> group_identical_rows(const FeatureMatrix& f, std::size_t& n_groups) {
    std::map<std::vector<std::uint8_t>, std::size_t> seen;
    std::vector<std::size_t> group(f.n_points);
    for (std::size_t i = 0; i < f.n_points; ++i) {
        const auto row = f.row(i);
        auto [it, fresh] = seen.try_emplace(std::vector<std::uint8_t>(row.begin(), row.end()), seen.size());
        group[i] = it->second;
    }
    n_groups = seen.size();
    return group;
}

/**
 * Complete-linkage agglomerative clustering of binary feature vectors under
 * Hamming distance, cut at k clusters.
 *
 * Identical vectors are grouped first (they sit at distance 0). Each step
 * merges the pair of active clusters minimizing (distance, a, b) with a < b;
 * the result keeps id a. Final labels are numbered by first point.
 *
 * Throws TooFewDistinctVectors when there are fewer than k distinct rows.
 */
inline LinkageResult hierarchical_complete_linkage(const FeatureMatrix& features, std::size_t k) {
    if (k == 0) throw DomainError("cluster count must be at least 1");
    if (features.n_points < k) throw DomainError("fewer points than requested clusters");

    LinkageResult out;
    out.group_of_point = group_identical_rows(features, out.n_groups);
    const std::size_t n = out.n_groups;
    if (n < k)
        throw TooFewDistinctVectors("only " + std::to_string(n) + " distinct feature vectors for " + std::to_string(k) +
                                    " clusters; use more landmarks or a looser constraint");

    std::vector<std::size_t> representative(n);
    for (std::size_t i = features.n_points; i-- > 0;) representative[out.group_of_point[i]] = i;

    std::vector<std::size_t> dist(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist[i * n + j] = dist[j * n + i] =
                hamming(features.row(representative[i]), features.row(representative[j]));

    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<bool> active(n, true);
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    // Per active row i: nearest active j > i by (distance, j).
    std::vector<std::size_t> nearest(n, none), nearest_d(n, none);
    auto refresh = [&](std::size_t i) {
        nearest[i] = none;
        nearest_d[i] = none;
        for (std::size_t j = i + 1; j < n; ++j)
            if (active[j] && dist[i * n + j] < nearest_d[i]) {
                nearest_d[i] = dist[i * n + j];
                nearest[i] = j;
            }
    };
    for (std::size_t i = 0; i < n; ++i) refresh(i);

    for (std::size_t step = 0; step + k < n; ++step) {
        std::size_t a = none;
        for (std::size_t i = 0; i < n; ++i)
            if (active[i] && nearest[i] != none && (a == none || nearest_d[i] < nearest_d[a])) a = i;
        const std::size_t b = nearest[a];
        out.merges.push_back({a, b, nearest_d[a]});
        active[b] = false;
        parent[b] = a;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t d = std::max(dist[a * n + j], dist[b * n + j]);
            dist[a * n + j] = dist[j * n + a] = d;
        }
        refresh(a);
        for (std::size_t i = 0; i < a; ++i)
            if (active[i] && (nearest[i] == a || nearest[i] == b)) refresh(i);
        for (std::size_t i = a + 1; i < b; ++i)
            if (active[i] && nearest[i] == b) refresh(i);
    }

    auto root = [&](std::size_t g) {
        while (parent[g] != g) g = parent[g];
        return g;
    };
    std::vector<int> cluster_label(n, -1);
    int next = 0;
    out.labels.resize(features.n_points);
    for (std::size_t i = 0; i < features.n_points; ++i) {
        const std::size_t r = root(out.group_of_point[i]);
        if (cluster_label[r] < 0) cluster_label[r] = next++;
        out.labels[i] = cluster_label[r];
    }
    return out;
}

}  // namespace pbc
