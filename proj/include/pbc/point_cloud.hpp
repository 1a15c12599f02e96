#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "pbc/error.hpp"

namespace pbc {

using Point = std::span<const double>;

/// N points in R^D stored row-major, with optional ground-truth labels and
/// ambiguity flags (both empty when absent).
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw DomainError("point dimension must be at least 1");
    }
    PointCloud(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
        if (dim == 0) throw DomainError("point dimension must be at least 1");
        if (coords_.size() % dim != 0) throw DomainError("coordinate count is not a multiple of the dimension");
        for (double c : coords_)
            if (!std::isfinite(c)) throw DomainError("point coordinates must be finite");
    }

    std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return size() == 0; }

    Point operator[](std::size_t i) const noexcept { return {coords_.data() + i * dim_, dim_}; }
    std::span<double> mutable_point(std::size_t i) noexcept { return {coords_.data() + i * dim_, dim_}; }

    void push_back(Point p) {
        if (p.size() != dim_) throw DomainError("point dimension mismatch");
        for (double c : p)
            if (!std::isfinite(c)) throw DomainError("point coordinates must be finite");
        coords_.insert(coords_.end(), p.begin(), p.end());
    }

    const std::vector<double>& coords() const noexcept { return coords_; }

    bool has_labels() const noexcept { return !labels.empty(); }
    bool has_ambiguous() const noexcept { return !ambiguous.empty(); }

    std::vector<int> labels;
    std::vector<bool> ambiguous;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

inline double squared_distance(Point a, Point b) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

inline double distance(Point a, Point b) noexcept { return std::sqrt(squared_distance(a, b)); }

/// Length of the diagonal of the axis-aligned bounding box.
inline double bounding_box_diagonal(const PointCloud& cloud) {
    if (cloud.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < cloud.dim(); ++k) {
        double lo = cloud[0][k], hi = cloud[0][k];
        for (std::size_t i = 1; i < cloud.size(); ++i) {
            lo = std::min(lo, cloud[i][k]);
            hi = std::max(hi, cloud[i][k]);
        }
        s += (hi - lo) * (hi - lo);
    }
    return std::sqrt(s);
}

/// Result of removing exact duplicate points.
struct Deduplication {
    PointCloud cloud;                  ///< first occurrences, original order
    std::vector<std::size_t> kept;     ///< original index of each kept point
    std::vector<std::size_t> mapping;  ///< original index -> index in `cloud`
};

/// Indices of points sorted lexicographically by coordinates (ties by index).
inline std::vector<std::size_t> lexicographic_order(const PointCloud& cloud) {
    std::vector<std::size_t> order(cloud.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Point pa = cloud[a], pb = cloud[b];
        for (std::size_t k = 0; k < cloud.dim(); ++k)
            if (pa[k] != pb[k]) return pa[k] < pb[k];
        return a < b;
    });
    return order;
}

inline bool has_duplicate_points(const PointCloud& cloud) {
    const auto order = lexicographic_order(cloud);
    for (std::size_t r = 1; r < order.size(); ++r) {
        const Point a = cloud[order[r - 1]], b = cloud[order[r]];
        if (std::equal(a.begin(), a.end(), b.begin())) return true;
    }
    return false;
}

/// Keeps the first occurrence of each distinct point. Labels and ambiguity
/// flags follow the kept points.
inline Deduplication deduplicate(const PointCloud& cloud) {
    const auto order = lexicographic_order(cloud);
    std::vector<std::size_t> representative(cloud.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        if (r > 0) {
            const Point a = cloud[order[r - 1]], b = cloud[order[r]];
            if (std::equal(a.begin(), a.end(), b.begin())) {
                representative[order[r]] = representative[order[r - 1]];
                continue;
            }
        }
        representative[order[r]] = order[r];
    }

    Deduplication out{PointCloud(cloud.dim()), {}, std::vector<std::size_t>(cloud.size())};
    std::vector<std::size_t> new_index(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (representative[i] == i) {
            new_index[i] = out.kept.size();
            out.kept.push_back(i);
            out.cloud.push_back(cloud[i]);
            if (cloud.has_labels()) out.cloud.labels.push_back(cloud.labels[i]);
            if (cloud.has_ambiguous()) out.cloud.ambiguous.push_back(cloud.ambiguous[i]);
        }
        out.mapping[i] = new_index[representative[i]];
    }
    return out;
}

}  // namespace pbc
