#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <queue>
#include <utility>
#include <vector>

#include "pbc/point_cloud.hpp"

namespace pbc {

/// Exact k-d tree over a point cloud (which must outlive the tree).
/// Queries return the same neighbors as an exhaustive scan: candidates are
/// ordered by (squared distance, index).
class KdTree {
public:
    static constexpr std::size_t leaf_size = 12;

    explicit KdTree(const PointCloud& cloud) : cloud_(&cloud), index_(cloud.size()) {
        std::iota(index_.begin(), index_.end(), std::size_t{0});
        if (!index_.empty()) {
            nodes_.reserve(2 * cloud.size() / leaf_size + 2);
            build(0, index_.size());
        }
    }

    /// The k nearest points to `query` other than `exclude`, sorted by
    /// (squared distance, index).
    std::vector<std::pair<double, std::size_t>> nearest(Point query, std::size_t k, std::size_t exclude) const {
        Heap heap;
        if (!nodes_.empty() && k > 0) search_knn(0, query, k, exclude, heap);
        std::vector<std::pair<double, std::size_t>> out;
        out.reserve(heap.size());
        while (!heap.empty()) {
            out.push_back(heap.top());
            heap.pop();
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    /// Indices of all points with squared distance <= radius2 from `query`.
    std::vector<std::size_t> within(Point query, double radius2) const {
        std::vector<std::size_t> out;
        if (!nodes_.empty()) search_radius(0, query, radius2, out);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    using Heap = std::priority_queue<std::pair<double, std::size_t>>;

    struct Node {
        std::size_t begin, end;
        std::size_t left = 0, right = 0;  // 0 = leaf (root is never a child)
        std::size_t axis = 0;
        double split = 0.0;
        std::vector<double> lo, hi;       // bounding box
    };

    std::size_t build(std::size_t begin, std::size_t end) {
        const std::size_t id = nodes_.size();
        nodes_.push_back(Node{begin, end, 0, 0, 0, 0.0, {}, {}});
        const std::size_t dim = cloud_->dim();
        std::vector<double> lo(dim, 0.0), hi(dim, 0.0);
        for (std::size_t k = 0; k < dim; ++k) {
            lo[k] = hi[k] = (*cloud_)[index_[begin]][k];
            for (std::size_t r = begin + 1; r < end; ++r) {
                const double v = (*cloud_)[index_[r]][k];
                lo[k] = std::min(lo[k], v);
                hi[k] = std::max(hi[k], v);
            }
        }
        if (end - begin > leaf_size) {
            std::size_t axis = 0;
            for (std::size_t k = 1; k < dim; ++k)
                if (hi[k] - lo[k] > hi[axis] - lo[axis]) axis = k;
            if (hi[axis] > lo[axis]) {
                const std::size_t mid = begin + (end - begin) / 2;
                std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                                 [&](std::size_t a, std::size_t b) {
                                     return (*cloud_)[a][axis] < (*cloud_)[b][axis];
                                 });
                nodes_[id].axis = axis;
                nodes_[id].split = (*cloud_)[index_[mid]][axis];
                const std::size_t l = build(begin, mid);
                const std::size_t r = build(mid, end);
                nodes_[id].left = l;
                nodes_[id].right = r;
            }
        }
        nodes_[id].lo = std::move(lo);
        nodes_[id].hi = std::move(hi);
        return id;
    }

    double box_distance2(const Node& n, Point q) const {
        double s = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            double d = 0.0;
            if (q[k] < n.lo[k]) d = n.lo[k] - q[k];
            else if (q[k] > n.hi[k]) d = q[k] - n.hi[k];
            s += d * d;
        }
        return s;
    }

    void search_knn(std::size_t id, Point q, std::size_t k, std::size_t exclude, Heap& heap) const {
        const Node& n = nodes_[id];
        // A box at exactly the current worst distance may still hold a
        // lower-index tie, so only strictly farther boxes are pruned.
        if (heap.size() == k && box_distance2(n, q) * (1.0 - 1e-12) > heap.top().first) return;
        if (n.left == 0) {
            for (std::size_t r = n.begin; r < n.end; ++r) {
                const std::size_t j = index_[r];
                if (j == exclude) continue;
                const std::pair<double, std::size_t> cand{squared_distance(q, (*cloud_)[j]), j};
                if (heap.size() < k) heap.push(cand);
                else if (cand < heap.top()) {
                    heap.pop();
                    heap.push(cand);
                }
            }
            return;
        }
        const bool go_left = q[n.axis] < n.split;
        search_knn(go_left ? n.left : n.right, q, k, exclude, heap);
        search_knn(go_left ? n.right : n.left, q, k, exclude, heap);
    }

    void search_radius(std::size_t id, Point q, double radius2, std::vector<std::size_t>& out) const {
        const Node& n = nodes_[id];
        if (box_distance2(n, q) * (1.0 - 1e-12) > radius2) return;
        if (n.left == 0) {
            for (std::size_t r = n.begin; r < n.end; ++r)
                if (squared_distance(q, (*cloud_)[index_[r]]) <= radius2) out.push_back(index_[r]);
            return;
        }
        search_radius(n.left, q, radius2, out);
        search_radius(n.right, q, radius2, out);
    }

    const PointCloud* cloud_;
    std::vector<std::size_t> index_;
    std::vector<Node> nodes_;
};

}  // namespace pbc
