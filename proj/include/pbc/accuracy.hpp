#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "pbc/error.hpp"

namespace pbc {

using CountMatrix = std::vector<std::vector<long long>>;

/// Column matched to each row (rows <= cols) and the total matched weight.
struct Assignment {
    std::vector<std::size_t> column_of_row;
    long long total = 0;
};

namespace detail {

inline void require_rectangular(const CountMatrix& m) {
    for (const auto& row : m)
        if (row.size() != m.front().size()) throw DomainError("matrix rows differ in length");
    if (m.size() > m.front().size()) throw DomainError("assignment needs rows <= columns");
}

}  // namespace detail

/// Maximum-weight one-to-one assignment of rows to columns by exhaustive
/// search over column permutations. Intended for small matrices.
inline Assignment brute_force_assignment(const CountMatrix& m) {
    if (m.empty()) return {};
    detail::require_rectangular(m);
    std::vector<std::size_t> perm(m.front().size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Assignment best;
    best.total = std::numeric_limits<long long>::min();
    do {
        long long s = 0;
        for (std::size_t r = 0; r < m.size(); ++r) s += m[r][perm[r]];
        if (s > best.total) {
            best.total = s;
            best.column_of_row.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m.size()));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Maximum-weight one-to-one assignment of rows to columns, Hungarian method
/// with potentials, O(rows^2 * cols).
inline Assignment optimal_assignment(const CountMatrix& m) {
    if (m.empty()) return {};
    detail::require_rectangular(m);
    const std::size_t rows = m.size(), cols = m.front().size();
    long long top = 0;
    for (const auto& row : m)
        for (long long v : row) top = std::max(top, v);

    // Minimize top - m[r][c]; 1-based arrays, index 0 is the sentinel.
    const long long inf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(rows + 1, 0), v(cols + 1, 0);
    std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);
    for (std::size_t r = 1; r <= rows; ++r) {
        match[0] = r;
        std::size_t c0 = 0;
        std::vector<long long> minv(cols + 1, inf);
        std::vector<bool> used(cols + 1, false);
        do {
            used[c0] = true;
            const std::size_t r0 = match[c0];
            long long delta = inf;
            std::size_t c1 = 0;
            for (std::size_t c = 1; c <= cols; ++c) {
                if (used[c]) continue;
                const long long cur = (top - m[r0 - 1][c - 1]) - u[r0] - v[c];
                if (cur < minv[c]) {
                    minv[c] = cur;
                    way[c] = c0;
                }
                if (minv[c] < delta) {
                    delta = minv[c];
                    c1 = c;
                }
            }
            for (std::size_t c = 0; c <= cols; ++c) {
                if (used[c]) {
                    u[match[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            c0 = c1;
        } while (match[c0] != 0);
        do {
            const std::size_t c1 = way[c0];
            match[c0] = match[c1];
            c0 = c1;
        } while (c0 != 0);
    }

    Assignment out;
    out.column_of_row.assign(rows, 0);
    for (std::size_t c = 1; c <= cols; ++c)
        if (match[c] != 0) out.column_of_row[match[c] - 1] = c - 1;
    for (std::size_t r = 0; r < rows; ++r) out.total += m[r][out.column_of_row[r]];
    return out;
}

/// Label alphabets up to which exhaustive matching is used.
inline constexpr std::size_t brute_force_assignment_limit = 8;

struct AccuracyReport {
    double accuracy = 0.0;
    std::size_t n_evaluated = 0;
    std::size_t n_excluded = 0;
    std::vector<int> truth_classes;      ///< sorted distinct truth labels (rows)
    std::vector<int> predicted_classes;  ///< sorted distinct predicted labels (columns)
    CountMatrix confusion;               ///< confusion[t][p] = count
    /// Predicted class matched to each truth class, -1 when left unmatched
    /// (fewer predicted clusters than truth classes).
    std::vector<int> matched_prediction;
};

/**
 * Fraction of points whose predicted cluster agrees with the truth under the
 * best one-to-one matching of predicted clusters to truth classes. Points
 * with excluded[i] set are ignored (pass an empty mask to keep all). Truth
 * classes left without a partner score zero.
 */
inline AccuracyReport misclustering_rate(const std::vector<int>& predicted, const std::vector<int>& truth,
                                         const std::vector<bool>& excluded = {}) {
    if (predicted.size() != truth.size()) throw DomainError("predicted and truth label counts differ");
    if (!excluded.empty() && excluded.size() != truth.size()) throw DomainError("exclusion mask length differs");

    AccuracyReport rep;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!excluded.empty() && excluded[i]) {
            ++rep.n_excluded;
            continue;
        }
        rep.truth_classes.push_back(truth[i]);
        rep.predicted_classes.push_back(predicted[i]);
    }
    rep.n_evaluated = truth.size() - rep.n_excluded;
    if (rep.n_evaluated == 0) throw DomainError("no points left to evaluate");
    for (auto* v : {&rep.truth_classes, &rep.predicted_classes}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    auto index_of = [](const std::vector<int>& alphabet, int x) {
        return static_cast<std::size_t>(std::lower_bound(alphabet.begin(), alphabet.end(), x) - alphabet.begin());
    };

    const std::size_t rows = rep.truth_classes.size(), cols = rep.predicted_classes.size();
    rep.confusion.assign(rows, std::vector<long long>(cols, 0));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!excluded.empty() && excluded[i]) continue;
        ++rep.confusion[index_of(rep.truth_classes, truth[i])][index_of(rep.predicted_classes, predicted[i])];
    }

    // Square the problem with zero padding so either side may be larger.
    const std::size_t k = std::max(rows, cols);
    CountMatrix square(k, std::vector<long long>(k, 0));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) square[r][c] = rep.confusion[r][c];
    const Assignment a = k <= brute_force_assignment_limit ? brute_force_assignment(square) : optimal_assignment(square);

    rep.matched_prediction.assign(rows, -1);
    for (std::size_t r = 0; r < rows; ++r)
        if (a.column_of_row[r] < cols) rep.matched_prediction[r] = rep.predicted_classes[a.column_of_row[r]];
    rep.accuracy = static_cast<double>(a.total) / static_cast<double>(rep.n_evaluated);
    return rep;
}

}  // namespace pbc
