#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pbc/error.hpp"
#include "pbc/point_cloud.hpp"

namespace pbc {

struct PcaResult {
    std::vector<double> mean;           ///< per input coordinate
    Eigen::MatrixXd components;         ///< D x p, columns are unit principal directions
    std::vector<double> variances;      ///< eigenvalues of the covariance, descending
    std::vector<double> explained_ratio;
    PointCloud scores{1};               ///< N x p projected coordinates
};

/**
 * Mean-centers the cloud and projects it onto the top `p` eigenvectors of the
 * sample covariance (divisor N - 1, or 1 for a single point). Each direction is
 * signed so that its largest-magnitude coordinate is positive.
 */
inline PcaResult pca(const PointCloud& cloud, std::size_t p) {
    const std::size_t n = cloud.size(), d = cloud.dim();
    if (n == 0) throw DomainError("pca needs at least one point");
    if (p == 0 || p > std::min(n, d))
        throw DomainError("component count must lie in [1, min(N, D)] = [1, " + std::to_string(std::min(n, d)) + "]");

    Eigen::MatrixXd x(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) x(i, j) = cloud[i][j];
    const Eigen::RowVectorXd mu = x.colwise().mean();
    x.rowwise() -= mu;
    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n > 1 ? n - 1 : 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw DomainError("covariance eigendecomposition failed");

    PcaResult out;
    out.mean.assign(mu.data(), mu.data() + d);
    out.components.resize(d, p);
    double total = 0;
    for (std::size_t j = 0; j < d; ++j) total += std::max(0.0, eig.eigenvalues()(j));
    // Eigen returns ascending eigenvalues.
    for (std::size_t c = 0; c < p; ++c) {
        const auto src = static_cast<Eigen::Index>(d - 1 - c);
        Eigen::VectorXd v = eig.eigenvectors().col(src);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        out.components.col(static_cast<Eigen::Index>(c)) = v;
        const double lambda = std::max(0.0, eig.eigenvalues()(src));
        out.variances.push_back(lambda);
        out.explained_ratio.push_back(total > 0 ? lambda / total : 0.0);
    }

    const Eigen::MatrixXd s = x * out.components;
    out.scores = PointCloud(p);
    std::vector<double> row(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < p; ++c) row[c] = s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        out.scores.push_back(row);
    }
    out.scores.labels = cloud.labels;
    out.scores.ambiguous = cloud.ambiguous;
    return out;
}

/// Maps scores back to input coordinates: mean + scores * components^T.
inline PointCloud pca_reconstruct(const PcaResult& r) {
    const std::size_t d = r.mean.size();
    const auto p = r.components.cols();
    PointCloud out(d);
    std::vector<double> row(d);
    for (std::size_t i = 0; i < r.scores.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double v = r.mean[j];
            for (Eigen::Index c = 0; c < p; ++c) v += r.scores[i][static_cast<std::size_t>(c)] * r.components(static_cast<Eigen::Index>(j), c);
            row[j] = v;
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace pbc
