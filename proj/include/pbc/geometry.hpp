#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pbc/error.hpp"
#include "pbc/point_cloud.hpp"

namespace pbc {

/// Ordered triplet (x, y, z); y is the pivot. Views only, the caller owns
/// the coordinates.
struct Triplet {
    Point x;
    Point y;
    Point z;
};

namespace detail {

struct TripletLengths {
    double a;       // |y - x|
    double b;       // |z - y|
    double cosine;  // <y - x, z - y> / (a b), clamped to [-1, 1]
};

inline TripletLengths triplet_lengths(const Triplet& t) {
    if (t.x.size() != t.y.size() || t.z.size() != t.y.size())
        throw DomainError("triplet points have different dimensions");
    double dot = 0.0, a2 = 0.0, b2 = 0.0;
    for (std::size_t k = 0; k < t.y.size(); ++k) {
        const double u = t.y[k] - t.x[k];
        const double v = t.z[k] - t.y[k];
        dot += u * v;
        a2 += u * u;
        b2 += v * v;
    }
    if (a2 == 0.0 || b2 == 0.0) throw ZeroLengthSegment("triplet has coincident consecutive points");
    const double a = std::sqrt(a2), b = std::sqrt(b2);
    return {a, b, std::clamp(dot / (a * b), -1.0, 1.0)};
}

}  // namespace detail

/// Angle between the displacements x->y and y->z, in [0, pi]. Zero means the
/// path continues straight through y.
inline double turn_angle(const Triplet& t) {
    return std::acos(detail::triplet_lengths(t).cosine);
}

/**
 * Circle-radius quantity used by the triplet curvature:
 *
 *     R = sqrt(a^2 + b^2 + 2ab cos(phi)) / sin(phi)
 *
 * with a = |x - y|, b = |z - y| and phi the turn angle at y. The numerator is
 * |x - z|, so R is exactly twice the classical circumradius of the triangle.
 * This convention is kept as-is; curvature bounds are expressed in the same
 * units. Aligned points (sin(phi) = 0) give +infinity.
 */
inline double circumradius(const Triplet& t) {
    const auto [a, b, c] = detail::triplet_lengths(t);
    const double phi = std::acos(c);
    const double s = std::sin(phi);
    if (s == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(std::max(0.0, a * a + b * b + 2.0 * a * b * c)) / s;
}

/// 1/R for turn angles below pi/2, +infinity otherwise (including exactly
/// pi/2). Collinear forward motion has curvature 0.
inline double curvature(const Triplet& t) {
    const auto [a, b, c] = detail::triplet_lengths(t);
    const double phi = std::acos(c);
    if (!(phi < std::numbers::pi / 2)) return std::numeric_limits<double>::infinity();
    const double s = std::sin(phi);
    if (s == 0.0) return 0.0;
    return s / std::sqrt(std::max(0.0, a * a + b * b + 2.0 * a * b * c));
}

/// Curvature bound implied by an angle bound theta on a graph whose edges
/// at each vertex have length in the annulus [r_in, epsilon]:
/// kappa = 2 sin(theta) / sqrt(epsilon^2 / 2 * (1 + cos(theta))).
/// The implication holds for r_in >= epsilon / 4.
inline double angle_to_curvature(double theta, double epsilon) {
    if (!(theta > 0.0 && theta < std::numbers::pi / 2))
        throw DomainError("angle_to_curvature: theta must lie in (0, pi/2)");
    if (!(epsilon > 0.0)) throw DomainError("angle_to_curvature: epsilon must be positive");
    return 2.0 * std::sin(theta) / std::sqrt(epsilon * epsilon / 2.0 * (1.0 + std::cos(theta)));
}

inline double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }
inline double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace pbc
