#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "pbc/geometry.hpp"
#include "pbc/random.hpp"

using namespace pbc;

namespace {

using V = std::vector<double>;

double angle(const V& x, const V& y, const V& z) { return turn_angle({x, y, z}); }
double radius(const V& x, const V& y, const V& z) { return circumradius({x, y, z}); }
double curv(const V& x, const V& y, const V& z) { return curvature({x, y, z}); }

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = std::numbers::pi;

V random_point(Rng& rng, std::size_t d, double scale = 1.0) {
    V p(d);
    for (auto& c : p) c = rng.uniform(-scale, scale);
    return p;
}

}  // namespace

TEST(TurnAngle, StraightAndRightAngle) {
    EXPECT_DOUBLE_EQ(angle({0, 0}, {1, 0}, {2, 0}), 0.0);
    EXPECT_NEAR(angle({0, 0}, {1, 0}, {1, 1}), pi / 2, 1e-15);
    EXPECT_NEAR(angle({0, 0}, {1, 0}, {0, 0.0001}), pi, 1e-3);
}

TEST(TurnAngle, MatchesExtendedPrecision) {
    const V x{0, 0}, y{1, 0}, z{0.5, 0.1};
    EXPECT_NEAR(angle(x, y, z), static_cast<double>(oracle::turn_angle(x, y, z)), 1e-14);
    // atan2 form of the same angle: pi - atan(0.1 / 0.5)
    EXPECT_NEAR(angle(x, y, z), pi - std::atan(0.2), 1e-14);
}

TEST(TurnAngle, CoincidentPointsRejected) {
    EXPECT_THROW(angle({1, 1}, {1, 1}, {2, 2}), ZeroLengthSegment);
    EXPECT_THROW(angle({0, 0}, {1, 1}, {1, 1}), ZeroLengthSegment);
    EXPECT_THROW(curv({0, 0}, {0, 0}, {1, 0}), ZeroLengthSegment);
    EXPECT_THROW(radius({0, 0}, {1, 0}, {1, 0}), ZeroLengthSegment);
}

TEST(TurnAngle, DimensionMismatchRejected) {
    EXPECT_THROW(angle({0, 0}, {1, 0, 0}, {2, 0}), DomainError);
}

TEST(TurnAngle, ClampedForNearlyCollinearPoints) {
    // Rounding pushes the cosine of these triplets past +-1.
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double t = rng.uniform(1e-3, 1e3);
        const V x{0.1 * t, 0.3 * t, 0.7 * t}, y{0.2 * t, 0.6 * t, 1.4 * t}, z{0.3 * t, 0.9 * t, 2.1 * t};
        const double a = angle(x, y, z);
        ASSERT_FALSE(std::isnan(a));
        ASSERT_GE(a, 0.0);
        ASSERT_LT(a, 1e-6);
        const double b = angle(z, y, {-0.1 * t, 0.2 * t, 5.0 * t});
        ASSERT_FALSE(std::isnan(b));
        const double back = angle(x, y, x);
        ASSERT_FALSE(std::isnan(back));
        ASSERT_NEAR(back, pi, 1e-6);
    }
}

TEST(Circumradius, AlignedIsInfinite) {
    EXPECT_EQ(radius({0, 0}, {1, 0}, {2, 0}), inf);
    EXPECT_EQ(curv({0, 0}, {1, 0}, {2, 0}), 0.0);
}

TEST(Circumradius, TwiceTheBisectorCircle) {
    const V x{0, 0}, y{1, 0}, z{2, 0.2};
    const double classical = static_cast<double>(oracle::bisector_circumradius(x, y, z));
    // Center (0.5, 5.1) by hand: R_classical = sqrt(0.25 + 5.1^2)
    EXPECT_NEAR(classical, std::sqrt(26.26), 1e-14);
    EXPECT_NEAR(radius(x, y, z), 2 * classical, 1e-12);
    EXPECT_NEAR(curv(x, y, z), 1 / (2 * classical), 1e-14);
}

TEST(Circumradius, RandomTrianglesMatchBisectorOracle) {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t d = 2 + i % 4;
        const V x = random_point(rng, d), y = random_point(rng, d), z = random_point(rng, d);
        const double r = radius(x, y, z);
        const double ref = 2 * static_cast<double>(oracle::bisector_circumradius(x, y, z));
        ASSERT_NEAR(r, ref, 1e-8 * ref) << "trial " << i;
    }
}

TEST(Circumradius, ScalesLinearly) {
    const V x{0.3, -0.2}, y{1, 0.1}, z{1.7, 0.9};
    const double r = radius(x, y, z);
    for (double s : {0.5, 2.0, 8.0, 1024.0}) {
        // Powers of two scale every intermediate exactly.
        EXPECT_EQ(radius({s * x[0], s * x[1]}, {s * y[0], s * y[1]}, {s * z[0], s * z[1]}), s * r);
    }
    const double s = 3.7;
    EXPECT_NEAR(radius({s * x[0], s * x[1]}, {s * y[0], s * y[1]}, {s * z[0], s * z[1]}), s * r, 1e-12 * s * r);
}

TEST(Curvature, RightAngleAndBeyondAreInfinite) {
    EXPECT_EQ(curv({0, 0}, {1, 0}, {1, 1}), inf);
    EXPECT_EQ(curv({0, 0}, {1, 0}, {0.5, 1}), inf);
    EXPECT_LT(curv({0, 0}, {1, 0}, {1.001, 1}), inf);
}

TEST(AngleToCurvature, WorkedValue) {
    EXPECT_NEAR(angle_to_curvature(pi / 3, 1.0), 2.0, 1e-15);
}

TEST(AngleToCurvature, InverseInEpsilon) {
    for (double theta : {0.1, 0.5, 1.2})
        for (double eps : {0.25, 1.0, 3.0}) EXPECT_EQ(angle_to_curvature(theta, 2 * eps), angle_to_curvature(theta, eps) / 2);
}

TEST(AngleToCurvature, VanishesWithTheta) {
    double prev = inf;
    for (double theta = 0.5; theta > 1e-9; theta /= 10) {
        const double k = angle_to_curvature(theta, 1.0);
        EXPECT_LT(k, prev);
        prev = k;
    }
    EXPECT_LT(prev, 1e-7);
}

TEST(AngleToCurvature, DomainChecks) {
    EXPECT_THROW(angle_to_curvature(0.0, 1.0), DomainError);
    EXPECT_THROW(angle_to_curvature(pi / 2, 1.0), DomainError);
    EXPECT_THROW(angle_to_curvature(-0.1, 1.0), DomainError);
    EXPECT_THROW(angle_to_curvature(0.3, 0.0), DomainError);
    EXPECT_THROW(angle_to_curvature(0.3, -1.0), DomainError);
}

TEST(GeometryProperties, ReversalSymmetry) {
    Rng rng(3);
    for (int i = 0; i < 5000; ++i) {
        const std::size_t d = 1 + i % 5;
        const V x = random_point(rng, d), y = random_point(rng, d), z = random_point(rng, d);
        ASSERT_DOUBLE_EQ(angle(x, y, z), angle(z, y, x));
        const double r1 = radius(x, y, z), r2 = radius(z, y, x);
        if (std::isinf(r1)) { ASSERT_TRUE(std::isinf(r2)); } else { ASSERT_NEAR(r1, r2, 1e-12 * r1); }
        const double k1 = curv(x, y, z), k2 = curv(z, y, x);
        if (std::isinf(k1)) { ASSERT_TRUE(std::isinf(k2)); } else { ASSERT_NEAR(k1, k2, 1e-12 * std::max(k1, 1e-300)); }
    }
}

namespace {

// Random orthogonal 3x3 matrix from the QR of a Gaussian matrix
// (Gram-Schmidt on its columns).
std::vector<V> random_rotation(Rng& rng) {
    std::vector<V> q(3, V(3));
    for (int c = 0; c < 3; ++c) {
        V v{rng.normal(), rng.normal(), rng.normal()};
        for (int p = 0; p < c; ++p) {
            double dot = 0;
            for (int k = 0; k < 3; ++k) dot += v[k] * q[p][k];
            for (int k = 0; k < 3; ++k) v[k] -= dot * q[p][k];
        }
        const double n = std::hypot(v[0], v[1], v[2]);
        for (int k = 0; k < 3; ++k) q[c][k] = v[k] / n;
    }
    return q;
}

V apply(const std::vector<V>& q, const V& t, const V& p) {
    V out(3);
    for (int r = 0; r < 3; ++r) out[r] = q[0][r] * p[0] + q[1][r] * p[1] + q[2][r] * p[2] + t[r];
    return out;
}

}  // namespace

TEST(GeometryProperties, RigidMotionInvariance) {
    Rng rng(5);
    for (int i = 0; i < 5000; ++i) {
        const V x = random_point(rng, 3), y = random_point(rng, 3), z = random_point(rng, 3);
        const auto q = random_rotation(rng);
        const V t = random_point(rng, 3, 10.0);
        const V X = apply(q, t, x), Y = apply(q, t, y), Z = apply(q, t, z);
        const double a = angle(x, y, z);
        ASSERT_NEAR(angle(X, Y, Z), a, 1e-9 * std::max(1.0, a));
        const double k = curv(x, y, z);
        const double K = curv(X, Y, Z);
        // Right at pi/2 the rotated copy may land on either side.
        if (std::abs(a - pi / 2) < 1e-9) continue;
        if (std::isinf(k)) { ASSERT_TRUE(std::isinf(K)); } else { ASSERT_NEAR(K, k, 1e-9 * k); }
    }
}

TEST(GeometryProperties, ScalingLaw) {
    Rng rng(9);
    for (int i = 0; i < 5000; ++i) {
        const V x = random_point(rng, 3), y = random_point(rng, 3), z = random_point(rng, 3);
        const double s = std::exp(rng.uniform(-5, 5));
        auto scaled = [&](const V& p) { return V{s * p[0], s * p[1], s * p[2]}; };
        const double a = angle(x, y, z);
        ASSERT_NEAR(angle(scaled(x), scaled(y), scaled(z)), a, 1e-12 * std::max(1.0, a));
        if (std::abs(a - pi / 2) < 1e-9) continue;
        const double k = curv(x, y, z);
        const double K = curv(scaled(x), scaled(y), scaled(z));
        if (std::isinf(k)) { ASSERT_TRUE(std::isinf(K)); } else { ASSERT_NEAR(K, k / s, 1e-10 * k / s); }
    }
}

TEST(GeometryProperties, CurvatureMonotoneInAngleForFixedLengths) {
    for (double a : {0.3, 1.0, 2.5})
        for (double b : {0.3, 1.0, 2.5}) {
            double prev = -1;
            for (int step = 0; step < 400; ++step) {
                const double phi = (pi / 2) * step / 400.0;
                // x behind y along -e1, z ahead at turn angle phi.
                const double k = curv({-a, 0}, {0, 0}, {b * std::cos(phi), b * std::sin(phi)});
                ASSERT_GE(k, prev * (1 - 1e-12)) << "a=" << a << " b=" << b << " phi=" << phi;
                prev = k;
            }
        }
}

TEST(GeometryProperties, AngleBoundImpliesCurvatureBoundInAnnulus) {
    // x and z uniform in the annulus [eps/2, eps] around y, turn angle <= theta.
    Rng rng(2024);
    const double inner_fraction = 0.5;
    std::size_t checked = 0, violations = 0;
    while (checked < 10000) {
        const double eps = std::exp(rng.uniform(-3, 3));
        const double theta = rng.uniform(1e-3, pi / 2 - 1e-3);
        auto sample = [&] {
            while (true) {
                const V p{rng.uniform(-eps, eps), rng.uniform(-eps, eps)};
                const double r = std::hypot(p[0], p[1]);
                if (r >= inner_fraction * eps && r <= eps) return p;
            }
        };
        const V y{0, 0}, x = sample(), z = sample();
        if (angle(x, y, z) > theta) continue;
        ++checked;
        if (!(curv(x, y, z) <= angle_to_curvature(theta, eps))) ++violations;
    }
    EXPECT_EQ(violations, 0u);
}

TEST(GeometryProperties, ImplicationFailsForShortEdges) {
    // With one edge much shorter than eps/4 the bound no longer holds, so the
    // annulus inner radius matters.
    const double eps = 1.0, theta = 0.5;
    const V x{-0.01, 0}, y{0, 0}, z{0.01 * std::cos(theta), 0.01 * std::sin(theta)};
    EXPECT_GT(curv(x, y, z), angle_to_curvature(theta, eps));
}

TEST(Degrees, RoundTrip) {
    EXPECT_DOUBLE_EQ(degrees(pi), 180.0);
    EXPECT_DOUBLE_EQ(radians(90.0), pi / 2);
    EXPECT_DOUBLE_EQ(radians(degrees(0.3)), 0.3);
}
