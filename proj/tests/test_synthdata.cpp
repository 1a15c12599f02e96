#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "pbc/synthdata.hpp"

using namespace pbc;

namespace {

constexpr double pi = std::numbers::pi;

DatasetSpec spec_of(const std::string& name, std::size_t n = 2000, std::uint64_t seed = 1) {
    DatasetSpec s;
    s.name = name;
    s.n_points = n;
    s.seed = seed;
    return s;
}

// Pearson statistic of counts against equal expected frequencies.
double chi_square_uniform(const std::vector<std::size_t>& counts) {
    double total = 0;
    for (auto c : counts) total += double(c);
    const double e = total / double(counts.size());
    double x2 = 0;
    for (auto c : counts) x2 += (double(c) - e) * (double(c) - e) / e;
    return x2;
}

// Upper 0.999 quantile of chi-square with 19 degrees of freedom.
constexpr double chi2_19_999 = 43.82;

}  // namespace

TEST(SampleDataset, NoiselessPointsLieOnTheirComponent) {
    for (const auto& name : dataset_names()) {
        const auto spec = spec_of(name);
        const auto d = sample_dataset(spec);
        ASSERT_EQ(d.points.size(), spec.n_points) << name;
        EXPECT_EQ(d.points.dim(), dataset_dimension(spec)) << name;
        const double tol = name == "two_spheres" ? 1e-12 : 1e-10;
        for (std::size_t i = 0; i < d.points.size(); ++i) {
            const int k = d.points.labels[i];
            ASSERT_GE(k, 0);
            ASSERT_LT(std::size_t(k), dataset_components(spec));
            ASSERT_LT(surface_residual(spec, std::size_t(k), d.points[i]), tol) << name << " point " << i;
        }
    }
}

TEST(SampleDataset, SphereRadiusDirectly) {
    const auto d = sample_dataset(spec_of("two_spheres", 3000, 4));
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        const double cx = d.points.labels[i] == 0 ? -0.5 : 0.5;
        const auto p = d.points[i];
        ASSERT_NEAR(std::sqrt((p[0] - cx) * (p[0] - cx) + p[1] * p[1] + p[2] * p[2]), 1.0, 1e-12);
    }
}

TEST(SampleDataset, ResidualIsPositiveOffTheComponent) {
    const auto spec = spec_of("three_planes");
    const double off[3] = {0.0, 0.0, 0.8};  // beyond the half side
    EXPECT_NEAR(surface_residual(spec, 0, Point(off, 3)), 0.3, 1e-12);
    const double above[3] = {0.2, 0.3, 0.0};
    EXPECT_NEAR(surface_residual(spec, 0, Point(above, 3)), 0.3, 1e-12);
    EXPECT_THROW(surface_residual(spec, 3, Point(above, 3)), DomainError);
}

TEST(SampleDataset, DegenerateWeightsSelectOneComponent) {
    auto spec = spec_of("two_spheres", 500);
    spec.weights = {1.0, 0.0};
    const auto d = sample_dataset(spec);
    EXPECT_TRUE(std::all_of(d.points.labels.begin(), d.points.labels.end(), [](int l) { return l == 0; }));
    spec.weights = {0.0, 1.0};
    const auto e = sample_dataset(spec);
    EXPECT_TRUE(std::all_of(e.points.labels.begin(), e.points.labels.end(), [](int l) { return l == 1; }));
}

TEST(SampleDataset, MixtureFrequenciesMatchWeights) {
    auto spec = spec_of("two_spheres", 100000, 17);
    spec.weights = {0.3, 0.7};
    const auto d = sample_dataset(spec);
    const double n = double(spec.n_points);
    const double count0 = double(std::count(d.points.labels.begin(), d.points.labels.end(), 0));
    const double sigma = std::sqrt(n * 0.3 * 0.7);
    EXPECT_LT(std::abs(count0 - 0.3 * n), 3 * sigma);
}

TEST(SampleDataset, DefaultWeightsFollowMeasure) {
    const auto w = resolved_weights(spec_of("two_spheres"));
    EXPECT_DOUBLE_EQ(w[0], 0.5);
    const auto f = resolved_weights(spec_of("five_segments"));
    for (double x : f) EXPECT_DOUBLE_EQ(x, 0.2);
    auto rc = spec_of("rose_and_circle");
    const auto r = resolved_weights(rc);
    // Rose length by a coarse independent sum over the polyline.
    double rose = 0;
    const int steps = 200000;
    for (int i = 0; i < steps; ++i) {
        const double t0 = 2 * pi * i / steps, t1 = 2 * pi * (i + 1) / steps;
        rose += std::hypot(std::cos(2 * t1) * std::cos(t1) - std::cos(2 * t0) * std::cos(t0),
                           std::cos(2 * t1) * std::sin(t1) - std::cos(2 * t0) * std::sin(t0));
    }
    EXPECT_NEAR(r[0], rose / (rose + 2 * pi * 0.7), 1e-6);
}

TEST(SampleDataset, NoiseStaysInsideTheBall) {
    for (const std::string name : {"two_spirals", "three_planes"}) {
        auto spec = spec_of(name, 5000, 3);
        spec.noise = 0.05;
        const auto d = sample_dataset(spec);
        std::size_t outer = 0;
        for (std::size_t i = 0; i < d.points.size(); ++i) {
            const double r = distance(d.points[i], d.clean[i]);
            ASSERT_LE(r, spec.noise * (1 + 1e-12));
            outer += r > 0.9 * spec.noise;
            ASSERT_LT(surface_residual(spec, std::size_t(d.clean.labels[i]), d.clean[i]), 1e-10);
        }
        // Uniform in the ball: P(r > 0.9 tau) = 1 - 0.9^dim.
        const double p = 1 - std::pow(0.9, double(dataset_dimension(spec)));
        const double n = double(spec.n_points);
        EXPECT_NEAR(double(outer), p * n, 4 * std::sqrt(n * p * (1 - p))) << name;
    }
}

TEST(SampleDataset, SegmentPositionsAreUniform) {
    const auto d = sample_dataset(spec_of("five_segments", 20000, 8));
    std::vector<std::size_t> bins(20, 0);
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        const double phi = d.points.labels[i] * pi / 5;
        const double s = d.points[i][0] * std::cos(phi) + d.points[i][1] * std::sin(phi);  // in [-0.5, 0.5]
        ++bins[std::min<std::size_t>(19, std::size_t((s + 0.5) * 20))];
    }
    EXPECT_LT(chi_square_uniform(bins), chi2_19_999);
}

TEST(SampleDataset, PlanePatchesAreUniform) {
    const auto d = sample_dataset(spec_of("three_planes", 20000, 9));
    std::vector<std::size_t> height(20, 0), across(20, 0);
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        const double phi = d.points.labels[i] * pi / 3;
        const double s = d.points[i][0] * std::cos(phi) + d.points[i][1] * std::sin(phi);
        ++across[std::min<std::size_t>(19, std::size_t((s + 0.5) * 20))];
        ++height[std::min<std::size_t>(19, std::size_t((d.points[i][2] + 0.5) * 20))];
    }
    EXPECT_LT(chi_square_uniform(across), chi2_19_999);
    EXPECT_LT(chi_square_uniform(height), chi2_19_999);
}

TEST(SampleDataset, SphereHeightIsUniform) {
    // Uniform on a sphere means each axis coordinate is uniform on [-r, r].
    const auto d = sample_dataset(spec_of("two_spheres", 20000, 10));
    std::vector<std::size_t> bins(20, 0);
    for (std::size_t i = 0; i < d.points.size(); ++i) ++bins[std::min<std::size_t>(19, std::size_t((d.points[i][2] + 1) * 10))];
    EXPECT_LT(chi_square_uniform(bins), chi2_19_999);
}

TEST(SampleDataset, SpiralIsUniformInArcLength) {
    // Split the first spiral into 20 equal-length pieces by trapezoid
    // integration of the speed sqrt(1 + t^2) and count points per piece.
    const double t0 = pi / 2, t1 = t0 + 3 * pi, a = 1.0 / t1;
    const int steps = 100000;
    std::vector<double> ts(steps + 1), len(steps + 1, 0.0);
    for (int i = 0; i <= steps; ++i) ts[i] = t0 + (t1 - t0) * i / steps;
    for (int i = 1; i <= steps; ++i)
        len[i] = len[i - 1] + 0.5 * (ts[i] - ts[i - 1]) * (std::sqrt(1 + ts[i] * ts[i]) + std::sqrt(1 + ts[i - 1] * ts[i - 1]));
    const auto d = sample_dataset(spec_of("two_spirals", 20000, 11));
    std::vector<std::size_t> bins(20, 0);
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        if (d.points.labels[i] != 0) continue;
        const double t = std::hypot(d.points[i][0], d.points[i][1]) / a;
        const auto k = std::size_t(std::lower_bound(ts.begin(), ts.end(), t) - ts.begin());
        const double frac = len[std::min<std::size_t>(k, steps)] / len.back();
        ++bins[std::min<std::size_t>(19, std::size_t(frac * 20))];
    }
    EXPECT_LT(chi_square_uniform(bins), chi2_19_999);
}

TEST(SampleDataset, SeedDeterminism) {
    for (const auto& name : dataset_names()) {
        auto spec = spec_of(name, 300, 5);
        spec.noise = 0.01;
        const auto a = sample_dataset(spec), b = sample_dataset(spec);
        EXPECT_EQ(a.points.coords(), b.points.coords()) << name;
        EXPECT_EQ(a.points.labels, b.points.labels) << name;
        spec.seed = 6;
        EXPECT_NE(sample_dataset(spec).points.coords(), a.points.coords()) << name;
    }
}

TEST(SampleDataset, AmbiguityFlags) {
    auto spec = spec_of("five_segments", 2000, 12);
    spec.noise = 0.01;
    const auto d = sample_dataset(spec);
    EXPECT_DOUBLE_EQ(d.ambiguity_radius, 2 * spec.noise + median_nearest_spacing(d.points));
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        const double r = std::hypot(d.points[i][0], d.points[i][1]);
        ASSERT_EQ(bool(d.points.ambiguous[i]), r <= d.ambiguity_radius);
        flagged += d.points.ambiguous[i];
    }
    EXPECT_GT(flagged, 0u);
    spec.ambiguity_radius = 0.25;
    const auto e = sample_dataset(spec);
    EXPECT_EQ(e.ambiguity_radius, 0.25);
    // Interleaved spirals never meet, so nothing is flagged.
    const auto s = sample_dataset(spec_of("two_spirals", 500));
    EXPECT_EQ(std::count(s.points.ambiguous.begin(), s.points.ambiguous.end(), true), 0);
}

TEST(MedianSpacing, RegularGrid) {
    std::vector<double> c;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            c.push_back(0.2 * i);
            c.push_back(0.2 * j);
        }
    EXPECT_NEAR(median_nearest_spacing(PointCloud(2, c)), 0.2, 1e-12);
}

TEST(IntersectionDistance, SphereCircle) {
    const auto spec = spec_of("two_spheres");
    const double rc = std::sqrt(0.75);
    for (double u : {0.0, 1.0, 2.5, 4.0}) {
        const double on[3] = {0.0, rc * std::cos(u), rc * std::sin(u)};
        EXPECT_NEAR(analytic_intersection_distance(spec, Point(on, 3)), 0.0, 1e-15);
    }
    const double origin[3] = {0, 0, 0};
    EXPECT_NEAR(analytic_intersection_distance(spec, Point(origin, 3)), rc, 1e-15);
}

TEST(IntersectionDistance, MatchesDenseSamplingOfTheLocus) {
    const double rc = std::sqrt(0.75);
    std::vector<std::array<double, 3>> circle;
    for (int i = 0; i < 200000; ++i) {
        const double u = 2 * pi * i / 200000;
        circle.push_back({0.0, rc * std::cos(u), rc * std::sin(u)});
    }
    const auto spec = spec_of("two_spheres");
    Rng rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const double p[3] = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        double best = 1e9;
        for (const auto& c : circle) best = std::min(best, std::hypot(p[0] - c[0], p[1] - c[1], p[2] - c[2]));
        EXPECT_NEAR(analytic_intersection_distance(spec, Point(p, 3)), best, 1e-4);
    }
}

TEST(IntersectionDistance, ThreePlanesAxis) {
    const auto spec = spec_of("three_planes");
    const double p[3] = {0.3, 0.4, 0.1};
    EXPECT_NEAR(analytic_intersection_distance(spec, Point(p, 3)), 0.5, 1e-15);
    const double q[3] = {0.0, 0.0, 0.9};
    EXPECT_NEAR(analytic_intersection_distance(spec, Point(q, 3)), 0.4, 1e-15);
}

TEST(IntersectionDistance, NoLocus) {
    const double p[2] = {0, 0};
    EXPECT_THROW(analytic_intersection_distance(spec_of("two_spirals"), Point(p, 2)), NoIntersection);
    auto apart = spec_of("two_spheres");
    apart.shape["offset"] = 3.0;
    const double q[3] = {0, 0, 0};
    EXPECT_THROW(analytic_intersection_distance(apart, Point(q, 3)), NoIntersection);
}

TEST(RoseCircle, CrossingsMatchRootFinder) {
    for (const double c : {0.3, 0.7, 0.95}) {
        // Sign changes of R |cos 2t| - c on a fine grid, refined by bisection.
        auto f = [c](double t) { return std::abs(std::cos(2 * t)) - c; };
        std::vector<double> roots;
        const int grid = 4000;
        for (int i = 0; i < grid; ++i) {
            double lo = 2 * pi * i / grid, hi = 2 * pi * (i + 1) / grid;
            if ((f(lo) < 0) == (f(hi) < 0)) continue;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                ((f(mid) < 0) == (f(lo) < 0) ? lo : hi) = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        const auto got = synth::rose_circle_crossings(1.0, c);
        ASSERT_EQ(got.size(), roots.size()) << c;
        for (std::size_t i = 0; i < roots.size(); ++i) EXPECT_NEAR(got[i], roots[i], 1e-12);
    }
    EXPECT_TRUE(synth::rose_circle_crossings(1.0, 1.2).empty());
}

TEST(RoseCircle, CrossingPointsLieOnBothCurves) {
    auto spec = spec_of("rose_and_circle");
    for (const double phi : synth::rose_circle_crossings(1.0, 0.7)) {
        const double p[2] = {0.7 * std::cos(phi), 0.7 * std::sin(phi)};
        EXPECT_LT(surface_residual(spec, 0, Point(p, 2)), 1e-12);
        EXPECT_LT(surface_residual(spec, 1, Point(p, 2)), 1e-12);
        EXPECT_NEAR(analytic_intersection_distance(spec, Point(p, 2)), 0.0, 1e-15);
    }
}

TEST(DatasetSpec, ValidationNamesTheField) {
    auto spec = spec_of("two_spheres");
    spec.weights = {0.5, 0.6};
    try {
        validate(spec);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("weights"), std::string::npos);
    }
    spec.weights = {1.0};
    EXPECT_THROW(validate(spec), DomainError);
    spec.weights = {-0.5, 1.5};
    EXPECT_THROW(validate(spec), DomainError);
    spec.weights = {};
    spec.noise = -1;
    EXPECT_THROW(sample_dataset(spec), DomainError);
    spec.noise = 0;
    spec.n_points = 0;
    EXPECT_THROW(sample_dataset(spec), DomainError);
    spec.n_points = 10;
    spec.name = "klein_bottle";
    EXPECT_THROW(sample_dataset(spec), DomainError);
}

TEST(DatasetSpec, FromConfig) {
    const auto cfg = KeyValueConfig::parse_string(
        "[dataset]\nname = rose_and_circle\nn_points = 123\nweights = 0.4, 0.6\nnoise = 0.02\nseed = 9\n"
        "ambiguity_radius = 0.1\n[shape]\ncircle_radius = 0.5\n");
    const auto s = dataset_spec_from_config(cfg);
    EXPECT_EQ(s.name, "rose_and_circle");
    EXPECT_EQ(s.n_points, 123u);
    EXPECT_EQ(s.weights, (std::vector<double>{0.4, 0.6}));
    EXPECT_DOUBLE_EQ(s.noise, 0.02);
    EXPECT_EQ(s.seed, 9u);
    EXPECT_DOUBLE_EQ(s.ambiguity_radius, 0.1);
    EXPECT_DOUBLE_EQ(s.param("circle_radius", 0), 0.5);
    EXPECT_THROW(dataset_spec_from_config(KeyValueConfig::parse_string("[dataset]\nname = torus\n")), DomainError);
    EXPECT_THROW(dataset_spec_from_config(KeyValueConfig::parse_string("[dataset]\nweights = 0.2, 0.2\n")), DomainError);
}
