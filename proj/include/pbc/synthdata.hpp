#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "pbc/error.hpp"
#include "pbc/kd_tree.hpp"
#include "pbc/kv_config.hpp"
#include "pbc/point_cloud.hpp"
#include "pbc/random.hpp"

namespace pbc {

inline const std::vector<std::string>& dataset_names() {
    static const std::vector<std::string> names{"three_planes",  "two_spirals",  "five_segments",
                                                "dollar_sign_plane_roll", "roll_and_plane", "cone_and_plane",
                                                "two_spheres",   "rose_and_circle"};
    return names;
}

/// Noisy mixture x = s + z: component k drawn with probability weights[k],
/// s uniform on the component, z uniform in the ball of radius `noise`.
struct DatasetSpec {
    std::string name = "two_spheres";
    std::size_t n_points = 1000;
    std::vector<double> weights;  ///< empty: proportional to component length/area
    double noise = 0.0;           ///< tau
    std::uint64_t seed = 1;
    /// Points within this distance of the intersection locus are flagged
    /// ambiguous. NaN selects 2 * noise + median nearest-neighbor spacing.
    double ambiguity_radius = std::numeric_limits<double>::quiet_NaN();
    std::map<std::string, double> shape;  ///< overrides of the documented shape constants

    double param(const std::string& key, double fallback) const {
        const auto it = shape.find(key);
        return it == shape.end() ? fallback : it->second;
    }
};

/// Sampled cloud with labels, ambiguity flags and the noise-free positions.
struct LabeledCloud {
    PointCloud points;   ///< labels and ambiguous are filled
    PointCloud clean;    ///< s for each point (x = s + z)
    double ambiguity_radius = 0.0;
};

namespace synth {

using Vec = std::vector<double>;

/// Part of the intersection set: segment [a, b], circle (center, unit
/// normal, radius; 3D only) or a single point (a).
struct Locus {
    enum class Kind { point, segment, circle } kind;
    Vec a, b;
    double radius = 0.0;

    double distance(Point p) const {
        switch (kind) {
            case Kind::point: return pbc::distance(p, a);
            case Kind::segment: {
                double t_num = 0.0, len2 = 0.0;
                for (std::size_t k = 0; k < p.size(); ++k) {
                    t_num += (p[k] - a[k]) * (b[k] - a[k]);
                    len2 += (b[k] - a[k]) * (b[k] - a[k]);
                }
                const double t = std::clamp(t_num / len2, 0.0, 1.0);
                double s = 0.0;
                for (std::size_t k = 0; k < p.size(); ++k) {
                    const double d = p[k] - (a[k] + t * (b[k] - a[k]));
                    s += d * d;
                }
                return std::sqrt(s);
            }
            case Kind::circle: {
                double h = 0.0;
                for (std::size_t k = 0; k < 3; ++k) h += (p[k] - a[k]) * b[k];
                double r2 = 0.0;
                for (std::size_t k = 0; k < 3; ++k) {
                    const double d = p[k] - a[k] - h * b[k];
                    r2 += d * d;
                }
                const double dr = std::sqrt(r2) - radius;
                return std::sqrt(h * h + dr * dr);
            }
        }
        return std::numeric_limits<double>::infinity();
    }
};

struct Component {
    double measure;                              ///< length or area
    std::function<Vec(Rng&)> sample;             ///< uniform w.r.t. length/area
    std::function<double(Point)> residual;       ///< 0 on the component
};

struct Model {
    std::size_t dim;
    std::vector<Component> components;
    std::vector<Locus> intersection;
};

constexpr double pi = std::numbers::pi;

/// Rejection sampling of a parameter with density proportional to `density`
/// on [lo, hi], given an upper bound of the density.
inline double sample_density(Rng& rng, double lo, double hi, double bound, const std::function<double(double)>& density) {
    for (;;) {
        const double t = rng.uniform(lo, hi);
        if (rng.uniform() * bound <= density(t)) return t;
    }
}

inline double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals = 20000) {
    const double h = (hi - lo) / intervals;
    double s = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double excess(double v, double lo, double hi) { return v < lo ? lo - v : (v > hi ? v - hi : 0.0); }

/// Square patch {c + s u + t v : |s|, |t| <= half} with orthonormal u, v.
inline Component square_patch(Vec c, Vec u, Vec v, double half) {
    Component comp;
    comp.measure = 4.0 * half * half;
    comp.sample = [=](Rng& rng) {
        const double s = rng.uniform(-half, half), t = rng.uniform(-half, half);
        Vec p(3);
        for (int k = 0; k < 3; ++k) p[k] = c[k] + s * u[k] + t * v[k];
        return p;
    };
    comp.residual = [=](Point p) {
        double s = 0, t = 0, n2 = 0;
        Vec d(3);
        for (int k = 0; k < 3; ++k) d[k] = p[k] - c[k];
        for (int k = 0; k < 3; ++k) {
            s += d[k] * u[k];
            t += d[k] * v[k];
        }
        for (int k = 0; k < 3; ++k) {
            const double off = d[k] - s * u[k] - t * v[k];
            n2 += off * off;
        }
        return std::sqrt(n2) + excess(s, -half, half) + excess(t, -half, half);
    };
    return comp;
}

/// Segment of length `len` through `center` in direction (unit) `dir`, in 2D.
inline Component line_segment(Vec center, Vec dir, double len) {
    Component comp;
    comp.measure = len;
    comp.sample = [=](Rng& rng) {
        const double s = rng.uniform(-len / 2, len / 2);
        return Vec{center[0] + s * dir[0], center[1] + s * dir[1]};
    };
    comp.residual = [=](Point p) {
        const double dx = p[0] - center[0], dy = p[1] - center[1];
        const double along = dx * dir[0] + dy * dir[1];
        return std::abs(dx * dir[1] - dy * dir[0]) + excess(along, -len / 2, len / 2);
    };
    return comp;
}

/// Planar Archimedean arc (scale * a * t) (cos t, sin t), t in [t0, t1];
/// sign = -1 reflects it through the origin. Sampled uniformly in arc length.
struct SpiralArc {
    double a, t0, t1, sign = 1.0;
    double scale = 1.0;

    double speed(double t) const { return std::sqrt(1.0 + t * t); }
    double length() const {
        auto prim = [](double t) { return 0.5 * (t * std::sqrt(1 + t * t) + std::asinh(t)); };
        return scale * a * (prim(t1) - prim(t0));
    }
    double sample_t(Rng& rng) const {
        return sample_density(rng, t0, t1, speed(t1), [&](double t) { return speed(t); });
    }
    std::array<double, 2> at(double t) const {
        return {sign * scale * a * t * std::cos(t), sign * scale * a * t * std::sin(t)};
    }
    /// Distance-like residual of (u, v) from the arc, through the polar form.
    double residual(double u, double v) const {
        u *= sign;
        v *= sign;
        const double r = std::hypot(u, v) / (scale * a);
        const double phi = std::atan2(v, u);
        double best = std::numeric_limits<double>::infinity();
        for (int j = -1; j <= static_cast<int>(t1 / (2 * pi)) + 2; ++j) {
            const double t = phi + 2 * pi * j;
            if (t < t0 - 1e-9 || t > t1 + 1e-9) continue;
            best = std::min(best, std::abs(r - t) * scale * a);
        }
        return best;
    }
};

inline Vec unit(Vec v) {
    double n = 0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (double& x : v) x /= n;
    return v;
}

inline Locus segment(Vec a, Vec b) { return {Locus::Kind::segment, std::move(a), std::move(b), 0.0}; }
inline Locus point(Vec a) { return {Locus::Kind::point, std::move(a), {}, 0.0}; }
inline Locus circle(Vec center, Vec normal, double radius) {
    return {Locus::Kind::circle, std::move(center), unit(std::move(normal)), radius};
}

// Shapes. Every constant below can be overridden through DatasetSpec::shape
// under the quoted key.

/// Three squares of side `side` sharing the z-axis, at 0, 60 and 120 degrees.
inline Model three_planes(const DatasetSpec& s) {
    const double half = s.param("side", 1.0) / 2;
    Model m{3, {}, {segment({0, 0, -half}, {0, 0, half})}};
    for (int k = 0; k < 3; ++k) {
        const double phi = k * pi / 3;
        m.components.push_back(square_patch({0, 0, 0}, {std::cos(phi), std::sin(phi), 0}, {0, 0, 1}, half));
    }
    return m;
}

/// Arc-length-uniform Archimedean spirals r = a t, t in [t_start, t_start +
/// extent], the second one mirrored through the origin (interleaved, no
/// crossing). a defaults to 1 / (t_start + extent) so the outer radius is 1.
inline Model two_spirals(const DatasetSpec& s) {
    const double t0 = s.param("t_start", pi / 2);
    const double t1 = t0 + s.param("extent", 3 * pi);
    const double a = s.param("a", 1.0 / t1);
    Model m{2, {}, {}};
    for (const double sign : {1.0, -1.0}) {
        const SpiralArc arc{a, t0, t1, sign};
        m.components.push_back({arc.length(),
                                [arc](Rng& rng) {
                                    const auto p = arc.at(arc.sample_t(rng));
                                    return Vec{p[0], p[1]};
                                },
                                [arc](Point p) { return arc.residual(p[0], p[1]); }});
    }
    return m;
}

/// Five coplanar segments of `length` through the origin, 36 degrees apart.
inline Model five_segments(const DatasetSpec& s) {
    const double len = s.param("length", 1.0);
    Model m{2, {}, {point({0, 0})}};
    for (int k = 0; k < 5; ++k) {
        const double phi = k * pi / 5;
        m.components.push_back(line_segment({0, 0}, {std::cos(phi), std::sin(phi)}, len));
    }
    return m;
}

/// Spheres of `radius` centered at (+-offset/2, 0, 0).
inline Model two_spheres(const DatasetSpec& s) {
    const double r = s.param("radius", 1.0);
    const double off = s.param("offset", 1.0);
    Model m{3, {}, {}};
    for (const double cx : {-off / 2, off / 2}) {
        m.components.push_back({4 * pi * r * r,
                                [=](Rng& rng) {
                                    auto p = rng.on_sphere(3);
                                    return Vec{cx + r * p[0], r * p[1], r * p[2]};
                                },
                                [=](Point p) { return std::abs(std::hypot(p[0] - cx, p[1], p[2]) - r); }});
    }
    if (off < 2 * r) m.intersection.push_back(circle({0, 0, 0}, {1, 0, 0}, std::sqrt(r * r - off * off / 4)));
    return m;
}

/// Angles (polar, in [0, 2pi)) where the rose |cos 2phi| * R meets the
/// circle of radius c: cos(2 phi) = +-c / R.
inline std::vector<double> rose_circle_crossings(double rose_radius, double circle_radius) {
    std::vector<double> out;
    const double q = circle_radius / rose_radius;
    if (!(q < 1.0)) return out;
    const double base = std::acos(q) / 2;         // cos 2phi = q
    const double alt = (pi - std::acos(q)) / 2;   // cos 2phi = -q
    for (int k = 0; k < 2; ++k)
        for (const double phi : {base, pi - base, alt, pi - alt}) out.push_back(phi + k * pi);
    std::sort(out.begin(), out.end());
    return out;
}

/// Four-petal rose r = R cos(2t) and a concentric circle of radius c.
inline Model rose_and_circle(const DatasetSpec& s) {
    const double R = s.param("rose_radius", 1.0);
    const double c = s.param("circle_radius", 0.7);
    auto speed = [](double t) { return std::hypot(std::cos(2 * t), 2 * std::sin(2 * t)); };
    Model m{2, {}, {}};
    m.components.push_back({R * simpson(speed, 0, 2 * pi),
                            [=](Rng& rng) {
                                const double t = sample_density(rng, 0, 2 * pi, 2.0, speed);
                                const double r = R * std::cos(2 * t);
                                return Vec{r * std::cos(t), r * std::sin(t)};
                            },
                            [=](Point p) {
                                const double rho = std::hypot(p[0], p[1]);
                                return std::abs(rho - R * std::abs(std::cos(2 * std::atan2(p[1], p[0]))));
                            }});
    m.components.push_back({2 * pi * c,
                            [=](Rng& rng) {
                                const double t = rng.uniform(0, 2 * pi);
                                return Vec{c * std::cos(t), c * std::sin(t)};
                            },
                            [=](Point p) { return std::abs(std::hypot(p[0], p[1]) - c); }});
    for (const double phi : rose_circle_crossings(R, c)) m.intersection.push_back(point({c * std::cos(phi), c * std::sin(phi)}));
    return m;
}

/// Cone with apex at the origin, axis +z, half-angle `half_angle_deg`,
/// height `height`; horizontal square of half-side `plane_half` at
/// z = `plane_height`.
inline Model cone_and_plane(const DatasetSpec& s) {
    const double alpha = s.param("half_angle_deg", 45.0) * pi / 180;
    const double h = s.param("height", 1.0);
    const double zp = s.param("plane_height", 0.5);
    const double half = s.param("plane_half", 1.0);
    const double ta = std::tan(alpha);
    Model m{3, {}, {}};
    m.components.push_back({pi * h * ta * h / std::cos(alpha),
                            [=](Rng& rng) {
                                const double z = h * std::sqrt(rng.uniform());  // area element grows with z
                                const double u = rng.uniform(0, 2 * pi);
                                return Vec{z * ta * std::cos(u), z * ta * std::sin(u), z};
                            },
                            [=](Point p) {
                                const double rho = std::hypot(p[0], p[1]);
                                return std::abs(rho * std::cos(alpha) - p[2] * std::sin(alpha)) + excess(p[2], 0, h);
                            }});
    m.components.push_back(square_patch({0, 0, zp}, {1, 0, 0}, {0, 1, 0}, half));
    if (zp > 0 && zp < h) m.intersection.push_back(circle({0, 0, zp}, {0, 0, 1}, zp * ta));
    return m;
}

/// Swiss roll (t cos t, y, t sin t) * scale, t in [1.5pi, 4.5pi], |y| <= width/2.
inline Component swiss_roll(double scale, double width, double y_center) {
    const SpiralArc arc{1.0, 1.5 * pi, 4.5 * pi, 1.0, scale};
    Component comp;
    comp.measure = arc.length() * width;
    comp.sample = [=](Rng& rng) {
        const auto p = arc.at(arc.sample_t(rng));
        return Vec{p[0], y_center + rng.uniform(-width / 2, width / 2), p[1]};
    };
    comp.residual = [=](Point p) { return arc.residual(p[0], p[2]) + excess(p[1] - y_center, -width / 2, width / 2); };
    return comp;
}

/// Swiss roll scaled into [-1, 1] and the horizontal square z = 0,
/// |x| <= plane_half, sharing the roll's y-extent.
inline Model roll_and_plane(const DatasetSpec& s) {
    const double width = s.param("width", 1.0);
    const double half = s.param("plane_half", 1.0);
    const double scale = 1.0 / (4.5 * pi);
    Model m{3, {swiss_roll(scale, width, 0.0)}, {}};
    Component plane = square_patch({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, half);
    if (width != 2 * half) {
        // Rectangle |x| <= half, |y| <= width/2.
        plane.measure = 2 * half * width;
        plane.sample = [=](Rng& rng) { return Vec{rng.uniform(-half, half), rng.uniform(-width / 2, width / 2), 0.0}; };
        plane.residual = [=](Point p) { return std::abs(p[2]) + excess(p[0], -half, half) + excess(p[1], -width / 2, width / 2); };
    }
    m.components.push_back(plane);
    for (const double t : {2 * pi, 3 * pi, 4 * pi}) {
        const double x = scale * t * std::cos(t);
        if (std::abs(x) <= half) m.intersection.push_back(segment({x, -width / 2, 0}, {x, width / 2, 0}));
    }
    return m;
}

/// S-shaped surface (0.5 sin t, y, 0.5 sgn(t)(cos t - 1)), t in
/// [-1.5pi, 1.5pi], |y| <= 1; the vertical plane x = 0 through it (the bar
/// of the dollar sign), y in [-1, 2.4], |z| <= 1.2; and a Swiss roll of
/// radius 0.5 centered on y = 1.8 that the plane also cuts.
inline Model dollar_sign_plane_roll(const DatasetSpec&) {
    Model m{3, {}, {}};
    m.components.push_back({3 * pi * 0.5 * 2.0,
                            [](Rng& rng) {
                                const double t = rng.uniform(-1.5 * pi, 1.5 * pi);  // unit speed in (x, z)
                                const double sg = t < 0 ? -1.0 : 1.0;
                                return Vec{0.5 * std::sin(t), rng.uniform(-1, 1), 0.5 * sg * (std::cos(t) - 1)};
                            },
                            [](Point p) {
                                // Three-quarter circles of radius 0.5 around (0, +-0.5) in (x, z); the
                                // missing quarters are x < 0 above the lower center and x > 0 below the
                                // upper one, where the nearest point is an arc end.
                                const bool upper = p[2] >= 0;
                                const double zc = upper ? 0.5 : -0.5;
                                const bool gap = upper ? (p[0] > 0 && p[2] < zc) : (p[0] < 0 && p[2] > zc);
                                double r;
                                if (!gap) {
                                    r = std::abs(std::hypot(p[0], p[2] - zc) - 0.5);
                                } else {
                                    const double ex = upper ? 0.5 : -0.5;
                                    r = std::min(std::hypot(p[0], p[2]), std::hypot(p[0] - ex, p[2] - ex));
                                }
                                return r + excess(p[1], -1, 1);
                            }});
    m.components.push_back({3.4 * 2.4,
                            [](Rng& rng) { return Vec{0.0, rng.uniform(-1, 2.4), rng.uniform(-1.2, 1.2)}; },
                            [](Point p) { return std::abs(p[0]) + excess(p[1], -1, 2.4) + excess(p[2], -1.2, 1.2); }});
    const double scale = 0.5 / (4.5 * pi);
    m.components.push_back(swiss_roll(scale, 1.0, 1.8));
    // S-curve meets x = 0 at t = -pi, 0, pi.
    for (const double z : {-1.0, 0.0, 1.0}) m.intersection.push_back(segment({0, -1, z}, {0, 1, z}));
    // The roll meets x = 0 where cos t = 0.
    for (const double t : {1.5 * pi, 2.5 * pi, 3.5 * pi, 4.5 * pi})
        m.intersection.push_back(segment({0, 1.3, scale * t * std::sin(t)}, {0, 2.3, scale * t * std::sin(t)}));
    return m;
}

inline Model make_model(const DatasetSpec& s) {
    if (s.name == "three_planes") return three_planes(s);
    if (s.name == "two_spirals") return two_spirals(s);
    if (s.name == "five_segments") return five_segments(s);
    if (s.name == "two_spheres") return two_spheres(s);
    if (s.name == "rose_and_circle") return rose_and_circle(s);
    if (s.name == "cone_and_plane") return cone_and_plane(s);
    if (s.name == "roll_and_plane") return roll_and_plane(s);
    if (s.name == "dollar_sign_plane_roll") return dollar_sign_plane_roll(s);
    throw DomainError("unknown dataset '" + s.name + "'");
}

}  // namespace synth

inline std::size_t dataset_dimension(const DatasetSpec& spec) { return synth::make_model(spec).dim; }
inline std::size_t dataset_components(const DatasetSpec& spec) { return synth::make_model(spec).components.size(); }

inline std::vector<double> resolved_weights(const DatasetSpec& spec) {
    const auto model = synth::make_model(spec);
    if (!spec.weights.empty()) return spec.weights;
    std::vector<double> w;
    double total = 0;
    for (const auto& c : model.components) total += c.measure;
    for (const auto& c : model.components) w.push_back(c.measure / total);
    return w;
}

inline void validate(const DatasetSpec& spec) {
    const auto model = synth::make_model(spec);
    if (!spec.weights.empty()) {
        if (spec.weights.size() != model.components.size())
            throw DomainError("weights: expected " + std::to_string(model.components.size()) + " entries for " + spec.name);
        double sum = 0;
        for (double w : spec.weights) {
            if (!(w >= 0.0)) throw DomainError("weights: entries must be non-negative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw DomainError("weights: must sum to 1 (got " + std::to_string(sum) + ")");
    }
    if (!(spec.noise >= 0.0)) throw DomainError("noise: must be non-negative");
    if (spec.n_points == 0) throw DomainError("n_points: must be positive");
}

/// Distance from `p` to the closed-form intersection set of the dataset's
/// components. Throws NoIntersection when the components do not meet.
inline double analytic_intersection_distance(const DatasetSpec& spec, Point p) {
    const auto model = synth::make_model(spec);
    if (model.intersection.empty()) throw NoIntersection(spec.name + " has no intersection set");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& l : model.intersection) best = std::min(best, l.distance(p));
    return best;
}

/// Median distance from a point to its nearest other point.
inline double median_nearest_spacing(const PointCloud& cloud) {
    if (cloud.size() < 2) return 0.0;
    const KdTree tree(cloud);
    std::vector<double> d(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) d[i] = std::sqrt(tree.nearest(cloud[i], 1, i).front().first);
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
    return d[d.size() / 2];
}

/**
 * Draws spec.n_points from the noisy mixture. The stream depends only on the
 * spec (deterministic per seed). Ambiguous flags mark points within the
 * ambiguity radius of the intersection set.
 */
inline LabeledCloud sample_dataset(const DatasetSpec& spec) {
    validate(spec);
    const auto model = synth::make_model(spec);
    const auto weights = resolved_weights(spec);
    Rng rng(mix_seed(spec.seed, 0xDA7A));

    LabeledCloud out{PointCloud(model.dim), PointCloud(model.dim), 0.0};
    std::vector<double> cumulative(weights.size());
    std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        const double u = rng.uniform() * cumulative.back();
        std::size_t k = 0;
        while (k + 1 < cumulative.size() && !(u < cumulative[k])) ++k;
        while (weights[k] == 0.0) --k;  // u landed exactly on a boundary
        const auto s = model.components[k].sample(rng);
        auto x = s;
        if (spec.noise > 0) {
            const auto z = rng.in_ball(model.dim, spec.noise);
            for (std::size_t d = 0; d < model.dim; ++d) x[d] += z[d];
        }
        out.clean.push_back(s);
        out.points.push_back(x);
        out.points.labels.push_back(static_cast<int>(k));
        out.clean.labels.push_back(static_cast<int>(k));
    }

    out.ambiguity_radius = std::isnan(spec.ambiguity_radius) ? 2 * spec.noise + median_nearest_spacing(out.points)
                                                             : spec.ambiguity_radius;
    out.points.ambiguous.assign(spec.n_points, false);
    if (!model.intersection.empty())
        for (std::size_t i = 0; i < spec.n_points; ++i) {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& l : model.intersection) d = std::min(d, l.distance(out.points[i]));
            out.points.ambiguous[i] = d <= out.ambiguity_radius;
        }
    return out;
}

/// Residual of `p` against component `k` of the dataset (0 on the surface).
inline double surface_residual(const DatasetSpec& spec, std::size_t k, Point p) {
    const auto model = synth::make_model(spec);
    if (k >= model.components.size()) throw DomainError("component index out of range");
    return model.components[k].residual(p);
}

/// Reads the [dataset] and [shape] sections of a key-value config.
inline DatasetSpec dataset_spec_from_config(const KeyValueConfig& cfg) {
    DatasetSpec s;
    s.name = cfg.get_string("dataset.name", s.name);
    if (std::find(dataset_names().begin(), dataset_names().end(), s.name) == dataset_names().end())
        throw DomainError("name: unknown dataset '" + s.name + "'");
    s.n_points = cfg.get_uint("dataset.n_points", s.n_points);
    s.weights = cfg.get_doubles("dataset.weights");
    s.noise = cfg.get_double("dataset.noise", s.noise);
    s.seed = cfg.get_uint("dataset.seed", s.seed);
    const auto amb = cfg.get_string("dataset.ambiguity_radius", "auto");
    if (amb != "auto") s.ambiguity_radius = cfg.get_double("dataset.ambiguity_radius", 0.0);
    for (const auto& [k, v] : cfg.section("shape")) s.shape[k] = cfg.get_double("shape." + k, 0.0);
    validate(s);
    return s;
}

}  // namespace pbc
