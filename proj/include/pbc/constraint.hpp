#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "pbc/error.hpp"
#include "pbc/geometry.hpp"

namespace pbc {

enum class ConstraintKind { curvature, angle };

/// Bound on every interior triplet of a path: curvature < kappa, or turn
/// angle <= theta.
struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::angle;
    double bound = 0.0;

    /// Relative tolerance on the bound.
    static constexpr double slack = 1e-12;

    static ConstraintSpec curvature(double kappa) {
        ConstraintSpec c{ConstraintKind::curvature, kappa};
        c.validate();
        return c;
    }
    static ConstraintSpec angle(double theta) {
        ConstraintSpec c{ConstraintKind::angle, theta};
        c.validate();
        return c;
    }

    void validate() const {
        if (!(std::isfinite(bound) && bound > 0.0)) throw DomainError("constraint bound must be finite and positive");
        if (kind == ConstraintKind::angle && !(bound < std::numbers::pi))
            throw DomainError("angle constraint must lie in (0, pi)");
    }

    bool admits(const Triplet& t) const {
        if (kind == ConstraintKind::curvature) return pbc::curvature(t) < bound * (1.0 + slack);
        return turn_angle(t) <= bound * (1.0 + slack);
    }
};

inline std::string to_string(ConstraintKind k) { return k == ConstraintKind::curvature ? "curvature" : "angle"; }

inline ConstraintKind parse_constraint_kind(const std::string& s) {
    if (s == "curvature") return ConstraintKind::curvature;
    if (s == "angle") return ConstraintKind::angle;
    throw DomainError("unknown constraint kind '" + s + "' (expected curvature or angle)");
}

}  // namespace pbc
