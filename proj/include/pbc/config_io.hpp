#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "pbc/clustering.hpp"
#include "pbc/geometry.hpp"
#include "pbc/kv_config.hpp"
#include "pbc/synthdata.hpp"

namespace pbc {

/// Shortest decimal text that parses back to exactly `v`.
inline std::string exact_text(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/**
 * Reads the `[cluster]` keys: graph, q, epsilon, inner_fraction, k, m,
 * constraint, angle (degrees) or angle_rad, curvature, engine, seed, dedupe,
 * landmarks (uniform | stratified). Missing keys keep `base`.
 */
inline PBCConfig pbc_config_from(const KeyValueConfig& cfg, PBCConfig base = {}) {
    const std::string p = "cluster.";
    base.graph.rule = parse_graph_rule(cfg.get_string(p + "graph", to_string(base.graph.rule)));
    base.graph.q = cfg.get_uint(p + "q", base.graph.q);
    base.graph.epsilon = cfg.get_double(p + "epsilon", base.graph.epsilon);
    base.graph.inner_fraction = cfg.get_double(p + "inner_fraction", base.graph.inner_fraction);
    base.k = cfg.get_uint(p + "k", base.k);
    base.m = cfg.get_uint(p + "m", base.m);
    const auto kind = parse_constraint_kind(cfg.get_string(p + "constraint", to_string(base.constraint.kind)));
    if (kind != base.constraint.kind) base.constraint.bound = std::numeric_limits<double>::quiet_NaN();
    base.constraint.kind = kind;
    if (kind == ConstraintKind::angle) {
        if (cfg.has(p + "angle_rad")) base.constraint.bound = cfg.get_double(p + "angle_rad", 0.0);
        else if (cfg.has(p + "angle")) base.constraint.bound = radians(cfg.get_double(p + "angle", 0.0));
    } else if (cfg.has(p + "curvature")) {
        base.constraint.bound = cfg.get_double(p + "curvature", 0.0);
    }
    if (std::isnan(base.constraint.bound))
        throw DomainError(std::string("constraint: missing bound key '") +
                          (kind == ConstraintKind::angle ? "angle" : "curvature") + "'");
    base.engine = parse_engine(cfg.get_string(p + "engine", to_string(base.engine)));
    base.seed = cfg.get_uint(p + "seed", base.seed);
    base.dedupe = cfg.get_bool(p + "dedupe", base.dedupe);
    const auto lm = cfg.get_string(p + "landmarks", base.stratified_landmarks ? "stratified" : "uniform");
    if (lm != "uniform" && lm != "stratified")
        throw DomainError("landmarks: expected uniform or stratified, got '" + lm + "'");
    base.stratified_landmarks = lm == "stratified";
    return base;
}

/// Writes every `[cluster]` key of the resolved configuration, so that
/// reading it back reproduces `c` exactly.
inline void put_pbc_config(KeyValueConfig& cfg, const PBCConfig& c) {
    const std::string p = "cluster.";
    cfg.set(p + "graph", to_string(c.graph.rule));
    cfg.set(p + "q", std::to_string(c.graph.q));
    cfg.set(p + "epsilon", exact_text(c.graph.epsilon));
    cfg.set(p + "inner_fraction", exact_text(c.graph.inner_fraction));
    cfg.set(p + "k", std::to_string(c.k));
    cfg.set(p + "m", std::to_string(c.landmarks()));
    cfg.set(p + "constraint", to_string(c.constraint.kind));
    if (c.constraint.kind == ConstraintKind::angle) {
        std::string deg;
        for (int decimals = 0; decimals <= 17 && deg.empty(); ++decimals) {
            char buf[64];
            const auto res =
                std::to_chars(buf, buf + sizeof buf, degrees(c.constraint.bound), std::chars_format::fixed, decimals);
            const std::string text(buf, res.ptr);
            if (radians(std::stod(text)) == c.constraint.bound) deg = text;
        }
        if (!deg.empty()) cfg.set(p + "angle", deg);
        else cfg.set(p + "angle_rad", exact_text(c.constraint.bound));
    } else {
        cfg.set(p + "curvature", exact_text(c.constraint.bound));
    }
    cfg.set(p + "engine", to_string(c.engine));
    cfg.set(p + "seed", std::to_string(c.seed));
    cfg.set(p + "dedupe", c.dedupe ? "true" : "false");
    cfg.set(p + "landmarks", c.stratified_landmarks ? "stratified" : "uniform");
}

/// Writes the `[dataset]` and `[shape]` keys of a resolved dataset spec.
inline void put_dataset_spec(KeyValueConfig& cfg, const DatasetSpec& s) {
    cfg.set("dataset.name", s.name);
    cfg.set("dataset.n_points", std::to_string(s.n_points));
    if (!s.weights.empty()) {
        std::string w;
        for (std::size_t i = 0; i < s.weights.size(); ++i) w += (i ? ", " : "") + exact_text(s.weights[i]);
        cfg.set("dataset.weights", w);
    }
    cfg.set("dataset.noise", exact_text(s.noise));
    cfg.set("dataset.seed", std::to_string(s.seed));
    cfg.set("dataset.ambiguity_radius", std::isnan(s.ambiguity_radius) ? "auto" : exact_text(s.ambiguity_radius));
    for (const auto& [k, v] : s.shape) cfg.set("shape." + k, exact_text(v));
}

}  // namespace pbc
