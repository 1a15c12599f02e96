// pbc: command-line front end for path-based manifold clustering.
//
//   pbc generate --spec benchmarks/two_spheres.ini --out cloud.csv
//   pbc cluster  --in cloud.csv --config benchmarks/two_spheres.ini --out-dir run/
//   pbc pca | tune | sweep | hist | eval   (see --help of each)
//
// Exit status: 0 success, 2 usage or validation error, 3 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbc/config_io.hpp"
#include "pbc/csv.hpp"
#include "pbc/evaluation.hpp"
#include "pbc/pca.hpp"
#include "pbc/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using pbc::KeyValueConfig;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

KeyValueConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    return pbc::KeyValueConfig::parse(in, path);
}

pbc::PointCloud load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open input file '" + path + "'");
    return pbc::csv::read_points(in, path);
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

/// Command-line overrides of the `[cluster]` section.
struct ClusterFlags {
    std::string config;
    std::optional<std::string> graph, constraint, engine, landmarks;
    std::optional<std::size_t> q, k, m;
    std::optional<double> epsilon, inner_fraction, angle, curvature;
    std::optional<std::uint64_t> seed;
    bool dedupe = false;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "key = value file; its [cluster] section is read");
        app->add_option("--graph", graph, "neighborhood rule: knn, eps_ball or annulus");
        app->add_option("--q", q, "neighbors per point (knn)");
        app->add_option("--epsilon", epsilon, "radius (eps_ball, annulus)");
        app->add_option("--inner-fraction", inner_fraction, "annulus inner radius as a fraction of epsilon");
        app->add_option("--k", k, "number of clusters");
        app->add_option("--m", m, "number of landmarks");
        app->add_option("--constraint", constraint, "angle or curvature");
        app->add_option("--angle", angle, "angle bound in degrees");
        app->add_option("--curvature", curvature, "curvature bound");
        app->add_option("--engine", engine, "greedy or exact");
        app->add_option("--seed", seed, "landmark seed (overrides MANIFOLD_PBC_SEED)");
        app->add_option("--landmarks", landmarks, "uniform or stratified");
        app->add_flag("--dedupe", dedupe, "merge duplicate points instead of failing");
    }

    /// Config file, then MANIFOLD_PBC_SEED, then flags.
    KeyValueConfig resolve_kv() const {
        KeyValueConfig kv = config.empty() ? KeyValueConfig{} : load_config(config);
        if (const char* env = std::getenv("MANIFOLD_PBC_SEED"); env && *env) kv.set("cluster.seed", env);
        auto put = [&](const char* key, const auto& v) {
            if (!v) return;
            std::ostringstream s;
            s << std::setprecision(17) << *v;
            kv.set(std::string("cluster.") + key, s.str());
        };
        put("graph", graph);
        put("q", q);
        put("epsilon", epsilon);
        put("inner_fraction", inner_fraction);
        put("k", k);
        put("m", m);
        put("constraint", constraint);
        if (angle) {
            kv.set("cluster.constraint", constraint.value_or("angle"));
            put("angle", angle);
        }
        if (curvature) {
            kv.set("cluster.constraint", constraint.value_or("curvature"));
            put("curvature", curvature);
        }
        put("engine", engine);
        put("seed", seed);
        put("landmarks", landmarks);
        if (dedupe) kv.set("cluster.dedupe", "true");
        return kv;
    }

    pbc::PBCConfig resolve() const { return pbc::pbc_config_from(resolve_kv()); }
};

void write_scatter(const fs::path& path, const pbc::PointCloud& cloud, const std::vector<int>& labels,
                   const std::string& title) {
    std::vector<double> x(cloud.size()), y(cloud.size(), 0.0);
    std::string xl = "x1", yl = cloud.dim() > 1 ? "x2" : "";
    if (cloud.dim() <= 2) {
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            x[i] = cloud[i][0];
            if (cloud.dim() > 1) y[i] = cloud[i][1];
        }
    } else {
        const auto p = pbc::pca(cloud, 2);
        for (std::size_t i = 0; i < cloud.size(); ++i) x[i] = p.scores[i][0], y[i] = p.scores[i][1];
        xl = "PC1", yl = "PC2";
    }
    auto out = open_out(path);
    pbc::svg::write_plot(out, pbc::svg::scatter_by_label(x, y, labels), title, xl, yl);
}

// ------------------------------------------------------------------ generate

struct GenerateArgs {
    std::string spec, out, svg, echo;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_points;
    std::optional<double> noise;
};

int run_generate(const GenerateArgs& a) {
    KeyValueConfig kv = load_config(a.spec);
    if (a.seed) kv.set("dataset.seed", std::to_string(*a.seed));
    if (a.n_points) kv.set("dataset.n_points", std::to_string(*a.n_points));
    if (a.noise) kv.set("dataset.noise", pbc::exact_text(*a.noise));
    const pbc::DatasetSpec spec = pbc::dataset_spec_from_config(kv);
    const pbc::LabeledCloud data = pbc::sample_dataset(spec);
    {
        auto out = open_out(a.out);
        pbc::csv::write_points(out, data.points);
    }
    if (!a.echo.empty()) {
        KeyValueConfig echo;
        pbc::put_dataset_spec(echo, spec);
        auto out = open_out(a.echo);
        echo.write(out);
    }
    if (!a.svg.empty()) write_scatter(a.svg, data.points, data.points.labels, spec.name + " (ground truth)");
    std::size_t amb = 0;
    for (bool b : data.points.ambiguous) amb += b;
    std::cout << "wrote " << data.points.size() << " points of " << spec.name << " to " << a.out << " (" << amb
              << " ambiguous, radius " << data.ambiguity_radius << ")\n";
    return 0;
}

// ------------------------------------------------------------------- cluster

struct ClusterArgs {
    std::string in, out_dir;
    bool svg = false;
    ClusterFlags flags;
};

int run_cluster(const ClusterArgs& a) {
    const pbc::PointCloud cloud = load_points(a.in);
    const pbc::PBCConfig config = a.flags.resolve();
    const pbc::ClusteringResult r = pbc::run_pbc(cloud, config);
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);

    {
        auto out = open_out(dir / "labels.csv");
        pbc::csv::write_labels(out, r.labels);
    }
    {
        auto out = open_out(dir / "features.csv");
        out << "row";
        for (std::size_t lm : r.landmarks) out << ",landmark_" << lm;
        out << '\n';
        for (std::size_t i = 0; i < r.features.n_points; ++i) {
            out << i;
            for (auto b : r.features.row(i)) out << ',' << static_cast<int>(b);
            out << '\n';
        }
    }
    KeyValueConfig echo;
    pbc::put_pbc_config(echo, config);
    {
        auto out = open_out(dir / "config.ini");
        echo.write(out);
    }

    ordered_json meta;
    meta["input"] = a.in;
    meta["n_points"] = cloud.size();
    meta["dimension"] = cloud.dim();
    meta["config"] = ordered_json::object();
    for (const auto& [k, v] : echo.entries()) meta["config"][k.substr(k.find('.') + 1)] = v;
    meta["landmarks"] = r.landmarks;
    meta["cluster_sizes"] = r.cluster_sizes;
    meta["n_distinct_vectors"] = r.n_distinct_vectors;
    meta["n_unreached"] = r.n_unreached;
    meta["graph"] = {{"n_edges", r.n_edges}, {"max_degree", r.max_degree}, {"n_components", r.n_components}};
    meta["warnings"] = r.warnings;
    if (cloud.has_labels()) {
        const auto rep = pbc::misclustering_rate(r.labels, cloud.labels, cloud.ambiguous);
        meta["accuracy"] = rep.accuracy;
        meta["n_evaluated"] = rep.n_evaluated;
        meta["n_excluded_ambiguous"] = rep.n_excluded;
        std::cout << "accuracy " << rep.accuracy << " (" << rep.n_excluded << " ambiguous points excluded)\n";
    }
    meta["seconds"] = {{"graph", r.seconds_graph}, {"features", r.seconds_features}, {"linkage", r.seconds_linkage}};
    {
        auto out = open_out(dir / "metadata.json");
        out << meta.dump(2) << '\n';
    }
    if (a.svg) write_scatter(dir / "clusters.svg", cloud, r.labels, "path-based clustering");
    for (const auto& w : r.warnings) std::cerr << "pbc: warning: " << w << '\n';
    std::cout << "clustered " << cloud.size() << " points into " << config.k << " clusters; outputs in "
              << dir.string() << '\n';
    return 0;
}

// ----------------------------------------------------------------------- pca

struct PcaArgs {
    std::string in, out, svg;
    std::size_t components = 10;
};

int run_pca(const PcaArgs& a) {
    const pbc::PointCloud cloud = load_points(a.in);
    const pbc::PcaResult r = pbc::pca(cloud, a.components);
    {
        auto out = open_out(a.out);
        pbc::csv::write_points(out, r.scores);
    }
    std::cout << "explained variance ratio:";
    for (double v : r.explained_ratio) std::cout << ' ' << v;
    std::cout << '\n';
    if (!a.svg.empty()) {
        std::vector<double> x, y;
        for (std::size_t c = 0; c < r.explained_ratio.size(); ++c) x.push_back(c + 1), y.push_back(r.explained_ratio[c]);
        auto out = open_out(a.svg);
        pbc::svg::write_plot(out, {{"explained variance ratio", x, y, 0, true}}, "PCA spectrum", "component",
                             "ratio");
    }
    return 0;
}

// ---------------------------------------------------------------------- tune

struct TuneArgs {
    std::string in, out, svg, echo;
    double fraction = 0.01;
    double initial = 50.0;
    std::size_t max_iters = 10;
    ClusterFlags flags;
};

int run_tune(const TuneArgs& a) {
    const pbc::PointCloud cloud = load_points(a.in);
    if (!cloud.has_labels()) throw UsageError("tune needs a label column in the input");
    const pbc::PBCConfig config = a.flags.resolve();
    const auto r = pbc::tune_constraint(cloud, config, a.fraction, pbc::radians(a.initial), a.max_iters);
    {
        auto out = open_out(a.out);
        out << "step,theta_deg,error\n" << std::setprecision(17);
        for (std::size_t i = 0; i < r.trace.size(); ++i)
            out << i << ',' << pbc::degrees(r.trace[i].theta) << ',' << r.trace[i].error << '\n';
    }
    if (!a.echo.empty()) {
        pbc::PBCConfig tuned = config;
        tuned.constraint = r.constraint;
        KeyValueConfig echo;
        pbc::put_pbc_config(echo, tuned);
        auto out = open_out(a.echo);
        echo.write(out);
    }
    if (!a.svg.empty()) {
        pbc::svg::Series s{"error", {}, {}, 0, false};
        for (const auto& t : r.trace) s.x.push_back(pbc::degrees(t.theta)), s.y.push_back(t.error);
        auto out = open_out(a.svg);
        pbc::svg::write_plot(out, {s}, "angle tuning", "theta (deg)", "labeled error");
    }
    std::cout << "tuned angle " << pbc::degrees(r.constraint.bound) << " deg, labeled error " << r.error << " after "
              << r.trace.size() << " evaluations\n";
    return 0;
}

// --------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string spec, out, svg;
    std::vector<double> levels{0.0};
    bool relative = false;
    std::size_t repeats = 10;
    ClusterFlags flags;
};

int run_sweep(SweepArgs a) {
    const KeyValueConfig kv = load_config(a.spec);
    const pbc::DatasetSpec base = pbc::dataset_spec_from_config(kv);
    if (a.flags.config.empty()) a.flags.config = a.spec;
    pbc::PBCConfig config = a.flags.resolve();
    if (!kv.has("cluster.k") && !a.flags.k) config.k = pbc::dataset_components(base);
    const auto taus = a.relative ? pbc::relative_noise_to_tau(base, a.levels) : a.levels;
    const auto rows = pbc::noise_sweep(base, taus, config, a.repeats);
    {
        auto out = open_out(a.out);
        pbc::write_sweep_csv(out, rows);
    }
    if (!a.svg.empty()) {
        pbc::svg::Series s{"mean accuracy", {}, {}, 0, true};
        for (const auto& r : rows) s.x.push_back(r.tau), s.y.push_back(r.mean_accuracy);
        auto out = open_out(a.svg);
        pbc::svg::write_plot(out, {s}, base.name + " noise sweep", "tau", "accuracy");
    }
    for (const auto& r : rows) std::cout << "tau " << r.tau << " accuracy " << r.mean_accuracy << " +- " << r.std << '\n';
    return 0;
}

// ---------------------------------------------------------------------- hist

struct HistArgs {
    std::string in, out, svg;
    std::size_t landmark = 0;
    std::size_t buckets = 18;
    ClusterFlags flags;
};

int run_hist(const HistArgs& a) {
    const pbc::PointCloud cloud = load_points(a.in);
    const pbc::PBCConfig config = a.flags.resolve();
    const auto g = pbc::build_graph(cloud, config.graph);
    const auto h = pbc::max_angle_histogram(g, a.landmark, cloud.labels, a.buckets);
    {
        auto out = open_out(a.out);
        pbc::write_histogram_csv(out, h);
    }
    if (!a.svg.empty()) {
        std::vector<pbc::svg::Series> series;
        for (const auto& b : h.buckets) {
            auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.group == b.component; });
            if (it == series.end()) {
                series.push_back({"component " + std::to_string(b.component), {}, {}, b.component, true});
                it = series.end() - 1;
            }
            it->x.push_back(pbc::degrees(0.5 * (b.lo + b.hi)));
            it->y.push_back(static_cast<double>(b.count));
        }
        auto out = open_out(a.svg);
        pbc::svg::write_plot(out, series, "maximum turn angle from landmark " + std::to_string(a.landmark),
                             "max angle (deg)", "count");
    }
    std::cout << h.reachable << " vertices reachable from landmark " << a.landmark << '\n';
    return 0;
}

// ---------------------------------------------------------------------- eval

struct EvalArgs {
    std::string labels, truth, out;
    bool keep_ambiguous = false;
};

int run_eval(const EvalArgs& a) {
    std::ifstream lin(a.labels);
    if (!lin) throw UsageError("cannot open labels file '" + a.labels + "'");
    const auto predicted = pbc::csv::read_labels(lin, a.labels);
    const pbc::PointCloud truth = load_points(a.truth);
    if (!truth.has_labels()) throw UsageError("truth file has no label column");
    const auto rep =
        pbc::misclustering_rate(predicted, truth.labels, a.keep_ambiguous ? std::vector<bool>{} : truth.ambiguous);
    ordered_json j;
    j["accuracy"] = rep.accuracy;
    j["n_evaluated"] = rep.n_evaluated;
    j["n_excluded_ambiguous"] = rep.n_excluded;
    j["truth_classes"] = rep.truth_classes;
    j["predicted_classes"] = rep.predicted_classes;
    j["confusion"] = rep.confusion;
    j["matched_prediction"] = rep.matched_prediction;
    if (!a.out.empty()) {
        auto out = open_out(a.out);
        out << j.dump(2) << '\n';
    }
    std::cout << "accuracy " << rep.accuracy << " over " << rep.n_evaluated << " points (" << rep.n_excluded
              << " ambiguous excluded)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Path-based clustering of points sampled near intersecting manifolds"};
    app.require_subcommand(1);
    std::size_t threads = 0;
    app.add_option("--threads", threads, "worker threads (default: all cores)");

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "sample a synthetic benchmark dataset");
    g->add_option("--spec", gen.spec, "dataset spec file")->required();
    g->add_option("--out", gen.out, "output CSV")->required();
    g->add_option("--seed", gen.seed, "override dataset seed");
    g->add_option("--n-points", gen.n_points, "override point count");
    g->add_option("--noise", gen.noise, "override noise radius");
    g->add_option("--svg", gen.svg, "scatter plot of the ground truth");
    g->add_option("--echo", gen.echo, "write the resolved spec here");

    ClusterArgs cl;
    auto* c = app.add_subcommand("cluster", "cluster a point cloud");
    c->add_option("--in", cl.in, "input CSV")->required();
    c->add_option("--out-dir", cl.out_dir, "output directory")->required();
    c->add_flag("--svg", cl.svg, "also write clusters.svg");
    cl.flags.attach(c);

    PcaArgs pc;
    auto* p = app.add_subcommand("pca", "project onto the top principal components");
    p->add_option("--in", pc.in, "input CSV")->required();
    p->add_option("--out", pc.out, "output CSV")->required();
    p->add_option("--components", pc.components, "number of components")->capture_default_str();
    p->add_option("--svg", pc.svg, "explained variance plot");

    TuneArgs tu;
    auto* t = app.add_subcommand("tune", "tune the angle bound on a labeled subset");
    t->add_option("--in", tu.in, "input CSV with a label column")->required();
    t->add_option("--out", tu.out, "search trace CSV")->required();
    t->add_option("--fraction", tu.fraction, "labeled fraction per class")->capture_default_str();
    t->add_option("--initial", tu.initial, "initial angle in degrees")->capture_default_str();
    t->add_option("--max-iters", tu.max_iters, "probes after the initial evaluation")->capture_default_str();
    t->add_option("--svg", tu.svg, "error versus angle plot");
    t->add_option("--echo", tu.echo, "write the tuned [cluster] config here");
    tu.flags.attach(t);

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "accuracy versus noise radius");
    s->add_option("--spec", sw.spec, "dataset spec file (its [cluster] section is used too)")->required();
    s->add_option("--out", sw.out, "output CSV")->required();
    s->add_option("--levels", sw.levels, "noise radii, ascending")->delimiter(',');
    s->add_flag("--relative", sw.relative, "levels are fractions of the bounding-box diagonal");
    s->add_option("--repeats", sw.repeats, "datasets per level")->capture_default_str();
    s->add_option("--svg", sw.svg, "accuracy plot");
    sw.flags.attach(s);

    HistArgs hi;
    auto* h = app.add_subcommand("hist", "maximum turn angle along unconstrained shortest paths");
    h->add_option("--in", hi.in, "input CSV")->required();
    h->add_option("--out", hi.out, "output CSV")->required();
    h->add_option("--landmark", hi.landmark, "source point index")->capture_default_str();
    h->add_option("--buckets", hi.buckets, "histogram buckets over [0, 180] degrees")->capture_default_str();
    h->add_option("--svg", hi.svg, "histogram plot");
    hi.flags.attach(h);

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "score predicted labels against ground truth");
    e->add_option("--labels", ev.labels, "labels CSV (point_index,label)")->required();
    e->add_option("--truth", ev.truth, "point CSV with label and ambiguous columns")->required();
    e->add_option("--out", ev.out, "JSON report");
    e->add_flag("--keep-ambiguous", ev.keep_ambiguous, "score ambiguous points too");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (threads > 0) pbc::set_max_threads(threads);
        if (*g) return run_generate(gen);
        if (*c) return run_cluster(cl);
        if (*p) return run_pca(pc);
        if (*t) return run_tune(tu);
        if (*s) return run_sweep(sw);
        if (*h) return run_hist(hi);
        if (*e) return run_eval(ev);
    } catch (const UsageError& err) {
        std::cerr << "pbc: error: " << err.what() << '\n';
        return 2;
    } catch (const pbc::ParseError& err) {
        std::cerr << "pbc: error: " << err.what() << '\n';
        return 2;
    } catch (const pbc::DomainError& err) {
        std::cerr << "pbc: error: " << err.what() << '\n';
        return 2;
    } catch (const pbc::Error& err) {
        std::cerr << "pbc: error: " << err.what() << '\n';
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "pbc: error: " << err.what() << '\n';
        return 3;
    }
    return 2;
}
