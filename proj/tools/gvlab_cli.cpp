// Experiment runner: builds model domains, evaluates the metric pipelines,
// and writes JSON/CSV artifacts plus a human-readable summary.
//
// Exit codes: 0 = all gated checks passed, 2 = bad configuration,
// 3 = numerical failure inside a pipeline.

#include <CLI11.hpp>
#include <json.hpp>

#include "gvlab/carnot.hpp"
#include "gvlab/checks.hpp"
#include "gvlab/collar_metrics.hpp"
#include "gvlab/config.hpp"
#include "gvlab/fixtures.hpp"
#include "gvlab/io.hpp"
#include "gvlab/kobayashi.hpp"
#include "gvlab/morse.hpp"
#include "gvlab/parallel.hpp"
#include "gvlab/rng.hpp"
#include "gvlab/sampling.hpp"

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliState {
    std::string config_path;
    std::string fixture;
    std::string out_dir;
    std::int64_t seed = -1;
    int threads = -1;
    bool print_json = false;
};

gvlab::ExperimentConfig load_config(const CliState& cli) {
    gvlab::ExperimentConfig cfg;
    if (!cli.config_path.empty()) cfg = gvlab::ExperimentConfig::parse_file(cli.config_path);
    if (!cli.fixture.empty()) cfg.set("domain.fixture", cli.fixture);
    if (cli.seed >= 0) cfg.set("run.seed", std::to_string(cli.seed));
    if (!cli.out_dir.empty()) cfg.set("run.out", cli.out_dir);
    if (cli.threads >= 0) cfg.set("run.threads", std::to_string(cli.threads));
    cfg.normalize();
    gvlab::set_thread_count(cfg.get_int("run.threads", 0));
    return cfg;
}

json config_json(const gvlab::ExperimentConfig& cfg) {
    json j = json::object();
    for (const auto& [k, v] : cfg.values) j[k] = v;
    return j;
}

fs::path prepare_out(const gvlab::ExperimentConfig& cfg) {
    const fs::path dir = cfg.get("run.out", "out");
    fs::create_directories(dir);
    return dir;
}

void emit(const gvlab::ExperimentConfig& cfg, const CliState& cli, const std::string& command,
          json body, const std::string& summary) {
    const fs::path dir = prepare_out(cfg);
    json report;
    report["command"] = command;
    report["config"] = config_json(cfg);
    report["result"] = std::move(body);
    const std::string text = report.dump(2) + "\n";
    gvlab::write_text_file(dir / "report.json", text);
    gvlab::write_text_file(dir / "summary.txt", summary);
    if (cli.print_json) std::cout << text;
}

std::vector<gvlab::Vec> interior_samples(const gvlab::Domain& dom, int count, std::uint64_t seed) {
    if (dom.dim_complex() == 1) return gvlab::sunflower_disk(count, 0.95);
    return gvlab::ball_samples(dom.dim_real(), count, 0.95, seed);
}

std::vector<gvlab::Vec> boundary_samples(const gvlab::Domain& dom, int count, std::uint64_t seed) {
    std::vector<gvlab::Vec> out;
    if (dom.dim_complex() == 2 && dom.name() == "ball2") {
        out = gvlab::sphere3_samples(count, seed);
        return out;
    }
    for (const auto& p : interior_samples(dom, count, seed))
        out.push_back(gvlab::boundary_project(dom, p).location);
    return out;
}

// ---------------------------------------------------------------------------

int cmd_levi(const gvlab::ExperimentConfig& cfg, const CliState& cli) {
    const gvlab::Domain dom = gvlab::domain_from_config(cfg);
    const int res = cfg.get_int("levi.grid_res", 9);
    const gvlab::PshCertificate cert = gvlab::check_strict_psh(dom, res);
    json body;
    body["fixture"] = dom.name();
    body["grid_res"] = res;
    body["min_levi_eigenvalue"] = cert.min_eigenvalue;
    body["strictly_plurisubharmonic_at_grid"] = cert.min_eigenvalue > 0.0;
    json worst = json::array();
    for (int i = 0; i < cert.worst_point.size(); ++i) worst.push_back(cert.worst_point[i]);
    body["worst_point"] = worst;
    std::string summary = "levi certificate on " + dom.name() + ": min eigenvalue " +
                          gvlab::format_double(cert.min_eigenvalue) + "\n";
    emit(cfg, cli, "levi", body, summary);
    return 0;
}

int cmd_kobayashi(const gvlab::ExperimentConfig& cfg, const CliState& cli) {
    const gvlab::Domain dom = gvlab::domain_from_config(cfg);
    const std::uint64_t seed = cfg.get_u64("run.seed", 0);
    const int count = cfg.get_int("kobayashi.samples", 500);
    const int k = cfg.get_int("kobayashi.k_neighbors", 8);
    gvlab::KobayashiEstimator est;
    const std::string strategy = cfg.get("kobayashi.strategy", "oracle");
    if (strategy == "oracle") {
        est = gvlab::KobayashiEstimator::oracle(dom.name());
    } else if (strategy == "band_midpoint" || strategy == "band_upper" || strategy == "band_lower") {
        const auto s = strategy == "band_midpoint" ? gvlab::EstimatorStrategy::band_midpoint
                       : strategy == "band_upper"  ? gvlab::EstimatorStrategy::band_upper
                                                   : gvlab::EstimatorStrategy::band_lower;
        est = gvlab::KobayashiEstimator::band(s, cfg.get_double("kobayashi.C", 4.0));
    } else {
        throw gvlab::ConfigError("<config>", 0, "unknown kobayashi.strategy '" + strategy + "'");
    }
    const std::vector<gvlab::Vec> samples = interior_samples(dom, count, seed);
    const gvlab::FiniteMetricSpace ms = gvlab::kob_distance_graph(dom, samples, k, est);
    const fs::path dir = prepare_out(cfg);
    gvlab::write_distance_csv(dir / "kobayashi_matrix.csv", ms);
    gvlab::write_samples_csv(dir / "kobayashi_samples.csv", samples);

    json body;
    body["samples"] = count;
    body["k_neighbors"] = k;
    body["strategy"] = strategy;
    body["matrix_csv"] = "kobayashi_matrix.csv";
    const gvlab::MetricAxiomReport axioms = gvlab::check_metric_axioms(ms);
    body["metric_axiom_violations"] =
        axioms.triangle.size() + axioms.symmetry.size() + axioms.diagonal.size();
    emit(cfg, cli, "kobayashi", body,
         "kobayashi graph metric on " + dom.name() + ": " + std::to_string(count) + " samples\n");
    return 0;
}

int cmd_cc(const gvlab::ExperimentConfig& cfg, const CliState& cli) {
    const gvlab::Domain dom = gvlab::domain_from_config(cfg);
    const std::uint64_t seed = cfg.get_u64("run.seed", 0);
    gvlab::CCOptions opts;
    opts.vertices = cfg.get_int("cc.vertices", 17);
    opts.restarts = cfg.get_int("cc.restarts", 2);
    opts.penalty_weight = cfg.get_double("cc.penalty_weight", 4.0);
    opts.horiz_tol = cfg.get_double("cc.horiz_tol", 1e-3);
    opts.seed = seed;
    const int pairs = cfg.get_int("cc.pairs", 10);
    const std::vector<gvlab::Vec> pts = boundary_samples(dom, 2 * pairs, seed);

    json results = json::array();
    std::string summary;
    for (int i = 0; i < pairs; ++i) {
        const gvlab::Vec& a = pts[static_cast<std::size_t>(2 * i)];
        const gvlab::Vec& b = pts[static_cast<std::size_t>(2 * i + 1)];
        gvlab::CCOptions pair_opts = opts;
        pair_opts.seed = seed + static_cast<std::uint64_t>(i);
        const gvlab::CCDistanceResult res = gvlab::cc_distance(dom, a, b, pair_opts);
        json item;
        item["value"] = res.value;
        item["solver_tol"] = res.solver_tol;
        item["horizontality_residual"] = res.curve.horizontality_residual;
        json trace = json::array();
        for (const auto& [verts, value] : res.refinement_trace)
            trace.push_back({{"vertices", verts}, {"value", value}});
        item["refinement_trace"] = trace;
        results.push_back(std::move(item));
        summary += "pair " + std::to_string(i) + ": value " + gvlab::format_double(res.value) + "\n";
    }
    json body;
    body["pairs"] = results;
    emit(cfg, cli, "cc", body, summary);
    return 0;
}

int cmd_gmetric(const gvlab::ExperimentConfig& cfg, const CliState& cli) {
    const gvlab::Domain dom = gvlab::domain_from_config(cfg);
    const std::uint64_t seed = cfg.get_u64("run.seed", 0);
    const int count = cfg.get_int("collar.samples", 60);
    const std::vector<gvlab::Vec> samples = interior_samples(dom, count, seed);
    const gvlab::BoundaryDistance bdist(dom);
    const gvlab::FiniteMetricSpace g = gvlab::g_metric_matrix(dom, samples, bdist);
    const fs::path dir = prepare_out(cfg);
    gvlab::write_distance_csv(dir / "g_matrix.csv", g);
    gvlab::write_samples_csv(dir / "g_samples.csv", samples);
    const gvlab::DeltaReport delta = gvlab::delta_four_point(g, gvlab::DeltaMode::exhaustive, 0);
    json body;
    body["samples"] = count;
    body["matrix_csv"] = "g_matrix.csv";
    body["four_point_delta"] = delta.delta;
    emit(cfg, cli, "gmetric", body,
         "g matrix on " + dom.name() + ": four-point delta " + gvlab::format_double(delta.delta) +
             "\n");
    return 0;
}

int cmd_dmetric(const gvlab::ExperimentConfig& cfg, const CliState& cli) {
    const gvlab::Domain dom = gvlab::domain_from_config(cfg);
    const double eps = dom.collar_eps();
    const int count = std::min(cfg.get_int("collar.samples", 60), 40);
    std::vector<gvlab::Vec> samples;
    for (int i = 0; i < count; ++i) {
        const double delta = 2e-3 * std::pow(0.98 * eps / 2e-3, count == 1 ? 0.0 : i / double(count - 1));
        if (dom.dim_complex() == 1) {
            gvlab::Vec p(2);
            const double angle = 2.3999632297286533 * i;
            p << (1.0 - delta) * std::cos(angle), (1.0 - delta) * std::sin(angle);
            samples.push_back(p);
        } else {
            const gvlab::Vec dir = gvlab::sphere3_samples(count, cfg.get_u64("run.seed", 0))
                                       [static_cast<std::size_t>(i)];
            samples.push_back((1.0 - delta) * dir);
        }
    }
    const gvlab::CollarDModel model(dom);
    gvlab::Mat dmat(count, count);
    dmat.setZero();
    for (int i = 0; i < count; ++i)
        for (int j = i + 1; j < count; ++j) {
            const double v = model.d_metric(samples[static_cast<std::size_t>(i)],
                                            samples[static_cast<std::size_t>(j)]);
            dmat(i, j) = dmat(j, i) = v;
        }
    const gvlab::FiniteMetricSpace d = gvlab::FiniteMetricSpace::from_matrix(std::move(dmat));
    const fs::path dir = prepare_out(cfg);
    gvlab::write_distance_csv(dir / "d_matrix.csv", d);
    gvlab::write_samples_csv(dir / "d_samples.csv", samples);
    json body;
    body["samples"] = count;
    body["matrix_csv"] = "d_matrix.csv";
    emit(cfg, cli, "dmetric", body, "d matrix on " + dom.name() + "\n");
    return 0;
}

int cmd_delta(const gvlab::ExperimentConfig& cfg, const CliState& cli) {
    gvlab::FiniteMetricSpace ms;
    std::string source;
    if (cfg.has("delta.input")) {
        source = cfg.get("delta.input");
        ms = gvlab::read_distance_csv(source);
    } else {
        const gvlab::Domain dom = gvlab::domain_from_config(cfg);
        const std::vector<gvlab::Vec> samples =
            interior_samples(dom, cfg.get_int("collar.samples", 60), cfg.get_u64("run.seed", 0));
        ms = gvlab::g_metric_matrix(dom, samples, gvlab::BoundaryDistance(dom));
        source = "g matrix on " + dom.name();
    }
    const std::string mode_str = cfg.get("delta.mode", "exhaustive");
    const gvlab::DeltaMode mode =
        mode_str == "monte_carlo" ? gvlab::DeltaMode::monte_carlo : gvlab::DeltaMode::exhaustive;
    const gvlab::DeltaReport report =
        gvlab::delta_four_point(ms, mode, cfg.get_u64("delta.budget", 8000000), cfg.get_u64("run.seed", 0));
    const fs::path dir = prepare_out(cfg);
    gvlab::write_text_file(dir / "delta_report.json", gvlab::delta_report_to_json(report, &ms));
    json body;
    body["source"] = source;
    body["delta"] = report.delta;
    body["quadruples_checked"] = report.quadruples_checked;
    body["mode"] = mode_str;
    emit(cfg, cli, "delta", body,
         "four-point delta of " + source + ": " + gvlab::format_double(report.delta) + "\n");
    return 0;
}

int cmd_qi_fit(const gvlab::ExperimentConfig& cfg, const CliState& cli) {
    gvlab::FiniteMetricSpace a, b;
    std::string source;
    if (cfg.has("qi.input_a") && cfg.has("qi.input_b")) {
        a = gvlab::read_distance_csv(cfg.get("qi.input_a"));
        b = gvlab::read_distance_csv(cfg.get("qi.input_b"));
        source = "input matrices";
    } else {
        const gvlab::Domain dom = gvlab::domain_from_config(cfg);
        const std::vector<gvlab::Vec> samples =
            interior_samples(dom, cfg.get_int("qi.samples", 80), cfg.get_u64("run.seed", 0));
        a = gvlab::kob_distance_graph(dom, samples, cfg.get_int("kobayashi.k_neighbors", 8),
                                      gvlab::KobayashiEstimator::oracle(dom.name()));
        b = gvlab::g_metric_matrix(dom, samples, gvlab::BoundaryDistance(dom));
        source = "graph metric vs g on " + dom.name();
    }
    const std::string kind_str = cfg.get("qi.kind", "quasi");
    const gvlab::DistortionKind kind =
        kind_str == "rough" ? gvlab::DistortionKind::rough : gvlab::DistortionKind::quasi;
    const gvlab::DistortionFit fit = gvlab::fit_distortion(a, b, kind);
    const fs::path dir = prepare_out(cfg);
    gvlab::write_text_file(dir / "distortion_fit.json", gvlab::distortion_fit_to_json(fit));
    json body;
    body["source"] = source;
    body["kind"] = kind_str;
    body["lambda"] = fit.lambda;
    body["c"] = fit.c;
    body["violation_fraction"] = fit.violation_fraction;
    emit(cfg, cli, "qi-fit", body,
         "distortion fit (" + kind_str + "): lambda " + gvlab::format_double(fit.lambda) + ", c " +
             gvlab::format_double(fit.c) + "\n");
    return 0;
}

int cmd_morse(const gvlab::ExperimentConfig& cfg, const CliState& cli) {
    const gvlab::Domain dom = gvlab::domain_from_config(cfg);
    const auto cps = gvlab::find_critical_points(dom, cfg.get_int("morse.restarts", 64),
                                                 cfg.get_u64("run.seed", 0));
    const gvlab::ConnectednessVerdict verdict =
        gvlab::boundary_connectedness(dom, cfg.get_int("morse.grid_res", 24));

    json cps_json = json::array();
    for (const auto& cp : cps) {
        json c;
        json loc = json::array();
        for (int i = 0; i < cp.location.size(); ++i) loc.push_back(cp.location[i]);
        c["location"] = loc;
        c["value"] = cp.value;
        c["index"] = cp.index;
        c["nondegenerate"] = cp.nondegenerate;
        json eig = json::array();
        for (int i = 0; i < cp.hessian_eigenvalues.size(); ++i)
            eig.push_back(cp.hessian_eigenvalues[i]);
        c["hessian_eigenvalues"] = eig;
        cps_json.push_back(std::move(c));
    }
    json body;
    body["critical_points"] = cps_json;
    body["verdict"] = {{"refused", verdict.refused},
                       {"refusal_reason", verdict.refusal_reason},
                       {"connected", verdict.connected},
                       {"components", verdict.components},
                       {"min_levi_eigenvalue", verdict.certificate.min_eigenvalue}};
    json trace = json::array();
    for (std::size_t i = 0; i < verdict.trace.levels.size(); ++i)
        trace.push_back({{"t", verdict.trace.levels[i]}, {"count", verdict.trace.counts[i]}});
    body["component_trace"] = trace;

    std::string summary = "morse analysis on " + dom.name() + ": " + std::to_string(cps.size()) +
                          " critical point(s), boundary " +
                          (verdict.refused ? "verdict refused" : (verdict.connected ? "connected" : "disconnected")) +
                          "\n";
    emit(cfg, cli, "morse", body, summary);
    return 0;
}

int cmd_verify_all(const gvlab::ExperimentConfig& cfg, const CliState& cli) {
    const std::string fixture = cfg.get("domain.fixture", "disk");
    const std::uint64_t seed = cfg.get_u64("run.seed", 0);
    const std::vector<gvlab::checks::CheckResult> results = gvlab::checks::verify_all(fixture, seed);

    json arr = json::array();
    std::string summary;
    bool all_passed = true;
    for (const auto& res : results) {
        json item;
        item["name"] = res.name;
        item["passed"] = res.passed;
        item["gate"] = res.note;
        json vals = json::object();
        for (const auto& [k, v] : res.values) vals[k] = v;
        item["values"] = vals;
        arr.push_back(std::move(item));
        summary += std::string(res.passed ? "PASS" : "FAIL") + "  " + res.name + "\n";
        all_passed = all_passed && res.passed;
    }
    json body;
    body["fixture"] = fixture;
    body["checks"] = arr;
    body["all_passed"] = all_passed;
    emit(cfg, cli, "verify-all", body, summary);
    std::cout << summary;
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for boundary metric geometry on model domains"};
    app.require_subcommand(1);

    CliState cli;
    app.add_option("--config", cli.config_path, "experiment config file");
    app.add_option("--fixture", cli.fixture, "builtin fixture name");
    app.add_option("--seed", cli.seed, "seed override");
    app.add_option("--out", cli.out_dir, "output directory");
    app.add_option("--threads", cli.threads, "worker thread count (0 = auto)");
    app.add_flag("--json", cli.print_json, "print report.json to stdout");

    int (*handlers[])(const gvlab::ExperimentConfig&, const CliState&) = {
        cmd_levi, cmd_kobayashi, cmd_cc, cmd_gmetric, cmd_dmetric,
        cmd_delta, cmd_qi_fit, cmd_morse, cmd_verify_all};
    const char* names[] = {"levi", "kobayashi", "cc", "gmetric", "dmetric",
                           "delta", "qi-fit", "morse", "verify-all"};
    const char* descs[] = {
        "Levi-form positivity certificate over the box",
        "graph estimate of the integrated distance",
        "boundary Carnot-Caratheodory distances",
        "height-based metric g matrix",
        "geodesic-side metric d matrix",
        "four-point hyperbolicity constant",
        "rough/quasi-isometry constant fit",
        "critical points and boundary connectedness",
        "run the full verification battery on a fixture"};

    int selected = -1;
    for (int i = 0; i < 9; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->fallthrough();  // global flags may follow the subcommand
        sub->callback([&selected, i] { selected = i; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const gvlab::ExperimentConfig cfg = load_config(cli);
        return handlers[selected](cfg, cli);
    } catch (const gvlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
