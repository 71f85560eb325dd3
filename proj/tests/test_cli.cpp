#include <doctest.h>

#include "gvlab/io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunOutcome {
    int exit_code;
    std::string stderr_text;
};

RunOutcome run_cli(const std::string& args, const fs::path& workdir) {
    const fs::path err = workdir / "stderr.txt";
    const std::string cmd =
        std::string(GVLAB_CLI_PATH) + " " + args + " 2> " + err.string() + " > /dev/null";
    const int raw = std::system(cmd.c_str());
    RunOutcome out;
    out.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    if (fs::exists(err)) out.stderr_text = gvlab::read_text_file(err);
    return out;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("gvlab_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("delta subcommand on the bundled tree metric") {
    const fs::path dir = fresh_dir("delta_tree");
    const fs::path cfg = dir / "exp.cfg";
    gvlab::write_text_file(cfg, "[delta]\ninput = " + std::string(GVLAB_DATA_DIR) +
                                    "/tree_metric.csv\n");
    const RunOutcome run =
        run_cli("delta --config " + cfg.string() + " --out " + (dir / "out").string(), dir);
    CHECK(run.exit_code == 0);

    const json report = json::parse(gvlab::read_text_file(dir / "out" / "report.json"));
    CHECK(report.at("result").at("delta").get<double>() == 0.0);
    CHECK(fs::exists(dir / "out" / "delta_report.json"));
    fs::remove_all(dir);
}

TEST_CASE("morse subcommand on the ball fixture") {
    const fs::path dir = fresh_dir("morse_ball");
    const RunOutcome run =
        run_cli("morse --fixture ball2 --out " + (dir / "out").string(), dir);
    CHECK(run.exit_code == 0);

    const json report = json::parse(gvlab::read_text_file(dir / "out" / "report.json"));
    const auto& cps = report.at("result").at("critical_points");
    REQUIRE(cps.size() == 1);
    CHECK(cps[0].at("index").get<int>() == 0);
    CHECK(report.at("result").at("verdict").at("connected").get<bool>());
    // normalized config is embedded for provenance
    CHECK(report.at("config").contains("run.seed"));
    fs::remove_all(dir);
}

TEST_CASE("bad config exits 2 with a line-anchored message") {
    const fs::path dir = fresh_dir("bad_config");
    const fs::path cfg = dir / "exp.cfg";
    gvlab::write_text_file(cfg, "[domain]\nfixture disk\n");  // missing '='
    const RunOutcome run = run_cli("levi --config " + cfg.string(), dir);
    CHECK(run.exit_code == 2);
    CHECK(run.stderr_text.find(":2:") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("unknown fixture exits 2") {
    const fs::path dir = fresh_dir("bad_fixture");
    const RunOutcome run = run_cli("levi --fixture nosuch --out " + (dir / "out").string(), dir);
    CHECK(run.exit_code == 2);
    fs::remove_all(dir);
}

TEST_CASE("unknown flag is a usage error") {
    const fs::path dir = fresh_dir("bad_flag");
    const RunOutcome run = run_cli("levi --nonsense", dir);
    CHECK(run.exit_code == 2);
    fs::remove_all(dir);
}

TEST_CASE("levi subcommand reports non-psh fixtures without failing") {
    const fs::path dir = fresh_dir("levi_saddle");
    const RunOutcome run = run_cli("levi --fixture saddle --out " + (dir / "out").string(), dir);
    CHECK(run.exit_code == 0);
    const json report = json::parse(gvlab::read_text_file(dir / "out" / "report.json"));
    CHECK(report.at("result").at("min_levi_eigenvalue").get<double>() <= 1e-9);
    CHECK(!report.at("result").at("strictly_plurisubharmonic_at_grid").get<bool>());
    fs::remove_all(dir);
}

TEST_CASE("qi-fit subcommand on explicit matrices") {
    const fs::path dir = fresh_dir("qi_fit");
    // B = 2A on a 4-point path metric
    gvlab::Mat a(4, 4);
    a.setZero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = std::abs(i - j);
    const gvlab::FiniteMetricSpace A = gvlab::FiniteMetricSpace::from_matrix(a);
    const gvlab::FiniteMetricSpace B = gvlab::FiniteMetricSpace::from_matrix(2.0 * a);
    gvlab::write_distance_csv(dir / "a.csv", A);
    gvlab::write_distance_csv(dir / "b.csv", B);
    const fs::path cfg = dir / "exp.cfg";
    gvlab::write_text_file(cfg, "[qi]\ninput_a = " + (dir / "a.csv").string() +
                                    "\ninput_b = " + (dir / "b.csv").string() + "\n");
    const RunOutcome run =
        run_cli("qi-fit --config " + cfg.string() + " --out " + (dir / "out").string(), dir);
    CHECK(run.exit_code == 0);
    const json report = json::parse(gvlab::read_text_file(dir / "out" / "report.json"));
    CHECK(report.at("result").at("lambda").get<double>() == doctest::Approx(2.0));
    CHECK(report.at("result").at("c").get<double>() == doctest::Approx(0.0));
    fs::remove_all(dir);
}
