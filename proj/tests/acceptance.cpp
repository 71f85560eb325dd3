// Acceptance battery: one line per criterion, nonzero exit if any fails.
// Each criterion runs at its pinned gate and runtime budget.

#include "gvlab/checks.hpp"
#include "gvlab/io.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const std::string& label, bool passed, double seconds, double budget,
            const std::string& detail) {
    const bool in_budget = seconds < budget;
    const bool ok = passed && in_budget;
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %2d %-28s %6.1fs/%4.0fs  %s\n", ok ? "PASS" : "FAIL", number,
                label.c_str(), seconds, budget, detail.c_str());
    if (!passed) std::printf("       gate failed\n");
    if (!in_budget) std::printf("       runtime budget exceeded\n");
    std::fflush(stdout);
}

void run(int number, const std::string& label, double budget,
         const std::function<gvlab::checks::CheckResult()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    gvlab::checks::CheckResult res;
    bool threw = false;
    std::string detail;
    try {
        res = fn();
        for (const auto& [k, v] : res.values) detail += k + "=" + gvlab::format_double(v) + " ";
    } catch (const std::exception& e) {
        threw = true;
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(number, label, !threw && res.passed, seconds, budget, detail);
}

gvlab::checks::CheckResult determinism_check() {
    gvlab::checks::CheckResult res;
    res.name = "determinism";
    const fs::path dir = fs::temp_directory_path() / "gvlab_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string base = std::string(GVLAB_CLI_PATH) +
                             " verify-all --fixture disk --seed 7 --out ";
    const int rc1 = std::system((base + (dir / "run1").string() + " > /dev/null 2>&1").c_str());
    const int rc2 = std::system((base + (dir / "run2").string() + " > /dev/null 2>&1").c_str());
    const std::string r1 = gvlab::read_text_file(dir / "run1" / "report.json");
    const std::string r2 = gvlab::read_text_file(dir / "run2" / "report.json");
    res.values["bytes_run1"] = static_cast<double>(r1.size());
    res.values["bytes_run2"] = static_cast<double>(r2.size());
    res.values["exit_run1"] = WIFEXITED(rc1) ? WEXITSTATUS(rc1) : -1;
    res.values["exit_run2"] = WIFEXITED(rc2) ? WEXITSTATUS(rc2) : -1;
    res.passed = !r1.empty() && r1 == r2 && res.values["exit_run1"] == 0 &&
                 res.values["exit_run2"] == 0;
    fs::remove_all(dir);
    return res;
}

}  // namespace

int main() {
    using namespace gvlab::checks;
    const std::uint64_t seed = 7;

    run(1, "kobayashi_oracle_agreement", 30.0, [] { return kobayashi_oracle_agreement(); });
    run(2, "band_sandwich", 10.0, [&] {
        CheckResult disk = band_sandwich("disk", seed);
        const CheckResult ball = band_sandwich("ball2", seed);
        disk.passed = disk.passed && ball.passed;
        disk.values["C_ball"] = ball.values.at("C");
        return disk;
    });
    run(3, "length_estimates", 60.0, [&] { return length_estimates_disk(seed); });
    run(4, "gromov_delta_g", 120.0, [&] { return gromov_delta_g_disk(seed); });
    run(5, "qi_kobayashi_vs_g", 120.0, [&] { return qi_kobayashi_vs_g_disk(seed); });
    run(6, "rough_g_vs_d", 60.0, [&] { return rough_g_vs_d_disk(seed); });
    run(7, "morse_suite", 60.0, [&] { return morse_suite(seed); });
    run(8, "metric_core_exact", 1.0, [] { return metric_core_exact(); });
    run(9, "cc_oracle_s3", 120.0, [&] { return cc_oracle_s3(seed); });
    run(10, "determinism", 900.0, [] { return determinism_check(); });

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
