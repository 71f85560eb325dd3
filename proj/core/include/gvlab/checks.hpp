#pragma once

#include "gvlab/graph.hpp"
#include "gvlab/metric_space.hpp"
#include "gvlab/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gvlab::checks {

/// One gated verification: computed values plus the pass verdict.
/// No wall times in here; reports built from these must be byte-reproducible.
struct CheckResult {
    std::string name;
    bool passed = false;
    std::map<std::string, double> values;
    std::string note;  // gate description, human readable
};

CheckResult metric_core_exact();
CheckResult kobayashi_oracle_agreement();
CheckResult band_sandwich(const std::string& fixture, std::uint64_t seed);
CheckResult length_estimates_disk(std::uint64_t seed);
CheckResult gromov_delta_g_disk(std::uint64_t seed);
CheckResult qi_kobayashi_vs_g_disk(std::uint64_t seed);
CheckResult rough_g_vs_d_disk(std::uint64_t seed);
CheckResult morse_suite(std::uint64_t seed);
CheckResult cc_oracle_s3(std::uint64_t seed);

/// The fixture-scoped verification battery used by the CLI.
std::vector<CheckResult> verify_all(const std::string& fixture, std::uint64_t seed);

/// Brute-force shortest-path oracle for the boundary CC distance on the unit
/// sphere of C^2: a dense graph of short near-horizontal great-circle arcs
/// with Levi-length weights. Independent of the polyline solver.
class S3ChordOracle {
  public:
    S3ChordOracle(int samples, int k_neighbors, double residual_cut, std::uint64_t seed);
    double distance(const Vec& a, const Vec& b) const;

  private:
    std::vector<std::size_t> near_horizontal_neighbors(const std::vector<Vec>& pts,
                                                       const Vec& from) const;

    std::vector<Vec> pts_;
    WeightedGraph graph_;
    int k_;
    double cut_;
};

}  // namespace gvlab::checks
