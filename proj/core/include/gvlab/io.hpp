#pragma once

#include "gvlab/metric_space.hpp"
#include "gvlab/types.hpp"

#include <filesystem>
#include <string>

namespace gvlab {

/// %.17g formatting used for all text artifacts.
std::string format_double(double v);

/// Distance matrix as CSV: header row of point ids, then row-major entries.
void write_distance_csv(const std::filesystem::path& path, const FiniteMetricSpace& ms);
FiniteMetricSpace read_distance_csv(const std::filesystem::path& path);

/// {"points": [...], "dist": [[...]]}
std::string distance_to_json(const FiniteMetricSpace& ms);
FiniteMetricSpace distance_from_json(const std::string& text);

std::string delta_report_to_json(const DeltaReport& report,
                                 const FiniteMetricSpace* name_source = nullptr);
std::string distortion_fit_to_json(const DistortionFit& fit);

/// Coordinate samples as CSV, one point per row.
void write_samples_csv(const std::filesystem::path& path, const std::vector<Vec>& samples);
std::vector<Vec> read_samples_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace gvlab
