#include "gvlab/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gvlab {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << content;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_distance_csv(const std::filesystem::path& path, const FiniteMetricSpace& ms) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ms.size(); ++i) os << (i ? "," : "") << ms.points[i];
    os << "\n";
    for (std::size_t i = 0; i < ms.size(); ++i) {
        for (std::size_t j = 0; j < ms.size(); ++j)
            os << (j ? "," : "") << format_double(ms.d(i, j));
        os << "\n";
    }
    write_text_file(path, os.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

FiniteMetricSpace read_distance_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty distance CSV: " + path.string());
    const std::vector<std::string> ids = split_csv_line(line);
    const std::size_t n = ids.size();
    Mat d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(is, line))
            throw std::runtime_error("distance CSV truncated at row " + std::to_string(i));
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != n)
            throw std::runtime_error("distance CSV row " + std::to_string(i) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(n));
        for (std::size_t j = 0; j < n; ++j)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::stod(cells[j]);
    }
    return FiniteMetricSpace(ids, std::move(d));
}

std::string distance_to_json(const FiniteMetricSpace& ms) {
    nlohmann::json j;
    j["points"] = ms.points;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < ms.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < ms.size(); ++k) row.push_back(ms.d(i, k));
        rows.push_back(std::move(row));
    }
    j["dist"] = std::move(rows);
    return j.dump(2);
}

FiniteMetricSpace distance_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::vector<std::string> ids = j.at("points").get<std::vector<std::string>>();
    const auto& rows = j.at("dist");
    const std::size_t n = ids.size();
    if (rows.size() != n) throw std::runtime_error("distance JSON: shape mismatch");
    Mat d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw std::runtime_error("distance JSON: ragged matrix");
        for (std::size_t k = 0; k < n; ++k)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k].get<double>();
    }
    return FiniteMetricSpace(std::move(ids), std::move(d));
}

std::string delta_report_to_json(const DeltaReport& report, const FiniteMetricSpace* name_source) {
    nlohmann::json j;
    j["delta"] = report.delta;
    j["quadruples_checked"] = report.quadruples_checked;
    j["mode"] = report.mode == DeltaMode::exhaustive ? "exhaustive" : "monte_carlo";
    nlohmann::json worst = nlohmann::json::array();
    for (const std::size_t idx : report.worst_quadruple) {
        if (name_source && idx < name_source->size())
            worst.push_back(name_source->points[idx]);
        else
            worst.push_back(idx);
    }
    j["worst_quadruple"] = std::move(worst);
    return j.dump(2);
}

std::string distortion_fit_to_json(const DistortionFit& fit) {
    nlohmann::json j;
    j["lambda"] = fit.lambda;
    j["c"] = fit.c;
    j["kind"] = fit.kind == DistortionKind::rough ? "rough" : "quasi";
    j["violation_fraction"] = fit.violation_fraction;
    return j.dump(2);
}

void write_samples_csv(const std::filesystem::path& path, const std::vector<Vec>& samples) {
    std::ostringstream os;
    for (const auto& p : samples) {
        for (int i = 0; i < p.size(); ++i) os << (i ? "," : "") << format_double(p[i]);
        os << "\n";
    }
    write_text_file(path, os.str());
}

std::vector<Vec> read_samples_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
    std::vector<Vec> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_csv_line(line);
        Vec p(static_cast<Eigen::Index>(cells.size()));
        for (std::size_t i = 0; i < cells.size(); ++i)
            p[static_cast<Eigen::Index>(i)] = std::stod(cells[i]);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace gvlab
