#pragma once

#include "gvlab/domain.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace gvlab {

/// Error in a config file, anchored to its line.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string origin, int line, const std::string& message)
        : std::runtime_error(origin + ":" + std::to_string(line) + ": " + message),
          origin_(std::move(origin)),
          line_(line) {}
    const std::string& origin() const { return origin_; }
    int line() const { return line_; }

  private:
    std::string origin_;
    int line_;
};

/// Flat key-value experiment configuration with [section] headers.
/// Keys are stored as "section.key". normalize() materializes the default
/// value for every known key (seeds included), so normalized configs
/// round-trip byte-identically through serialize/parse.
struct ExperimentConfig {
    std::map<std::string, std::string> values;

    static ExperimentConfig parse_file(const std::filesystem::path& path);
    static ExperimentConfig parse_string(const std::string& text,
                                         const std::string& origin = "<config>");

    std::string serialize() const;
    void normalize();

    bool has(const std::string& key) const { return values.count(key) != 0; }
    void set(const std::string& key, std::string value) { values[key] = std::move(value); }

    std::string get(const std::string& key, const std::string& fallback = {}) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
};

/// Builds the domain described by the [domain] section: either a builtin
/// fixture name or dim/rho/box/J given explicitly.
Domain domain_from_config(const ExperimentConfig& cfg);

}  // namespace gvlab
