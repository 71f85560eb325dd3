#include "gvlab/config.hpp"

#include "gvlab/fixtures.hpp"
#include "gvlab/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace gvlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// key -> default; normalize() materializes all of these
const std::map<std::string, std::string>& known_defaults() {
    static const std::map<std::string, std::string> defaults = {
        {"domain.fixture", "disk"},
        {"domain.J", "standard"},
        {"domain.collar_eps", "0"},  // 0 = 10% of the inradius estimate
        {"run.seed", "0"},
        {"run.threads", "0"},
        {"run.out", "out"},
        {"kobayashi.strategy", "oracle"},
        {"kobayashi.C", "4"},
        {"kobayashi.samples", "500"},
        {"kobayashi.k_neighbors", "8"},
        {"cc.vertices", "17"},
        {"cc.restarts", "2"},
        {"cc.penalty_weight", "4"},
        {"cc.horiz_tol", "0.001"},
        {"cc.pairs", "10"},
        {"delta.mode", "exhaustive"},
        {"delta.budget", "8000000"},
        {"collar.samples", "60"},
        {"levi.grid_res", "9"},
        {"qi.kind", "quasi"},
        {"qi.samples", "80"},
        {"morse.grid_res", "24"},
        {"morse.restarts", "64"},
    };
    return defaults;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_string(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                throw ConfigError(origin, lineno, "malformed section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw ConfigError(origin, lineno, "empty section name");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin, lineno, "expected 'key = value', got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin, lineno, "empty key");
        if (section.empty()) throw ConfigError(origin, lineno, "key outside of any [section]");
        cfg.values[section + "." + key] = value;
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_string(ss.str(), path.string());
}

std::string ExperimentConfig::serialize() const {
    // group by section; std::map keeps everything sorted
    std::ostringstream os;
    std::string section;
    for (const auto& [key, value] : values) {
        const std::size_t dot = key.find('.');
        const std::string sec = key.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) os << "\n";
            os << "[" << sec << "]\n";
            section = sec;
        }
        os << key.substr(dot + 1) << " = " << value << "\n";
    }
    return os.str();
}

void ExperimentConfig::normalize() {
    for (const auto& [key, def] : known_defaults())
        if (!values.count(key)) values[key] = def;
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : std::stod(it->second);
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : std::stoi(it->second);
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : std::stoull(it->second);
}

Domain domain_from_config(const ExperimentConfig& cfg) {
    Domain::Options opts;
    opts.collar_eps = cfg.get_double("domain.collar_eps", 0.0);

    const std::string jspec = cfg.get("domain.J", "standard");

    if (!cfg.has("domain.rho")) {
        const std::string fixture = cfg.get("domain.fixture", "disk");
        Domain dom = make_fixture(fixture, opts);
        if (jspec != "standard") {
            // rebuild the fixture's rho with the requested structure
            AlmostComplexStructure J = AlmostComplexStructure::standard(dom.dim_complex());
            if (jspec.rfind("sheared:", 0) == 0)
                J = sheared_structure(dom.dim_complex(), std::stod(jspec.substr(8)));
            else
                throw std::runtime_error("domain.J: unknown structure '" + jspec + "'");
            return Domain(dom.rho(), std::move(J), dom.box(), dom.witness(), opts, dom.name(),
                          dom.region_type());
        }
        return dom;
    }

    const int dim = cfg.get_int("domain.dim", 0);
    if (dim < 1) throw std::runtime_error("domain.dim required with domain.rho");
    const Polynomial rho = Polynomial::parse(cfg.get("domain.rho"), dim);

    Box box = Box::cube(2 * dim, -1.5, 1.5);
    if (cfg.has("domain.box")) {
        std::istringstream bs(cfg.get("domain.box"));
        double lo, hi;
        if (!(bs >> lo >> hi)) throw std::runtime_error("domain.box: expected 'lo hi'");
        box = Box::cube(2 * dim, lo, hi);
    }
    Vec witness = box.center();
    if (cfg.has("domain.witness")) {
        std::istringstream ws(cfg.get("domain.witness"));
        for (int i = 0; i < 2 * dim; ++i)
            if (!(ws >> witness[i]))
                throw std::runtime_error("domain.witness: expected " + std::to_string(2 * dim) +
                                         " coordinates");
    }
    AlmostComplexStructure J = AlmostComplexStructure::standard(dim);
    if (jspec.rfind("sheared:", 0) == 0)
        J = sheared_structure(dim, std::stod(jspec.substr(8)));
    else if (jspec != "standard")
        throw std::runtime_error("domain.J: unknown structure '" + jspec + "'");

    return make_polynomial_domain(dim, rho, std::move(J), std::move(box), std::move(witness), opts,
                                  cfg.get("domain.name", "custom"),
                                  cfg.get("domain.region_type", "true") == "true");
}

}  // namespace gvlab
