#include "mgtf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace mgtf {

RunConfig default_config() { return RunConfig{}; }

namespace {

const std::vector<std::string> kKnownKeys = {
    "alpha",      "beta",       "a",          "eta",        "phi",
    "spectrum.kind", "spectrum.c", "spectrum.p", "spectrum.n",
    "lambda.min", "lambda.max", "lambda.ppd", "fit.decades", "seed", "out"};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("parse error at line " + std::to_string(line) + ": key '" + key +
                          "' needs a number, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return static_cast<std::uint64_t>(x);
    } catch (const std::exception&) {
        throw ConfigError("parse error at line " + std::to_string(line) + ": key '" + key +
                          "' needs a non-negative integer, got '" + v + "'");
    }
}

std::vector<double> parse_phi_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("parse error at line " + std::to_string(line) + ": empty phi entry");
        out.push_back(parse_number(item, "phi", line));
    }
    if (out.empty())
        throw ConfigError("parse error at line " + std::to_string(line) + ": phi list is empty");
    return out;
}

// shortest %g-style text that round-trips the double
std::string number_to_text(double x) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::stod(buf) == x) break;
    }
    return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> kv;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s.front() == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("parse error at line " + std::to_string(line) + ": expected key=value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            throw ConfigError("parse error at line " + std::to_string(line) + ": unknown key '" + key + "'");
        if (kv.count(key))
            throw ConfigError("duplicate key at line " + std::to_string(line) + ": '" + key + "'");
        kv[key] = {val, line};
    }

    RunConfig cfg = default_config();
    double alpha = cfg.params.alpha, beta = cfg.params.beta, a = cfg.params.a, eta = cfg.params.eta;
    std::string spectrum_kind = "power_law";
    double spec_c = cfg.spectrum.c, spec_p = cfg.spectrum.p;
    std::uint64_t spec_n = cfg.spectrum.count;

    const auto take = [&](const char* key) -> const std::pair<std::string, int>* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    if (const auto* e = take("alpha")) alpha = parse_number(e->first, "alpha", e->second);
    if (const auto* e = take("beta")) beta = parse_number(e->first, "beta", e->second);
    if (const auto* e = take("a")) a = parse_number(e->first, "a", e->second);
    if (const auto* e = take("eta")) eta = parse_number(e->first, "eta", e->second);
    if (const auto* e = take("phi")) cfg.phi_list = parse_phi_list(e->first, e->second);
    if (const auto* e = take("spectrum.kind")) {
        spectrum_kind = e->first;
        if (spectrum_kind != "power_law")
            throw ConfigError("parse error at line " + std::to_string(e->second) +
                              ": spectrum.kind must be 'power_law' (explicit spectra are API-only)");
    }
    if (const auto* e = take("spectrum.c")) spec_c = parse_number(e->first, "spectrum.c", e->second);
    if (const auto* e = take("spectrum.p")) spec_p = parse_number(e->first, "spectrum.p", e->second);
    if (const auto* e = take("spectrum.n")) spec_n = parse_u64(e->first, "spectrum.n", e->second);
    if (const auto* e = take("lambda.min")) cfg.grid.min = parse_number(e->first, "lambda.min", e->second);
    if (const auto* e = take("lambda.max")) cfg.grid.max = parse_number(e->first, "lambda.max", e->second);
    if (const auto* e = take("lambda.ppd"))
        cfg.grid.points_per_decade = static_cast<int>(parse_u64(e->first, "lambda.ppd", e->second));
    if (const auto* e = take("fit.decades")) cfg.fit_decades = parse_number(e->first, "fit.decades", e->second);
    if (const auto* e = take("seed")) cfg.seed = parse_u64(e->first, "seed", e->second);
    if (const auto* e = take("out")) cfg.out_dir = e->first;

    for (const double phi : cfg.phi_list)
        if (!(phi >= 0.0 && phi <= 1.0)) throw ConfigError("phi out of range [0,1]");
    try {
        cfg.params = validate_params(alpha, beta, a, eta, cfg.phi_list.front());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (spec_n == 0) throw ConfigError("spectrum.n must be >= 1");
    cfg.spectrum = SpectrumModel::power_law(spec_c, spec_p, spec_n);
    try {
        (void)build_spectrum(cfg.spectrum);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.grid.min > 0.0) || !(cfg.grid.max > cfg.grid.min))
        throw ConfigError("lambda grid needs 0 < lambda.min < lambda.max");
    if (cfg.grid.points_per_decade < 16) throw ConfigError("lambda.ppd must be >= 16");
    if (!(cfg.fit_decades >= 2.0)) throw ConfigError("fit.decades must be >= 2");
    if (cfg.out_dir.empty()) throw ConfigError("out must be a non-empty path");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_text(const RunConfig& config) {
    std::ostringstream out;
    out << "alpha=" << number_to_text(config.params.alpha) << "\n";
    out << "beta=" << number_to_text(config.params.beta) << "\n";
    out << "a=" << number_to_text(config.params.a) << "\n";
    out << "eta=" << number_to_text(config.params.eta) << "\n";
    out << "phi=";
    for (std::size_t i = 0; i < config.phi_list.size(); ++i)
        out << (i ? "," : "") << number_to_text(config.phi_list[i]);
    out << "\n";
    out << "spectrum.kind=power_law\n";
    out << "spectrum.c=" << number_to_text(config.spectrum.c) << "\n";
    out << "spectrum.p=" << number_to_text(config.spectrum.p) << "\n";
    out << "spectrum.n=" << config.spectrum.count << "\n";
    out << "lambda.min=" << number_to_text(config.grid.min) << "\n";
    out << "lambda.max=" << number_to_text(config.grid.max) << "\n";
    out << "lambda.ppd=" << config.grid.points_per_decade << "\n";
    out << "fit.decades=" << number_to_text(config.fit_decades) << "\n";
    out << "seed=" << config.seed << "\n";
    out << "out=" << config.out_dir << "\n";
    return out.str();
}

void write_config(const RunConfig& config, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write config file: " + path);
    f << config_to_text(config);
}

}  // namespace mgtf
