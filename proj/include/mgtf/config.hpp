// config.hpp — line-oriented key=value run configuration.
//
// Documented keys (nothing else is accepted):
//   alpha, beta, a, eta, phi, spectrum.kind, spectrum.c, spectrum.p,
//   spectrum.n, lambda.min, lambda.max, lambda.ppd, fit.decades, seed, out
//
// `phi` accepts a comma-separated list; subcommands act on the first entry
// (or a --phi override) and `report` iterates the whole list.  Blank lines
// and lines starting with '#' are ignored.  Defaults: alpha=1 beta=2 a=1
// eta=1 phi=1, spectrum sigma_n = n^2 pi^2 with N=256, lambda in [1, 1e6] at
// 64 points per decade, fit over the top 2 decades, seed 42, out "out".

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgtf/model.hpp"
#include "mgtf/sweep.hpp"

namespace mgtf {

// Parse or validation failure with position information; the CLI maps it to
// exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    ModelParams params{1.0, 2.0, 1.0, 1.0, 1.0};
    std::vector<double> phi_list{1.0};
    SpectrumModel spectrum = SpectrumModel::dirichlet_default(256);
    LambdaGrid grid{1.0, 1e6, 64};
    double fit_decades = 2.0;
    std::uint64_t seed = 42;
    std::string out_dir = "out";
};

RunConfig default_config();

// Parses and validates; throws ConfigError with a line number on parse
// problems (unknown key, duplicate key, bad number) and forwards field names
// on validation failures.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Canonical key=value serialization; load_config(write_config(c)) == c.
std::string config_to_text(const RunConfig& config);
void write_config(const RunConfig& config, const std::string& path);

}  // namespace mgtf
