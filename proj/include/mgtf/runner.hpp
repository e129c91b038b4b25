// runner.hpp — experiment orchestration behind the CLI subcommands.
//
// Subcommands: spectrum, sweep, peaks, analytic, probe, gevrey, evolve,
// report.  Each writes CSV series plus a summary.json into the configured
// output directory.  Exit codes: 0 success, 1 validation/usage error, 2
// numerical defect detected at runtime.

#pragma once

#include <string>
#include <vector>

#include "mgtf/config.hpp"
#include "mgtf/probe.hpp"

namespace mgtf {

int run_command(int argc, const char* const* argv);

// Individual experiment entry points (also used by tests); each returns the
// set of files it wrote.
std::vector<std::string> cmd_spectrum(const RunConfig& config);
std::vector<std::string> cmd_sweep(const RunConfig& config);
std::vector<std::string> cmd_peaks(const RunConfig& config);
std::vector<std::string> cmd_analytic(const RunConfig& config);
std::vector<std::string> cmd_probe(const RunConfig& config, ProbeRegime regime);
std::vector<std::string> cmd_gevrey(const RunConfig& config);
std::vector<std::string> cmd_evolve(const RunConfig& config);
std::vector<std::string> cmd_report(const RunConfig& config);

}  // namespace mgtf
