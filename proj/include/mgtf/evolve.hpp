// evolve.hpp — exact modal time evolution of the Cauchy problem, energy-decay
// measurement, and the energy-balance check dE/dt = 2 Re<B U, U>.
//
// Evolution is exact per mode (U_n(t) = exp(t B_n) U_n(0)); the time grid
// only affects the finite-difference balance diagnostic.  Energy sums over
// modes use pairwise accumulation so results do not depend on scheduling.

#pragma once

#include <cstdint>
#include <vector>

#include "mgtf/model.hpp"
#include "mgtf/sweep.hpp"

namespace mgtf {

struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> energy;            // ||U(t)||_H^2 over the truncation
    std::vector<double> dissipation;       // instantaneous 2 Re<B U, U> (<= 0)
    std::vector<std::vector<double>> per_mode;  // optional: per_mode[k][mode]
    bool has_per_mode = false;
};

// Exact propagation of the given per-mode initial states through the listed
// times (increasing from 0).
EnergyTrace evolve(const BlockFamily& family, const std::vector<ModeState>& initial,
                   const std::vector<double>& times, bool keep_per_mode = false);

// Least squares of ln(energy) against t on [t_min, t_max]; the slope
// estimates -2*omega.  Rejects windows containing non-positive energies.
FitResult fit_decay_rate(const EnergyTrace& trace, double t_min, double t_max);

// Max over interior times of |centered-difference dE/dt - recorded
// dissipation|, normalized by the peak |dissipation|; requires a uniform time
// grid with >= 3 samples.  Returns 0 for identically-zero traces.
double energy_balance_defect(const EnergyTrace& trace);

// Unit-W-norm random state per mode, reproducible from the seed.
std::vector<ModeState> random_initial_states(const BlockFamily& family, std::uint64_t seed);

}  // namespace mgtf
