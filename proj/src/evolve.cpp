#include "mgtf/evolve.hpp"

#include <cmath>
#include <stdexcept>

#include "mgtf/blocknum.hpp"
#include "mgtf/util.hpp"

namespace mgtf {

EnergyTrace evolve(const BlockFamily& family, const std::vector<ModeState>& initial,
                   const std::vector<double>& times, bool keep_per_mode) {
    if (initial.size() != family.size())
        throw std::invalid_argument("evolve: one initial state per mode required");
    if (times.empty() || times.front() < 0.0)
        throw std::invalid_argument("evolve: times must start at t >= 0");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw std::invalid_argument("evolve: times must be increasing");

    const std::size_t n_modes = family.size();
    const std::size_t n_times = times.size();

    // per-mode energy and dissipation at every time, filled independently
    std::vector<std::vector<double>> e_mode(n_times, std::vector<double>(n_modes, 0.0));
    std::vector<std::vector<double>> d_mode(n_times, std::vector<double>(n_modes, 0.0));

    parallel_for_index(n_modes, [&](std::size_t m) {
        const ModeBlock& blk = family.block(m);
        const PropagatorPlan plan(blk);
        const Vec4 u0 = initial[m].vec();
        for (std::size_t k = 0; k < n_times; ++k) {
            const Vec4 u = plan.at(times[k]) * u0;
            const double nw = mode_norm(blk, u);
            e_mode[k][m] = nw * nw;
            d_mode[k][m] = 2.0 * dissipation_rate(blk, family.params(), ModeState::from_vec(u));
        }
    });

    EnergyTrace trace;
    trace.times = times;
    trace.energy.resize(n_times);
    trace.dissipation.resize(n_times);
    for (std::size_t k = 0; k < n_times; ++k) {
        trace.energy[k] = pairwise_sum(e_mode[k]);
        trace.dissipation[k] = pairwise_sum(d_mode[k]);
    }
    if (keep_per_mode) {
        trace.per_mode = std::move(e_mode);
        trace.has_per_mode = true;
    }
    return trace;
}

FitResult fit_decay_rate(const EnergyTrace& trace, double t_min, double t_max) {
    std::vector<double> ts, le;
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        const double t = trace.times[k];
        if (t < t_min || t > t_max) continue;
        if (!(trace.energy[k] > 0.0))
            throw std::invalid_argument("fit_decay_rate: window contains non-positive energy");
        ts.push_back(t);
        le.push_back(std::log(trace.energy[k]));
    }
    const int n = static_cast<int>(ts.size());
    if (n < 3) throw std::invalid_argument("fit_decay_rate: fewer than 3 samples in window");

    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
        sx += ts[i];
        sy += le[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = ts[i] - mx, dy = le[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = le[i] - (fit.intercept + fit.slope * ts[i]);
        ss_res += r * r;
    }
    fit.r_squared = (syy <= 1e-28 * static_cast<double>(n)) ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
    fit.window_min = ts.front();
    fit.window_max = ts.back();
    fit.n_points = n;
    return fit;
}

double energy_balance_defect(const EnergyTrace& trace) {
    const std::size_t n = trace.times.size();
    if (n < 3) throw std::invalid_argument("energy_balance_defect: need >= 3 samples");
    const double dt = trace.times[1] - trace.times[0];
    for (std::size_t k = 1; k < n; ++k) {
        const double step = trace.times[k] - trace.times[k - 1];
        if (std::abs(step - dt) > 1e-9 * dt)
            throw std::invalid_argument("energy_balance_defect: time grid must be uniform");
    }
    double peak_diss = 0.0;
    for (const double d : trace.dissipation) peak_diss = std::max(peak_diss, std::abs(d));
    if (peak_diss == 0.0) return 0.0;

    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double dEdt = (trace.energy[k + 1] - trace.energy[k - 1]) / (2.0 * dt);
        worst = std::max(worst, std::abs(dEdt - trace.dissipation[k]));
    }
    return worst / peak_diss;
}

std::vector<ModeState> random_initial_states(const BlockFamily& family, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<ModeState> states;
    states.reserve(family.size());
    for (std::size_t m = 0; m < family.size(); ++m) {
        Vec4 x{rng.normal_complex(), rng.normal_complex(), rng.normal_complex(), rng.normal_complex()};
        const double nw = mode_norm(family.block(m), x);
        states.push_back(ModeState::from_vec((1.0 / nw) * x));
    }
    return states;
}

}  // namespace mgtf
