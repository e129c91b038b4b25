#include "mgtf/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mgtf/util.hpp"

namespace mgtf {

BlockFamily::BlockFamily(const ModelParams& params, const std::vector<double>& sigmas)
    : params_(params), sigmas_(sigmas) {
    if (sigmas_.empty()) throw std::invalid_argument("BlockFamily: empty spectrum");
    blocks_.resize(sigmas_.size());
    parallel_for_index(sigmas_.size(), [&](std::size_t i) { blocks_[i] = assemble_block(params_, sigmas_[i]); });
}

std::vector<double> resonance_frequencies(const ModelParams& params, const std::vector<double>& sigmas) {
    std::vector<double> out;
    out.reserve(2 * sigmas.size());
    const double fam_b = std::sqrt(params.a * params.a * params.beta / params.alpha);
    for (const double s : sigmas) {
        const double rs = std::sqrt(s);
        out.push_back(params.a * rs);
        out.push_back(fam_b * rs);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(x, y); }),
              out.end());
    return out;
}

ResolventSample global_resolvent_norm(const BlockFamily& family, double lambda) {
    double best = 0.0;
    int arg = 0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const double v = block_resolvent_norm(family.block(i), lambda);
        if (v > best) {
            best = v;
            arg = static_cast<int>(i) + 1;
        }
    }
    return ResolventSample{lambda, best, arg};
}

namespace {

// Local maximum of one block's resolvent norm near its family-B resonance.
// Overdamped blocks (strong coupling, large sigma) have no interior hump:
// the norm decreases through the whole window toward the slow-eigenvalue
// tail.  Such modes record the resonance frequency itself, which keeps the
// peak series log-uniform in n.
PeakEntry locate_peak(const BlockFamily& family, std::size_t idx) {
    const ModeBlock& blk = family.block(idx);
    const ModelParams& p = family.params();
    const double lam_res = std::sqrt(p.a * p.a * p.beta / p.alpha) * std::sqrt(blk.sigma);
    const auto f = [&](double l) { return block_resolvent_norm(blk, l); };

    double span = 1.8;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const int pts = attempt == 0 ? 33 : (attempt == 1 ? 65 : 256);
        std::vector<double> grid(pts), vals(pts);
        const double lo = lam_res / span, hi = lam_res * span;
        const double step = std::log(hi / lo) / (pts - 1);
        for (int i = 0; i < pts; ++i) {
            grid[i] = lo * std::exp(step * i);
            vals[i] = f(grid[i]);
        }
        const auto it = std::max_element(vals.begin(), vals.end());
        const int k = static_cast<int>(it - vals.begin());
        if (k == 0 || k == pts - 1) {
            if (attempt == 0) span *= 2.0;  // the hump may sit just outside; widen once
            continue;  // retry wider, then at fine resolution
        }
        const auto [x, v] = golden_max(f, grid[k - 1], grid[k + 1], 1e-6);
        return PeakEntry{static_cast<int>(idx) + 1, lam_res, x, std::max(v, vals[k])};
    }
    // still monotone through the widened fine grid: no interior hump
    return PeakEntry{static_cast<int>(idx) + 1, lam_res, lam_res, f(lam_res)};
}

}  // namespace

PeakSeries track_peaks(const BlockFamily& family) {
    PeakSeries series;
    series.entries.resize(family.size());
    parallel_for_index(family.size(), [&](std::size_t i) { series.entries[i] = locate_peak(family, i); });
    return series;
}

std::vector<ResolventSample> run_sweep(const BlockFamily& family, const LambdaGrid& grid) {
    if (!(grid.min > 0.0) || !(grid.max > grid.min))
        throw std::invalid_argument("run_sweep: need 0 < lambda_min < lambda_max");
    if (grid.points_per_decade < 16)
        throw std::invalid_argument("run_sweep: points-per-decade must be >= 16");

    const double decades = std::log10(grid.max / grid.min);
    const int n_base = static_cast<int>(std::ceil(decades * grid.points_per_decade - 1e-9)) + 1;
    std::vector<double> lambdas;
    lambdas.reserve(static_cast<std::size_t>(n_base) + 3 * family.size());
    for (int i = 0; i < n_base - 1; ++i)
        lambdas.push_back(grid.min * std::pow(10.0, static_cast<double>(i) / grid.points_per_decade));
    lambdas.push_back(grid.max);

    for (const double l : resonance_frequencies(family.params(), family.sigmas()))
        if (l >= grid.min && l <= grid.max) lambdas.push_back(l);
    const PeakSeries peaks = track_peaks(family);
    for (const auto& e : peaks.entries)
        if (e.lambda_peak >= grid.min && e.lambda_peak <= grid.max) lambdas.push_back(e.lambda_peak);

    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end(),
                              [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(x, y); }),
                  lambdas.end());

    std::vector<ResolventSample> samples(lambdas.size());
    parallel_for_index(lambdas.size(),
                       [&](std::size_t i) { samples[i] = global_resolvent_norm(family, lambdas[i]); });
    return samples;
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& series, double window_min,
                       double window_max) {
    if (!(window_min > 0.0) || window_max < window_min * 100.0 * (1.0 - 1e-9))
        throw std::invalid_argument("fit_exponent: window spans less than 2 decades");

    std::vector<double> lx, ly;
    double lo = 0.0, hi = 0.0;
    for (const auto& [lam, val] : series) {
        if (lam < window_min || lam > window_max) continue;
        if (!(lam > 0.0) || !(val > 0.0))
            throw std::invalid_argument("fit_exponent: values must be positive within the window");
        if (lx.empty()) {
            lo = hi = lam;
        } else {
            lo = std::min(lo, lam);
            hi = std::max(hi, lam);
        }
        lx.push_back(std::log(lam));
        ly.push_back(std::log(val));
    }
    const int n = static_cast<int>(lx.size());
    if (n < 8) throw std::invalid_argument("fit_exponent: fewer than 8 points in window");

    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = lx[i] - mx, dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss_res += r * r;
    }
    fit.r_squared = (syy <= 1e-28 * static_cast<double>(n)) ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
    fit.window_min = lo;
    fit.window_max = hi;
    fit.n_points = n;
    return fit;
}

std::pair<double, double> top_decades_window(const std::vector<std::pair<double, double>>& series,
                                             double decades, double guard_decades) {
    double hi = 0.0;
    for (const auto& [lam, val] : series) hi = std::max(hi, lam);
    if (hi <= 0.0) throw std::invalid_argument("top_decades_window: empty series");
    hi /= std::pow(10.0, guard_decades);
    return {hi / std::pow(10.0, decades), hi};
}

AnalyticityIndex analyticity_index(const std::vector<ResolventSample>& samples) {
    if (samples.empty()) throw std::invalid_argument("analyticity_index: empty sample set");
    double lo = samples.front().lambda, hi = lo;
    std::vector<std::pair<double, double>> ln;
    ln.reserve(samples.size());
    AnalyticityIndex idx;
    for (const auto& s : samples) {
        lo = std::min(lo, s.lambda);
        hi = std::max(hi, s.lambda);
        idx.sup_lambda_norm = std::max(idx.sup_lambda_norm, s.lambda * s.norm);
        ln.emplace_back(s.lambda, s.lambda * s.norm);
    }
    if (hi < lo * 999.99)
        throw std::invalid_argument("analyticity_index: samples span less than 3 decades");
    const auto [wlo, whi] = top_decades_window(ln, 2.0);
    idx.trend = fit_exponent(ln, wlo, whi);
    return idx;
}

}  // namespace mgtf
