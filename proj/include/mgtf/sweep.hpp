// sweep.hpp — resolvent-norm profiling over the truncated modal family.
//
// The full generator is block diagonal over modes and distinct modes are
// orthogonal in the energy inner product, so the global resolvent norm is the
// sup of the per-block weighted norms.  Grid sweeps are always augmented with
// refined samples at every resonance: between resonances the block norms dip
// by orders of magnitude and a bare log grid misses the sup.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mgtf/blocknum.hpp"
#include "mgtf/model.hpp"

namespace mgtf {

// Assembled blocks for one (params, spectrum) pair; immutable after
// construction and safe to share across threads.
class BlockFamily {
  public:
    BlockFamily(const ModelParams& params, const std::vector<double>& sigmas);

    const ModelParams& params() const { return params_; }
    const std::vector<double>& sigmas() const { return sigmas_; }
    std::size_t size() const { return blocks_.size(); }
    const ModeBlock& block(std::size_t i) const { return blocks_[i]; }
    const std::vector<ModeBlock>& blocks() const { return blocks_; }

  private:
    ModelParams params_;
    std::vector<double> sigmas_;
    std::vector<ModeBlock> blocks_;
};

struct ResolventSample {
    double lambda;    // frequency on the imaginary axis
    double norm;      // sup over modes of the block resolvent norms
    int argmax_mode;  // 1-based mode index attaining the sup
};

struct PeakEntry {
    int n;              // 1-based mode index
    double lambda_res;  // nominal resonance frequency of the mode
    double lambda_peak; // refined location of the block-norm maximum
    double peak_norm;   // block resolvent norm at lambda_peak
};

struct PeakSeries {
    std::vector<PeakEntry> entries;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double window_min = 0.0;  // lambda range of the data actually used
    double window_max = 0.0;
    int n_points = 0;
};

struct LambdaGrid {
    double min = 1.0;
    double max = 1e6;
    int points_per_decade = 64;
};

// Both matched-frequency families, deduplicated and sorted:
//   family A: lambda = a * sqrt(sigma)
//   family B: lambda = sqrt(a^2 beta / alpha) * sqrt(sigma)
// These invert the probe constructions' sigma(lambda) maps, so probe
// frequencies line up with the fixed spectrum.
std::vector<double> resonance_frequencies(const ModelParams& params, const std::vector<double>& sigmas);

// sup over modes of block_resolvent_norm at one frequency.
ResolventSample global_resolvent_norm(const BlockFamily& family, double lambda);

// Log-spaced grid samples united with refined per-mode peak locations and the
// raw resonance frequencies, in increasing lambda order.
std::vector<ResolventSample> run_sweep(const BlockFamily& family, const LambdaGrid& grid);

// Per-mode local maximum of the block resolvent norm near its resonance,
// refined by golden section to 1e-6 relative in lambda (fine-grid fallback if
// bracketing fails).
PeakSeries track_peaks(const BlockFamily& family);

// Ordinary least squares of ln(value) against ln(lambda) over the points
// falling in [window_min, window_max].  Rejects (std::invalid_argument)
// windows with fewer than 8 points or a data span under 2 decades; zero
// residual variance reports r^2 = 1.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& series, double window_min,
                       double window_max);

// The top `decades` decades of the series' lambda range, leaving out the
// largest `guard_decades` (truncation edge effects near the last resonance).
std::pair<double, double> top_decades_window(const std::vector<std::pair<double, double>>& series,
                                             double decades, double guard_decades = 0.0);

struct AnalyticityIndex {
    double sup_lambda_norm = 0.0;  // running sup of lambda * norm
    FitResult trend;               // slope of lambda * norm over the top two decades
};

// Requires the samples to span at least 3 decades of lambda.  A trend slope
// near 0 is consistent with the analyticity criterion; positive slope means
// the criterion fails on this data.
AnalyticityIndex analyticity_index(const std::vector<ResolventSample>& samples);

}  // namespace mgtf
