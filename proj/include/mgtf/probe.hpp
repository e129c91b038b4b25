// probe.hpp — explicit spectral counterexample sequences: exact modal
// resolvent solves at matched frequencies plus the reduced 2x2 systems for
// (mu_n, nu_n) and the determinant Delta, used to measure the growth
// exponents behind lack of analyticity, Gevrey sharpness, and no-Gevrey.
//
// Two regimes, each pairing a forcing vector with a frequency map (never
// mixed):
//   A: F_n = (0, 0, -e_n/(2 alpha), e_n/2),  sigma_n = lambda_n^2 / a^2
//   B: F_n = (0, 0, -e_n/alpha, 0),          sigma_n = (alpha /(a^2 beta)) lambda_n^2
// The phi = 0 construction is regime B evaluated at phi = 0 (the algebraic
// systems coincide there).
//
// Exact solves are the source of truth; the reduced (mu, nu) pair follows
// the regimes' 2x2 algebra (RHS (1,1) for A, (1,0) for B) and is compared by
// growth rate only, since that normalization drops a constant factor.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgtf/model.hpp"
#include "mgtf/sweep.hpp"

namespace mgtf {

enum class ProbeRegime { A, B };

// The phi interval on which the lack-of-analyticity construction of the
// regime is stated (regime B additionally carries the no-Gevrey construction
// on [0, 1/2]).
std::string regime_interval(ProbeRegime regime);

double regime_sigma(const ModelParams& params, ProbeRegime regime, double lambda);
double regime_lambda(const ModelParams& params, ProbeRegime regime, double sigma);
ForcingVector regime_forcing(const ModelParams& params, ProbeRegime regime);

struct ProbeResult {
    int n = 0;  // mode index (0 when the sample is not tied to a spectrum mode)
    double lambda_n = 0.0;
    double sigma_n = 0.0;
    ModeState exact_state{};   // solution of (i lambda_n I - B_n) U_n = F_n
    double exact_norm = 0.0;   // ||U_n||_W
    double forcing_norm = 0.0; // ||F_n||_W
    double residual = 0.0;     // exact-solve residual in the W norm
    Cplx mu{}, nu{};           // reduced 2x2 solution
    Cplx delta{};              // Cramer determinant
    Cplx delta_mu{}, delta_nu{};
};

// Exact part only: builds the block at sigma = map(lambda), solves the 4x4
// resolvent system, records norms.
ProbeResult probe_exact(const ModelParams& params, ProbeRegime regime, double lambda);

// Asymptotic part only: solves the regime's reduced 2x2 system by Cramer's
// rule.  |Delta| below 1e-300 raises NumericalDefect (underflow guard).
ProbeResult probe_asymptotic(const ModelParams& params, ProbeRegime regime, double lambda);

// Both parts at one frequency.
ProbeResult probe_point(const ModelParams& params, ProbeRegime regime, double lambda, int n = 0);

// Matched sequence over integer modes of the spectrum's generating law:
// mode indices are chosen log-spaced so that lambda_n = map^{-1}(sigma_n)
// covers [lambda_min, lambda_max] with about `points` samples.  For an
// explicit spectrum, all modes whose matched frequency falls in range are
// used.  The power-law formula is evaluated for any n >= 1 (the paper's
// sequences run n -> infinity, beyond any sweep truncation).
std::vector<ProbeResult> probe_series(const ModelParams& params, const SpectrumModel& spectrum,
                                      ProbeRegime regime, double lambda_min, double lambda_max,
                                      int points = 64);

// Measured vs predicted asymptotic exponents for one quantity.
struct ExponentCheck {
    std::string quantity;            // "abs_mu", "abs_nu", "abs_delta", "norm", "lambda_norm"
    double measured = 0.0;
    std::optional<double> predicted; // absent where the papers' tables say nothing
    bool disagree = false;           // |measured - predicted| > 0.05 (when predicted)
};

struct ScalingRow {
    double phi = 0.0;
    ProbeRegime regime = ProbeRegime::A;
    std::vector<ExponentCheck> checks;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
};

// Predicted exponent of the regime's quantity at this phi, when stated.
std::optional<double> predicted_exponent(ProbeRegime regime, double phi, const std::string& quantity);

// Fits slopes of |mu|, |nu|, |Delta|, ||U|| and lambda*||U|| over the matched
// sequence for each phi, tabulating measured against predicted exponents;
// disagreements are flagged, never fatal.  lambda range must span >= 3
// decades; fits use the top two decades.
ScalingReport scaling_report(const ModelParams& params, const SpectrumModel& spectrum,
                             ProbeRegime regime, const std::vector<double>& phi_list,
                             double lambda_min, double lambda_max, int points = 64);

}  // namespace mgtf
