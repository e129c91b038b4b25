#include "mgtf/probe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mgtf/blocknum.hpp"
#include "mgtf/util.hpp"

namespace mgtf {

std::string regime_interval(ProbeRegime regime) {
    return regime == ProbeRegime::A ? "(1/2,3/4]" : "[0,1/2] u [3/4,1); no-Gevrey on [0,1/2]";
}

double regime_sigma(const ModelParams& params, ProbeRegime regime, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("regime_sigma: lambda must be positive");
    const double a2 = params.a * params.a;
    return regime == ProbeRegime::A ? lambda * lambda / a2
                                    : params.alpha / (a2 * params.beta) * lambda * lambda;
}

double regime_lambda(const ModelParams& params, ProbeRegime regime, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("regime_lambda: sigma must be positive");
    const double a2 = params.a * params.a;
    return regime == ProbeRegime::A ? params.a * std::sqrt(sigma)
                                    : std::sqrt(a2 * params.beta / params.alpha) * std::sqrt(sigma);
}

ForcingVector regime_forcing(const ModelParams& params, ProbeRegime regime) {
    if (regime == ProbeRegime::A) return ForcingVector{0.0, 0.0, -1.0 / (2.0 * params.alpha), 0.5};
    return ForcingVector{0.0, 0.0, -1.0 / params.alpha, 0.0};
}

ProbeResult probe_exact(const ModelParams& params, ProbeRegime regime, double lambda) {
    ProbeResult r;
    r.lambda_n = lambda;
    r.sigma_n = regime_sigma(params, regime, lambda);
    const ModeBlock blk = assemble_block(params, r.sigma_n);
    const ForcingVector f = regime_forcing(params, regime);
    const ResolventSolveResult sol = resolvent_solve(blk, lambda, f);
    r.exact_state = sol.state;
    r.residual = sol.residual;
    r.exact_norm = mode_norm(blk, sol.state);
    r.forcing_norm = mode_norm(blk, f.vec());
    return r;
}

ProbeResult probe_asymptotic(const ModelParams& params, ProbeRegime regime, double lambda) {
    ProbeResult r;
    r.lambda_n = lambda;
    r.sigma_n = regime_sigma(params, regime, lambda);

    const double al = params.alpha, be = params.beta, a2 = params.a * params.a, eta = params.eta;
    const double s = r.sigma_n;
    const double sp = sigma_pow(s, params.phi);
    const Cplx i1(0.0, 1.0);

    // modal system in (mu, nu):
    //   { i[al l^3 - a^2 be l s] + l^2 - a^2 s } mu + eta s^phi nu = rhs1
    //   { i eta l s^phi - al eta l^2 s^phi } mu + { i l + s } nu   = rhs2
    const Cplx a11 = i1 * (al * lambda * lambda * lambda - a2 * be * lambda * s) + lambda * lambda - a2 * s;
    const Cplx a12 = eta * sp;
    const Cplx a21 = i1 * eta * lambda * sp - al * eta * lambda * lambda * sp;
    const Cplx a22 = i1 * lambda + s;
    const Cplx rhs1 = 1.0;
    const Cplx rhs2 = (regime == ProbeRegime::A) ? Cplx(1.0) : Cplx(0.0);

    r.delta = a11 * a22 - a12 * a21;
    if (std::abs(r.delta) < 1e-300)
        throw NumericalDefect("probe_asymptotic: determinant underflow at lambda=" + std::to_string(lambda));
    r.delta_mu = rhs1 * a22 - rhs2 * a12;
    r.delta_nu = a11 * rhs2 - a21 * rhs1;
    r.mu = r.delta_mu / r.delta;
    r.nu = r.delta_nu / r.delta;
    return r;
}

ProbeResult probe_point(const ModelParams& params, ProbeRegime regime, double lambda, int n) {
    ProbeResult r = probe_exact(params, regime, lambda);
    const ProbeResult asym = probe_asymptotic(params, regime, lambda);
    r.mu = asym.mu;
    r.nu = asym.nu;
    r.delta = asym.delta;
    r.delta_mu = asym.delta_mu;
    r.delta_nu = asym.delta_nu;
    r.n = n;
    return r;
}

std::vector<ProbeResult> probe_series(const ModelParams& params, const SpectrumModel& spectrum,
                                      ProbeRegime regime, double lambda_min, double lambda_max,
                                      int points) {
    if (!(lambda_min > 0.0) || !(lambda_max > lambda_min))
        throw std::invalid_argument("probe_series: need 0 < lambda_min < lambda_max");
    if (points < 2) throw std::invalid_argument("probe_series: need at least 2 points");

    std::vector<int> modes;
    std::vector<double> sig_of_mode;
    if (spectrum.kind == SpectrumModel::Kind::PowerLaw) {
        const auto mode_of_lambda = [&](double lam) {
            const double s = regime_sigma(params, regime, lam);
            return std::pow(s / spectrum.c, 1.0 / spectrum.p);
        };
        const double n_lo = std::max(1.0, mode_of_lambda(lambda_min));
        const double n_hi = std::max(n_lo, mode_of_lambda(lambda_max));
        modes.reserve(points);
        for (int k = 0; k < points; ++k) {
            const double f = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
            const int n = static_cast<int>(std::lround(n_lo * std::pow(n_hi / n_lo, f)));
            if (modes.empty() || n > modes.back()) modes.push_back(std::max(1, n));
        }
        for (const int n : modes)
            sig_of_mode.push_back(spectrum.c * std::pow(static_cast<double>(n), spectrum.p));
    } else {
        for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
            const double lam = regime_lambda(params, regime, spectrum.values[i]);
            if (lam >= lambda_min && lam <= lambda_max) {
                modes.push_back(static_cast<int>(i) + 1);
                sig_of_mode.push_back(spectrum.values[i]);
            }
        }
    }
    if (modes.empty()) throw std::invalid_argument("probe_series: no modes fall in the lambda range");

    std::vector<ProbeResult> out(modes.size());
    parallel_for_index(modes.size(), [&](std::size_t i) {
        const double lam = regime_lambda(params, regime, sig_of_mode[i]);
        out[i] = probe_point(params, regime, lam, modes[i]);
    });
    return out;
}

std::optional<double> predicted_exponent(ProbeRegime regime, double phi, const std::string& quantity) {
    const bool low = phi <= 0.5;
    if (regime == ProbeRegime::A) {
        if (quantity == "abs_delta") return phi <= 0.75 ? 5.0 : 2.0 + 4.0 * phi;
        if (quantity == "abs_nu") {
            if (phi >= 0.5 && phi <= 0.75) return 2.0 * phi - 3.0;
            return std::nullopt;
        }
        if (quantity == "lambda_norm") {
            if (phi > 0.5 && phi <= 0.75) return 2.0 * phi - 1.0;  // stated lower bound
            return std::nullopt;
        }
        return std::nullopt;
    }
    // regime B
    if (quantity == "abs_delta") return low ? 4.0 : 2.0 + 4.0 * phi;
    if (quantity == "abs_nu") return low ? 2.0 * phi - 2.0 : -2.0 * phi;
    if (quantity == "abs_mu") {
        if (low) return -2.0;
        return std::nullopt;
    }
    if (quantity == "norm") {
        if (low) return 0.0;  // no-Gevrey construction: ||U_n|| ~ K
        return std::nullopt;
    }
    if (quantity == "lambda_norm") return low ? 2.0 * phi : 2.0 - 2.0 * phi;  // stated lower bounds
    return std::nullopt;
}

ScalingReport scaling_report(const ModelParams& params, const SpectrumModel& spectrum,
                             ProbeRegime regime, const std::vector<double>& phi_list,
                             double lambda_min, double lambda_max, int points) {
    if (lambda_max < lambda_min * 999.99)
        throw std::invalid_argument("scaling_report: lambda range must span >= 3 decades");

    ScalingReport report;
    for (const double phi : phi_list) {
        ModelParams p = params;
        p.phi = phi;
        const auto series = probe_series(p, spectrum, regime, lambda_min, lambda_max, points);

        const auto column = [&](auto&& get) {
            std::vector<std::pair<double, double>> s;
            s.reserve(series.size());
            for (const auto& r : series) s.emplace_back(r.lambda_n, get(r));
            return s;
        };
        const auto mu_s = column([](const ProbeResult& r) { return std::abs(r.mu); });
        const auto nu_s = column([](const ProbeResult& r) { return std::abs(r.nu); });
        const auto de_s = column([](const ProbeResult& r) { return std::abs(r.delta); });
        const auto no_s = column([](const ProbeResult& r) { return r.exact_norm; });
        const auto ln_s = column([](const ProbeResult& r) { return r.lambda_n * r.exact_norm; });

        const auto [wlo, whi] = top_decades_window(mu_s, 2.0);
        ScalingRow row;
        row.phi = phi;
        row.regime = regime;
        const auto add = [&](const std::string& name, const std::vector<std::pair<double, double>>& s) {
            ExponentCheck chk;
            chk.quantity = name;
            chk.measured = fit_exponent(s, wlo, whi).slope;
            chk.predicted = predicted_exponent(regime, phi, name);
            chk.disagree = chk.predicted && std::abs(chk.measured - *chk.predicted) > 0.05;
            row.checks.push_back(chk);
        };
        add("abs_mu", mu_s);
        add("abs_nu", nu_s);
        add("abs_delta", de_s);
        add("norm", no_s);
        add("lambda_norm", ln_s);
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace mgtf
