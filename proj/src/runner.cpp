#include "mgtf/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgtf/blocknum.hpp"
#include "mgtf/evolve.hpp"
#include "mgtf/io.hpp"
#include "mgtf/util.hpp"

namespace mgtf {

namespace {

using json = nlohmann::ordered_json;

json config_json(const RunConfig& cfg) {
    json j;
    j["alpha"] = cfg.params.alpha;
    j["beta"] = cfg.params.beta;
    j["a"] = cfg.params.a;
    j["eta"] = cfg.params.eta;
    j["phi"] = cfg.phi_list;
    j["spectrum"] = {{"kind", "power_law"}, {"c", cfg.spectrum.c}, {"p", cfg.spectrum.p},
                     {"n", cfg.spectrum.count}};
    j["lambda"] = {{"min", cfg.grid.min}, {"max", cfg.grid.max}, {"ppd", cfg.grid.points_per_decade}};
    j["fit"] = {{"decades", cfg.fit_decades}};
    j["seed"] = cfg.seed;
    j["out"] = cfg.out_dir;
    return j;
}

json summary_header(const std::string& subcommand, const RunConfig& cfg) {
    json j;
    j["subcommand"] = subcommand;
    j["config"] = config_json(cfg);
    j["config_hash"] = git_blob_sha1(config_to_text(cfg));
    return j;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    ensure_directory(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::vector<std::string> finish(const RunConfig& cfg, const json& summary,
                                std::vector<std::string> files) {
    const std::string path = out_path(cfg, "summary.json");
    write_text_file(path, summary.dump(2) + "\n");
    files.push_back(path);
    return files;
}

json fit_json(const FitResult& f) {
    return json{{"slope", f.slope},           {"intercept", f.intercept}, {"r_squared", f.r_squared},
                {"window_min", f.window_min}, {"window_max", f.window_max}, {"n_points", f.n_points}};
}

double active_phi(const RunConfig& cfg) { return cfg.phi_list.front(); }

ModelParams active_params(const RunConfig& cfg) {
    ModelParams p = cfg.params;
    p.phi = active_phi(cfg);
    return p;
}

// peak series of the global resolvent norm, evaluated at refined per-mode
// peak locations (the gevrey/analytic measurement series)
std::vector<ResolventSample> global_at_peaks(const BlockFamily& family) {
    const PeakSeries peaks = track_peaks(family);
    std::vector<ResolventSample> samples(peaks.entries.size());
    parallel_for_index(peaks.entries.size(), [&](std::size_t i) {
        samples[i] = global_resolvent_norm(family, peaks.entries[i].lambda_peak);
    });
    return samples;
}

const char* flag_text(bool disagree) { return disagree ? "DISAGREE" : "PASS"; }

}  // namespace

std::vector<std::string> cmd_spectrum(const RunConfig& cfg) {
    const auto sigmas = build_spectrum(cfg.spectrum);
    const ModelParams p = active_params(cfg);
    CsvWriter csv({"n", "sigma", "lambda_res_a", "lambda_res_b"});
    const double fam_b = std::sqrt(p.a * p.a * p.beta / p.alpha);
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        const double rs = std::sqrt(sigmas[i]);
        csv.add_row({csv_number(static_cast<double>(i + 1)), csv_number(sigmas[i]),
                     csv_number(p.a * rs), csv_number(fam_b * rs)});
    }
    const std::string path = out_path(cfg, "spectrum.csv");
    csv.write(path);

    json s = summary_header("spectrum", cfg);
    s["n_modes"] = sigmas.size();
    s["sigma_first"] = sigmas.front();
    s["sigma_last"] = sigmas.back();
    return finish(cfg, s, {path});
}

std::vector<std::string> cmd_sweep(const RunConfig& cfg) {
    const ModelParams p = active_params(cfg);
    const BlockFamily family(p, build_spectrum(cfg.spectrum));
    const auto samples = run_sweep(family, cfg.grid);

    CsvWriter csv({"lambda", "norm", "lambda_times_norm", "argmax_mode"});
    ResolventSample sup_norm{0.0, 0.0, 0};
    double sup_ln = 0.0, sup_ln_lambda = 0.0;
    for (const auto& smp : samples) {
        csv.add_row({csv_number(smp.lambda), csv_number(smp.norm), csv_number(smp.lambda * smp.norm),
                     std::to_string(smp.argmax_mode)});
        if (smp.norm > sup_norm.norm) sup_norm = smp;
        if (smp.lambda * smp.norm > sup_ln) {
            sup_ln = smp.lambda * smp.norm;
            sup_ln_lambda = smp.lambda;
        }
    }
    const std::string path = out_path(cfg, "sweep.csv");
    csv.write(path);

    json s = summary_header("sweep", cfg);
    s["phi"] = p.phi;
    s["n_samples"] = samples.size();
    s["sup_norm"] = {{"value", sup_norm.norm}, {"lambda", sup_norm.lambda}, {"mode", sup_norm.argmax_mode}};
    s["sup_lambda_norm"] = {{"value", sup_ln}, {"lambda", sup_ln_lambda}};
    return finish(cfg, s, {path});
}

std::vector<std::string> cmd_peaks(const RunConfig& cfg) {
    const ModelParams p = active_params(cfg);
    const BlockFamily family(p, build_spectrum(cfg.spectrum));
    const PeakSeries peaks = track_peaks(family);

    CsvWriter csv({"n", "lambda_res", "lambda_peak", "peak_norm"});
    for (const auto& e : peaks.entries)
        csv.add_row({std::to_string(e.n), csv_number(e.lambda_res), csv_number(e.lambda_peak),
                     csv_number(e.peak_norm)});
    const std::string path = out_path(cfg, "peaks.csv");
    csv.write(path);

    json s = summary_header("peaks", cfg);
    s["phi"] = p.phi;
    s["n_entries"] = peaks.entries.size();
    if (!peaks.entries.empty()) {
        const auto& last = peaks.entries.back();
        s["lambda_peak_max"] = last.lambda_peak;
    }
    return finish(cfg, s, {path});
}

std::vector<std::string> cmd_analytic(const RunConfig& cfg) {
    const ModelParams p = active_params(cfg);
    const BlockFamily family(p, build_spectrum(cfg.spectrum));
    const auto samples = global_at_peaks(family);
    const AnalyticityIndex idx = analyticity_index(samples);  // needs >= 3 decades of peaks

    CsvWriter csv({"lambda", "norm", "lambda_times_norm"});
    for (const auto& smp : samples)
        csv.add_row({csv_number(smp.lambda), csv_number(smp.norm), csv_number(smp.lambda * smp.norm)});
    const std::string path = out_path(cfg, "analytic.csv");
    csv.write(path);

    json s = summary_header("analytic", cfg);
    s["phi"] = p.phi;
    s["sup_lambda_norm"] = idx.sup_lambda_norm;
    s["trend"] = fit_json(idx.trend);
    s["analyticity_consistent"] = std::abs(idx.trend.slope) <= 0.05;
    return finish(cfg, s, {path});
}

std::vector<std::string> cmd_probe(const RunConfig& cfg, ProbeRegime regime) {
    const ModelParams p = active_params(cfg);
    // matched sequences need lambda large enough that mode indices stay >= 1
    const double lam_lo = std::max(cfg.grid.min, regime_lambda(p, regime, build_spectrum(cfg.spectrum).front()));
    const double lam_hi = cfg.grid.max;
    const auto series = probe_series(p, cfg.spectrum, regime, lam_lo, lam_hi, 64);

    CsvWriter csv({"n", "lambda_n", "sigma_n", "norm_exact", "lambda_norm", "abs_mu", "abs_nu", "abs_delta"});
    std::vector<std::pair<double, double>> col_norm, col_ln, col_mu, col_nu, col_delta;
    for (const auto& r : series) {
        csv.add_row({std::to_string(r.n), csv_number(r.lambda_n), csv_number(r.sigma_n),
                     csv_number(r.exact_norm), csv_number(r.lambda_n * r.exact_norm),
                     csv_number(std::abs(r.mu)), csv_number(std::abs(r.nu)), csv_number(std::abs(r.delta))});
        col_norm.emplace_back(r.lambda_n, r.exact_norm);
        col_ln.emplace_back(r.lambda_n, r.lambda_n * r.exact_norm);
        col_mu.emplace_back(r.lambda_n, std::abs(r.mu));
        col_nu.emplace_back(r.lambda_n, std::abs(r.nu));
        col_delta.emplace_back(r.lambda_n, std::abs(r.delta));
    }
    const std::string path = out_path(cfg, "probe.csv");
    csv.write(path);

    const auto [wlo, whi] = top_decades_window(col_norm, cfg.fit_decades);
    json slopes;
    const auto add = [&](const char* name, const std::vector<std::pair<double, double>>& col) {
        const FitResult f = fit_exponent(col, wlo, whi);
        json entry = {{"measured", f.slope}, {"r_squared", f.r_squared}};
        if (const auto pred = predicted_exponent(regime, p.phi, name)) {
            entry["predicted"] = *pred;
            entry["flag"] = flag_text(std::abs(f.slope - *pred) > 0.05);
        }
        slopes[name] = entry;
    };
    add("abs_mu", col_mu);
    add("abs_nu", col_nu);
    add("abs_delta", col_delta);
    add("norm", col_norm);
    add("lambda_norm", col_ln);

    json s = summary_header("probe", cfg);
    s["phi"] = p.phi;
    s["regime"] = regime == ProbeRegime::A ? "A" : "B";
    s["paper_interval"] = regime_interval(regime);
    s["n_points"] = series.size();
    s["fit_window"] = {{"min", wlo}, {"max", whi}};
    s["slopes"] = slopes;
    return finish(cfg, s, {path});
}

std::vector<std::string> cmd_gevrey(const RunConfig& cfg) {
    const ModelParams p = active_params(cfg);
    const BlockFamily family(p, build_spectrum(cfg.spectrum));
    const auto samples = global_at_peaks(family);

    CsvWriter csv({"n", "lambda_peak", "norm", "lambda_times_norm"});
    std::vector<std::pair<double, double>> series;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& smp = samples[i];
        csv.add_row({std::to_string(static_cast<int>(i) + 1), csv_number(smp.lambda),
                     csv_number(smp.norm), csv_number(smp.lambda * smp.norm)});
        series.emplace_back(smp.lambda, smp.norm);
    }
    const std::string path = out_path(cfg, "gevrey.csv");
    csv.write(path);

    const auto [wlo, whi] = top_decades_window(series, cfg.fit_decades);
    const FitResult fit = fit_exponent(series, wlo, whi);
    const double psi_hat = -fit.slope;

    json s = summary_header("gevrey", cfg);
    s["phi"] = p.phi;
    s["fit"] = fit_json(fit);
    s["psi_hat"] = psi_hat;
    if (p.phi > 0.5 && p.phi <= 0.75) {
        const double psi1 = 2.0 - 2.0 * p.phi;
        s["psi1"] = psi1;
        s["psi1_flag"] = flag_text(std::abs(psi_hat - psi1) > 0.05);
    }
    if (p.phi >= 0.75 && p.phi < 1.0) {
        const double psi2 = 2.0 * p.phi - 1.0;
        s["psi2"] = psi2;
        s["psi2_flag"] = flag_text(std::abs(psi_hat - psi2) > 0.05);
    }
    if (p.phi <= 0.5) s["note"] = "no Gevrey class predicted on [0,1/2]; flat peaks expected";
    return finish(cfg, s, {path});
}

std::vector<std::string> cmd_evolve(const RunConfig& cfg) {
    const ModelParams p = active_params(cfg);
    const BlockFamily family(p, build_spectrum(cfg.spectrum));
    const auto initial = random_initial_states(family, cfg.seed);

    std::vector<double> times;
    const double t_max = 50.0, dt = 0.05;
    for (int k = 0; k * dt <= t_max + 1e-12; ++k) times.push_back(k * dt);
    const EnergyTrace trace = evolve(family, initial, times);

    CsvWriter csv({"t", "energy", "dissipation"});
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        csv.add_row({csv_number(trace.times[k]), csv_number(trace.energy[k]),
                     csv_number(trace.dissipation[k])});
    const std::string path = out_path(cfg, "evolve.csv");
    csv.write(path);

    const FitResult fit = fit_decay_rate(trace, 5.0, t_max);
    double abscissa = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < family.size(); ++m)
        for (const auto& z : block_eigenvalues(family.block(m))) abscissa = std::max(abscissa, z.real());

    json s = summary_header("evolve", cfg);
    s["phi"] = p.phi;
    s["seed"] = cfg.seed;
    s["initial_energy"] = trace.energy.front();
    s["decay_fit"] = fit_json(fit);
    s["spectral_abscissa"] = abscissa;
    s["balance_defect"] = energy_balance_defect(trace);
    return finish(cfg, s, {path});
}

std::vector<std::string> cmd_report(const RunConfig& cfg) {
    CsvWriter csv({"phi", "regime", "quantity", "measured", "predicted", "flag"});
    json rows = json::array();

    const double lam_lo = 1e2, lam_hi = 1e5;  // pinned findings window
    for (const double phi : cfg.phi_list) {
        ModelParams p = cfg.params;
        p.phi = phi;
        for (const ProbeRegime regime : {ProbeRegime::A, ProbeRegime::B}) {
            const ScalingReport rep =
                scaling_report(p, cfg.spectrum, regime, {phi}, lam_lo, lam_hi, 64);
            for (const auto& chk : rep.rows.front().checks) {
                const std::string regime_name = regime == ProbeRegime::A ? "A" : "B";
                csv.add_row({csv_number(phi), regime_name, chk.quantity, csv_number(chk.measured),
                             chk.predicted ? csv_number(*chk.predicted) : std::string("-"),
                             chk.predicted ? flag_text(chk.disagree) : std::string("-")});
                json row = {{"phi", phi},        {"regime", regime_name},
                            {"quantity", chk.quantity}, {"measured", chk.measured}};
                if (chk.predicted) {
                    row["predicted"] = *chk.predicted;
                    row["flag"] = flag_text(chk.disagree);
                }
                rows.push_back(row);
            }
        }

        // peak-decay exponent vs the Gevrey predictions
        const BlockFamily family(p, build_spectrum(cfg.spectrum));
        const auto samples = global_at_peaks(family);
        std::vector<std::pair<double, double>> series;
        for (const auto& smp : samples) series.emplace_back(smp.lambda, smp.norm);
        const auto [wlo, whi] = top_decades_window(series, cfg.fit_decades);
        const double psi_hat = -fit_exponent(series, wlo, whi).slope;
        std::optional<double> psi;
        if (phi > 0.5 && phi <= 0.75) psi = 2.0 - 2.0 * phi;
        else if (phi >= 0.75 && phi < 1.0) psi = 2.0 * phi - 1.0;
        else if (phi == 1.0) psi = 1.0;  // analytic rate
        csv.add_row({csv_number(phi), "peaks", "psi_hat", csv_number(psi_hat),
                     psi ? csv_number(*psi) : std::string("-"),
                     psi ? flag_text(std::abs(psi_hat - *psi) > 0.05) : std::string("-")});
        json row = {{"phi", phi}, {"regime", "peaks"}, {"quantity", "psi_hat"}, {"measured", psi_hat}};
        if (psi) {
            row["predicted"] = *psi;
            row["flag"] = flag_text(std::abs(psi_hat - *psi) > 0.05);
        }
        rows.push_back(row);
    }

    const std::string path = out_path(cfg, "report.csv");
    csv.write(path);
    json s = summary_header("report", cfg);
    s["rows"] = rows;
    return finish(cfg, s, {path});
}

int run_command(int argc, const char* const* argv) {
    CLI::App app{"numerical semigroup analysis for the MGT-Fourier system with fractional coupling"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    std::string config_path, out_override, regime_name = "B";
    std::optional<double> phi_override, lambda_min_override, lambda_max_override;
    std::optional<std::uint64_t> modes_override;

    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--phi", phi_override, "override phi (single value)");
    app.add_option("--modes", modes_override, "override spectrum truncation N");
    app.add_option("--lambda-min", lambda_min_override, "override lambda grid minimum");
    app.add_option("--lambda-max", lambda_max_override, "override lambda grid maximum");
    app.add_option("--out", out_override, "override output directory");

    auto* sub_spectrum = app.add_subcommand("spectrum", "emit the eigenvalue sequence and resonance families");
    auto* sub_sweep = app.add_subcommand("sweep", "resolvent norm sweep over the imaginary axis");
    auto* sub_peaks = app.add_subcommand("peaks", "per-mode resonance peak series");
    auto* sub_analytic = app.add_subcommand("analytic", "lambda*norm trend over the peak series");
    auto* sub_probe = app.add_subcommand("probe", "matched-frequency counterexample sequences");
    sub_probe->add_option("--regime", regime_name, "probe regime: A or B")
        ->check(CLI::IsMember({"A", "B"}));
    auto* sub_gevrey = app.add_subcommand("gevrey", "peak-decay exponent vs Gevrey predictions");
    auto* sub_evolve = app.add_subcommand("evolve", "exact modal time evolution and energy decay");
    auto* sub_report = app.add_subcommand("report", "measured-vs-predicted exponent table over phi list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // prints usage; nonzero for errors, 0 for --help
    }

    try {
        RunConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
        if (phi_override) {
            if (!(*phi_override >= 0.0 && *phi_override <= 1.0))
                throw ConfigError("phi out of range [0,1]");
            cfg.phi_list = {*phi_override};
            cfg.params.phi = *phi_override;
        }
        if (modes_override) {
            if (*modes_override == 0) throw ConfigError("--modes must be >= 1");
            cfg.spectrum.count = *modes_override;
        }
        if (lambda_min_override) cfg.grid.min = *lambda_min_override;
        if (lambda_max_override) cfg.grid.max = *lambda_max_override;
        if (!(cfg.grid.min > 0.0) || !(cfg.grid.max > cfg.grid.min))
            throw ConfigError("lambda grid needs 0 < lambda.min < lambda.max");
        if (!out_override.empty()) cfg.out_dir = out_override;

        const auto t0 = std::chrono::steady_clock::now();
        std::vector<std::string> files;
        if (sub_spectrum->parsed()) files = cmd_spectrum(cfg);
        else if (sub_sweep->parsed()) files = cmd_sweep(cfg);
        else if (sub_peaks->parsed()) files = cmd_peaks(cfg);
        else if (sub_analytic->parsed()) files = cmd_analytic(cfg);
        else if (sub_probe->parsed()) files = cmd_probe(cfg, regime_name == "A" ? ProbeRegime::A : ProbeRegime::B);
        else if (sub_gevrey->parsed()) files = cmd_gevrey(cfg);
        else if (sub_evolve->parsed()) files = cmd_evolve(cfg);
        else if (sub_report->parsed()) files = cmd_report(cfg);
        const auto t1 = std::chrono::steady_clock::now();

        // wall time goes to stdout so summary.json stays byte-deterministic
        std::cout << "wall_time_seconds="
                  << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() / 1000.0
                  << "\n";
        for (const auto& f : files) std::cout << "wrote " << f << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalDefect& e) {
        std::cerr << "numerical defect: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mgtf
