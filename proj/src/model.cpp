#include "mgtf/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mgtf/blocknum.hpp"

namespace mgtf {

ModelParams validate_params(double alpha, double beta, double a, double eta, double phi) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
    if (eta == 0.0 || !std::isfinite(eta)) throw std::invalid_argument("eta must be nonzero");
    if (!(phi >= 0.0 && phi <= 1.0)) throw std::invalid_argument("phi out of range [0,1]");
    if (!(beta > alpha)) throw std::invalid_argument("beta must exceed alpha");
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(a))
        throw std::invalid_argument("parameters must be finite");
    return ModelParams{alpha, beta, a, eta, phi};
}

double sigma_pow(double sigma, double phi) {
    if (phi == 0.0) return 1.0;
    if (phi == 1.0) return sigma;
    return std::exp(phi * std::log(sigma));
}

SpectrumModel SpectrumModel::power_law(double c, double p, std::size_t n_modes) {
    SpectrumModel s;
    s.kind = Kind::PowerLaw;
    s.c = c;
    s.p = p;
    s.count = n_modes;
    return s;
}

SpectrumModel SpectrumModel::explicit_list(std::vector<double> sigmas) {
    SpectrumModel s;
    s.kind = Kind::Explicit;
    s.count = sigmas.size();
    s.values = std::move(sigmas);
    return s;
}

SpectrumModel SpectrumModel::dirichlet_default(std::size_t n_modes) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return power_law(pi2, 2.0, n_modes);
}

std::vector<double> build_spectrum(const SpectrumModel& spec) {
    if (spec.count == 0) throw std::invalid_argument("spectrum: count must be >= 1");
    std::vector<double> sigmas;
    sigmas.reserve(spec.count);
    if (spec.kind == SpectrumModel::Kind::PowerLaw) {
        if (!(spec.c > 0.0)) throw std::invalid_argument("spectrum: power-law scale c must be positive");
        if (!(spec.p > 0.0)) throw std::invalid_argument("spectrum: power-law exponent p must be positive");
        for (std::size_t n = 1; n <= spec.count; ++n)
            sigmas.push_back(spec.c * std::pow(static_cast<double>(n), spec.p));
    } else {
        if (spec.count > spec.values.size())
            throw std::invalid_argument("spectrum: count exceeds explicit list size");
        sigmas.assign(spec.values.begin(), spec.values.begin() + static_cast<std::ptrdiff_t>(spec.count));
    }
    double prev = 0.0;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        if (!(sigmas[i] > 0.0) || !std::isfinite(sigmas[i]))
            throw std::invalid_argument("spectrum: eigenvalues must be positive and finite");
        if (sigmas[i] < prev) throw std::invalid_argument("spectrum: non-monotone eigenvalue sequence");
        prev = sigmas[i];
    }
    return sigmas;
}

ModeBlock assemble_block(const ModelParams& params, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("assemble_block: sigma must be positive");
    const double al = params.alpha, be = params.beta, a2 = params.a * params.a, eta = params.eta;
    const double sp = sigma_pow(sigma, params.phi);

    ModeBlock blk;
    blk.sigma = sigma;
    blk.sigma_phi = sp;

    Mat4& B = blk.B;
    B(0, 1) = 1.0;
    B(1, 2) = 1.0;
    B(2, 0) = -a2 * sigma / al;
    B(2, 1) = -a2 * be * sigma / al;
    B(2, 2) = -1.0 / al;
    B(2, 3) = eta * sp / al;
    B(3, 1) = -eta * sp;
    B(3, 2) = -al * eta * sp;
    B(3, 3) = -sigma;

    // W collects the coefficients of the expanded quadratic form
    //   a^2 al (be-al) s |v|^2 + a^2 s |u + al v|^2 + |v + al w|^2 + |theta|^2
    Mat4& W = blk.W;
    W(0, 0) = a2 * sigma;
    W(0, 1) = W(1, 0) = a2 * al * sigma;
    W(1, 1) = a2 * al * be * sigma + 1.0;  // al^2 + al(be-al) = al*be
    W(1, 2) = W(2, 1) = al;
    W(2, 2) = al * al;
    W(3, 3) = 1.0;

    blk.W_chol = lin::cholesky_lower(W);
    return blk;
}

double mode_norm(const ModeBlock& block, const Vec4& state) {
    // ||x||_W = ||C^H x||_2 with W = C C^H
    const Mat4 Ct = adjoint(block.W_chol);
    return norm2(Ct * state);
}

double mode_norm(const ModeBlock& block, const ModeState& state) {
    return mode_norm(block, state.vec());
}

Cplx mode_inner(const ModeBlock& block, const Vec4& x, const Vec4& y) {
    return dot(block.W * x, y);
}

double dissipation_rate(const ModeBlock& block, const ModelParams& params, const ModeState& state) {
    const double a2 = params.a * params.a;
    return -a2 * (params.beta - params.alpha) * block.sigma * std::norm(state.v)
           - block.sigma * std::norm(state.theta);
}

}  // namespace mgtf
