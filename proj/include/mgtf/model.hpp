// model.hpp — system parameters, spectrum of A, and the per-mode generator.
//
// The abstract system
//
//   alpha*u_ttt + u_tt + a^2*A u + a^2*beta*A u_t - eta*A^phi theta = 0
//   theta_t + A theta + alpha*eta*A^phi u_tt + eta*A^phi u_t       = 0
//
// is represented entirely through the eigenvalue sequence sigma_n of the
// strictly positive selfadjoint operator A.  On the invariant subspace of one
// eigenvector, the first-order generator acting on U = (u, v, w, theta) with
// v = u_t, w = u_tt is the 4x4 block
//
//   B = [      0            1          0           0      ]
//       [      0            0          1           0      ]
//       [ -a^2 s/al   -a^2 be s/al   -1/al    eta s^phi/al ]
//       [      0      -eta s^phi  -al eta s^phi    -s     ]
//
// and the energy inner product on the mode is the Hermitian form
//
//   ||U||^2 = a^2 al (be-al) s |v|^2 + a^2 s |u + al v|^2 + |v + al w|^2 + |theta|^2
//
// which is positive definite exactly when beta > alpha (the subcritical
// regime).  W below is that form's Gram matrix and W_chol its Cholesky
// factor; every weighted norm is evaluated through the factor.

#pragma once

#include <cstddef>
#include <vector>

#include "mgtf/types.hpp"

namespace mgtf {

struct ModelParams {
    double alpha;  // coefficient of u_ttt, > 0
    double beta;   // coefficient of A u_t, > alpha
    double a;      // wave speed, > 0 (enters as a^2)
    double eta;    // coupling constant, != 0
    double phi;    // fractional coupling exponent, in [0, 1]
};

// Validates the five coefficients; throws std::invalid_argument naming the
// offending field.  beta <= alpha is rejected because it destroys both the
// positivity of the energy form and the dissipativity of the generator.
ModelParams validate_params(double alpha, double beta, double a, double eta, double phi);

// sigma^phi with exact short-circuits at phi = 0 and phi = 1.
double sigma_pow(double sigma, double phi);

struct SpectrumModel {
    enum class Kind { PowerLaw, Explicit };

    Kind kind = Kind::PowerLaw;
    double c = 0.0;              // power-law scale, > 0
    double p = 0.0;              // power-law exponent, > 0
    std::vector<double> values;  // explicit eigenvalue list
    std::size_t count = 0;       // truncation size N >= 1

    // sigma_n = c * n^p, n = 1..n_modes
    static SpectrumModel power_law(double c, double p, std::size_t n_modes);
    // pass-through list; must be positive and non-decreasing
    static SpectrumModel explicit_list(std::vector<double> sigmas);
    // default spectrum sigma_n = n^2 pi^2 (1-D Dirichlet Laplacian analogue)
    static SpectrumModel dirichlet_default(std::size_t n_modes);
};

// Returns sigma_1..sigma_N; throws std::invalid_argument on non-positive or
// decreasing entries, or invalid power-law parameters.
std::vector<double> build_spectrum(const SpectrumModel& spec);

// One mode of the state U = (u, v, w, theta) in the eigenbasis of A.
struct ModeState {
    Cplx u, v, w, theta;

    Vec4 vec() const { return {u, v, w, theta}; }
    static ModeState from_vec(const Vec4& x) { return {x[0], x[1], x[2], x[3]}; }
};

// One mode of the forcing F = (f1, f2, f3, f4).
struct ForcingVector {
    Cplx f1, f2, f3, f4;

    Vec4 vec() const { return {f1, f2, f3, f4}; }
    static ForcingVector from_vec(const Vec4& x) { return {x[0], x[1], x[2], x[3]}; }
};

struct ModeBlock {
    double sigma = 0.0;      // eigenvalue of A carried by this mode
    double sigma_phi = 0.0;  // sigma^phi, cached
    Mat4 B;                  // generator restricted to the mode
    Mat4 W;                  // Gram matrix of the energy inner product (Hermitian PD)
    Mat4 W_chol;             // lower-triangular C with W = C C^H
};

// Builds B, W and the Cholesky factor for one mode.  Cholesky failure would
// mean W lost positive definiteness, which is impossible for valid params and
// sigma > 0; it is reported as NumericalDefect.
ModeBlock assemble_block(const ModelParams& params, double sigma);

// sqrt(U^H W U), evaluated as the Euclidean norm of W_chol^H * U.
double mode_norm(const ModeBlock& block, const ModeState& state);
double mode_norm(const ModeBlock& block, const Vec4& state);

// <x, y>_W = y^H W x (linear in the first argument).
Cplx mode_inner(const ModeBlock& block, const Vec4& x, const Vec4& y);

// Re<B U, U>_W = -a^2 (beta-alpha) sigma |v|^2 - sigma |theta|^2  (<= 0).
double dissipation_rate(const ModeBlock& block, const ModelParams& params, const ModeState& state);

}  // namespace mgtf
