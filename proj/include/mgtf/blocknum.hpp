// blocknum.hpp — dense 4x4 complex kernels used by every analysis module:
// pivoted LU solves, weighted operator norms, eigenvalues, and propagators.
//
// All routines are pure functions of their inputs and deterministic: fixed
// iteration orders, fixed starting points, no randomness.  Only this size is
// supported; there is deliberately no general N x N path.

#pragma once

#include <array>

#include "mgtf/model.hpp"
#include "mgtf/types.hpp"

namespace mgtf {

namespace lin {

// LU factorization with partial pivoting.  Throws NumericalDefect (carrying a
// crude condition estimate) when a pivot is negligible relative to the matrix
// scale.
struct Lu {
    Mat4 lu;
    std::array<std::size_t, 4> perm;
    double scale;  // max row magnitude of the input, used for pivot tests
};

Lu lu_factor(const Mat4& m);
Vec4 lu_solve(const Lu& f, const Vec4& rhs);

// Solve m x = rhs with one step of iterative refinement.
Vec4 solve(const Mat4& m, const Vec4& rhs);

// Dense inverse through the pivoted LU factorization (4 refined solves).
Mat4 inverse(const Mat4& m);

// Lower-triangular C with m = C C^H; throws NumericalDefect if m is not
// Hermitian positive definite.
Mat4 cholesky_lower(const Mat4& m);

// Solve U x = rhs for upper-triangular U (back substitution).
Vec4 upper_solve(const Mat4& u, const Vec4& rhs);

// Inverse of an upper-triangular matrix.
Mat4 upper_inverse(const Mat4& u);

// Eigenvalues of a Hermitian matrix, ascending, via cyclic complex Jacobi.
std::array<double, 4> hermitian_eigenvalues(const Mat4& h);

// Singular values, descending (square roots of eigenvalues of M^H M).
std::array<double, 4> singular_values(const Mat4& m);

// Largest singular value.
double operator_norm(const Mat4& m);

// Monic characteristic polynomial of m via Faddeev-LeVerrier:
//   p(z) = z^4 + c[0] z^3 + c[1] z^2 + c[2] z + c[3]
std::array<Cplx, 4> char_poly(const Mat4& m);

// p(z) for the monic quartic above (Horner).
Cplx poly_eval(const std::array<Cplx, 4>& c, const Cplx& z);

// Roots of the monic quartic z^4 + c0 z^3 + c1 z^2 + c2 z + c3 by
// simultaneous (Durand-Kerner) iteration with Newton polish, unordered.
std::array<Cplx, 4> quartic_roots(const std::array<Cplx, 4>& c);

}  // namespace lin

struct ResolventSolveResult {
    ModeState state;  // solution U of (i*lambda*I - B) U = F
    double residual;  // ||(i*lambda*I - B) U - F||_W
};

// Direct dense solve of the modal resolvent system with partial pivoting and
// one refinement step.  The accepted-result contract
//   residual <= 1e-9 * (||F||_W + ||U||_W)
// is enforced; violation (possible only if i*lambda sits on the spectrum of
// B, which cannot happen on the imaginary axis for valid params) raises
// NumericalDefect.
ResolventSolveResult resolvent_solve(const ModeBlock& block, double lambda, const ForcingVector& f);

// Operator norm of M as a map on the mode equipped with the W inner product:
// the largest singular value of L M L^{-1} with L = W_chol^H.
double weighted_map_norm(const Mat4& m, const ModeBlock& block);

// ||(i*lambda*I - B)^{-1}||_W for this mode.
double block_resolvent_norm(const ModeBlock& block, double lambda);

// The four eigenvalues of B, sorted by real part descending (imaginary part
// descending as tie-break).  Computed from the characteristic polynomial with
// one inverse-iteration/Rayleigh refinement step per root.
std::array<Cplx, 4> block_eigenvalues(const ModeBlock& block);

// exp(t B), by eigendecomposition when the eigenvector matrix condition is
// below 1e8, otherwise by scaling-and-squaring with a fixed [6/6] Pade
// approximant.
Mat4 block_propagator(const ModeBlock& block, double t);

// Eigenvector-matrix condition threshold for the propagator fallback.
inline constexpr double kPropagatorCondLimit = 1e8;

// Precomputed propagator for one block: the eigendecomposition is factored
// once and exp(t B) evaluated per time; falls back to scaling-and-squaring
// when the eigenvector matrix is too ill-conditioned.
class PropagatorPlan {
  public:
    explicit PropagatorPlan(const ModeBlock& block);
    Mat4 at(double t) const;
    bool uses_eigendecomposition() const { return eig_ok_; }

  private:
    ModeBlock block_;
    std::array<Cplx, 4> z_{};
    Mat4 v_, vinv_;
    bool eig_ok_ = false;
};

}  // namespace mgtf
