#include "mgtf/blocknum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mgtf {
namespace lin {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

Lu lu_factor(const Mat4& m) {
    Lu f;
    f.lu = m;
    f.perm = {0, 1, 2, 3};
    f.scale = 0.0;
    for (const auto& c : m.a) f.scale = std::max(f.scale, std::abs(c));
    if (f.scale == 0.0) throw NumericalDefect("lu_factor: zero matrix");

    Mat4& a = f.lu;
    for (std::size_t k = 0; k < 4; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < 4; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= 1e-15 * f.scale) {
            throw NumericalDefect("lu_factor: numerically singular matrix (condition >= " +
                                  std::to_string(f.scale / std::max(best, 1e-300)) + ")");
        }
        if (piv != k) {
            for (std::size_t j = 0; j < 4; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        for (std::size_t i = k + 1; i < 4; ++i) {
            const Cplx l = a(i, k) / a(k, k);
            a(i, k) = l;
            for (std::size_t j = k + 1; j < 4; ++j) a(i, j) -= l * a(k, j);
        }
    }
    return f;
}

Vec4 lu_solve(const Lu& f, const Vec4& rhs) {
    Vec4 x;
    for (std::size_t i = 0; i < 4; ++i) x[i] = rhs[f.perm[i]];
    for (std::size_t i = 1; i < 4; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (std::size_t ii = 4; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < 4; ++j) x[ii] -= f.lu(ii, j) * x[j];
        x[ii] /= f.lu(ii, ii);
    }
    return x;
}

Vec4 solve(const Mat4& m, const Vec4& rhs) {
    const Lu f = lu_factor(m);
    Vec4 x = lu_solve(f, rhs);
    const Vec4 r = rhs - m * x;
    const Vec4 dx = lu_solve(f, r);
    return x + dx;
}

Mat4 inverse(const Mat4& m) {
    const Lu f = lu_factor(m);
    Mat4 inv;
    for (std::size_t col = 0; col < 4; ++col) {
        Vec4 e{};
        e[col] = 1.0;
        Vec4 x = lu_solve(f, e);
        const Vec4 r = e - m * x;
        x = x + lu_solve(f, r);
        for (std::size_t i = 0; i < 4; ++i) inv(i, col) = x[i];
    }
    return inv;
}

Mat4 cholesky_lower(const Mat4& m) {
    Mat4 c;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            Cplx s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= c(i, k) * std::conj(c(j, k));
            if (i == j) {
                const double d = s.real();
                if (!(d > 0.0) || std::abs(s.imag()) > 1e-12 * std::max(1.0, d))
                    throw NumericalDefect("cholesky: matrix not Hermitian positive definite");
                c(i, i) = std::sqrt(d);
            } else {
                c(i, j) = s / c(j, j);
            }
        }
    }
    return c;
}

Vec4 upper_solve(const Mat4& u, const Vec4& rhs) {
    Vec4 x = rhs;
    for (std::size_t ii = 4; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < 4; ++j) x[ii] -= u(ii, j) * x[j];
        x[ii] /= u(ii, ii);
    }
    return x;
}

Mat4 upper_inverse(const Mat4& u) {
    Mat4 inv;
    for (std::size_t col = 0; col < 4; ++col) {
        Vec4 e{};
        e[col] = 1.0;
        const Vec4 x = upper_solve(u, e);
        for (std::size_t i = 0; i < 4; ++i) inv(i, col) = x[i];
    }
    return inv;
}

std::array<double, 4> hermitian_eigenvalues(const Mat4& h) {
    Mat4 a = h;
    // symmetrize to kill representation noise
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) a(i, j) = 0.5 * (a(i, j) + std::conj(h(j, i)));

    const double scale = frobenius_norm(a);
    if (scale == 0.0) return {0.0, 0.0, 0.0, 0.0};

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < 4; ++p)
            for (std::size_t q = p + 1; q < 4; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= 1e-16 * scale) break;

        for (std::size_t p = 0; p < 4; ++p) {
            for (std::size_t q = p + 1; q < 4; ++q) {
                const Cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-18 * scale) continue;
                const Cplx phase = apq / mag;  // e^{i arg(apq)}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cth = 1.0 / std::sqrt(1.0 + t * t);
                const Cplx s = t * cth * phase;  // rotation: col_p' = c*col_p - conj(s)*col_q, etc.

                for (std::size_t k = 0; k < 4; ++k) {
                    const Cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = cth * akp - std::conj(s) * akq;
                    a(k, q) = s * akp + cth * akq;
                }
                for (std::size_t k = 0; k < 4; ++k) {
                    const Cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cth * apk - s * aqk;
                    a(q, k) = std::conj(s) * apk + cth * aqk;
                }
            }
        }
    }
    std::array<double, 4> ev{a(0, 0).real(), a(1, 1).real(), a(2, 2).real(), a(3, 3).real()};
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::array<double, 4> singular_values(const Mat4& m) {
    const Mat4 h = adjoint(m) * m;
    auto ev = hermitian_eigenvalues(h);
    std::array<double, 4> sv;
    for (std::size_t i = 0; i < 4; ++i) sv[i] = std::sqrt(std::max(0.0, ev[3 - i]));
    return sv;
}

double operator_norm(const Mat4& m) { return singular_values(m)[0]; }

std::array<Cplx, 4> char_poly(const Mat4& m) {
    // Faddeev-LeVerrier: M1 = m, c1 = -tr(M1); M_{k+1} = m (M_k + c_k I)
    std::array<Cplx, 4> c;
    Mat4 mk = m;
    for (std::size_t k = 0; k < 4; ++k) {
        Cplx tr = 0.0;
        for (std::size_t i = 0; i < 4; ++i) tr += mk(i, i);
        c[k] = -tr / static_cast<double>(k + 1);
        if (k + 1 < 4) {
            Mat4 shifted = mk;
            for (std::size_t i = 0; i < 4; ++i) shifted(i, i) += c[k];
            mk = m * shifted;
        }
    }
    return c;
}

Cplx poly_eval(const std::array<Cplx, 4>& c, const Cplx& z) {
    return (((z + c[0]) * z + c[1]) * z + c[2]) * z + c[3];
}

namespace {

Cplx poly_deriv(const std::array<Cplx, 4>& c, const Cplx& z) {
    return ((4.0 * z + 3.0 * c[0]) * z + 2.0 * c[1]) * z + c[2];
}

}  // namespace

std::array<Cplx, 4> quartic_roots(const std::array<Cplx, 4>& c) {
    // Balance through z = r*y so the starting circle matches the root scale.
    double r = 1.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double ck = std::abs(c[k]);
        if (ck > 0.0) r = std::max(r, std::pow(ck, 1.0 / static_cast<double>(k + 1)));
    }

    std::array<Cplx, 4> z;
    for (std::size_t i = 0; i < 4; ++i) {
        const double ang = 0.4 + 2.0 * std::numbers::pi * static_cast<double>(i) / 4.0;
        z[i] = r * Cplx(std::cos(ang), std::sin(ang));
    }

    for (int it = 0; it < 400; ++it) {
        double worst = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            Cplx denom = 1.0;
            for (std::size_t j = 0; j < 4; ++j)
                if (j != i) denom *= z[i] - z[j];
            if (denom == Cplx{}) denom = Cplx(1e-300, 0.0);
            const Cplx dz = poly_eval(c, z[i]) / denom;
            z[i] -= dz;
            worst = std::max(worst, std::abs(dz) / (1.0 + std::abs(z[i])));
        }
        if (worst < 1e-15) break;
    }

    // Newton polish (quadratic convergence near simple roots; harmless
    // otherwise since steps are accepted only while |p| decreases).
    for (std::size_t i = 0; i < 4; ++i) {
        for (int it = 0; it < 4; ++it) {
            const Cplx p = poly_eval(c, z[i]);
            const Cplx dp = poly_deriv(c, z[i]);
            if (dp == Cplx{}) break;
            const Cplx znew = z[i] - p / dp;
            if (std::abs(poly_eval(c, znew)) < std::abs(p))
                z[i] = znew;
            else
                break;
        }
    }
    return z;
}

}  // namespace lin

namespace {

Mat4 shifted_by_lambda(const Mat4& b, double lambda) {
    Mat4 a = Cplx(-1.0, 0.0) * b;
    for (std::size_t i = 0; i < 4; ++i) a(i, i) += Cplx(0.0, lambda);
    return a;  // i*lambda*I - B
}

}  // namespace

ResolventSolveResult resolvent_solve(const ModeBlock& block, double lambda, const ForcingVector& f) {
    const Mat4 a = shifted_by_lambda(block.B, lambda);
    const Vec4 rhs = f.vec();
    const Vec4 u = lin::solve(a, rhs);
    const double residual = mode_norm(block, rhs - a * u);
    const double fw = mode_norm(block, rhs);
    const double uw = mode_norm(block, u);
    if (residual > 1e-9 * (fw + uw))
        throw NumericalDefect("resolvent_solve: residual exceeds 1e-9 contract at lambda=" +
                              std::to_string(lambda));
    return ResolventSolveResult{ModeState::from_vec(u), residual};
}

double weighted_map_norm(const Mat4& m, const ModeBlock& block) {
    const Mat4 l = adjoint(block.W_chol);  // upper triangular
    const Mat4 n = l * m * lin::upper_inverse(l);
    return lin::operator_norm(n);
}

double block_resolvent_norm(const ModeBlock& block, double lambda) {
    const Mat4 a = shifted_by_lambda(block.B, lambda);
    return weighted_map_norm(lin::inverse(a), block);
}

std::array<Cplx, 4> block_eigenvalues(const ModeBlock& block) {
    const auto c = lin::char_poly(block.B);
    auto z = lin::quartic_roots(c);

    // One inverse-iteration step per root with a Rayleigh-quotient update,
    // accepted only when it reduces |p(z)|.
    const double bscale = frobenius_norm(block.B);
    for (auto& zk : z) {
        Mat4 shifted = block.B;
        for (std::size_t i = 0; i < 4; ++i) shifted(i, i) -= zk;
        // regularize exact singularity: the shift is a computed root
        for (std::size_t i = 0; i < 4; ++i)
            if (std::abs(shifted(i, i)) < 1e-14 * bscale) shifted(i, i) += Cplx(1e-14 * bscale, 0.0);
        Vec4 x{Cplx(1.0, 0.0), Cplx(0.7, 0.2), Cplx(-0.4, 0.1), Cplx(0.0, 0.3)};
        try {
            x = lin::solve(shifted, x);
        } catch (const NumericalDefect&) {
            continue;  // zk already sits on the spectrum to machine precision
        }
        const double nx = norm2(x);
        if (!(nx > 0.0) || !std::isfinite(nx)) continue;
        x = (1.0 / nx) * x;
        const Cplx rayleigh = dot(block.B * x, x) / dot(x, x);
        if (std::abs(lin::poly_eval(c, rayleigh)) < std::abs(lin::poly_eval(c, zk))) zk = rayleigh;
    }

    std::sort(z.begin(), z.end(), [](const Cplx& a, const Cplx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return z;
}

namespace {

// scaling and squaring with the fixed [6/6] diagonal Pade approximant
Mat4 expm_pade(const Mat4& b, double t) {
    static constexpr std::array<double, 7> kPade6 = {665280.0, 332640.0, 75600.0,
                                                     10080.0,  840.0,    42.0,
                                                     1.0};
    Mat4 a = Cplx(t, 0.0) * b;
    int s = 0;
    double nrm = frobenius_norm(a);
    while (nrm > 0.5) {
        nrm *= 0.5;
        ++s;
    }
    const double sc = std::ldexp(1.0, -s);
    a = Cplx(sc, 0.0) * a;

    const Mat4 a2 = a * a;
    const Mat4 a4 = a2 * a2;
    const Mat4 a6 = a4 * a2;
    const Mat4 even = Cplx(kPade6[0], 0.0) * Mat4::identity() + Cplx(kPade6[2], 0.0) * a2 +
                      Cplx(kPade6[4], 0.0) * a4 + Cplx(kPade6[6], 0.0) * a6;
    const Mat4 odd = a * (Cplx(kPade6[1], 0.0) * Mat4::identity() + Cplx(kPade6[3], 0.0) * a2 +
                          Cplx(kPade6[5], 0.0) * a4);
    // exp(a) ~= (even - odd)^{-1} (even + odd)
    Mat4 e = lin::inverse(even - odd) * (even + odd);
    for (int i = 0; i < s; ++i) e = e * e;
    return e;
}

}  // namespace

PropagatorPlan::PropagatorPlan(const ModeBlock& block) : block_(block) {
    z_ = block_eigenvalues(block);
    const double bscale = frobenius_norm(block.B);

    // eigenvectors by two steps of inverse iteration at each refined root
    bool ok = true;
    for (std::size_t k = 0; k < 4 && ok; ++k) {
        Mat4 shifted = block.B;
        for (std::size_t i = 0; i < 4; ++i) shifted(i, i) -= z_[k];
        for (std::size_t i = 0; i < 4; ++i)
            if (std::abs(shifted(i, i)) < 1e-14 * bscale) shifted(i, i) += Cplx(1e-14 * bscale, 0.0);
        Vec4 x{Cplx(1.0, 0.0), Cplx(0.6, -0.3), Cplx(-0.2, 0.5), Cplx(0.4, 0.1)};
        try {
            const lin::Lu f = lin::lu_factor(shifted);
            for (int it = 0; it < 2; ++it) {
                x = lin::lu_solve(f, x);
                const double nx = norm2(x);
                if (!(nx > 0.0) || !std::isfinite(nx)) {
                    ok = false;
                    break;
                }
                x = (1.0 / nx) * x;
            }
        } catch (const NumericalDefect&) {
            ok = false;
        }
        for (std::size_t i = 0; i < 4; ++i) v_(i, k) = x[i];
    }

    if (ok) {
        const auto sv = lin::singular_values(v_);
        const double cond = sv[0] / std::max(sv[3], 1e-300);
        if (cond < kPropagatorCondLimit) {
            vinv_ = lin::inverse(v_);
            eig_ok_ = true;
        }
    }
}

Mat4 PropagatorPlan::at(double t) const {
    if (t < 0.0) throw std::invalid_argument("block_propagator: t must be >= 0");
    if (t == 0.0) return Mat4::identity();
    if (eig_ok_) {
        Mat4 d;
        for (std::size_t k = 0; k < 4; ++k) d(k, k) = std::exp(z_[k] * t);
        return v_ * d * vinv_;
    }
    return expm_pade(block_.B, t);
}

Mat4 block_propagator(const ModeBlock& block, double t) { return PropagatorPlan(block).at(t); }

}  // namespace mgtf
