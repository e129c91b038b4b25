// types.hpp — small dense complex types shared by every module.
//
// Everything in this toolkit lives on 4-dimensional mode subspaces, so the
// only linear-algebra objects are complex 4-vectors and 4x4 matrices with
// value semantics.  Heavier kernels (LU, Cholesky, Jacobi, polynomial roots)
// are in blocknum.hpp.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mgtf {

using Cplx = std::complex<double>;

// Raised when a runtime invariant that must hold for valid inputs is violated
// (non-PD Gram matrix, singular resolvent on the imaginary axis, ...).
// The CLI maps it to exit code 2.
struct NumericalDefect : std::runtime_error {
    explicit NumericalDefect(const std::string& what) : std::runtime_error(what) {}
};

using Vec4 = std::array<Cplx, 4>;

struct Mat4 {
    std::array<Cplx, 16> a{};

    Cplx& operator()(std::size_t i, std::size_t j) { return a[4 * i + j]; }
    const Cplx& operator()(std::size_t i, std::size_t j) const { return a[4 * i + j]; }

    static Mat4 zero() { return Mat4{}; }
    static Mat4 identity() {
        Mat4 m;
        for (std::size_t i = 0; i < 4; ++i) m(i, i) = 1.0;
        return m;
    }

    bool operator==(const Mat4&) const = default;
};

inline Mat4 operator+(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (std::size_t i = 0; i < 16; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

inline Mat4 operator-(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (std::size_t i = 0; i < 16; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

inline Mat4 operator*(const Cplx& s, const Mat4& x) {
    Mat4 r;
    for (std::size_t i = 0; i < 16; ++i) r.a[i] = s * x.a[i];
    return r;
}

inline Mat4 operator*(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k) {
            const Cplx xik = x(i, k);
            if (xik == Cplx{}) continue;
            for (std::size_t j = 0; j < 4; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

inline Vec4 operator*(const Mat4& m, const Vec4& v) {
    Vec4 r{};
    for (std::size_t i = 0; i < 4; ++i) {
        Cplx s = 0.0;
        for (std::size_t j = 0; j < 4; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline Vec4 operator+(const Vec4& x, const Vec4& y) {
    return {x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]};
}

inline Vec4 operator-(const Vec4& x, const Vec4& y) {
    return {x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]};
}

inline Vec4 operator*(const Cplx& s, const Vec4& x) {
    return {s * x[0], s * x[1], s * x[2], s * x[3]};
}

inline Mat4 adjoint(const Mat4& m) {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r(i, j) = std::conj(m(j, i));
    return r;
}

// <x, y> = y^H x (linear in the first argument)
inline Cplx dot(const Vec4& x, const Vec4& y) {
    Cplx s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += std::conj(y[i]) * x[i];
    return s;
}

inline double norm2(const Vec4& x) {
    double s = 0.0;
    for (const auto& c : x) s += std::norm(c);
    return std::sqrt(s);
}

inline double frobenius_norm(const Mat4& m) {
    double s = 0.0;
    for (const auto& c : m.a) s += std::norm(c);
    return std::sqrt(s);
}

}  // namespace mgtf
