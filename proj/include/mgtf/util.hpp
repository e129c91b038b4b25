// util.hpp — deterministic RNG, order-stable summation, golden-section
// maximization, and a chunked parallel map whose output is independent of
// scheduling.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <future>
#include <random>
#include <thread>
#include <vector>

namespace mgtf {

// mt19937_64 with explicit uniform/normal transforms so streams are
// bit-identical across standard libraries (std::normal_distribution is
// implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {  // in [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal() {  // Box-Muller, one value per call pair
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> normal_complex() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Pairwise (cascade) summation: order-stable and O(log n) error growth.
inline double pairwise_sum(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

// Golden-section search for the maximum of f on [lo, hi]; stops when the
// bracket width falls below rel_tol * midpoint.  Returns (argmax, max).
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double rel_tol) {
    constexpr double kInvPhi = 0.6180339887498948482;
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > rel_tol * (0.5 * (lo + hi))) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = f(d);
        }
    }
    const double x = 0.5 * (lo + hi);
    return {x, f(x)};
}

// Applies fn(i) for i in [0, n) across threads; each index writes only its
// own slot, so results are deterministic regardless of scheduling.
template <class Fn>
void parallel_for_index(std::size_t n, Fn&& fn) {
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, n);
    if (workers <= 1 || n < 16) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> tasks;
    tasks.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        tasks.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        }));
    }
    for (auto& t : tasks) t.get();
}

}  // namespace mgtf
