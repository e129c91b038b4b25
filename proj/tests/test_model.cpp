#include <doctest.h>

#include <cstring>
#include <numbers>

#include "mgtf/blocknum.hpp"
#include "mgtf/model.hpp"
#include "mgtf/util.hpp"

using namespace mgtf;

namespace {
const ModelParams kDefault = validate_params(1.0, 2.0, 1.0, 1.0, 1.0);
}

TEST_CASE("validate_params accepts the reference coefficients") {
    const ModelParams p = validate_params(1.0, 2.0, 1.0, 1.0, 1.0);
    CHECK(p.alpha == 1.0);
    CHECK(p.beta == 2.0);
    const ModelParams q = validate_params(0.5, 0.75, 2.0, -3.0, 0.25);
    CHECK(q.eta == -3.0);
}

TEST_CASE("validate_params rejects each broken coefficient") {
    CHECK_THROWS_WITH_AS(validate_params(1.0, 1.0, 1.0, 1.0, 0.5), "beta must exceed alpha",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(validate_params(1.0, 2.0, 1.0, 1.0, 1.2), "phi out of range [0,1]",
                         std::invalid_argument);
    CHECK_THROWS_AS(validate_params(1.0, 2.0, 1.0, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(0.0, 2.0, 1.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(1.0, 2.0, 0.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(1.0, 2.0, -1.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(1.0, 2.0, 1.0, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(1.0, 0.5, 1.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("sigma_pow short-circuits the endpoints") {
    CHECK(sigma_pow(123.456, 0.0) == 1.0);
    CHECK(sigma_pow(123.456, 1.0) == 123.456);
    CHECK(sigma_pow(4.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("build_spectrum: power law default") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const auto s = build_spectrum(SpectrumModel::power_law(pi2, 2.0, 3));
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(pi2).epsilon(1e-15));
    CHECK(s[1] == doctest::Approx(4.0 * pi2).epsilon(1e-15));
    CHECK(s[2] == doctest::Approx(9.0 * pi2).epsilon(1e-15));
}

TEST_CASE("build_spectrum: explicit list pass-through and rejection") {
    const auto s = build_spectrum(SpectrumModel::explicit_list({2.0, 5.0, 5.0}));
    CHECK(s == std::vector<double>{2.0, 5.0, 5.0});

    CHECK_THROWS_AS(build_spectrum(SpectrumModel::explicit_list({2.0, 1.0})), std::invalid_argument);
    CHECK_THROWS_AS(build_spectrum(SpectrumModel::explicit_list({-1.0, 1.0})), std::invalid_argument);
    CHECK_THROWS_AS(build_spectrum(SpectrumModel::explicit_list({})), std::invalid_argument);
    CHECK_THROWS_AS(build_spectrum(SpectrumModel::power_law(-1.0, 2.0, 4)), std::invalid_argument);
}

TEST_CASE("assemble_block reproduces the reference generator and Gram matrix") {
    const ModeBlock blk = assemble_block(kDefault, 1.0);

    const double b_expected[4][4] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {-1, -2, -1, 1}, {0, -1, -1, -1}};
    const double w_expected[4][4] = {{1, 1, 0, 0}, {1, 3, 1, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(blk.B(i, j).real() == doctest::Approx(b_expected[i][j]).epsilon(1e-15));
            CHECK(blk.B(i, j).imag() == 0.0);
            CHECK(blk.W(i, j).real() == doctest::Approx(w_expected[i][j]).epsilon(1e-15));
        }
}

TEST_CASE("mode_norm matches the quadratic form") {
    const ModeBlock blk = assemble_block(kDefault, 1.0);
    // only the a^2 s |u + al v|^2 term survives for (1,0,0,0), sigma = 1
    const double n_u = mode_norm(blk, ModeState{1.0, 0.0, 0.0, 0.0});
    CHECK(n_u * n_u == doctest::Approx(kDefault.a * kDefault.a).epsilon(1e-14));
    // theta-only state
    CHECK(mode_norm(blk, ModeState{0.0, 0.0, 0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
    // v-only state picks up all three v-bearing terms: 1 + 1 + 1
    CHECK(mode_norm(blk, ModeState{0.0, 1.0, 0.0, 0.0}) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(mode_norm(blk, ModeState{0.0, 0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("dissipation_rate evaluates the dissipation formula") {
    const ModeBlock b1 = assemble_block(kDefault, 1.0);
    CHECK(dissipation_rate(b1, kDefault, ModeState{1.0, 0.0, 0.0, 0.0}) == 0.0);
    CHECK(dissipation_rate(b1, kDefault, ModeState{0.0, 1.0, 0.0, 0.0}) ==
          doctest::Approx(-1.0).epsilon(1e-14));
    const ModeBlock b4 = assemble_block(kDefault, 4.0);
    CHECK(dissipation_rate(b4, kDefault, ModeState{0.0, 0.0, 0.0, 1.0}) ==
          doctest::Approx(-4.0).epsilon(1e-14));
}

TEST_CASE("property: W is Hermitian positive definite whenever beta > alpha") {
    Rng rng(20240901);
    for (int trial = 0; trial < 200; ++trial) {
        const double alpha = std::exp(rng.uniform(-2.0, 2.0));
        const double beta = alpha * (1.0 + std::exp(rng.uniform(-6.0, 2.0)));
        const double a = std::exp(rng.uniform(-1.5, 1.5));
        double eta = rng.normal();
        if (eta == 0.0) eta = 1.0;
        const double phi = rng.uniform(0.0, 1.0);
        const ModelParams p = validate_params(alpha, beta, a, eta, phi);
        const double sigma = std::exp(rng.uniform(0.0, 14.0));
        const ModeBlock blk = assemble_block(p, sigma);
        const auto ev = lin::hermitian_eigenvalues(blk.W);
        CHECK(ev[0] > 0.0);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(blk.W(i, j) == std::conj(blk.W(j, i)));
    }
}

TEST_CASE("property: Re<BU,U>_W equals the dissipation formula to 1e-10 relative") {
    Rng rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        const double phi = rng.uniform(0.0, 1.0);
        const ModelParams p = validate_params(1.0, 2.0, 1.0, 1.0, phi);
        const double sigma = std::exp(rng.uniform(0.0, 14.0));
        const ModeBlock blk = assemble_block(p, sigma);
        const Vec4 u{rng.normal_complex(), rng.normal_complex(), rng.normal_complex(),
                     rng.normal_complex()};
        const double lhs = mode_inner(blk, blk.B * u, u).real();  // <BU, U>_W
        const double rhs = dissipation_rate(blk, p, ModeState::from_vec(u));
        const double scale = std::max(std::abs(rhs), 1e-30);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
        CHECK(rhs <= 0.0);
    }
}

TEST_CASE("dissipation_rate is zero only when v and theta vanish") {
    const ModeBlock blk = assemble_block(kDefault, 7.0);
    CHECK(dissipation_rate(blk, kDefault, ModeState{3.0, 0.0, -2.0, 0.0}) == 0.0);
    CHECK(dissipation_rate(blk, kDefault, ModeState{0.0, 1e-8, 0.0, 0.0}) < 0.0);
    CHECK(dissipation_rate(blk, kDefault, ModeState{0.0, 0.0, 0.0, 1e-8}) < 0.0);
}

TEST_CASE("assemble_block is deterministic") {
    const ModeBlock b1 = assemble_block(kDefault, 12345.678);
    const ModeBlock b2 = assemble_block(kDefault, 12345.678);
    CHECK(std::memcmp(b1.B.a.data(), b2.B.a.data(), sizeof(b1.B.a)) == 0);
    CHECK(std::memcmp(b1.W.a.data(), b2.W.a.data(), sizeof(b1.W.a)) == 0);
    CHECK(std::memcmp(b1.W_chol.a.data(), b2.W_chol.a.data(), sizeof(b1.W_chol.a)) == 0);
}

TEST_CASE("assemble_block rejects non-positive sigma") {
    CHECK_THROWS_AS(assemble_block(kDefault, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(assemble_block(kDefault, -1.0), std::invalid_argument);
}
