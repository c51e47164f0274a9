#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "suplab/catalog.hpp"
#include "suplab/pretrace.hpp"

using namespace suplab;

TEST_CASE("C_k closed form") {
    CHECK(c_k(4) == Catch::Approx(std::numbers::pi / 6.0));
    CHECK(c_k(6) == Catch::Approx(-std::numbers::pi / 40.0));
    CHECK(c_k(12) == Catch::Approx(std::numbers::pi / 5632.0));
    REQUIRE_THROWS_AS(c_k(5), std::invalid_argument);
    REQUIRE_THROWS_AS(c_k(2), std::invalid_argument);
}

TEST_CASE("geometric sum at z = i, N = 1, k = 12 is dominated by |u| = 2") {
    const KernelSum ks = geometric_h(HPoint(0.0, 1.0), 1, 12, 2.0001);
    // the four |u| = 2 matrices contribute 4 * 2^-12 exactly; everything
    // else is the small parabolic completion
    const double dominant = 4.0 * std::pow(2.0, -12.0);
    CHECK(ks.value.real() > 0.9 * dominant);
    CHECK(std::abs(ks.value.imag()) < 1e-12);
    CHECK(std::abs(ks.value.real() - dominant) < 0.5 * dominant); // remainder: parabolic completion
    CHECK(ks.matrix_count == 4);
    REQUIRE_THROWS_AS(geometric_h(HPoint(0.0, 1.0), 1, 12, 1.5), std::invalid_argument);
    REQUIRE_THROWS_AS(geometric_h(HPoint(0.0, 1.0), 1, 11, 4.0), std::invalid_argument);
}

TEST_CASE("geometric sum is real for even k") {
    std::mt19937_64 gen = oracles::rng(14001);
    std::uniform_real_distribution<double> ux(-0.6, 0.6), uy(0.3, 1.1);
    for (i64 N : {1, 5, 6}) {
        for (int k : {4, 12}) {
            for (int trial = 0; trial < 4; ++trial) {
                const HPoint z(ux(gen), uy(gen));
                const KernelSum ks = geometric_h(z, N, k, 15.0);
                REQUIRE(std::abs(ks.value.imag()) <= 1e-10 * std::max(1e-12, std::abs(ks.value.real())));
            }
        }
    }
}

TEST_CASE("enlarging the truncation moves the value by less than the tail estimate") {
    std::mt19937_64 gen = oracles::rng(14002);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.35, 1.0);
    for (i64 N : {1, 5, 6}) {
        for (int k : {4, 6}) {
            for (int trial = 0; trial < 4; ++trial) {
                const HPoint z(ux(gen), uy(gen));
                const KernelSum coarse = geometric_h(z, N, k, 25.0);
                for (double grow : {2.0, 4.0}) {
                    const KernelSum fine = geometric_h(z, N, k, 25.0 * grow);
                    REQUIRE(std::abs(coarse.value.real() - fine.value.real()) <=
                            2.0 * coarse.tail_estimate);
                }
            }
        }
    }
}

TEST_CASE("amplified sum with unit support reduces to geometric_h") {
    const HPoint z(0.2, 0.7);
    AmpVector v;
    v.y[1] = 1;
    const AmplifiedSum amp = amplified_geometric(z, 5, 4, v, 20.0);
    const KernelSum geo = geometric_h(z, 5, 4, 20.0);
    CHECK(amp.value == geo.value.real()); // same code path, exact equality
}

TEST_CASE("amplified sum vanishes on empty censuses over non-square support") {
    const HPoint z(0.1, 0.9);
    AmpVector v;
    v.y[3] = 1;
    v.y[15] = -2; // non-squares only
    const AmplifiedSum amp = amplified_geometric(z, 5, 4, v, 2.5); // 2.5 < 2 sqrt(3)
    CHECK(amp.value == 0.0);
}

TEST_CASE("amplified sum matches the term-by-term rearrangement") {
    const HPoint z(0.17, 0.6);
    const i64 N = 5;
    const int k = 4;
    AmpVector v;
    v.y[1] = 3;
    v.y[4] = -1;
    v.y[9] = 2;
    const AmplifiedSum whole = amplified_geometric(z, N, k, v, 14.0);
    double by_parts = 0.0;
    for (auto [l, yl] : v.y) {
        const KernelSum part = suplab::detail::per_l_geometric(z, N, l, k, 14.0);
        by_parts += double(yl) * std::pow(double(l), 0.5 * (k - 1)) * part.value.real();
    }
    CHECK(whole.value == Catch::Approx(by_parts).margin(1e-12));
}

TEST_CASE("full amplified identity on one-dimensional spaces") {
    // C_k (sum_l x_l lambda(l))^2 |y^{k/2} f|^2 / <f,f>
    //   = sum_l y_l l^{(k-1)/2} sum_{alpha in G_l(N)} u_alpha(z)^{-k}
    struct Setup { const char* id; double L; HPoint z; double dmax; double rel; };
    const std::vector<Setup> setups{
        {"1.12", 3.0, HPoint(0.13, 0.95), 65.0, 1e-4}, // support reaches l = 625
        {"5.4", 3.0, HPoint(0.31, 0.77), 80.0, 1e-1},  // support reaches l = 81
    };
    for (const Setup& s : setups) {
        const QSeries& f = catalog_form(s.id, 2000);
        const double norm = petersson_norm(f, 1e-5);
        const AmpSupport sup = build_support(s.L, f.level);
        auto lambda = [&](i64 l) { return lam(f, l); };
        const AmpVector v = convolve_y(build_x(lambda, sup));
        const double amp = amp_lower(lambda, sup);
        const double mag = std::pow(s.z.y, 0.5 * f.weight) * std::abs(eval_form(f, s.z, 1e-14).value);
        const double lhs = c_k(f.weight) * amp * amp * mag * mag / norm;

        const AmplifiedSum coarse = amplified_geometric(s.z, f.level, f.weight, v, s.dmax);
        const AmplifiedSum fine = amplified_geometric(s.z, f.level, f.weight, v, 2.0 * s.dmax);
        REQUIRE(std::abs(lhs - coarse.value) <= coarse.tail_estimate + 1e-12);
        REQUIRE(std::abs(lhs - fine.value) <= fine.tail_estimate + 1e-12);
        REQUIRE(std::abs(lhs - fine.value) < std::abs(lhs - coarse.value));
        REQUIRE(std::abs(lhs - fine.value) <= s.rel * std::abs(lhs));
    }
}

TEST_CASE("pre-trace residual is small on the one-dimensional spaces") {
    // coarse, fast version of the acceptance experiment
    const QSeries& f54 = catalog_form("5.4", 2000);
    const double n54 = petersson_norm(f54, 1e-4);
    const SpectralCheck chk = spectral_residual(f54, HPoint(0.13, 0.9), 30.0, n54);
    CHECK(chk.residual < 0.05);
    CHECK(kPlusMinusFactor == 1.0); // the resolved +/- convention, pinned

    const QSeries& f64 = catalog_form("6.4", 2000);
    const double n64 = petersson_norm(f64, 1e-4);
    const SpectralCheck chk64 = spectral_residual(f64, HPoint(0.0, 0.8), 40.0, n64);
    CHECK(chk64.residual <= 1e-2);

    // level 1, weight 12: the same sign convention must hold across weights
    const QSeries& delta = catalog_form("1.12", 2000);
    const double nd = petersson_norm(delta, 1e-4);
    const SpectralCheck chkd = spectral_residual(delta, HPoint(0.21, 0.93), 40.0, nd);
    CHECK(chkd.residual <= 1e-3);
}
