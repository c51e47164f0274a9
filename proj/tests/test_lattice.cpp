#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>

#include "oracles.hpp"
#include "suplab/lattice.hpp"

using namespace suplab;

TEST_CASE("gauss_reduce on simple lattices") {
    const GaussReduced square = gauss_reduce({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(square.lambda1 == Catch::Approx(1.0));
    CHECK(square.lambda2 == Catch::Approx(1.0));

    // (1, 10+i): reduction strips the 10 and leaves the square lattice
    const GaussReduced skew = gauss_reduce({{1.0, 0.0}, {10.0, 1.0}});
    CHECK(skew.lambda1 == Catch::Approx(1.0));
    CHECK(skew.lambda2 == Catch::Approx(1.0));

    const GaussReduced rect = gauss_reduce({{2.0, 0.0}, {0.0, 0.5}});
    CHECK(rect.lambda1 == Catch::Approx(0.5));
    CHECK(rect.lambda2 == Catch::Approx(2.0));

    REQUIRE_THROWS_AS(gauss_reduce({{1.0, 0.0}, {2.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("gauss_reduce matches brute-force successive minima") {
    std::mt19937_64 gen = oracles::rng(8101);
    std::uniform_int_distribution<i64> ue(-100, 100);
    int tested = 0;
    while (tested < 150) {
        const cplx v1(double(ue(gen)), double(ue(gen)));
        const cplx v2(double(ue(gen)), double(ue(gen)));
        if (std::abs(std::imag(std::conj(v1) * v2)) < 0.5) continue;
        const GaussReduced red = gauss_reduce({v1, v2});
        const oracles::BruteMinima ref = oracles::brute_minima(v1, v2);
        REQUIRE(red.lambda1 == Catch::Approx(ref.lambda1).margin(1e-9));
        REQUIRE(red.lambda2 == Catch::Approx(ref.lambda2).margin(1e-9));
        // reduced product within the Hermite range
        REQUIRE(red.lambda1 * red.lambda2 <= (2.0 / std::sqrt(3.0)) * Lattice2{v1, v2}.covolume() * (1 + 1e-12));
        REQUIRE(red.lambda1 * red.lambda2 >= Lattice2{v1, v2}.covolume() * (1 - 1e-12));
        ++tested;
    }
}

TEST_CASE("count_disc small cases") {
    const Lattice2 square{{1.0, 0.0}, {0.0, 1.0}};
    CHECK(count_disc(square, {0.0, 0.0}, 1.0) == 5);   // 0, +-1, +-i
    CHECK(count_disc(square, {0.0, 0.0}, 0.5) == 1);
    const Lattice2 hex{{1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    CHECK(count_disc(hex, {0.0, 0.0}, 1.0) == 7);      // first shell
    REQUIRE_THROWS_AS(count_disc(square, {0.0, 0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("count_disc equals the naive double loop") {
    std::mt19937_64 gen = oracles::rng(8102);
    std::uniform_int_distribution<i64> ue(-6, 6);
    std::uniform_real_distribution<double> ur(-3.0, 3.0), uR(0.0, 5.0);
    int tested = 0;
    while (tested < 200) {
        const cplx v1(double(ue(gen)), double(ue(gen)));
        const cplx v2(double(ue(gen)), double(ue(gen)));
        if (std::abs(std::imag(std::conj(v1) * v2)) < 0.5) continue;
        const cplx center(ur(gen), ur(gen));
        const double R = uR(gen);
        REQUIRE(count_disc({v1, v2}, center, R) == oracles::naive_disc_count(v1, v2, center, R));
        ++tested;
    }
}

TEST_CASE("disc count against the lemma shape with C_disc = 4") {
    std::mt19937_64 gen = oracles::rng(8103);
    std::uniform_int_distribution<i64> ue(-5, 5);
    std::uniform_real_distribution<double> ur(-2.0, 2.0), uR(0.0, 8.0);
    double worst_ratio = 0.0;
    int tested = 0;
    while (tested < 300) {
        const cplx v1(double(ue(gen)), double(ue(gen)));
        const cplx v2(double(ue(gen)), double(ue(gen)));
        if (std::abs(std::imag(std::conj(v1) * v2)) < 0.5) continue;
        const GaussReduced red = gauss_reduce({v1, v2});
        const cplx center(ur(gen), ur(gen));
        const double R = uR(gen);
        const double count = double(count_disc({v1, v2}, center, R));
        const double shape = 1.0 + R / red.lambda1 + R * R / (red.lambda1 * red.lambda2);
        REQUIRE(count <= 4.0 * shape);
        worst_ratio = std::max(worst_ratio, count / shape);
        ++tested;
    }
    std::printf("  [lattice] max observed count/shape ratio: %.4f (C_disc = 4)\n", worst_ratio);
    CHECK(worst_ratio <= 4.0);
}
