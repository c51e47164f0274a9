#pragma once

// Closed-form census growth bounds, evaluated literally with a fixed
// epsilon (default 0.1). Pure formulas; the exact censuses are compared
// against fitted-constant multiples of these in the tests.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "suplab/halfplane.hpp"
#include "suplab/parabolic.hpp"

namespace suplab {

inline constexpr double kDefaultEps = 0.1;

enum class MstarMode { General, Square, FixedL1TimesSquare };

// General:  (d^2/(Ny) + d^3/sqrt(N) + d^4/N) N^eps
// Square / FixedL1TimesSquare:  (d/(Ny) + d^2/sqrt(N) + d^3/N) N^eps
inline double bound_mstar(double N, double y, double delta, MstarMode mode, double eps = kDefaultEps) {
    if (!(N > 0) || !(y > 0) || !(delta >= 0)) throw std::invalid_argument("bound_mstar: parameters must be positive");
    const double neps = std::pow(N, eps);
    if (mode == MstarMode::General)
        return (delta * delta / (N * y) + std::pow(delta, 3) / std::sqrt(N) + std::pow(delta, 4) / N) * neps;
    return (delta / (N * y) + delta * delta / std::sqrt(N) + std::pow(delta, 3) / N) * neps;
}

enum class MuMode { SinglePrime, TwoPrime, PrimeTimesSquare, BothSquares };

// SinglePrime / BothSquares:  (1 + d sqrt(N) y + d^2 y) N^eps
// TwoPrime / PrimeTimesSquare: Lambda-scaled variant.
inline double bound_mu(double N, double y, double delta, double Lambda, MuMode mode, double eps = kDefaultEps) {
    if (!(N > 0) || !(y > 0) || !(delta >= 0) || !(Lambda > 0))
        throw std::invalid_argument("bound_mu: parameters must be positive");
    const double core = (1.0 + delta * std::sqrt(N) * y + delta * delta * y) * std::pow(N, eps);
    if (mode == MuMode::TwoPrime || mode == MuMode::PrimeTimesSquare) return Lambda * core;
    return core;
}

// theta(l) 2^-k l^((1-k)/2) (y + N^(-1/3) y^(1/3) + N^(-5/3) y^(-4/3) + 1/N) N^eps
inline double bound_para(double N, double y, i64 l, int k, double eps = kDefaultEps) {
    if (!(N > 0) || !(y > 0) || l <= 0 || k < 4) throw std::invalid_argument("bound_para: bad parameters");
    if (detail::isqrt_exact(l) <= 0) return 0.0;
    const double shape = y + std::pow(N, -1.0 / 3.0) * std::pow(y, 1.0 / 3.0) +
                         std::pow(N, -5.0 / 3.0) * std::pow(y, -4.0 / 3.0) + 1.0 / N;
    return std::pow(2.0, -double(k)) * std::pow(double(l), 0.5 * (1.0 - k)) * shape * std::pow(N, eps);
}

} // namespace suplab
