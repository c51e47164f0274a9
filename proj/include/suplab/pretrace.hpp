#pragma once

// Geometric side of the pre-trace identity. For even k >= 4 and w = -conj(z)
// the kernel sum over G_1(N) collapses to  y^k h(z, -conj(z)) =
// sum_gamma u_gamma(z)^{-k}, and for a one-dimensional space S_k(N) the
// spectral side is  C_k |y^{k/2} f(z)|^2 / <f,f>  with
// C_k = (-1)^{k/2} pi / (2^{k-3} (k-1)).
//
// Sums run over all matrices of G_l(N), i.e. gamma and -gamma both count;
// under that convention the identity holds with no extra factor, which is
// pinned as kPlusMinusFactor below and validated on both one-dimensional
// spaces.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "suplab/amplifier.hpp"
#include "suplab/census.hpp"
#include "suplab/halfplane.hpp"
#include "suplab/parabolic.hpp"
#include "suplab/petersson.hpp"
#include "suplab/qseries.hpp"

namespace suplab {

inline constexpr double kPlusMinusFactor = 1.0;

inline double c_k(int k) {
    if (k % 2 != 0) throw std::invalid_argument("c_k: k must be even");
    if (k < 4) throw std::invalid_argument("c_k: k must be >= 4");
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * std::numbers::pi / (std::pow(2.0, double(k - 3)) * double(k - 1));
}

struct KernelSum {
    cplx value{0.0, 0.0};
    double delta_max = 0.0;
    double tail_estimate = 0.0;
    i64 matrix_count = 0;
};

namespace detail {

inline cplx u_pow_minus_k(cplx u, int k) {
    return 1.0 / std::pow(u, k);
}

// Signed sum over G_l(N) of u^{-k}: window part enumerated up to
// delta_max, parabolic part (square l) completed beyond delta_max with a
// certified tail, non-parabolic part truncated with an empirical
// quadratic-growth tail estimate.
inline KernelSum per_l_geometric(const HPoint& z, i64 N, i64 l, int k, double delta_max) {
    if (k < 4 || k % 2 != 0) throw std::invalid_argument("geometric sum: k must be even and >= 4");
    if (delta_max < 2.0) throw std::invalid_argument("geometric sum: delta_max must be >= 2");

    const std::vector<IntMat> window = enumerate_window({z, N, l, delta_max});

    struct Term { double abs; cplx val; };
    std::vector<Term> terms;
    terms.reserve(window.size());
    std::vector<double> nonpar_abs;
    for (const IntMat& g : window) {
        const cplx u = u_value(g, z);
        terms.push_back({std::abs(u), u_pow_minus_k(u, k)});
        if (classify(g, l) != MatClass::Parabolic) nonpar_abs.push_back(std::abs(u));
    }

    KernelSum out;
    out.delta_max = delta_max;
    out.matrix_count = i64(window.size());

    // Parabolic completion: 2 x (sum over representatives with
    // |u| > delta_max), since the window already holds both signs of
    // every matrix it reached.
    const i64 sq = isqrt_exact(l);
    if (sq > 0) {
        // Tail tolerance pinned below both the scalar term (2 sqrt(l))^-k
        // and the weighted scale l^{(k-1)/2} this sum carries inside the
        // amplified identity, so the certified part never dominates a
        // reported tail estimate. The k-dependent floor keeps the cusp
        // enumeration affordable at small k, where the tails decay slowly.
        const double ideal_tol =
            std::min(1e-8 * std::pow(2.0 * std::sqrt(double(l)), -double(k)),
                     1e-4 * std::pow(delta_max, 2.0 - double(k)) / std::pow(double(l), 0.5 * (k - 1)));
        // affordability floor: the cusp enumeration cost scales like
        // tol^(-1/(k-1)), so the floor relaxes quickly as k drops
        const double census_tol = std::max(ideal_tol, std::pow(10.0, -1.0 - 2.5 * double(k)));
        const ParabolicCensus census = parabolic_census(z, N, l, k, census_tol);
        cplx completion = 0.0;
        std::vector<Term> extra;
        for (const ParabolicTerm& t : census.terms)
            if (t.u_abs > delta_max + kGeomSlack)
                extra.push_back({t.u_abs, 2.0 * u_pow_minus_k(t.u, k)});
        std::sort(extra.begin(), extra.end(), [](const Term& p, const Term& q) { return p.abs > q.abs; });
        for (const Term& t : extra) completion += t.val;
        terms.push_back({0.0, completion}); // folded into the fixed-order reduction below
        out.tail_estimate += 2.0 * census.tail_bound;
    }

    // Empirical non-parabolic tail: fit count(delta) <= A + B delta^2 on
    // the observed census and integrate k (A + B d^2) d^{-k-1} beyond
    // delta_max; the doubled B adds margin. This is an estimate, not a
    // certificate.
    if (!nonpar_abs.empty()) {
        std::sort(nonpar_abs.begin(), nonpar_abs.end());
        const double floor_delta = 2.0 * std::sqrt(double(l)) + 0.5;
        double A = 0.0;
        for (double u : nonpar_abs)
            if (u <= floor_delta) A += 1.0;
        double B = 0.0;
        for (size_t i = 0; i < nonpar_abs.size(); ++i) {
            const double excess = double(i + 1) - A;
            if (excess > 0.0) B = std::max(B, excess / std::pow(nonpar_abs[i], 2.0));
        }
        out.tail_estimate += A * std::pow(delta_max, -double(k)) +
                             2.0 * B * (double(k) / double(k - 2)) * std::pow(delta_max, 2.0 - double(k));
    }

    // Fixed summation order: |u| descending.
    std::sort(terms.begin(), terms.end(), [](const Term& p, const Term& q) {
        if (p.abs != q.abs) return p.abs > q.abs;
        if (p.val.real() != q.val.real()) return p.val.real() < q.val.real();
        return p.val.imag() < q.val.imag();
    });
    cplx acc = 0.0;
    for (const Term& t : terms) acc += t.val;
    out.value = acc;
    return out;
}

} // namespace detail

// y^k h(z, -conj(z)) over G_1(N) = Gamma_0(N): the u-sum at l = 1.
inline KernelSum geometric_h(const HPoint& z, i64 N, int k, double delta_max) {
    return detail::per_l_geometric(z, N, 1, k, delta_max);
}

struct AmplifiedSum {
    double value = 0.0;
    double tail_estimate = 0.0;
};

// sum_l y_l l^{(k-1)/2} sum_{alpha in G_l(N)} u_alpha(z)^{-k}, each l
// truncated at delta_max as in geometric_h.
inline AmplifiedSum amplified_geometric(const HPoint& z, i64 N, int k, const AmpVector& y_vec,
                                        double delta_max) {
    AmplifiedSum out;
    for (auto [l, yl] : y_vec.y) {
        if (yl == 0) continue;
        const KernelSum part = detail::per_l_geometric(z, N, l, k, delta_max);
        const double weight = double(yl) * std::pow(double(l), 0.5 * (k - 1));
        out.value += weight * part.value.real();
        out.tail_estimate += std::abs(weight) * part.tail_estimate;
    }
    return out;
}

struct SpectralCheck {
    double geometric = 0.0;   // C_k^{-1} y^k h(z, -conj(z)), +/- convention applied
    double spectral = 0.0;    // |y^{k/2} f(z)|^2 / <f,f>
    double residual = 0.0;    // relative gap
    KernelSum kernel;
    double petersson = 0.0;
};

// Pre-trace identity check on a one-dimensional space: compares the
// truncated geometric side against |y^{k/2} f(z)|^2 / <f,f>. petersson
// may be passed in to reuse a previously computed norm.
inline SpectralCheck spectral_residual(const QSeries& f, const HPoint& z, double delta_max,
                                       double petersson = 0.0, double petersson_tol = 1e-4) {
    SpectralCheck out;
    out.kernel = geometric_h(z, f.level, f.weight, delta_max);
    out.petersson = petersson > 0.0 ? petersson : petersson_norm(f, petersson_tol);
    out.geometric = kPlusMinusFactor * out.kernel.value.real() / c_k(f.weight);

    const EvalResult ev = eval_form(f, z, 1e-13);
    const double mag = std::pow(z.y, 0.5 * f.weight) * std::abs(ev.value);
    out.spectral = mag * mag / out.petersson;
    if (!(out.spectral > 0.0))
        throw std::runtime_error("spectral_residual: spectral side vanished; pick a generic point");
    out.residual = std::abs(out.geometric - out.spectral) / out.spectral;
    return out;
}

} // namespace suplab
