#pragma once

// Parabolic matrices of G_l(N) for square l = m^2, parameterized by a cusp
// a/c (gcd(a,c) = 1) and a shift t:
//     alpha(a,c,t) = ( m - a c t,  a^2 t;  -c^2 t,  m + a c t ),
// subject to N | c^2 t; for square-free N this is r | t with
// r = N / gcd(N, c). Conventions: t = 0 gives the scalar pair, emitted
// once as +mI; for t != 0 and c = 0 set a = 1; for t != 0 and a = 0 set
// c = 1. Each (a,c,t) stands for the +/- pair {alpha, -alpha}; the sums
// below are therefore "mod sign" and
//     |u_alpha(z)| = |2 m y i + t |cz - a|^2| / y.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "suplab/atkin_lehner.hpp"
#include "suplab/halfplane.hpp"
#include "suplab/lattice.hpp"

namespace suplab {

struct ParabolicParam {
    i64 a = 1;
    i64 c = 0;
    i64 t = 0;   // 0 only for the scalar entry
    i64 m = 1;   // sqrt(l)

    IntMat matrix() const {
        return {m - a * c * t, a * a * t, -c * c * t, m + a * c * t};
    }
};

struct ParabolicTerm {
    ParabolicParam param;
    cplx u;           // u_value(param.matrix(), z)
    double u_abs = 0; // |u|
};

namespace detail {

inline i64 isqrt_exact(i64 l) {
    if (l < 0) return -1;
    const i64 r = i64(std::llround(std::sqrt(double(l))));
    for (i64 m = std::max<i64>(0, r - 2); m <= r + 2; ++m)
        if (m * m == l) return m;
    return -1;
}

inline ParabolicTerm make_term(i64 a, i64 c, i64 t, i64 m, const HPoint& z) {
    ParabolicTerm term;
    term.param = {a, c, t, m};
    const double Q = std::norm(double(c) * z.value() - double(a));
    // u(alpha) = -(t Q + 2 i m y)/y; see the u_gamma expansion.
    term.u = cplx(-double(t) * Q / z.y, -2.0 * double(m));
    term.u_abs = std::abs(term.u);
    return term;
}

} // namespace detail

// All parabolic representatives with |t| <= T, |a| <= T, 0 <= c <= T
// (canonical cusp: c = 0 forces a = 1; a = 0 forces c = 1; otherwise
// c >= 1 and gcd(|a|, c) = 1), plus the scalar entry once. Sorted by
// (c, a, t).
inline std::vector<ParabolicTerm> parabolic_stream(const HPoint& z, i64 N, i64 l, i64 T) {
    if (!is_square_free(N)) throw std::invalid_argument("parabolic_stream: N must be square-free");
    if (T < 1) throw std::invalid_argument("parabolic_stream: T must be >= 1");
    const i64 m = detail::isqrt_exact(l);
    if (m <= 0) throw std::invalid_argument("parabolic_stream: l must be a positive perfect square");

    std::vector<ParabolicTerm> out;
    out.push_back(detail::make_term(1, 0, 0, m, z)); // scalar +mI

    for (i64 c = 0; c <= T; ++c) {
        const i64 r = (c == 0) ? 1 : N / std::gcd(N, c);
        for (i64 a = -T; a <= T; ++a) {
            if (c == 0 && a != 1) continue;
            if (a == 0 && c != 1) continue;
            if (c > 0 && std::gcd(std::abs(a), c) != 1) continue;
            for (i64 t = -T; t <= T; ++t) {
                if (t == 0 || t % r != 0) continue;
                out.push_back(detail::make_term(a, c, t, m, z));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ParabolicTerm& p, const ParabolicTerm& q) {
        if (p.param.c != q.param.c) return p.param.c < q.param.c;
        if (p.param.a != q.param.a) return p.param.a < q.param.a;
        return p.param.t < q.param.t;
    });
    return out;
}

struct ParabolicCensus {
    std::vector<ParabolicTerm> terms;
    double tail_bound = 0.0; // bound on sum |u|^-k over everything omitted
};

// Enumerates enough parabolic terms that the omitted part of
// sum |u_alpha(z)|^{-k} is certifiably <= tail_tol. Tails use the
// majorant |u| >= |t| Q / y per cusp and a shell bound on far cusps via
// the reduced minima of the lattice <z, 1>.
inline ParabolicCensus parabolic_census(const HPoint& z, i64 N, i64 l, int k, double tail_tol) {
    if (k < 4 || k % 2 != 0) throw std::invalid_argument("parabolic_census: k must be even and >= 4");
    if (!is_square_free(N)) throw std::invalid_argument("parabolic_census: N must be square-free");
    const i64 m = detail::isqrt_exact(l);
    if (m <= 0) throw std::invalid_argument("parabolic_census: l must be a positive perfect square");
    if (tail_tol <= 0) throw std::invalid_argument("parabolic_census: tail_tol must be positive");

    const double y = z.y;
    const GaussReduced red = gauss_reduce({z.value(), {1.0, 0.0}});
    const double zeta_k = [&] {
        double s = 0.0;
        for (i64 j = 1; j <= 64; ++j) s += std::pow(double(j), -double(k));
        return s + std::pow(64.0, 1.0 - k) / (k - 1.0);
    }();

    // Tail over all cusps with Q = |cz-a|^2 > Q_cut, summed over all t:
    // each cusp contributes <= 2 zeta(k) (y/Q)^k; cusps with Q in a shell
    // (rho^2, 4 rho^2] are counted by a coefficient-box bound on <z, 1>.
    auto far_cusp_tail = [&](double q_cut) -> double {
        double tail = 0.0, rho = std::sqrt(q_cut);
        for (int shell = 0; shell < 200; ++shell) {
            const double rho_hi = 2.0 * rho;
            const double mw = 2.0 * (2.0 / std::sqrt(3.0)) * rho_hi / red.lambda1 + 1.0;
            const double nw = 2.0 * (2.0 / std::sqrt(3.0)) * rho_hi / red.lambda2 + 1.0;
            const double count = mw * nw;
            const double contrib = count * 2.0 * zeta_k * std::pow(y / (rho * rho), double(k));
            tail += contrib;
            rho = rho_hi;
            if (contrib < 1e-18 * std::max(tail, 1e-300)) break;
        }
        return tail;
    };

    double q_cut = std::max(4.0 * (y * y + std::norm(z.value())), 16.0);
    while (far_cusp_tail(q_cut) > 0.5 * tail_tol) {
        q_cut *= 2.0;
        if (q_cut > 1e18) throw std::runtime_error("parabolic_census: cannot certify the cusp tail");
    }
    ParabolicCensus out;
    out.tail_bound = far_cusp_tail(q_cut);

    // Cusps with Q <= q_cut.
    struct Cusp { i64 a, c, r; double Q; };
    std::vector<Cusp> cusps;
    cusps.push_back({1, 0, 1, 1.0});
    const i64 c_hi = i64(std::floor(std::sqrt(q_cut) / y)) + 1;
    for (i64 c = 1; c <= c_hi; ++c) {
        const double rest = q_cut - double(c) * y * double(c) * y;
        if (rest < 0) continue;
        const double w = std::sqrt(rest);
        const i64 a_lo = i64(std::ceil(double(c) * z.x - w));
        const i64 a_hi = i64(std::floor(double(c) * z.x + w));
        for (i64 a = a_lo; a <= a_hi; ++a) {
            if (a == 0 && c != 1) continue;
            if (std::gcd(std::abs(a), c) != 1) continue;
            const double Q = std::norm(double(c) * z.value() - double(a));
            if (Q > q_cut) continue;
            cusps.push_back({a, c, N / std::gcd(N, c), Q});
        }
    }

    out.terms.push_back(detail::make_term(1, 0, 0, m, z)); // scalar

    const double per_cusp_budget = 0.5 * tail_tol / double(cusps.size());
    for (const Cusp& cusp : cusps) {
        // sum_{|t| > Jr, r|t} (y/(|t| Q))^k <= 2 (y/(rQ))^k J^(1-k)/(k-1)
        const double base = std::pow(y / (double(cusp.r) * cusp.Q), double(k));
        i64 J = std::max<i64>(1, i64(std::ceil(
            std::pow(2.0 * base / ((k - 1.0) * per_cusp_budget), 1.0 / (k - 1.0)))));
        if (J > 2000000) throw std::runtime_error("parabolic_census: cusp shift budget exhausted");
        out.tail_bound += 2.0 * base * std::pow(double(J), 1.0 - k) / (k - 1.0);
        for (i64 j = 1; j <= J; ++j)
            for (int sign : {1, -1}) {
                const i64 t = sign * j * cusp.r;
                out.terms.push_back(detail::make_term(cusp.a, cusp.c, t, m, z));
            }
    }
    return out;
}

struct ParabolicSum {
    double value = 0.0;
    double tail_bound = 0.0;
};

// sum over parabolic representatives of |u_alpha(z)|^{-k} (one term per
// +/- pair, scalar once), truncated with a certified tail <= tail_tol.
// Non-square l has no parabolic matrices: returns exactly 0.
inline ParabolicSum parabolic_sum(const HPoint& z, i64 N, i64 l, int k, double tail_tol = 1e-12) {
    if (k < 4 || k % 2 != 0)
        throw std::invalid_argument("parabolic_sum: k must be even and >= 4");
    if (l <= 0) throw std::invalid_argument("parabolic_sum: l must be positive");
    if (detail::isqrt_exact(l) <= 0) return {0.0, 0.0};

    ParabolicCensus census = parabolic_census(z, N, l, k, tail_tol);
    std::vector<double> mags;
    mags.reserve(census.terms.size());
    for (const ParabolicTerm& term : census.terms) mags.push_back(term.u_abs);
    std::sort(mags.begin(), mags.end(), std::greater<>()); // fixed order: |u| descending
    double acc = 0.0;
    for (double u : mags) acc += std::pow(u, -double(k));
    return {acc, census.tail_bound};
}

} // namespace suplab
