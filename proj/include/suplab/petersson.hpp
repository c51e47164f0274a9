#pragma once

// Numerical Petersson norm <f,f> = int_{Gamma_0(N)\H} |f|^2 y^(k-2) dx dy,
// computed over right-coset translates of the standard fundamental domain
// F of the full modular group. With Phi(w) = Im(w)^k |f(w)|^2,
//
//   <f,f> = sum_{j} int_F Phi(g_j z) y^{-2} dx dy,
//
// where g_j runs over coset representatives indexed by P^1(Z/N). Phi is
// Gamma_0(N)-invariant by automorphy and Atkin-Lehner-invariant for
// newforms, so each sample is evaluated at the reduced point, which keeps
// Im above sqrt(3)/(2N) even when g_j z drifts toward a cusp.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "suplab/atkin_lehner.hpp"
#include "suplab/halfplane.hpp"
#include "suplab/qseries.hpp"

namespace suplab {

// Right-coset representatives of Gamma_0(N) in SL2(Z): one determinant-1
// integral matrix per point (c : d) of P^1(Z/N).
inline std::vector<IntMat> coset_reps(i64 N) {
    if (N <= 0) throw std::invalid_argument("coset_reps: N must be positive");
    std::set<std::pair<i64, i64>> classes;
    std::vector<IntMat> reps;
    for (i64 c = 0; c < N; ++c)
        for (i64 d = 0; d < N; ++d) {
            if (std::gcd(std::gcd(c, d), N) != 1) continue;
            // canonical class representative under unit scaling
            std::pair<i64, i64> canon{N, N};
            for (i64 u = 1; u < std::max<i64>(N, 2); ++u) {
                if (std::gcd(u, N) != 1) continue;
                canon = std::min(canon, {u * c % N, u * d % N});
            }
            if (!classes.insert(canon).second) continue;

            i64 cc = canon.first, dd = canon.second;
            if (cc == 0) { reps.push_back(IntMat{1, 0, 0, 1}); continue; }
            // lift to a coprime integer pair congruent mod N
            i64 d_lift = dd;
            for (i64 j = 0; std::gcd(cc, d_lift) != 1; ++j) {
                d_lift = dd + j * N;
                if (j > 2 * N + 2) throw std::logic_error("coset_reps: lift not found");
            }
            reps.push_back(detail::complete_bottom_row(cc, d_lift));
        }
    return reps;
}

namespace detail {

struct AdaptiveSimpson {
    std::function<double(double)> f;
    i64* evals = nullptr;
    i64 budget = 0;

    double eval(double x) {
        if (evals && ++(*evals) > budget)
            throw std::runtime_error("petersson_norm: evaluation budget exhausted before reaching tol");
        return f(x);
    }

    double run(double a, double b, double tol) {
        const double m = 0.5 * (a + b);
        const double fa = eval(a), fm = eval(m), fb = eval(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(a, b, fa, fm, fb, whole, tol, 28);
    }

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = eval(lm), frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double err = left + right - whole;
        if (depth <= 0 || std::abs(err) <= 15.0 * tol)
            return left + right + err / 15.0;
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
};

} // namespace detail

// Petersson norm with the literal measure y^(k-2) dx dy, no volume
// normalization. Requires a Hecke-certified series and N <= 30. tol is
// the requested relative tolerance of the quadrature.
inline double petersson_norm(const QSeries& f, double tol = 1e-4, i64 eval_budget = 60000000) {
    if (!(tol > 0)) throw std::invalid_argument("petersson_norm: tol must be positive");
    if (f.level > 30) throw std::invalid_argument("petersson_norm: level beyond supported coset-rep range (N <= 30)");
    if (!is_square_free(f.level))
        throw std::invalid_argument("petersson_norm: reduction requires square-free level");
    if (!hecke_check(f).all_ok())
        throw std::invalid_argument("petersson_norm: series failed Hecke certification");

    const std::vector<IntMat> reps = coset_reps(f.level);
    const int k = f.weight;

    i64 evals = 0;
    auto phi_sum = [&](double x, double y) -> double {
        const HPoint z(x, y);
        double acc = 0.0;
        for (const IntMat& g : reps) {
            const HPoint w = moebius(g, z);
            const ReducedPoint red = al_reduce(w, f.level);
            const EvalResult ev = eval_form(f, red.z, 1e-13 * std::pow(red.z.y, -0.5 * k));
            const double mag = std::abs(ev.value);
            acc += std::pow(red.z.y, double(k)) * mag * mag;
        }
        return acc / (y * y);
    };

    auto arc = [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); };

    // Pilot estimate fixes the absolute tolerance scale.
    double scale = 0.0;
    for (int i = 0; i <= 16; ++i) {
        const double x = -0.5 + double(i) / 16.0;
        const double y0 = arc(x);
        for (int j = 0; j <= 16; ++j) {
            const double y = y0 + (4.0 - y0) * double(j) / 16.0;
            scale += phi_sum(x, y) * (4.0 - y0) / 17.0 / 17.0;
        }
    }
    if (!(scale > 0)) throw std::runtime_error("petersson_norm: pilot estimate vanished");
    const double tol_abs = tol * scale * 0.5;

    auto inner = [&](double x) -> double {
        detail::AdaptiveSimpson qy;
        qy.evals = &evals;
        qy.budget = eval_budget;
        qy.f = [&](double y) { return phi_sum(x, y); };
        double y_lo = arc(x), y_hi = 4.0;
        double acc = qy.run(y_lo, y_hi, tol_abs * 0.5);
        // extend upward until a strip is negligible
        while (true) {
            const double strip = qy.run(y_hi, 2.0 * y_hi, tol_abs * 0.1);
            acc += strip;
            y_hi *= 2.0;
            if (std::abs(strip) < tol_abs * 0.02 || y_hi > 512.0) break;
        }
        return acc;
    };

    detail::AdaptiveSimpson qx;
    qx.evals = &evals;
    qx.budget = eval_budget;
    qx.f = inner;
    return qx.run(-0.5, 0.5, tol_abs);
}

} // namespace suplab
