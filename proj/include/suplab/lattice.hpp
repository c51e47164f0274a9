#pragma once

// Rank-2 lattice utilities: Lagrange-Gauss reduction, successive minima,
// and exact counting of lattice points in a closed disc.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "suplab/halfplane.hpp"

namespace suplab {

struct Lattice2 {
    cplx v1{1.0, 0.0};
    cplx v2{0.0, 1.0};

    double covolume() const { return std::abs(std::imag(std::conj(v1) * v2)); }
};

struct GaussReduced {
    cplx b1, b2;      // reduced basis, |b1| <= |b2|
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

// Lagrange-Gauss reduction. The output basis realizes the successive
// minima: lambda1 = |b1| is the shortest nonzero vector length and
// lambda2 = |b2| the shortest length independent of b1. Ties between
// swap candidates are broken by (Re, Im) comparison for determinism.
inline GaussReduced gauss_reduce(const Lattice2& lat) {
    cplx v1 = lat.v1, v2 = lat.v2;
    const double scale = std::abs(v1) * std::abs(v2);
    if (!(lat.covolume() > 1e-12 * std::max(scale, 1e-300)))
        throw std::invalid_argument("gauss_reduce: basis is degenerate (collinear)");

    auto smaller = [](cplx p, cplx q) {
        double np = std::norm(p), nq = std::norm(q);
        if (np != nq) return np < nq;
        if (p.real() != q.real()) return p.real() < q.real();
        return p.imag() < q.imag();
    };

    if (smaller(v2, v1)) std::swap(v1, v2);
    for (int iter = 0; iter < 10000; ++iter) {
        const double mu = std::round(std::real(std::conj(v1) * v2) / std::norm(v1));
        v2 -= mu * v1;
        if (std::norm(v2) >= std::norm(v1)) break;
        std::swap(v1, v2);
    }
    GaussReduced out;
    out.b1 = v1;
    out.b2 = v2;
    out.lambda1 = std::abs(v1);
    out.lambda2 = std::abs(v2);
    return out;
}

// Exact number of lattice points in the closed disc |p - center| <= R.
// Coefficients are enumerated over the window implied by the reduced
// basis: for a Gauss-reduced pair the Gram angle lies in [60,120]
// degrees, so |m b1 + n b2|^2 >= (3/4) max(|m b1|, |n b2|)^2 and the
// coefficient offsets are bounded by (2/sqrt(3)) R / lambda_i.
inline i64 count_disc(const Lattice2& lat, cplx center, double R) {
    if (R < 0.0) throw std::invalid_argument("count_disc: R must be >= 0");
    const GaussReduced g = gauss_reduce(lat);

    // Real coordinates of the center in the reduced basis (Cramer):
    //   m = Im(conj(b2)*center)/Im(conj(b2)*b1), n = Im(conj(b1)*center)/Im(conj(b1)*b2)
    const double m_c = std::imag(std::conj(g.b2) * center) / std::imag(std::conj(g.b2) * g.b1);
    const double n_c = std::imag(std::conj(g.b1) * center) / std::imag(std::conj(g.b1) * g.b2);

    const double two_over_sqrt3 = 2.0 / std::sqrt(3.0);
    const i64 mw = i64(std::floor(two_over_sqrt3 * R / g.lambda1 + 1e-9)) + 1;
    const i64 nw = i64(std::floor(two_over_sqrt3 * R / g.lambda2 + 1e-9)) + 1;
    const i64 m_lo = i64(std::floor(m_c)) - mw, m_hi = i64(std::ceil(m_c)) + mw;
    const i64 n_lo = i64(std::floor(n_c)) - nw, n_hi = i64(std::ceil(n_c)) + nw;

    const double R2 = R * R + kGeomSlack;
    i64 count = 0;
    for (i64 m = m_lo; m <= m_hi; ++m)
        for (i64 n = n_lo; n <= n_hi; ++n) {
            if (std::norm(double(m) * g.b1 + double(n) * g.b2 - center) <= R2) ++count;
        }
    return count;
}

} // namespace suplab
