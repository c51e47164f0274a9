#pragma once

// Exact enumeration of G_l(N) = { integral (a,b;c,d) : N | c, det = l }
// restricted to |u_gamma(z)| <= delta, the generic / upper-triangular /
// parabolic counters, and the naive reference oracle.
//
// Enumeration ranges are those forced by |u| <= delta (l > 0):
//   |a + d| <= delta                      (imaginary part of u),
//   |cz + d| <= 2 delta, hence |c| y <= 2 delta   (c != 0),
//   b within |b - (c|z|^2 + (d - a) x)| <= delta y (real part of u);
// for c != 0 the entry b is solved from ad - bc = l instead. Every
// candidate passes the exact |u| <= delta filter at the end.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <vector>

#include "suplab/halfplane.hpp"

namespace suplab {

struct EnumWindow {
    HPoint z{0.0, 1.0};
    i64 N = 1;
    i64 l = 1;
    double delta = 2.0;
};

struct CountSplit {
    i64 m_star = 0;
    i64 m_upper = 0;
    i64 m_parab = 0;

    i64 total() const { return m_star + m_upper + m_parab; }
};

namespace detail {

inline void validate_window(const EnumWindow& w) {
    if (w.N <= 0) throw std::invalid_argument("census: N must be positive");
    if (w.l <= 0) throw std::invalid_argument("census: l must be positive");
    if (w.delta < 0.0) throw std::invalid_argument("census: delta must be >= 0");
    if (w.delta > 1e6) throw std::invalid_argument("census: delta exceeds the 1e6 guard");
}

inline bool u_within(const IntMat& m, const HPoint& z, double delta) {
    return std::abs(u_value(m, z)) <= delta + kGeomSlack;
}

} // namespace detail

namespace detail {

// One c-column of the c != 0 branch.
inline void scan_column(const EnumWindow& w, i64 c, std::vector<IntMat>& out) {
    const double x = w.z.x, y = w.z.y, delta = w.delta;
    const double disc = 4.0 * delta * delta - double(c) * y * double(c) * y;
    if (disc < -kGeomSlack) return;
    const double width = std::sqrt(std::max(0.0, disc));
    const i64 d_lo = i64(std::ceil(-double(c) * x - width - kGeomSlack));
    const i64 d_hi = i64(std::floor(-double(c) * x + width + kGeomSlack));
    for (i64 d = d_lo; d <= d_hi; ++d) {
        const i64 a_lo = i64(std::ceil(-delta - kGeomSlack)) - d;
        const i64 a_hi = i64(std::floor(delta + kGeomSlack)) - d;
        for (i64 a = a_lo; a <= a_hi; ++a) {
            const i64 num = a * d - w.l;
            if (num % c != 0) continue;
            const IntMat m{a, num / c, c, d};
            if (u_within(m, w.z, delta)) out.push_back(m);
        }
    }
}

} // namespace detail

// Enumeration parallelizes over disjoint c-ranges when threads > 1; the
// canonical final ordering makes the result identical for any thread
// count.
inline std::vector<IntMat> enumerate_window(const EnumWindow& w, int threads = 1) {
    detail::validate_window(w);
    const double x = w.z.x, y = w.z.y, delta = w.delta;
    std::vector<IntMat> out;

    // c = 0: (a, d) over factorizations ad = l (both sign pairs),
    // b over the real-part window.
    for (i64 p = 1; p <= w.l; ++p) {
        if (w.l % p != 0) continue;
        const i64 q = w.l / p;
        for (int sign : {1, -1}) {
            const i64 a = sign * p, d = sign * q;
            if (std::abs(double(a + d)) > delta + kGeomSlack) continue;
            const double bc = double(d - a) * x;
            const i64 b_lo = i64(std::ceil(bc - delta * y - kGeomSlack));
            const i64 b_hi = i64(std::floor(bc + delta * y + kGeomSlack));
            for (i64 b = b_lo; b <= b_hi; ++b) {
                const IntMat m{a, b, 0, d};
                if (detail::u_within(m, w.z, delta)) out.push_back(m);
            }
        }
    }

    // c != 0, N | c, |c| y <= 2 delta.
    const i64 c_max = i64(std::floor(2.0 * delta / y + kGeomSlack));
    std::vector<i64> columns;
    for (i64 c_abs = w.N; c_abs <= c_max; c_abs += w.N) {
        columns.push_back(c_abs);
        columns.push_back(-c_abs);
    }
    const int workers = std::max(1, threads);
    if (workers == 1 || columns.size() < 8) {
        for (i64 c : columns) detail::scan_column(w, c, out);
    } else {
        const size_t chunk = (columns.size() + size_t(workers) - 1) / size_t(workers);
        std::vector<std::future<std::vector<IntMat>>> jobs;
        for (size_t lo = 0; lo < columns.size(); lo += chunk) {
            const size_t hi = std::min(columns.size(), lo + chunk);
            jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
                std::vector<IntMat> part;
                for (size_t i = lo; i < hi; ++i) detail::scan_column(w, columns[i], part);
                return part;
            }));
        }
        for (auto& job : jobs) {
            const std::vector<IntMat> part = job.get();
            out.insert(out.end(), part.begin(), part.end());
        }
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

// Naive reference oracle: quadruple loop over |a|,|b|,|c|,|d| <= box,
// filtered by N | c, det = l, |u| <= delta. Test-only; equals
// enumerate_window whenever box covers the derived ranges.
inline std::vector<IntMat> brute_oracle(const HPoint& z, i64 N, i64 l, double delta, i64 box) {
    if (box < 0 || box > 60) throw std::invalid_argument("brute_oracle: box must be in [0, 60]");
    EnumWindow w{z, N, l, delta};
    detail::validate_window(w);
    std::vector<IntMat> out;
    for (i64 c = -box; c <= box; ++c) {
        if (c % N != 0) continue;
        for (i64 d = -box; d <= box; ++d)
            for (i64 a = -box; a <= box; ++a)
                for (i64 b = -box; b <= box; ++b) {
                    if (a * d - b * c != l) continue;
                    const IntMat m{a, b, c, d};
                    if (detail::u_within(m, z, delta)) out.push_back(m);
                }
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

// Smallest box for which brute_oracle provably covers the enumeration
// ranges of the window (used by tests to pick comparable instances).
inline i64 coverage_box(const EnumWindow& w) {
    const double x = w.z.x, y = w.z.y, delta = w.delta;
    const double c_max = std::floor(2.0 * delta / y) + 1.0;
    const double d_max = c_max * std::abs(x) + 2.0 * delta + 1.0;
    const double a_max = std::max(delta + d_max + 1.0, double(w.l));
    const double zz = x * x + y * y;
    const double b_max = c_max * zz + (a_max + d_max) * std::abs(x) + delta * y + 1.0;
    const double m = std::max({c_max, d_max, a_max, b_max, double(w.l)});
    return i64(std::ceil(m));
}

inline CountSplit count_split(const EnumWindow& w, int threads = 1) {
    CountSplit s;
    for (const IntMat& m : enumerate_window(w, threads)) {
        switch (classify(m, w.l)) {
            case MatClass::Generic: ++s.m_star; break;
            case MatClass::UpperTriangular: ++s.m_upper; break;
            case MatClass::Parabolic: ++s.m_parab; break;
        }
    }
    return s;
}

} // namespace suplab
