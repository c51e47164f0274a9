#pragma once

// The amplifier: prime support Lambda = { p prime : (p,N)=1, L <= p < 2L },
// sign vector x_l = sign(lambda(l)) on Lambda and Lambda^2, and the Hecke
// convolution y_l = sum_{d | (l1,l2), l = l1 l2 / d^2} x_{l1} x_{l2}.
// The lower bound sum_l x_l lambda(l) >= |Lambda| / 2 follows from
// lambda(p)^2 - lambda(p^2) = 1.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "suplab/halfplane.hpp"

namespace suplab {

struct AmpSupport {
    double L = 2.0;
    i64 N = 1;
    std::vector<i64> primes; // sorted, L <= p < 2L, p coprime to N

    // Lambda union Lambda^2, sorted.
    std::vector<i64> full_support() const {
        std::set<i64> s;
        for (i64 p : primes) { s.insert(p); s.insert(p * p); }
        return {s.begin(), s.end()};
    }
};

inline AmpSupport build_support(double L, i64 N) {
    if (!(L >= 2.0)) throw std::invalid_argument("build_support: L must be >= 2");
    if (L > 10000.0) throw std::invalid_argument("build_support: L exceeds the 1e4 guard");
    if (N <= 0) throw std::invalid_argument("build_support: N must be positive");
    AmpSupport out;
    out.L = L;
    out.N = N;
    const i64 hi = i64(std::ceil(2.0 * L));
    std::vector<bool> composite(size_t(hi) + 1, false);
    for (i64 p = 2; p * p <= hi; ++p)
        if (!composite[size_t(p)])
            for (i64 q = p * p; q <= hi; q += p) composite[size_t(q)] = true;
    for (i64 p = 2; p <= hi; ++p) {
        if (composite[size_t(p)]) continue;
        if (double(p) < L || double(p) >= 2.0 * L) continue;
        if (N % p == 0) continue;
        out.primes.push_back(p);
    }
    return out;
}

struct AmpVector {
    std::map<i64, int> x;   // values in {-1, +1} on Lambda and Lambda^2
    std::map<i64, i64> y;   // exact integer convolution, sparse

    i64 y_at(i64 l) const {
        auto it = y.find(l);
        return it == y.end() ? 0 : it->second;
    }
};

// x_l = sign(lambda(l)) on Lambda and Lambda^2, with sign(0) := +1.
inline AmpVector build_x(const std::function<double(i64)>& lambda, const AmpSupport& support) {
    AmpVector v;
    for (i64 l : support.full_support()) v.x[l] = lambda(l) < 0.0 ? -1 : 1;
    return v;
}

// y_l = sum over (l1, l2) in supp(x)^2 and d | gcd(l1, l2) of
// x_{l1} x_{l2} at l = l1 l2 / d^2. Zero entries are dropped.
inline AmpVector convolve_y(AmpVector v) {
    v.y.clear();
    for (auto [l1, x1] : v.x)
        for (auto [l2, x2] : v.x) {
            const i64 g = std::gcd(l1, l2);
            for (i64 d = 1; d <= g; ++d) {
                if (g % d != 0) continue;
                v.y[l1 * l2 / (d * d)] += i64(x1) * i64(x2);
            }
        }
    for (auto it = v.y.begin(); it != v.y.end();)
        it = it->second == 0 ? v.y.erase(it) : std::next(it);
    return v;
}

// sum_l x_l lambda(l) over Lambda and Lambda^2; each prime contributes
// |lambda(p)| + |lambda(p^2)| >= 1/2 when the Hecke relation holds.
inline double amp_lower(const std::function<double(i64)>& lambda, const AmpSupport& support) {
    const AmpVector v = build_x(lambda, support);
    double acc = 0.0;
    for (auto [l, xl] : v.x) acc += double(xl) * lambda(l);
    return acc;
}

// The support classification of the assembled bound: l = 1, or l in
// { l1, l1*l2, l1*l2^2, l1^2*l2^2 } with l1, l2 in Lambda (equal allowed).
inline bool in_support_classes(i64 l, const std::vector<i64>& primes) {
    if (l == 1) return true;
    for (i64 p : primes) {
        if (l == p) return true;
        for (i64 q : primes) {
            if (l == p * q) return true;
            if (l == p * q * q) return true;
            if (l == p * p * q * q) return true;
        }
    }
    return false;
}

} // namespace suplab
