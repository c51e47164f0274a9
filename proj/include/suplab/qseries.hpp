#pragma once

// Truncated integral q-expansions of cusp forms: eta-quotient expansion in
// exact integer arithmetic, Hecke-consistency certification, normalized
// coefficients psi(n) and eigenvalues lambda(n), and pointwise evaluation
// with a certified Fourier tail from the Deligne bound |psi(n)| <= tau(n).

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "suplab/halfplane.hpp"

namespace suplab {

using BigInt = boost::multiprecision::cpp_int;

inline i64 divisor_count(i64 n) {
    i64 tau = 1;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            tau *= e + 1;
        }
    }
    if (n > 1) tau *= 2;
    return tau;
}

struct QSeries {
    i64 level = 1;
    int weight = 12;
    std::vector<BigInt> a; // a[0..M], a[0] = 0 for cusp forms

    QSeries() = default;
    QSeries(QSeries&&) = default;
    QSeries& operator=(QSeries&&) = default;
    // copies drop the derived coefficient cache so a copied-and-edited
    // series cannot observe stale doubles
    QSeries(const QSeries& o) : level(o.level), weight(o.weight), a(o.a) {}
    QSeries& operator=(const QSeries& o) {
        level = o.level;
        weight = o.weight;
        a = o.a;
        a_dbl.clear();
        return *this;
    }

    i64 trunc() const { return i64(a.size()) - 1; }

    const BigInt& coeff(i64 n) const {
        if (n < 0 || n > trunc()) throw std::out_of_range("QSeries::coeff: index beyond truncation");
        return a[size_t(n)];
    }

    // Double image of the coefficients, built once on demand; evaluation
    // hot loops read this instead of converting cpp_int per term.
    const std::vector<double>& coeff_dbl() const {
        if (a_dbl.size() != a.size()) {
            a_dbl.resize(a.size());
            for (size_t i = 0; i < a.size(); ++i) a_dbl[i] = a[i].convert_to<double>();
        }
        return a_dbl;
    }

  private:
    mutable std::vector<double> a_dbl;
};

// ---------------------------------------------------------------------------
// Eta quotients

struct EtaQuotient {
    // factors (d, e): product of eta(d z)^e
    std::vector<std::pair<i64, int>> factors;
};

namespace detail {

// Truncated product mod q^(M+1), exact integers.
inline std::vector<BigInt> series_mul(const std::vector<BigInt>& f, const std::vector<BigInt>& g, i64 M) {
    std::vector<BigInt> h(size_t(M) + 1);
    for (i64 i = 0; i <= M; ++i) {
        if (f[size_t(i)] == 0) continue;
        const i64 jmax = M - i;
        for (i64 j = 0; j <= jmax; ++j) {
            if (g[size_t(j)] == 0) continue;
            h[size_t(i + j)] += f[size_t(i)] * g[size_t(j)];
        }
    }
    return h;
}

// Inverse of a series with leading coefficient 1, mod q^(M+1).
inline std::vector<BigInt> series_inverse(const std::vector<BigInt>& f, i64 M) {
    if (f[0] != 1) throw std::invalid_argument("series_inverse: leading coefficient must be 1");
    std::vector<BigInt> g(size_t(M) + 1);
    g[0] = 1;
    for (i64 n = 1; n <= M; ++n) {
        BigInt acc = 0;
        for (i64 j = 1; j <= n; ++j)
            if (f[size_t(j)] != 0 && g[size_t(n - j)] != 0) acc += f[size_t(j)] * g[size_t(n - j)];
        g[size_t(n)] = -acc;
    }
    return g;
}

inline std::vector<BigInt> series_pow(std::vector<BigInt> base, i64 e, i64 M) {
    std::vector<BigInt> acc(size_t(M) + 1);
    acc[0] = 1;
    while (e > 0) {
        if (e & 1) acc = series_mul(acc, base, M);
        e >>= 1;
        if (e > 0) base = series_mul(base, base, M);
    }
    return acc;
}

// Euler product prod (1 - q^(d n)) via the pentagonal number series.
inline std::vector<BigInt> euler_series(i64 d, i64 M) {
    std::vector<BigInt> f(size_t(M) + 1);
    f[0] = 1;
    for (i64 j = 1;; ++j) {
        const i64 e1 = d * j * (3 * j - 1) / 2;
        const i64 e2 = d * j * (3 * j + 1) / 2;
        if (e1 > M && e2 > M) break;
        const int sign = (j % 2 == 0) ? 1 : -1;
        if (e1 <= M) f[size_t(e1)] += sign;
        if (e2 <= M) f[size_t(e2)] += sign;
    }
    return f;
}

} // namespace detail

// Expands prod_d eta(d z)^{e_d} to q^M in exact integer arithmetic.
// Requires sum d*e == 0 (mod 24) and a genuine zero at infinity
// (sum d*e / 24 >= 1). The level is metadata supplied by the caller;
// level = 0 defaults to lcm of the d's.
inline QSeries eta_expand(const EtaQuotient& q, i64 M, i64 level = 0) {
    if (M < 1 || M > 100000) throw std::invalid_argument("eta_expand: M out of range [1, 1e5]");
    if (q.factors.empty()) throw std::invalid_argument("eta_expand: empty quotient");

    i64 de_sum = 0, e_sum = 0, lcm = 1;
    for (auto [d, e] : q.factors) {
        if (d <= 0) throw std::invalid_argument("eta_expand: factor scale must be positive");
        de_sum += d * i64(e);
        e_sum += e;
        lcm = std::lcm(lcm, d);
    }
    if (de_sum % 24 != 0)
        throw std::invalid_argument("eta_expand: sum d*e must be divisible by 24");
    const i64 lead = de_sum / 24;
    if (lead < 1)
        throw std::invalid_argument("eta_expand: quotient does not vanish at infinity");
    if (e_sum <= 0 || e_sum % 2 != 0)
        throw std::invalid_argument("eta_expand: weight (sum e)/2 must be a positive integer");

    std::vector<BigInt> prod(size_t(M) + 1);
    prod[0] = 1;
    for (auto [d, e] : q.factors) {
        std::vector<BigInt> f = detail::euler_series(d, M);
        if (e < 0) f = detail::series_inverse(f, M);
        prod = detail::series_mul(prod, detail::series_pow(std::move(f), std::abs(i64(e)), M), M);
    }

    QSeries out;
    out.level = level == 0 ? lcm : level;
    out.weight = int(e_sum / 2);
    out.a.assign(size_t(M) + 1, BigInt(0));
    for (i64 n = lead; n <= M; ++n) out.a[size_t(n)] = prod[size_t(n - lead)];
    return out;
}

// ---------------------------------------------------------------------------
// Hecke certification

struct HeckeReport {
    bool multiplicative_ok = true;
    bool recursion_ok = true;
    bool bad_prime_ok = true;
    std::optional<i64> first_failure;

    bool all_ok() const { return multiplicative_ok && recursion_ok && bad_prime_ok; }

    void record(bool& flag, i64 index) {
        flag = false;
        if (!first_failure || index < *first_failure) first_failure = index;
    }
};

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// Verifies, scale-invariantly in a(1) != 0:
//  - a(1)a(mn) = a(m)a(n) for coprime m, n with mn <= M,
//  - a(1)a(p^(j+1)) = a(p)a(p^j) - p^(k-1) a(1) a(p^(j-1)) for p not | N,
//  - a(p)^2 = p^(k-2) a(1)^2 for p | N (square-free-level newform).
inline HeckeReport hecke_check(const QSeries& f) {
    const i64 M = f.trunc();
    if (M < 1 || f.a[1] == 0) throw std::invalid_argument("hecke_check: requires a(1) != 0");
    const BigInt& a1 = f.a[1];
    HeckeReport rep;

    for (i64 m = 2; m * 2 <= M; ++m)
        for (i64 n = m + 1; m * n <= M; ++n) {
            if (std::gcd(m, n) != 1) continue;
            if (a1 * f.a[size_t(m * n)] != f.a[size_t(m)] * f.a[size_t(n)])
                rep.record(rep.multiplicative_ok, m * n);
        }

    for (i64 p = 2; p * p <= M; ++p) {
        if (!is_prime(p)) continue;
        if (f.level % p == 0) continue;
        BigInt pk1 = 1;
        for (int i = 0; i < f.weight - 1; ++i) pk1 *= p;
        for (i64 pj = p; pj * p <= M; pj *= p) {
            const BigInt lhs = a1 * f.a[size_t(pj * p)];
            const BigInt rhs = f.a[size_t(p)] * f.a[size_t(pj)] - pk1 * a1 * f.a[size_t(pj / p)];
            if (lhs != rhs) rep.record(rep.recursion_ok, pj * p);
        }
    }

    for (i64 p = 2; p <= std::min<i64>(M, f.level); ++p) {
        if (!is_prime(p) || f.level % p != 0) continue;
        BigInt pk2 = 1;
        for (int i = 0; i < f.weight - 2; ++i) pk2 *= p;
        if (f.a[size_t(p)] * f.a[size_t(p)] != pk2 * a1 * a1) rep.record(rep.bad_prime_ok, p);
    }
    return rep;
}

// Exact Deligne check |psi(n)| <= tau(n), i.e. a(n)^2 <= tau(n)^2 n^(k-1),
// for all n <= M. Integer arithmetic only.
inline bool deligne_ok(const QSeries& f) {
    if (f.trunc() < 1 || (f.a[1] != 1 && f.a[1] != -1)) return false;
    for (i64 n = 1; n <= f.trunc(); ++n) {
        BigInt bound = divisor_count(n);
        bound *= bound;
        for (int i = 0; i < f.weight - 1; ++i) bound *= n;
        if (f.a[size_t(n)] * f.a[size_t(n)] > bound) return false;
    }
    return true;
}

// psi(n) = a(n) / (a(1) n^((k-1)/2)); requires a(1) = 1.
inline double psi(const QSeries& f, i64 n) {
    if (n < 1 || n > f.trunc()) throw std::out_of_range("psi: n beyond truncation");
    if (f.a[1] != 1) throw std::invalid_argument("psi: series must be normalized with a(1) = 1");
    return f.a[size_t(n)].convert_to<double>() / std::pow(double(n), 0.5 * (f.weight - 1));
}

// Hecke eigenvalue lambda(n) = psi(n), defined here for (n, N) = 1.
inline double lam(const QSeries& f, i64 n) {
    if (n >= 1 && std::gcd(n, f.level) != 1)
        throw std::invalid_argument("lam: defined only for n coprime to the level");
    return psi(f, n);
}

// ---------------------------------------------------------------------------
// Evaluation with certified tails

struct EvalResult {
    cplx value{0.0, 0.0};
    double tail = 0.0;  // certified bound on the dropped Fourier tail
    i64 terms = 0;
};

inline double eval_y_min(i64 level) { return std::sqrt(3.0) / (2.0 * double(level)) - kGeomSlack; }

// f(z) = sum a(n) e(nz), truncated at the smallest n0 whose Deligne
// majorant sum_{n>n0} 2 n^{k/2} e^{-2 pi n y} (via tau(n) <= 2 sqrt(n))
// is certified <= tail_tol by a geometric-ratio bound.
inline EvalResult eval_form(const QSeries& f, const HPoint& z, double tail_tol = 1e-12) {
    if (z.y < eval_y_min(f.level))
        throw std::invalid_argument("eval_form: y below the supported region sqrt(3)/(2N)");
    const double twopiy = 2.0 * std::numbers::pi * z.y;
    const i64 M = f.trunc();

    auto majorant_tail = [&](i64 n0) -> double {
        const double n1 = double(n0 + 1);
        const double ratio = std::pow(1.0 + 1.0 / n1, 0.5 * f.weight) * std::exp(-twopiy);
        if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
        const double first = 2.0 * std::pow(n1, 0.5 * f.weight) * std::exp(-twopiy * n1);
        return first / (1.0 - ratio);
    };

    i64 n0 = 1;
    while (n0 <= M && majorant_tail(n0) > tail_tol) ++n0;
    if (n0 > M)
        throw std::runtime_error("eval_form: truncation insufficient to certify the requested tail at this point");

    const std::vector<double>& ad = f.coeff_dbl();
    const cplx q = std::polar(std::exp(-twopiy), 2.0 * std::numbers::pi * z.x);
    cplx qn = 1.0, acc = 0.0;
    for (i64 n = 1; n <= n0; ++n) {
        qn *= q;
        if (ad[size_t(n)] != 0.0) acc += ad[size_t(n)] * qn;
    }
    return {acc, majorant_tail(n0), n0};
}

// ---------------------------------------------------------------------------
// Coefficient table format:  {"level": int, "weight": int, "coeffs": [a1, ...]}
// Exact integers, 1-indexed, canonical key order; the writer and the strict
// reader below round-trip byte-stably.

inline std::string export_form(const QSeries& f) {
    std::string out = "{\"level\": " + std::to_string(f.level) +
                      ", \"weight\": " + std::to_string(f.weight) + ", \"coeffs\": [";
    for (i64 n = 1; n <= f.trunc(); ++n) {
        if (n > 1) out += ", ";
        out += f.a[size_t(n)].str();
    }
    out += "]}\n";
    return out;
}

namespace detail {

struct TableParser {
    const std::string& s;
    size_t pos = 0;

    explicit TableParser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("coefficient table: " + what + " at byte " + std::to_string(pos));
    }
    void skip_ws() { while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos; }
    void expect(char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    std::string key() {
        expect('"');
        const size_t start = pos;
        while (pos < s.size() && s[pos] != '"') ++pos;
        if (pos >= s.size()) fail("unterminated key");
        std::string k = s.substr(start, pos - start);
        ++pos;
        expect(':');
        return k;
    }
    BigInt integer() {
        skip_ws();
        const size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        const size_t digits = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == digits) fail("expected integer");
        return BigInt(s.substr(start, pos - start));
    }
};

} // namespace detail

// Strict reader for the documented table format. Validates a(0) = 0 by
// construction (coeffs are 1-indexed), requires a(1) in {-1, +1} and a
// clean hecke_check; normalizes to a(1) = 1.
inline QSeries import_form(const std::string& text) {
    detail::TableParser p(text);
    std::optional<i64> level;
    std::optional<i64> weight;
    std::optional<std::vector<BigInt>> coeffs;

    p.expect('{');
    for (int field = 0; field < 3; ++field) {
        const std::string k = p.key();
        if (k == "level") level = i64(p.integer());
        else if (k == "weight") weight = i64(p.integer());
        else if (k == "coeffs") {
            std::vector<BigInt> cs;
            p.expect('[');
            p.skip_ws();
            if (p.pos < p.s.size() && p.s[p.pos] == ']') { ++p.pos; }
            else {
                while (true) {
                    cs.push_back(p.integer());
                    p.skip_ws();
                    if (p.pos < p.s.size() && p.s[p.pos] == ',') { ++p.pos; continue; }
                    break;
                }
                p.expect(']');
            }
            coeffs = std::move(cs);
        } else p.fail("unknown key '" + k + "'");
        p.skip_ws();
        if (field < 2) p.expect(',');
    }
    p.expect('}');
    p.skip_ws();
    if (p.pos != p.s.size())
        throw std::invalid_argument("coefficient table: trailing content after the closing brace");

    if (!level || !weight || !coeffs) throw std::invalid_argument("coefficient table: missing field");
    if (*level < 1) throw std::invalid_argument("coefficient table: level must be positive");
    if (*weight < 2) throw std::invalid_argument("coefficient table: weight must be >= 2");
    if (coeffs->empty()) throw std::invalid_argument("coefficient table: empty coefficient list");

    QSeries f;
    f.level = *level;
    f.weight = int(*weight);
    f.a.assign(coeffs->size() + 1, BigInt(0));
    for (size_t i = 0; i < coeffs->size(); ++i) f.a[i + 1] = (*coeffs)[i];

    if (f.a[1] != 1 && f.a[1] != -1)
        throw std::invalid_argument("coefficient table: a(1) must be +/-1");
    if (f.a[1] == -1)
        for (auto& c : f.a) c = -c;

    const HeckeReport rep = hecke_check(f);
    if (!rep.all_ok()) {
        std::string msg = "coefficient table: Hecke certification failed";
        if (rep.first_failure) msg += " (first failure at n = " + std::to_string(*rep.first_failure) + ")";
        throw std::invalid_argument(msg);
    }
    return f;
}

} // namespace suplab
