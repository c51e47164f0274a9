#pragma once

// Atkin-Lehner operators for square-free level N, greedy reduction of a
// point into the fundamental domain of the group generated by Gamma_0(N)
// and the Atkin-Lehner involutions, and the two gap quantities
//   Im z >= sqrt(3)/(2N),   min_{(c,d) != (0,0)} |cz+d|^2 >= 1/N.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "suplab/halfplane.hpp"
#include "suplab/lattice.hpp"

namespace suplab {

inline constexpr double kGapSlack = 1e-12;
inline constexpr double kImGainTol = 1e-15;
inline constexpr int kMoveBudget = 10000;

inline bool is_square_free(i64 n) {
    if (n <= 0) return false;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
        while (n % p == 0) n /= p;
    }
    return true;
}

inline std::vector<i64> divisors_of(i64 n) {
    std::vector<i64> ds;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            if (d != n / d) ds.push_back(n / d);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// Operator sigma = (sqrt(r) a, b/sqrt(r); sqrt(r) s, sqrt(r) d), stored by
// its unscaled integer entries. Constraints: r | N, (N/r) | s,
// gcd(a, s) = 1, and r a d - s b = 1 so the scaled matrix is in SL2(R).
// The Moebius action coincides with the integer matrix (ra, b; rs, rd) of
// determinant r.
struct ALOperator {
    i64 N = 1, r = 1;
    i64 a = 1, b = 0, s = 0, d = 1;

    IntMat action() const { return {r * a, b, r * s, r * d}; }
    Mat2 scaled() const {
        const double sq = std::sqrt(double(r));
        return {sq * double(a), double(b) / sq, sq * double(s), sq * double(d)};
    }

    cplx apply(cplx z) const {
        const IntMat m = action();
        return detail::moebius_apply(double(m.a), double(m.b), double(m.c), double(m.d), z);
    }
    double apply_im(cplx z) const {
        const IntMat m = action();
        return double(m.det()) * z.imag() / std::norm(double(m.c) * z + double(m.d));
    }
};

// Builds the Atkin-Lehner operator of level N for r | N. Among all entry
// tuples solving r*a*d - s*b = 1 with (N/r) | s and gcd(a,s) = 1, picks
// the one minimizing (|b|, |a|, |d|), preferring s >= 0 then b > 0.
// This yields (1,0,0,1) for r = 1 and the Fricke entries (0,-1,1,0) for
// r = N.
inline ALOperator al_build(i64 N, i64 r) {
    if (!is_square_free(N)) throw std::invalid_argument("al_build: N must be a positive square-free integer");
    if (r <= 0 || N % r != 0) throw std::invalid_argument("al_build: r must divide N");

    if (r == 1) return {N, 1, 1, 0, 0, 1};

    const i64 m = N / r;
    struct Cand { i64 a, b, s, d; };
    std::optional<Cand> best;
    auto key = [](const Cand& c) {
        return std::array<i64, 7>{std::abs(c.b), std::abs(c.a), std::abs(c.d),
                                  c.s < 0 ? 1 : 0, c.b < 0 ? 0 : 1, c.a < 0 ? 1 : 0, c.d < 0 ? 1 : 0};
    };
    // Entries of a valid solution satisfy |b| <= r, |a| <= N, |d| <= N
    // (the extended-gcd solution for (r, N/r) lies inside this range).
    for (i64 bb = 1; bb <= r && !best; ++bb) {
        std::vector<Cand> found;
        for (i64 b : {bb, -bb})
            for (i64 aa = 0; aa <= N; ++aa)
                for (i64 a : std::initializer_list<i64>{aa, -aa}) {
                    if (a == 0 && aa != 0) continue;
                    for (i64 dd = 0; dd <= N; ++dd)
                        for (i64 d : std::initializer_list<i64>{dd, -dd}) {
                            if (d == 0 && dd != 0) continue;
                            const i64 num = r * a * d - 1;
                            if (num % b != 0) continue;
                            const i64 s = num / b;
                            if (s % m != 0) continue;
                            if (std::gcd(std::abs(a), std::abs(s)) != 1) continue;
                            found.push_back({a, b, s, d});
                        }
                }
        if (!found.empty()) {
            best = *std::min_element(found.begin(), found.end(),
                                     [&](const Cand& p, const Cand& q) { return key(p) < key(q); });
        }
    }
    if (!best) throw std::logic_error("al_build: no solution found (unexpected)");
    return {N, r, best->a, best->b, best->s, best->d};
}

struct Move {
    enum class Kind { Translate, Gamma0, AtkinLehner };
    Kind kind = Kind::Translate;
    i64 shift = 0;       // Translate: z -> z + shift
    IntMat g;            // Gamma0: the applied matrix
    ALOperator sigma;    // AtkinLehner

    Move() = default;
    explicit Move(Kind k) : kind(k) {}
};

struct ReducedPoint {
    HPoint z{0.0, 1.0};
    std::vector<Move> word;
    bool converged = true;
};

// im_ok: whether Im z >= sqrt(3)/(2N) - slack.  min_norm: the exact
// minimum of |cz+d|^2 over integer pairs (c,d) != (0,0), i.e. the squared
// first minimum of the lattice <z, 1>.
struct GapReport {
    bool im_ok = false;
    double min_norm = 0.0;
};

inline GapReport check_gap(const HPoint& z, i64 N) {
    if (N <= 0) throw std::invalid_argument("check_gap: N must be positive");
    GapReport rep;
    rep.im_ok = z.y >= std::sqrt(3.0) / (2.0 * double(N)) - kGapSlack;
    const GaussReduced g = gauss_reduce({z.value(), {1.0, 0.0}});
    rep.min_norm = g.lambda1 * g.lambda1;
    return rep;
}

namespace detail {

// Iterative extended gcd: returns g = gcd(|u|, |v|) with u*x + v*y = g.
inline i64 ext_gcd(i64 u, i64 v, i64& x, i64& y) {
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (v != 0) {
        const i64 q = u / v;
        u -= q * v; std::swap(u, v);
        x0 -= q * x1; std::swap(x0, x1);
        y0 -= q * y1; std::swap(y0, y1);
    }
    if (u < 0) { u = -u; x0 = -x0; y0 = -y0; }
    x = x0; y = y0;
    return u;
}

// Completes a coprime bottom row (c,d) to a matrix (a,b;c,d) of
// determinant 1, with |a| minimized over the fiber a -> a + mc.
inline IntMat complete_bottom_row(i64 c, i64 d) {
    i64 x, y;
    if (ext_gcd(d, -c, x, y) != 1)
        throw std::invalid_argument("complete_bottom_row: gcd(c,d) != 1");
    i64 a = x, b = y;
    if (c != 0) {
        const i64 shift = i64(std::llround(double(a) / double(c)));
        a -= shift * c;
        b -= shift * d;
    }
    return {a, b, c, d};
}

// Left-multiplies an Atkin-Lehner operator by gamma = (a0,b0;c0,d0) in
// Gamma_0(N); the product is again in A_0(N) with the entries below.
inline ALOperator al_left_translate(const ALOperator& op, const IntMat& g) {
    ALOperator out;
    out.N = op.N;
    out.r = op.r;
    out.a = g.a * op.a + g.b * op.s;
    out.b = g.a * op.b + g.b * op.r * op.d;
    out.s = g.c * op.a + g.d * op.s;
    out.d = (g.c * op.b + g.d * op.r * op.d) / op.r; // r | c0 b since N | c0
    return out;
}

// The representative of Gamma_0(N) * sigma_r whose Moebius image of z has
// maximal Im: minimizes |c0 w1 + d0 w2|^2 over coprime (c0, d0) with
// N | c0, where (w1, w2) are the row values of the integer action matrix
// at z. Im((g sigma).z) = r y / |c0 w1 + d0 w2|^2.
inline ALOperator al_coset_optimize(const ALOperator& op, const HPoint& z) {
    const IntMat M = op.action();
    const cplx zz = z.value();
    const cplx w1 = double(M.a) * zz + double(M.b);
    const cplx w2 = double(M.c) * zz + double(M.d);
    const double covol = double(op.r) * z.y; // |Im(conj(w1) w2)|

    i64 best_c0 = 0, best_d0 = 1;
    double best_norm = std::norm(w2);
    // For c0 = N c1, the distance to the d0-line is >= |c1| N covol/|w2|.
    const i64 c1_cap = std::min<i64>(4096,
        i64(std::floor(std::sqrt(best_norm) * std::abs(w2) / (double(op.N) * covol))) + 1);
    for (i64 c1 = -c1_cap; c1 <= c1_cap; ++c1) {
        if (c1 == 0) continue;
        const i64 c0 = c1 * op.N;
        const cplx base = double(c0) * w1;
        const double d_star = -std::real(base * std::conj(w2)) / std::norm(w2);
        const i64 d_mid = i64(std::llround(d_star));
        const i64 dw = i64(std::floor(std::sqrt(std::max(0.0, best_norm / std::norm(w2))))) + 1;
        for (i64 d0 = d_mid - dw; d0 <= d_mid + dw; ++d0) {
            if (std::gcd(std::abs(c0), std::abs(d0)) != 1) continue;
            const double n = std::norm(base + double(d0) * w2);
            if (n < best_norm * (1.0 - 1e-15)) {
                best_norm = n;
                best_c0 = c0;
                best_d0 = d0;
            }
        }
    }
    if (best_c0 == 0 && best_d0 == 1) return op;
    return al_left_translate(op, complete_bottom_row(best_c0, best_d0));
}

// Best Gamma_0(N) inversion at z: coprime (c,d) with N | c, c != 0,
// minimizing |cz+d|^2; only useful when the minimum is < 1, since
// Im(g.z) = Im(z)/|cz+d|^2.
inline std::optional<IntMat> best_gamma0_inversion(const HPoint& z, i64 N) {
    const cplx zz = z.value();
    i64 c1w = i64(std::floor(1.0 / (double(N) * z.y))) + 1;
    c1w = std::min<i64>(c1w, 4096);
    std::optional<IntMat> best;
    double best_norm = 1.0 - kImGainTol;
    for (i64 c1 = -c1w; c1 <= c1w; ++c1) {
        if (c1 == 0) continue;
        const i64 c = c1 * N;
        const double row_im2 = double(c) * z.y * double(c) * z.y;
        if (row_im2 > 1.0 + kGeomSlack) continue;
        const i64 d0 = i64(std::llround(-double(c) * z.x));
        const i64 dw = i64(std::floor(std::sqrt(std::max(0.0, 1.0 - row_im2)))) + 1;
        for (i64 d = d0 - dw; d <= d0 + dw; ++d) {
            if (std::gcd(std::abs(c), std::abs(d)) != 1) continue;
            const double n = std::norm(double(c) * zz + double(d));
            if (n < best_norm) {
                best = complete_bottom_row(c, d);
                best_norm = n;
            }
        }
    }
    return best;
}

} // namespace detail

// Greedy reduction into the Atkin-Lehner fundamental domain: alternate
// x-translations into [-1/2, 1/2), Gamma_0(N) inversions that strictly
// increase Im z, and Atkin-Lehner moves that strictly increase Im z.
// Terminates when no move improves Im z by more than kImGainTol;
// a point that is already reduced comes back with an empty word.
inline ReducedPoint al_reduce(const HPoint& z0, i64 N) {
    if (!is_square_free(N)) throw std::invalid_argument("al_reduce: N must be a positive square-free integer");

    std::vector<ALOperator> ops;
    for (i64 r : divisors_of(N))
        if (r > 1) ops.push_back(al_build(N, r));

    ReducedPoint out;
    out.z = z0;
    int moves = 0;
    while (true) {
        if (moves >= kMoveBudget) { out.converged = false; break; }

        // Translate x into [-1/2, 1/2).
        const i64 shift = -i64(std::floor(out.z.x + 0.5));
        if (shift != 0) {
            out.z = HPoint(out.z.x + double(shift), out.z.y);
            Move mv{Move::Kind::Translate};
            mv.shift = shift;
            out.word.push_back(mv);
            ++moves;
        }

        // Best Im-increasing move among Gamma_0(N) inversions and
        // Atkin-Lehner operators.
        double best_im = out.z.y * (1.0 + kImGainTol);
        std::optional<Move> best_move;

        if (auto inv = detail::best_gamma0_inversion(out.z, N)) {
            const HPoint w = moebius(*inv, out.z);
            if (w.y > best_im) {
                best_im = w.y;
                Move mv{Move::Kind::Gamma0};
                mv.g = *inv;
                best_move = mv;
            }
        }
        for (const ALOperator& op : ops) {
            // sigma_r is only defined up to Gamma_0(N); use the coset
            // representative that lifts z highest.
            const ALOperator opt = detail::al_coset_optimize(op, out.z);
            const double im = opt.apply_im(out.z.value());
            if (im > best_im) {
                best_im = im;
                Move mv{Move::Kind::AtkinLehner};
                mv.sigma = opt;
                best_move = mv;
            }
        }

        if (!best_move) break;
        if (best_move->kind == Move::Kind::Gamma0)
            out.z = moebius(best_move->g, out.z);
        else
            out.z = to_hpoint(best_move->sigma.apply(out.z.value()));
        out.word.push_back(*best_move);
        ++moves;
    }
    return out;
}

// Gamma_0(N)-only variant (no Atkin-Lehner moves); raises Im z as far as
// plain Gamma_0(N) allows. Used where only weight-k automorphy is
// available.
inline ReducedPoint gamma0_reduce(const HPoint& z0, i64 N) {
    if (N <= 0) throw std::invalid_argument("gamma0_reduce: N must be positive");
    ReducedPoint out;
    out.z = z0;
    int moves = 0;
    while (true) {
        if (moves >= kMoveBudget) { out.converged = false; break; }
        const i64 shift = -i64(std::floor(out.z.x + 0.5));
        if (shift != 0) {
            out.z = HPoint(out.z.x + double(shift), out.z.y);
            Move mv{Move::Kind::Translate};
            mv.shift = shift;
            out.word.push_back(mv);
            ++moves;
        }
        auto inv = detail::best_gamma0_inversion(out.z, N);
        if (!inv) break;
        const HPoint w = moebius(*inv, out.z);
        if (!(w.y > out.z.y * (1.0 + kImGainTol))) break;
        out.z = w;
        Move mv{Move::Kind::Gamma0};
        mv.g = *inv;
        out.word.push_back(mv);
        ++moves;
    }
    return out;
}

} // namespace suplab
