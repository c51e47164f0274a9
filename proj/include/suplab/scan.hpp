#pragma once

// Sup-norm measurement of y^{k/2} |f(z)| over the reduced domain: grid
// search with every sample point reduced first, local refinement around
// the best cells, region bookkeeping for the low strip
// sqrt(3)/(2N) <= y <= N^{-2/3} versus the high region above it, and the
// large-y comparison bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <thread>
#include <vector>

#include "suplab/atkin_lehner.hpp"
#include "suplab/halfplane.hpp"
#include "suplab/petersson.hpp"
#include "suplab/qseries.hpp"

namespace suplab {

struct ScanConfig {
    int nx = 96;
    int ny = 64;
    int refine_rounds = 3;   // local grid shrink by 1/8 per round
    int top_cells = 10;
    int threads = 1;
    double x_origin = 0.0;   // scan patch: x in [x_origin, x_origin + 1)
    bool with_petersson = true;
    double petersson_tol = 1e-4;
};

struct ScanReport {
    double sup_value = 0.0;
    HPoint argmax{0.0, 1.0};
    const char* region = "high"; // which side of N^(-2/3) the argmax falls on
    double max_low = 0.0;    // over sqrt(3)/(2N) <= y <= N^(-2/3)
    double max_high = 0.0;   // over y > N^(-2/3)
    bool high_dominates = false;
    double petersson = 0.0;
    double normalized_sup = 0.0;
    double y_split = 0.0;    // N^(-2/3)
    double y_top = 0.0;      // upper scan edge
    i64 evaluations = 0;
};

namespace detail {

struct ScanSample {
    double value = -1.0;
    HPoint z{0.0, 1.0};      // reduced point
};

// Deterministic preference: larger value, then smaller y, then smaller x.
inline bool sample_better(const ScanSample& cand, const ScanSample& best) {
    if (cand.value != best.value) return cand.value > best.value;
    if (cand.z.y != best.z.y) return cand.z.y < best.z.y;
    return cand.z.x < best.z.x;
}

} // namespace detail

// Grid + refinement search for sup of y^{k/2} |f| over the reduced
// domain. Every evaluated point is reduced first, so the patch location
// only changes the sampling, not the function.
inline ScanReport scan_sup(const QSeries& f, const ScanConfig& cfg = {}) {
    if (f.weight <= 2) throw std::invalid_argument("scan_sup: requires weight k > 2");
    if (cfg.nx < 4 || cfg.ny < 4) throw std::invalid_argument("scan_sup: grid too small");
    if (!hecke_check(f).all_ok()) throw std::invalid_argument("scan_sup: series failed Hecke certification");

    const i64 N = f.level;
    const double y_lo = std::sqrt(3.0) / (2.0 * double(N)) * (1.0 + 1e-12);
    const double y_top = std::max(2.0, double(f.weight) / std::numbers::pi);
    ScanReport rep;
    rep.y_split = std::pow(double(N), -2.0 / 3.0);
    rep.y_top = y_top;

    i64 evals = 0;
    auto measure = [&](double x, double y) -> detail::ScanSample {
        const ReducedPoint red = al_reduce(HPoint(x, y), N);
        const EvalResult ev = eval_form(f, red.z, 1e-13 * std::pow(red.z.y, -0.5 * f.weight));
        detail::ScanSample s;
        s.z = red.z;
        s.value = std::pow(red.z.y, 0.5 * f.weight) * std::abs(ev.value);
        return s;
    };

    const double log_lo = std::log(y_lo), log_hi = std::log(y_top);
    auto grid_point = [&](int i, int j) {
        const double x = cfg.x_origin + (double(i) + 0.5) / double(cfg.nx);
        const double y = std::exp(log_lo + (log_hi - log_lo) * (double(j) + 0.5) / double(cfg.ny));
        return std::make_pair(x, y);
    };

    std::vector<detail::ScanSample> samples(size_t(cfg.nx) * size_t(cfg.ny));
    const int nthreads = std::max(1, cfg.threads);
    auto run_rows = [&](int j_begin, int j_end) {
        for (int j = j_begin; j < j_end; ++j)
            for (int i = 0; i < cfg.nx; ++i) {
                auto [x, y] = grid_point(i, j);
                samples[size_t(j) * size_t(cfg.nx) + size_t(i)] = measure(x, y);
            }
    };
    if (nthreads == 1) {
        run_rows(0, cfg.ny);
    } else {
        std::vector<std::future<void>> jobs;
        const int chunk = (cfg.ny + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const int lo = t * chunk, hi = std::min(cfg.ny, lo + chunk);
            if (lo >= hi) break;
            jobs.push_back(std::async(std::launch::async, run_rows, lo, hi));
        }
        for (auto& j : jobs) j.get();
    }
    evals += i64(samples.size());

    // Region maxima over the grid samples (classified by the reduced y).
    detail::ScanSample best;
    for (const detail::ScanSample& s : samples) {
        if (detail::sample_better(s, best)) best = s;
        if (s.z.y <= rep.y_split) rep.max_low = std::max(rep.max_low, s.value);
        else rep.max_high = std::max(rep.max_high, s.value);
    }

    // Local refinement around the top cells.
    std::vector<size_t> order(samples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t p, size_t q) {
        return detail::sample_better(samples[p], samples[q]);
    });
    const size_t tops = std::min<size_t>(size_t(cfg.top_cells), order.size());
    const double cell_x = 1.0 / double(cfg.nx);
    const double cell_ly = (log_hi - log_lo) / double(cfg.ny);
    for (size_t rank = 0; rank < tops; ++rank) {
        const size_t idx = order[rank];
        auto [cx, cy] = grid_point(int(idx % size_t(cfg.nx)), int(idx / size_t(cfg.nx)));
        double wx = cell_x, wly = cell_ly;
        double px = cx, ply = std::log(cy);
        for (int round = 0; round < cfg.refine_rounds; ++round) {
            detail::ScanSample local_best;
            double bx = px, bly = ply;
            for (int i = -4; i <= 4; ++i)
                for (int j = -4; j <= 4; ++j) {
                    const double x = px + wx * double(i) / 4.0;
                    const double ly = ply + wly * double(j) / 4.0;
                    const double y = std::exp(std::clamp(ly, log_lo, log_hi));
                    const detail::ScanSample s = measure(x, y);
                    ++evals;
                    if (detail::sample_better(s, local_best)) {
                        local_best = s;
                        bx = x;
                        bly = std::clamp(ly, log_lo, log_hi);
                    }
                }
            px = bx; ply = bly;
            wx /= 8.0; wly /= 8.0;
            if (detail::sample_better(local_best, best)) best = local_best;
            if (local_best.z.y <= rep.y_split) rep.max_low = std::max(rep.max_low, local_best.value);
            else rep.max_high = std::max(rep.max_high, local_best.value);
        }
    }

    rep.sup_value = best.value;
    rep.argmax = best.z;
    rep.region = best.z.y <= rep.y_split ? "low" : "high";
    rep.high_dominates = rep.max_high > rep.max_low;
    rep.evaluations = evals;
    if (cfg.with_petersson) {
        rep.petersson = petersson_norm(f, cfg.petersson_tol);
        rep.normalized_sup = rep.sup_value / std::sqrt(rep.petersson);
    }
    return rep;
}

// Large-y comparison bound: the trivial-sup right-hand side times
// N^{-1/2} <f,f>^{1/2}, with epsilon = 0.1 and the regime switch at
// y = k/(4 pi), where the Fourier majorant e^{-2 pi y} (2 pi y)^{k/2}
// peaks. The petersson value may be supplied to avoid recomputation.
inline double highy_bound(const QSeries& f, double y, double petersson = 0.0) {
    if (!(y > 0)) throw std::invalid_argument("highy_bound: y must be positive");
    const double eps = 0.1;
    const double k = double(f.weight);
    const double norm = petersson > 0.0 ? petersson : petersson_norm(f);
    const double first = std::pow(k, 0.25 + eps) / std::sqrt(y);
    double rhs;
    if (y <= k / (4.0 * std::numbers::pi)) {
        rhs = first + std::sqrt(y) * std::pow(k, eps - 0.25);
    } else {
        // log-space to dodge under/overflow of the individual factors
        const double log_term = 0.5 * k * std::numbers::ln2 + eps * std::log(k) +
                                (0.5 * k + eps) * std::log(2.0 * std::numbers::pi * y) -
                                2.0 * std::numbers::pi * y - 0.5 * std::lgamma(k);
        rhs = first + std::exp(log_term);
    }
    return rhs * std::sqrt(norm / double(f.level));
}

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;
};

// Ordinary least squares on (log N, log normalized_sup).
inline FitResult fit_exponent(const std::vector<std::pair<double, double>>& table) {
    if (table.size() < 2) throw std::invalid_argument("fit_exponent: need at least 2 points");
    std::vector<double> xs, ys;
    for (auto [N, sup] : table) {
        if (!(N > 0) || !(sup > 0)) throw std::invalid_argument("fit_exponent: entries must be positive");
        xs.push_back(std::log(N));
        ys.push_back(std::log(sup));
    }
    const double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 1e-14 * std::max(1.0, sxx * n)))
        throw std::invalid_argument("fit_exponent: need at least 2 distinct levels");
    FitResult out;
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    out.residuals.resize(xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
        out.residuals[i] = ys[i] - (out.intercept + out.slope * xs[i]);
    return out;
}

} // namespace suplab
