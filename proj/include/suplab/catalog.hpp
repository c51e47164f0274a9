#pragma once

// Shipped eta-quotient newforms, certified on first use. The (5,4) and
// (6,4) entries span one-dimensional spaces and drive the pre-trace
// identity checks; the weight-2 level-11 entry exists for Atkin-Lehner
// invariance tests only.

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "suplab/qseries.hpp"

namespace suplab {

struct CatalogEntry {
    std::string id;      // "level.weight"
    i64 level;
    int weight;
    bool dim_one;        // S_k(Gamma_0(N)) is one-dimensional
    EtaQuotient eta;
};

inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"1.12", 1, 12, true, {{{1, 24}}}},
        {"5.4", 5, 4, true, {{{1, 4}, {5, 4}}}},
        {"6.4", 6, 4, true, {{{1, 2}, {2, 2}, {3, 2}, {6, 2}}}},
        {"11.2", 11, 2, true, {{{1, 2}, {11, 2}}}},
    };
    return entries;
}

inline const CatalogEntry* catalog_lookup(const std::string& id) {
    for (const CatalogEntry& e : catalog())
        if (e.id == id) return &e;
    return nullptr;
}

inline const CatalogEntry* catalog_lookup(i64 level, int weight) {
    for (const CatalogEntry& e : catalog())
        if (e.level == level && e.weight == weight) return &e;
    return nullptr;
}

// Expands and certifies a catalog entry at truncation M. Certification is
// computed, never assumed: hecke_check must pass all flags and the Deligne
// bound must hold exactly.
inline const QSeries& catalog_form(const std::string& id, i64 M = 2000) {
    static std::map<std::pair<std::string, i64>, QSeries> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lk(mtx);

    const auto key = std::make_pair(id, M);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const CatalogEntry* entry = catalog_lookup(id);
    if (!entry) throw std::invalid_argument("catalog_form: unknown form id '" + id + "'");
    QSeries f = eta_expand(entry->eta, M, entry->level);
    const HeckeReport rep = hecke_check(f);
    if (!rep.all_ok())
        throw std::logic_error("catalog_form: entry '" + id + "' failed Hecke certification");
    if (!deligne_ok(f))
        throw std::logic_error("catalog_form: entry '" + id + "' violates the Deligne bound");
    return cache.emplace(key, std::move(f)).first->second;
}

} // namespace suplab
