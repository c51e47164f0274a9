#pragma once

// Command-line front end. Subcommands: reduce, census, parabolic, amplify,
// form (expand/check/export/import), pretrace-check, scan, scan-table, fit.
// Every run echoes its resolved configuration; numeric output carries 15
// significant digits; identical invocations produce byte-identical output.
// Exit codes: 0 success, 1 domain/numeric error, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "suplab/suplab.hpp"

namespace suplab::cli {

using ordered_json = nlohmann::ordered_json;

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

// JSON numbers are emitted as 15-significant-digit literals for byte
// stability across runs.
inline void dump_json(const ordered_json& j, std::ostream& os, int indent, int depth = 0) {
    const std::string pad(size_t(indent) * size_t(depth), ' ');
    const std::string pad1(size_t(indent) * size_t(depth + 1), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) { os << "{}"; return; }
            os << "{\n";
            size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                os << pad1 << '"' << it.key() << "\": ";
                dump_json(it.value(), os, indent, depth + 1);
                if (i + 1 < j.size()) os << ',';
                os << '\n';
            }
            os << pad << '}';
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) { os << "[]"; return; }
            os << "[\n";
            for (size_t i = 0; i < j.size(); ++i) {
                os << pad1;
                dump_json(j[i], os, indent, depth + 1);
                if (i + 1 < j.size()) os << ',';
                os << '\n';
            }
            os << pad << ']';
            return;
        }
        case nlohmann::json::value_t::number_float:
            os << num(j.get<double>());
            return;
        default:
            os << j.dump();
            return;
    }
}

inline void emit_json(const ordered_json& j, std::ostream& os) {
    dump_json(j, os, 2);
    os << '\n';
}

inline HPoint parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("point must be given as x,y");
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

inline EtaQuotient parse_eta(const std::string& text) {
    // "d:e,d:e,..."
    EtaQuotient q;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("eta quotient must be given as d:e[,d:e...]");
        q.factors.emplace_back(std::stoll(part.substr(0, colon)), int(std::stoll(part.substr(colon + 1))));
    }
    if (q.factors.empty()) throw std::invalid_argument("empty eta quotient");
    return q;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Resolves a form id: catalog id first, then a coefficient table under
// SUPLAB_DATA_DIR, then a literal path.
inline QSeries resolve_form(const std::string& id, i64 M) {
    if (catalog_lookup(id)) return catalog_form(id, M);
    std::vector<std::string> candidates;
    if (const char* dir = std::getenv("SUPLAB_DATA_DIR")) {
        candidates.push_back(std::string(dir) + "/" + id);
        candidates.push_back(std::string(dir) + "/" + id + ".json");
    }
    candidates.push_back(id);
    for (const std::string& path : candidates) {
        std::ifstream probe(path);
        if (probe) return import_form(read_file(path));
    }
    throw std::invalid_argument("unknown form id '" + id + "' (not in catalog, no table found)");
}

inline ordered_json hecke_json(const HeckeReport& rep) {
    ordered_json j;
    j["multiplicative_ok"] = rep.multiplicative_ok;
    j["recursion_ok"] = rep.recursion_ok;
    j["bad_prime_ok"] = rep.bad_prime_ok;
    if (rep.first_failure) j["first_failure"] = *rep.first_failure;
    else j["first_failure"] = nullptr;
    return j;
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"suplab: censuses, amplifiers and pre-trace checks for holomorphic cusp forms"};
    app.require_subcommand(1);

    int threads = 1;
    app.add_option("--threads", threads, "worker cap for parallel loops")->capture_default_str();

    // --- reduce ---------------------------------------------------------
    auto* cmd_reduce = app.add_subcommand("reduce", "reduce a point into the Atkin-Lehner fundamental domain");
    std::string reduce_z = "0,1";
    i64 reduce_level = 1;
    cmd_reduce->add_option("--z", reduce_z, "point x,y")->required();
    cmd_reduce->add_option("--level", reduce_level, "square-free level N")->required();

    // --- census ---------------------------------------------------------
    auto* cmd_census = app.add_subcommand("census", "exact G_l(N) census split at |u| <= delta (CSV)");
    std::string census_z = "0,1";
    i64 census_level = 1, census_l = 1;
    double census_delta = 2.0;
    cmd_census->add_option("--z", census_z, "point x,y")->required();
    cmd_census->add_option("--level", census_level, "level N")->required();
    cmd_census->add_option("--l", census_l, "determinant l")->required();
    cmd_census->add_option("--delta", census_delta, "census radius delta")->required();

    // --- parabolic ------------------------------------------------------
    auto* cmd_para = app.add_subcommand("parabolic", "parabolic sum over |u_alpha|^-k with certified tail");
    std::string para_z = "0,1";
    i64 para_level = 1, para_l = 1;
    int para_k = 4;
    double para_tol = 1e-10;
    cmd_para->add_option("--z", para_z, "point x,y")->required();
    cmd_para->add_option("--level", para_level, "square-free level N")->required();
    cmd_para->add_option("--l", para_l, "determinant l (non-squares sum to 0)")->required();
    cmd_para->add_option("--weight", para_k, "even weight k >= 4")->required();
    cmd_para->add_option("--tail-tol", para_tol, "certified tail tolerance")->capture_default_str();

    // --- amplify --------------------------------------------------------
    auto* cmd_amp = app.add_subcommand("amplify", "amplifier x/y tables for a catalog form (JSON)");
    i64 amp_level = 1;
    double amp_L = 3.0;
    std::string amp_form;
    cmd_amp->add_option("--level", amp_level, "level N defining the coprimality cut")->required();
    cmd_amp->add_option("--L", amp_L, "support scale: primes in [L, 2L)")->required();
    cmd_amp->add_option("--form", amp_form, "form id supplying the eigenvalues")->required();

    // --- form -----------------------------------------------------------
    auto* cmd_form = app.add_subcommand("form", "q-expansion tools");
    cmd_form->require_subcommand(1);
    std::string form_eta, form_coeffs, form_out, form_id;
    i64 form_trunc = 200;

    auto* form_expand = cmd_form->add_subcommand("expand", "expand an eta quotient");
    i64 form_level_override = 0;
    form_expand->add_option("--eta", form_eta, "quotient d:e[,d:e...]")->required();
    form_expand->add_option("--trunc", form_trunc, "truncation M")->capture_default_str();
    form_expand->add_option("--level", form_level_override, "level metadata (0 = lcm of scales)");

    auto* form_check = cmd_form->add_subcommand("check", "Hecke-consistency report");
    form_check->add_option("--eta", form_eta, "quotient d:e[,d:e...]");
    form_check->add_option("--coeffs", form_coeffs, "coefficient table path");
    form_check->add_option("--form", form_id, "catalog form id");
    form_check->add_option("--trunc", form_trunc, "truncation M")->capture_default_str();

    auto* form_export = cmd_form->add_subcommand("export", "write the JSON coefficient table");
    form_export->add_option("--form", form_id, "catalog form id");
    form_export->add_option("--eta", form_eta, "quotient d:e[,d:e...]");
    form_export->add_option("--trunc", form_trunc, "truncation M")->capture_default_str();
    form_export->add_option("--out", form_out, "output path (default stdout)");

    auto* form_import = cmd_form->add_subcommand("import", "validate and summarize a coefficient table");
    form_import->add_option("--coeffs", form_coeffs, "coefficient table path")->required();

    // --- pretrace-check --------------------------------------------------
    auto* cmd_pt = app.add_subcommand("pretrace-check", "pre-trace identity residual on a dim-1 space (JSON)");
    i64 pt_level = 5;
    int pt_weight = 4;
    std::string pt_z = "0.13,0.9";
    double pt_delta = 40.0, pt_ptol = 1e-4;
    cmd_pt->add_option("--level", pt_level, "level N")->required();
    cmd_pt->add_option("--weight", pt_weight, "even weight k")->required();
    cmd_pt->add_option("--z", pt_z, "point x,y")->required();
    cmd_pt->add_option("--delta-max", pt_delta, "kernel truncation")->required();
    cmd_pt->add_option("--petersson-tol", pt_ptol, "Petersson quadrature tolerance")->capture_default_str();

    // --- scan -------------------------------------------------------------
    auto* cmd_scan = app.add_subcommand("scan", "sup-norm scan of y^{k/2}|f| (JSON report)");
    std::string scan_form, scan_grid = "96,64";
    int scan_refine = 3;
    cmd_scan->add_option("--form", scan_form, "form id")->required();
    cmd_scan->add_option("--grid", scan_grid, "grid nx,ny")->capture_default_str();
    cmd_scan->add_option("--refine", scan_refine, "refinement rounds")->capture_default_str();

    // --- scan-table -------------------------------------------------------
    auto* cmd_table = app.add_subcommand("scan-table", "CSV (N, k, sup, normalized_sup) over several forms");
    std::string table_forms, table_grid = "96,64";
    int table_refine = 3;
    cmd_table->add_option("--forms", table_forms, "comma-separated form ids")->required();
    cmd_table->add_option("--grid", table_grid, "grid nx,ny")->capture_default_str();
    cmd_table->add_option("--refine", table_refine, "refinement rounds")->capture_default_str();

    // --- fit ---------------------------------------------------------------
    auto* cmd_fit = app.add_subcommand("fit", "least squares on (log N, log normalized_sup)");
    std::string fit_input;
    cmd_fit->add_option("--input", fit_input, "CSV from scan-table (or '-' for stdin)")->required();

    // global flags (--threads) may appear after the subcommand
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        sub->fallthrough();
        for (CLI::App* subsub : sub->get_subcommands([](const CLI::App*) { return true; }))
            subsub->fallthrough();
    }

    std::vector<std::string> argv_copy(args);
    std::reverse(argv_copy.begin(), argv_copy.end());
    try {
        app.parse(argv_copy);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_reduce->parsed()) {
            const HPoint z = parse_point(reduce_z);
            const ReducedPoint red = al_reduce(z, reduce_level);
            const GapReport gap = check_gap(red.z, reduce_level);
            ordered_json j;
            j["config"] = {{"command", "reduce"}, {"z", reduce_z}, {"level", reduce_level}, {"threads", threads}};
            j["z_reduced"] = {{"x", red.z.x}, {"y", red.z.y}};
            j["word_length"] = red.word.size();
            j["converged"] = red.converged;
            j["im_ok"] = gap.im_ok;
            j["min_norm"] = gap.min_norm;
            emit_json(j, out);
        } else if (cmd_census->parsed()) {
            const HPoint z = parse_point(census_z);
            const CountSplit s = count_split({z, census_level, census_l, census_delta}, threads);
            out << "# config: command=census z=" << census_z << " level=" << census_level
                << " l=" << census_l << " delta=" << num(census_delta) << " threads=" << threads << "\n";
            out << "z_x,z_y,N,l,delta,m_star,m_upper,m_parab\n";
            out << num(z.x) << ',' << num(z.y) << ',' << census_level << ',' << census_l << ','
                << num(census_delta) << ',' << s.m_star << ',' << s.m_upper << ',' << s.m_parab << "\n";
        } else if (cmd_para->parsed()) {
            const HPoint z = parse_point(para_z);
            const ParabolicSum s = parabolic_sum(z, para_level, para_l, para_k, para_tol);
            ordered_json j;
            j["config"] = {{"command", "parabolic"}, {"z", para_z}, {"level", para_level},
                           {"l", para_l}, {"weight", para_k}, {"tail_tol", para_tol}, {"threads", threads}};
            j["value"] = s.value;
            j["tail_bound"] = s.tail_bound;
            emit_json(j, out);
        } else if (cmd_amp->parsed()) {
            const QSeries f = resolve_form(amp_form, 2000);
            const AmpSupport sup = build_support(amp_L, amp_level);
            auto lambda = [&](i64 l) { return lam(f, l); };
            const AmpVector v = convolve_y(build_x(lambda, sup));
            ordered_json j;
            j["config"] = {{"command", "amplify"}, {"level", amp_level}, {"L", amp_L},
                           {"form", amp_form}, {"threads", threads}};
            ordered_json primes = ordered_json::array();
            for (i64 p : sup.primes) primes.push_back(p);
            j["primes"] = primes;
            ordered_json xs, ys;
            for (auto [l, x] : v.x) xs[std::to_string(l)] = x;
            for (auto [l, y] : v.y) ys[std::to_string(l)] = y;
            j["x"] = xs;
            j["y"] = ys;
            j["amp_lower"] = amp_lower(lambda, sup);
            emit_json(j, out);
        } else if (cmd_form->parsed()) {
            if (form_expand->parsed()) {
                const QSeries f = eta_expand(parse_eta(form_eta), form_trunc, form_level_override);
                ordered_json j;
                j["config"] = {{"command", "form expand"}, {"eta", form_eta}, {"trunc", form_trunc},
                               {"level", form_level_override}, {"threads", threads}};
                j["level"] = f.level;
                j["weight"] = f.weight;
                ordered_json head = ordered_json::array();
                for (i64 n = 1; n <= std::min<i64>(10, f.trunc()); ++n) head.push_back(f.a[size_t(n)].str());
                j["coeffs_head"] = head;
                emit_json(j, out);
            } else if (form_check->parsed()) {
                QSeries f;
                if (!form_eta.empty()) f = eta_expand(parse_eta(form_eta), form_trunc);
                else if (!form_coeffs.empty()) f = import_form(read_file(form_coeffs));
                else if (!form_id.empty()) f = resolve_form(form_id, form_trunc);
                else throw std::invalid_argument("form check: need --eta, --coeffs or --form");
                ordered_json j;
                j["config"] = {{"command", "form check"}, {"eta", form_eta}, {"coeffs", form_coeffs},
                               {"form", form_id}, {"trunc", form_trunc}, {"threads", threads}};
                j["report"] = hecke_json(hecke_check(f));
                j["deligne_ok"] = deligne_ok(f);
                emit_json(j, out);
            } else if (form_export->parsed()) {
                QSeries f;
                if (!form_id.empty()) f = resolve_form(form_id, form_trunc);
                else if (!form_eta.empty()) f = eta_expand(parse_eta(form_eta), form_trunc);
                else throw std::invalid_argument("form export: need --form or --eta");
                const std::string table = export_form(f);
                if (form_out.empty()) out << table;
                else std::ofstream(form_out, std::ios::binary) << table;
            } else if (form_import->parsed()) {
                const QSeries f = import_form(read_file(form_coeffs));
                ordered_json j;
                j["config"] = {{"command", "form import"}, {"coeffs", form_coeffs}, {"threads", threads}};
                j["level"] = f.level;
                j["weight"] = f.weight;
                j["trunc"] = f.trunc();
                j["report"] = hecke_json(hecke_check(f));
                emit_json(j, out);
            }
        } else if (cmd_pt->parsed()) {
            const CatalogEntry* entry = catalog_lookup(pt_level, pt_weight);
            if (!entry || !entry->dim_one)
                throw std::invalid_argument("pretrace-check: no certified one-dimensional catalog space for this (N,k)");
            const QSeries& f = catalog_form(entry->id, 2000);
            const SpectralCheck chk = spectral_residual(f, parse_point(pt_z), pt_delta, 0.0, pt_ptol);
            ordered_json j;
            j["config"] = {{"command", "pretrace-check"}, {"level", pt_level}, {"weight", pt_weight},
                           {"z", pt_z}, {"delta_max", pt_delta}, {"petersson_tol", pt_ptol},
                           {"threads", threads}};
            j["geometric"] = chk.geometric;
            j["spectral"] = chk.spectral;
            j["residual"] = chk.residual;
            j["petersson"] = chk.petersson;
            j["matrix_count"] = chk.kernel.matrix_count;
            j["tail_estimate"] = chk.kernel.tail_estimate;
            emit_json(j, out);
        } else if (cmd_scan->parsed()) {
            const QSeries f = resolve_form(scan_form, 2000);
            const HPoint grid = parse_point(scan_grid); // reuse x,y parser for nx,ny
            ScanConfig cfg;
            cfg.nx = int(grid.x);
            cfg.ny = int(grid.y);
            cfg.refine_rounds = scan_refine;
            cfg.threads = threads;
            const ScanReport rep = scan_sup(f, cfg);
            ordered_json j;
            j["config"] = {{"command", "scan"}, {"form", scan_form}, {"grid", scan_grid},
                           {"refine", scan_refine}, {"threads", threads}};
            j["sup_value"] = rep.sup_value;
            j["argmax"] = {{"x", rep.argmax.x}, {"y", rep.argmax.y}};
            j["region"] = rep.region;
            j["max_low"] = rep.max_low;
            j["max_high"] = rep.max_high;
            j["high_dominates"] = rep.high_dominates;
            j["y_split"] = rep.y_split;
            j["y_top"] = rep.y_top;
            j["petersson"] = rep.petersson;
            j["normalized_sup"] = rep.normalized_sup;
            j["evaluations"] = rep.evaluations;
            emit_json(j, out);
        } else if (cmd_table->parsed()) {
            std::vector<std::string> ids;
            std::stringstream ss(table_forms);
            std::string id;
            while (std::getline(ss, id, ',')) ids.push_back(id);
            const HPoint grid = parse_point(table_grid);
            out << "# config: command=scan-table forms=" << table_forms << " grid=" << table_grid
                << " refine=" << table_refine << " threads=" << threads << "\n";
            out << "N,k,sup,normalized_sup\n";
            for (const std::string& fid : ids) {
                const QSeries f = resolve_form(fid, 2000);
                ScanConfig cfg;
                cfg.nx = int(grid.x);
                cfg.ny = int(grid.y);
                cfg.refine_rounds = table_refine;
                cfg.threads = threads;
                const ScanReport rep = scan_sup(f, cfg);
                out << f.level << ',' << f.weight << ',' << num(rep.sup_value) << ','
                    << num(rep.normalized_sup) << "\n";
            }
        } else if (cmd_fit->parsed()) {
            std::string text;
            if (fit_input == "-") {
                std::stringstream ss;
                ss << std::cin.rdbuf();
                text = ss.str();
            } else {
                text = read_file(fit_input);
            }
            std::vector<std::pair<double, double>> table;
            std::stringstream lines(text);
            std::string line;
            while (std::getline(lines, line)) {
                if (line.empty() || line[0] == '#' || line.rfind("N,", 0) == 0) continue;
                std::stringstream cells(line);
                std::string cell;
                std::vector<std::string> row;
                while (std::getline(cells, cell, ',')) row.push_back(cell);
                if (row.size() < 2) continue;
                // scan-table layout: N,k,sup,normalized_sup; 2-column
                // tables are read as (N, normalized_sup).
                const double N = std::stod(row[0]);
                const double s = std::stod(row.size() >= 4 ? row[3] : row[1]);
                table.emplace_back(N, s);
            }
            const FitResult fit = fit_exponent(table);
            ordered_json j;
            j["config"] = {{"command", "fit"}, {"input", fit_input}, {"points", table.size()},
                           {"threads", threads}};
            j["slope"] = fit.slope;
            j["intercept"] = fit.intercept;
            ordered_json res = ordered_json::array();
            for (double r : fit.residuals) res.push_back(r);
            j["residuals"] = res;
            emit_json(j, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace suplab::cli
