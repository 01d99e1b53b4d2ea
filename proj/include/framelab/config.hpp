#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "framelab/construction.hpp"
#include "framelab/coset.hpp"

namespace framelab {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Tolerances {
    double parseval = 0.05;
    double disjointness = 0.05;
    double subgroup_onb = 1e-3;
    double member_subgroup_onb = 0.01;
    double norm = 1e-3;
    double riesz_threshold = 0.02;
    double stability_band = 0.02;
    double exact = 1e-14;
};

struct RunConfig {
    int rank = 2;
    int modulus = 2;
    std::vector<long> weights;          // empty: (1, 0, ..., 0)
    std::optional<std::string> h0;      // empty: derived
    int support_radius = 7;             // L
    int index_radius = 8;
    int subgroup_radius = 5;            // L_H
    int interior_radius = 1;
    int equivalence_radius = 2;         // G-window for equivalence residuals
    int truncation = 64;                // M
    Taper taper = Taper::sharp;
    SeedKind seed_vector = SeedKind::cross_coset;
    int depth = 2;
    int exponent = 12;
    double floor = 1e-8;
    bool refine = true;
    int max_iterations = 30;
    Tolerances tol;
    int tests = 20;
    std::uint64_t seed = 1;
    int workers = 1;
    std::size_t matrix_cap = kDefaultMatrixCap;
    std::vector<std::pair<double, double>> alpha_beta = {{0.8, 0.2}, {0.5, 0.5}};
    std::vector<int> sweep_truncations = {8, 16, 32, 64, 128};
    std::vector<int> sweep_subgroup_radii = {2, 3, 4, 5};
    nlohmann::json vectors = nlohmann::json::array();  // certify inputs
    nlohmann::json rows = nlohmann::json::array();     // param inputs
    bool gram_csv = false;

    CosetStructure cosets() const {
        std::optional<Word> h;
        if (h0) h = Word::parse(*h0, rank);
        return CosetStructure(rank, modulus, weights, h);
    }

    SpectralKernel kernel() const { return SpectralKernel(modulus, truncation, taper); }
    SpectralKernel kernel(int m) const { return SpectralKernel(modulus, m, taper); }

    TupleOptions tuple_options() const {
        TupleOptions o;
        o.ortho.seed = seed_vector;
        o.ortho.depth = depth;
        o.ortho.exponent = exponent;
        o.ortho.floor = floor;
        o.ortho.matrix_cap = matrix_cap;
        o.ortho.workers = workers;
        o.refine = refine;
        o.refinement.interior_radius = interior_radius;
        o.refinement.max_iterations = max_iterations;
        o.tests = tests;
        o.seed = seed;
        return o;
    }

    // Canonical form with every default filled in; the worker count is an execution detail and is omitted.
    nlohmann::json to_json() const {
        const CosetStructure c = cosets();
        nlohmann::json ab = nlohmann::json::array();
        for (const auto& [a, b] : alpha_beta) ab.push_back({a, b});
        return {{"rank", rank},
                {"modulus", modulus},
                {"weights", c.weights()},
                {"h0", c.h0().str()},
                {"radii",
                 {{"support", support_radius},
                  {"index", index_radius},
                  {"subgroup", subgroup_radius},
                  {"interior", interior_radius},
                  {"equivalence", equivalence_radius}}},
                {"kernel", {{"M", truncation}, {"taper", to_string(taper)}}},
                {"construction",
                 {{"seed_vector", to_string(seed_vector)},
                  {"depth", depth},
                  {"exponent", exponent},
                  {"floor", floor},
                  {"refine", refine},
                  {"max_iterations", max_iterations}}},
                {"tolerances",
                 {{"parseval", tol.parseval},
                  {"disjointness", tol.disjointness},
                  {"subgroup_onb", tol.subgroup_onb},
                  {"member_subgroup_onb", tol.member_subgroup_onb},
                  {"norm", tol.norm},
                  {"riesz_threshold", tol.riesz_threshold},
                  {"stability_band", tol.stability_band},
                  {"exact", tol.exact}}},
                {"tests", tests},
                {"seed", seed},
                {"matrix_cap", matrix_cap},
                {"alpha_beta", ab},
                {"sweep", {{"M", sweep_truncations}, {"subgroup_radii", sweep_subgroup_radii}}},
                {"vectors", vectors},
                {"rows", rows},
                {"outputs", {{"gram_csv", gram_csv}}}};
    }
};

namespace detail {

inline void check_keys(const nlohmann::json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <class T>
void read(const nlohmann::json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("bad type for '" + std::string(key) + "' in " + where);
    }
}

}  // namespace detail

inline RunConfig validate_config(const nlohmann::json& raw) {
    using detail::check_keys;
    using detail::read;
    RunConfig c;
    const nlohmann::json j = raw.is_null() ? nlohmann::json::object() : raw;
    check_keys(j, "config",
               {"rank", "modulus", "weights", "h0", "radii", "kernel", "construction", "tolerances", "tests", "seed",
                "workers", "matrix_cap", "alpha_beta", "sweep", "vectors", "rows", "outputs"});
    read(j, "rank", c.rank, "config");
    read(j, "modulus", c.modulus, "config");
    read(j, "weights", c.weights, "config");
    if (j.contains("h0")) c.h0 = j.at("h0").get<std::string>();
    read(j, "tests", c.tests, "config");
    read(j, "seed", c.seed, "config");
    read(j, "workers", c.workers, "config");
    read(j, "matrix_cap", c.matrix_cap, "config");

    bool index_given = false;
    if (j.contains("radii")) {
        const auto& r = j.at("radii");
        check_keys(r, "radii", {"support", "index", "subgroup", "interior", "equivalence"});
        read(r, "support", c.support_radius, "radii");
        index_given = r.contains("index");
        read(r, "index", c.index_radius, "radii");
        read(r, "subgroup", c.subgroup_radius, "radii");
        read(r, "interior", c.interior_radius, "radii");
        read(r, "equivalence", c.equivalence_radius, "radii");
    }
    if (!index_given) c.index_radius = c.support_radius + c.interior_radius;
    if (j.contains("kernel")) {
        const auto& k = j.at("kernel");
        check_keys(k, "kernel", {"M", "taper"});
        read(k, "M", c.truncation, "kernel");
        if (k.contains("taper")) c.taper = taper_from_string(k.at("taper").get<std::string>());
    }
    if (j.contains("construction")) {
        const auto& k = j.at("construction");
        check_keys(k, "construction", {"seed_vector", "depth", "exponent", "floor", "refine", "max_iterations"});
        if (k.contains("seed_vector")) c.seed_vector = seed_from_string(k.at("seed_vector").get<std::string>());
        read(k, "depth", c.depth, "construction");
        read(k, "exponent", c.exponent, "construction");
        read(k, "floor", c.floor, "construction");
        read(k, "refine", c.refine, "construction");
        read(k, "max_iterations", c.max_iterations, "construction");
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        check_keys(t, "tolerances",
                   {"parseval", "disjointness", "subgroup_onb", "member_subgroup_onb", "norm", "riesz_threshold",
                    "stability_band", "exact"});
        read(t, "parseval", c.tol.parseval, "tolerances");
        read(t, "disjointness", c.tol.disjointness, "tolerances");
        read(t, "subgroup_onb", c.tol.subgroup_onb, "tolerances");
        read(t, "member_subgroup_onb", c.tol.member_subgroup_onb, "tolerances");
        read(t, "norm", c.tol.norm, "tolerances");
        read(t, "riesz_threshold", c.tol.riesz_threshold, "tolerances");
        read(t, "stability_band", c.tol.stability_band, "tolerances");
        read(t, "exact", c.tol.exact, "tolerances");
    }
    if (j.contains("alpha_beta")) {
        c.alpha_beta.clear();
        for (const auto& p : j.at("alpha_beta")) {
            if (!p.is_array() || p.size() != 2) throw ConfigError("alpha_beta entries must be [|alpha|^2, |beta|^2]");
            c.alpha_beta.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        check_keys(s, "sweep", {"M", "subgroup_radii"});
        read(s, "M", c.sweep_truncations, "sweep");
        read(s, "subgroup_radii", c.sweep_subgroup_radii, "sweep");
    }
    if (j.contains("vectors")) c.vectors = j.at("vectors");
    if (j.contains("rows")) c.rows = j.at("rows");
    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        check_keys(o, "outputs", {"gram_csv"});
        read(o, "gram_csv", c.gram_csv, "outputs");
    }

    if (c.modulus < 2) throw ConfigError("index must be ≥ 2");
    if (c.rank < 2) throw ConfigError("rank must be ≥ 2");
    if (!c.weights.empty()) {
        if (static_cast<int>(c.weights.size()) != c.rank) throw ConfigError("weights length must equal rank");
        long g = c.modulus;
        for (long w : c.weights) g = std::gcd(g, ((w % c.modulus) + c.modulus) % c.modulus);
        if (g != 1) throw ConfigError("phi not surjective");
    }
    for (const auto& [name, v] : {std::pair<const char*, int>{"support", c.support_radius},
                                  {"index", c.index_radius},
                                  {"subgroup", c.subgroup_radius},
                                  {"interior", c.interior_radius},
                                  {"equivalence", c.equivalence_radius}})
        if (v < 0) throw ConfigError(std::string("radius '") + name + "' must be non-negative");
    if (c.interior_radius + c.support_radius > c.index_radius)
        throw ConfigError("window inequality violated: interior + support > index radius");
    if (c.subgroup_radius < 1) throw ConfigError("subgroup radius must be ≥ 1 (two nested windows)");
    if (c.refine && c.seed_vector != SeedKind::cross_coset)
        throw ConfigError("interior refinement needs the cross_coset seed vector");
    if (c.truncation < 0) throw ConfigError("M must be non-negative");
    if (c.tests < 1) throw ConfigError("tests must be ≥ 1");
    if (c.workers < 1) throw ConfigError("workers must be ≥ 1");
    for (const auto& [a, b] : c.alpha_beta)
        if (a < 0 || b < 0 || std::abs(a + b - 1.0) > 1e-12) throw ConfigError("alpha_beta entries must sum to 1");
    try {
        (void)c.cosets();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return c;
}

}  // namespace framelab
