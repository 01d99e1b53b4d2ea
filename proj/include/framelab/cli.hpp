#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "framelab/config.hpp"
#include "framelab/construction.hpp"
#include "framelab/frame.hpp"
#include "framelab/parametrize.hpp"
#include "framelab/riesz.hpp"

namespace framelab {

inline constexpr const char* kReportSchema = "framelab-report/1";

struct RunOutput {
    int status = 0;
    std::string diagnostic;
    std::map<std::string, std::string> files;  // name -> contents
};

// Rounds every float to 12 significant digits so reports do not depend on the last bits.
inline void canonicalize(nlohmann::json& j) {
    if (j.is_number_float()) {
        const double x = j.get<double>();
        if (!std::isfinite(x)) {
            j = nullptr;
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", x);
        const double r = std::stod(buf);
        j = r == 0.0 ? 0.0 : r;
    } else if (j.is_structured()) {
        for (auto& e : j) canonicalize(e);
    }
}

inline std::string dump_report(nlohmann::json report) {
    canonicalize(report);
    return report.dump(2) + "\n";
}

inline nlohmann::json provenance(const RunConfig& cfg) {
    const CosetStructure c = cfg.cosets();
    const SpectralKernel k = cfg.kernel();
    const nlohmann::json canon = cfg.to_json();
    return {{"rank", cfg.rank},
            {"N", cfg.modulus},
            {"weights", c.weights()},
            {"h0", c.h0().str()},
            {"E", "[0,1/N)"},
            {"M", cfg.truncation},
            {"taper", to_string(cfg.taper)},
            {"L", cfg.support_radius},
            {"index_radius", cfg.index_radius},
            {"L_H", cfg.subgroup_radius},
            {"interior", cfg.interior_radius},
            {"tolerances", canon.at("tolerances")},
            {"construction", canon.at("construction")},
            {"seed", cfg.seed},
            {"tests", cfg.tests},
            {"trace_estimate", trace_estimate(k, c)},
            {"config", canon}};
}

namespace detail {

struct Checks {
    nlohmann::json items = nlohmann::json::object();
    bool all = true;

    void add(const std::string& name, double value, double tolerance) {
        const bool ok = value <= tolerance;
        all = all && ok;
        items[name] = {{"value", value}, {"tolerance", tolerance}, {"pass", ok}};
    }
    void flag(const std::string& name, bool ok) {
        all = all && ok;
        items[name] = {{"pass", ok}};
    }
    nlohmann::json to_json() const { return {{"items", items}, {"all_passed", all}}; }
};

inline nlohmann::json base_report(const std::string& command, const RunConfig& cfg) {
    return {{"schema", kReportSchema}, {"command", command}, {"provenance", provenance(cfg)}};
}

inline double max_of(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, x);
    return m;
}

inline RunOutput run_construct(const RunConfig& cfg) {
    const CosetStructure c = cfg.cosets();
    const SpectralKernel k = cfg.kernel();
    const DisjointTuple t = build_disjoint_tuple(c, k, cfg.tuple_options());
    Checks ch;
    ch.add("eta_subgroup_onb", t.eta_subgroup_onb, cfg.tol.subgroup_onb);
    ch.add("eta_norm2_deviation", std::abs(t.eta_norm2 - 1.0 / cfg.modulus), cfg.tol.norm);
    ch.add("member_parseval", max_of(t.parseval), cfg.tol.parseval);
    ch.add("member_subgroup_onb", max_of(t.subgroup_onb), cfg.tol.member_subgroup_onb);
    ch.add("pairwise_disjointness", t.disjointness.size() ? t.disjointness.maxCoeff() : 0.0, cfg.tol.disjointness);
    ch.add("coset_average", t.coset_average, cfg.tol.exact);
    nlohmann::json rep = base_report("construct", cfg);
    rep["results"] = t.to_json();
    rep["checks"] = ch.to_json();
    RunOutput out;
    out.files["report.json"] = dump_report(rep);
    if (cfg.gram_csv) {
        const auto hs = enumerate_subgroup_ball(c, cfg.subgroup_radius);
        out.files["gram_eta.csv"] = translate_gram(t.eta, hs, cfg.matrix_cap, cfg.workers).to_csv();
        for (std::size_t i = 0; i < t.members.size(); ++i)
            out.files["gram_member_" + std::to_string(i) + ".csv"] =
                translate_gram(t.members[i], hs, cfg.matrix_cap, cfg.workers).to_csv();
    }
    return out;
}

inline RunOutput run_certify(const RunConfig& cfg) {
    const CosetStructure c = cfg.cosets();
    std::vector<L2Vector> vectors;
    if (cfg.vectors.empty())
        vectors.push_back(L2Vector::delta(Word::identity()));
    else
        for (const auto& v : cfg.vectors) vectors.push_back(sparse_from_json<VectorTag>(v, cfg.rank));
    std::vector<KernelImage> tests;
    {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> nd;
        const auto support = ball(cfg.rank, cfg.interior_radius);
        for (int i = 0; i < cfg.tests; ++i) {
            L2Vector w;
            for (const Word& g : support) {
                const double re = nd(rng);
                const double im = nd(rng);
                w.add(g, Complex{re, im});
            }
            tests.emplace_back(std::move(w));
        }
    }
    // Vectors inside Ball(L) get the bounded window, whose sums are then exact; larger ones are summed over G.
    auto window_for = [&](const L2Vector& v) {
        return static_cast<int>(v.radius()) <= cfg.support_radius
                   ? FrameWindow::radius(cfg.index_radius, cfg.support_radius, cfg.interior_radius)
                   : FrameWindow::exact(static_cast<int>(v.radius()), cfg.interior_radius);
    };
    Checks ch;
    nlohmann::json results = nlohmann::json::array();
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const FrameWindow w = window_for(vectors[i]);
        const double p = parseval_residual(KernelImage{vectors[i]}, w, tests);
        const RieszCertificate r = riesz_bounds(KernelImage{vectors[i]}, c, cfg.subgroup_radius, cfg.matrix_cap, cfg.workers);
        ch.add("parseval_" + std::to_string(i), p, cfg.tol.parseval);
        results.push_back({{"index", i},
                           {"support_size", vectors[i].size()},
                           {"norm2", vectors[i].norm2()},
                           {"window", w.to_json()},
                           {"parseval_residual", p},
                           {"riesz", r.to_json()}});
    }
    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            const int radius = static_cast<int>(std::max(vectors[i].radius(), vectors[j].radius()));
            const FrameWindow w = radius <= cfg.support_radius
                                      ? FrameWindow::radius(cfg.index_radius, cfg.support_radius, cfg.interior_radius)
                                      : FrameWindow::exact(radius, cfg.interior_radius);
            pairs.push_back({{"pair", {i, j}},
                             {"disjointness_residual",
                              max_disjointness(KernelImage{vectors[i]}, KernelImage{vectors[j]}, tests, w)}});
        }
    nlohmann::json rep = base_report("certify", cfg);
    rep["results"] = {{"vectors", results}, {"disjointness", pairs}};
    rep["checks"] = ch.to_json();
    return {0, "", {{"report.json", dump_report(rep)}}};
}

inline RunOutput run_param(const RunConfig& cfg) {
    const CosetStructure c = cfg.cosets();
    const SpectralKernel k = cfg.kernel();
    const DisjointTuple t = build_disjoint_tuple(c, k, cfg.tuple_options());
    const std::size_t n = t.members.size();
    const FrameWindow exact = FrameWindow::exact(0, cfg.interior_radius);
    const FrameWindow gwin = FrameWindow::explicit_set(ball(cfg.rank, cfg.equivalence_radius), 0, 0);
    Checks ch;

    auto pad = [&](std::vector<Complex> v) {
        v.resize(n);
        return KernelRow::scalars(v);
    };
    nlohmann::json demos = nlohmann::json::array();
    for (const auto& [a2, b2] : cfg.alpha_beta) {
        const double a = std::sqrt(a2), b = std::sqrt(b2);
        const KernelRow u = pad({a, b});
        const KernelRow perp = pad({-b, a});
        const KernelRow phase = pad({a * std::polar(1.0, std::numbers::pi / 3), b * std::polar(1.0, std::numbers::pi / 3)});
        const KernelRow swapped = pad({b, a});
        const KernelImage eu = synthesize(u, t.members), ep = synthesize(perp, t.members);
        const KernelImage eph = synthesize(phase, t.members), es = synthesize(swapped, t.members);
        const RowFit fit = fit_row(eu, t.members, {Word::identity()});
        const std::string tag = nlohmann::json(a2).dump() + "/" + nlohmann::json(b2).dump();
        nlohmann::json d = {{"alpha_beta", {a2, b2}},
                            {"verify_row", verify_row(u)},
                            {"rows_disjoint_perp", rows_disjoint(u, perp)},
                            {"disjointness_residual_perp", max_disjointness(eu, ep, t.tests, exact)},
                            {"rows_equivalent_phase", rows_equivalent(u, phase, cfg.workers)},
                            {"equivalence_residual_phase", equivalence_residual(eu, eph, gwin)},
                            {"rows_equivalent_swapped", rows_equivalent(u, swapped, cfg.workers)},
                            {"equivalence_residual_swapped", equivalence_residual(eu, es, gwin)},
                            {"parseval_residual", parseval_residual(eu, exact, t.tests)},
                            {"fit", fit.to_json()}};
        ch.add("verify_row " + tag, d["verify_row"], cfg.tol.exact);
        ch.add("rows_disjoint_perp " + tag, d["rows_disjoint_perp"], cfg.tol.exact);
        ch.add("disjointness_perp " + tag, d["disjointness_residual_perp"], cfg.tol.disjointness);
        ch.add("parseval " + tag, d["parseval_residual"], cfg.tol.parseval);
        demos.push_back(std::move(d));
    }
    nlohmann::json shift = nullptr;
    if (!cfg.alpha_beta.empty() && n >= 2) {
        const double a = std::sqrt(cfg.alpha_beta.front().first), b = std::sqrt(cfg.alpha_beta.front().second);
        std::vector<std::pair<Complex, Word>> entries(n, {0.0, Word::identity()});
        entries[0] = {a, c.h0()};
        entries[1] = {b, c.h0().pow(-2)};
        const KernelRow u = KernelRow::shifts(entries);
        entries[0] = {-b, c.h0()};
        entries[1] = {a, c.h0().pow(-2)};
        const KernelRow perp = KernelRow::shifts(entries);
        const KernelImage eu = synthesize(u, t.members), ep = synthesize(perp, t.members);
        shift = {{"row", u.to_json()},
                 {"verify_row", verify_row(u)},
                 {"rows_disjoint_perp", rows_disjoint(u, perp)},
                 {"disjointness_residual_perp", max_disjointness(eu, ep, t.tests, exact)},
                 {"parseval_residual", parseval_residual(eu, exact, t.tests)}};
        ch.add("shift verify_row", shift["verify_row"], cfg.tol.exact);
        ch.add("shift rows_disjoint_perp", shift["rows_disjoint_perp"], cfg.tol.exact);
        ch.add("shift parseval", shift["parseval_residual"], cfg.tol.parseval);
    }
    nlohmann::json user = nlohmann::json::array();
    std::vector<KernelRow> rows;
    for (const auto& r : cfg.rows) rows.push_back(KernelRow::from_json(r));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        nlohmann::json e = {{"index", i}, {"verify_row", verify_row(rows[i])}};
        if (rows[i].size() == n) {
            e["parseval_residual"] = parseval_residual(synthesize(rows[i], t.members), exact, t.tests);
            nlohmann::json rel = nlohmann::json::array();
            for (std::size_t j = i + 1; j < rows.size(); ++j)
                if (rows[j].size() == n)
                    rel.push_back({{"with", j},
                                   {"rows_disjoint", rows_disjoint(rows[i], rows[j])},
                                   {"rows_equivalent", rows_equivalent(rows[i], rows[j], cfg.workers)}});
            e["relations"] = rel;
        }
        user.push_back(std::move(e));
    }
    nlohmann::json rep = base_report("param", cfg);
    rep["results"] = {{"tuple", t.to_json()}, {"scalar_rows", demos}, {"shift_row", shift}, {"rows", user},
                      {"equivalence_window", gwin.to_json()}};
    rep["checks"] = ch.to_json();
    return {0, "", {{"report.json", dump_report(rep)}}};
}

inline FeichtingerParams feichtinger_params(const RunConfig& cfg) {
    FeichtingerParams p;
    p.subgroup_radius = cfg.subgroup_radius;
    p.threshold = cfg.tol.riesz_threshold;
    p.stability_band = cfg.tol.stability_band;
    p.alpha_beta = cfg.alpha_beta;
    p.matrix_cap = cfg.matrix_cap;
    p.workers = cfg.workers;
    return p;
}

inline RunOutput run_riesz(const RunConfig& cfg) {
    const CosetStructure c = cfg.cosets();
    const SpectralKernel k = cfg.kernel();
    const DisjointTuple t = build_disjoint_tuple(c, k, cfg.tuple_options());
    const FeichtingerReport fr = feichtinger_report(t, c, feichtinger_params(cfg));
    Checks ch;
    for (std::size_t i = 0; i < t.members.size(); ++i) {
        const FamilyVerdict& v = fr.families[i];
        ch.flag(v.label + " verdict", v.verdict);
        ch.add(v.label + " coset spectral spread", v.spectral_spread, 1e-10);
        ch.add(v.label + " lower-bound shift", v.lower_shift, cfg.tol.stability_band);
        ch.add(v.label + " upper-bound shift", v.upper_shift, cfg.tol.stability_band);
    }
    nlohmann::json rep = base_report("riesz", cfg);
    rep["results"] = {{"tuple", t.to_json()}, {"feichtinger", fr.to_json()}};
    rep["checks"] = ch.to_json();
    RunOutput out;
    out.files["report.json"] = dump_report(rep);
    if (cfg.gram_csv) {
        const auto subs = coset_subfamilies(c, cfg.subgroup_radius);
        for (std::size_t i = 0; i < t.members.size(); ++i) {
            const Autocorrelation acf(t.members[i]);
            for (std::size_t kk = 0; kk < subs.size(); ++kk)
                out.files["gram_member_" + std::to_string(i) + "_coset_" + std::to_string(kk) + ".csv"] =
                    translate_gram(acf, subs[kk], cfg.matrix_cap, cfg.workers).to_csv();
        }
    }
    return out;
}

inline RunOutput run_sweep(const RunConfig& cfg) {
    const CosetStructure c = cfg.cosets();
    std::ostringstream csv;
    csv << "parameter,residual_name,value\n";
    csv << std::setprecision(12);
    nlohmann::json ms = nlohmann::json::array();
    for (int m : cfg.sweep_truncations) {
        const SpectralKernel k = cfg.kernel(m);
        const double idem = idempotency_residual(k, c);
        const double tr = trace_estimate(k, c);
        csv << "M=" << m << ",idempotency_residual," << idem << '\n';
        csv << "M=" << m << ",trace_deviation," << std::abs(tr - 1.0 / cfg.modulus) << '\n';
        ms.push_back({{"M", m}, {"idempotency_residual", idem}, {"trace_estimate", tr}});
    }
    nlohmann::json ls = nlohmann::json::array();
    if (!cfg.sweep_subgroup_radii.empty()) {
        const DisjointTuple t = build_disjoint_tuple(c, cfg.kernel(), cfg.tuple_options());
        for (int r : cfg.sweep_subgroup_radii) {
            const RieszCertificate e = riesz_bounds(t.eta, c, r, cfg.matrix_cap, cfg.workers);
            const RieszCertificate m0 = riesz_bounds(t.members.front(), c, r, cfg.matrix_cap, cfg.workers);
            csv << "L_H=" << r << ",eta_onb_deviation," << std::max(std::abs(cfg.modulus * e.lower - 1), std::abs(cfg.modulus * e.upper - 1)) << '\n';
            csv << "L_H=" << r << ",member0_riesz_lower," << m0.lower << '\n';
            csv << "L_H=" << r << ",member0_riesz_upper," << m0.upper << '\n';
            ls.push_back({{"L_H", r}, {"eta", e.to_json()}, {"member0", m0.to_json()}});
        }
    }
    nlohmann::json rep = base_report("sweep", cfg);
    rep["results"] = {{"truncation", ms}, {"subgroup_radius", ls}};
    return {0, "", {{"report.json", dump_report(rep)}, {"sweep.csv", csv.str()}}};
}

}  // namespace detail

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"construct", "certify", "param", "riesz", "sweep"};
    return names;
}

// Runs one command; failures come back as a nonzero status with a diagnostic, never as an exception.
inline RunOutput run(const std::string& command, const RunConfig& cfg) {
    try {
        if (command == "construct") return detail::run_construct(cfg);
        if (command == "certify") return detail::run_certify(cfg);
        if (command == "param") return detail::run_param(cfg);
        if (command == "riesz") return detail::run_riesz(cfg);
        if (command == "sweep") return detail::run_sweep(cfg);
        return {2, "unknown command '" + command + "'", {}};
    } catch (const std::exception& e) {
        return {1, e.what(), {}};
    }
}

inline void write_outputs(const RunOutput& out, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, contents] : out.files) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        f << contents;
    }
}

}  // namespace framelab
