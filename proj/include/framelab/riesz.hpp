#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "framelab/construction.hpp"
#include "framelab/coset.hpp"
#include "framelab/frame.hpp"
#include "framelab/parallel.hpp"

namespace framelab {

// Gram bounds of a translate family, valid for the declared window only.
struct RieszCertificate {
    double lower = 0;
    double upper = 0;
    FrameWindow window;
    nlohmann::json family;

    nlohmann::json to_json() const {
        return {{"lower", lower}, {"upper", upper}, {"window", window.to_json()}, {"family", family}};
    }
};

inline Eigen::VectorXd gram_spectrum(const Eigen::MatrixXcd& g) {
    if (g.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolve failed");
    return es.eigenvalues();
}

namespace detail {

inline RieszCertificate certificate_from(const Autocorrelation& acf, const std::vector<Word>& index, int radius,
                                         nlohmann::json family, std::size_t cap, int workers,
                                         Eigen::VectorXd* spectrum = nullptr) {
    if (index.empty()) throw std::invalid_argument("empty window: no Riesz certificate");
    const GramReport g = translate_gram(acf, index, cap, workers);
    RieszCertificate r;
    // Eigenvalues of a PSD matrix can come out at -1e-17.
    r.lower = std::max(g.eig_min, 0.0);
    r.upper = std::max(g.eig_max, r.lower);
    r.window = FrameWindow::explicit_set(index, 0, radius);
    r.family = std::move(family);
    if (spectrum) *spectrum = gram_spectrum(g.matrix);
    return r;
}

}  // namespace detail

// Gram bounds of {lambda(h) eta : h in H, |h| <= radius}. Entries are exact: autocorrelations run over all of G.
inline RieszCertificate riesz_bounds(const KernelImage& eta, const CosetStructure& c, int radius,
                                     std::size_t cap = kDefaultMatrixCap, int workers = 1) {
    return detail::certificate_from(Autocorrelation(eta), enumerate_subgroup_ball(c, radius), radius,
                                    {{"translates", "H"}, {"subgroup_radius", radius}}, cap, workers);
}

// Partition of W by the coset a_k H containing each index word; entry k lists W ∩ a_k H in the given order.
inline std::vector<std::vector<Word>> decompose_into_cosets(const CosetStructure& c, const std::vector<Word>& w) {
    std::vector<std::vector<Word>> out(static_cast<std::size_t>(c.modulus()));
    for (const Word& g : w) out[static_cast<std::size_t>(c.phi(g))].push_back(g);
    return out;
}

// Sub-family index sets a_k (H ∩ Ball(radius)), k = 0..N-1.
inline std::vector<std::vector<Word>> coset_subfamilies(const CosetStructure& c, int radius) {
    const auto hs = enumerate_subgroup_ball(c, radius);
    std::vector<std::vector<Word>> out;
    for (const Word& a : c.representatives()) {
        std::vector<Word> s;
        s.reserve(hs.size());
        for (const Word& h : hs) s.push_back(a * h);
        out.push_back(std::move(s));
    }
    return out;
}

struct FeichtingerParams {
    int subgroup_radius = 5;  // outer window; the inner one is one smaller
    double threshold = 0.02;
    double stability_band = 0.02;
    std::vector<std::pair<double, double>> alpha_beta = {{0.8, 0.2}, {0.5, 0.5}};  // (|alpha|^2, |beta|^2)
    std::size_t matrix_cap = kDefaultMatrixCap;
    int workers = 1;
};

struct FamilyVerdict {
    std::string label;
    double parseval = 0;
    std::vector<int> radii;
    std::vector<std::vector<RieszCertificate>> cosets;  // [window][k]
    double spectral_spread = 0;                         // max over windows and k of |spec_k - spec_0|
    double lower_shift = 0;
    double upper_shift = 0;
    bool verdict = false;
    bool stable = false;

    double lower(std::size_t window) const {
        double m = cosets.at(window).front().lower;
        for (const auto& r : cosets[window]) m = std::min(m, r.lower);
        return m;
    }
    double upper(std::size_t window) const {
        double m = 0;
        for (const auto& r : cosets.at(window)) m = std::max(m, r.upper);
        return m;
    }

    nlohmann::json to_json() const {
        nlohmann::json ws = nlohmann::json::array();
        for (std::size_t w = 0; w < radii.size(); ++w) {
            nlohmann::json cs = nlohmann::json::array();
            for (std::size_t k = 0; k < cosets[w].size(); ++k)
                cs.push_back({{"coset", k},
                              {"lower", cosets[w][k].lower},
                              {"upper", cosets[w][k].upper},
                              {"size", cosets[w][k].window.index_set.size()}});
            ws.push_back({{"subgroup_radius", radii[w]}, {"lower", lower(w)}, {"upper", upper(w)}, {"cosets", cs}});
        }
        return {{"label", label},
                {"parseval_residual", parseval},
                {"windows", ws},
                {"coset_spectral_spread", spectral_spread},
                {"stability", {{"lower_shift", lower_shift}, {"upper_shift", upper_shift}, {"stable", stable}}},
                {"verdict", verdict}};
    }
};

// Riesz certificates of the N coset sub-families on two nested subgroup windows.
inline FamilyVerdict certify_family(const std::string& label, const KernelImage& eta, const CosetStructure& c,
                                    const FeichtingerParams& p) {
    if (p.subgroup_radius < 1) throw std::invalid_argument("empty window: inner subgroup radius is negative");
    FamilyVerdict v;
    v.label = label;
    v.radii = {p.subgroup_radius - 1, p.subgroup_radius};
    const Autocorrelation acf(eta);
    v.cosets.resize(v.radii.size());
    for (std::size_t w = 0; w < v.radii.size(); ++w) {
        const auto subs = coset_subfamilies(c, v.radii[w]);
        std::vector<Eigen::VectorXd> spectra(subs.size());
        v.cosets[w].resize(subs.size());
        // Prefetch once so the parallel Grams only read the cache.
        acf.prefetch([&] {
            std::vector<Word> ds;
            for (const Word& a : subs.front())
                for (const Word& b : subs.front()) ds.push_back(a.inverse() * b);
            return ds;
        }());
        parallel_for(subs.size(), p.workers, [&](std::size_t k) {
            v.cosets[w][k] = detail::certificate_from(
                acf, subs[k], v.radii[w],
                {{"translates", "a_k H"}, {"coset", k}, {"representative", c.representative(static_cast<int>(k)).str()},
                 {"subgroup_radius", v.radii[w]}},
                p.matrix_cap, 1, &spectra[k]);
        });
        for (std::size_t k = 1; k < spectra.size(); ++k)
            v.spectral_spread = std::max(v.spectral_spread, (spectra[k] - spectra[0]).cwiseAbs().maxCoeff());
    }
    v.lower_shift = std::abs(v.lower(1) - v.lower(0));
    v.upper_shift = std::abs(v.upper(1) - v.upper(0));
    v.verdict = v.lower(0) >= p.threshold && v.lower(1) >= p.threshold;
    v.stable = v.lower_shift <= p.stability_band && v.upper_shift <= p.stability_band;
    return v;
}

struct FeichtingerReport {
    std::vector<FamilyVerdict> families;
    FeichtingerParams params;

    nlohmann::json to_json() const {
        nlohmann::json f = nlohmann::json::array();
        for (const auto& v : families) f.push_back(v.to_json());
        return {{"families", f},
                {"claim", "frame = union of N Riesz sequences at window scale"},
                {"threshold", params.threshold},
                {"stability_band", params.stability_band},
                {"subgroup_radii", {params.subgroup_radius - 1, params.subgroup_radius}}};
    }
};

// Verdicts for every tuple member and for the (alpha, beta) combinations of the first two members.
inline FeichtingerReport feichtinger_report(const DisjointTuple& t, const CosetStructure& c, const FeichtingerParams& p) {
    FeichtingerReport rep;
    rep.params = p;
    const FrameWindow w = FrameWindow::exact(0, t.provenance.value("interior_radius", 1));
    std::vector<std::pair<std::string, KernelImage>> items;
    for (std::size_t i = 0; i < t.members.size(); ++i) items.emplace_back("member " + std::to_string(i), t.members[i]);
    if (t.members.size() >= 2)
        for (const auto& [a2, b2] : p.alpha_beta) {
            const KernelImage e = combine_alpha_beta(t.members[0], t.members[1], std::sqrt(a2), std::sqrt(b2));
            items.emplace_back("alpha_beta " + nlohmann::json(a2).dump() + "/" + nlohmann::json(b2).dump(), e);
        }
    for (const auto& [label, eta] : items) {
        FamilyVerdict v = certify_family(label, eta, c, p);
        v.parseval = t.tests.empty() ? 0.0 : parseval_residual(eta, w, t.tests);
        rep.families.push_back(std::move(v));
    }
    return rep;
}

}  // namespace framelab
