#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <unordered_set>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "framelab/coset.hpp"
#include "framelab/frame.hpp"
#include "framelab/l2.hpp"

namespace framelab {

enum class Taper { sharp, cesaro };

inline std::string to_string(Taper t) { return t == Taper::sharp ? "sharp" : "cesaro"; }

inline Taper taper_from_string(const std::string& s) {
    if (s == "sharp") return Taper::sharp;
    if (s == "cesaro") return Taper::cesaro;
    throw std::invalid_argument("unknown taper '" + s + "'");
}

// Truncated Fourier series of the indicator of the arc [0, 1/N), evaluated at the unitary rho(h0).
class SpectralKernel {
public:
    SpectralKernel(int modulus, int truncation, Taper taper = Taper::sharp)
        : modulus_(modulus), truncation_(truncation), taper_(taper),
          coef_(static_cast<std::size_t>(2 * truncation + 1)) {
        if (modulus < 1) throw std::invalid_argument("modulus must be positive");
        if (truncation < 0) throw std::invalid_argument("truncation must be non-negative");
        coef_[static_cast<std::size_t>(truncation_)] = 1.0 / modulus_;
        for (int n = 1; n <= truncation_; ++n) {
            // (1 - exp(-2 pi i n / N)) / (2 pi i n)
            const Complex num = Complex{1.0, 0.0} - root_of_unity(-n, modulus_);
            Complex c = num / Complex{0.0, 2.0 * std::numbers::pi * n};
            if (num == Complex{}) c = Complex{};
            if (taper_ == Taper::cesaro) c *= 1.0 - static_cast<double>(n) / (truncation_ + 1);
            coef_[static_cast<std::size_t>(truncation_ + n)] = c;
            coef_[static_cast<std::size_t>(truncation_ - n)] = std::conj(c);
        }
    }

    int modulus() const { return modulus_; }
    int truncation() const { return truncation_; }
    Taper taper() const { return taper_; }

    Complex coefficient(int n) const {
        if (n < -truncation_ || n > truncation_) return {};
        return coef_[static_cast<std::size_t>(n + truncation_)];
    }

    // sum_n c(n) delta_{h0^n}, so that R_kernel = sum_n c(n) rho(h0)^n.
    ConvKernel kernel(const Word& h0) const {
        ConvKernel k;
        for (int n = -truncation_; n <= truncation_; ++n) k.add(h0.pow(n), coefficient(n));
        return k;
    }

private:
    int modulus_;
    int truncation_;
    Taper taper_;
    std::vector<Complex> coef_;
};

inline L2Vector apply_spectral_projection(const SpectralKernel& k, const CosetStructure& c, const L2Vector& v) {
    return kernel_apply(k.kernel(c.h0()), v);
}

// sum_k phi_i(a_k^{-1} g) conj(phi_j(a_k^{-1} g))
inline Complex character_orthogonality(const CosetStructure& c, int i, int j, const Word& g) {
    Complex s{};
    for (const Word& a : c.representatives()) {
        const Word x = a.inverse() * g;
        s += coset_character(c, i, x) * std::conj(coset_character(c, j, x));
    }
    return s;
}

inline L2Vector char_mult_adjoint(const CosetStructure& c, int j, const L2Vector& v) {
    L2Vector out;
    out.reserve(v.size());
    for (const auto& [g, a] : v.entries()) out.set(g, a * std::conj(coset_character(c, j, g)));
    return out;
}

// sum_k lambda(a_k) u_i u_j^* lambda(a_k)^* v, with the uncompressed multiplication operators.
inline L2Vector coset_average(const CosetStructure& c, int i, int j, const L2Vector& v) {
    L2Vector out;
    for (const Word& a : c.representatives())
        out += lambda_act(a, char_mult(c, i, char_mult_adjoint(c, j, lambda_act(a.inverse(), v))));
    return out;
}

// Conjugates a_k h0 a_k^{-1}; they generate the block of H that meets the translates of the seed.
inline std::vector<Word> conjugate_generators(const CosetStructure& c) {
    std::vector<Word> gens;
    for (const Word& a : c.representatives()) gens.push_back(a * c.h0() * a.inverse());
    return gens;
}

// Words g_{j1}^{e1} ... g_{jm}^{em} in the conjugate generators, m <= depth, 0 < |e| <= exponent,
// consecutive j distinct; returned as distinct elements of F_r in shortlex order.
inline std::vector<Word> conjugate_window(const CosetStructure& c, int depth, int exponent) {
    if (depth < 0 || exponent < 1) throw std::invalid_argument("conjugate window needs depth >= 0, exponent >= 1");
    const auto gens = conjugate_generators(c);
    std::set<Word> out{Word::identity()};
    struct Node {
        Word w;
        int last;
    };
    std::vector<Node> layer{{Word::identity(), -1}};
    for (int d = 1; d <= depth; ++d) {
        std::vector<Node> next;
        for (const Node& n : layer) {
            for (int j = 0; j < static_cast<int>(gens.size()); ++j) {
                if (j == n.last) continue;
                for (int e = -exponent; e <= exponent; ++e) {
                    if (e == 0) continue;
                    Word w = n.w * gens[static_cast<std::size_t>(j)].pow(e);
                    out.insert(w);
                    next.push_back({std::move(w), j});
                }
            }
        }
        layer = std::move(next);
    }
    return {out.begin(), out.end()};
}

enum class SeedKind { identity, cross_coset };

inline std::string to_string(SeedKind s) { return s == SeedKind::identity ? "identity" : "cross_coset"; }

inline SeedKind seed_from_string(const std::string& s) {
    if (s == "identity") return SeedKind::identity;
    if (s == "cross_coset") return SeedKind::cross_coset;
    throw std::invalid_argument("unknown seed '" + s + "'");
}

struct OrthoOptions {
    SeedKind seed = SeedKind::cross_coset;
    int depth = 2;
    int exponent = 12;
    double floor = 1e-8;
    std::size_t matrix_cap = kDefaultMatrixCap;
    int workers = 1;
};

struct OrthoResult {
    KernelImage eta;                // R_{P_M}(zeta)
    std::vector<Word> translates;   // index set of the orthogonalized family
    std::vector<Complex> coefficients;
    double gram_eig_min = 0;
    double gram_eig_max = 0;
    int floored = 0;
    SeedKind seed = SeedKind::cross_coset;
};

class SingularGramError : public std::runtime_error {
public:
    explicit SingularGramError(double eig_min)
        : std::runtime_error("translate Gram singular below floor: eig_min = " + std::to_string(eig_min)),
          eig_min_(eig_min) {}
    double eig_min() const { return eig_min_; }

private:
    double eig_min_;
};

// Unprojected seed: delta_e, or the normalized sum of delta_{a_k} over the coset representatives.
inline L2Vector seed_vector(const CosetStructure& c, SeedKind seed) {
    if (seed == SeedKind::identity) return L2Vector::delta(Word::identity());
    L2Vector s;
    const double w = 1.0 / std::sqrt(static_cast<double>(c.modulus()));
    for (const Word& a : c.representatives()) s.add(a, w);
    return s;
}

// Symmetric orthogonalization of the H-translates of P_M(seed): eta = N^{-1/2} sum_h (G^{-1/2})_{h,e} lambda(h) P_M seed.
inline OrthoResult orthogonalize_translates(const CosetStructure& c, const SpectralKernel& k,
                                            const std::vector<Word>& translates, const OrthoOptions& opt = {}) {
    if (translates.empty()) throw std::invalid_argument("empty translate window");
    const auto centre_it = std::find(translates.begin(), translates.end(), Word::identity());
    if (centre_it == translates.end()) throw std::invalid_argument("translate window must contain e");
    for (const Word& h : translates)
        if (!c.in_subgroup(h)) throw std::invalid_argument("translate " + h.str() + " is not in H");
    const auto centre = static_cast<Eigen::Index>(centre_it - translates.begin());

    const ConvKernel proj = k.kernel(c.h0());
    const L2Vector seed = seed_vector(c, opt.seed);
    const GramReport g = translate_gram(KernelImage{proj, seed}, translates, opt.matrix_cap, opt.workers);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.matrix);
    if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolve failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    if (ev.minCoeff() < opt.floor) throw SingularGramError(ev.minCoeff());

    OrthoResult r;
    r.gram_eig_min = ev.minCoeff();
    r.gram_eig_max = ev.maxCoeff();
    Eigen::VectorXd inv_sqrt(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double lam = std::max(ev(i), opt.floor);
        if (ev(i) < opt.floor) ++r.floored;
        inv_sqrt(i) = 1.0 / std::sqrt(lam);
    }
    const Eigen::MatrixXcd& V = es.eigenvectors();
    const Eigen::VectorXcd column = V * inv_sqrt.asDiagonal() * V.row(centre).adjoint();

    const double scale = 1.0 / std::sqrt(static_cast<double>(c.modulus()));
    L2Vector zeta;
    r.coefficients.resize(translates.size());
    for (std::size_t i = 0; i < translates.size(); ++i) {
        const Complex coef = column(static_cast<Eigen::Index>(i)) * scale;
        r.coefficients[i] = coef;
        for (const auto& [w, a] : seed.entries()) zeta.add(translates[i] * w, coef * a);
    }
    r.translates = translates;
    r.seed = opt.seed;
    r.eta = KernelImage{proj, std::move(zeta)};
    return r;
}

// eta_i = P u_i P eta. P commutes with u_i and with lambda(h), so eta_i = P^2 u_i (eta) keeps the factored shape.
inline KernelImage tuple_member(const CosetStructure& c, const SpectralKernel& k, const KernelImage& eta, int i) {
    const ConvKernel proj = k.kernel(c.h0());
    return {kernel_star(proj, kernel_star(proj, eta.kernel)), char_mult(c, i, eta.base)};
}

inline L2Vector combine_alpha_beta(const L2Vector& eta1, const L2Vector& eta2, Complex alpha, Complex beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
        throw std::invalid_argument("combine_alpha_beta needs |alpha|^2 + |beta|^2 = 1");
    return alpha * eta1 + beta * eta2;
}

// Same combination for two factored vectors sharing their kernel.
inline KernelImage combine_alpha_beta(const KernelImage& eta1, const KernelImage& eta2, Complex alpha, Complex beta) {
    if (!(eta1.kernel == eta2.kernel)) return combine_alpha_beta(eta1.materialize(), eta2.materialize(), alpha, beta);
    return {eta1.kernel, combine_alpha_beta(eta1.base, eta2.base, alpha, beta)};
}

// |(P^2 - P) delta_e|
inline double idempotency_residual(const SpectralKernel& k, const CosetStructure& c) {
    const ConvKernel p = k.kernel(c.h0());
    const L2Vector d = L2Vector::delta(Word::identity());
    L2Vector diff = kernel_apply(kernel_star(p, p), d);
    diff -= kernel_apply(p, d);
    return std::sqrt(diff.norm2());
}

// <P delta_e, delta_e>
inline double trace_estimate(const SpectralKernel& k, const CosetStructure& c) {
    return kernel_apply(k.kernel(c.h0()), L2Vector::delta(Word::identity())).at(Word::identity()).real();
}

struct RefineOptions {
    int interior_radius = 1;
    int max_iterations = 30;
    double tolerance = 1e-12;
};

struct RefineReport {
    std::size_t constraints = 0;
    int iterations = 0;
    double residual_before = 0;
    double residual_after = 0;
    double coefficient_shift = 0;

    nlohmann::json to_json() const {
        return {{"constraints", constraints},
                {"iterations", iterations},
                {"residual_before", residual_before},
                {"residual_after", residual_after},
                {"coefficient_shift", coefficient_shift}};
    }
};

namespace detail {

// zeta and R_{P^2} zeta with point lookup and batched A(d) = <lambda(d) zeta, R_{P^2} zeta>.
class SquaredImage {
public:
    SquaredImage(const ConvKernel& square, const L2Vector& zeta) {
        if (const auto axis = kernel_axis(square, preferred_axis(zeta))) {
            lines_.emplace(*axis, zeta);
            image_lines_.emplace(apply_axis_kernel(square, *lines_));
        } else {
            zeta_ = zeta;
            image_ = kernel_apply(square, zeta);
        }
    }

    Complex image_at(const Word& u) const {
        if (!image_lines_) return image_.at(u);
        const auto [key, m] = split_axis(u, image_lines_->axis());
        const Profile* p = image_lines_->find(key);
        return p ? p->at(m) : Complex{};
    }

    std::vector<Complex> autocorrelation(const std::vector<Word>& ds) const {
        if (lines_) return left_correlation(*lines_, *image_lines_, ds);
        std::vector<Complex> out(ds.size());
        const auto zs = zeta_.sorted();
        for (std::size_t i = 0; i < ds.size(); ++i)
            for (const auto& [s, a] : zs) out[i] += a * std::conj(image_.at(ds[i] * s));
        return out;
    }

private:
    std::optional<LineForm> lines_, image_lines_;
    L2Vector zeta_, image_;
};

}  // namespace detail

// Damped Gauss-Newton (Levenberg-Marquardt) correction of the Lowdin coefficients so that the H-translates of eta
// are exactly orthogonal with norm^2 1/N on H within the interior ball. Minimum-norm steps keep eta close to the
// Lowdin solution; only constraints that are structurally nonzero for the window are imposed.
inline RefineReport refine_interior(const CosetStructure& c, const SpectralKernel& k, OrthoResult& r,
                                    const RefineOptions& opt = {}) {
    const ConvKernel proj = k.kernel(c.h0());
    const ConvKernel square = kernel_star(proj, proj);
    const L2Vector seed = seed_vector(c, SeedKind::cross_coset);
    const auto& seed_entries = seed.sorted();
    const std::size_t n = r.translates.size();
    if (r.coefficients.size() != n) throw std::invalid_argument("refine_interior: malformed orthogonalization");
    if (r.seed != SeedKind::cross_coset) throw std::invalid_argument("refine_interior expects a cross_coset seed");
    const double target = 1.0 / c.modulus();

    auto build = [&](const std::vector<Complex>& cf) {
        L2Vector z;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& [w, a] : seed_entries) z.add(r.translates[i] * w, cf[i] * a);
        return z;
    };

    // A(d^{-1}) = conj A(d): keep one of each pair.
    std::vector<Word> ds;
    {
        const auto inner_h = enumerate_subgroup_ball(c, opt.interior_radius);
        std::unordered_set<Word, WordHash> seen;
        for (const Word& a : inner_h)
            for (const Word& b : inner_h) {
                Word d = a.inverse() * b;
                if (seen.count(d) || seen.count(d.inverse())) continue;
                seen.insert(d);
                ds.push_back(std::move(d));
            }
        std::sort(ds.begin(), ds.end());
        const detail::SquaredImage img(square, r.eta.base);
        const auto a0 = img.autocorrelation(ds);
        std::vector<Word> keep;
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (ds[i].is_identity() || std::abs(a0[i]) > 1e-14) keep.push_back(ds[i]);
        ds = std::move(keep);
    }
    const std::size_t m = ds.size();
    RefineReport rep;
    rep.constraints = m;

    std::vector<Complex> cf = r.coefficients;
    const std::vector<Complex> start = cf;
    auto residual = [&](const detail::SquaredImage& img) {
        const auto a = img.autocorrelation(ds);
        Eigen::VectorXd res(static_cast<Eigen::Index>(2 * m));
        for (std::size_t i = 0; i < m; ++i) {
            const Complex t = a[i] - (ds[i].is_identity() ? target : 0.0);
            res(static_cast<Eigen::Index>(2 * i)) = t.real();
            res(static_cast<Eigen::Index>(2 * i + 1)) = t.imag();
        }
        return res;
    };

    double mu = -1;
    {
        const detail::SquaredImage img(square, build(cf));
        rep.residual_before = residual(img).lpNorm<Eigen::Infinity>();
    }
    rep.residual_after = rep.residual_before;
    for (int it = 0; it < opt.max_iterations && rep.residual_after >= opt.tolerance; ++it) {
        const detail::SquaredImage img(square, build(cf));
        const Eigen::VectorXd res = residual(img);
        const double cost = res.norm();
        // dA(d) = sum_i du_i alpha_i + conj(du_i) conj(beta_i), with alpha on d and beta on d^{-1}.
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(2 * m), static_cast<Eigen::Index>(2 * n));
        for (std::size_t di = 0; di < m; ++di) {
            const Word& d = ds[di];
            const Word dinv = d.inverse();
            for (std::size_t i = 0; i < n; ++i) {
                Complex al{}, be{};
                for (const auto& [w, a] : seed_entries) {
                    const Word u = r.translates[i] * w;
                    al += a * std::conj(img.image_at(d * u));
                    be += a * std::conj(img.image_at(dinv * u));
                }
                const Complex cu = al + std::conj(be);
                const Complex cv = Complex{0, 1} * (al - std::conj(be));
                const auto row = static_cast<Eigen::Index>(2 * di);
                const auto col = static_cast<Eigen::Index>(i);
                jac(row, col) = cu.real();
                jac(row + 1, col) = cu.imag();
                jac(row, col + static_cast<Eigen::Index>(n)) = cv.real();
                jac(row + 1, col + static_cast<Eigen::Index>(n)) = cv.imag();
            }
        }
        const Eigen::MatrixXd jj = jac * jac.transpose();
        if (mu < 0) mu = 1e-6 * jj.diagonal().maxCoeff();
        bool accepted = false;
        for (int tries = 0; tries < 20 && !accepted; ++tries) {
            Eigen::MatrixXd damped = jj;
            damped.diagonal().array() += mu;
            const Eigen::VectorXd step = jac.transpose() * damped.ldlt().solve(-res);
            std::vector<Complex> trial = cf;
            for (std::size_t i = 0; i < n; ++i)
                trial[i] += Complex{step(static_cast<Eigen::Index>(i)), step(static_cast<Eigen::Index>(n + i))};
            const Eigen::VectorXd next = residual(detail::SquaredImage(square, build(trial)));
            if (next.norm() < cost) {
                cf = std::move(trial);
                rep.residual_after = next.lpNorm<Eigen::Infinity>();
                mu = std::max(mu / 4, 1e-15);
                accepted = true;
            } else {
                mu *= 4;
            }
        }
        rep.iterations = it + 1;
        if (!accepted) break;
    }
    double shift = 0;
    for (std::size_t i = 0; i < n; ++i) shift += std::norm(cf[i] - start[i]);
    rep.coefficient_shift = std::sqrt(shift);
    r.coefficients = cf;
    r.eta = KernelImage{proj, build(cf)};
    return rep;
}

// Seeded test vectors P w with w a complex Gaussian on Ball(interior).
inline std::vector<KernelImage> interior_tests(const CosetStructure& c, const SpectralKernel& k, std::uint64_t seed,
                                               int count, int interior_radius) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const ConvKernel proj = k.kernel(c.h0());
    const auto support = ball(c.rank(), interior_radius);
    std::vector<KernelImage> out;
    for (int t = 0; t < count; ++t) {
        L2Vector w;
        for (const Word& g : support) {
            const double re = nd(rng);
            const double im = nd(rng);
            w.add(g, Complex{re, im});
        }
        out.push_back(KernelImage{proj, std::move(w)});
    }
    return out;
}

// max over i != j and the first `count` basis vectors of |sum_k lambda(a_k) u_i u_j^* lambda(a_k)^* delta_g|
inline double coset_average_residual(const CosetStructure& c, std::size_t count) {
    std::vector<Word> basis;
    for (int r = 0; basis.size() < count; ++r) basis = ball(c.rank(), r);
    basis.resize(count);
    double worst = 0;
    for (int i = 0; i < c.modulus(); ++i)
        for (int j = 0; j < c.modulus(); ++j) {
            if (i == j) continue;
            for (const Word& g : basis)
                for (const auto& e : coset_average(c, i, j, L2Vector::delta(g)).entries())
                    worst = std::max(worst, std::abs(e.second));
        }
    return worst;
}

struct TupleOptions {
    OrthoOptions ortho;
    bool refine = true;
    RefineOptions refinement;
    int tests = 20;
    std::uint64_t seed = 1;
    std::size_t basis_checks = 50;
};

struct DisjointTuple {
    KernelImage eta;
    std::vector<KernelImage> members;
    std::vector<double> parseval;        // per member, over the seeded interior tests
    std::vector<double> subgroup_onb;    // per member: max |N G - I| on H within the interior ball
    Eigen::MatrixXd disjointness;        // pairwise, zero diagonal
    double eta_subgroup_onb = 0;
    double eta_norm2 = 0;
    double coset_average = 0;
    std::vector<KernelImage> tests;
    OrthoResult ortho;
    RefineReport refinement;
    nlohmann::json provenance;

    nlohmann::json to_json() const {
        nlohmann::json m = nlohmann::json::array();
        for (std::size_t i = 0; i < members.size(); ++i)
            m.push_back({{"index", i}, {"parseval_residual", parseval[i]}, {"subgroup_onb_residual", subgroup_onb[i]}});
        nlohmann::json dj = nlohmann::json::array();
        for (Eigen::Index i = 0; i < disjointness.rows(); ++i)
            for (Eigen::Index j = i + 1; j < disjointness.cols(); ++j)
                dj.push_back({{"pair", {i, j}}, {"disjointness_residual", disjointness(i, j)}});
        return {{"members", m},
                {"disjointness", dj},
                {"eta",
                 {{"norm2", eta_norm2},
                  {"subgroup_onb_residual", eta_subgroup_onb},
                  {"support_size", eta.base.size()},
                  {"gram_eig_min", ortho.gram_eig_min},
                  {"gram_eig_max", ortho.gram_eig_max},
                  {"translates", ortho.translates.size()}}},
                {"refinement", refinement.to_json()},
                {"coset_average_residual", coset_average},
                {"provenance", provenance}};
    }
};

// max |N <lambda(h') x, lambda(h) x> - delta_{h,h'}| over h, h' in H within the ball
inline double subgroup_onb_residual(const CosetStructure& c, const KernelImage& x, int radius) {
    const auto g = translate_gram(x, enumerate_subgroup_ball(c, radius));
    const Eigen::MatrixXcd dev =
        static_cast<double>(c.modulus()) * g.matrix - Eigen::MatrixXcd::Identity(g.matrix.rows(), g.matrix.cols());
    return dev.cwiseAbs().maxCoeff();
}

inline DisjointTuple build_disjoint_tuple(const CosetStructure& c, const SpectralKernel& k, const TupleOptions& opt = {}) {
    DisjointTuple t;
    const auto window = conjugate_window(c, opt.ortho.depth, opt.ortho.exponent);
    t.ortho = orthogonalize_translates(c, k, window, opt.ortho);
    if (opt.refine) {
        t.refinement = refine_interior(c, k, t.ortho, opt.refinement);
    }
    t.eta = t.ortho.eta;
    const int interior = opt.refinement.interior_radius;
    for (int i = 0; i < c.modulus(); ++i) t.members.push_back(tuple_member(c, k, t.eta, i));
    t.tests = interior_tests(c, k, opt.seed, opt.tests, interior);
    const FrameWindow w = FrameWindow::exact(0, interior);
    const auto nm = static_cast<Eigen::Index>(t.members.size());
    t.disjointness = Eigen::MatrixXd::Zero(nm, nm);
    t.parseval.resize(t.members.size());
    t.subgroup_onb.resize(t.members.size());
    parallel_for(t.members.size(), opt.ortho.workers, [&](std::size_t i) {
        t.parseval[i] = parseval_residual(t.members[i], w, t.tests);
        t.subgroup_onb[i] = subgroup_onb_residual(c, t.members[i], interior);
        for (std::size_t j = i + 1; j < t.members.size(); ++j) {
            const double d = max_disjointness(t.members[i], t.members[j], t.tests, w);
            t.disjointness(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
            t.disjointness(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
        }
    });
    t.eta_subgroup_onb = subgroup_onb_residual(c, t.eta, interior);
    t.eta_norm2 = Autocorrelation(t.eta)(Word::identity()).real();
    t.coset_average = coset_average_residual(c, opt.basis_checks);
    t.provenance = {{"seed_vector", to_string(opt.ortho.seed)},
                    {"translate_window", {{"depth", opt.ortho.depth}, {"exponent", opt.ortho.exponent}}},
                    {"refined", opt.refine},
                    {"interior_radius", interior},
                    {"tests", opt.tests},
                    {"test_seed", opt.seed},
                    {"frame_sums", "exact over G"}};
    return t;
}

}  // namespace framelab
