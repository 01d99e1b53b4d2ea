#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "framelab/l2.hpp"
#include "framelab/lines.hpp"
#include "framelab/parallel.hpp"

namespace framelab {

// The vector R_kernel(base). Pipeline vectors keep this factored shape so that frame sums can move the
// kernel onto the (small) test vector instead of materializing a large support.
struct KernelImage {
    ConvKernel kernel = ConvKernel::delta(Word::identity());
    L2Vector base;

    KernelImage() = default;
    KernelImage(L2Vector v) : base(std::move(v)) {}  // NOLINT(google-explicit-constructor)
    KernelImage(ConvKernel k, L2Vector b) : kernel(std::move(k)), base(std::move(b)) {}

    L2Vector materialize() const {
        if (kernel.size() == 1) return kernel_apply(kernel, base);
        if (const auto axis = kernel_axis(kernel, 1)) return apply_axis_kernel(kernel, LineForm(*axis, base)).to_vector();
        return kernel_apply(kernel, base);
    }
};

inline KernelImage apply(const ConvKernel& a, const KernelImage& v) { return {kernel_star(a, v.kernel), v.base}; }

struct FrameWindow {
    std::vector<Word> index_set;  // empty: every g with a nonzero coefficient
    int index_radius = -1;        // -1: unbounded
    int support_radius = 0;
    int interior_radius = 0;

    static FrameWindow exact(int support_radius, int interior_radius) {
        return {{}, -1, support_radius, interior_radius};
    }
    static FrameWindow radius(int index_radius, int support_radius, int interior_radius) {
        return {{}, index_radius, support_radius, interior_radius};
    }
    static FrameWindow explicit_set(std::vector<Word> words, int support_radius, int interior_radius) {
        int r = 0;
        for (const Word& w : words) r = std::max(r, static_cast<int>(w.length()));
        return {std::move(words), r, support_radius, interior_radius};
    }

    bool bounded() const { return index_radius >= 0; }

    void validate() const {
        if (bounded() && interior_radius + support_radius > index_radius)
            throw std::invalid_argument("window inequality violated: interior + support > index radius");
    }

    bool contains(const Word& g) const {
        if (!index_set.empty()) return std::find(index_set.begin(), index_set.end(), g) != index_set.end();
        return !bounded() || static_cast<int>(g.length()) <= index_radius;
    }

    nlohmann::json to_json() const {
        return {{"index_radius", bounded() ? nlohmann::json(index_radius) : nlohmann::json("exact")},
                {"index_count", index_set.size()},
                {"support_radius", support_radius},
                {"interior_radius", interior_radius}};
    }
};

using CoefficientTable = std::vector<std::pair<Word, Complex>>;

namespace detail {

// Map g -> <v, lambda(g) eta> from all pairs s in supp v, t in supp eta with g = s t^{-1}.
inline std::unordered_map<Word, Complex, WordHash> pair_coefficients(const L2Vector& v, const L2Vector& eta) {
    std::unordered_map<Word, Complex, WordHash> out;
    out.reserve(v.size() * eta.size());
    const auto vs = v.sorted();
    std::vector<std::pair<Word, Complex>> ts;
    ts.reserve(eta.size());
    for (const auto& [t, b] : eta.sorted()) ts.emplace_back(t.inverse(), std::conj(b));
    for (const auto& [s, a] : vs)
        for (const auto& [ti, bc] : ts) out[s * ti] += a * bc;
    return out;
}

inline L2Vector pull_kernel(const KernelImage& test, const KernelImage& eta) {
    // <R_a w, lambda(g) R_q b> = <R_{q* a} w, lambda(g) b>
    return kernel_apply(kernel_star(kernel_adjoint(eta.kernel), test.kernel), test.base);
}

}  // namespace detail

inline CoefficientTable analysis_coeffs(const KernelImage& v, const KernelImage& eta, const FrameWindow& w) {
    const auto coeffs = detail::pair_coefficients(detail::pull_kernel(v, eta), eta.base);
    CoefficientTable out;
    if (!w.index_set.empty()) {
        out.reserve(w.index_set.size());
        for (const Word& g : w.index_set) {
            const auto it = coeffs.find(g);
            out.emplace_back(g, it == coeffs.end() ? Complex{} : it->second);
        }
        return out;
    }
    for (const auto& [g, c] : coeffs)
        if (w.contains(g)) out.emplace_back(g, c);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

inline double coefficient_energy(const CoefficientTable& t) {
    double s = 0;
    for (const auto& [g, c] : t) s += std::norm(c);
    return s;
}

inline void check_interior(const KernelImage& v, const FrameWindow& w) {
    w.validate();
    if (w.bounded() && static_cast<int>(v.materialize().radius()) > w.interior_radius)
        throw std::invalid_argument("test vector leaves the window interior");
}

namespace detail {

// values[i] = sum_u conj(x(u)) y(u h_i), with x = R_p(base) given in factored form.
inline std::vector<Complex> right_correlation(const KernelImage& x, const KernelImage& y, const std::vector<Word>& hs) {
    const auto ax = kernel_axis(x.kernel, -1);
    const auto ay = kernel_axis(y.kernel, -1);
    if (ax && ay && (*ax == *ay || *ax < 0 || *ay < 0)) {
        const int axis = std::max({*ax, *ay}) > 0 ? std::max({*ax, *ay}) : preferred_axis(x.base);
        return framelab::right_correlation(apply_axis_kernel(x.kernel, LineForm(axis, x.base)),
                                           apply_axis_kernel(y.kernel, LineForm(axis, y.base)), hs);
    }
    const L2Vector xs = x.materialize(), ys = y.materialize();
    const auto xsorted = xs.sorted();
    std::vector<Complex> out(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i)
        for (const auto& [u, a] : xsorted) out[i] += std::conj(a) * ys.at(u * hs[i]);
    return out;
}

// out(p, q) = sum_g <R_a w1_p, lambda(g) eta> conj(<R_b w2_q, lambda(g) zeta>) over all of G, as
// sum_{s,s'} w1_p(s) conj(w2_q(s')) B(s^{-1} s') with B the right correlation of the pulled vectors.
// Tests on each side must share their kernel.
inline Eigen::MatrixXcd full_pairing_matrix(const std::vector<KernelImage>& v1, const KernelImage& eta,
                                            const std::vector<KernelImage>& v2, const KernelImage& zeta) {
    for (const auto* side : {&v1, &v2})
        for (const auto& v : *side)
            if (!(v.kernel == side->front().kernel)) throw std::invalid_argument("test vectors must share a kernel");
    const KernelImage x{kernel_star(kernel_adjoint(v1.front().kernel), eta.kernel), eta.base};
    const KernelImage y{kernel_star(kernel_adjoint(v2.front().kernel), zeta.kernel), zeta.base};
    std::vector<std::vector<std::pair<Word, Complex>>> w1, w2;
    for (const auto& v : v1) w1.push_back(v.base.sorted());
    for (const auto& v : v2) w2.push_back(v.base.sorted());
    std::unordered_map<Word, std::size_t, WordHash> slot;
    std::vector<Word> hs;
    auto id = [&](const Word& h) {
        const auto [it, fresh] = slot.try_emplace(h, hs.size());
        if (fresh) hs.push_back(h);
        return it->second;
    };
    std::vector<Word> left, right;
    {
        std::set<Word> l, r;
        for (const auto& w : w1)
            for (const auto& e : w) l.insert(e.first);
        for (const auto& w : w2)
            for (const auto& e : w) r.insert(e.first);
        left.assign(l.begin(), l.end());
        right.assign(r.begin(), r.end());
    }
    std::map<std::pair<Word, Word>, std::size_t> pair_slot;
    for (const Word& s : left) {
        const Word si = s.inverse();
        for (const Word& t : right) pair_slot.emplace(std::make_pair(s, t), id(si * t));
    }
    const auto vals = right_correlation(x, y, hs);
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(v1.size()), static_cast<Eigen::Index>(v2.size()));
    for (std::size_t p = 0; p < w1.size(); ++p)
        for (std::size_t q = 0; q < w2.size(); ++q) {
            Complex sum{};
            for (const auto& [s, a] : w1[p])
                for (const auto& [t, b] : w2[q]) sum += a * std::conj(b) * vals[pair_slot.at({s, t})];
            out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = sum;
        }
    return out;
}

inline Complex full_frame_pairing(const KernelImage& v1, const KernelImage& eta, const KernelImage& v2,
                                  const KernelImage& zeta) {
    return full_pairing_matrix({v1}, eta, {v2}, zeta)(0, 0);
}

inline bool shared_kernel(const std::vector<KernelImage>& vs) {
    for (const auto& v : vs)
        if (!(v.kernel == vs.front().kernel)) return false;
    return true;
}

inline bool is_full(const FrameWindow& w) { return !w.bounded() && w.index_set.empty(); }

}  // namespace detail

// max over tests of | sum_W |<v, lambda(g) eta>|^2 - |v|^2 | / |v|^2
inline double parseval_residual(const KernelImage& eta, const FrameWindow& w, const std::vector<KernelImage>& tests) {
    if (tests.empty()) throw std::invalid_argument("parseval_residual needs at least one test vector");
    for (const auto& v : tests) check_interior(v, w);
    Eigen::MatrixXcd batch;
    const bool batched = detail::is_full(w) && detail::shared_kernel(tests);
    if (batched) batch = detail::full_pairing_matrix(tests, eta, tests, eta);
    double worst = 0;
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const auto& v = tests[i];
        const double nv = v.materialize().norm2();
        if (nv == 0) continue;
        double e = 0;
        if (batched)
            e = batch(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        else if (detail::is_full(w))
            e = detail::full_frame_pairing(v, eta, v, eta).real();
        else
            e = coefficient_energy(analysis_coeffs(v, eta, w));
        worst = std::max(worst, std::abs(e - nv) / nv);
    }
    return worst;
}

// | sum_W <v1, lambda(g) eta> conj(<v2, lambda(g) zeta>) | / (|v1| |v2|)
inline double disjointness_residual(const KernelImage& eta, const KernelImage& zeta, const KernelImage& v1,
                                    const KernelImage& v2, const FrameWindow& w) {
    check_interior(v1, w);
    check_interior(v2, w);
    const double n = std::sqrt(v1.materialize().norm2() * v2.materialize().norm2());
    if (n == 0) return 0;
    if (detail::is_full(w)) return std::abs(detail::full_frame_pairing(v1, eta, v2, zeta)) / n;
    const auto c1 = analysis_coeffs(v1, eta, w);
    const auto c2 = analysis_coeffs(v2, zeta, w);
    std::unordered_map<Word, Complex, WordHash> m2(c2.begin(), c2.end());
    Complex s{};
    for (const auto& [g, a] : c1) {
        const auto it = m2.find(g);
        if (it != m2.end()) s += a * std::conj(it->second);
    }
    return std::abs(s) / n;
}

// max over test pairs (v1, v2) of disjointness_residual(eta, zeta, v1, v2, W)
inline double max_disjointness(const KernelImage& eta, const KernelImage& zeta, const std::vector<KernelImage>& tests,
                               const FrameWindow& w) {
    if (tests.empty()) throw std::invalid_argument("max_disjointness needs at least one test vector");
    if (!detail::is_full(w) || !detail::shared_kernel(tests)) {
        double worst = 0;
        for (const auto& a : tests)
            for (const auto& b : tests) worst = std::max(worst, disjointness_residual(eta, zeta, a, b, w));
        return worst;
    }
    for (const auto& v : tests) check_interior(v, w);
    std::vector<double> norms;
    for (const auto& v : tests) norms.push_back(std::sqrt(v.materialize().norm2()));
    const Eigen::MatrixXcd m = detail::full_pairing_matrix(tests, eta, tests, zeta);
    double worst = 0;
    for (Eigen::Index p = 0; p < m.rows(); ++p)
        for (Eigen::Index q = 0; q < m.cols(); ++q) {
            const double n = norms[static_cast<std::size_t>(p)] * norms[static_cast<std::size_t>(q)];
            if (n > 0) worst = std::max(worst, std::abs(m(p, q)) / n);
        }
    return worst;
}

// d -> <lambda(d) eta, eta>, memoized. Gram entries of translate families are values of this function.
class Autocorrelation {
public:
    explicit Autocorrelation(const KernelImage& eta) {
        const ConvKernel square = kernel_star(kernel_adjoint(eta.kernel), eta.kernel);
        if (const auto axis = kernel_axis(square, preferred_axis(eta.base))) {
            lines_base_.emplace(*axis, eta.base);
            lines_image_.emplace(apply_axis_kernel(square, *lines_base_));
        } else {
            base_ = eta.base.sorted();
            image_ = kernel_apply(square, eta.base);
        }
    }

    Complex operator()(const Word& d) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            const auto it = cache_.find(d);
            if (it != cache_.end()) return it->second;
        }
        const Complex s = evaluate(d);
        std::lock_guard<std::mutex> lock(mu_);
        cache_.emplace(d, s);
        return s;
    }

    // Evaluates a batch at once; on the line path this avoids a pass over the support per word.
    void prefetch(const std::vector<Word>& ds) const {
        std::vector<Word> todo;
        {
            std::lock_guard<std::mutex> lock(mu_);
            std::unordered_set<Word, WordHash> seen;
            for (const Word& d : ds)
                if (!cache_.count(d) && seen.insert(d).second) todo.push_back(d);
        }
        if (todo.empty()) return;
        std::vector<Complex> vals(todo.size());
        if (lines_base_) {
            vals = left_correlation(*lines_base_, *lines_image_, todo);
        } else {
            for (std::size_t i = 0; i < todo.size(); ++i) vals[i] = evaluate(todo[i]);
        }
        std::lock_guard<std::mutex> lock(mu_);
        for (std::size_t i = 0; i < todo.size(); ++i) cache_.emplace(todo[i], vals[i]);
    }

private:
    Complex evaluate(const Word& d) const {
        Complex s{};
        if (lines_base_) {
            // d l g^m = l' g^(m + t)
            for (const auto& [key, pa] : lines_base_->lines()) {
                const auto [target, t] = split_axis(d * key, lines_base_->axis());
                if (const Profile* pb = lines_image_->find(target)) s += profile_correlation(pa, *pb, t);
            }
            return s;
        }
        // <lambda(d) b, R_{q* q} b> = sum_s b(s) conj((R_{q*q} b)(d s))
        for (const auto& [w, a] : base_) {
            const Complex c = image_.at(d * w);
            if (c != Complex{}) s += a * std::conj(c);
        }
        return s;
    }

    std::optional<LineForm> lines_base_, lines_image_;
    std::vector<std::pair<Word, Complex>> base_;
    L2Vector image_;
    mutable std::mutex mu_;
    mutable std::unordered_map<Word, Complex, WordHash> cache_;
};

struct GramReport {
    Eigen::MatrixXcd matrix;
    double eig_min = 0;
    double eig_max = 0;
    FrameWindow window;
    std::map<std::string, double> residuals;

    nlohmann::json to_json() const {
        nlohmann::json r = nlohmann::json::object();
        for (const auto& [k, v] : residuals) r[k] = v;
        return {{"eig_min", eig_min}, {"eig_max", eig_max}, {"residuals", r}, {"window", window.to_json()}};
    }

    // One row per matrix row, real and imaginary parts interleaved.
    std::string to_csv() const {
        std::ostringstream out;
        out << std::setprecision(17);
        for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
            for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
                if (j) out << ',';
                out << matrix(i, j).real() << ',' << matrix(i, j).imag();
            }
            out << '\n';
        }
        return out.str();
    }

    void write_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << to_csv();
    }
};

inline constexpr std::size_t kDefaultMatrixCap = 4096;

inline void spectral_bounds(GramReport& r) {
    if (r.matrix.rows() == 0) {
        r.eig_min = r.eig_max = 0;
        return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.matrix, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolve failed");
    r.eig_min = es.eigenvalues().minCoeff();
    r.eig_max = es.eigenvalues().maxCoeff();
}

inline void check_cap(std::size_t n, std::size_t cap) {
    if (n > cap)
        throw std::length_error("Gram dimension " + std::to_string(n) + " exceeds matrix cap " + std::to_string(cap));
}

// matrix(i, j) = <f_j, f_i>
inline GramReport gram(const std::vector<L2Vector>& family, std::size_t cap = kDefaultMatrixCap, int workers = 1) {
    if (family.empty()) throw std::invalid_argument("gram of an empty family");
    check_cap(family.size(), cap);
    const auto n = static_cast<Eigen::Index>(family.size());
    GramReport r;
    r.matrix.resize(n, n);
    parallel_for(family.size(), workers, [&](std::size_t i) {
        for (std::size_t j = i; j < family.size(); ++j) {
            const Complex v = inner(family[j], family[i]);
            r.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            r.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(v);
        }
    });
    for (Eigen::Index i = 0; i < n; ++i) r.matrix(i, i) = r.matrix(i, i).real();
    spectral_bounds(r);
    return r;
}

// Gram of the translate family {lambda(g) eta : g in index}.
inline GramReport translate_gram(const Autocorrelation& acf, const std::vector<Word>& index,
                                 std::size_t cap = kDefaultMatrixCap, int workers = 1) {
    if (index.empty()) throw std::invalid_argument("gram of an empty family");
    check_cap(index.size(), cap);
    const auto n = static_cast<Eigen::Index>(index.size());
    std::vector<Word> inverses;
    inverses.reserve(index.size());
    for (const Word& g : index) inverses.push_back(g.inverse());
    std::vector<Word> diffs;
    for (std::size_t i = 0; i < index.size(); ++i)
        for (std::size_t j = i; j < index.size(); ++j) diffs.push_back(inverses[i] * index[j]);
    acf.prefetch(diffs);
    GramReport r;
    r.matrix.resize(n, n);
    parallel_for(index.size(), workers, [&](std::size_t i) {
        for (std::size_t j = i; j < index.size(); ++j) {
            // <lambda(g_j) eta, lambda(g_i) eta> = A(g_i^{-1} g_j)
            const Complex v = acf(inverses[i] * index[j]);
            r.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            r.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(v);
        }
    });
    for (Eigen::Index i = 0; i < n; ++i) r.matrix(i, i) = r.matrix(i, i).real();
    spectral_bounds(r);
    return r;
}

inline GramReport translate_gram(const KernelImage& eta, const std::vector<Word>& index,
                                 std::size_t cap = kDefaultMatrixCap, int workers = 1) {
    return translate_gram(Autocorrelation(eta), index, cap, workers);
}

// Largest entry difference between the translate Grams of eta and zeta over W.
inline double equivalence_residual(const KernelImage& eta, const KernelImage& zeta, const FrameWindow& w) {
    if (w.index_set.empty()) throw std::invalid_argument("equivalence_residual needs an explicit index set");
    const Autocorrelation a(eta), b(zeta);
    std::unordered_set<Word, WordHash> seen;
    std::vector<Word> diffs;
    for (const Word& gi : w.index_set) {
        const Word gi_inv = gi.inverse();
        for (const Word& gj : w.index_set) {
            Word d = gi_inv * gj;
            if (seen.insert(d).second) diffs.push_back(std::move(d));
        }
    }
    a.prefetch(diffs);
    b.prefetch(diffs);
    double worst = 0;
    for (const Word& d : diffs) worst = std::max(worst, std::abs(a(d) - b(d)));
    return worst;
}

// max over kernel pairs (a, b) of |<R_a eta, R_b zeta>|
inline double commutant_orbit_orthogonality(const L2Vector& eta, const L2Vector& zeta,
                                            const std::vector<ConvKernel>& kernels) {
    double worst = 0;
    std::vector<L2Vector> left, right;
    for (const auto& k : kernels) {
        left.push_back(kernel_apply(k, eta));
        right.push_back(kernel_apply(k, zeta));
    }
    for (const auto& l : left)
        for (const auto& r : right) worst = std::max(worst, std::abs(inner(l, r)));
    return worst;
}

}  // namespace framelab
