#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "framelab/frame.hpp"
#include "framelab/l2.hpp"
#include "framelab/parallel.hpp"

namespace framelab {

// Row (u_1, ..., u_N) of commutant kernels; synthesizes sum_i R_{u_i} xi_i.
struct KernelRow {
    std::vector<ConvKernel> entries;

    std::size_t size() const { return entries.size(); }

    static KernelRow scalars(const std::vector<Complex>& values) {
        KernelRow r;
        for (const Complex& a : values) r.entries.push_back(a == Complex{} ? ConvKernel{} : ConvKernel::delta(Word::identity(), a));
        return r;
    }

    static KernelRow shifts(const std::vector<std::pair<Complex, Word>>& values) {
        KernelRow r;
        for (const auto& [a, g] : values) r.entries.push_back(a == Complex{} ? ConvKernel{} : ConvKernel::delta(g, a));
        return r;
    }

    nlohmann::json to_json() const {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& k : entries) out.push_back(framelab::to_json(k));
        return out;
    }

    static KernelRow from_json(const nlohmann::json& j) {
        if (!j.is_array()) throw std::invalid_argument("kernel row must be a JSON array");
        KernelRow r;
        for (const auto& e : j) r.entries.push_back(sparse_from_json<KernelTag>(e));
        return r;
    }
};

inline double max_coefficient(const ConvKernel& k) {
    double m = 0;
    for (const auto& e : k.entries()) m = std::max(m, std::abs(e.second));
    return m;
}

namespace detail {

inline void check_lengths(const KernelRow& u, const KernelRow& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("row length mismatch: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
}

}  // namespace detail

// max |coef(sum_i u_i u_i^* - delta_e)|
inline double verify_row(const KernelRow& row) {
    if (row.entries.empty()) throw std::invalid_argument("verify_row of an empty row");
    ConvKernel s = ConvKernel::delta(Word::identity(), -1.0);
    for (const auto& u : row.entries) s += kernel_star(u, kernel_adjoint(u));
    return max_coefficient(s);
}

// max |coef(sum_i v_i u_i^*)|
inline double rows_disjoint(const KernelRow& u, const KernelRow& v) {
    detail::check_lengths(u, v);
    ConvKernel s;
    for (std::size_t i = 0; i < u.size(); ++i) s += kernel_star(v.entries[i], kernel_adjoint(u.entries[i]));
    return max_coefficient(s);
}

// max over (i, j) of |coef(u_i^* u_j - v_i^* v_j)|
inline double rows_equivalent(const KernelRow& u, const KernelRow& v, int workers = 1) {
    detail::check_lengths(u, v);
    const std::size_t n = u.size();
    std::vector<double> worst(n, 0.0);
    parallel_for(n, workers, [&](std::size_t i) {
        const ConvKernel ui = kernel_adjoint(u.entries[i]);
        const ConvKernel vi = kernel_adjoint(v.entries[i]);
        for (std::size_t j = 0; j < n; ++j)
            worst[i] = std::max(worst[i], max_coefficient(kernel_star(ui, u.entries[j]) - kernel_star(vi, v.entries[j])));
    });
    return n ? *std::max_element(worst.begin(), worst.end()) : 0.0;
}

// sum_i R_{u_i} xi_i. Stays factored when every term carries the same kernel.
inline KernelImage synthesize(const KernelRow& row, const std::vector<KernelImage>& xs) {
    if (row.size() != xs.size())
        throw std::invalid_argument("row length " + std::to_string(row.size()) + " does not match " +
                                    std::to_string(xs.size()) + " vectors");
    std::vector<KernelImage> terms;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!row.entries[i].empty()) terms.push_back(apply(row.entries[i], xs[i]));
    if (terms.empty()) return {};
    const bool shared = std::all_of(terms.begin(), terms.end(), [&](const KernelImage& t) { return t.kernel == terms.front().kernel; });
    if (shared) {
        KernelImage out{terms.front().kernel, {}};
        for (const auto& t : terms) out.base += t.base;
        return out;
    }
    L2Vector sum;
    for (const auto& t : terms) sum += t.materialize();
    return KernelImage{std::move(sum)};
}

struct RowFit {
    KernelRow row;
    double relative_residual = 0;  // |eta - sum_i R_{u_i} xi_i| / |eta|
    std::vector<Word> support;

    nlohmann::json to_json() const {
        nlohmann::json s = nlohmann::json::array();
        for (const Word& w : support) s.push_back(w.str());
        return {{"method", "least-squares fit on a bounded kernel support"},
                {"row", row.to_json()},
                {"relative_residual", relative_residual},
                {"support", s}};
    }
};

// Least-squares kernels u_i supported on `support` with sum_i R_{u_i} xi_i closest to eta.
// Columns rho(s) xi_i; their inner products are right correlations.
inline RowFit fit_row(const KernelImage& eta, const std::vector<KernelImage>& xs, const std::vector<Word>& support) {
    if (xs.empty() || support.empty()) throw std::invalid_argument("fit_row needs vectors and a support");
    const std::size_t ns = support.size();
    const std::size_t n = xs.size() * ns;
    std::vector<Word> diffs;  // s^{-1} t
    for (const Word& s : support)
        for (const Word& t : support) diffs.push_back(s.inverse() * t);
    std::vector<Word> inverses;
    for (const Word& s : support) inverses.push_back(s.inverse());

    Eigen::MatrixXcd g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            // <rho(t) xi_j, rho(s) xi_i> = sum_v conj(xi_i(v)) xi_j(v s^{-1} t)
            const auto vals = detail::right_correlation(xs[i], xs[j], diffs);
            for (std::size_t a = 0; a < ns; ++a)
                for (std::size_t b = 0; b < ns; ++b)
                    g(static_cast<Eigen::Index>(i * ns + a), static_cast<Eigen::Index>(j * ns + b)) = vals[a * ns + b];
        }
        // <eta, rho(s) xi_i> = sum_v conj(xi_i(v)) eta(v s^{-1})
        const auto vals = detail::right_correlation(xs[i], eta, inverses);
        for (std::size_t a = 0; a < ns; ++a) rhs(static_cast<Eigen::Index>(i * ns + a)) = vals[a];
    }
    const Eigen::VectorXcd coef = g.completeOrthogonalDecomposition().solve(rhs);
    const double eta2 = detail::right_correlation(eta, eta, {Word::identity()})[0].real();
    const double err2 = eta2 - 2 * (coef.adjoint() * rhs)(0).real() + (coef.adjoint() * g * coef)(0).real();

    RowFit fit;
    fit.support = support;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ConvKernel k;
        for (std::size_t a = 0; a < ns; ++a) k.add(support[a], coef(static_cast<Eigen::Index>(i * ns + a)));
        fit.row.entries.push_back(std::move(k));
    }
    fit.relative_residual = eta2 > 0 ? std::sqrt(std::max(err2, 0.0) / eta2) : 0.0;
    return fit;
}

}  // namespace framelab
