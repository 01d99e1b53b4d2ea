#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "framelab/coset.hpp"
#include "framelab/word.hpp"

namespace framelab {

using Complex = std::complex<double>;

struct VectorTag {};
struct KernelTag {};

// Finitely supported complex function on F_r. Zero amplitudes are never stored.
template <class Tag>
class SparseFunction {
public:
    using Map = std::unordered_map<Word, Complex, WordHash>;

    SparseFunction() = default;

    static SparseFunction delta(const Word& g, Complex amp = 1.0) {
        SparseFunction f;
        f.add(g, amp);
        return f;
    }

    Complex at(const Word& g) const {
        const auto it = data_.find(g);
        return it == data_.end() ? Complex{} : it->second;
    }

    void add(const Word& g, Complex amp) {
        if (amp == Complex{}) return;
        auto [it, inserted] = data_.try_emplace(g, amp);
        if (!inserted) {
            it->second += amp;
            if (it->second == Complex{}) data_.erase(it);
        }
    }

    void set(const Word& g, Complex amp) {
        if (amp == Complex{})
            data_.erase(g);
        else
            data_[g] = amp;
    }

    const Map& entries() const { return data_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    void reserve(std::size_t n) { data_.reserve(n); }

    // Support in shortlex order; the basis for every deterministic traversal.
    std::vector<std::pair<Word, Complex>> sorted() const {
        std::vector<std::pair<Word, Complex>> out(data_.begin(), data_.end());
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    std::size_t radius() const {
        std::size_t r = 0;
        for (const auto& [w, a] : data_) r = std::max(r, w.length());
        return r;
    }

    double norm2() const {
        double s = 0;
        for (const auto& [w, a] : sorted()) s += std::norm(a);
        return s;
    }

    SparseFunction& operator+=(const SparseFunction& o) {
        for (const auto& [w, a] : o.data_) add(w, a);
        return *this;
    }
    SparseFunction& operator-=(const SparseFunction& o) {
        for (const auto& [w, a] : o.data_) add(w, -a);
        return *this;
    }
    SparseFunction& operator*=(Complex s) {
        if (s == Complex{}) {
            data_.clear();
            return *this;
        }
        for (auto it = data_.begin(); it != data_.end();) {
            it->second *= s;
            if (it->second == Complex{})
                it = data_.erase(it);
            else
                ++it;
        }
        return *this;
    }
    friend SparseFunction operator+(SparseFunction a, const SparseFunction& b) { return a += b; }
    friend SparseFunction operator-(SparseFunction a, const SparseFunction& b) { return a -= b; }
    friend SparseFunction operator*(Complex s, SparseFunction a) { return a *= s; }

    friend bool operator==(const SparseFunction& a, const SparseFunction& b) { return a.data_ == b.data_; }

private:
    Map data_;
};

using L2Vector = SparseFunction<VectorTag>;
// Right-convolution kernel a, acting as R_a = sum_s a(s) rho(s). Models elements of the commutant.
using ConvKernel = SparseFunction<KernelTag>;

inline Complex inner(const L2Vector& v, const L2Vector& w) {
    const bool v_small = v.size() <= w.size();
    const L2Vector& small = v_small ? v : w;
    const L2Vector& large = v_small ? w : v;
    Complex s{};
    for (const auto& [g, a] : small.sorted()) {
        const Complex b = large.at(g);
        if (b != Complex{}) s += v_small ? a * std::conj(b) : b * std::conj(a);
    }
    return s;
}

inline L2Vector lambda_act(const Word& g, const L2Vector& v) {
    L2Vector out;
    out.reserve(v.size());
    for (const auto& [h, a] : v.entries()) out.set(g * h, a);
    return out;
}

inline L2Vector rho_act(const Word& g, const L2Vector& v) {
    const Word gi = g.inverse();
    L2Vector out;
    out.reserve(v.size());
    for (const auto& [h, a] : v.entries()) out.set(h * gi, a);
    return out;
}

// exp(2 pi i numerator / denominator), exact at the quarter turns.
inline Complex root_of_unity(long numerator, long denominator) {
    long r = numerator % denominator;
    if (r < 0) r += denominator;
    if (r == 0) return {1.0, 0.0};
    if (2 * r == denominator) return {-1.0, 0.0};
    if (4 * r == denominator) return {0.0, 1.0};
    if (4 * r == 3 * denominator) return {0.0, -1.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(denominator);
    return {std::cos(angle), std::sin(angle)};
}

// phi_j(g) = exp(2 pi i k j / N) for g in a_k^{-1} H.
inline Complex coset_character(const CosetStructure& c, int j, const Word& g) {
    if (j < 0 || j >= c.modulus()) throw std::out_of_range("character index out of range");
    return root_of_unity(static_cast<long>(c.coset_index(g)) * j, c.modulus());
}

inline L2Vector char_mult(const CosetStructure& c, int j, const L2Vector& v) {
    L2Vector out;
    out.reserve(v.size());
    for (const auto& [g, a] : v.entries()) out.set(g, a * coset_character(c, j, g));
    return out;
}

inline L2Vector kernel_apply(const ConvKernel& a, const L2Vector& v) {
    L2Vector out;
    out.reserve(a.size() * v.size());
    const auto ks = a.sorted();
    const auto vs = v.sorted();
    for (const auto& [s, coef] : ks) {
        const Word si = s.inverse();
        for (const auto& [h, amp] : vs) out.add(h * si, coef * amp);
    }
    return out;
}

inline ConvKernel kernel_star(const ConvKernel& a, const ConvKernel& b) {
    ConvKernel out;
    const auto as = a.sorted();
    const auto bs = b.sorted();
    for (const auto& [t, x] : as)
        for (const auto& [u, y] : bs) out.add(t * u, x * y);
    return out;
}

inline ConvKernel kernel_adjoint(const ConvKernel& a) {
    ConvKernel out;
    out.reserve(a.size());
    for (const auto& [s, x] : a.entries()) out.set(s.inverse(), std::conj(x));
    return out;
}

template <class Tag>
nlohmann::json to_json(const SparseFunction<Tag>& f) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [w, a] : f.sorted()) arr.push_back({{"word", w.str()}, {"re", a.real()}, {"im", a.imag()}});
    return arr;
}

template <class Tag>
SparseFunction<Tag> sparse_from_json(const nlohmann::json& arr, int rank = 0) {
    SparseFunction<Tag> f;
    for (const auto& e : arr)
        f.add(Word::parse(e.at("word").template get<std::string>(), rank),
              Complex{e.at("re").template get<double>(), e.value("im", 0.0)});
    return f;
}

}  // namespace framelab
