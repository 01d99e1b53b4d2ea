#pragma once

#include <algorithm>
#include <complex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "framelab/l2.hpp"
#include "framelab/word.hpp"

namespace framelab {

// Values of a function along one line l<g>: entry i sits at l g^(lo + i).
struct Profile {
    long lo = 0;
    std::vector<Complex> v;

    long hi() const { return lo + static_cast<long>(v.size()); }  // exclusive
    Complex at(long m) const { return m >= lo && m < hi() ? v[static_cast<std::size_t>(m - lo)] : Complex{}; }

    void add(long m, Complex a) {
        if (v.empty()) {
            lo = m;
            v.assign(1, a);
            return;
        }
        if (m < lo) {
            v.insert(v.begin(), static_cast<std::size_t>(lo - m), Complex{});
            lo = m;
        } else if (m >= hi()) {
            v.resize(static_cast<std::size_t>(m - lo + 1), Complex{});
        }
        v[static_cast<std::size_t>(m - lo)] += a;
    }
};

// sum_m a(m) conj(b(m + shift))
inline Complex profile_correlation(const Profile& a, const Profile& b, long shift) {
    const long from = std::max(a.lo, b.lo - shift);
    const long to = std::min(a.hi(), b.hi() - shift);
    Complex s{};
    for (long m = from; m < to; ++m)
        s += a.v[static_cast<std::size_t>(m - a.lo)] * std::conj(b.v[static_cast<std::size_t>(m + shift - b.lo)]);
    return s;
}

// Splits u = key * g^m with key not ending in a g-letter.
inline std::pair<Word, long> split_axis(const Word& u, int axis) {
    const auto& syl = u.syllables();
    if (syl.empty() || syl.back().gen != axis) return {u, 0};
    Word key = Word::identity();
    for (std::size_t i = 0; i + 1 < syl.size(); ++i) key *= Word::generator(syl[i].gen, syl[i].exp);
    return {key, syl.back().exp};
}

// Left cosets of <g> carrying a function: the shape of every pipeline vector R_kernel(base) with kernel on <g>.
class LineForm {
public:
    explicit LineForm(int axis) : axis_(axis) {}

    LineForm(int axis, const L2Vector& v) : axis_(axis) {
        for (const auto& [u, a] : v.sorted()) add(u, a);
    }

    int axis() const { return axis_; }

    void add(const Word& u, Complex a) {
        auto [key, m] = split_axis(u, axis_);
        lines_[key].add(m, a);
    }

    const Profile* find(const Word& key) const {
        const auto it = lines_.find(key);
        return it == lines_.end() ? nullptr : &it->second;
    }

    const std::unordered_map<Word, Profile, WordHash>& lines() const { return lines_; }
    Profile& line(const Word& key) { return lines_[key]; }

    std::vector<const std::pair<const Word, Profile>*> sorted_lines() const {
        std::vector<const std::pair<const Word, Profile>*> out;
        out.reserve(lines_.size());
        for (const auto& e : lines_) out.push_back(&e);
        std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->first < b->first; });
        return out;
    }

    L2Vector to_vector() const {
        L2Vector out;
        for (const auto* e : sorted_lines())
            for (std::size_t i = 0; i < e->second.v.size(); ++i)
                out.add(e->first * Word::generator(axis_, static_cast<int>(e->second.lo + static_cast<long>(i))),
                        e->second.v[i]);
        return out;
    }

private:
    int axis_;
    std::unordered_map<Word, Profile, WordHash> lines_;
};

// Generator g such that every support word of the kernel is a power of g; `fallback` for a multiple of delta_e.
inline std::optional<int> kernel_axis(const ConvKernel& k, int fallback) {
    std::optional<int> axis;
    for (const auto& [s, a] : k.entries()) {
        const auto& syl = s.syllables();
        if (syl.empty()) continue;
        if (syl.size() != 1) return std::nullopt;
        if (axis && *axis != syl[0].gen) return std::nullopt;
        axis = syl[0].gen;
    }
    return axis ? axis : std::optional<int>{fallback};
}

// Generator that most often ends a support word; a good line direction when the kernel does not fix one.
inline int preferred_axis(const L2Vector& v) {
    std::unordered_map<int, std::size_t> count;
    for (const auto& e : v.entries())
        if (!e.first.is_identity()) ++count[e.first.syllables().back().gen];
    int best = 1;
    std::size_t most = 0;
    for (const auto& [g, n] : count)
        if (n > most || (n == most && g < best)) {
            best = g;
            most = n;
        }
    return best;
}

// R_kernel f for a kernel supported on <g>: (R f)(l g^p) = sum_n k(g^n) f(l g^(p + n)).
inline LineForm apply_axis_kernel(const ConvKernel& k, const LineForm& f) {
    std::vector<std::pair<long, Complex>> taps;
    for (const auto& [s, a] : k.sorted()) taps.emplace_back(s.is_identity() ? 0 : s.syllables()[0].exp, a);
    LineForm out(f.axis());
    for (const auto* e : f.sorted_lines()) {
        const Profile& in = e->second;
        long nmin = 0, nmax = 0;
        for (const auto& [n, a] : taps) {
            nmin = std::min(nmin, n);
            nmax = std::max(nmax, n);
        }
        Profile p;
        p.lo = in.lo - nmax;
        p.v.assign(in.v.size() + static_cast<std::size_t>(nmax - nmin), Complex{});
        for (const auto& [n, a] : taps)
            for (std::size_t i = 0; i < in.v.size(); ++i)
                p.v[static_cast<std::size_t>(in.lo + static_cast<long>(i) - n - p.lo)] += a * in.v[i];
        out.line(e->first) = std::move(p);
    }
    return out;
}

// values[i] = sum_s a(s) conj(b(d_i s)) = <lambda(d_i) a, b>
inline std::vector<Complex> left_correlation(const LineForm& a, const LineForm& b, const std::vector<Word>& ds) {
    const int axis = a.axis();
    std::vector<Complex> out(ds.size());
    std::unordered_map<Word, std::size_t, WordHash> index;
    std::size_t maxlen = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        index.emplace(ds[i], i);
        maxlen = std::max(maxlen, ds[i].length());
    }
    // d l g^m = l' g^(m + j), j != 0: d = l' g^j l^{-1} with g^j a syllable of d.
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& syl = ds[i].syllables();
        for (std::size_t p = 0; p < syl.size(); ++p) {
            if (syl[p].gen != axis) continue;
            Word prefix, suffix;
            for (std::size_t q = 0; q < p; ++q) prefix *= Word::generator(syl[q].gen, syl[q].exp);
            for (std::size_t q = p + 1; q < syl.size(); ++q) suffix *= Word::generator(syl[q].gen, syl[q].exp);
            const Profile* pa = a.find(suffix.inverse());
            const Profile* pb = pa ? b.find(prefix) : nullptr;
            if (pb) out[i] += profile_correlation(*pa, *pb, syl[p].exp);
        }
    }
    // j = 0: d l = l' exactly.
    const auto la = a.sorted_lines();
    const auto lb = b.sorted_lines();
    for (const auto* ea : la) {
        const Word inv = ea->first.inverse();
        const std::size_t len_a = ea->first.length();
        for (const auto* eb : lb) {
            const std::size_t len_b = eb->first.length();
            if ((len_a > len_b ? len_a - len_b : len_b - len_a) > maxlen) continue;
            const auto it = index.find(eb->first * inv);
            if (it != index.end()) out[it->second] += profile_correlation(ea->second, eb->second, 0);
        }
    }
    return out;
}

// A family of functions a_t stored line by line: a_t(K g^m) = profile->at(m - shift) for each entry under key K.
struct TaggedLine {
    std::size_t tag;
    const Profile* profile;
    long shift;
};
using TaggedLines = std::unordered_map<Word, std::vector<TaggedLine>, WordHash>;

inline TaggedLines tag_lines(const LineForm& a) {
    TaggedLines out;
    for (const auto& [key, p] : a.lines()) out[key].push_back({0, &p, 0});
    return out;
}

// Lines of the translates lambda(g_t) psi, t = 0..gs.size()-1; profiles point into psi.
inline TaggedLines translate_lines(const LineForm& psi, const std::vector<Word>& gs) {
    TaggedLines out;
    const auto ls = psi.sorted_lines();
    for (std::size_t t = 0; t < gs.size(); ++t)
        for (const auto* e : ls) {
            auto [key, shift] = split_axis(gs[t] * e->first, psi.axis());
            out[key].push_back({t, &e->second, shift});
        }
    return out;
}

// out[t * hs.size() + i] = sum_u conj(a_t(u)) b(u h_i)
inline std::vector<Complex> right_correlation(const TaggedLines& a, std::size_t tags, const LineForm& b,
                                              const std::vector<Word>& hs) {
    const int axis = b.axis();
    const std::size_t nh = hs.size();
    std::vector<Complex> out(tags * nh);
    struct Shape {
        std::size_t index;
        long lead;  // h = g^lead * core * g^trail
        long trail;
    };
    std::unordered_map<Word, std::vector<Shape>, WordHash> by_core;
    std::vector<Shape> powers;
    for (std::size_t i = 0; i < nh; ++i) {
        const auto& syl = hs[i].syllables();
        std::size_t first = 0, last = syl.size();
        long lead = 0, trail = 0;
        if (first < last && syl[first].gen == axis) lead = syl[first++].exp;
        if (first < last && syl[last - 1].gen == axis) trail = syl[--last].exp;
        Word core;
        for (std::size_t q = first; q < last; ++q) core *= Word::generator(syl[q].gen, syl[q].exp);
        if (core.is_identity())
            powers.push_back({i, lead, 0});
        else
            by_core[core].push_back({i, lead, trail});
    }
    // h = g^lead: same line.
    if (!powers.empty())
        for (const auto& [key, entries] : a) {
            const Profile* pb = b.find(key);
            if (!pb) continue;
            for (const TaggedLine& e : entries)
                for (const Shape& s : powers)
                    out[e.tag * nh + s.index] += std::conj(profile_correlation(*e.profile, *pb, e.shift + s.lead));
        }
    if (by_core.empty()) return out;

    // u = K g^m, u h = K g^(m + lead) core g^trail.
    // m + lead = r != 0: the target line is K g^r core.
    for (const auto& [kb, pb] : b.lines()) {
        const auto& syl = kb.syllables();
        for (const auto& [core, shapes] : by_core) {
            const auto& cs = core.syllables();
            if (cs.size() + 1 > syl.size()) continue;
            const std::size_t start = syl.size() - cs.size();
            bool match = true;
            for (std::size_t q = 0; q < cs.size() && match; ++q) match = syl[start + q] == cs[q];
            if (!match || syl[start - 1].gen != axis) continue;
            Word ka;
            for (std::size_t q = 0; q + 1 < start; ++q) ka *= Word::generator(syl[q].gen, syl[q].exp);
            const auto it = a.find(ka);
            if (it == a.end()) continue;
            const long r = syl[start - 1].exp;
            for (const TaggedLine& e : it->second)
                for (const Shape& s : shapes)
                    out[e.tag * nh + s.index] += std::conj(e.profile->at(r - s.lead - e.shift)) * pb.at(s.trail);
        }
    }
    // m + lead == 0: u h = K core g^trail, with possible cancellation inside K core.
    for (const auto& [ka, entries] : a) {
        for (const auto& [core, shapes] : by_core) {
            auto [kb, t] = split_axis(ka * core, axis);
            const Profile* pb = b.find(kb);
            if (!pb) continue;
            for (const TaggedLine& e : entries)
                for (const Shape& s : shapes)
                    out[e.tag * nh + s.index] += std::conj(e.profile->at(-s.lead - e.shift)) * pb->at(t + s.trail);
        }
    }
    return out;
}

// values[i] = sum_u conj(a(u)) b(u h_i)
inline std::vector<Complex> right_correlation(const LineForm& a, const LineForm& b, const std::vector<Word>& hs) {
    return right_correlation(tag_lines(a), 1, b, hs);
}

}  // namespace framelab
