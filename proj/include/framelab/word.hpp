#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace framelab {

// Letter of the free group alphabet: generator index in 1..r and a sign.
struct Letter {
    int gen;
    int sign;
    friend bool operator==(const Letter&, const Letter&) = default;
};

// Generator letters used when words are written as text. 'e' is reserved for the identity.
inline constexpr std::string_view kAlphabet = "xyzwvutsrqponmlkjihgfdcba";
inline constexpr int kMaxRank = static_cast<int>(kAlphabet.size());

class Word {
public:
    // Maximal run of a single generator: gen^exp with exp != 0.
    struct Syllable {
        int32_t gen;
        int32_t exp;
        friend bool operator==(const Syllable&, const Syllable&) = default;
    };

    Word() = default;

    static Word identity() { return {}; }

    static Word generator(int gen, int exp = 1) {
        Word w;
        if (exp != 0) {
            w.syl_.push_back({gen, exp});
            w.len_ = static_cast<std::size_t>(std::abs(exp));
        }
        return w;
    }

    // Freely reduces an arbitrary letter sequence. rank <= 0 skips the range check.
    static Word reduce(const std::vector<Letter>& letters, int rank = 0) {
        Word w;
        for (const Letter& l : letters) {
            if (l.gen < 1 || (rank > 0 && l.gen > rank))
                throw std::out_of_range("generator index " + std::to_string(l.gen) + " out of range");
            if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("letter sign must be +1 or -1");
            w.push_run(l.gen, l.sign);
        }
        return w;
    }

    static Word parse(std::string_view text, int rank = 0) {
        if (text == "e") return {};
        std::vector<Letter> letters;
        letters.reserve(text.size());
        for (char ch : text) {
            const bool upper = ch >= 'A' && ch <= 'Z';
            const char lower = upper ? static_cast<char>(ch - 'A' + 'a') : ch;
            const auto pos = kAlphabet.find(lower);
            if (pos == std::string_view::npos) throw std::invalid_argument(std::string("bad word letter '") + ch + "'");
            letters.push_back({static_cast<int>(pos) + 1, upper ? -1 : 1});
        }
        return reduce(letters, rank);
    }

    std::string str() const {
        if (syl_.empty()) return "e";
        std::string out;
        out.reserve(len_);
        for (const auto& s : syl_) {
            char ch = kAlphabet.at(static_cast<std::size_t>(s.gen - 1));
            if (s.exp < 0) ch = static_cast<char>(ch - 'a' + 'A');
            out.append(static_cast<std::size_t>(std::abs(s.exp)), ch);
        }
        return out;
    }

    std::vector<Letter> letters() const {
        std::vector<Letter> out;
        out.reserve(len_);
        for (const auto& s : syl_)
            for (int i = 0; i < std::abs(s.exp); ++i) out.push_back({s.gen, s.exp > 0 ? 1 : -1});
        return out;
    }

    using Syllables = boost::container::small_vector<Syllable, 6>;

    const Syllables& syllables() const { return syl_; }
    std::size_t length() const { return len_; }
    bool is_identity() const { return syl_.empty(); }

    // Exponent sum of generator gen.
    long exponent_sum(int gen) const {
        long s = 0;
        for (const auto& y : syl_)
            if (y.gen == gen) s += y.exp;
        return s;
    }

    Word inverse() const {
        Word w;
        w.syl_.reserve(syl_.size());
        for (auto it = syl_.rbegin(); it != syl_.rend(); ++it) w.syl_.push_back({it->gen, -it->exp});
        w.len_ = len_;
        return w;
    }

    Word pow(long n) const {
        if (n == 0 || syl_.empty()) return {};
        const Word base = n > 0 ? *this : inverse();
        Word acc;
        for (long i = 0; i < std::labs(n); ++i) acc *= base;
        return acc;
    }

    Word& operator*=(const Word& rhs) {
        for (const auto& s : rhs.syl_) push_run(s.gen, s.exp);
        return *this;
    }

    friend Word operator*(Word lhs, const Word& rhs) { return lhs *= rhs; }

    friend bool operator==(const Word& a, const Word& b) { return a.syl_ == b.syl_; }

    // Shortlex order: length first, then letters compared by (generator, positive before inverse).
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
        if (a.len_ != b.len_) return a.len_ <=> b.len_;
        std::size_t i = 0, j = 0;
        int32_t ra = 0, rb = 0;  // letters consumed inside current syllables
        while (i < a.syl_.size() && j < b.syl_.size()) {
            const auto& sa = a.syl_[i];
            const auto& sb = b.syl_[j];
            const int ka = 2 * sa.gen + (sa.exp < 0);
            const int kb = 2 * sb.gen + (sb.exp < 0);
            if (ka != kb) return ka <=> kb;
            const int32_t la = std::abs(sa.exp) - ra;
            const int32_t lb = std::abs(sb.exp) - rb;
            const int32_t step = la < lb ? la : lb;
            ra += step;
            rb += step;
            if (ra == std::abs(sa.exp)) { ++i; ra = 0; }
            if (rb == std::abs(sb.exp)) { ++j; rb = 0; }
        }
        return std::strong_ordering::equal;
    }

    std::size_t hash() const {
        uint64_t h = 0x9e3779b97f4a7c15ull ^ syl_.size();
        for (const auto& s : syl_) {
            uint64_t k = (static_cast<uint64_t>(static_cast<uint32_t>(s.gen)) << 32) ^ static_cast<uint32_t>(s.exp);
            k *= 0xff51afd7ed558ccdull;
            k ^= k >> 33;
            h ^= k + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        h ^= h >> 29;
        h *= 0xc4ceb9fe1a85ec53ull;
        h ^= h >> 32;
        return static_cast<std::size_t>(h);
    }

private:
    void push_run(int gen, int exp) {
        if (!syl_.empty() && syl_.back().gen == gen) {
            auto& last = syl_.back();
            const int merged = last.exp + exp;
            len_ -= static_cast<std::size_t>(std::abs(last.exp));
            if (merged == 0) {
                syl_.pop_back();
            } else {
                last.exp = merged;
                len_ += static_cast<std::size_t>(std::abs(merged));
            }
            return;
        }
        syl_.push_back({gen, exp});
        len_ += static_cast<std::size_t>(std::abs(exp));
    }

    Syllables syl_;
    std::size_t len_ = 0;
};

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept { return w.hash(); }
};

inline Word reduce(const std::vector<Letter>& letters, int rank = 0) { return Word::reduce(letters, rank); }
inline Word mul(const Word& a, const Word& b) { return a * b; }
inline Word inv(const Word& a) { return a.inverse(); }

// All reduced words of length <= radius over rank generators, in shortlex order.
inline std::vector<Word> ball(int rank, int radius) {
    if (rank < 1) throw std::invalid_argument("rank must be positive");
    if (radius < 0) throw std::invalid_argument("radius must be non-negative");
    std::vector<Word> out{Word::identity()};
    std::vector<Word> shell{Word::identity()};
    for (int len = 1; len <= radius; ++len) {
        std::vector<Word> next;
        for (const Word& w : shell) {
            const auto& syl = w.syllables();
            for (int g = 1; g <= rank; ++g) {
                for (int s : {1, -1}) {
                    if (!syl.empty() && syl.back().gen == g && (syl.back().exp > 0) != (s > 0)) continue;
                    next.push_back(w * Word::generator(g, s));
                }
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        shell = std::move(next);
    }
    return out;
}

}  // namespace framelab

template <>
struct std::hash<framelab::Word> {
    std::size_t operator()(const framelab::Word& w) const noexcept { return w.hash(); }
};
