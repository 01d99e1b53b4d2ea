#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "framelab/word.hpp"

namespace framelab {

// Finite-index normal subgroup H = ker(phi) of F_r, with phi(g) = sum_i w_i * (exponent sum of x_i) mod N.
class CosetStructure {
public:
    // Empty weights mean (1, 0, ..., 0). Representatives and h0 are derived when not given.
    CosetStructure(int rank, int modulus, std::vector<long> weights = {}, std::optional<Word> h0 = std::nullopt,
                   std::optional<std::vector<Word>> representatives = std::nullopt)
        : rank_(rank), modulus_(modulus), weights_(std::move(weights)) {
        if (rank_ < 2) throw std::invalid_argument("rank must be >= 2");
        if (rank_ > kMaxRank) throw std::invalid_argument("rank exceeds alphabet size");
        if (modulus_ < 2) throw std::invalid_argument("index must be ≥ 2");
        if (weights_.empty()) {
            weights_.assign(static_cast<std::size_t>(rank_), 0);
            weights_[0] = 1;
        }
        if (static_cast<int>(weights_.size()) != rank_) throw std::invalid_argument("weights length must equal rank");
        for (long& w : weights_) w = mod(w);
        long g = modulus_;
        for (long w : weights_) g = std::gcd(g, w);
        if (g != 1) throw std::invalid_argument("phi not surjective");

        h0_ = h0 ? *h0 : default_h0();
        check_word(h0_);
        if (h0_.is_identity()) throw std::invalid_argument("h0 must not be the identity");
        if (phi(h0_) != 0) throw std::invalid_argument("h0 must lie in ker phi");

        reps_ = representatives ? *representatives : default_representatives();
        if (static_cast<int>(reps_.size()) != modulus_) throw std::invalid_argument("need exactly N representatives");
        if (!reps_[0].is_identity()) throw std::invalid_argument("representative a_0 must be e");
        for (int k = 0; k < modulus_; ++k) {
            check_word(reps_[static_cast<std::size_t>(k)]);
            if (phi(reps_[static_cast<std::size_t>(k)]) != k)
                throw std::invalid_argument("representative a_" + std::to_string(k) + " has wrong phi value");
        }
    }

    int rank() const { return rank_; }
    int modulus() const { return modulus_; }
    const std::vector<long>& weights() const { return weights_; }
    const Word& h0() const { return h0_; }
    const std::vector<Word>& representatives() const { return reps_; }
    const Word& representative(int k) const { return reps_.at(static_cast<std::size_t>(k)); }

    int phi(const Word& g) const {
        long s = 0;
        for (const auto& syl : g.syllables()) s += weights_[static_cast<std::size_t>(syl.gen - 1)] * syl.exp;
        return static_cast<int>(mod(s));
    }

    // k such that g lies in a_k^{-1} H.
    int coset_index(const Word& g) const { return static_cast<int>(mod(-static_cast<long>(phi(g)))); }

    bool in_subgroup(const Word& g) const { return phi(g) == 0; }

private:
    long mod(long v) const {
        const long r = v % modulus_;
        return r < 0 ? r + modulus_ : r;
    }

    void check_word(const Word& w) const {
        for (const auto& s : w.syllables())
            if (s.gen < 1 || s.gen > rank_) throw std::out_of_range("word uses a generator outside the rank");
    }

    Word default_h0() const {
        for (int i = 0; i < rank_; ++i)
            if (weights_[static_cast<std::size_t>(i)] == 0) return Word::generator(i + 1);
        return Word::generator(1, static_cast<int>(weights_[1])) * Word::generator(2, -static_cast<int>(weights_[0]));
    }

    std::vector<Word> default_representatives() const {
        std::vector<Word> reps(static_cast<std::size_t>(modulus_));
        // A generator with invertible weight gives a_k = x_i^{k / w_i}.
        for (int i = 0; i < rank_; ++i) {
            const long w = weights_[static_cast<std::size_t>(i)];
            for (long t = 1; t < modulus_; ++t) {
                if (mod(w * t) != 1) continue;
                for (int k = 0; k < modulus_; ++k) reps[static_cast<std::size_t>(k)] = Word::generator(i + 1, static_cast<int>(mod(k * t)));
                return reps;
            }
        }
        // Otherwise take the shortlex-first word of each residue.
        std::vector<bool> found(static_cast<std::size_t>(modulus_), false);
        int missing = modulus_;
        for (int radius = 0; missing > 0; ++radius) {
            for (const Word& w : ball(rank_, radius)) {
                const auto k = static_cast<std::size_t>(phi(w));
                if (!found[k]) {
                    found[k] = true;
                    reps[k] = w;
                    --missing;
                }
            }
        }
        return reps;
    }

    int rank_;
    int modulus_;
    std::vector<long> weights_;
    Word h0_;
    std::vector<Word> reps_;
};

inline int phi(const CosetStructure& c, const Word& g) { return c.phi(g); }

// Words of Ball(radius) lying in H, in shortlex order.
inline std::vector<Word> enumerate_subgroup_ball(const CosetStructure& c, int radius) {
    std::vector<Word> out;
    for (Word& w : ball(c.rank(), radius))
        if (c.in_subgroup(w)) out.push_back(std::move(w));
    return out;
}

}  // namespace framelab
