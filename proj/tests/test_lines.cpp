#include <random>

#include <gtest/gtest.h>

#include "framelab/frame.hpp"

using namespace framelab;

namespace {

struct Rng {
    std::mt19937_64 gen;
    std::normal_distribution<double> nd;
    explicit Rng(std::uint64_t s) : gen(s) {}
    Complex z() {
        const double re = nd(gen);
        return {re, nd(gen)};
    }
    L2Vector vector(int rank, int radius, int count) {
        const auto b = ball(rank, radius);
        L2Vector v;
        for (int i = 0; i < count; ++i) v.add(b[gen() % b.size()], z());
        return v;
    }
    ConvKernel axis_kernel(int axis, int half) {
        ConvKernel k;
        for (int n = -half; n <= half; ++n) k.add(Word::generator(axis, n), z());
        return k;
    }
};

// Oracles computed on materialized vectors.
Complex left_oracle(const L2Vector& m, const Word& d) { return inner(lambda_act(d, m), m); }

Complex right_oracle(const L2Vector& a, const L2Vector& b, const Word& h) {
    Complex s{};
    for (const auto& [u, x] : a.entries()) s += std::conj(x) * b.at(u * h);
    return s;
}

class LinesByRank : public ::testing::TestWithParam<int> {};

}  // namespace

TEST(Lines, SplitAxis) {
    const auto [key, m] = split_axis(Word::parse("xyXyyy"), 2);
    EXPECT_EQ(key.str(), "xyX");
    EXPECT_EQ(m, 3);
    EXPECT_EQ(split_axis(Word::parse("xy"), 1).second, 0);
}

TEST(Lines, LineFormRoundTrip) {
    Rng r(1);
    const L2Vector v = r.vector(3, 4, 40);
    EXPECT_EQ(LineForm(2, v).to_vector(), v);
}

TEST(Lines, KernelAxisDetection) {
    Rng r(2);
    EXPECT_EQ(kernel_axis(r.axis_kernel(2, 3), 0), std::optional<int>(2));
    EXPECT_EQ(kernel_axis(ConvKernel::delta(Word::identity()), 5), std::optional<int>(5));
    ConvKernel mixed = r.axis_kernel(1, 1);
    mixed.add(Word::parse("y"), 1.0);
    EXPECT_FALSE(kernel_axis(mixed, 0).has_value());
}

TEST_P(LinesByRank, AxisKernelMatchesGenericApply) {
    Rng r(10 + GetParam());
    const ConvKernel k = r.axis_kernel(1, 4);
    const L2Vector f = r.vector(GetParam(), 3, 15);
    const L2Vector a = apply_axis_kernel(k, LineForm(1, f)).to_vector(), b = kernel_apply(k, f);
    for (const auto& [w, x] : (a - b).entries()) EXPECT_LT(std::abs(x), 1e-12);
}

TEST_P(LinesByRank, AutocorrelationMatchesBruteForce) {
    const int rank = GetParam();
    Rng r(20 + rank);
    for (int trial = 0; trial < 4; ++trial) {
        const KernelImage e{r.axis_kernel(1, 4), r.vector(rank, 3, 12)};
        const L2Vector m = e.materialize();
        const auto ds = ball(rank, 4);
        Autocorrelation batched(e), single(e);
        batched.prefetch(ds);
        for (const Word& d : ds) {
            const Complex ref = left_oracle(m, d);
            EXPECT_NEAR(std::abs(ref - batched(d)), 0, 1e-11);
            EXPECT_NEAR(std::abs(ref - single(d)), 0, 1e-11);
        }
    }
}

TEST_P(LinesByRank, GenericAutocorrelationPath) {
    const int rank = GetParam();
    Rng r(30 + rank);
    ConvKernel k = r.axis_kernel(1, 2);
    k.add(Word::parse("y"), r.z());
    const KernelImage e{k, r.vector(rank, 2, 8)};
    const L2Vector m = e.materialize();
    const Autocorrelation a(e);
    for (const Word& d : ball(rank, 3)) EXPECT_NEAR(std::abs(left_oracle(m, d) - a(d)), 0, 1e-11);
}

TEST_P(LinesByRank, RightCorrelationMatchesBruteForce) {
    const int rank = GetParam();
    Rng r(40 + rank);
    for (int trial = 0; trial < 4; ++trial) {
        const KernelImage x{r.axis_kernel(1, 4), r.vector(rank, 3, 12)};
        const KernelImage y{r.axis_kernel(1, 3), r.vector(rank, 3, 12)};
        const L2Vector mx = x.materialize(), my = y.materialize();
        const auto hs = ball(rank, 3);
        const auto v = detail::right_correlation(x, y, hs);
        for (std::size_t i = 0; i < hs.size(); ++i)
            EXPECT_NEAR(std::abs(right_oracle(mx, my, hs[i]) - v[i]), 0, 1e-11);
    }
}

TEST_P(LinesByRank, TaggedTranslatesMatchBruteForce) {
    const int rank = GetParam();
    Rng r(50 + rank);
    const ConvKernel q = r.axis_kernel(1, 3);
    const LineForm psi = apply_axis_kernel(q, LineForm(1, r.vector(rank, 3, 6)));
    const LineForm b = apply_axis_kernel(q, LineForm(1, r.vector(rank, 4, 30)));
    const L2Vector pm = psi.to_vector(), bm = b.to_vector();
    const auto gs = ball(rank, 2), hs = ball(rank, 2);
    const auto v = right_correlation(translate_lines(psi, gs), gs.size(), b, hs);
    for (std::size_t t = 0; t < gs.size(); ++t) {
        const L2Vector a = lambda_act(gs[t], pm);
        for (std::size_t i = 0; i < hs.size(); ++i)
            EXPECT_NEAR(std::abs(right_oracle(a, bm, hs[i]) - v[t * hs.size() + i]), 0, 1e-11);
    }
}

TEST_P(LinesByRank, FullFramePairingMatchesExplicitCoefficients) {
    const int rank = GetParam();
    Rng r(60 + rank);
    const KernelImage e{r.axis_kernel(1, 4), r.vector(rank, 3, 10)};
    const KernelImage f{r.axis_kernel(1, 3), r.vector(rank, 3, 10)};
    const KernelImage v1{r.axis_kernel(1, 2), r.vector(rank, 1, 6)};
    const KernelImage v2{r.axis_kernel(1, 2), r.vector(rank, 1, 6)};
    const auto c1 = detail::pair_coefficients(v1.materialize(), e.materialize());
    const auto c2 = detail::pair_coefficients(v2.materialize(), f.materialize());
    Complex ref{};
    for (const auto& [g, a] : c1) {
        const auto it = c2.find(g);
        if (it != c2.end()) ref += a * std::conj(it->second);
    }
    EXPECT_NEAR(std::abs(ref - detail::full_frame_pairing(v1, e, v2, f)), 0, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Ranks, LinesByRank, ::testing::Values(2, 3));
