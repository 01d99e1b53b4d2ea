#include <random>

#include <gtest/gtest.h>

#include "framelab/construction.hpp"

using namespace framelab;

namespace {

L2Vector random_vector(std::mt19937_64& rng, int rank, int radius, int count) {
    std::normal_distribution<double> nd;
    const auto b = ball(rank, radius);
    L2Vector v;
    for (int i = 0; i < count; ++i) {
        const Word& g = b[rng() % b.size()];
        const double re = nd(rng);
        v.add(g, Complex{re, nd(rng)});
    }
    return v;
}

ConvKernel random_kernel(std::mt19937_64& rng, int rank, int radius, int count) {
    ConvKernel k;
    for (const auto& [g, a] : random_vector(rng, rank, radius, count).entries()) k.add(g, a);
    return k;
}

double max_diff(const L2Vector& a, const L2Vector& b) {
    double m = 0;
    for (const auto& [g, x] : (a - b).entries()) m = std::max(m, std::abs(x));
    return m;
}

// (R_a f)(x) = sum_s a(s) f(x s), evaluated pointwise.
Complex convolve_at(const ConvKernel& a, const L2Vector& f, const Word& x) {
    Complex s{};
    for (const auto& [w, c] : a.entries()) s += c * f.at(x * w);
    return s;
}

}  // namespace

TEST(L2, InnerProductIsSesquilinear) {
    std::mt19937_64 rng(1);
    const L2Vector f = random_vector(rng, 2, 3, 10), g = random_vector(rng, 2, 3, 10);
    const Complex a{0.3, -1.2};
    EXPECT_NEAR(std::abs(inner(a * f, g) - a * inner(f, g)), 0, 1e-12);
    EXPECT_NEAR(std::abs(inner(f, a * g) - std::conj(a) * inner(f, g)), 0, 1e-12);
    EXPECT_NEAR(std::abs(inner(f, f) - f.norm2()), 0, 1e-12);
}

TEST(L2, LeftAndRightTranslationsCommute) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const L2Vector f = random_vector(rng, 2, 3, 8);
        const Word g = ball(2, 3)[rng() % 53], h = ball(2, 3)[rng() % 53];
        EXPECT_EQ(lambda_act(g, rho_act(h, f)), rho_act(h, lambda_act(g, f)));
        EXPECT_NEAR(lambda_act(g, f).norm2(), f.norm2(), 1e-12);
        EXPECT_EQ(lambda_act(g, L2Vector::delta(h)), L2Vector::delta(g * h));
        EXPECT_EQ(rho_act(g, L2Vector::delta(h)), L2Vector::delta(h * g.inverse()));
    }
}

TEST(L2, KernelApplyMatchesPointwiseConvolution) {
    std::mt19937_64 rng(3);
    const ConvKernel a = random_kernel(rng, 2, 2, 6);
    const L2Vector f = random_vector(rng, 2, 3, 10);
    const L2Vector out = kernel_apply(a, f);
    for (const Word& x : ball(2, 5)) EXPECT_NEAR(std::abs(out.at(x) - convolve_at(a, f, x)), 0, 1e-12);
}

TEST(L2, StarProductAndAdjoint) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        const ConvKernel a = random_kernel(rng, 2, 2, 5), b = random_kernel(rng, 2, 2, 5), c = random_kernel(rng, 2, 2, 5);
        const L2Vector f = random_vector(rng, 2, 3, 8), g = random_vector(rng, 2, 3, 8);
        EXPECT_LT(max_diff(kernel_apply(a, kernel_apply(b, f)), kernel_apply(kernel_star(a, b), f)), 1e-12);
        EXPECT_NEAR(std::abs(inner(kernel_apply(a, f), g) - inner(f, kernel_apply(kernel_adjoint(a), g))), 0, 1e-11);
        const ConvKernel l = kernel_star(kernel_star(a, b), c), r = kernel_star(a, kernel_star(b, c));
        for (const auto& [w, x] : (l - r).entries()) EXPECT_LT(std::abs(x), 1e-12);
        // Right convolutions commute with left translations.
        const Word h = ball(2, 2)[rng() % 17];
        EXPECT_LT(max_diff(kernel_apply(a, lambda_act(h, f)), lambda_act(h, kernel_apply(a, f))), 1e-12);
    }
}

TEST(L2, CharacterMultiplicationCommutesWithSubgroup) {
    std::mt19937_64 rng(5);
    const CosetStructure c(2, 3);
    const L2Vector f = random_vector(rng, 2, 3, 15);
    for (const Word& h : enumerate_subgroup_ball(c, 3))
        for (int j = 0; j < 3; ++j) EXPECT_EQ(char_mult(c, j, lambda_act(h, f)), lambda_act(h, char_mult(c, j, f)));
    // Constant on cosets a_k^{-1} H.
    for (const Word& g : ball(2, 3))
        EXPECT_NEAR(std::abs(coset_character(c, 1, g) - root_of_unity(c.coset_index(g), 3)), 0, 1e-15);
}

TEST(L2, RootsOfUnityAreExactOnQuarterTurns) {
    EXPECT_EQ(root_of_unity(1, 4), Complex(0, 1));
    EXPECT_EQ(root_of_unity(2, 4), Complex(-1, 0));
    EXPECT_EQ(root_of_unity(-1, 2), Complex(-1, 0));
    EXPECT_NEAR(std::abs(root_of_unity(1, 3) - std::polar(1.0, 2 * std::numbers::pi / 3)), 0, 1e-15);
}

TEST(L2, JsonRoundTrip) {
    std::mt19937_64 rng(6);
    const L2Vector f = random_vector(rng, 2, 3, 10);
    EXPECT_EQ(sparse_from_json<VectorTag>(to_json(f)), f);
}

TEST(SpectralKernel, TraceAndSelfAdjointness) {
    for (int n : {2, 3, 4})
        for (int m : {0, 1, 7, 64}) {
            const CosetStructure c(2, n);
            const SpectralKernel k(n, m);
            EXPECT_NEAR(trace_estimate(k, c), 1.0 / n, 1e-15);
            const ConvKernel p = k.kernel(c.h0());
            for (const auto& [w, x] : (p - kernel_adjoint(p)).entries()) EXPECT_LT(std::abs(x), 1e-15);
        }
}

TEST(SpectralKernel, IdempotencyImprovesWithTruncation) {
    const CosetStructure c(2, 2);
    double previous = 1e9;
    for (int m : {8, 16, 32, 64, 128}) {
        const double r = idempotency_residual(SpectralKernel(2, m), c);
        EXPECT_LT(r, previous);
        previous = r;
    }
    EXPECT_LT(previous, 0.05);
    // Cesaro weights damp the Gibbs tail; the kernel is still centred at 1/N.
    EXPECT_NEAR(trace_estimate(SpectralKernel(2, 32, Taper::cesaro), c), 0.5, 1e-15);
}

TEST(SpectralKernel, FourierCoefficientsOfTheArc) {
    // c(n) = (1 - e^{-2 pi i n / N}) / (2 pi i n); for N = 2 the even coefficients vanish.
    const SpectralKernel k(2, 10);
    for (int n = 1; n <= 10; ++n) {
        const Complex expected = n % 2 ? Complex(0, -1.0 / (std::numbers::pi * n)) : Complex{};
        EXPECT_NEAR(std::abs(k.coefficient(n) - expected), 0, 1e-15);
        EXPECT_EQ(k.coefficient(-n), std::conj(k.coefficient(n)));
    }
    EXPECT_EQ(k.coefficient(11), Complex{});
}
