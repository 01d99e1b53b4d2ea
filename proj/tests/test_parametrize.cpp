#include <random>

#include <gtest/gtest.h>

#include "framelab/construction.hpp"
#include "framelab/parametrize.hpp"

using namespace framelab;

namespace {

const DisjointTuple& tuple2() {
    static const DisjointTuple t = [] {
        TupleOptions o;
        o.ortho.depth = 2;
        o.ortho.exponent = 4;
        o.tests = 6;
        return build_disjoint_tuple(CosetStructure(2, 2), SpectralKernel(2, 16), o);
    }();
    return t;
}

// Star products by explicit double sums over the supports.
ConvKernel star_oracle(const ConvKernel& a, const ConvKernel& b) {
    ConvKernel out;
    for (const auto& [s, x] : a.sorted())
        for (const auto& [t, y] : b.sorted()) out.add(s * t, x * y);
    return out;
}

}  // namespace

TEST(Parametrize, VerifyRowExamples) {
    EXPECT_EQ(verify_row(KernelRow::scalars({1.0, 0.0})), 0.0);
    const double a = std::sqrt(0.8), b = std::sqrt(0.2);
    EXPECT_LT(verify_row(KernelRow::scalars({a, b})), 1e-15);
    EXPECT_LT(verify_row(KernelRow::shifts({{a, Word::parse("xy")}, {b, Word::parse("Y")}})), 1e-15);
    EXPECT_NEAR(verify_row(KernelRow::scalars({1.0, 1.0})), 1.0, 1e-15);
    EXPECT_THROW(verify_row(KernelRow{}), std::invalid_argument);
}

TEST(Parametrize, StarProductAgreesWithOracle) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    const auto words = ball(2, 2);
    ConvKernel a, b;
    for (int i = 0; i < 5; ++i) {
        a.add(words[rng() % words.size()], Complex{nd(rng), nd(rng)});
        b.add(words[rng() % words.size()], Complex{nd(rng), nd(rng)});
    }
    EXPECT_LT(max_coefficient(kernel_star(a, b) - star_oracle(a, b)), 1e-14);
}

TEST(Parametrize, DisjointAndEquivalentRows) {
    const Complex a{0.6, 0.2}, b = std::sqrt(1.0 - std::norm(a));
    const KernelRow u = KernelRow::scalars({a, b});
    const KernelRow perp = KernelRow::scalars({-std::conj(b), std::conj(a)});
    EXPECT_EQ(rows_disjoint(u, perp), 0.0);
    EXPECT_NEAR(rows_disjoint(u, u), 1.0, 1e-15);
    const Complex c = std::polar(1.0, 0.7);
    const KernelRow phased = KernelRow::scalars({c * a, c * b});
    EXPECT_LT(rows_equivalent(u, phased), 1e-15);
    EXPECT_EQ(rows_equivalent(u, u), 0.0);
    const KernelRow p = KernelRow::scalars({std::sqrt(0.8), std::sqrt(0.2)}), q = KernelRow::scalars({std::sqrt(0.2), std::sqrt(0.8)});
    EXPECT_NEAR(rows_equivalent(p, q), 0.6, 1e-15);
    EXPECT_EQ(rows_equivalent(p, q, 2), rows_equivalent(q, p));
    EXPECT_THROW(rows_disjoint(u, KernelRow::scalars({1.0})), std::invalid_argument);
    EXPECT_THROW(rows_equivalent(u, KernelRow::scalars({1.0})), std::invalid_argument);
}

TEST(Parametrize, ShiftRowsAreExact) {
    const Complex a = std::sqrt(0.3), b = std::sqrt(0.7);
    const Word g1 = Word::parse("xYx"), g2 = Word::parse("yy");
    const KernelRow u = KernelRow::shifts({{a, g1}, {b, g2}});
    const KernelRow perp = KernelRow::shifts({{-std::conj(b), g1}, {std::conj(a), g2}});
    EXPECT_LT(verify_row(u), 1e-15);
    EXPECT_LT(rows_disjoint(u, perp), 1e-15);
}

TEST(Parametrize, RowJsonRoundTrip) {
    const KernelRow u = KernelRow::shifts({{Complex(0.5, -0.1), Word::parse("xy")}, {0.25, Word::parse("e")}});
    const KernelRow v = KernelRow::from_json(nlohmann::json::parse(u.to_json().dump()));
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v.entries[0], u.entries[0]);
    EXPECT_EQ(v.entries[1], u.entries[1]);
    EXPECT_THROW(KernelRow::from_json(nlohmann::json::object()), std::invalid_argument);
}

TEST(Parametrize, SynthesizeUnitRowReturnsTheMember) {
    const DisjointTuple& t = tuple2();
    const KernelImage e = synthesize(KernelRow::scalars({1.0, 0.0}), t.members);
    EXPECT_EQ(e.materialize(), t.members[0].materialize());
    EXPECT_THROW(synthesize(KernelRow::scalars({1.0}), t.members), std::invalid_argument);
}

TEST(Parametrize, ShiftSynthesisMatchesMaterializedSum) {
    const DisjointTuple& t = tuple2();
    const KernelRow u = KernelRow::shifts({{std::sqrt(0.5), Word::parse("y")}, {std::sqrt(0.5), Word::parse("YY")}});
    const L2Vector e = synthesize(u, t.members).materialize();
    L2Vector ref = kernel_apply(u.entries[0], t.members[0].materialize());
    ref += kernel_apply(u.entries[1], t.members[1].materialize());
    double worst = 0;
    for (const auto& [w, x] : (e - ref).entries()) worst = std::max(worst, std::abs(x));
    EXPECT_LT(worst, 1e-12);
}

TEST(Parametrize, FitRecoversScalarRow) {
    const DisjointTuple& t = tuple2();
    const Complex a{0.8, 0.1}, b = std::sqrt(1.0 - std::norm(a));
    const KernelImage e = synthesize(KernelRow::scalars({a, b}), t.members);
    const RowFit fit = fit_row(e, t.members, {Word::identity()});
    EXPECT_LT(fit.relative_residual, 1e-6);
    EXPECT_NEAR(std::abs(fit.row.entries[0].at(Word::identity()) - a), 0, 1e-6);
    EXPECT_NEAR(std::abs(fit.row.entries[1].at(Word::identity()) - b), 0, 1e-6);
    EXPECT_THROW(fit_row(e, {}, {Word::identity()}), std::invalid_argument);
}

TEST(Parametrize, FitReportsAResidualWhenTheSupportIsTooSmall) {
    const DisjointTuple& t = tuple2();
    const KernelRow u = KernelRow::shifts({{std::sqrt(0.5), Word::parse("x")}, {std::sqrt(0.5), Word::identity()}});
    const KernelImage e = synthesize(u, t.members);
    EXPECT_GT(fit_row(e, t.members, {Word::identity()}).relative_residual, 0.1);
    EXPECT_LT(fit_row(e, t.members, {Word::identity(), Word::parse("x")}).relative_residual, 1e-6);
}
