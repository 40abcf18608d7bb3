#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "coxfold/cyclotomic.hpp"
#include "coxfold/rational.hpp"

using namespace coxfold;

namespace {

double two_cos(double m) { return 2.0 * std::cos(std::numbers::pi / m); }

} // namespace

TEST(Rational, NormalizesAndCompares) {
    EXPECT_EQ(Rational(2, 4), Rational(1, 2));
    EXPECT_EQ(Rational(3, -6), Rational(-1, 2));
    EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_EQ((Rational(2, 3) * Rational(3, 4)).to_string(), "1/2");
}

TEST(Rational, OverflowThrows) {
    Rational big(INT64_MAX / 2 + 1);
    EXPECT_THROW(big * Rational(4), ArithmeticError);
    EXPECT_THROW(Rational(1) / Rational(0), ArithmeticError);
}

TEST(ArithContext, FieldOrderAndDegree) {
    auto a3 = make_context(matrices::type_A(3));
    EXPECT_EQ(a3->order(), 6u);
    EXPECT_EQ(a3->degree(), 4u); // phi(12)

    auto i25 = make_context(matrices::dihedral(5));
    EXPECT_EQ(i25->order(), 10u); // lcm(2, 5)
    EXPECT_EQ(i25->degree(), 8u);

    auto inf = make_context(matrices::dihedral(kInfinity));
    EXPECT_EQ(inf->order(), 2u);
    EXPECT_EQ(inf->degree(), 2u);
}

TEST(ArithContext, ModulusIsCyclotomic) {
    // Phi_12 = x^4 - x^2 + 1
    auto ctx = ArithContext::create(6);
    EXPECT_EQ(ctx->modulus(), (std::vector<std::int64_t>{1, 0, -1, 0, 1}));
    // Phi_20 = x^8 - x^6 + x^4 - x^2 + 1
    auto ctx10 = ArithContext::create(10);
    EXPECT_EQ(ctx10->modulus(), (std::vector<std::int64_t>{1, 0, -1, 0, 1, 0, -1, 0, 1}));
    for (std::uint64_t n : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 30}) {
        auto c = ArithContext::create(n);
        EXPECT_EQ(c->degree(), detail::euler_phi(2 * n)) << n;
        EXPECT_EQ(c->modulus().back(), 1) << n;
    }
}

TEST(ArithContext, DegreeCap) {
    EXPECT_THROW(ArithContext::create(97), InputError); // phi(194) = 96
    EXPECT_NO_THROW(ArithContext::create(97, 128));
}

TEST(TwoCos, SmallLabels) {
    auto ctx = ArithContext::create(12);
    EXPECT_TRUE(two_cos_pi_over(2, ctx).is_zero());
    EXPECT_EQ(two_cos_pi_over(3, ctx), CycloReal(ctx, Rational(1)));
    auto r2 = two_cos_pi_over(4, ctx);
    auto r3 = two_cos_pi_over(6, ctx);
    EXPECT_EQ(r2 * r2, CycloReal(ctx, Rational(2)));
    EXPECT_EQ(r3 * r3, CycloReal(ctx, Rational(3)));
    EXPECT_EQ(two_cos_pi_over(kInfinity, ctx), CycloReal(ctx, Rational(2)));
    EXPECT_THROW(two_cos_pi_over(5, ctx), PreconditionError);
}

TEST(TwoCos, GoldenRatio) {
    auto ctx = ArithContext::create(20);
    auto x = two_cos_pi_over(5, ctx);
    EXPECT_EQ(x * x - x, CycloReal(ctx, Rational(1)));
    EXPECT_NEAR(x.to_double(), 1.6180339887, 1e-9);
    EXPECT_EQ(x.sign(), 1);
    EXPECT_NEAR((x * x - x).to_double(), 1.0, 1e-9);
}

TEST(Sign, Examples) {
    auto ctx = ArithContext::create(20);
    EXPECT_EQ(CycloReal(ctx).sign(), 0);
    EXPECT_EQ(two_cos_pi_over(10, ctx).sign(), 1);
    auto d = two_cos_pi_over(5, ctx) - two_cos_pi_over(4, ctx);
    EXPECT_EQ(d.sign(), 1);
    EXPECT_EQ((-d).sign(), -1);
}

TEST(Sign, TinyDifferencesNeedHighPrecision) {
    // (2cos(pi/5))^40 is huge; subtracting its nearest rational approximant
    // leaves a value far below the double filter.
    auto ctx = ArithContext::create(5);
    auto x = two_cos_pi_over(5, ctx);
    CycloReal p(ctx, Rational(1));
    for (int k = 0; k < 40; ++k) p = p * x;
    // phi^40 = F40 * phi + F39, with Fibonacci numbers
    const std::int64_t f39 = 63245986, f40 = 102334155;
    CycloReal lucas(ctx, Rational(2 * f39 + f40)); // L40 = phi^40 + phi^-40
    auto diff = lucas - p;                           // = phi^-40 > 0, about 4.3e-9
    EXPECT_EQ(diff.sign(), 1);
    EXPECT_EQ((p - lucas).sign(), -1);
    EXPECT_EQ((Rational(1, 1000000000) * diff).sign(), 1);
}

TEST(CycloReal, ContextMismatch) {
    auto a = two_cos_pi_over(3, ArithContext::create(6));
    auto b = two_cos_pi_over(3, ArithContext::create(12));
    EXPECT_THROW(a + b, PreconditionError);
}

// Random ring expressions in 2cos(pi/m): canonical equality must agree with
// floating equality, conjugation invariance must survive every operation,
// and positivity is closed under + and *.
TEST(CycloReal, RandomExpressionsAgreeWithFloatingOracle) {
    auto ctx = ArithContext::create(60);
    const std::vector<Label> labels{2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60};
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> coef(-3, 3), pick(0, static_cast<int>(labels.size()) - 1), op(0, 2);

    struct Value {
        CycloReal exact;
        double approx;
    };
    auto random_value = [&](int depth, auto&& self) -> Value {
        if (depth == 0) {
            Label m = labels[pick(rng)];
            Rational q(coef(rng), 1 + std::abs(coef(rng)));
            return {q * two_cos_pi_over(m, ctx), q.to_double() * two_cos(m)};
        }
        Value a = self(depth - 1, self), b = self(depth - 1, self);
        switch (op(rng)) {
        case 0: return {a.exact + b.exact, a.approx + b.approx};
        case 1: return {a.exact - b.exact, a.approx - b.approx};
        default: return {a.exact * b.exact, a.approx * b.approx};
        }
    };

    int equal_cases = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Value a = random_value(2, random_value);
        Value b = random_value(2, random_value);
        Value c = random_value(1, random_value);
        // distributivity gives an equal pair built along a different route
        Value lhs{a.exact * (b.exact + c.exact), a.approx * (b.approx + c.approx)};
        Value rhs{a.exact * b.exact + a.exact * c.exact, a.approx * b.approx + a.approx * c.approx};
        const Value& other = trial % 2 == 0 ? rhs : b;
        const bool exact_eq = lhs.exact == other.exact;
        const bool float_eq = std::fabs(lhs.approx - other.approx) < 1e-9;
        ASSERT_EQ(exact_eq, float_eq) << "trial " << trial;
        equal_cases += exact_eq;

        ASSERT_EQ(lhs.exact.conjugate(), lhs.exact);
        ASSERT_NEAR(lhs.exact.to_double(), lhs.approx, 1e-9 * (1 + std::fabs(lhs.approx)));
        const int fs = std::fabs(lhs.approx) < 1e-9 ? 0 : (lhs.approx > 0 ? 1 : -1);
        ASSERT_EQ(lhs.exact.sign(), fs) << lhs.exact.to_string();

        if (a.exact.sign() > 0 && b.exact.sign() > 0) {
            ASSERT_EQ((a.exact * b.exact).sign(), 1);
            ASSERT_EQ((a.exact + b.exact).sign(), 1);
        }
        ASSERT_EQ((a.exact + (-a.exact)).sign(), 0);
    }
    EXPECT_GE(equal_cases, 500);
}
