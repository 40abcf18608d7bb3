#include <random>
#include <set>

#include <gtest/gtest.h>

#include "coxfold/verifier.hpp"
#include "coxfold/word.hpp"
#include "test_util.hpp"

using namespace coxfold;
using coxfold::testing::Permutation;
using coxfold::testing::set1;
using coxfold::testing::w1;

namespace {

Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t len) {
    std::uniform_int_distribution<std::size_t> pick(0, rank - 1);
    Word w(len);
    for (auto& g : w) g = pick(rng);
    return w;
}

} // namespace

TEST(Reduce, Examples) {
    auto a3 = CoxeterSystem::create(matrices::type_A(3));
    EXPECT_TRUE(reduce(a3, w1({1, 1})).is_identity());
    EXPECT_EQ(reduce(a3, w1({2, 1, 2})).normal_form(), w1({1, 2, 1}));
    EXPECT_EQ(reduce(a3, w1({3, 1})).normal_form(), w1({1, 3}));
    EXPECT_EQ(reduce(a3, w1({1, 2, 1})), reduce(a3, w1({2, 1, 2})));
    EXPECT_EQ(reduce(a3, w1({2, 1, 3, 2})).left_descents(), set1({2}));
    EXPECT_EQ(reduce(a3, w1({2, 1, 3, 2})).right_descents(), set1({2}));
    EXPECT_THROW(parse_word("1 4", 3), InputError);
    EXPECT_EQ(parse_word("1 3 2", 3), w1({1, 3, 2}));
    EXPECT_EQ(format_word(w1({1, 3, 2})), "1 3 2");
}

TEST(Action, B2HasSqrtTwoCoefficient) {
    auto b2 = CoxeterSystem::create(matrices::type_B(2));
    // s1(alpha2) = alpha2 + sqrt(2) alpha1
    RootVector v = generator(b2, 0).image(1);
    EXPECT_EQ(v.coords[1], CycloReal(b2->context(), Rational(1)));
    EXPECT_EQ(v.coords[0] * v.coords[0], CycloReal(b2->context(), Rational(2)));
    EXPECT_EQ(v.coords[0].sign(), 1);
    EXPECT_TRUE(v.is_positive());
    EXPECT_TRUE(generator(b2, 0).image(0).is_negative());
}

TEST(LongestElement, Lengths) {
    struct Case {
        CoxeterMatrix m;
        std::size_t length;
    };
    for (const auto& c : {Case{matrices::type_A(2), 3}, Case{matrices::type_A(3), 6}, Case{matrices::type_B(3), 9},
                          Case{matrices::type_D(4), 12}, Case{matrices::type_H3(), 15}, Case{matrices::type_F4(), 24},
                          Case{matrices::dihedral(7), 7}, Case{matrices::type_E(6), 36}, Case{matrices::type_H4(), 60}}) {
        auto sys = CoxeterSystem::create(c.m);
        Element w0 = longest_element(sys, c.m.all());
        EXPECT_EQ(w0.length(), c.length) << describe_type(c.m);
        EXPECT_EQ(w0.left_descents(), c.m.all());
        EXPECT_EQ(w0.inverse(), w0);
    }
    auto a3 = CoxeterSystem::create(matrices::type_A(3));
    EXPECT_EQ(longest_element(a3, set1({1, 3})).normal_form(), w1({1, 3}));
    auto tri = CoxeterSystem::create(matrices::affine_A_cycle(3));
    EXPECT_THROW(longest_element(tri, set1({1, 2, 3})), PreconditionError);
    EXPECT_EQ(longest_element(tri, set1({1, 2})).length(), 3u);
}

TEST(Descents, MatchPermutationOracle) {
    const std::size_t n = 5; // A4 = S5
    auto sys = CoxeterSystem::create(matrices::type_A(n - 1));
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        Word w = random_word(rng, n - 1, 1 + trial % 14);
        Element e = reduce(sys, w);
        Permutation p = Permutation::of_word(n, w);
        ASSERT_EQ(e.length(), p.inversions()) << format_word(w);
        ASSERT_EQ(e.left_descents(), coxfold::testing::permutation_left_descents(n, w)) << format_word(w);
        ASSERT_EQ(Permutation::of_word(n, e.normal_form()), p);
    }
}

TEST(Elements, DistinctCountInS4) {
    auto sys = CoxeterSystem::create(matrices::type_A(3));
    std::set<std::vector<int>> perms;
    std::set<Word> forms;
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 3000; ++trial) {
        Word w = random_word(rng, 3, trial % 9);
        perms.insert(Permutation::of_word(4, w).p);
        forms.insert(reduce(sys, w).normal_form());
    }
    EXPECT_EQ(perms.size(), forms.size());
    EXPECT_EQ(forms.size(), coxfold::testing::factorial(4));
}

TEST(Elements, InvariantsOnRandomWords) {
    std::mt19937_64 rng(11);
    for (const auto& m : {matrices::type_B(3), matrices::type_H3(), matrices::affine_A_cycle(3), matrices::dihedral(kInfinity)}) {
        auto sys = CoxeterSystem::create(m);
        for (int trial = 0; trial < 300; ++trial) {
            Word w = random_word(rng, m.rank(), trial % 12);
            Element e = reduce(sys, w);
            ASSERT_EQ(reduce(sys, e.normal_form()), e);
            ASSERT_EQ(reduce(sys, e.normal_form()).normal_form(), e.normal_form());
            ASSERT_EQ((e * e.inverse()).is_identity(), true);
            ASSERT_LE(e.length(), w.size());
            ASSERT_EQ(e.length() % 2, w.size() % 2);
            for (Generator s = 0; s < m.rank(); ++s) {
                Element se = e.left_multiply(s);
                ASSERT_EQ(se.length() + (e.is_left_descent(s) ? 1 : 0), e.length() + (e.is_left_descent(s) ? 0 : 1));
                ASSERT_EQ(e.right_multiply(s).length() > e.length(), !e.is_right_descent(s));
            }
        }
    }
}

TEST(Elements, InfiniteDihedralLengths) {
    auto sys = CoxeterSystem::create(matrices::dihedral(kInfinity));
    Word w;
    for (std::size_t k = 1; k <= 20; ++k) {
        w.push_back(0);
        w.push_back(1);
        EXPECT_EQ(reduce(sys, w).length(), 2 * k);
    }
}

TEST(Elements, ShortLexOrder) {
    auto sys = CoxeterSystem::create(matrices::type_A(2));
    Ball all = enumerate(sys);
    ASSERT_EQ(all.size(), 6u);
    EXPECT_TRUE(std::is_sorted(all.elements.begin(), all.elements.end()));
    EXPECT_LT(reduce(sys, w1({2})), reduce(sys, w1({1, 2})));
    EXPECT_LT(reduce(sys, w1({1, 2})), reduce(sys, w1({2, 1})));
}

TEST(Elements, MixedSystemsRejected) {
    auto a = CoxeterSystem::create(matrices::type_A(2));
    auto b = CoxeterSystem::create(matrices::type_B(2));
    EXPECT_THROW(generator(a, 0) * generator(b, 0), PreconditionError);
}

TEST(CosetDecompose, LengthsAdd) {
    auto sys = CoxeterSystem::create(matrices::type_A(3));
    auto d = coset_decompose(reduce(sys, w1({2, 1, 3, 2})), set1({1, 3}));
    EXPECT_TRUE(d.u.is_identity());
    auto d2 = coset_decompose(reduce(sys, w1({1, 2, 3})), set1({1}));
    EXPECT_EQ(d2.u.normal_form(), w1({1}));
    EXPECT_EQ(d2.x.normal_form(), w1({2, 3}));

    auto b3 = CoxeterSystem::create(matrices::type_B(3));
    for (const Element& w : enumerate(b3).elements) {
        for (const Subset& I : {set1({1}), set1({1, 2}), set1({2, 3}), set1({1, 3})}) {
            auto c = coset_decompose(w, I);
            ASSERT_EQ(c.u * c.x, w);
            for (Generator s : I) ASSERT_FALSE(c.x.is_left_descent(s));
        }
    }
}

TEST(Exchange, Examples) {
    auto a3 = CoxeterSystem::create(matrices::type_A(3));
    EXPECT_EQ(exchange(a3, w1({1, 2, 1}), 0), 0u);
    // s2 s1 s2 s1 = s1 s2: the deleted letter is the last one
    auto a2 = CoxeterSystem::create(matrices::type_A(2));
    EXPECT_EQ(exchange(a2, w1({1, 2, 1}), 1), 2u);
    EXPECT_THROW(exchange(a3, w1({1, 1}), 0), PreconditionError);
    EXPECT_THROW(exchange(a3, w1({1, 2}), 1), PreconditionError);
}

TEST(Exchange, ExhaustiveB3) {
    auto sys = CoxeterSystem::create(matrices::type_B(3));
    for (const Element& w : enumerate(sys).elements) {
        for (Generator s : w.left_descents()) {
            const Word& word = w.normal_form();
            std::size_t i = exchange(sys, word, s);
            Word dropped = word;
            dropped.erase(dropped.begin() + static_cast<std::ptrdiff_t>(i));
            ASSERT_EQ(reduce(sys, dropped), w.left_multiply(s));
            for (std::size_t k = 0; k < i; ++k) {
                Word other = word;
                other.erase(other.begin() + static_cast<std::ptrdiff_t>(k));
                ASSERT_NE(reduce(sys, other), w.left_multiply(s));
            }
        }
    }
}

TEST(Roots, InversionCountEqualsLength) {
    for (const auto& m : {matrices::type_A(3), matrices::type_B(3), matrices::type_H3()}) {
        auto sys = CoxeterSystem::create(m);
        auto roots = positive_roots(sys);
        Ball all = enumerate(sys);
        EXPECT_EQ(roots.size(), longest_element(sys, m.all()).length());
        for (const Element& w : all.elements) ASSERT_EQ(inversion_count(w, roots), w.length());
    }
}
