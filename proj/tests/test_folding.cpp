#include <random>

#include <gtest/gtest.h>

#include "coxfold/catalog.hpp"
#include "coxfold/folding.hpp"
#include "coxfold/verifier.hpp"
#include "test_util.hpp"

using namespace coxfold;
using coxfold::testing::set1;
using coxfold::testing::w1;

namespace {

struct Folded {
    SystemPtr sys;
    AutGroup aut;
    FoldedSystem fs;
};

Folded fold_pairs(const CoxeterMatrix& m, const std::vector<std::pair<Generator, Generator>>& pairs) {
    auto sys = CoxeterSystem::create(m);
    AutGroup aut(m, {Automorphism::from_pairs(m.rank(), pairs, "g")});
    return {sys, aut, fold(sys, aut)};
}

Folded a3_flip() { return fold_pairs(matrices::type_A(3), {{1, 3}, {3, 1}}); }

} // namespace

TEST(ValidateAutomorphism, Examples) {
    auto a3 = matrices::type_A(3);
    EXPECT_FALSE(validate_automorphism(a3, {0, 1, 2}));
    EXPECT_FALSE(validate_automorphism(a3, {2, 1, 0}));
    auto err = validate_automorphism(a3, {1, 0, 2});
    ASSERT_TRUE(err);
    EXPECT_EQ(err->message, "label mismatch at (1,3): m(2,3)=3 != m(1,3)=2");
    ASSERT_TRUE(err->witness);
    EXPECT_EQ(*err->witness, (std::pair<Generator, Generator>{0, 2}));
    EXPECT_TRUE(validate_automorphism(a3, {0, 0, 2}));
    EXPECT_TRUE(validate_automorphism(a3, {0, 1}));
    EXPECT_THROW(AutGroup(a3, {Automorphism{"bad", {1, 0, 2}}}), InputError);
}

TEST(Orbits, Examples) {
    auto a3 = matrices::type_A(3);
    EXPECT_EQ(orbits(AutGroup(a3, {}), 3), (std::vector<Subset>{{0}, {1}, {2}}));
    EXPECT_EQ(orbits(AutGroup(a3, {Automorphism::from_pairs(3, {{1, 3}, {3, 1}})}), 3),
              (std::vector<Subset>{set1({1, 3}), set1({2})}));
    auto d4 = matrices::type_D(4);
    EXPECT_EQ(orbits(AutGroup(d4, {Automorphism::from_pairs(4, {{1, 3}, {3, 4}, {4, 1}})}), 4),
              (std::vector<Subset>{set1({1, 3, 4}), set1({2})}));
}

TEST(BarS, Examples) {
    Folded f = a3_flip();
    ASSERT_EQ(f.fs.size(), 2u);
    EXPECT_EQ(f.fs[0].orbit, set1({1, 3}));
    EXPECT_EQ(f.fs[0].weight, 2u);
    EXPECT_EQ(f.fs[1].orbit, set1({2}));
    EXPECT_EQ(f.fs[1].weight, 1u);

    Folded a2 = fold_pairs(matrices::type_A(2), {{1, 2}, {2, 1}});
    ASSERT_EQ(a2.fs.size(), 1u);
    EXPECT_EQ(a2.fs[0].weight, 3u);

    Folded inf = fold_pairs(matrices::dihedral(kInfinity), {{1, 2}, {2, 1}});
    EXPECT_EQ(inf.fs.size(), 0u);
    EXPECT_EQ(inf.fs.dropped(), (std::vector<Subset>{set1({1, 2})}));
}

TEST(IsFixed, Examples) {
    Folded f = a3_flip();
    EXPECT_TRUE(is_fixed(identity(f.sys), f.aut));
    EXPECT_FALSE(is_fixed(reduce(f.sys, w1({1})), f.aut));
    EXPECT_TRUE(is_fixed(reduce(f.sys, w1({2, 1, 3, 2})), f.aut));
}

TEST(GreedyFactorize, Examples) {
    Folded f = a3_flip();
    EXPECT_TRUE(greedy_factorize(identity(f.sys), f.fs).empty());
    Element w0 = longest_element(f.sys, set1({1, 2, 3}));
    auto blocks = greedy_factorize(w0, f.fs);
    EXPECT_EQ(blocks.size(), 4u);
    std::size_t total = 0;
    for (std::size_t b : blocks) total += f.fs[b].weight;
    EXPECT_EQ(total, 6u);
    // blocks alternate between the two orbits
    for (std::size_t k = 1; k < blocks.size(); ++k) EXPECT_NE(blocks[k], blocks[k - 1]);

    EXPECT_EQ(greedy_factorize(reduce(f.sys, w1({2, 1, 3, 2})), f.fs), (std::vector<std::size_t>{1, 0, 1}));
    EXPECT_THROW(greedy_factorize(reduce(f.sys, w1({1})), f.fs), PreconditionError);
}

TEST(LambdaLength, Examples) {
    Folded f = a3_flip();
    EXPECT_EQ(lambda_length(identity(f.sys), f.fs), 0u);
    EXPECT_EQ(lambda_length(f.fs[0].longest, f.fs), 1u);
    EXPECT_EQ(lambda_length(f.fs[1].longest, f.fs), 1u);
    EXPECT_EQ(lambda_length(longest_element(f.sys, set1({1, 2, 3})), f.fs), 4u);
}

TEST(FoldedOrder, Examples) {
    Folded f = a3_flip();
    auto d = folded_order(f.sys, f.fs.generators(), 0, 1);
    EXPECT_EQ(d.longest_length, 6u);
    EXPECT_EQ(d.order, 4u);
    EXPECT_THROW(folded_order(f.sys, f.fs.generators(), 0, 0), PreconditionError);

    Folded tri = fold_pairs(matrices::type_D(4), {{1, 3}, {3, 4}, {4, 1}});
    auto dt = folded_order(tri.sys, tri.fs.generators(), 0, 1);
    EXPECT_EQ(dt.longest_length, 12u);
    EXPECT_EQ(dt.weight_i, 3u);
    EXPECT_EQ(dt.weight_j, 1u);
    EXPECT_EQ(dt.order, 6u);

    Folded aff = fold_pairs(matrices::affine_A_cycle(3), {{1, 2}, {2, 1}});
    auto da = folded_order(aff.sys, aff.fs.generators(), 0, 1);
    EXPECT_FALSE(da.longest_length);
    EXPECT_EQ(da.order, kInfinity);
}

TEST(Fold, Examples) {
    auto a3 = matrices::type_A(3);
    auto sys = CoxeterSystem::create(a3);
    FoldedSystem trivial = fold(sys, AutGroup(a3, {}));
    EXPECT_EQ(trivial.matrix(), a3);
    EXPECT_EQ(trivial.weights(), (std::vector<std::size_t>{1, 1, 1}));

    Folded f = a3_flip();
    EXPECT_EQ(describe_type(f.fs.matrix()), "I2(4)");
    EXPECT_EQ(f.fs.weights(), (std::vector<std::size_t>{2, 1}));

    Folded a4 = fold_pairs(matrices::type_A(4), {{1, 4}, {4, 1}, {2, 3}, {3, 2}});
    EXPECT_EQ(describe_type(a4.fs.matrix()), "I2(4)");
    EXPECT_EQ(a4.fs.weights(), (std::vector<std::size_t>{2, 3}));
    EXPECT_EQ(a4.fs[1].longest.normal_form(), w1({2, 3, 2}));
}

// Every catalog folding agrees with the fixed points found by enumeration.
TEST(Fold, CatalogRows) {
    for (const auto& e : catalog()) {
        CatalogRow row = run_catalog_entry(e);
        EXPECT_TRUE(row.match()) << row.to_json().dump();
    }
}

TEST(WeightAdditivity, Examples) {
    Folded f = a3_flip();
    auto id = identity(f.sys);
    auto r = check_weight_additivity(id, f.fs[0].longest, f.fs);
    EXPECT_TRUE(r.length_additive && r.lambda_additive);
    auto s2 = f.fs[1].longest;
    r = check_weight_additivity(s2, s2, f.fs);
    EXPECT_FALSE(r.length_additive);
    EXPECT_FALSE(r.lambda_additive);
    r = check_weight_additivity(f.fs[0].longest, s2, f.fs);
    EXPECT_TRUE(r.length_additive && r.lambda_additive);
    EXPECT_THROW(check_weight_additivity(id, reduce(f.sys, w1({1})), f.fs), PreconditionError);
}

TEST(FoldedExchange, Examples) {
    Folded f = a3_flip();
    EXPECT_EQ(folded_exchange({0}, 0, f.fs), 0u);
    EXPECT_EQ(folded_exchange({1, 0, 1}, 1, f.fs), 0u);
    EXPECT_EQ(folded_exchange({0, 1, 0, 1}, 0, f.fs), 0u);
    // w_{2} w_{13} w_{2} w_{13} is w0 too, so w_{13} descends it as well
    EXPECT_EQ(folded_exchange({1, 0, 1, 0}, 0, f.fs), 3u);
    EXPECT_THROW(folded_exchange({1, 1}, 0, f.fs), PreconditionError);
    EXPECT_THROW(folded_exchange({1}, 0, f.fs), PreconditionError);
}

// Independent oracle: lambda from BFS in the Cayley graph of {w_I}, compared
// against randomized greedy factorizations.
TEST(LambdaLength, AgreesWithCayleyDistance) {
    std::mt19937_64 rng(5);
    for (const auto& e : catalog()) {
        auto sys = CoxeterSystem::create(e.instance.matrix);
        AutGroup aut(e.instance.matrix, e.instance.automorphisms);
        FoldedSystem fs = fold(sys, aut);
        CayleyGraph g = generated_subgroup(fs, is_finite(classify_finite(e.instance.matrix)) ? std::nullopt
                                                                                             : std::optional<std::size_t>(4));
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
            ASSERT_EQ(lambda_length(g.nodes[k], fs), g.dist[k]) << e.name;
            for (int t = 0; t < 5; ++t) ASSERT_EQ(greedy_factorize(g.nodes[k], fs, &rng).size(), g.dist[k]);
        }
    }
}
