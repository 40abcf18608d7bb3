#include <unordered_set>

#include <gtest/gtest.h>

#include "coxfold/catalog.hpp"
#include "coxfold/verifier.hpp"
#include "test_util.hpp"

using namespace coxfold;
using coxfold::testing::set1;

TEST(Enumerate, FiniteSizes) {
    auto a2 = enumerate(CoxeterSystem::create(matrices::type_A(2)));
    EXPECT_EQ(a2.size(), 6u);
    EXPECT_EQ(a2.max_length(), 3u);
    EXPECT_TRUE(a2.complete);
    auto a3 = enumerate(CoxeterSystem::create(matrices::type_A(3)));
    EXPECT_EQ(a3.size(), coxfold::testing::factorial(4));
    EXPECT_EQ(a3.max_length(), 6u);
    EXPECT_EQ(enumerate(CoxeterSystem::create(matrices::type_B(3))).size(), 48u);
    EXPECT_EQ(enumerate(CoxeterSystem::create(matrices::type_H3())).size(), 120u);
    EXPECT_EQ(enumerate(CoxeterSystem::create(matrices::dihedral(5))).size(), 10u);
}

TEST(Enumerate, Radius) {
    auto sys = CoxeterSystem::create(matrices::dihedral(kInfinity));
    auto ball = enumerate(sys, 4);
    EXPECT_EQ(ball.size(), 9u);
    EXPECT_FALSE(ball.complete);
    EXPECT_THROW(enumerate(sys), PreconditionError);
    // a finite group inside the radius is complete
    auto a2 = enumerate(CoxeterSystem::create(matrices::type_A(2)), 10);
    EXPECT_EQ(a2.size(), 6u);
    EXPECT_TRUE(a2.complete);
}

TEST(Enumerate, ClosedUnderInverse) {
    auto sys = CoxeterSystem::create(matrices::type_B(3));
    auto ball = enumerate(sys);
    std::unordered_set<Element, ElementHash> set(ball.elements.begin(), ball.elements.end());
    for (const Element& w : ball.elements) ASSERT_TRUE(set.count(w.inverse()));
    // affine A2 has 3k elements of length k >= 1
    auto tri = enumerate(CoxeterSystem::create(matrices::affine_A_cycle(3)), 3);
    std::vector<std::size_t> layers(4, 0);
    for (const Element& w : tri.elements) ++layers[w.length()];
    EXPECT_EQ(layers, (std::vector<std::size_t>{1, 3, 6, 9}));
}

TEST(FixedSubgroup, Sizes) {
    auto a3 = matrices::type_A(3);
    auto sys = CoxeterSystem::create(a3);
    auto fixed = fixed_subgroup(enumerate(sys), AutGroup(a3, {Automorphism::from_pairs(3, {{1, 3}, {3, 1}})}));
    EXPECT_EQ(fixed.size(), 8u);
    auto d4 = matrices::type_D(4);
    auto d4sys = CoxeterSystem::create(d4);
    auto tri = fixed_subgroup(enumerate(d4sys), AutGroup(d4, {Automorphism::from_pairs(4, {{1, 3}, {3, 4}, {4, 1}})}));
    EXPECT_EQ(tri.size(), 12u);
}

TEST(Presentation, CatalogPasses) {
    for (const auto& e : catalog()) {
        auto sys = CoxeterSystem::create(e.instance.matrix);
        auto fs = fold(sys, AutGroup(e.instance.matrix, e.instance.automorphisms));
        const bool finite = is_finite(classify_finite(e.instance.matrix));
        auto res = presentation_check(fs, finite ? std::nullopt : std::optional<std::size_t>(6));
        EXPECT_EQ(res.check.status, Status::pass) << e.name << ": " << res.check.message;
    }
}

// A fake folded system with a wrong dihedral label must be rejected.
TEST(Presentation, DetectsWrongFoldedMatrix) {
    auto a3 = matrices::type_A(3);
    auto sys = CoxeterSystem::create(a3);
    AutGroup aut(a3, {Automorphism::from_pairs(3, {{1, 3}, {3, 1}})});
    auto fs = fold(sys, aut);
    auto gens = generated_subgroup(fs, std::nullopt);
    auto wrong = abstract_group(CoxeterSystem::create(matrices::dihedral(3)), std::nullopt);
    EXPECT_EQ(gens.nodes.size(), 8u);
    EXPECT_NE(wrong.nodes.size(), gens.nodes.size());
}

TEST(PropertySuite, AllCatalogRowsPass) {
    for (const auto& e : catalog()) {
        VerifyConfig cfg;
        cfg.radius = is_finite(classify_finite(e.instance.matrix)) ? std::nullopt : std::optional<std::size_t>(6);
        Report rep = property_suite(e.instance, cfg);
        EXPECT_TRUE(rep.passed()) << e.name << "\n" << rep.to_text();
        EXPECT_EQ(rep.exit_code(), 0);
    }
}

TEST(PropertySuite, DeterministicAndParallelMatchesSerial) {
    auto inst = catalog()[3].instance; // A5 flip
    VerifyConfig cfg;
    cfg.seed = 42;
    auto a = property_suite(inst, cfg).to_json();
    auto b = property_suite(inst, cfg).to_json();
    cfg.jobs = 4;
    auto c = property_suite(inst, cfg).to_json();
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
}

TEST(PropertySuite, InvalidAutomorphismIsValidationError) {
    Instance inst{matrices::type_A(3), {Automorphism::from_pairs(3, {{1, 2}, {2, 1}}, "bad")}};
    Report rep = property_suite(inst);
    EXPECT_TRUE(rep.validation_failed);
    EXPECT_EQ(rep.exit_code(), 2);
    const CheckResult* v = rep.find("validation");
    ASSERT_NE(v, nullptr);
    EXPECT_EQ(v->status, Status::fail);
    ASSERT_TRUE(v->witness);
    EXPECT_EQ((*v->witness)["pair"], nlohmann::json({1, 3}));
    EXPECT_EQ(rep.find("presentation")->status, Status::skipped);
    auto j = rep.to_json();
    EXPECT_EQ(j["passed"], false);
    EXPECT_EQ(j["version"], 1);
}

TEST(PropertySuite, ReportShape) {
    Report rep = property_suite(catalog()[1].instance);
    auto j = rep.to_json();
    EXPECT_EQ(j["foldedSummary"]["type"], "I2(4)");
    EXPECT_EQ(j["foldedSummary"]["weights"].dump(), "[2,1]");
    EXPECT_EQ(j["orbitSummary"].size(), 2u);
    EXPECT_EQ(j["inputDigest"], digest(catalog()[1].instance));
    for (const auto& c : j["checks"]) EXPECT_EQ(c["status"], "pass") << c.dump();
}

TEST(Roots, PositiveRootCounts) {
    EXPECT_EQ(positive_roots(CoxeterSystem::create(matrices::type_A(3))).size(), 6u);
    EXPECT_EQ(positive_roots(CoxeterSystem::create(matrices::type_D(4))).size(), 12u);
    EXPECT_EQ(positive_roots(CoxeterSystem::create(matrices::type_H3())).size(), 15u);
}
