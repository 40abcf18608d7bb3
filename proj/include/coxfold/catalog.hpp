#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxfold/coxeter_matrix.hpp"
#include "coxfold/folding.hpp"
#include "coxfold/input.hpp"
#include "coxfold/verifier.hpp"

namespace coxfold {

/// A built-in instance with its expected folding.
struct CatalogEntry {
    std::string name;
    Instance instance;
    std::string expected_type;
    std::vector<std::size_t> expected_weights;
    std::optional<std::size_t> expected_fixed_order; ///< nullopt for infinite W
    bool slow = false;
};

namespace detail {

inline Instance flip_instance(CoxeterMatrix m, const std::vector<std::pair<Generator, Generator>>& pairs,
                              const std::string& name) {
    Instance inst{std::move(m), {}};
    inst.automorphisms.push_back(Automorphism::from_pairs(inst.matrix.rank(), pairs, name));
    return inst;
}

} // namespace detail

/// Catalog instances (indices 1-based in the pair lists).
inline std::vector<CatalogEntry> catalog(bool include_slow = false) {
    using matrices::type_A;
    std::vector<CatalogEntry> rows;
    rows.push_back({"A2 flip", detail::flip_instance(type_A(2), {{1, 2}, {2, 1}}, "flip"), "A1", {3}, 2});
    rows.push_back({"A3 flip", detail::flip_instance(type_A(3), {{1, 3}, {3, 1}}, "flip"), "I2(4)", {2, 1}, 8});
    rows.push_back({"A4 flip", detail::flip_instance(type_A(4), {{1, 4}, {4, 1}, {2, 3}, {3, 2}}, "flip"), "I2(4)",
                    {2, 3}, 8});
    rows.push_back({"A5 flip", detail::flip_instance(type_A(5), {{1, 5}, {5, 1}, {2, 4}, {4, 2}}, "flip"), "B3",
                    {2, 2, 1}, 48});
    // D4: centre 2, leaves 1, 3, 4
    rows.push_back({"D4 triality", detail::flip_instance(matrices::type_D(4), {{1, 3}, {3, 4}, {4, 1}}, "triality"),
                    "I2(6)", {3, 1}, 12});
    rows.push_back({"D4 swap", detail::flip_instance(matrices::type_D(4), {{3, 4}, {4, 3}}, "swap"), "B3", {1, 1, 2},
                    48});
    // triangle; the flip swaps 1 and 2 and fixes 3
    rows.push_back({"affine A2 flip", detail::flip_instance(matrices::affine_A_cycle(3), {{1, 2}, {2, 1}}, "flip"),
                    "I2(inf)", {3, 1}, std::nullopt});
    rows.push_back({"infinite dihedral flip",
                    detail::flip_instance(matrices::dihedral(kInfinity), {{1, 2}, {2, 1}}, "flip"), "trivial", {},
                    std::nullopt});
    if (include_slow) {
        // E6 labelled as path 1-2-3-5-6 with 4 attached to 3, so the
        // orbits sort as {1,6}, {2,5}, {3}, {4}
        CoxeterMatrix e6(6);
        e6.set(0, 1, 3);
        e6.set(1, 2, 3);
        e6.set(2, 4, 3);
        e6.set(4, 5, 3);
        e6.set(2, 3, 3);
        rows.push_back({"E6 flip", detail::flip_instance(e6, {{1, 6}, {6, 1}, {2, 5}, {5, 2}}, "flip"), "F4",
                        {2, 2, 1, 1}, 1152, true});
    }
    return rows;
}

/// Computed values for one catalog entry, next to the expected ones.
struct CatalogRow {
    std::string name;
    std::string expected_type, computed_type;
    std::vector<std::size_t> expected_weights, computed_weights;
    std::optional<std::size_t> expected_fixed_order;
    std::size_t computed_fixed_order = 0; ///< fixed elements in the enumerated ball
    std::size_t ball_radius = 0;          ///< 0 when W was enumerated in full
    bool presentation_ok = false;
    std::vector<std::string> derivations; ///< l(w_K) = (m/2)(L(I)+L(J)) lines
    double seconds = 0.0;
    std::string error;

    bool match() const {
        if (!error.empty() || !presentation_ok) return false;
        if (computed_type != expected_type || computed_weights != expected_weights) return false;
        if (expected_fixed_order) return computed_fixed_order == *expected_fixed_order;
        // infinite W: the trivial folding must leave only the identity fixed
        return !expected_weights.empty() || computed_fixed_order == 1;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["expected_type"] = expected_type;
        j["computed_type"] = computed_type;
        j["expected_weights"] = expected_weights;
        j["computed_weights"] = computed_weights;
        j["expected_fixed_order"] =
            expected_fixed_order ? nlohmann::ordered_json(*expected_fixed_order) : nlohmann::ordered_json(nullptr);
        j["computed_fixed_order"] = computed_fixed_order;
        j["ball_radius"] = ball_radius == 0 ? nlohmann::ordered_json("full") : nlohmann::ordered_json(ball_radius);
        j["presentation"] = presentation_ok;
        j["derivations"] = derivations;
        if (!error.empty()) j["error"] = error;
        j["match"] = match();
        return j;
    }
};

inline std::string derivation_line(const FoldedSystem& fs, const DihedralDerivation& d) {
    std::string s = format_subset(fs[d.i].orbit) + "," + format_subset(fs[d.j].orbit) + ": ";
    if (!d.longest_length) return s + "W_K infinite, m = inf";
    return s + "l(w_K)=" + std::to_string(*d.longest_length) + " = (" + label_to_string(d.order) + "/2)(" +
           std::to_string(d.weight_i) + "+" + std::to_string(d.weight_j) + "), m = " + label_to_string(d.order);
}

/// Folds the entry and checks it against brute-force enumeration. Infinite
/// groups are checked on a ball of the given radius.
inline CatalogRow run_catalog_entry(const CatalogEntry& e, std::size_t radius = kDefaultInfiniteRadius) {
    CatalogRow row;
    row.name = e.name;
    row.expected_type = e.expected_type;
    row.expected_weights = e.expected_weights;
    row.expected_fixed_order = e.expected_fixed_order;
    const auto start = std::chrono::steady_clock::now();
    try {
        const SystemPtr sys = CoxeterSystem::create(e.instance.matrix);
        const AutGroup aut(e.instance.matrix, e.instance.automorphisms);
        const FoldedSystem fs = fold(sys, aut);
        row.computed_type = describe_type(fs.matrix());
        row.computed_weights = fs.weights();
        for (const auto& d : fs.derivations()) row.derivations.push_back(derivation_line(fs, d));

        const bool finite = is_finite(classify_finite(e.instance.matrix));
        const Ball ball = enumerate(sys, finite ? std::nullopt : std::optional(radius));
        row.ball_radius = finite ? 0 : radius;
        row.computed_fixed_order = fixed_subgroup(ball, aut).size();
        auto pres = presentation_check(fs, finite ? std::nullopt : std::optional(radius));
        row.presentation_ok = pres.check.status == Status::pass;
    } catch (const std::exception& ex) {
        row.error = ex.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

} // namespace coxfold
