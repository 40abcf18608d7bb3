#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxfold/coxeter_matrix.hpp"
#include "coxfold/error.hpp"
#include "coxfold/word.hpp"

namespace coxfold {

/// Permutation of S, images[s] = gamma(s).
struct Automorphism {
    std::string name;
    std::vector<Generator> images;

    Generator operator()(Generator s) const { return images.at(s); }

    Word apply(const Word& w) const {
        Word r;
        r.reserve(w.size());
        for (Generator g : w) r.push_back(images.at(g));
        return r;
    }

    static Automorphism identity(std::size_t rank, std::string name = "id") {
        Automorphism a{std::move(name), std::vector<Generator>(rank)};
        std::iota(a.images.begin(), a.images.end(), Generator{0});
        return a;
    }

    /// From 1-based (i, j) pairs meaning gamma(s_i) = s_j; unlisted indices are fixed.
    static Automorphism from_pairs(std::size_t rank, const std::vector<std::pair<Generator, Generator>>& pairs,
                                   std::string name = "") {
        Automorphism a = identity(rank, std::move(name));
        for (auto [i, j] : pairs) a.images.at(i - 1) = j - 1;
        return a;
    }

    nlohmann::json to_json() const {
        std::vector<std::size_t> one_based;
        for (Generator g : images) one_based.push_back(g + 1);
        return {{"name", name}, {"images", one_based}};
    }
};

struct AutomorphismError {
    std::string message;
    std::optional<std::pair<Generator, Generator>> witness;
};

/// Checks that `images` is a bijection of S preserving every label.
inline std::optional<AutomorphismError> validate_automorphism(const CoxeterMatrix& matrix,
                                                              const std::vector<Generator>& images) {
    const std::size_t n = matrix.rank();
    if (images.size() != n) return AutomorphismError{"permutation has wrong size", std::nullopt};
    std::vector<bool> hit(n, false);
    for (Generator g : images) {
        if (g >= n) return AutomorphismError{"image " + std::to_string(g + 1) + " out of range", std::nullopt};
        if (hit[g]) return AutomorphismError{"not a bijection: " + std::to_string(g + 1) + " is hit twice", std::nullopt};
        hit[g] = true;
    }
    for (Generator s = 0; s < n; ++s)
        for (Generator t = s + 1; t < n; ++t) {
            if (matrix(images[s], images[t]) != matrix(s, t)) {
                return AutomorphismError{"label mismatch at (" + std::to_string(s + 1) + "," + std::to_string(t + 1) +
                                             "): m(" + std::to_string(images[s] + 1) + "," +
                                             std::to_string(images[t] + 1) + ")=" +
                                             label_to_string(matrix(images[s], images[t])) + " != m(" +
                                             std::to_string(s + 1) + "," + std::to_string(t + 1) +
                                             ")=" + label_to_string(matrix(s, t)),
                                         std::pair{s, t}};
            }
        }
    return std::nullopt;
}

/// Generating set of the group Gamma. The generated group is never built:
/// orbits and fixedness are decided on the generators.
class AutGroup {
public:
    AutGroup() = default;

    /// Throws InputError naming the first invalid generator.
    AutGroup(const CoxeterMatrix& matrix, std::vector<Automorphism> generators) : generators_(std::move(generators)) {
        if (generators_.empty()) generators_.push_back(Automorphism::identity(matrix.rank()));
        for (const auto& g : generators_) {
            if (auto err = validate_automorphism(matrix, g.images))
                throw InputError("invalid automorphism '" + g.name + "': " + err->message);
        }
    }

    const std::vector<Automorphism>& generators() const noexcept { return generators_; }

    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& g : generators_) j.push_back(g.to_json());
        return j;
    }

private:
    std::vector<Automorphism> generators_;
};

/// Orbits of the generated group: union-find closure over generator images.
inline std::vector<Subset> orbits(const AutGroup& aut, std::size_t rank) {
    std::vector<Generator> parent(rank);
    std::iota(parent.begin(), parent.end(), Generator{0});
    auto find = [&](Generator x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& g : aut.generators())
        for (Generator s = 0; s < rank; ++s) {
            Generator a = find(s), b = find(g(s));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::vector<Subset> result;
    std::vector<std::size_t> slot(rank, rank);
    for (Generator s = 0; s < rank; ++s) {
        Generator r = find(s);
        if (slot[r] == rank) {
            slot[r] = result.size();
            result.emplace_back();
        }
        result[slot[r]].push_back(s);
    }
    return result;
}

/// gamma(w) = w for every generator gamma.
inline bool is_fixed(const Element& w, const AutGroup& aut) {
    for (const auto& g : aut.generators())
        if (!(reduce(w.system(), g.apply(w.normal_form())) == w)) return false;
    return true;
}

/// One folded generator w_I with its weight L(I) = l(w_I).
struct FoldedGenerator {
    Subset orbit;
    Element longest;
    std::size_t weight;
};

/// The dihedral order m(I,J) together with the numbers it was derived from.
struct DihedralDerivation {
    std::size_t i, j; ///< indices into barS
    Subset joined;    ///< K = I u J
    std::optional<std::size_t> longest_length; ///< l(w_K); nullopt when W_K is infinite
    std::size_t weight_i, weight_j;
    Label order;
};

/// barS: orbits with finite W_I, each with w_I and L(I). Infinite orbits go to `dropped`.
inline std::pair<std::vector<FoldedGenerator>, std::vector<Subset>> bar_S(const SystemPtr& sys,
                                                                          const std::vector<Subset>& orbit_partition) {
    std::vector<FoldedGenerator> gens;
    std::vector<Subset> dropped;
    for (const Subset& I : orbit_partition) {
        if (!is_finite(classify_finite(sys->matrix(), I))) {
            dropped.push_back(I);
            continue;
        }
        Element w = longest_element(sys, I);
        gens.push_back({I, w, w.length()});
    }
    return {std::move(gens), std::move(dropped)};
}

/// m(I,J) from l(w_K) = (m/2)(L(I) + L(J)), cross-checked against the order
/// of w_I w_J found by iterated multiplication.
inline DihedralDerivation folded_order(const SystemPtr& sys, const std::vector<FoldedGenerator>& bar, std::size_t i,
                                       std::size_t j) {
    if (i == j) throw PreconditionError("folded_order needs two distinct orbits");
    const FoldedGenerator& I = bar.at(i);
    const FoldedGenerator& J = bar.at(j);
    DihedralDerivation d{i, j, {}, std::nullopt, I.weight, J.weight, kInfinity};
    d.joined = I.orbit;
    d.joined.insert(d.joined.end(), J.orbit.begin(), J.orbit.end());
    std::sort(d.joined.begin(), d.joined.end());
    if (!is_finite(classify_finite(sys->matrix(), d.joined))) return d;

    const Element wk = longest_element(sys, d.joined);
    d.longest_length = wk.length();
    const std::size_t twice = 2 * wk.length();
    const std::size_t sum = I.weight + J.weight;
    nlohmann::json witness = {{"matrix", sys->matrix().entries()},
                              {"rank", sys->rank()},
                              {"I", format_subset(I.orbit)},
                              {"J", format_subset(J.orbit)},
                              {"l(w_K)", wk.length()},
                              {"L(I)", I.weight},
                              {"L(J)", J.weight}};
    if (twice % sum != 0 || twice / sum < 2)
        throw TheoremViolation("dihedral order is not an integer >= 2", witness);
    d.order = static_cast<Label>(twice / sum);

    // the order of w_I w_J must be exactly m
    const Element step = I.longest * J.longest;
    Element power = step;
    std::size_t k = 1;
    while (!power.is_identity() && k <= d.order) {
        power = power * step;
        ++k;
    }
    if (k != d.order) {
        witness["m"] = d.order;
        witness["order_of_product"] = k;
        throw TheoremViolation("order of w_I w_J disagrees with the length formula", witness);
    }
    return d;
}

/// Folded system (W^Gamma, {w_I}).
class FoldedSystem {
public:
    const SystemPtr& system() const noexcept { return sys_; }
    const AutGroup& automorphisms() const noexcept { return aut_; }
    const std::vector<Subset>& orbits() const noexcept { return orbits_; }
    const std::vector<Subset>& dropped() const noexcept { return dropped_; }
    const std::vector<FoldedGenerator>& generators() const noexcept { return gens_; }
    const CoxeterMatrix& matrix() const noexcept { return matrix_; }
    const std::vector<DihedralDerivation>& derivations() const noexcept { return pairs_; }

    std::size_t size() const noexcept { return gens_.size(); }
    const FoldedGenerator& operator[](std::size_t i) const { return gens_.at(i); }

    std::vector<std::size_t> weights() const {
        std::vector<std::size_t> w;
        for (const auto& g : gens_) w.push_back(g.weight);
        return w;
    }

    /// barS index of the orbit containing s, if that orbit has finite W_I.
    std::optional<std::size_t> index_of(Generator s) const {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (std::binary_search(gens_[i].orbit.begin(), gens_[i].orbit.end(), s)) return i;
        return std::nullopt;
    }

    /// w_{J_1} ... w_{J_r}.
    Element evaluate(const std::vector<std::size_t>& orbit_word) const {
        std::vector<Element> factors;
        for (std::size_t i : orbit_word) factors.push_back(gens_.at(i).longest);
        return product(sys_, factors);
    }

    std::string describe_orbit_word(const std::vector<std::size_t>& orbit_word) const {
        std::string s = "[";
        for (std::size_t k = 0; k < orbit_word.size(); ++k)
            s += (k ? "," : "") + format_subset(gens_.at(orbit_word[k]).orbit);
        return s + "]";
    }

    nlohmann::json witness_base() const {
        return {{"rank", sys_->rank()}, {"matrix", sys_->matrix().entries()}, {"automorphisms", aut_.to_json()}};
    }

    friend FoldedSystem fold(const SystemPtr& sys, const AutGroup& aut);

private:
    SystemPtr sys_;
    AutGroup aut_;
    std::vector<Subset> orbits_, dropped_;
    std::vector<FoldedGenerator> gens_;
    CoxeterMatrix matrix_;
    std::vector<DihedralDerivation> pairs_;
};

/// Assembles barS, the weights and the folded Coxeter matrix.
inline FoldedSystem fold(const SystemPtr& sys, const AutGroup& aut) {
    FoldedSystem fs;
    fs.sys_ = sys;
    fs.aut_ = aut;
    for (const auto& g : aut.generators())
        if (auto err = validate_automorphism(sys->matrix(), g.images))
            throw InputError("invalid automorphism '" + g.name + "': " + err->message);
    fs.orbits_ = orbits(aut, sys->rank());
    std::tie(fs.gens_, fs.dropped_) = bar_S(sys, fs.orbits_);
    for (const auto& g : fs.gens_) {
        if (!is_fixed(g.longest, aut) || !(g.longest * g.longest).is_identity())
            throw TheoremViolation("w_I is not a fixed involution",
                                   {{"orbit", format_subset(g.orbit)}, {"w_I", format_word(g.longest.normal_form())}});
    }
    fs.matrix_ = CoxeterMatrix(fs.gens_.size());
    for (std::size_t i = 0; i < fs.gens_.size(); ++i)
        for (std::size_t j = i + 1; j < fs.gens_.size(); ++j) {
            DihedralDerivation d = folded_order(sys, fs.gens_, i, j);
            fs.matrix_.set(i, j, d.order);
            fs.pairs_.push_back(std::move(d));
        }
    return fs;
}

/// Factorization w = w_{J_1} ... w_{J_r} with additive lengths, following the
/// induction on l(w): J_1 is the orbit of a left descent s, w = w_{J_1} x with
/// x distinguished, continue with x. The descent is the smallest one, or a
/// uniformly random one when `rng` is given. Returns barS indices.
inline std::vector<std::size_t> greedy_factorize(const Element& w, const FoldedSystem& fs,
                                                 std::mt19937_64* rng = nullptr) {
    if (!is_fixed(w, fs.automorphisms())) throw PreconditionError("element " + format_word(w.normal_form()) + " is not fixed");
    auto violation = [&](const std::string& what, const Element& at) {
        nlohmann::json wit = fs.witness_base();
        wit["w"] = format_word(w.normal_form());
        wit["at"] = format_word(at.normal_form());
        return TheoremViolation(what, wit);
    };
    std::vector<std::size_t> blocks;
    std::size_t total = 0;
    Element cur = w;
    while (!cur.is_identity()) {
        Subset descents = cur.left_descents();
        Generator s = descents.front();
        if (rng != nullptr) {
            std::uniform_int_distribution<std::size_t> pick(0, descents.size() - 1);
            s = descents[pick(*rng)];
        }
        auto idx = fs.index_of(s);
        if (!idx) throw violation("descent orbit has infinite parabolic subgroup", cur);
        const FoldedGenerator& J = fs[*idx];
        for (Generator t : J.orbit)
            if (!cur.is_left_descent(t)) throw violation("orbit of a descent is not all descents", cur);
        CosetDecomposition d = coset_decompose(cur, J.orbit);
        if (!(d.u == J.longest)) throw violation("parabolic part is not w_J", cur);
        blocks.push_back(*idx);
        total += J.weight;
        cur = d.x;
    }
    if (total != w.length() || !(fs.evaluate(blocks) == w))
        throw violation("factorization does not multiply back with additive lengths", w);
    return blocks;
}

/// lambda(w): length over the folded generators.
inline std::size_t lambda_length(const Element& w, const FoldedSystem& fs) { return greedy_factorize(w, fs).size(); }

struct WeightAdditivity {
    bool length_additive;
    bool lambda_additive;
    bool consistent() const { return length_additive == lambda_additive; }
};

/// Both additivity predicates for the pair (w, w'). They must agree.
inline WeightAdditivity check_weight_additivity(const Element& w, const Element& w2, const FoldedSystem& fs) {
    const Element prod = w * w2;
    if (!is_fixed(w2, fs.automorphisms())) throw PreconditionError("element is not fixed");
    const std::size_t lw = lambda_length(w, fs), lw2 = lambda_length(w2, fs), lp = lambda_length(prod, fs);
    return {prod.length() == w.length() + w2.length(), lp == lw + lw2};
}

/// Folded Exchange Condition. `orbit_word` must be a lambda-reduced
/// expression of w, and lambda(w_I w) <= lambda(w). Returns the (0-based)
/// block i with w_I w = w_{J_1} ... w_{J_p} without block i.
inline std::size_t folded_exchange(const std::vector<std::size_t>& orbit_word, std::size_t I, const FoldedSystem& fs) {
    const SystemPtr& sys = fs.system();
    const Element w = fs.evaluate(orbit_word);
    if (lambda_length(w, fs) != orbit_word.size()) throw PreconditionError("orbit word is not lambda-reduced");
    const FoldedGenerator& gen = fs[I];
    const Element target = gen.longest * w;
    if (lambda_length(target, fs) > orbit_word.size()) throw PreconditionError("not a folded descent");

    nlohmann::json wit = fs.witness_base();
    wit["orbit_word"] = fs.describe_orbit_word(orbit_word);
    wit["I"] = format_subset(gen.orbit);

    auto s_it = std::find_if(gen.orbit.begin(), gen.orbit.end(), [&](Generator s) { return w.is_left_descent(s); });
    if (s_it == gen.orbit.end()) throw TheoremViolation("no generator of I descends w", wit);

    Word concat;
    std::vector<std::size_t> block_of;
    for (std::size_t k = 0; k < orbit_word.size(); ++k)
        for (Generator g : fs[orbit_word[k]].longest.normal_form()) {
            concat.push_back(g);
            block_of.push_back(k);
        }
    if (concat.size() != w.length()) throw TheoremViolation("concatenated reduced words are not reduced", wit);

    const std::size_t letter = exchange(sys, concat, *s_it);
    const std::size_t i = block_of[letter];

    std::vector<std::size_t> prefix(orbit_word.begin(), orbit_word.begin() + static_cast<std::ptrdiff_t>(i));
    const Element z = fs.evaluate(prefix);
    if (!(z.inverse() * gen.longest * z == fs[orbit_word[i]].longest)) {
        wit["block"] = i + 1;
        throw TheoremViolation("z^-1 w_I z differs from w_{J_i}", wit);
    }
    std::vector<std::size_t> rest = orbit_word;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (!(fs.evaluate(rest) == target)) {
        wit["block"] = i + 1;
        throw TheoremViolation("dropping block i does not give w_I w", wit);
    }
    return i;
}

} // namespace coxfold
