#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numeric>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxfold/coxeter_matrix.hpp"
#include "coxfold/error.hpp"
#include "coxfold/folding.hpp"
#include "coxfold/input.hpp"
#include "coxfold/word.hpp"

namespace coxfold {

// ---------------------------------------------------------------------------
// Enumeration oracles. Nothing here calls greedy_factorize or the dihedral
// length formula.

/// Elements of W up to a length radius, ordered by (length, normal form).
struct Ball {
    std::vector<Element> elements;
    std::optional<std::size_t> radius; ///< nullopt: full group
    bool complete = false;             ///< closed under all generators

    std::size_t size() const noexcept { return elements.size(); }
    std::size_t max_length() const { return elements.empty() ? 0 : elements.back().length(); }
};

/// BFS over right multiplication. Each layer is deduplicated on the exact
/// action matrix (the representation is faithful), then sorted by normal form.
inline Ball enumerate(const SystemPtr& sys, std::optional<std::size_t> radius = std::nullopt) {
    if (!radius && !is_finite(classify_finite(sys->matrix())))
        throw PreconditionError("full enumeration requested on an infinite group");
    struct Node {
        Word nf;
        Action action;
    };
    Ball ball;
    ball.radius = radius;
    std::vector<Node> layer;
    layer.push_back({Word{}, Action::identity(*sys)});
    for (std::size_t len = 0;; ++len) {
        for (const Node& n : layer) ball.elements.push_back(Element::from_normal_form(sys, n.nf));
        if (radius && len == *radius) {
            // closed iff nothing in the last layer can be lengthened
            ball.complete = std::all_of(layer.begin(), layer.end(), [&](const Node& n) {
                for (Generator s = 0; s < sys->rank(); ++s)
                    if (!n.action.is_right_descent(*sys, s)) return false;
                return true;
            });
            break;
        }
        std::vector<Node> next;
        std::unordered_multimap<std::size_t, std::size_t> index;
        for (const Node& n : layer) {
            for (Generator s = 0; s < sys->rank(); ++s) {
                if (n.action.is_right_descent(*sys, s)) continue;
                Action a = n.action;
                a.right_multiply(*sys, s);
                const std::size_t h = a.forward.hash();
                bool dup = false;
                auto [lo, hi] = index.equal_range(h);
                for (auto it = lo; it != hi && !dup; ++it) dup = next[it->second].action.forward == a.forward;
                if (dup) continue;
                index.emplace(h, next.size());
                Word nf = a.normal_form(*sys);
                next.push_back({std::move(nf), std::move(a)});
            }
        }
        if (next.empty()) {
            ball.complete = true;
            break;
        }
        std::sort(next.begin(), next.end(), [](const Node& a, const Node& b) { return a.nf < b.nf; });
        layer = std::move(next);
    }
    return ball;
}

/// Elements of the ball fixed by every automorphism.
inline std::vector<Element> fixed_subgroup(const Ball& ball, const AutGroup& aut) {
    std::vector<Element> out;
    for (const Element& w : ball.elements)
        if (is_fixed(w, aut)) out.push_back(w);
    return out;
}

/// Positive roots of a finite W, by closing the simple roots under reflections.
inline std::vector<RootVector> positive_roots(const SystemPtr& sys, std::size_t cap = 100000) {
    std::vector<RootVector> roots;
    auto known = [&](const RootVector& v) { return std::find(roots.begin(), roots.end(), v) != roots.end(); };
    for (Generator s = 0; s < sys->rank(); ++s) roots.push_back(simple_root(sys, s));
    for (std::size_t k = 0; k < roots.size(); ++k) {
        for (Generator s = 0; s < sys->rank(); ++s) {
            RootVector v = simple_reflection_action(sys, s, roots[k]);
            if (v.is_positive() && !known(v)) {
                roots.push_back(std::move(v));
                if (roots.size() > cap) throw PreconditionError("root system exceeds cap; group is not finite");
            }
        }
    }
    return roots;
}

/// Number of positive roots sent to negative roots by w, acting letter by letter.
inline std::size_t inversion_count(const Element& w, const std::vector<RootVector>& roots) {
    std::size_t count = 0;
    const Word& nf = w.normal_form();
    for (const RootVector& beta : roots) {
        RootVector v = beta;
        for (auto it = nf.rbegin(); it != nf.rend(); ++it) v = simple_reflection_action(w.system(), *it, v);
        if (v.is_negative()) ++count;
    }
    return count;
}

/// Cayley graph of a group on a generator list: node 0 is the identity,
/// dist is the word length, edges[k][i] the node reached by generator i
/// (or -1 beyond the radius).
struct CayleyGraph {
    std::vector<Element> nodes;
    std::vector<std::size_t> dist;
    std::vector<std::vector<std::size_t>> words; ///< a shortest generator word for each node
    std::vector<std::vector<long>> edges;
    bool complete = false;

    std::optional<std::size_t> find(const Element& e) const {
        auto it = lookup.find(e);
        if (it == lookup.end()) return std::nullopt;
        return it->second;
    }
    std::unordered_map<Element, std::size_t, ElementHash> lookup;
};

/// BFS of the subgroup generated by `gens` (right multiplication), up to
/// `radius` generator steps. Throws if more than `cap` nodes are reached.
inline CayleyGraph cayley_bfs(const SystemPtr& sys, const std::vector<Element>& gens,
                              std::optional<std::size_t> radius, std::size_t cap = 200000) {
    CayleyGraph g;
    auto add = [&](Element e, std::size_t d, std::vector<std::size_t> word) {
        g.lookup.emplace(e, g.nodes.size());
        g.nodes.push_back(std::move(e));
        g.dist.push_back(d);
        g.words.push_back(std::move(word));
        g.edges.emplace_back(gens.size(), -1);
        if (g.nodes.size() > cap) throw PreconditionError("Cayley graph exceeds node cap");
    };
    add(identity(sys), 0, {});
    g.complete = true;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const bool at_edge = radius && g.dist[k] >= *radius;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            Element next = g.nodes[k] * gens[i];
            if (auto found = g.find(next)) {
                g.edges[k][i] = static_cast<long>(*found);
                continue;
            }
            if (at_edge) {
                g.complete = false;
                continue;
            }
            auto word = g.words[k];
            word.push_back(i);
            add(std::move(next), g.dist[k] + 1, std::move(word));
            g.edges[k][i] = static_cast<long>(g.nodes.size() - 1);
        }
    }
    return g;
}

inline CayleyGraph generated_subgroup(const FoldedSystem& fs, std::optional<std::size_t> radius) {
    std::vector<Element> gens;
    for (const auto& g : fs.generators()) gens.push_back(g.longest);
    return cayley_bfs(fs.system(), gens, radius);
}

inline CayleyGraph abstract_group(const SystemPtr& folded, std::optional<std::size_t> radius) {
    std::vector<Element> gens;
    for (Generator s = 0; s < folded->rank(); ++s) gens.push_back(generator(folded, s));
    return cayley_bfs(folded, gens, radius);
}

// ---------------------------------------------------------------------------
// Reports

enum class Status { pass, fail, skipped };

inline std::string to_string(Status s) {
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
    }
    return "?";
}

struct CheckResult {
    std::string name;
    Status status = Status::pass;
    std::string message;
    nlohmann::ordered_json statistics = nlohmann::ordered_json::object();
    std::optional<nlohmann::json> witness;

    void fail(std::string why, nlohmann::json wit) {
        if (status == Status::fail) return; // keep the first witness
        status = Status::fail;
        message = std::move(why);
        witness = std::move(wit);
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["status"] = to_string(status);
        if (!message.empty()) j["message"] = message;
        j["statistics"] = statistics;
        if (witness) j["witness"] = *witness;
        return j;
    }
};

inline constexpr int kReportVersion = 1;

struct Report {
    std::string input_digest;
    nlohmann::ordered_json orbit_summary = nlohmann::ordered_json::array();
    nlohmann::ordered_json folded_summary = nlohmann::ordered_json::object();
    std::vector<CheckResult> checks;
    bool validation_failed = false;

    bool passed() const {
        return !validation_failed &&
               std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == Status::fail; });
    }

    /// 0 all pass, 1 check failure, 2 input/validation error.
    int exit_code() const { return validation_failed ? 2 : passed() ? 0 : 1; }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["version"] = kReportVersion;
        j["inputDigest"] = input_digest;
        j["orbitSummary"] = orbit_summary;
        j["foldedSummary"] = folded_summary;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) j["checks"].push_back(c.to_json());
        j["passed"] = passed();
        return j;
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "input digest: " << input_digest << "\n";
        if (folded_summary.contains("type")) {
            os << "folded: " << folded_summary["type"].get<std::string>() << ", weights "
               << folded_summary["weights"].dump() << "\n";
        }
        for (const auto& c : checks) {
            os << "[" << to_string(c.status) << "] " << c.name;
            if (!c.statistics.empty()) os << " " << c.statistics.dump();
            os << "\n";
            if (!c.message.empty()) os << "    " << c.message << "\n";
            if (c.witness) os << "    witness: " << c.witness->dump() << "\n";
        }
        os << (passed() ? "all checks passed" : "FAILED") << "\n";
        return os.str();
    }
};

/// FNV-1a over the canonical text form of the instance.
inline std::string digest(const Instance& inst) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : to_text(inst)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

struct VerifyConfig {
    std::uint64_t seed = 0;
    std::optional<std::size_t> radius; ///< nullopt: full if W finite, else 8
    std::size_t samples = 200;          ///< sample size when above the exhaustive thresholds
    std::size_t jobs = 1;
    std::size_t exhaustive_elements = 2000;
    std::size_t exhaustive_pairs = 40000;
    std::size_t randomized_factorizations = 50;
    std::size_t exchange_max_lambda = 4;
    std::size_t exhaustive_subset_rank = 12;
};

inline constexpr std::size_t kDefaultInfiniteRadius = 8;

inline std::mt19937_64 check_rng(std::uint64_t seed, const std::string& name) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(std::hash<std::string>{}(name))};
    return std::mt19937_64(seq);
}

/// Indices into [0, n): all of them when n <= limit, else `samples` uniform draws.
inline std::vector<std::size_t> choose_indices(std::size_t n, std::size_t limit, std::size_t samples,
                                               std::mt19937_64& rng, bool& exhaustive) {
    std::vector<std::size_t> idx;
    exhaustive = n <= limit;
    if (exhaustive) {
        idx.resize(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
    } else if (n > 0) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t k = 0; k < samples; ++k) idx.push_back(pick(rng));
    }
    return idx;
}

/// Result of matching the generated fixed subgroup against the abstract
/// folded Coxeter group.
struct PresentationResult {
    CheckResult check;
    CayleyGraph generated;
};

/// Presentation check: the subgroup of W generated by the w_I, with lambda as word
/// length, against the abstract Coxeter group of the folded matrix. The two
/// Cayley graphs are paired from the identity along equally labelled edges;
/// the pairing must be a bijection preserving lengths and every edge. Also
/// checks that l-additivity and lambda-additivity agree on enumerated pairs.
inline PresentationResult presentation_check(const FoldedSystem& fs, std::optional<std::size_t> radius,
                                             const VerifyConfig& cfg = {}) {
    PresentationResult out;
    CheckResult& c = out.check;
    c.name = "presentation";
    auto rng = check_rng(cfg.seed, c.name);

    out.generated = generated_subgroup(fs, radius);
    const CayleyGraph& a = out.generated;
    const SystemPtr folded = CoxeterSystem::create(fs.matrix());
    const CayleyGraph b = abstract_group(folded, radius);

    c.statistics["radius"] = radius ? nlohmann::ordered_json(*radius) : nlohmann::ordered_json("full");
    c.statistics["generated"] = a.nodes.size();
    c.statistics["abstract"] = b.nodes.size();
    std::vector<std::size_t> profile;
    for (std::size_t d : a.dist) {
        if (profile.size() <= d) profile.resize(d + 1, 0);
        ++profile[d];
    }
    c.statistics["lambda_profile"] = profile;

    nlohmann::json wit = fs.witness_base();
    if (a.nodes.size() != b.nodes.size() || a.complete != b.complete) {
        wit["generated"] = a.nodes.size();
        wit["abstract"] = b.nodes.size();
        c.fail("generated subgroup and folded Coxeter group differ in size", wit);
        return out;
    }
    // abstract lengths are Coxeter lengths
    for (std::size_t k = 0; k < b.nodes.size(); ++k)
        if (b.nodes[k].length() != b.dist[k]) {
            wit["abstract_word"] = format_word(b.nodes[k].normal_form());
            c.fail("BFS distance differs from Coxeter length in the folded group", wit);
            return out;
        }

    std::vector<long> pair(a.nodes.size(), -1), back(b.nodes.size(), -1);
    pair[0] = 0;
    back[0] = 0;
    std::vector<std::size_t> queue{0};
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const std::size_t x = queue[q];
        const std::size_t y = static_cast<std::size_t>(pair[x]);
        if (a.dist[x] != b.dist[y]) {
            wit["element"] = format_word(a.nodes[x].normal_form());
            c.fail("lambda differs from folded Coxeter length", wit);
            return out;
        }
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const long nx = a.edges[x][i], ny = b.edges[y][i];
            if ((nx < 0) != (ny < 0)) {
                wit["element"] = format_word(a.nodes[x].normal_form());
                wit["generator"] = format_subset(fs[i].orbit);
                c.fail("edge present in one Cayley graph only", wit);
                return out;
            }
            if (nx < 0) continue;
            if (pair[nx] < 0 && back[ny] < 0) {
                pair[nx] = ny;
                back[ny] = nx;
                queue.push_back(static_cast<std::size_t>(nx));
            } else if (pair[nx] != ny) {
                wit["element"] = format_word(a.nodes[x].normal_form());
                wit["generator"] = format_subset(fs[i].orbit);
                c.fail("labelled Cayley graphs are not isomorphic", wit);
                return out;
            }
        }
    }
    if (queue.size() != a.nodes.size()) {
        c.fail("pairing does not cover the generated subgroup", wit);
        return out;
    }

    // length transfer on pairs whose product stays inside the enumerated ball
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::size_t n = a.nodes.size();
    bool exhaustive = true;
    if (n * n <= cfg.exhaustive_pairs) {
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) pairs.emplace_back(x, y);
    } else {
        exhaustive = false;
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t k = 0; k < cfg.samples; ++k) pairs.emplace_back(pick(rng), pick(rng));
    }
    std::size_t tested = 0;
    for (auto [x, y] : pairs) {
        if (radius && a.dist[x] + a.dist[y] > *radius) continue;
        const Element z = a.nodes[x] * a.nodes[y];
        auto iz = a.find(z);
        if (!iz) {
            wit["product"] = format_word(z.normal_form());
            c.fail("product of fixed elements left the generated subgroup", wit);
            return out;
        }
        const bool l_add = z.length() == a.nodes[x].length() + a.nodes[y].length();
        const bool lam_add = a.dist[*iz] == a.dist[x] + a.dist[y];
        ++tested;
        if (l_add != lam_add) {
            wit["w"] = format_word(a.nodes[x].normal_form());
            wit["w'"] = format_word(a.nodes[y].normal_form());
            c.fail("l-additivity and lambda-additivity disagree", wit);
            return out;
        }
    }
    c.statistics["length_transfer_pairs"] = tested;
    c.statistics["exhaustive"] = exhaustive;
    return out;
}

// ---------------------------------------------------------------------------
// Property suite

namespace detail {

struct SuiteData {
    const Instance* inst;
    SystemPtr sys;
    FoldedSystem fs;
    Ball ball;
    std::vector<Element> fixed;
    std::size_t radius = 0; ///< W-length radius of the ball, for infinite W
    bool finite = false;
    VerifyConfig cfg;
};

template <class Body>
CheckResult run_check(const std::string& name, const SuiteData& d, Body body) {
    CheckResult c;
    c.name = name;
    try {
        auto rng = check_rng(d.cfg.seed, name);
        body(c, rng);
    } catch (const TheoremViolation& e) {
        c.fail(e.what(), e.witness());
    } catch (const std::exception& e) {
        c.fail(std::string("error: ") + e.what(), d.fs.witness_base());
    }
    return c;
}

inline CheckResult check_finiteness(const SuiteData& d) {
    return run_check("finiteness_criterion", d, [&](CheckResult& c, std::mt19937_64& rng) {
        const CoxeterMatrix& m = d.sys->matrix();
        const std::size_t r = m.rank();
        std::vector<std::uint64_t> masks;
        if (r <= d.cfg.exhaustive_subset_rank) {
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) masks.push_back(mask);
        } else {
            std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << r) - 1);
            for (std::size_t k = 0; k < d.cfg.samples; ++k) masks.push_back(pick(rng));
        }
        std::size_t finite = 0;
        for (std::uint64_t mask : masks) {
            Subset I;
            for (Generator s = 0; s < r; ++s)
                if (mask >> s & 1U) I.push_back(s);
            auto cls = classify_finite(m, I);
            auto w = greedy_longest(d.sys, I, greedy_step_bound(m, I));
            if (is_finite(cls) != w.has_value()) {
                c.fail("classification and greedy longest-element termination disagree",
                       {{"subset", format_subset(I)}, {"classification", to_string(cls)}});
                return;
            }
            if (w) {
                ++finite;
                std::size_t expected = 0;
                for (const auto& l : std::get<std::vector<FiniteTypeLabel>>(cls)) expected += l.longest_length();
                if (w->length() != expected) {
                    c.fail("greedy longest element has the wrong length",
                           {{"subset", format_subset(I)}, {"length", w->length()}, {"expected", expected}});
                    return;
                }
            }
        }
        c.statistics["subsets"] = masks.size();
        c.statistics["finite"] = finite;
        c.statistics["exhaustive"] = r <= d.cfg.exhaustive_subset_rank;
    });
}

inline CheckResult check_longest(const SuiteData& d) {
    return run_check("longest_elements", d, [&](CheckResult& c, std::mt19937_64&) {
        for (const auto& g : d.fs.generators()) {
            const Element& w = g.longest;
            bool ok = is_fixed(w, d.fs.automorphisms()) && (w * w).is_identity();
            for (Generator s : g.orbit) ok = ok && w.is_left_descent(s) && w.is_right_descent(s);
            if (!ok) {
                c.fail("w_I is not a fixed involution with every s in I a descent",
                       {{"orbit", format_subset(g.orbit)}, {"w_I", format_word(w.normal_form())}});
                return;
            }
        }
        c.statistics["generators"] = d.fs.size();
    });
}

} // namespace detail

/// Runs every check on an instance. Validation failures produce a report
/// with the remaining checks skipped.
inline Report property_suite(const Instance& inst, const VerifyConfig& cfg = {}) {
    Report rep;
    rep.input_digest = digest(inst);
    static const std::vector<std::string> kChecks = {
        "dihedral_orders",  "finiteness_criterion", "fold",           "folded_exchange", "generation",
        "lambda_well_defined", "longest_elements", "presentation", "reduced_expressions", "weight_additivity"};

    CheckResult validation;
    validation.name = "validation";
    std::vector<std::string> problems = inst.matrix.validate();
    for (const auto& a : inst.automorphisms)
        if (auto err = validate_automorphism(inst.matrix, a.images)) {
            nlohmann::json wit = {{"automorphism", a.name}, {"message", err->message}};
            if (err->witness)
                wit["pair"] = {err->witness->first + 1, err->witness->second + 1};
            validation.fail("invalid automorphism '" + a.name + "': " + err->message, wit);
        }
    if (!problems.empty()) validation.fail("invalid Coxeter matrix: " + problems.front(), {{"errors", problems}});
    if (validation.status == Status::fail) {
        rep.validation_failed = true;
        rep.checks.push_back(validation);
        for (const auto& n : kChecks) rep.checks.push_back(CheckResult{n, Status::skipped, "validation failed", {}, {}});
        std::sort(rep.checks.begin(), rep.checks.end(), [](auto& x, auto& y) { return x.name < y.name; });
        return rep;
    }
    rep.checks.push_back(validation);

    detail::SuiteData d;
    d.inst = &inst;
    d.cfg = cfg;
    d.sys = CoxeterSystem::create(inst.matrix);
    AutGroup aut(inst.matrix, inst.automorphisms);
    for (const Subset& o : orbits(aut, inst.matrix.rank())) {
        nlohmann::ordered_json j;
        j["orbit"] = format_subset(o);
        j["finite"] = is_finite(classify_finite(inst.matrix, o));
        rep.orbit_summary.push_back(j);
    }

    CheckResult fold_check;
    fold_check.name = "fold";
    try {
        d.fs = fold(d.sys, aut);
    } catch (const TheoremViolation& e) {
        fold_check.fail(e.what(), e.witness());
    } catch (const std::exception& e) {
        fold_check.fail(std::string("error: ") + e.what(), {});
    }
    if (fold_check.status == Status::fail) {
        rep.checks.push_back(fold_check);
        for (const auto& n : kChecks)
            if (n != "fold") rep.checks.push_back(CheckResult{n, Status::skipped, "fold failed", {}, {}});
        std::sort(rep.checks.begin(), rep.checks.end(), [](auto& x, auto& y) { return x.name < y.name; });
        return rep;
    }
    fold_check.statistics["generators"] = d.fs.size();
    fold_check.statistics["dropped_orbits"] = d.fs.dropped().size();
    rep.checks.push_back(fold_check);

    {
        auto& fsum = rep.folded_summary;
        fsum["type"] = describe_type(d.fs.matrix());
        fsum["weights"] = d.fs.weights();
        fsum["matrix"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < d.fs.size(); ++i) {
            std::vector<std::string> row;
            for (std::size_t j = 0; j < d.fs.size(); ++j) row.push_back(label_to_string(d.fs.matrix()(i, j)));
            fsum["matrix"].push_back(row);
        }
        fsum["barS"] = nlohmann::ordered_json::array();
        for (const auto& g : d.fs.generators()) {
            nlohmann::ordered_json j;
            j["orbit"] = format_subset(g.orbit);
            j["weight"] = g.weight;
            j["w_I"] = format_word(g.longest.normal_form());
            fsum["barS"].push_back(j);
        }
    }

    d.finite = is_finite(classify_finite(inst.matrix));
    d.radius = cfg.radius.value_or(kDefaultInfiniteRadius);
    const std::optional<std::size_t> wradius = d.finite && !cfg.radius ? std::nullopt : std::optional(d.radius);
    d.ball = enumerate(d.sys, wradius);
    d.fixed = fixed_subgroup(d.ball, aut);

    // lambda ball: lambda <= l, so radius d.radius covers every fixed element of the W-ball
    const std::optional<std::size_t> lradius = d.ball.complete ? std::nullopt : std::optional(d.radius);
    PresentationResult pres;
    try {
        pres = presentation_check(d.fs, lradius, cfg);
    } catch (const std::exception& e) {
        pres.check.name = "presentation";
        pres.check.fail(std::string("error: ") + e.what(), d.fs.witness_base());
    }
    const CayleyGraph& gen = pres.generated;

    using Task = std::function<CheckResult()>;
    std::vector<Task> tasks;

    tasks.emplace_back([&] { return detail::check_finiteness(d); });
    tasks.emplace_back([&] { return detail::check_longest(d); });

    tasks.emplace_back([&] {
        return detail::run_check("generation", d, [&](CheckResult& c, std::mt19937_64& rng) {
            bool ex = false;
            auto idx = choose_indices(d.fixed.size(), d.cfg.exhaustive_elements, d.cfg.samples, rng, ex);
            for (std::size_t k : idx) greedy_factorize(d.fixed[k], d.fs);
            for (const Element& w : d.fixed)
                if (!gen.find(w)) {
                    c.fail("fixed element missing from the subgroup generated by the w_I",
                           {{"w", format_word(w.normal_form())}});
                    return;
                }
            std::size_t gen_in_ball = 0;
            for (const Element& e : gen.nodes)
                if (d.ball.complete || e.length() <= d.radius) ++gen_in_ball;
            if (gen_in_ball != d.fixed.size()) {
                c.fail("generated subgroup and fixed-point set differ", {{"fixed", d.fixed.size()}, {"generated", gen_in_ball}});
                return;
            }
            c.statistics["fixed_elements"] = d.fixed.size();
            c.statistics["factorized"] = idx.size();
            c.statistics["exhaustive"] = ex;
        });
    });

    tasks.emplace_back([&] {
        return detail::run_check("lambda_well_defined", d, [&](CheckResult& c, std::mt19937_64& rng) {
            bool ex = false;
            auto idx = choose_indices(d.fixed.size(), d.cfg.exhaustive_elements, d.cfg.samples, rng, ex);
            std::size_t runs = 0;
            for (std::size_t k : idx) {
                const Element& w = d.fixed[k];
                const std::size_t r = greedy_factorize(w, d.fs).size();
                auto node = gen.find(w);
                if (!node) {
                    c.fail("fixed element missing from the generated subgroup", {{"w", format_word(w.normal_form())}});
                    return;
                }
                const std::size_t bfs = gen.dist[*node];
                if (r != bfs) {
                    c.fail("greedy factorization length differs from BFS lambda",
                           {{"w", format_word(w.normal_form())}, {"greedy", r}, {"bfs", bfs}});
                    return;
                }
                for (std::size_t t = 0; t < d.cfg.randomized_factorizations; ++t) {
                    auto f = greedy_factorize(w, d.fs, &rng);
                    ++runs;
                    if (f.size() != r) {
                        c.fail("randomized greedy factorizations disagree on length",
                               {{"w", format_word(w.normal_form())},
                                {"smallest_choice", d.fs.describe_orbit_word(greedy_factorize(w, d.fs))},
                                {"random_choice", d.fs.describe_orbit_word(f)}});
                        return;
                    }
                }
            }
            c.statistics["elements"] = idx.size();
            c.statistics["randomized_runs"] = runs;
            c.statistics["exhaustive"] = ex;
        });
    });

    tasks.emplace_back([&] {
        return detail::run_check("reduced_expressions", d, [&](CheckResult& c, std::mt19937_64& rng) {
            bool ex = false;
            auto idx = choose_indices(d.fixed.size(), d.cfg.exhaustive_elements, d.cfg.samples, rng, ex);
            for (std::size_t k : idx) {
                const Element& w = d.fixed[k];
                auto node = gen.find(w);
                if (!node) {
                    c.fail("fixed element missing from the generated subgroup", {{"w", format_word(w.normal_form())}});
                    return;
                }
                // a shortest orbit word found by BFS, independent of the greedy procedure
                const auto& word = gen.words[*node];
                std::size_t total = 0;
                Word concat;
                for (std::size_t i : word) {
                    total += d.fs[i].weight;
                    const Word& nf = d.fs[i].longest.normal_form();
                    concat.insert(concat.end(), nf.begin(), nf.end());
                }
                if (total != w.length() || reduce(d.sys, concat).length() != concat.size()) {
                    c.fail("lambda-reduced expression is not length-additive",
                           {{"w", format_word(w.normal_form())}, {"orbit_word", d.fs.describe_orbit_word(word)}});
                    return;
                }
            }
            c.statistics["elements"] = idx.size();
            c.statistics["exhaustive"] = ex;
        });
    });

    tasks.emplace_back([&] {
        return detail::run_check("dihedral_orders", d, [&](CheckResult& c, std::mt19937_64&) {
            std::size_t finite_pairs = 0;
            for (std::size_t i = 0; i < d.fs.size(); ++i)
                for (std::size_t j = 0; j < d.fs.size(); ++j) {
                    if (i == j) continue;
                    const Label m = d.fs.matrix()(i, j);
                    const Element& wi = d.fs[i].longest;
                    const Element& wj = d.fs[j].longest;
                    // alternating products with k factors, starting from w_I and from w_J
                    const std::size_t limit = m == kInfinity ? 2 * d.radius : m;
                    std::vector<Element> from_i{identity(d.sys)}, from_j{identity(d.sys)};
                    for (std::size_t k = 1; k <= limit; ++k) {
                        from_i.push_back(from_i.back() * (k % 2 == 1 ? wi : wj));
                        from_j.push_back(from_j.back() * (k % 2 == 1 ? wj : wi));
                    }
                    nlohmann::json wit = {{"I", format_subset(d.fs[i].orbit)},
                                          {"J", format_subset(d.fs[j].orbit)},
                                          {"m", label_to_string(m)}};
                    for (std::size_t k = 1; k < limit; ++k)
                        if (from_i[k] == from_j[k]) {
                            wit["factors"] = k;
                            c.fail("alternating products coincide before m factors", wit);
                            return;
                        }
                    if (m == kInfinity) continue;
                    ++finite_pairs;
                    if (!(from_i[m] == from_j[m])) {
                        c.fail("alternating products with m factors differ", wit);
                        return;
                    }
                    Subset K = d.fs[i].orbit;
                    K.insert(K.end(), d.fs[j].orbit.begin(), d.fs[j].orbit.end());
                    std::sort(K.begin(), K.end());
                    const std::size_t bound2 = m * (d.fs[i].weight + d.fs[j].weight);
                    for (std::size_t k = 0; k <= m; ++k)
                        if (2 * from_i[k].length() > bound2 || 2 * from_j[k].length() > bound2) {
                            wit["element"] = format_word(from_i[k].normal_form());
                            c.fail("dihedral fixed element longer than (m/2)(L(I)+L(J))", wit);
                            return;
                        }
                    if (!(from_i[m] == longest_element(d.sys, K)) || 2 * from_i[m].length() != bound2) {
                        c.fail("w_K is not the m-fold alternating product", wit);
                        return;
                    }
                }
            c.statistics["ordered_pairs_finite"] = finite_pairs;
        });
    });

    tasks.emplace_back([&] {
        return detail::run_check("weight_additivity", d, [&](CheckResult& c, std::mt19937_64& rng) {
            const std::size_t n = d.fixed.size();
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            const bool ex = n * n <= d.cfg.exhaustive_pairs;
            if (ex) {
                for (std::size_t x = 0; x < n; ++x)
                    for (std::size_t y = 0; y < n; ++y) pairs.emplace_back(x, y);
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, n - 1);
                for (std::size_t k = 0; k < d.cfg.samples; ++k) pairs.emplace_back(pick(rng), pick(rng));
            }
            std::size_t tested = 0, additive = 0;
            for (auto [x, y] : pairs) {
                const Element& w = d.fixed[x];
                const Element& w2 = d.fixed[y];
                WeightAdditivity r = check_weight_additivity(w, w2, d.fs);
                ++tested;
                if (r.length_additive) ++additive;
                if (!r.consistent()) {
                    c.fail("l(ww') = l(w)+l(w') and lambda(ww') = lambda(w)+lambda(w') disagree",
                           {{"w", format_word(w.normal_form())},
                            {"w'", format_word(w2.normal_form())},
                            {"length_additive", r.length_additive},
                            {"lambda_additive", r.lambda_additive}});
                    return;
                }
            }
            c.statistics["pairs"] = tested;
            c.statistics["additive_pairs"] = additive;
            c.statistics["exhaustive"] = ex;
        });
    });

    tasks.emplace_back([&] {
        return detail::run_check("folded_exchange", d, [&](CheckResult& c, std::mt19937_64&) {
            std::size_t cases = 0;
            for (const Element& w : d.fixed) {
                const auto greedy = greedy_factorize(w, d.fs);
                if (greedy.size() > d.cfg.exchange_max_lambda) continue;
                auto node = gen.find(w);
                if (!node) {
                    c.fail("fixed element missing from the generated subgroup", {{"w", format_word(w.normal_form())}});
                    return;
                }
                const auto& bfs_word = gen.words[*node];
                for (std::size_t I = 0; I < d.fs.size(); ++I) {
                    const Element target = d.fs[I].longest * w;
                    const std::size_t lt = lambda_length(target, d.fs);
                    if (lt == greedy.size()) {
                        c.fail("lambda(w_I w) = lambda(w)",
                               {{"w", format_word(w.normal_form())}, {"I", format_subset(d.fs[I].orbit)}});
                        return;
                    }
                    if (lt > greedy.size()) continue;
                    folded_exchange(greedy, I, d.fs);
                    folded_exchange(bfs_word, I, d.fs);
                    ++cases;
                }
            }
            c.statistics["max_lambda"] = d.cfg.exchange_max_lambda;
            c.statistics["cases"] = cases;
        });
    });

    std::vector<CheckResult> results;
    if (cfg.jobs <= 1) {
        for (auto& t : tasks) results.push_back(t());
    } else {
        for (std::size_t start = 0; start < tasks.size(); start += cfg.jobs) {
            std::vector<std::future<CheckResult>> batch;
            for (std::size_t k = start; k < std::min(tasks.size(), start + cfg.jobs); ++k)
                batch.push_back(std::async(std::launch::async, tasks[k]));
            for (auto& f : batch) results.push_back(f.get());
        }
    }
    results.push_back(pres.check);
    for (auto& r : results) rep.checks.push_back(std::move(r));
    std::sort(rep.checks.begin(), rep.checks.end(), [](auto& x, auto& y) { return x.name < y.name; });
    return rep;
}

} // namespace coxfold
