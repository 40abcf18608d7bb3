#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "coxfold/coxeter_matrix.hpp"
#include "coxfold/cyclotomic.hpp"
#include "coxfold/error.hpp"

namespace coxfold {

/// Sequence of generator indices (0-based).
using Word = std::vector<Generator>;

/// 1-based, space separated: the CLI word format.
inline std::string format_word(const Word& w) {
    std::string s;
    for (Generator g : w) s += (s.empty() ? "" : " ") + std::to_string(g + 1);
    return s;
}

inline std::string format_subset(const Subset& I) {
    std::string s = "{";
    for (std::size_t k = 0; k < I.size(); ++k) s += (k ? "," : "") + std::to_string(I[k] + 1);
    return s + "}";
}

/// Parses "2 1 3 2" (1-based) against a rank.
inline Word parse_word(const std::string& text, std::size_t rank) {
    std::istringstream in(text);
    Word w;
    std::string tok;
    while (in >> tok) {
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(tok, &pos);
        } catch (const std::exception&) {
            throw InputError("bad word letter '" + tok + "'");
        }
        if (pos != tok.size() || v < 1 || static_cast<std::size_t>(v) > rank)
            throw InputError("bad word letter '" + tok + "' (rank " + std::to_string(rank) + ")");
        w.push_back(static_cast<Generator>(v - 1));
    }
    return w;
}

class CoxeterSystem;
using SystemPtr = std::shared_ptr<const CoxeterSystem>;

/// A Coxeter matrix together with the scalars 2cos(pi/m(s,t)) of its
/// geometric representation.
class CoxeterSystem {
public:
    /// Validates the matrix. A rank-0 matrix gives the trivial group.
    static SystemPtr create(CoxeterMatrix matrix, std::size_t rank_cap = kDefaultRankCap,
                            std::size_t degree_cap = kDefaultDegreeCap) {
        if (matrix.rank() > 0) matrix.require_valid(rank_cap);
        return SystemPtr(new CoxeterSystem(std::move(matrix), degree_cap));
    }

    const CoxeterMatrix& matrix() const noexcept { return matrix_; }
    const ContextPtr& context() const noexcept { return ctx_; }
    std::size_t rank() const noexcept { return matrix_.rank(); }
    std::size_t degree() const noexcept { return ctx_->degree(); }

    struct Neighbour {
        Generator t;
        bool unit; ///< coefficient is exactly 1 (label 3)
        std::vector<Rational> coeff;
    };

    /// Generators t with m(s,t) >= 3, i.e. a nonzero coefficient 2cos(pi/m(s,t)).
    const std::vector<Neighbour>& neighbours(Generator s) const { return neighbours_.at(s); }

    CycloReal coefficient(Generator s, Generator t) const {
        return s == t ? CycloReal(ctx_, Rational(-2)) : two_cos_pi_over(matrix_(s, t), ctx_);
    }

private:
    CoxeterSystem(CoxeterMatrix matrix, std::size_t degree_cap)
        : matrix_(std::move(matrix)), ctx_(make_context(matrix_, degree_cap)), neighbours_(matrix_.rank()) {
        for (Generator s = 0; s < rank(); ++s)
            for (Generator t = 0; t < rank(); ++t) {
                if (s == t || matrix_(s, t) == 2) continue;
                CycloReal c = two_cos_pi_over(matrix_(s, t), ctx_);
                neighbours_[s].push_back({t, matrix_(s, t) == 3, {c.coeffs().begin(), c.coeffs().end()}});
            }
    }

    CoxeterMatrix matrix_;
    ContextPtr ctx_;
    std::vector<std::vector<Neighbour>> neighbours_;
};

/// Vector in the simple-root basis.
struct RootVector {
    std::vector<CycloReal> coords;

    bool is_positive() const {
        bool any = false;
        for (const auto& c : coords) {
            int s = c.sign();
            if (s < 0) return false;
            any = any || s > 0;
        }
        return any;
    }
    bool is_negative() const {
        bool any = false;
        for (const auto& c : coords) {
            int s = c.sign();
            if (s > 0) return false;
            any = any || s < 0;
        }
        return any;
    }
    friend bool operator==(const RootVector&, const RootVector&) = default;
};

inline RootVector simple_root(const SystemPtr& sys, Generator s) {
    RootVector v;
    for (Generator t = 0; t < sys->rank(); ++t) v.coords.emplace_back(sys->context(), Rational(t == s ? 1 : 0));
    return v;
}

/// sigma_s(v) = v - 2B(alpha_s, v) alpha_s: only coordinate s changes.
inline RootVector simple_reflection_action(const SystemPtr& sys, Generator s, const RootVector& v) {
    if (s >= sys->rank()) throw InputError("generator out of range");
    RootVector r = v;
    CycloReal acc = -v.coords[s];
    for (const auto& nb : sys->neighbours(s)) acc = acc + sys->coefficient(s, nb.t) * v.coords[nb.t];
    r.coords[s] = acc;
    return r;
}

namespace detail {

// rank x rank matrix of field elements, column j = image of alpha_j.
class RootMatrix {
public:
    RootMatrix() = default;
    RootMatrix(std::size_t rank, std::size_t degree) : rank_(rank), deg_(degree), data_(rank * rank * degree) {
        for (std::size_t i = 0; i < rank; ++i) data_[(i * rank + i) * deg_] = Rational(1);
    }

    std::span<Rational> at(std::size_t i, std::size_t j) { return {data_.data() + (i * rank_ + j) * deg_, deg_}; }
    std::span<const Rational> at(std::size_t i, std::size_t j) const {
        return {data_.data() + (i * rank_ + j) * deg_, deg_};
    }

    // M <- M sigma_s
    void col_reflect(const CoxeterSystem& sys, Generator s) {
        const ArithContext& ctx = *sys.context();
        for (const auto& nb : sys.neighbours(s)) {
            for (std::size_t i = 0; i < rank_; ++i) {
                auto src = at(i, s);
                auto dst = at(i, nb.t);
                if (nb.unit) {
                    for (std::size_t k = 0; k < deg_; ++k)
                        if (!src[k].is_zero()) dst[k] += src[k];
                } else {
                    ctx.mul_add(dst, src, nb.coeff);
                }
            }
        }
        for (std::size_t i = 0; i < rank_; ++i)
            for (auto& c : at(i, s)) c = -c;
    }

    // M <- sigma_s M
    void row_reflect(const CoxeterSystem& sys, Generator s) {
        const ArithContext& ctx = *sys.context();
        for (std::size_t j = 0; j < rank_; ++j) {
            auto dst = at(s, j);
            for (auto& c : dst) c = -c;
            for (const auto& nb : sys.neighbours(s)) {
                auto src = at(nb.t, j);
                if (nb.unit) {
                    for (std::size_t k = 0; k < deg_; ++k)
                        if (!src[k].is_zero()) dst[k] += src[k];
                } else {
                    ctx.mul_add(dst, src, nb.coeff);
                }
            }
        }
    }

    // Sign of the root in column j, read from its first nonzero coordinate.
    int column_sign(const ArithContext& ctx, std::size_t j) const {
        for (std::size_t i = 0; i < rank_; ++i) {
            int s = ctx.sign(at(i, j));
            if (s != 0) return s;
        }
        return 0;
    }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ULL;
        for (const auto& c : data_) {
            h ^= static_cast<std::size_t>(c.num()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= static_cast<std::size_t>(c.den()) + (h << 6) + (h >> 2);
        }
        return h;
    }

    friend bool operator==(const RootMatrix&, const RootMatrix&) = default;

private:
    std::size_t rank_ = 0, deg_ = 0;
    std::vector<Rational> data_;
};

} // namespace detail

/// Geometric action of a group element: `forward` maps alpha_j to w(alpha_j),
/// `backward` maps alpha_j to w^{-1}(alpha_j).
struct Action {
    detail::RootMatrix forward;
    detail::RootMatrix backward;

    static Action identity(const CoxeterSystem& sys) {
        return {detail::RootMatrix(sys.rank(), sys.degree()), detail::RootMatrix(sys.rank(), sys.degree())};
    }
    void right_multiply(const CoxeterSystem& sys, Generator s) {
        forward.col_reflect(sys, s);
        backward.row_reflect(sys, s);
    }
    void left_multiply(const CoxeterSystem& sys, Generator s) {
        forward.row_reflect(sys, s);
        backward.col_reflect(sys, s);
    }
    bool is_left_descent(const CoxeterSystem& sys, Generator s) const {
        return backward.column_sign(*sys.context(), s) < 0;
    }
    bool is_right_descent(const CoxeterSystem& sys, Generator s) const {
        return forward.column_sign(*sys.context(), s) < 0;
    }

    /// ShortLex-least reduced word: repeatedly take the smallest left descent.
    Word normal_form(const CoxeterSystem& sys) const {
        Word nf;
        detail::RootMatrix cur = backward;
        const ArithContext& ctx = *sys.context();
        while (true) {
            Generator s = 0;
            while (s < sys.rank() && cur.column_sign(ctx, s) >= 0) ++s;
            if (s == sys.rank()) break;
            nf.push_back(s);
            cur.col_reflect(sys, s);
        }
        return nf;
    }
};

/// Group element: ShortLex normal form plus a lazily computed geometric action.
/// Equality, ordering and hashing use the normal form only.
class Element {
public:
    Element() = default;

    static Element identity(SystemPtr sys) { return Element(std::move(sys), Word{}, nullptr); }

    /// Builds an element from an action, extracting its normal form.
    static Element from_action(SystemPtr sys, Action action) {
        Word nf = action.normal_form(*sys);
        return Element(std::move(sys), std::move(nf), std::make_shared<Action>(std::move(action)));
    }

    /// Trusts `nf` to be a ShortLex normal form; the action is computed on demand.
    static Element from_normal_form(SystemPtr sys, Word nf) { return Element(std::move(sys), std::move(nf), nullptr); }

    const SystemPtr& system() const noexcept { return sys_; }
    const Word& normal_form() const noexcept { return nf_; }
    std::size_t length() const noexcept { return nf_.size(); }
    bool is_identity() const noexcept { return nf_.empty(); }

    const Action& action() const {
        std::call_once(cache_->once, [this] {
            if (!cache_->action) {
                Action a = Action::identity(*sys_);
                for (Generator g : nf_) a.right_multiply(*sys_, g);
                cache_->action = std::make_shared<const Action>(std::move(a));
            }
        });
        return *cache_->action;
    }

    bool is_left_descent(Generator s) const {
        check_generator(s);
        return action().is_left_descent(*sys_, s);
    }
    bool is_right_descent(Generator s) const {
        check_generator(s);
        return action().is_right_descent(*sys_, s);
    }
    Subset left_descents() const {
        Subset d;
        for (Generator s = 0; s < sys_->rank(); ++s)
            if (is_left_descent(s)) d.push_back(s);
        return d;
    }
    Subset right_descents() const {
        Subset d;
        for (Generator s = 0; s < sys_->rank(); ++s)
            if (is_right_descent(s)) d.push_back(s);
        return d;
    }

    /// Image of the simple root alpha_t.
    RootVector image(Generator t) const {
        RootVector v;
        for (std::size_t i = 0; i < sys_->rank(); ++i) {
            auto c = action().forward.at(i, t);
            v.coords.emplace_back(sys_->context(), std::vector<Rational>(c.begin(), c.end()));
        }
        return v;
    }

    Element left_multiply(Generator s) const {
        check_generator(s);
        Action a = action();
        a.left_multiply(*sys_, s);
        return from_action(sys_, std::move(a));
    }
    Element right_multiply(Generator s) const {
        check_generator(s);
        Action a = action();
        a.right_multiply(*sys_, s);
        return from_action(sys_, std::move(a));
    }

    friend Element operator*(const Element& a, const Element& b) {
        if (a.sys_ != b.sys_ && !(a.sys_->matrix() == b.sys_->matrix())) throw PreconditionError("matrix mismatch");
        if (b.is_identity()) return a;
        Action act = a.action();
        for (Generator g : b.nf_) act.right_multiply(*a.sys_, g);
        return from_action(a.sys_, std::move(act));
    }

    Element inverse() const {
        const Action& a = action();
        return from_action(sys_, Action{a.backward, a.forward});
    }

    friend bool operator==(const Element& a, const Element& b) { return a.nf_ == b.nf_; }

    /// ShortLex: length first, then lexicographic.
    friend bool operator<(const Element& a, const Element& b) {
        if (a.nf_.size() != b.nf_.size()) return a.nf_.size() < b.nf_.size();
        return a.nf_ < b.nf_;
    }

    std::size_t hash() const noexcept {
        std::size_t h = nf_.size();
        for (Generator g : nf_) h = h * 131 + g + 1;
        return h;
    }

private:
    struct Cache {
        std::once_flag once;
        std::shared_ptr<const Action> action;
    };

    Element(SystemPtr sys, Word nf, std::shared_ptr<const Action> action)
        : sys_(std::move(sys)), nf_(std::move(nf)), cache_(std::make_shared<Cache>()) {
        cache_->action = std::move(action);
    }

    void check_generator(Generator s) const {
        if (s >= sys_->rank()) throw InputError("generator " + std::to_string(s + 1) + " out of range");
    }

    SystemPtr sys_;
    Word nf_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

struct ElementHash {
    std::size_t operator()(const Element& e) const noexcept { return e.hash(); }
};

inline Element identity(const SystemPtr& sys) { return Element::identity(sys); }

/// Normal form of an arbitrary word.
inline Element reduce(const SystemPtr& sys, const Word& word) {
    Action a = Action::identity(*sys);
    for (Generator g : word) {
        if (g >= sys->rank()) throw InputError("word letter " + std::to_string(g + 1) + " out of range");
        a.right_multiply(*sys, g);
    }
    return Element::from_action(sys, std::move(a));
}

inline Element generator(const SystemPtr& sys, Generator s) { return reduce(sys, Word{s}); }

inline bool is_left_descent(Generator s, const Element& w) { return w.is_left_descent(s); }

/// Product of the elements in order.
inline Element product(const SystemPtr& sys, std::span<const Element> factors) {
    Action a = Action::identity(*sys);
    for (const Element& f : factors)
        for (Generator g : f.normal_form()) a.right_multiply(*sys, g);
    return Element::from_action(sys, std::move(a));
}

/// Greedy construction of the longest element of W_I: left-multiply by the
/// smallest non-descent of I until every s in I is a descent. Returns nullopt
/// if that has not happened after `step_cap` steps.
inline std::optional<Element> greedy_longest(const SystemPtr& sys, const Subset& I, std::size_t step_cap) {
    Action a = Action::identity(*sys);
    for (std::size_t step = 0; step <= step_cap; ++step) {
        auto it = std::find_if(I.begin(), I.end(), [&](Generator s) { return !a.is_left_descent(*sys, s); });
        if (it == I.end()) return Element::from_action(sys, std::move(a));
        a.left_multiply(*sys, *it);
    }
    return std::nullopt;
}

/// A step count after which the greedy construction cannot still be running
/// on a finite W_I: rank k finite components have longest length at most
/// k * max(k, 15, m) where m is the largest finite label.
inline std::size_t greedy_step_bound(const CoxeterMatrix& matrix, const Subset& I) {
    std::size_t big = 15;
    for (Generator s : I)
        for (Generator t : I)
            if (s != t && matrix(s, t) != kInfinity) big = std::max<std::size_t>(big, matrix(s, t));
    return I.size() * std::max(I.size(), big);
}

/// Longest element w_I of a finite parabolic subgroup.
inline Element longest_element(const SystemPtr& sys, const Subset& I) {
    auto cls = classify_finite(sys->matrix(), I);
    if (!is_finite(cls)) throw PreconditionError("parabolic subgroup " + format_subset(I) + " is infinite");
    std::size_t expected = 0;
    for (const auto& label : std::get<std::vector<FiniteTypeLabel>>(cls)) expected += label.longest_length();
    auto w = greedy_longest(sys, I, expected);
    if (!w || w->length() != expected || !(*w * *w).is_identity()) {
        throw TheoremViolation("longest element of a finite parabolic is not an involution of the expected length",
                               {{"subset", format_subset(I)},
                                {"expected_length", expected},
                                {"word", w ? format_word(w->normal_form()) : std::string("(did not terminate)")}});
    }
    return *w;
}

struct CosetDecomposition {
    Element u; ///< in W_I
    Element x; ///< distinguished: no s in I is a left descent
};

/// w = u x with u in W_I, x in X_I and l(w) = l(u) + l(x).
inline CosetDecomposition coset_decompose(const Element& w, const Subset& I) {
    const SystemPtr& sys = w.system();
    Action x = w.action();
    Word u;
    while (true) {
        auto it = std::find_if(I.begin(), I.end(), [&](Generator s) { return x.is_left_descent(*sys, s); });
        if (it == I.end()) break;
        u.push_back(*it);
        x.left_multiply(*sys, *it);
    }
    CosetDecomposition d{reduce(sys, u), Element::from_action(sys, std::move(x))};
    if (d.u.length() + d.x.length() != w.length()) {
        throw TheoremViolation("coset decomposition lengths do not add",
                               {{"w", format_word(w.normal_form())}, {"subset", format_subset(I)}});
    }
    return d;
}

/// Exchange Condition in W: for a reduced word of w and a left descent s,
/// the smallest index i with s w = word without letter i (0-based).
inline std::size_t exchange(const SystemPtr& sys, const Word& word, Generator s) {
    Element w = reduce(sys, word);
    if (w.length() != word.size()) throw PreconditionError("word is not reduced");
    if (!w.is_left_descent(s)) throw PreconditionError("not a descent");
    Element target = w.left_multiply(s);
    for (std::size_t i = 0; i < word.size(); ++i) {
        Word dropped = word;
        dropped.erase(dropped.begin() + static_cast<std::ptrdiff_t>(i));
        if (reduce(sys, dropped) == target) return i;
    }
    throw TheoremViolation("Exchange Condition failed in W",
                           {{"word", format_word(word)}, {"generator", s + 1}});
}

} // namespace coxfold

template <>
struct std::hash<coxfold::Element> {
    std::size_t operator()(const coxfold::Element& e) const noexcept { return e.hash(); }
};
