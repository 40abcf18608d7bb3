#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coxfold/error.hpp"

namespace coxfold {

/// Generator index, 0-based internally. Text formats use 1-based indices.
using Generator = std::size_t;

/// Sorted set of generator indices.
using Subset = std::vector<Generator>;

using Label = std::uint32_t;
inline constexpr Label kInfinity = std::numeric_limits<Label>::max();
inline constexpr std::size_t kDefaultRankCap = 16;

inline std::string label_to_string(Label m) { return m == kInfinity ? "inf" : std::to_string(m); }

/// Symmetric table m(s,t) of a Coxeter system. Construction does not check
/// the Coxeter axioms; call validate() for that.
class CoxeterMatrix {
public:
    CoxeterMatrix() = default;

    /// All off-diagonal entries 2, diagonal 1.
    explicit CoxeterMatrix(std::size_t rank) : rank_(rank), entries_(rank * rank, 2) {
        for (std::size_t i = 0; i < rank; ++i) entries_[i * rank + i] = 1;
    }

    CoxeterMatrix(std::size_t rank, std::vector<Label> entries) : rank_(rank), entries_(std::move(entries)) {
        if (entries_.size() != rank * rank) throw InputError("matrix table has wrong size");
    }

    std::size_t rank() const noexcept { return rank_; }

    Label operator()(Generator s, Generator t) const { return entries_.at(s * rank_ + t); }

    /// Sets both (s,t) and (t,s).
    void set(Generator s, Generator t, Label m) {
        entries_.at(s * rank_ + t) = m;
        entries_.at(t * rank_ + s) = m;
    }

    /// Sets a single cell; only useful for building invalid matrices in tests.
    void set_raw(Generator s, Generator t, Label m) { entries_.at(s * rank_ + t) = m; }

    const std::vector<Label>& entries() const noexcept { return entries_; }

    friend bool operator==(const CoxeterMatrix&, const CoxeterMatrix&) = default;

    /// Every violation of the Coxeter-matrix axioms, 1-based indices.
    std::vector<std::string> validate(std::size_t rank_cap = kDefaultRankCap) const {
        std::vector<std::string> errors;
        if (rank_ < 1 || rank_ > rank_cap) {
            errors.push_back("rank " + std::to_string(rank_) + " out of range [1," + std::to_string(rank_cap) + "]");
        }
        for (std::size_t i = 0; i < rank_; ++i) {
            if ((*this)(i, i) != 1) errors.push_back("diagonal must be 1 at (" + pos(i, i) + ")");
            for (std::size_t j = i + 1; j < rank_; ++j) {
                Label a = (*this)(i, j), b = (*this)(j, i);
                if (a != b) errors.push_back("asymmetric at (" + pos(i, j) + ")");
                if (a < 2 || b < 2) errors.push_back("off-diagonal entry < 2 at (" + pos(i, j) + ")");
            }
        }
        return errors;
    }

    bool is_valid(std::size_t rank_cap = kDefaultRankCap) const { return validate(rank_cap).empty(); }

    /// Throws InputError listing every violation.
    void require_valid(std::size_t rank_cap = kDefaultRankCap) const {
        auto errors = validate(rank_cap);
        if (!errors.empty()) throw InputError("invalid Coxeter matrix: " + errors.front(), errors);
    }

    /// Full generator set {0, ..., rank-1}.
    Subset all() const {
        Subset s(rank_);
        std::iota(s.begin(), s.end(), Generator{0});
        return s;
    }

    /// Restriction to a subset, reindexed in the subset's order.
    CoxeterMatrix restrict_to(const Subset& subset) const {
        CoxeterMatrix r(subset.size());
        for (std::size_t i = 0; i < subset.size(); ++i)
            for (std::size_t j = 0; j < subset.size(); ++j) r.entries_[i * subset.size() + j] = (*this)(subset[i], subset[j]);
        return r;
    }

private:
    static std::string pos(std::size_t i, std::size_t j) { return std::to_string(i + 1) + "," + std::to_string(j + 1); }

    std::size_t rank_ = 0;
    std::vector<Label> entries_;
};

// Standard matrices. Path types are numbered along the path; D_n has its
// branch node at index n-3 with leaves n-2 and n-1 (so D4 is centre 1, leaves
// 0, 2, 3); E_n has the branch attached to index 2 of the path 0-1-2-...
namespace matrices {

inline CoxeterMatrix path(const std::vector<Label>& labels) {
    CoxeterMatrix m(labels.size() + 1);
    for (std::size_t i = 0; i < labels.size(); ++i) m.set(i, i + 1, labels[i]);
    return m;
}

inline CoxeterMatrix type_A(std::size_t n) { return path(std::vector<Label>(n - 1, 3)); }

inline CoxeterMatrix type_B(std::size_t n) {
    std::vector<Label> labels(n - 1, 3);
    labels.back() = 4;
    return path(labels);
}

inline CoxeterMatrix type_D(std::size_t n) {
    CoxeterMatrix m(n);
    for (std::size_t i = 0; i + 2 < n - 1; ++i) m.set(i, i + 1, 3);
    m.set(n - 3, n - 2, 3);
    m.set(n - 3, n - 1, 3);
    return m;
}

inline CoxeterMatrix type_E(std::size_t n) {
    // path 0-1-2-...-(n-2), branch node n-1 attached to 2
    CoxeterMatrix m(n);
    for (std::size_t i = 0; i + 1 < n - 1; ++i) m.set(i, i + 1, 3);
    m.set(2, n - 1, 3);
    return m;
}

inline CoxeterMatrix type_F4() { return path({3, 4, 3}); }
inline CoxeterMatrix type_H3() { return path({5, 3}); }
inline CoxeterMatrix type_H4() { return path({5, 3, 3}); }
inline CoxeterMatrix dihedral(Label m) { return path({m}); }

/// Affine Ã_{n-1}: cycle on n nodes.
inline CoxeterMatrix affine_A_cycle(std::size_t n) {
    CoxeterMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, (i + 1) % n, 3);
    return m;
}

} // namespace matrices

/// Connected components of the Coxeter graph restricted to `subset` (edges
/// where m(s,t) >= 3). Components are sorted, and ordered by least element.
inline std::vector<Subset> components(const CoxeterMatrix& matrix, const Subset& subset) {
    for (Generator s : subset)
        if (s >= matrix.rank()) throw InputError("generator index " + std::to_string(s + 1) + " out of range");
    std::vector<Subset> result;
    std::vector<bool> seen(matrix.rank(), false);
    std::vector<bool> member(matrix.rank(), false);
    for (Generator s : subset) member[s] = true;
    Subset sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    for (Generator start : sorted) {
        if (seen[start]) continue;
        Subset comp;
        std::vector<Generator> stack{start};
        seen[start] = true;
        while (!stack.empty()) {
            Generator s = stack.back();
            stack.pop_back();
            comp.push_back(s);
            for (Generator t = 0; t < matrix.rank(); ++t) {
                if (member[t] && !seen[t] && t != s && matrix(s, t) >= 3) {
                    seen[t] = true;
                    stack.push_back(t);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        result.push_back(std::move(comp));
    }
    return result;
}

enum class Family { A, B, D, E, F, H, I2 };

/// One irreducible finite Coxeter type.
struct FiniteTypeLabel {
    Family family;
    std::size_t parameter; ///< rank n, or the dihedral label m for I2

    friend bool operator==(const FiniteTypeLabel&, const FiniteTypeLabel&) = default;

    bool is_legal() const {
        switch (family) {
        case Family::A: return parameter >= 1;
        case Family::B: return parameter >= 2;
        case Family::D: return parameter >= 4;
        case Family::E: return parameter >= 6 && parameter <= 8;
        case Family::F: return parameter == 4;
        case Family::H: return parameter == 3 || parameter == 4;
        case Family::I2: return parameter >= 5;
        }
        return false;
    }

    std::size_t rank() const { return family == Family::I2 ? 2 : parameter; }

    /// Number of positive roots, i.e. the length of the longest element.
    std::size_t longest_length() const {
        const std::size_t n = parameter;
        switch (family) {
        case Family::A: return n * (n + 1) / 2;
        case Family::B: return n * n;
        case Family::D: return n * (n - 1);
        case Family::E: return n == 6 ? 36 : n == 7 ? 63 : 120;
        case Family::F: return 24;
        case Family::H: return n == 3 ? 15 : 60;
        case Family::I2: return n;
        }
        return 0;
    }

    std::string to_string() const {
        switch (family) {
        case Family::A: return "A" + std::to_string(parameter);
        case Family::B: return "B" + std::to_string(parameter);
        case Family::D: return "D" + std::to_string(parameter);
        case Family::E: return "E" + std::to_string(parameter);
        case Family::F: return "F" + std::to_string(parameter);
        case Family::H: return "H" + std::to_string(parameter);
        case Family::I2: return "I2(" + std::to_string(parameter) + ")";
        }
        return "?";
    }
};

struct Infinite {
    friend bool operator==(const Infinite&, const Infinite&) = default;
};

/// Finite(list of component types) or Infinite.
using Classification = std::variant<std::vector<FiniteTypeLabel>, Infinite>;

inline bool is_finite(const Classification& c) { return std::holds_alternative<std::vector<FiniteTypeLabel>>(c); }

namespace detail {

// Identifies one connected component by degree pattern and edge labels.
inline std::optional<FiniteTypeLabel> classify_component(const CoxeterMatrix& matrix, const Subset& comp) {
    const std::size_t n = comp.size();
    if (n == 1) return FiniteTypeLabel{Family::A, 1};

    struct Edge {
        std::size_t a, b;
        Label m;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Label m = matrix(comp[i], comp[j]);
            if (m >= 3) {
                if (m == kInfinity) return std::nullopt;
                edges.push_back({i, j, m});
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    if (edges.size() != n - 1) return std::nullopt; // contains a cycle

    if (n == 2) {
        Label m = edges[0].m;
        if (m == 3) return FiniteTypeLabel{Family::A, 2};
        if (m == 4) return FiniteTypeLabel{Family::B, 2};
        return FiniteTypeLabel{Family::I2, m};
    }

    std::vector<std::size_t> branch, leaves;
    for (std::size_t i = 0; i < n; ++i) {
        if (adj[i].size() > 3) return std::nullopt;
        if (adj[i].size() == 3) branch.push_back(i);
        if (adj[i].size() == 1) leaves.push_back(i);
    }
    if (branch.size() > 1) return std::nullopt;

    auto label = [&](std::size_t i, std::size_t j) { return matrix(comp[i], comp[j]); };

    if (branch.empty()) {
        // walk the path from one end, collecting labels in order
        std::vector<Label> labels;
        std::size_t prev = n, cur = leaves.front();
        while (true) {
            std::size_t next = n;
            for (std::size_t j : adj[cur])
                if (j != prev) next = j;
            if (next == n) break;
            labels.push_back(label(cur, next));
            prev = cur;
            cur = next;
        }
        std::size_t big = 0, pos = 0;
        for (std::size_t k = 0; k < labels.size(); ++k)
            if (labels[k] != 3) {
                ++big;
                pos = k;
            }
        if (big == 0) return FiniteTypeLabel{Family::A, n};
        if (big > 1) return std::nullopt;
        Label m = labels[pos];
        bool at_end = pos == 0 || pos + 1 == labels.size();
        if (m == 4 && at_end) return FiniteTypeLabel{Family::B, n};
        if (m == 4 && n == 4) return FiniteTypeLabel{Family::F, 4};
        if (m == 5 && at_end && (n == 3 || n == 4)) return FiniteTypeLabel{Family::H, n};
        return std::nullopt;
    }

    for (const Edge& e : edges)
        if (e.m != 3) return std::nullopt;
    const std::size_t centre = branch.front();
    std::vector<std::size_t> arms;
    for (std::size_t start : adj[centre]) {
        std::size_t len = 1, prev = centre, cur = start;
        while (adj[cur].size() == 2) {
            std::size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
            prev = cur;
            cur = next;
            ++len;
        }
        arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return FiniteTypeLabel{Family::D, n};
    if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4) return FiniteTypeLabel{Family::E, n};
    return std::nullopt;
}

} // namespace detail

/// Decides whether W_I is finite by matching each component against the
/// list of finite irreducible types.
inline Classification classify_finite(const CoxeterMatrix& matrix, const Subset& subset) {
    std::vector<FiniteTypeLabel> labels;
    for (const Subset& comp : components(matrix, subset)) {
        auto t = detail::classify_component(matrix, comp);
        if (!t) return Infinite{};
        labels.push_back(*t);
    }
    return labels;
}

inline Classification classify_finite(const CoxeterMatrix& matrix) { return classify_finite(matrix, matrix.all()); }

inline std::string to_string(const Classification& c) {
    if (!is_finite(c)) return "infinite";
    const auto& labels = std::get<std::vector<FiniteTypeLabel>>(c);
    if (labels.empty()) return "trivial";
    std::string s;
    for (const auto& l : labels) s += (s.empty() ? "" : " x ") + l.to_string();
    return s;
}

/// Human type name for a matrix. Irreducible rank-2 systems print as I2(m)
/// for every m, including inf.
inline std::string describe_type(const CoxeterMatrix& matrix) {
    if (matrix.rank() == 0) return "trivial";
    std::string s;
    for (const Subset& comp : components(matrix, matrix.all())) {
        std::string part;
        if (comp.size() == 2) {
            part = "I2(" + label_to_string(matrix(comp[0], comp[1])) + ")";
        } else {
            auto t = detail::classify_component(matrix, comp);
            part = t ? t->to_string() : "infinite(rank " + std::to_string(comp.size()) + ")";
        }
        s += (s.empty() ? "" : " x ") + part;
    }
    return s;
}

} // namespace coxfold
