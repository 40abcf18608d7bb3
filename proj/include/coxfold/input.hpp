#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxfold/coxeter_matrix.hpp"
#include "coxfold/error.hpp"
#include "coxfold/folding.hpp"

namespace coxfold {

/// A Coxeter matrix plus the declared automorphisms.
struct Instance {
    CoxeterMatrix matrix;
    std::vector<Automorphism> automorphisms;
};

namespace detail {

inline bool parse_index(const std::string& tok, std::size_t rank, std::size_t& out) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 6) return false;
    out = std::stoul(tok);
    return out >= 1 && out <= rank;
}

} // namespace detail

/// Line-based format:
///   rank <n>
///   m <i> <j> <v>             v >= 2 or inf; unlisted pairs are 2
///   auto <name> <i>j> ...     gamma(s_i) = s_j, unlisted indices fixed
/// '#' starts a comment. Every error is reported with its line number.
inline Instance parse_instance(std::istream& in, std::size_t rank_cap = kDefaultRankCap) {
    std::vector<std::string> errors;
    auto error = [&](std::size_t line, const std::string& msg) {
        errors.push_back("line " + std::to_string(line) + ": " + msg);
    };
    Instance inst;
    bool have_rank = false;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen_pairs;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;

        if (!have_rank) {
            std::size_t n = 0;
            if (tok[0] != "rank" || tok.size() != 2) {
                error(lineno, "expected 'rank <n>' as the first line");
                break;
            }
            if (!detail::parse_index(tok[1], rank_cap, n)) {
                error(lineno, "rank '" + tok[1] + "' out of range [1," + std::to_string(rank_cap) + "]");
                break;
            }
            inst.matrix = CoxeterMatrix(n);
            have_rank = true;
            continue;
        }
        const std::size_t rank = inst.matrix.rank();

        if (tok[0] == "rank") {
            error(lineno, "duplicate rank line");
        } else if (tok[0] == "m") {
            std::size_t i = 0, j = 0;
            if (tok.size() != 4) {
                error(lineno, "expected 'm <i> <j> <v>'");
                continue;
            }
            if (!detail::parse_index(tok[1], rank, i) || !detail::parse_index(tok[2], rank, j)) {
                error(lineno, "index out of range");
                continue;
            }
            if (i == j) {
                error(lineno, "diagonal entries are fixed at 1");
                continue;
            }
            Label v = 0;
            if (tok[3] == "inf") {
                v = kInfinity;
            } else {
                std::size_t parsed = 0;
                if (tok[3].find_first_not_of("0123456789") != std::string::npos || tok[3].size() > 9 ||
                    (parsed = std::stoul(tok[3])) < 2) {
                    error(lineno, "label '" + tok[3] + "' must be an integer >= 2 or 'inf'");
                    continue;
                }
                v = static_cast<Label>(parsed);
            }
            auto key = std::minmax(i, j);
            if (auto it = seen_pairs.find(key); it != seen_pairs.end()) {
                error(lineno, "duplicate m line for pair (" + std::to_string(key.first) + "," +
                                  std::to_string(key.second) + "), first given on line " + std::to_string(it->second));
                continue;
            }
            seen_pairs[key] = lineno;
            inst.matrix.set(i - 1, j - 1, v);
        } else if (tok[0] == "auto") {
            if (tok.size() < 2) {
                error(lineno, "expected 'auto <name> <i>j> ...'");
                continue;
            }
            Automorphism a = Automorphism::identity(rank, tok[1]);
            std::set<std::size_t> sources;
            bool ok = true;
            for (std::size_t k = 2; k < tok.size() && ok; ++k) {
                auto gt = tok[k].find('>');
                std::size_t i = 0, j = 0;
                if (gt == std::string::npos || !detail::parse_index(tok[k].substr(0, gt), rank, i) ||
                    !detail::parse_index(tok[k].substr(gt + 1), rank, j)) {
                    error(lineno, "bad mapping '" + tok[k] + "' (expected i>j with indices in [1," +
                                      std::to_string(rank) + "])");
                    ok = false;
                } else if (!sources.insert(i).second) {
                    error(lineno, "index " + std::to_string(i) + " mapped twice");
                    ok = false;
                } else {
                    a.images[i - 1] = j - 1;
                }
            }
            if (!ok) continue;
            std::vector<bool> hit(rank, false);
            for (Generator g : a.images) {
                if (hit[g]) {
                    error(lineno, "auto '" + a.name + "' is not a permutation: " + std::to_string(g + 1) +
                                      " is the image of two indices");
                    ok = false;
                    break;
                }
                hit[g] = true;
            }
            if (ok) inst.automorphisms.push_back(std::move(a));
        } else {
            error(lineno, "unknown directive '" + tok[0] + "'");
        }
    }
    if (!have_rank && errors.empty()) error(lineno == 0 ? 1 : lineno, "missing 'rank <n>' line");
    if (!errors.empty()) throw InputError(errors.front(), errors);
    return inst;
}

inline Instance parse_instance_string(const std::string& text, std::size_t rank_cap = kDefaultRankCap) {
    std::istringstream in(text);
    return parse_instance(in, rank_cap);
}

inline Instance parse_instance_file(const std::string& path, std::size_t rank_cap = kDefaultRankCap) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return parse_instance(in, rank_cap);
}

/// Inverse of parse_instance (labels of 2 are omitted).
inline std::string to_text(const Instance& inst) {
    std::ostringstream os;
    os << "rank " << inst.matrix.rank() << "\n";
    for (std::size_t i = 0; i < inst.matrix.rank(); ++i)
        for (std::size_t j = i + 1; j < inst.matrix.rank(); ++j)
            if (inst.matrix(i, j) != 2) os << "m " << i + 1 << " " << j + 1 << " " << label_to_string(inst.matrix(i, j)) << "\n";
    for (const auto& a : inst.automorphisms) {
        os << "auto " << (a.name.empty() ? "g" : a.name);
        for (std::size_t s = 0; s < a.images.size(); ++s)
            if (a.images[s] != s) os << " " << s + 1 << ">" << a.images[s] + 1;
        os << "\n";
    }
    return os.str();
}

} // namespace coxfold
