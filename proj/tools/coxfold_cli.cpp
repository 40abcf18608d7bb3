// coxfold: reduce words, fold Coxeter systems along diagram automorphisms,
// and verify the folded system against brute force.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coxfold/catalog.hpp"
#include "coxfold/folding.hpp"
#include "coxfold/input.hpp"
#include "coxfold/verifier.hpp"
#include "coxfold/word.hpp"

using namespace coxfold;
using ojson = nlohmann::ordered_json;

namespace {

struct Options {
    std::string input;
    std::string word;
    std::string subset;
    std::vector<std::string> autos;
    std::optional<std::size_t> radius;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    bool slow = false;
    std::string format = "text";
};

bool json_out(const Options& o) { return o.format == "json"; }

std::string subset_text(const Subset& s) { return format_subset(s); }

/// Keeps the automorphisms named with --auto (all of them when none is given).
Instance load(const Options& o) {
    Instance inst = parse_instance_file(o.input);
    if (o.autos.empty()) return inst;
    std::vector<Automorphism> keep;
    for (const auto& name : o.autos) {
        auto it = std::find_if(inst.automorphisms.begin(), inst.automorphisms.end(),
                               [&](const Automorphism& a) { return a.name == name; });
        if (it == inst.automorphisms.end()) throw InputError("no automorphism named '" + name + "'");
        keep.push_back(*it);
    }
    inst.automorphisms = std::move(keep);
    return inst;
}

int cmd_reduce(const Options& o) {
    Instance inst = load(o);
    auto sys = CoxeterSystem::create(inst.matrix);
    Element w = reduce(sys, parse_word(o.word, inst.matrix.rank()));
    if (json_out(o)) {
        ojson j;
        j["nf"] = format_word(w.normal_form());
        j["length"] = w.length();
        j["left_descents"] = subset_text(w.left_descents());
        j["right_descents"] = subset_text(w.right_descents());
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "nf: " << (w.is_identity() ? "(identity)" : format_word(w.normal_form())) << "\n"
                  << "length: " << w.length() << "\n"
                  << "left descents: " << subset_text(w.left_descents()) << "\n"
                  << "right descents: " << subset_text(w.right_descents()) << "\n";
    }
    return 0;
}

void print_matrix(std::ostream& os, const CoxeterMatrix& m) {
    for (std::size_t i = 0; i < m.rank(); ++i) {
        os << "  ";
        for (std::size_t j = 0; j < m.rank(); ++j) os << (j ? " " : "") << label_to_string(m(i, j));
        os << "\n";
    }
}

int cmd_fold(const Options& o) {
    Instance inst = load(o);
    auto sys = CoxeterSystem::create(inst.matrix);
    AutGroup aut;
    try {
        aut = AutGroup(inst.matrix, inst.automorphisms);
    } catch (const InputError& e) {
        for (const auto& a : inst.automorphisms)
            if (auto err = validate_automorphism(inst.matrix, a.images)) {
                std::cerr << "error: invalid automorphism '" << a.name << "': " << err->message << "\n";
                if (err->witness)
                    std::cerr << "witness pair: (" << err->witness->first + 1 << "," << err->witness->second + 1 << ")\n";
            }
        return 2;
    }
    FoldedSystem fs = fold(sys, aut);
    if (json_out(o)) {
        ojson j;
        j["orbits"] = ojson::array();
        for (const auto& orb : fs.orbits()) j["orbits"].push_back(subset_text(orb));
        j["dropped"] = ojson::array();
        for (const auto& orb : fs.dropped()) j["dropped"].push_back(subset_text(orb));
        j["barS"] = ojson::array();
        for (const auto& g : fs.generators())
            j["barS"].push_back({{"orbit", subset_text(g.orbit)}, {"weight", g.weight}, {"w_I", format_word(g.longest.normal_form())}});
        j["type"] = describe_type(fs.matrix());
        j["weights"] = fs.weights();
        j["matrix"] = ojson::array();
        for (std::size_t i = 0; i < fs.size(); ++i) {
            std::vector<std::string> row;
            for (std::size_t k = 0; k < fs.size(); ++k) row.push_back(label_to_string(fs.matrix()(i, k)));
            j["matrix"].push_back(row);
        }
        j["derivations"] = ojson::array();
        for (const auto& d : fs.derivations()) {
            ojson dj;
            dj["I"] = subset_text(fs[d.i].orbit);
            dj["J"] = subset_text(fs[d.j].orbit);
            dj["l(w_K)"] = d.longest_length ? ojson(*d.longest_length) : ojson(nullptr);
            dj["L(I)"] = d.weight_i;
            dj["L(J)"] = d.weight_j;
            dj["m"] = label_to_string(d.order);
            j["derivations"].push_back(dj);
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "orbits:";
    for (const auto& orb : fs.orbits()) std::cout << " " << subset_text(orb);
    std::cout << "\n";
    for (const auto& orb : fs.dropped()) std::cout << "dropped " << subset_text(orb) << " (W_I infinite)\n";
    for (const auto& g : fs.generators())
        std::cout << "  " << subset_text(g.orbit) << "  L=" << g.weight << "  w_I = " << format_word(g.longest.normal_form())
                  << "\n";
    std::cout << "folded: " << describe_type(fs.matrix()) << ", weights [";
    const auto weights = fs.weights();
    for (std::size_t k = 0; k < weights.size(); ++k) std::cout << (k ? "," : "") << weights[k];
    std::cout << "]\n";
    if (fs.size() > 0) {
        std::cout << "matrix:\n";
        print_matrix(std::cout, fs.matrix());
    }
    for (const auto& d : fs.derivations()) std::cout << "  " << derivation_line(fs, d) << "\n";
    return 0;
}

int cmd_verify(const Options& o) {
    Instance inst = load(o);
    VerifyConfig cfg;
    cfg.seed = o.seed;
    cfg.radius = o.radius;
    cfg.jobs = o.jobs;
    Report rep = property_suite(inst, cfg);
    if (json_out(o))
        std::cout << rep.to_json().dump(2) << "\n";
    else
        std::cout << rep.to_text();
    return rep.exit_code();
}

int cmd_classify(const Options& o) {
    Instance inst = load(o);
    inst.matrix.require_valid();
    Subset I = o.subset.empty() ? inst.matrix.all() : parse_word(o.subset, inst.matrix.rank());
    std::sort(I.begin(), I.end());
    I.erase(std::unique(I.begin(), I.end()), I.end());
    auto cls = classify_finite(inst.matrix, I);
    if (json_out(o)) {
        ojson j;
        j["subset"] = subset_text(I);
        j["finite"] = is_finite(cls);
        j["type"] = to_string(cls);
        j["components"] = ojson::array();
        for (const auto& c : components(inst.matrix, I)) j["components"].push_back(subset_text(c));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << subset_text(I) << ": " << to_string(cls) << "\n";
    }
    return 0;
}

int cmd_catalog(const Options& o) {
    std::vector<CatalogRow> rows;
    for (const auto& e : catalog(o.slow)) rows.push_back(run_catalog_entry(e, o.radius.value_or(kDefaultInfiniteRadius)));
    std::size_t matched = 0;
    for (const auto& r : rows) matched += r.match();
    if (json_out(o)) {
        ojson j;
        j["rows"] = ojson::array();
        for (const auto& r : rows) j["rows"].push_back(r.to_json());
        j["matched"] = matched;
        j["total"] = rows.size();
        std::cout << j.dump(2) << "\n";
    } else {
        auto weights = [](const std::vector<std::size_t>& w) {
            std::string s = "[";
            for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k]);
            return s + "]";
        };
        for (const auto& r : rows) {
            std::cout << (r.match() ? "match   " : "MISMATCH") << "  " << r.name << ": expected " << r.expected_type << " "
                      << weights(r.expected_weights) << ", computed " << r.computed_type << " "
                      << weights(r.computed_weights) << ", |W^G| "
                      << (r.expected_fixed_order ? std::to_string(r.computed_fixed_order)
                                                 : std::to_string(r.computed_fixed_order) + " in ball of radius " +
                                                       std::to_string(r.ball_radius))
                      << "\n";
            for (const auto& d : r.derivations) std::cout << "          " << d << "\n";
            if (!r.error.empty()) std::cout << "          error: " << r.error << "\n";
        }
        std::cout << matched << "/" << rows.size() << " rows match\n";
    }
    return matched == rows.size() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coxeter group folding along diagram automorphisms"};
    app.require_subcommand(1);
    Options o;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    };
    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("file", o.input, "Instance file")->required();
        cmd->add_option("--auto", o.autos, "Use only the named automorphisms");
        add_format(cmd);
    };

    auto* reduce_cmd = app.add_subcommand("reduce", "Normal form, length and descents of a word");
    add_input(reduce_cmd);
    reduce_cmd->add_option("--word", o.word, "Word as 1-based generator indices, e.g. \"1 2 1\"");

    auto* fold_cmd = app.add_subcommand("fold", "Folded Coxeter system of an instance");
    add_input(fold_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "Check the folded system against brute force");
    add_input(verify_cmd);
    verify_cmd->add_option("--radius", o.radius, "Ball radius (default: full for finite W, else 8)")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", o.seed, "Seed for sampled checks");
    verify_cmd->add_option("--jobs", o.jobs, "Parallel checks")->check(CLI::PositiveNumber);

    auto* classify_cmd = app.add_subcommand("classify", "Finite type of a parabolic subgroup");
    add_input(classify_cmd);
    classify_cmd->add_option("--subset", o.subset, "Subset as 1-based indices (default: all of S)");

    auto* catalog_cmd = app.add_subcommand("catalog", "Run the built-in folding catalog");
    catalog_cmd->add_flag("--slow", o.slow, "Include the E6 row");
    catalog_cmd->add_option("--radius", o.radius, "Ball radius for infinite rows")->check(CLI::PositiveNumber);
    add_format(catalog_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*reduce_cmd) return cmd_reduce(o);
        if (*fold_cmd) return cmd_fold(o);
        if (*verify_cmd) return cmd_verify(o);
        if (*classify_cmd) return cmd_classify(o);
        return cmd_catalog(o);
    } catch (const TheoremViolation& e) {
        std::cerr << "theorem violation: " << e.what() << "\n" << e.witness().dump(2) << "\n";
        return 1;
    } catch (const InputError& e) {
        if (e.details().empty()) std::cerr << "error: " << e.what() << "\n";
        for (const auto& d : e.details()) std::cerr << "error: " << d << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
