// Command-line front end.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "amu/bisim.hpp"
#include "amu/checker.hpp"
#include "amu/freshpath.hpp"
#include "amu/games.hpp"
#include "amu/reductions.hpp"
#include "amu/selftest.hpp"

using namespace amu;
using json = nlohmann::json;

namespace {

const std::string kBuiltin = "builtin:";

bool is_builtin(const std::string& s) { return s.rfind(kBuiltin, 0) == 0; }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

KripkeModel load_model(const std::string& s) {
    return is_builtin(s) ? builtin_model(s.substr(kBuiltin.size())) : parse_model(read_file(s));
}

FPtr load_formula(const std::string& s, Sort sort) {
    FPtr f = is_builtin(s) ? builtin_formula(s.substr(kBuiltin.size()), sort) : parse_formula(read_file(s));
    validate(*f);
    return f;
}

TuringMachine load_tm(const std::string& s) {
    return parse_tm(is_builtin(s) ? fixture_tm_text(s.substr(kBuiltin.size())) : read_file(s));
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

struct Out {
    bool json = false;
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    std::ostringstream text;

    void field(const std::string& k, const std::string& v) {
        if (json)
            j[k] = v;
        else
            text << k << ": " << v << "\n";
    }
    void field(const std::string& k, bool v) {
        if (json)
            j[k] = v;
        else
            text << k << ": " << (v ? "true" : "false") << "\n";
    }
    void block(const std::string& k, const std::string& body) {
        if (json) {
            j[k] = split_lines(body);
        } else {
            text << k << ":\n";
            for (auto& l : split_lines(body)) text << "  " << l << "\n";
        }
    }
    void flush() const {
        if (json)
            std::cout << j.dump(2) << "\n";
        else
            std::cout << text.str();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic engine for orbit-finite sets and the atomic mu-calculus"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    uint64_t seed = 0;
    app.add_option("--format", format, "text | json-like")->check(CLI::IsMember({"text", "json-like"}));
    app.add_option("--seed", seed, "seed for randomized suites");

    std::string model, formula, state, other, kind = "full", file;
    int k = 1, steps = 12, max_steps = 100;
    bool mu = false, game = false, heavy = false, infinite = false;

    auto* check = app.add_subcommand("check", "evaluate a formula, or decide it at one state");
    check->add_option("model", model, "model file or builtin:NAME")->required();
    check->add_option("formula", formula, "formula file or builtin:NAME")->required();
    check->add_option("state", state, "state element, e.g. leaf(3)");

    auto* solve = app.add_subcommand("solve-game", "winning regions of an atomic parity game");
    solve->add_option("game", file, "game file, or builtin:random to use --seed")->required();

    auto* bis = app.add_subcommand("bisim", "k-bisimilarity of two states");
    bis->add_option("model", model)->required();
    bis->add_option("x", state)->required();
    bis->add_option("y", other)->required();
    bis->add_option("--kind", kind, "full | stack")->check(CLI::IsMember({"full", "stack"}));
    bis->add_option("--k", k, "number of registers")->check(CLI::NonNegativeNumber);
    bis->add_flag("--game", game, "also solve the bisimulation game");

    auto* fp = app.add_subcommand("freshpath", "is there a path on which no predicate holds twice");
    fp->add_option("model", model)->required();
    fp->add_option("state", state)->required();
    fp->add_option("--oracle-steps", steps, "depth of the bounded search (0 disables)");

    auto* tr = app.add_subcommand("translate-ltl", "LTL encoding of a Turing machine");
    tr->add_option("tm", file, "TM file or builtin:NAME")->required();
    tr->add_flag("--mu", mu, "also print the mu-calculus translation");
    tr->add_flag("--infinite-path", infinite, "conjoin the infinite-path formula");

    auto* gen = app.add_subcommand("gen-run-model", "lasso model of the accepting run on the empty word");
    gen->add_option("tm", file)->required();
    gen->add_option("--max-steps", max_steps);

    auto* orb = app.add_subcommand("orbits", "list the orbits of a model");
    orb->add_option("model", model)->required();

    auto* self = app.add_subcommand("selftest", "run the fixture matrix");
    self->add_flag("--heavy", heavy, "include the large Full(3) bisimulation instance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Out out;
    out.json = format == "json-like";
    try {
        if (*check) {
            KripkeModel m = load_model(model);
            FPtr f = load_formula(formula, m.ctx->sort);
            out.field("formula", print_formula(*f));
            if (state.empty()) {
                out.block("satisfied", dump(eval(m, *f)));
            } else {
                out.field("state", state);
                out.field("holds", holds(m, parse_element(*m.ctx, state), *f));
            }
        } else if (*solve) {
            AtomicParityGame g = file == "builtin:random" ? random_game(seed) : parse_game(read_file(file));
            auto [ex, fa] = winners(g);
            if (file == "builtin:random") out.block("game", print_game(g));
            out.block("exists", dump(ex));
            out.block("forall", dump(fa));
        } else if (*bis) {
            KripkeModel m = load_model(model);
            BisimKind kd = kind == "stack" ? BisimKind::stack(k) : BisimKind::full(k);
            Element x = parse_element(*m.ctx, state), y = parse_element(*m.ctx, other);
            out.field("kind", kd.str());
            out.field("bisimilar", decide_bisimilar(m, x, y, kd));
            if (game) out.field("game", bisimilar_by_game(m, x, y, kd));
        } else if (*fp) {
            KripkeModel m = load_model(model);
            Element x = parse_element(*m.ctx, state);
            out.field("prefilter", std::string(prefilter_str(cofinite_prefilter(m, x))));
            out.field("freshpath", decide_freshpath(m, x));
            if (steps > 0) {
                OracleResult o = bounded_oracle(m, x, steps);
                out.field("oracle_witness", o.witness);
                if (o.witness) {
                    std::string p;
                    for (auto& e : o.path) p += e.str() + "\n";
                    out.block("oracle_path", p);
                }
            }
        } else if (*tr) {
            TuringMachine tm = load_tm(file);
            LPtr f = tm_to_ltl(tm);
            out.field("clauses", std::to_string(tm_clause_count(tm)));
            std::string cl;
            for (auto& c : f->kids) cl += print_ltl(*c) + "\n";
            out.block("ltl", cl);
            if (mu) out.field("mu", print_formula(*ltl_to_mu(ltl_nnf(f), infinite)));
        } else if (*gen) {
            TuringMachine tm = load_tm(file);
            LassoModel l = run_to_lasso(tm, max_steps);
            out.field("start", l.start.str());
            out.block("model", l.text);
        } else if (*orb) {
            KripkeModel m = load_model(model);
            out.field("atoms", std::string(sort_name(m.ctx->sort)));
            out.field("state_orbits", std::to_string(m.states.size()));
            out.block("states", dump(m.states));
            out.block("trans", dump(m.trans));
            out.block("labels", dump(m.sat));
        } else if (*self) {
            int failures = 0;
            std::cout << selftest_report({seed, out.json, heavy}, &failures);
            return 0;
        }
        out.flush();
        return 0;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
