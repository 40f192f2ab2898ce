// One PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "amu/bisim.hpp"
#include "amu/checker.hpp"
#include "amu/freshpath.hpp"
#include "amu/games.hpp"
#include "amu/reductions.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace amu;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream note;
    void need(bool c, const std::string& what) {
        if (!c) {
            if (ok) note << "first failure: " << what;
            ok = false;
        }
    }
};

Element el(const KripkeModel& m, const std::string& s) { return parse_element(*m.ctx, s); }

void orbit_counts(Outcome& o) {
    auto e = make_context(Sort::Equality), d = make_context(Sort::Ordered);
    o.need(universe(e, "t", 2).size() == 2, "equality A^2");
    o.need(universe(d, "t", 2).size() == 3, "ordered A^2");
    for (int n = 0; n <= 5; ++n) {
        o.need(static_cast<long>(universe(e, "t", n).size()) == oracle::bell(n), "Bell " + std::to_string(n));
        o.need(static_cast<long>(universe(d, "t", n).size()) == oracle::ordered_bell(n),
               "ordered Bell " + std::to_string(n));
    }
}

void supports_suite(Outcome& o) {
    for (int k = 1; k <= 3; ++k) {
        std::vector<std::string> names;
        std::vector<Constraint> ne;
        std::vector<int> all;
        for (int i = 0; i < k; ++i) {
            names.push_back("c" + std::to_string(i + 1));
            ne.push_back(Constraint::lit("x", Rel::Ne, names.back()));
            all.push_back(i);
        }
        auto c = make_context(Sort::Equality, names);
        o.need(least_support(set_builder(c, "a", {"x"}, Constraint::conj(ne))) == all, "A minus S");
    }
    auto c = make_context(Sort::Ordered, {"c1", "c2", "c3"});
    OrbitSet iv = set_builder(c, "a", {"x"},
                              Constraint::conj({Constraint::lit("c2", Rel::Lt, "x"), Constraint::lit("x", Rel::Lt, "c3")}));
    o.need(least_support(iv) == std::vector<int>{1, 2}, "interval");
    int equivariant = 0;
    for (const char* spec : {"star", "star(ordered)", "increasing", "infsucc(2)", "chain(4)", "evensucc(1)", "fan(3)",
                             "fan(interval)", "fan(cofinite)", "fan(empty)", "pathk(3)", "pathkcheck(3)",
                             "freshpath(3,2)", "tmuniverse(bounce)"}) {
        KripkeModel m = builtin_model(spec);
        if (m.ctx->size() != 0) continue;
        ++equivariant;
        o.need(least_support(m.states).empty() && least_support(m.predicates()).empty(), spec);
    }
    o.note << equivariant << " equivariant builtins";
}

void checker_vs_oracle(Outcome& o) {
    int n = 0;
    for (auto& [name, m] : fixtures::equality_models())
        for (auto& text : fixtures::equality_formulas()) {
            FPtr f = parse_formula(text);
            o.need(equals(eval(m, *f), brute_force_eval(m, *f)), name + " / " + text);
            ++n;
        }
    o.note << n << " pairs";
}

void fixture_truths(Outcome& o) {
    KripkeModel inc = builtin_model("increasing");
    o.need(equals(eval(inc, *builtin_formula("P1andP2", Sort::Ordered)), inc.states), "P1 and P2");
    KripkeModel star = builtin_model("star");
    o.need(holds(star, el(star, "star"), *builtin_formula("psi", Sort::Equality)), "psi");
    FPtr even = builtin_formula("evensucc", Sort::Ordered);
    Element root{"root", {}};
    for (int n = 1; n <= 6; ++n)
        o.need(holds(builtin_model("fan(" + std::to_string(n) + ")"), root, *even) == (n % 2 == 0),
               "evensucc fan " + std::to_string(n));
    o.need(!holds(builtin_model("fan(interval)"), root, *even), "evensucc interval");
    FPtr inf = builtin_formula("infsucc", Sort::Ordered);
    o.need(holds(builtin_model("fan(interval)"), root, *inf), "infsucc interval");
    o.need(holds(builtin_model("fan(cofinite)"), root, *inf), "infsucc cofinite");
    for (int n = 1; n <= 4; ++n) o.need(!holds(builtin_model("fan(" + std::to_string(n) + ")"), root, *inf), "infsucc finite");
    o.need(!holds(builtin_model("fan(empty)"), root, *inf), "infsucc empty");
}

void adequacy(Outcome& o) {
    int n = 0;
    for (auto& [name, m] : fixtures::equality_models())
        for (auto& text : fixtures::equality_formulas()) {
            o.need(adequacy_check(m, *parse_formula(text)), name + " / " + text);
            ++n;
        }
    KripkeModel inc = builtin_model("increasing");
    for (const char* f : {"P1", "P2", "P1andP2", "P1prime"}) o.need(adequacy_check(inc, *builtin_formula(f, Sort::Ordered)), f), ++n;
    for (const char* fan : {"fan(3)", "fan(4)", "fan(interval)", "fan(cofinite)"})
        for (const char* f : {"evensucc", "infsucc"}) o.need(adequacy_check(builtin_model(fan), *builtin_formula(f, Sort::Ordered)), fan), ++n;
    o.note << n << " pairs";
}

void quotient_games(Outcome& o) {
    for (uint64_t seed = 0; seed < 200; ++seed) {
        AtomicParityGame g = random_game(seed);
        OrbitSet ex = winners(g).first;
        oracle::Concrete c = oracle::instantiate(g, 4);
        auto win = oracle::zielonka(c.game);
        for (size_t v = 0; v < c.nodes.size(); ++v) o.need(member(c.nodes[v], ex) == win[v], "seed " + std::to_string(seed));
    }
    o.note << "200 games";
}

std::vector<FPtr> bounded_fixtures(int k) {
    std::vector<FPtr> out;
    for (auto& t : fixtures::equality_formulas()) {
        FPtr f = parse_formula(t);
        if (t.find('{') == std::string::npos && global_support_bound(*f) <= k) out.push_back(f);
    }
    return out;
}

struct BisimCase {
    std::string model;
    BisimKind kind;
    std::string x, y;
};

std::vector<BisimCase> bisim_cases() {
    return {{"infsucc(1)", BisimKind::full(1), "p", "q"},     {"infsucc(2)", BisimKind::full(2), "p", "q"},
            {"chain(3)", BisimKind::stack(1), "p1", "q1"},    {"chain(5)", BisimKind::stack(2), "p1", "q1"},
            {"freshpath(3,2)", BisimKind::full(2), "p1", "cp1"}, {"freshpath(4,3)", BisimKind::full(3), "p1", "cp1"}};
}

std::vector<bool> bisim_results;

void bisim_fixtures(Outcome& o) {
    bisim_results.clear();
    for (auto& c : bisim_cases()) {
        KripkeModel m = builtin_model(c.model);
        bool b = decide_bisimilar(m, el(m, c.x), el(m, c.y), c.kind);
        bisim_results.push_back(b);
        o.need(b, c.model + " " + c.kind.str());
    }
}

void invariance(Outcome& o) {
    auto cases = bisim_cases();
    int used = 0;
    for (size_t i = 0; i < cases.size(); ++i) {
        if (i >= bisim_results.size() || !bisim_results[i]) continue;
        auto& c = cases[i];
        KripkeModel m = builtin_model(c.model);
        auto fs = c.model.rfind("freshpath", 0) == 0
                      ? std::vector<FPtr>{parse_formula("nu X . <> X"), parse_formula("OR a . <> at(a)"),
                                          parse_formula("mu X . ((OR a . at(a)) \\/ <> X)")}
                      : bounded_fixtures(c.kind.k);
        used += static_cast<int>(fs.size());
        o.need(invariance_check(m, el(m, c.x), el(m, c.y), c.kind, fs), c.model);
    }
    o.note << used << " formula checks";
}

void freshpath_suite(Outcome& o) {
    for (const char* spec : {"freshpath(3,2)", "freshpath(4,2)", "freshpath(4,3)"}) {
        KripkeModel m = builtin_model(spec);
        o.need(decide_freshpath(m, el(m, "p1")), std::string(spec) + " p1");
        o.need(!decide_freshpath(m, el(m, "cp1")), std::string(spec) + " cp1");
    }
    int witnesses = 0;
    std::vector<KripkeModel> models;
    for (const char* spec : {"freshpath(3,2)", "pathk(3)", "pathkcheck(3)", "increasing", "star"})
        models.push_back(builtin_model(spec));
    for (auto& [name, m] : fixtures::equality_models()) models.push_back(m);
    models.push_back(parse_model("atoms equality\nstate s\ntrans s -> s\n"));
    models.push_back(parse_model("atoms equality\nstate s\nstate t(x)\ntrans s -> t(x)\ntrans t(x) -> s\ntrans s -> s\n"
                                 "label t(x) : at(x)\n"));
    for (auto& m : models) {
        const char* spec = "fixture";
        for (auto& orb : m.states.orbits()) {
            Element x{tag_name(orb.tag), witness(*m.ctx, orb.type)};
            if (bounded_oracle(m, x, 10).witness) {
                ++witnesses;
                o.need(decide_freshpath(m, x), spec);
            }
        }
    }
    o.note << witnesses << " oracle witnesses";
}

void reduction_suite(Outcome& o) {
    for (auto& name : fixture_tm_names()) {
        TuringMachine tm = parse_tm(fixture_tm_text(name));
        LassoModel l = run_to_lasso(tm, 10);
        LPtr f = ltl_nnf(tm_to_ltl(tm));
        bool sym = holds(l.model, l.start, *ltl_to_mu(f));
        o.need(sym, name);
        o.need(sym == ltl_holds_on_lasso(l.model, l.start, *f), name + " direct");
        for (auto& k : f->kids) o.need(holds(l.model, l.start, *ltl_to_mu(k)) == ltl_holds_on_lasso(l.model, l.start, *k), name + " clause");
    }
}

void bekic_suite(Outcome& o) {
    struct C {
        const char* model;
        const char* formula;
    };
    for (C c : {C{"chain(3)", "chain"}, C{"chain(5)", "chain"}, C{"fan(2)", "evensucc"}, C{"fan(3)", "evensucc"},
                C{"fan(interval)", "evensucc"}, C{"evensucc(1)", "evensucc"}}) {
        KripkeModel m = builtin_model(c.model);
        FPtr f = builtin_formula(c.formula, m.ctx->sort);
        FPtr g = bekic_single_orbit(f, *m.ctx);
        o.need(single_orbit_systems(*g, *m.ctx), std::string(c.model) + " single orbit");
        o.need(equals(eval(m, *f), eval(m, *g)), std::string(c.model) + " " + c.formula);
    }
}

std::string run_cli(const std::string& args, int* status) {
    std::string cmd = std::string(AMU_CLI) + " " + args;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        *status = -1;
        return {};
    }
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    *status = pclose(p);
    return out;
}

void determinism(Outcome& o) {
    int s1 = 0, s2 = 0;
    std::string a = run_cli("--format json-like --seed 0 selftest", &s1);
    std::string b = run_cli("--format json-like --seed 0 selftest", &s2);
    o.need(s1 == 0 && s2 == 0, "exit status");
    o.need(!a.empty() && a == b, "byte-identical output");
    o.need(a.find("\"failures\": \"0\"") != std::string::npos, "selftest failures");
    o.note << a.size() << " bytes";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget;
        std::function<void(Outcome&)> run;
    };
    std::vector<Criterion> cs = {
        {1, "orbit counts", 1, orbit_counts},
        {2, "least supports", 1, supports_suite},
        {3, "checker vs brute force", 60, checker_vs_oracle},
        {4, "fixture truths", 30, fixture_truths},
        {5, "adequacy", 120, adequacy},
        {6, "quotient games", 60, quotient_games},
        {7, "bisimulation fixtures", 120, bisim_fixtures},
        {8, "invariance", 120, invariance},
        {9, "#Path decision", 30, freshpath_suite},
        {10, "reduction round trip", 60, reduction_suite},
        {11, "Bekic normalisation", 60, bekic_suite},
        {12, "determinism", 600, determinism},
    };
    int failed = 0;
    for (auto& c : cs) {
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.note << "exception: " << e.what();
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt > c.budget) {
            o.ok = false;
            o.note << " over budget (" << c.budget << " s)";
        }
        failed += !o.ok;
        std::printf("%s %2d %-24s %8.2f s  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, dt, o.note.str().c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
