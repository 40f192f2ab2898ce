#include "amu/selftest.hpp"

#include <json.hpp>
#include <map>
#include <sstream>

#include "amu/bisim.hpp"
#include "amu/checker.hpp"
#include "amu/freshpath.hpp"
#include "amu/games.hpp"
#include "amu/reductions.hpp"

namespace amu {

namespace {

struct Report {
    std::map<std::string, std::string> values;
    int failures = 0;

    void put(const std::string& key, const std::string& v) { values[key] = v; }
    void expect(const std::string& key, const std::string& v, const std::string& want) {
        put(key, v);
        if (v != want) {
            ++failures;
            values[key + ".expected"] = want;
        }
    }
};

std::string b(bool x) { return x ? "true" : "false"; }

template <class F>
std::string guarded(F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return std::string("error: ") + e.what();
    }
}

void orbit_counts(Report& r) {
    const int bell[] = {1, 1, 2, 5, 15, 52};
    const int fubini[] = {1, 1, 3, 13, 75, 541};
    for (int n = 0; n <= 5; ++n) {
        auto eq = universe(make_context(Sort::Equality), "t", n).size();
        auto ord = universe(make_context(Sort::Ordered), "t", n).size();
        r.expect("orbits.equality." + std::to_string(n), std::to_string(eq), std::to_string(bell[n]));
        r.expect("orbits.ordered." + std::to_string(n), std::to_string(ord), std::to_string(fubini[n]));
    }
}

void checks(Report& r) {
    struct Case {
        const char* model;
        const char* formula;
        const char* state;
        const char* want;  // empty: report only
    };
    const Case cases[] = {
        {"star", "psi", "star", "true"},
        {"increasing", "P1andP2", "st(1)", "true"},
        {"increasing", "P1", "st(1/2)", "true"},
        {"fan(cofinite)", "infsucc", "root", ""},
        {"fan(empty)", "infsucc", "root", "false"},
        {"chain(3)", "chain", "p1", ""},
        {"evensucc(1)", "evensucc", "p", ""},
        {"evensucc(1)", "evensucc", "q", ""},
        {"fan(interval)", "infsucc", "root", "true"},
        {"fan(3)", "infsucc", "root", "false"},
        {"freshpath(3,2)", "infpath", "p1", ""},
        {"star", "diatrue", "star", "true"},
        {"star", "boxfalse", "leaf(1)", "true"},
    };
    for (auto& c : cases) {
        std::string key = std::string("check.") + c.model + "." + c.formula + "@" + c.state;
        std::string orbits;
        std::string v = guarded([&] {
            KripkeModel m = builtin_model(c.model);
            FPtr f = builtin_formula(c.formula, m.ctx->sort);
            orbits = std::to_string(eval(m, *f).size());
            return b(holds(m, parse_element(*m.ctx, c.state), *f));
        });
        if (*c.want)
            r.expect(key, v, c.want);
        else
            r.put(key, v);
        if (!orbits.empty()) r.put(key + ".orbits", orbits);
    }
}

void games(Report& r, uint64_t seed) {
    for (int i = 0; i < 20; ++i) {
        std::string key = "games." + std::to_string(i);
        r.put(key, guarded([&] {
                  AtomicParityGame g = random_game(seed * 1000 + static_cast<uint64_t>(i));
                  auto [ex, fa] = winners(g);
                  OrbitGame q = quotient(g);
                  return "V=" + std::to_string(g.V.size()) + " quotient=" + std::to_string(q.size()) +
                         " exists=" + std::to_string(ex.size()) + " forall=" + std::to_string(fa.size());
              }));
    }
}

void bisims(Report& r, bool heavy) {
    struct Case {
        const char* model;
        BisimKind kind;
        const char* x;
        const char* y;
        const char* want;
    };
    std::vector<Case> cases = {
        {"infsucc(1)", BisimKind::full(1), "p", "q", "true"},
        {"infsucc(2)", BisimKind::full(2), "p", "q", "true"},
        {"infsucc(1)", BisimKind::full(2), "p", "q", "false"},
        {"chain(3)", BisimKind::stack(1), "p1", "q1", "true"},
        {"chain(5)", BisimKind::stack(2), "p1", "q1", "true"},
        {"chain(3)", BisimKind::stack(2), "p1", "q1", "false"},
        {"freshpath(3,2)", BisimKind::full(2), "p1", "cp1", "true"},
    };
    if (heavy) cases.push_back({"freshpath(4,3)", BisimKind::full(3), "p1", "cp1", "true"});
    for (auto& c : cases) {
        std::string key = std::string("bisim.") + c.model + "." + c.kind.str() + "." + c.x + "~" + c.y;
        r.expect(key, guarded([&] {
                     KripkeModel m = builtin_model(c.model);
                     return b(decide_bisimilar(m, parse_element(*m.ctx, c.x), parse_element(*m.ctx, c.y), c.kind));
                 }),
                 c.want);
    }
}

void freshpaths(Report& r) {
    for (const char* spec : {"freshpath(3,2)", "freshpath(4,2)", "freshpath(4,3)"}) {
        for (auto [st, want] : {std::pair{"p1", "true"}, std::pair{"cp1", "false"}}) {
            std::string key = std::string("freshpath.") + spec + "@" + st;
            r.expect(key, guarded([&] {
                         KripkeModel m = builtin_model(spec);
                         return b(decide_freshpath(m, parse_element(*m.ctx, st)));
                     }),
                     want);
        }
    }
}

void reductions(Report& r) {
    for (auto& name : fixture_tm_names()) {
        std::string key = "reduction." + name;
        r.expect(key, guarded([&] {
                     TuringMachine tm = parse_tm(fixture_tm_text(name));
                     LassoModel l = run_to_lasso(tm, 10);
                     LPtr f = ltl_nnf(tm_to_ltl(tm));
                     r.put(key + ".clauses", std::to_string(tm_clause_count(tm)));
                     r.put(key + ".lasso_states", std::to_string(l.model.states.size()));
                     bool sym = holds(l.model, l.start, *ltl_to_mu(f));
                     bool direct = ltl_holds_on_lasso(l.model, l.start, *f);
                     return sym == direct ? b(sym) : "disagree";
                 }),
                 "true");
    }
}

}  // namespace

std::string selftest_report(const SelftestOptions& opt, int* failures) {
    Report r;
    orbit_counts(r);
    checks(r);
    games(r, opt.seed);
    bisims(r, opt.heavy);
    freshpaths(r);
    reductions(r);
    r.put("seed", std::to_string(opt.seed));
    r.put("failures", std::to_string(r.failures));
    if (failures) *failures = r.failures;
    if (opt.json) {
        nlohmann::json j = nlohmann::json::object();
        for (auto& [k, v] : r.values) j[k] = v;
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    for (auto& [k, v] : r.values) os << k << " = " << v << "\n";
    return os.str();
}

}  // namespace amu
