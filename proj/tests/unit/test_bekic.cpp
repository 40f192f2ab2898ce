#include <doctest.h>

#include "amu/checker.hpp"
#include "fixtures.hpp"

using namespace amu;

namespace {

void check_preserved(const KripkeModel& m, const FPtr& f) {
    FPtr g = bekic_single_orbit(f, *m.ctx);
    CHECK(single_orbit_systems(*g, *m.ctx));
    CHECK(equals(eval(m, *f), eval(m, *g)));
}

}  // namespace

TEST_CASE("vectorial library formulas") {
    FPtr chain = builtin_formula("chain", Sort::Equality);
    for (const char* spec : {"chain(3)", "chain(5)"}) {
        CAPTURE(spec);
        check_preserved(builtin_model(spec), chain);
    }
    FPtr even = builtin_formula("evensucc", Sort::Ordered);
    for (const char* spec : {"fan(2)", "fan(3)", "fan(interval)", "evensucc(1)"}) {
        CAPTURE(spec);
        check_preserved(builtin_model(spec), even);
    }
}

TEST_CASE("families split by constants") {
    KripkeModel cyc = parse_model(fixtures::kCycle);
    FPtr f = parse_formula("OR a . mu X(a) { X(b) := (at(b) /\\ ~at(c1)) \\/ <> X(b) }");
    CHECK_FALSE(single_orbit_systems(*f, *cyc.ctx));
    check_preserved(cyc, f);
    FPtr g = parse_formula("nu X(c1) { X(b) := <> Y(b) ; Y(d) := ~at(d) /\\ <> X(d) }");
    CHECK_FALSE(single_orbit_systems(*g, *cyc.ctx));
    check_preserved(cyc, g);
}

TEST_CASE("fixture matrix") {
    for (auto& [name, m] : fixtures::equality_models())
        for (auto& text : fixtures::equality_formulas()) {
            CAPTURE(name);
            CAPTURE(text);
            check_preserved(m, parse_formula(text));
        }
}

TEST_CASE("deterministic output") {
    KripkeModel m = builtin_model("chain(3)");
    FPtr f = builtin_formula("chain", Sort::Equality);
    std::string a = dump(eval(m, *f)), b = dump(eval(builtin_model("chain(3)"), *builtin_formula("chain", Sort::Equality)));
    CHECK(a == b);
    CHECK(print_model(m) == print_model(builtin_model("chain(3)")));
    CHECK(print_formula(*bekic_single_orbit(f, *m.ctx)) == print_formula(*bekic_single_orbit(f, *m.ctx)));
}
