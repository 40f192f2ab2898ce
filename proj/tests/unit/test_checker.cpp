#include <doctest.h>

#include "amu/checker.hpp"
#include "fixtures.hpp"

using namespace amu;

TEST_CASE("checker agrees with the brute-force semantics") {
    int compared = 0;
    for (auto& [name, m] : fixtures::equality_models())
        for (auto& text : fixtures::equality_formulas()) {
            CAPTURE(name);
            CAPTURE(text);
            FPtr f = parse_formula(text);
            OrbitSet sym = eval(m, *f);
            OrbitSet ref = brute_force_eval(m, *f);
            CHECK(equals(sym, ref));
            EvalOptions dual;
            dual.nu_by_negation = true;
            CHECK(equals(eval(m, *f, {}, dual), sym));
            CHECK(equals(eval(m, *nnf(f)), sym));
            ++compared;
        }
    CHECK(compared >= 60);
}

TEST_CASE("fixture truths") {
    KripkeModel star = builtin_model("star");
    CHECK(holds(star, Element{"star", {}}, *builtin_formula("psi", Sort::Equality)));
    CHECK(eval(star, *builtin_formula("infpath", Sort::Equality)).empty());

    KripkeModel inc = builtin_model("increasing");
    CHECK(equals(eval(inc, *builtin_formula("P1andP2", Sort::Ordered)), inc.states));
    CHECK(eval(inc, *builtin_formula("P1prime", Sort::Ordered)).empty());

    FPtr even = builtin_formula("evensucc", Sort::Ordered);
    Element root{"root", {}};
    CHECK(holds(builtin_model("fan(2)"), root, *even));
    CHECK(holds(builtin_model("fan(4)"), root, *even));
    CHECK_FALSE(holds(builtin_model("fan(3)"), root, *even));
    CHECK_FALSE(holds(builtin_model("fan(interval)"), root, *even));

    FPtr inf = builtin_formula("infsucc", Sort::Ordered);
    CHECK(holds(builtin_model("fan(interval)"), root, *inf));
    CHECK(holds(builtin_model("fan(cofinite)"), root, *inf));
    CHECK_FALSE(holds(builtin_model("fan(4)"), root, *inf));
    CHECK_FALSE(holds(builtin_model("fan(empty)"), root, *inf));
    KripkeModel es = builtin_model("evensucc(1)");
    OrbitSet at = eval(es, *inf);
    CHECK(member(Element{"q", {}}, at) == holds(es, Element{"q", {}}, *inf));
}

TEST_CASE("psi on star by brute force") {
    KripkeModel star = builtin_model("star");
    FPtr f = parse_formula("OR a . <> at(a)");
    CHECK(equals(eval(star, *f), brute_force_eval(star, *f)));
    CHECK(eval(star, *f).size() == 1);
}

TEST_CASE("supports of results") {
    for (auto& [name, m] : fixtures::equality_models()) {
        std::vector<int> all;
        for (int i = 0; i < m.ctx->size(); ++i) all.push_back(i);
        for (auto& text : fixtures::equality_formulas()) CHECK(supports(eval(m, *parse_formula(text)), all));
    }
}

TEST_CASE("free variables through the environment") {
    KripkeModel star = builtin_model("star");
    FPtr f = fm::dia(fm::var("X"));
    Environment rho;
    rho["X"] = EnvEntry{0, universe(star.ctx, "leaf", 1).orbits()};
    CHECK(eval(star, *f, rho).size() == 1);
    CHECK_THROWS_AS(eval(star, *f), InputError);
}
