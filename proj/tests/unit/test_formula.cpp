#include <doctest.h>

#include "amu/checker.hpp"
#include "amu/formula.hpp"

using namespace amu;

TEST_CASE("parse and print") {
    CHECK_NOTHROW(validate(*parse_formula("mu X . (at(c1) \\/ <> X)")));
    CHECK_THROWS_AS(validate(*parse_formula("mu X . ~X")), InputError);
    CHECK_THROWS_AS(parse_formula("mu X . (<> X"), InputError);
    FPtr psi = builtin_formula("psi", Sort::Equality);
    CHECK(is_closed(*psi));
    CHECK(constants_of(*psi).empty());
    for (auto& name : builtin_formula_names()) {
        CAPTURE(name);
        FPtr f = builtin_formula(name, Sort::Ordered);
        FPtr g = parse_formula(print_formula(*f));
        CHECK(equal(*f, *g));
        CHECK(print_formula(*g) == print_formula(*f));
    }
}

TEST_CASE("sort restrictions of the library") {
    CHECK_NOTHROW(builtin_formula("P1", Sort::Equality));
    CHECK(constants_of(*builtin_formula("P1", Sort::Equality)).empty());
    for (const char* n : {"infsucc", "P1prime", "evensucc"}) CHECK_THROWS_AS(builtin_formula(n, Sort::Equality), InputError);
}

TEST_CASE("nnf") {
    CHECK(equal(*nnf(parse_formula("~ <> at(c1)")), *parse_formula("[] ~at(c1)")));
    CHECK(equal(*nnf(parse_formula("~ OR a . at(a)")), *parse_formula("AND a . ~at(a)")));
    FPtr f = nnf(parse_formula("~ mu X . ~ <> ~ X"));
    CHECK(equal(*f, *parse_formula("nu X . <> X")));
    for (auto& name : builtin_formula_names()) CHECK(is_nnf(*nnf(builtin_formula(name, Sort::Ordered))));
}

TEST_CASE("alternation depth") {
    CHECK(alternation_depth(parse_formula("mu X . (at(c) \\/ <> X)")) == 1);
    CHECK(alternation_depth(parse_formula("nu X . ([] X /\\ mu Y . (at(c) \\/ [] Y))")) == 1);
    CHECK(alternation_depth(parse_formula("nu X . mu Y . ((at(c) /\\ <> X) \\/ <> Y)")) == 2);
    CHECK(alternation_depth(builtin_formula("P2", Sort::Equality)) == 1);
    CHECK(alternation_depth(parse_formula("at(c)")) == 0);
}

TEST_CASE("global support bound") {
    CHECK(global_support_bound(*parse_formula("nu X . <> X")) == 0);
    CHECK(global_support_bound(*parse_formula("OR a . <> at(a)")) == 1);
    // every step into a member of a disjunction or conjunction adds that member's free names
    CHECK(global_support_bound(*parse_formula("OR a . AND b where a != b . <> (at(a) /\\ ~at(b))")) == 4);
    CHECK(global_support_bound(*parse_formula("OR a . AND b where a != b . <> at(b)")) == 2);
    CHECK(global_support_bound(*builtin_formula("psi", Sort::Equality)) == 3);
    CHECK(global_support_bound(*builtin_formula("infsucc", Sort::Ordered)) == 3);
    CHECK(binder_depth(*builtin_formula("infsucc", Sort::Ordered)) == 3);
}

TEST_CASE("library shapes") {
    FPtr phi = builtin_formula("chain_phi", Sort::Equality);
    REQUIRE(phi->kind == FK::Fix);
    CHECK(phi->eqs.size() == 1);
    CHECK(phi->eqs[0].params.size() == 1);
    FPtr chain = builtin_formula("chain", Sort::Equality);
    auto ctx = make_context(Sort::Equality);
    CHECK(single_orbit_systems(*chain, *ctx));
    CHECK(equal(*bekic_single_orbit(chain, *ctx), *chain));
    FPtr p1 = builtin_formula("P1", Sort::Equality);
    CHECK(equal(*bekic_single_orbit(p1, *ctx), *p1));
}
