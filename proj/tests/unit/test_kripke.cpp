#include <doctest.h>

#include "amu/kripke.hpp"

using namespace amu;

namespace {
int count_tag(const OrbitSet& s, const std::string& prefix) {
    int n = 0;
    for (auto& o : s.orbits()) n += tag_name(o.tag).rfind(prefix, 0) == 0;
    return n;
}
}  // namespace

TEST_CASE("star model") {
    KripkeModel m = builtin_model("star");
    CHECK(m.states.size() == 2);
    CHECK(m.trans.size() == 1);
    CHECK(least_support(m.states).empty());
    CHECK(least_support(m.predicates()).empty());
    OrbitSet star = OrbitSet(m.ctx, {orbit_of(*m.ctx, Element{"star", {}})});
    CHECK(equals(successors(m, star), universe(m.ctx, "leaf", 1)));
    CHECK(pred_of(m, star).empty());
    CHECK(successors(m, universe(m.ctx, "leaf", 1)).empty());
}

TEST_CASE("increasing model") {
    KripkeModel m = builtin_model("increasing");
    CHECK(m.states.size() == 1);
    OrbitRelation lt = relation_builder(m.ctx, "st", {"x"}, "st", {"y"}, Constraint::lit("x", Rel::Lt, "y"));
    CHECK(m.trans == lt);
}

TEST_CASE("#Path model phases") {
    KripkeModel k = builtin_model("pathk(3)");
    KripkeModel kc = builtin_model("pathkcheck(3)");
    CHECK(count_tag(k.states, "p") == 3);
    CHECK(count_tag(k.states, "q") == 12);
    CHECK(count_tag(kc.states, "q") == 9);
    OrbitSet r = OrbitSet(k.ctx, {});
    for (auto& o : k.states.orbits())
        if (tag_name(o.tag) == "r") r = set_union(r, OrbitSet(k.ctx, {o}));
    CHECK(equals(r, universe(k.ctx, "r", 1)));
    CHECK(equals(image(k.trans, r), r));
    CHECK(least_support(r).empty());
}

TEST_CASE("chain model support") {
    for (int n : {3, 5}) {
        KripkeModel m = builtin_model("chain(" + std::to_string(n) + ")");
        std::vector<int> all;
        for (int i = 0; i < m.ctx->size(); ++i) all.push_back(i);
        CHECK(m.ctx->size() == 2 * n);
        CHECK(least_support(m.predicates()) == all);
    }
}

TEST_CASE("DSL round trip of builtins") {
    for (const char* spec : {"star", "star(ordered)", "increasing", "infsucc(2)", "chain(3)", "evensucc(1)", "fan(4)",
                             "fan(interval)", "fan(cofinite)", "fan(empty)", "pathk(3)", "pathkcheck(3)",
                             "freshpath(3,2)"}) {
        CAPTURE(spec);
        KripkeModel m = builtin_model(spec);
        m.validate();
        std::string text = print_model(m);
        KripkeModel back = parse_model(text);
        CHECK(back.states == m.states);
        CHECK(back.trans == m.trans);
        CHECK(back.sat == m.sat);
        CHECK(print_model(back) == text);
    }
}

TEST_CASE("model DSL errors") {
    CHECK(parse_model("atoms equality\n").states.size() == 0);
    CHECK_THROWS_AS(parse_model("atoms equality\nstate a(x)\ntrans a(x) -> b(x)\n"), InputError);
    CHECK_THROWS_AS(parse_model("atoms equality\nstate a(x) where x < y\n"), InputError);
    CHECK_THROWS_AS(parse_model("atoms sideways\n"), InputError);
    CHECK_THROWS_AS(builtin_model("chain(0)"), InputError);
    CHECK_THROWS_AS(builtin_model("nosuch"), InputError);
}
