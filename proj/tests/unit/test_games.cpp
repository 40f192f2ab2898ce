#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "amu/checker.hpp"
#include "amu/games.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace amu;

namespace {

const char* kChooseTwo =
    "atoms equality\n"
    "node pair(x,y) where x != y\nnode one(x)\n"
    "owner exists pair(x,y) where x != y\n"
    "edge pair(x,y) -> one(z) where x != y /\\ (z = x \\/ z = y)\n"
    "edge one(x) -> pair(y,z) where y != z\n";

int index_of(const std::vector<Orbit>& v, const Orbit& o) {
    return static_cast<int>(std::find(v.begin(), v.end(), o) - v.begin());
}

}  // namespace

TEST_CASE("choose-two example game") {
    AtomicParityGame g = parse_game(kChooseTwo);
    std::vector<Orbit> nodes;
    OrbitGame q = quotient(g, &nodes);
    REQUIRE(q.size() == 2);
    for (int v = 0; v < 2; ++v) CHECK(q.succ[v] == std::vector<int>{1 - v});
    auto [ex, fa] = winners(g);
    CHECK(equals(ex, g.V));
    CHECK(fa.empty());
    CHECK(parse_game(print_game(g)).R == g.R);
}

TEST_CASE("small quotients") {
    AtomicParityGame clique = parse_game("atoms equality\nnode s(x)\nedge s(x) -> s(y)\n");
    OrbitGame q = quotient(clique);
    REQUIRE(q.size() == 1);
    CHECK(q.succ[0] == std::vector<int>{0});
    CHECK(winners(clique).first.size() == 1);  // rank 0 loop
    CHECK(quotient(parse_game("atoms equality\n")).size() == 0);

    AtomicParityGame dead = parse_game("atoms equality\nnode s\nowner exists s\n");
    CHECK(winners(dead).second.size() == 1);
    AtomicParityGame dead_a = parse_game("atoms equality\nnode s\n");
    CHECK(winners(dead_a).first.size() == 1);
    AtomicParityGame odd = parse_game("atoms equality\nnode s\nrank 1 s\nowner exists s\nedge s -> s\n");
    CHECK(winners(odd).second.size() == 1);
}

TEST_CASE("finite solver") {
    OrbitGame g;
    g.names = {"a", "b", "c"};
    g.exists = {true, false, true};
    g.rank = {2, 1, 3};
    g.succ = {{1, 2}, {0}, {2}};
    FiniteSolution s = solve_finite(g);
    // a -> b -> a keeps rank 2 on top; c loops on 3
    CHECK(s.exists_wins == std::vector<bool>{true, true, false});
    CHECK(s.strategy[0] == 1);
    oracle::Game o{g.exists, g.rank, g.succ};
    CHECK(oracle::zielonka(o) == s.exists_wins);
}

TEST_CASE("random games against a concrete solver") {
    int nontrivial = 0;
    for (uint64_t seed = 0; seed < 200; ++seed) {
        CAPTURE(seed);
        AtomicParityGame g = random_game(seed);
        auto [ex, fa] = winners(g);
        CHECK(equals(set_union(ex, fa), g.V));
        CHECK(set_intersect(ex, fa).empty());
        oracle::Concrete c = oracle::instantiate(g, 4);
        auto win = oracle::zielonka(c.game);
        for (size_t v = 0; v < c.nodes.size(); ++v) CHECK(member(c.nodes[v], ex) == win[v]);
        nontrivial += !ex.empty() && !fa.empty();

        // the node map is a functional bisimulation onto the quotient
        std::vector<Orbit> nodes;
        OrbitGame q = quotient(g, &nodes);
        for (size_t v = 0; v < c.nodes.size(); ++v) {
            int qv = index_of(nodes, orbit_of(*g.ctx, c.nodes[v]));
            REQUIRE(qv < q.size());
            CHECK(q.exists[qv] == c.game.exists[v]);
            CHECK(q.rank[qv] == c.game.rank[v]);
            std::set<int> image;
            for (int w : c.game.succ[v]) image.insert(index_of(nodes, orbit_of(*g.ctx, c.nodes[w])));
            CHECK(image == std::set<int>(q.succ[qv].begin(), q.succ[qv].end()));
        }
    }
    CHECK(nontrivial > 20);
}

TEST_CASE("evaluation game") {
    KripkeModel star = builtin_model("star");
    OrbitSet slice = eval_game_slice(star, *parse_formula("<> true"));
    CHECK(member(Element{"star", {}}, slice));
    CHECK_FALSE(member(Element{"leaf", {Rational(1)}}, slice));
    CHECK(member(Element{"star", {}}, eval_game_slice(star, *builtin_formula("psi", Sort::Equality))));
    CHECK_THROWS_AS(build_eval_game(star, *parse_formula("~ <> true")), InputError);
}

TEST_CASE("adequacy on the fixture matrix") {
    for (auto& [name, m] : fixtures::equality_models())
        for (auto& text : fixtures::equality_formulas()) {
            CAPTURE(name);
            CAPTURE(text);
            CHECK(adequacy_check(m, *parse_formula(text)));
        }
    CHECK(adequacy_check(parse_model("atoms equality\n"), *parse_formula("true")));
    KripkeModel inc = builtin_model("increasing");
    for (const char* f : {"P1", "P2", "P1prime"}) CHECK(adequacy_check(inc, *builtin_formula(f, Sort::Ordered)));
    for (const char* fan : {"fan(3)", "fan(4)", "fan(interval)"}) {
        KripkeModel m = builtin_model(fan);
        CHECK(adequacy_check(m, *builtin_formula("evensucc", Sort::Ordered)));
        CHECK(adequacy_check(m, *builtin_formula("infsucc", Sort::Ordered)));
    }
}
