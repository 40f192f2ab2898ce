#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>

#include "amu/checker.hpp"
#include "amu/orbit.hpp"

using namespace amu;

namespace {
Constraint lit(const std::string& a, Rel r, const std::string& b) { return Constraint::lit(a, r, b); }

OrbitSet random_set(const CtxPtr& c, std::mt19937& rng) {
    std::vector<Orbit> os;
    for (int n = 0; n <= 2; ++n) {
        OrbitSet u = universe(c, "t" + std::to_string(n), n);
        for (auto& o : u.orbits())
            if (rng() % 2) os.push_back(o);
    }
    return OrbitSet(c, os);
}
}  // namespace

TEST_CASE("set algebra basics") {
    auto e = make_context(Sort::Equality, {"c1", "c2"});
    OrbitSet a = universe(e, "a", 1);
    CHECK(set_union(a, a) == a);
    OrbitSet s = set_builder(e, "a", {"x"}, Constraint::disj({lit("x", Rel::Eq, "c1"), lit("x", Rel::Eq, "c2")}));
    OrbitSet rest = set_builder(e, "a", {"x"}, Constraint::conj({lit("x", Rel::Ne, "c1"), lit("x", Rel::Ne, "c2")}));
    CHECK(set_intersect(rest, s).empty());
    CHECK(equals(set_union(rest, s), a));
    CHECK(subset(OrbitSet(e), a));
    CHECK(member(Element{"a", {Rational(9)}}, rest));
    CHECK_FALSE(member(Element{"a", {Rational(1)}}, rest));

    auto bare = make_context(Sort::Equality);
    OrbitSet aa = set_product(universe(bare, "a", 1), universe(bare, "a", 1));
    CHECK(aa.size() == 2);
    OrbitSet eq = OrbitSet(bare, {aa.orbits()[0]}), ne = OrbitSet(bare, {aa.orbits()[1]});
    CHECK(equals(aa, set_union(eq, ne)));
}

TEST_CASE("least support") {
    auto e = make_context(Sort::Equality, {"c1", "c2"});
    CHECK(least_support(universe(e, "a", 1)).empty());
    OrbitSet rest = set_builder(e, "a", {"x"}, Constraint::conj({lit("x", Rel::Ne, "c1"), lit("x", Rel::Ne, "c2")}));
    CHECK(least_support(rest) == std::vector<int>{0, 1});
    OrbitSet one = set_builder(e, "a", {"x"}, lit("x", Rel::Ne, "c2"));
    CHECK(least_support(one) == std::vector<int>{1});

    auto o = make_context(Sort::Ordered, {"c1", "c2", "c3"});
    OrbitSet iv = set_builder(o, "a", {"x"}, Constraint::conj({lit("c1", Rel::Lt, "x"), lit("x", Rel::Lt, "c2")}));
    CHECK(least_support(iv) == std::vector<int>{0, 1});
    CHECK(least_support_names(iv) == std::vector<std::string>{"c1", "c2"});
}

TEST_CASE("support lattice") {
    std::mt19937 rng(7);
    for (auto s : {Sort::Equality, Sort::Ordered}) {
        auto c = make_context(s, {"c1", "c2", "c3"});
        for (int i = 0; i < 25; ++i) {
            OrbitSet x = random_set(c, rng);
            auto ls = least_support(x);
            for (int mask = 0; mask < 8; ++mask) {
                std::vector<int> t;
                for (int j = 0; j < 3; ++j)
                    if (mask >> j & 1) t.push_back(j);
                bool covers = std::includes(t.begin(), t.end(), ls.begin(), ls.end());
                CHECK(supports(x, t) == covers);
            }
        }
    }
}

TEST_CASE("orbits_under and supported subsets") {
    auto e = make_context(Sort::Equality, {"c1"});
    auto o = make_context(Sort::Ordered, {"c1"});
    CHECK(orbits_under(universe(e, "a", 1), {}).size() == 1);
    auto cells = orbits_under(universe(e, "a", 1), {0});
    REQUIRE(cells.size() == 2);
    OrbitSet just = set_builder(e, "a", {"x"}, lit("x", Rel::Eq, "c1"));
    CHECK(((cells[0] == just) || (cells[1] == just)));
    CHECK(orbits_under(universe(o, "a", 1), {0}).size() == 3);
    CHECK(count_supported_subsets(universe(e, "a", 1), {}) == 2);
    CHECK(count_supported_subsets(universe(e, "a", 1), {0}) == 4);
    CHECK(count_supported_subsets(universe(o, "a", 1), {0}) == 8);
    OrbitSet iv = set_builder(o, "a", {"x"}, lit("c1", Rel::Lt, "x"));
    CHECK_THROWS_AS(orbits_under(iv, {}), InputError);
}

TEST_CASE("equivariant binary relations on atoms") {
    auto e = make_context(Sort::Equality);
    OrbitRelation all = relation_builder(e, "a", {"x"}, "a", {"y"}, Constraint::truth());
    CHECK(count_supported_subsets(set_product(universe(e, "a", 1), universe(e, "a", 1)), {}) == 4);
    CHECK(all.size() == 2);
    // permutation-closed subsets of {0,1,2}^2
    int closed = 0;
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p{0, 1, 2};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    for (int mask = 0; mask < 512; ++mask) {
        bool ok = true;
        for (int i = 0; i < 9 && ok; ++i)
            if (mask >> i & 1)
                for (auto& q : perms) ok = ok && (mask >> (q[i / 3] * 3 + q[i % 3]) & 1);
        closed += ok;
    }
    CHECK(closed == 4);
}

TEST_CASE("image") {
    auto o = make_context(Sort::Ordered, {"c1"});
    OrbitRelation lt = relation_builder(o, "a", {"x"}, "a", {"y"}, lit("x", Rel::Lt, "y"));
    OrbitSet c1 = set_builder(o, "a", {"x"}, lit("x", Rel::Eq, "c1"));
    CHECK(equals(image(lt, c1), set_builder(o, "a", {"y"}, lit("c1", Rel::Lt, "y"))));
    CHECK(image(lt, OrbitSet(o)).empty());
    OrbitSet a = universe(o, "a", 1);
    CHECK(equals(image(identity_relation(a), a), a));
    CHECK(equals(preimage(lt, c1), set_builder(o, "a", {"y"}, lit("y", Rel::Lt, "c1"))));
}

TEST_CASE("boolean algebra laws") {
    std::mt19937 rng(13);
    for (auto s : {Sort::Equality, Sort::Ordered}) {
        auto c = make_context(s, {"c1"});
        for (int i = 0; i < 30; ++i) {
            OrbitSet x = random_set(c, rng), y = random_set(c, rng), z = random_set(c, rng);
            OrbitSet u = set_union(set_union(universe(c, "t0", 0), universe(c, "t1", 1)), universe(c, "t2", 2));
            CHECK(equals(set_union(x, set_union(y, z)), set_union(set_union(x, y), z)));
            CHECK(equals(set_intersect(x, set_union(y, z)), set_union(set_intersect(x, y), set_intersect(x, z))));
            CHECK(equals(set_difference(u, set_union(x, y)),
                         set_intersect(set_difference(u, x), set_difference(u, y))));
        }
    }
}

TEST_CASE("membership agrees with concretization") {
    std::mt19937 rng(17);
    for (auto s : {Sort::Equality, Sort::Ordered}) {
        auto c = make_context(s, {"c1", "c2"});
        auto pool = atom_pool(*c, 3);
        for (int i = 0; i < 10; ++i) {
            OrbitSet x = random_set(c, rng);
            for (auto& a : pool)
                for (auto& b : pool) {
                    Element e{"t2", {a, b}};
                    bool concrete = false;
                    for (auto& o : x.orbits())
                        if (o.tag == intern_tag("t2") && type_of(*c, e.args) == o.type) concrete = true;
                    CHECK(member(e, x) == concrete);
                }
        }
    }
}
