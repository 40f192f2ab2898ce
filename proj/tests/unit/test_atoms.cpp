#include <doctest.h>

#include <random>

#include "amu/atoms.hpp"
#include "oracle.hpp"

using namespace amu;

namespace {
Constraint lit(const char* a, Rel r, const char* b) { return Constraint::lit(a, r, b); }
}  // namespace

TEST_CASE("satisfiable") {
    auto empty = make_context(Sort::Equality);
    CHECK_FALSE(satisfiable(lit("a", Rel::Ne, "a"), {"a"}, *empty));
    auto ord = make_context(Sort::Ordered);
    CHECK_FALSE(satisfiable(Constraint::conj({lit("a", Rel::Lt, "b"), lit("b", Rel::Lt, "a")}), {"a", "b"}, *ord));
    auto two = make_context(Sort::Equality, {"c1", "c2"});
    CHECK(satisfiable(Constraint::conj({lit("a", Rel::Ne, "c1"), lit("a", Rel::Ne, "c2")}), {"a"}, *two));
    CHECK_THROWS_AS(satisfiable(lit("a", Rel::Eq, "zz"), {"a"}, *two), InputError);
}

TEST_CASE("complete: type counts") {
    auto e = make_context(Sort::Equality), o = make_context(Sort::Ordered);
    CHECK(complete(Constraint::truth(), {"a", "b"}, *e).size() == 2);
    CHECK(complete(Constraint::truth(), {"a", "b"}, *o).size() == 3);
    CHECK(complete(Constraint::truth(), {"a", "b", "c"}, *e).size() == 5);
    CHECK(complete(Constraint::truth(), {"a", "b", "c"}, *o).size() == 13);
    for (int n = 0; n <= 5; ++n) {
        CHECK(static_cast<long>(all_types(*e, n).size()) == oracle::bell(n));
        CHECK(static_cast<long>(all_types(*o, n).size()) == oracle::ordered_bell(n));
    }
}

TEST_CASE("oracle enumerators") {
    const long bell[] = {1, 1, 2, 5, 15, 52, 203};
    const long fub[] = {1, 1, 3, 13, 75, 541, 4683};
    for (int n = 0; n <= 6; ++n) {
        CHECK(oracle::bell(n) == bell[n]);
        CHECK(oracle::ordered_bell(n) == fub[n]);
    }
}

TEST_CASE("type_of") {
    auto o = make_context(Sort::Ordered);
    Type t = type_of(*o, {Rational(5), Rational(5)});
    CHECK(t.lab == std::vector<uint8_t>{0, 0});
    auto c = make_context(Sort::Ordered, {"c1"}, {Rational(3)});
    Type u = type_of(*c, {Rational(1), Rational(7)});
    CHECK(u.k == 1);
    CHECK(u.lab == std::vector<uint8_t>{1, 0, 2});
    std::mt19937 rng(3);
    auto cc = make_context(Sort::Ordered, {"c1", "c2"});
    for (int i = 0; i < 100; ++i) {
        std::vector<Atom> tup;
        for (int j = 0; j < 3; ++j) tup.push_back(Rational(static_cast<int64_t>(rng() % 7), 2));
        auto all = complete(Constraint::truth(), {"x", "y", "z"}, *cc);
        CHECK(std::find(all.begin(), all.end(), type_of(*cc, tup)) != all.end());
    }
}

TEST_CASE("witness") {
    auto e = make_context(Sort::Equality);
    Type t = type_of(*e, {Rational(4), Rational(4)});
    auto w = witness(*e, t);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == w[1]);
    auto c = make_context(Sort::Ordered, {"c1", "c2"}, {Rational(3), Rational(7)});
    Type mid = type_of(*c, {Rational(4)});
    Atom x = witness(*c, mid)[0];
    CHECK(Rational(3) < x);
    CHECK(x < Rational(7));
    for (auto& s : {Sort::Equality, Sort::Ordered}) {
        auto ctx = make_context(s, {"c1", "c2"});
        for (auto& ty : all_types(*ctx, 3)) CHECK(type_of(*ctx, witness(*ctx, ty)) == ty);
    }
    CHECK(all_types(*make_context(Sort::Ordered), 3).size() == 13);
}

TEST_CASE("project_exists") {
    auto o = make_context(Sort::Ordered);
    Type t = type_of(*o, {Rational(1), Rational(2), Rational(3)});
    CHECK(project_exists(Sort::Ordered, t, {0, 1, 2}).lab.empty());
    CHECK(project_exists(Sort::Ordered, t, {1}) == type_of(*o, {Rational(1), Rational(3)}));
    std::mt19937 rng(11);
    for (auto s : {Sort::Equality, Sort::Ordered}) {
        auto ctx = make_context(s, {"c1"});
        auto types = all_types(*ctx, 4);
        for (int i = 0; i < 60; ++i) {
            const Type& ty = types[rng() % types.size()];
            std::vector<int> drop, keep;
            for (int v = 0; v < 4; ++v) (rng() % 2 ? drop : keep).push_back(v);
            auto w = witness(*ctx, ty);
            std::vector<Atom> kept;
            for (int v : keep) kept.push_back(w[v]);
            CHECK(type_of(*ctx, kept) == project_exists(s, ty, drop));
        }
    }
}

TEST_CASE("complete partitions random constraints") {
    std::mt19937 rng(5);
    const Rel rels[] = {Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le};
    std::vector<std::string> vars{"x", "y", "z"}, names{"x", "y", "z", "c1"};
    for (auto s : {Sort::Equality, Sort::Ordered}) {
        auto ctx = make_context(s, {"c1"});
        for (int i = 0; i < 40; ++i) {
            std::vector<Constraint> lits;
            for (int j = 0; j < 3; ++j) {
                Rel r = rels[rng() % (s == Sort::Ordered ? 4 : 2)];
                lits.push_back(Constraint::lit(names[rng() % 4], r, names[rng() % 4]));
            }
            Constraint c = rng() % 2 ? Constraint::conj(lits) : Constraint::disj(lits);
            auto ts = complete(c, vars, *ctx);
            for (auto& ty : all_types(*ctx, 3)) {
                bool in = std::find(ts.begin(), ts.end(), ty) != ts.end();
                CHECK(in == holds_on(c, vars, *ctx, witness(*ctx, ty)));
            }
        }
    }
}
