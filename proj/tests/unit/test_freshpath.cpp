#include <doctest.h>

#include <map>

#include "amu/checker.hpp"
#include "amu/freshpath.hpp"

using namespace amu;

namespace {

Element el(const KripkeModel& m, const std::string& s) { return parse_element(*m.ctx, s); }

const char* kCofiniteLoop =
    "atoms equality\nconst c1\nstate a\nstate b\n"
    "label a : at(y) where y != c1\ntrans a -> b\ntrans b -> b\n";
const char* kTwoCofinite =
    "atoms equality\nconst c1\nstate a1\nstate a2\n"
    "label a1 : at(y) where y != c1\nlabel a2 : at(y)\ntrans a1 -> a2\ntrans a2 -> a1\n";

}  // namespace

TEST_CASE("#Path models") {
    for (const char* spec : {"freshpath(3,2)", "freshpath(4,2)", "freshpath(4,3)"}) {
        CAPTURE(spec);
        KripkeModel m = builtin_model(spec);
        CHECK(decide_freshpath(m, el(m, "p1")));
        CHECK_FALSE(decide_freshpath(m, el(m, "cp1")));
    }
    KripkeModel k = builtin_model("pathk(3)");
    for (auto& o : k.states.orbits()) {
        Element x{tag_name(o.tag), witness(*k.ctx, o.type)};
        CAPTURE(x.str());
        CHECK(decide_freshpath(k, x));
    }
}

TEST_CASE("simple models") {
    KripkeModel star = builtin_model("star");
    CHECK_FALSE(decide_freshpath(star, el(star, "star")));
    KripkeModel inc = builtin_model("increasing");
    for (const char* s : {"st(0)", "st(1)", "st(7/2)"}) CHECK(decide_freshpath(inc, el(inc, s)));
    KripkeModel loop = parse_model("atoms equality\nstate s\ntrans s -> s\n");
    CHECK(decide_freshpath(loop, el(loop, "s")));
    KripkeModel lab = parse_model("atoms equality\nstate s\nlabel s : mark\ntrans s -> s\n");
    CHECK_FALSE(decide_freshpath(lab, el(lab, "s")));
    KripkeModel walk = parse_model("atoms equality\nstate s(x)\nlabel s(x) : at(x)\ntrans s(x) -> s(y) where x != y\n");
    CHECK(decide_freshpath(walk, el(walk, "s(1)")));
}

TEST_CASE("co-finite prefilter") {
    CHECK(cofinite_prefilter(builtin_model("star"), Element{"star", {}}) == Prefilter::NotApplicable);
    KripkeModel one = parse_model(kCofiniteLoop);
    CHECK(cofinite_prefilter(one, el(one, "a")) == Prefilter::FoundPath);
    CHECK(decide_freshpath(one, el(one, "a")));
    KripkeModel two = parse_model(kTwoCofinite);
    CHECK(cofinite_prefilter(two, el(two, "a1")) == Prefilter::Excluded);
    CHECK_FALSE(decide_freshpath(two, el(two, "a1")));
    CHECK(std::string(prefilter_str(Prefilter::FoundPath)) == "found-path");
}

TEST_CASE("forbidden-set construction") {
    KripkeModel loop = parse_model("atoms equality\nstate s\nstate t(x)\ntrans s -> t(x)\ntrans t(x) -> s\n");
    KripkeModel kh = build_khat(loop);
    CHECK(kh.states.size() == loop.states.size());
    KripkeModel inc = builtin_model("increasing");
    KripkeModel ki = build_khat(inc);
    REQUIRE(ki.states.size() == 1);
    CHECK(tag_name(ki.states.orbits()[0].tag) == khat_tag("st", 0));

    // per source orbit at most 2^(constants + arity) forbidden-set variants
    for (const char* spec : {"pathk(3)", "pathkcheck(3)"}) {
        KripkeModel k = builtin_model(spec);
        KripkeModel kk = build_khat(k);
        std::map<std::pair<std::string, Type>, int> variants;
        for (auto& o : kk.states.orbits()) {
            std::string t = tag_name(o.tag);
            variants[{t.substr(0, t.find('#')), o.type}]++;
        }
        for (auto& [key, n] : variants) {
            Orbit src{intern_tag(key.first), key.second};
            REQUIRE(k.states.contains(src));
            CHECK(n <= (1 << (k.ctx->size() + src.arity())));
        }
        CHECK(kk.states.size() > k.states.size());
    }
}

TEST_CASE("bounded oracle is one-sided") {
    KripkeModel loop = parse_model("atoms equality\nstate s\ntrans s -> s\n");
    CHECK(bounded_oracle(loop, el(loop, "s"), 4).witness);
    KripkeModel star = builtin_model("star");
    for (int steps : {1, 3, 8}) CHECK_FALSE(bounded_oracle(star, el(star, "star"), steps).witness);
    for (const char* spec : {"freshpath(3,2)", "pathk(3)", "pathkcheck(3)", "increasing", "star"}) {
        KripkeModel m = builtin_model(spec);
        for (auto& o : m.states.orbits()) {
            Element x{tag_name(o.tag), witness(*m.ctx, o.type)};
            if (bounded_oracle(m, x, 10).witness) CHECK(decide_freshpath(m, x));
        }
    }
}
