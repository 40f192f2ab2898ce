#include <doctest.h>

#include <random>
#include <sstream>

#include "amu/bisim.hpp"
#include "amu/checker.hpp"
#include "fixtures.hpp"

using namespace amu;

namespace {

Element el(const KripkeModel& m, const std::string& s) { return parse_element(*m.ctx, s); }

// Small random models: tags s0 (nullary) and s1(x), labels at(x) or mark.
KripkeModel random_model(uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto coin = [&](int n) { return rng() % n == 0; };
    std::ostringstream os;
    bool constant = coin(2);
    os << "atoms equality\n" << (constant ? "const c\n" : "") << "state s0\nstate s1(x)\nstate s2(x)\n";
    if (coin(2)) os << "label s0 : mark\n";
    os << "label s1(x) : at(x)" << (constant && coin(2) ? " where x != c" : "") << "\n";
    if (coin(2)) os << "label s2(x) : mark\n";
    const char* edges[] = {"s0 -> s1(y)",           "s0 -> s2(y)",          "s1(x) -> s1(y) where x != y",
                           "s1(x) -> s1(y) where x = y", "s1(x) -> s2(y) where x = y", "s2(x) -> s1(y) where x != y",
                           "s2(x) -> s0",           "s1(x) -> s0",          "s2(x) -> s2(y) where x != y"};
    for (auto* e : edges)
        if (coin(2)) os << "trans " << e << "\n";
    if (constant && coin(2)) os << "trans s0 -> s1(c)\n";
    return parse_model(os.str());
}

std::vector<FPtr> scalar_fixtures() {
    std::vector<FPtr> out;
    for (auto& t : fixtures::equality_formulas()) {
        FPtr f = parse_formula(t);
        if (f->kind != FK::Fix && t.find('{') == std::string::npos) out.push_back(f);
    }
    return out;
}

std::vector<FPtr> bounded(const std::vector<FPtr>& fs, int k) {
    std::vector<FPtr> out;
    for (auto& f : fs)
        if (global_support_bound(*f) <= k) out.push_back(f);
    return out;
}

}  // namespace

TEST_CASE("InfSucc pairs") {
    for (int k : {1, 2}) {
        KripkeModel m = builtin_model("infsucc(" + std::to_string(k) + ")");
        CHECK(m.ctx->size() == 2 * k);
        CHECK(decide_bisimilar(m, el(m, "p"), el(m, "q"), BisimKind::full(k)));
        auto fs = bounded(scalar_fixtures(), k);
        CHECK(fs.size() >= 4);
        CHECK(invariance_check(m, el(m, "p"), el(m, "q"), BisimKind::full(k), fs));
    }
    KripkeModel m = builtin_model("infsucc(1)");
    CHECK_FALSE(decide_bisimilar(m, el(m, "p"), el(m, "q"), BisimKind::full(2)));
    CHECK(bisimilar_by_game(m, el(m, "p"), el(m, "q"), BisimKind::full(1)));
    CHECK_FALSE(bisimilar_by_game(m, el(m, "p"), el(m, "q"), BisimKind::full(2)));
}

TEST_CASE("Chain pairs") {
    KripkeModel c3 = builtin_model("chain(3)");
    CHECK(decide_bisimilar(c3, el(c3, "p1"), el(c3, "q1"), BisimKind::stack(1)));
    CHECK_FALSE(decide_bisimilar(c3, el(c3, "p1"), el(c3, "q1"), BisimKind::stack(2)));
    KripkeModel c5 = builtin_model("chain(5)");
    CHECK(decide_bisimilar(c5, el(c5, "p1"), el(c5, "q1"), BisimKind::stack(2)));
    CHECK(invariance_check(c3, el(c3, "p1"), el(c3, "q1"), BisimKind::stack(1), bounded(scalar_fixtures(), 1)));
    CHECK(invariance_check(c5, el(c5, "p1"), el(c5, "q1"), BisimKind::stack(2), bounded(scalar_fixtures(), 2)));
    // the vectorial chain definer separates them
    FPtr chain = builtin_formula("chain", Sort::Equality);
    CHECK(holds(c3, el(c3, "p1"), *chain) != holds(c3, el(c3, "q1"), *chain));
}

TEST_CASE("#Path pair") {
    KripkeModel m = builtin_model("freshpath(3,2)");
    CHECK(decide_bisimilar(m, el(m, "p1"), el(m, "cp1"), BisimKind::full(2)));
    std::vector<FPtr> fs = {parse_formula("nu X . <> X"), parse_formula("OR a . <> at(a)"),
                            parse_formula("mu X . ((OR a . at(a)) \\/ <> X)"), parse_formula("<> <> <> true")};
    CHECK(invariance_check(m, el(m, "p1"), el(m, "cp1"), BisimKind::full(2), fs));
}

TEST_CASE("refinement agrees with the game on random models") {
    int yes = 0, no = 0;
    for (uint64_t seed = 0; seed < 40; ++seed) {
        CAPTURE(seed);
        KripkeModel m = random_model(seed);
        for (auto kind : {BisimKind::full(0), BisimKind::full(1), BisimKind::stack(1)}) {
            CAPTURE(kind.str());
            std::vector<std::pair<std::string, std::string>> pairs = {{"s0", "s1(1)"}, {"s1(1)", "s2(2)"}, {"s1(1)", "s1(2)"}};
            if (m.ctx->size()) pairs.push_back({"s1(2)", "s1(3)"}), pairs.push_back({"s2(1)", "s2(3)"});
            for (auto& [x, y] : pairs) {
                bool a = decide_bisimilar(m, el(m, x), el(m, y), kind);
                CHECK(a == bisimilar_by_game(m, el(m, x), el(m, y), kind));
                (a ? yes : no)++;
            }
        }
    }
    CHECK(yes > 10);
    CHECK(no > 10);
}

TEST_CASE("bisimulation input checks") {
    KripkeModel m = builtin_model("star");
    CHECK_THROWS_AS(decide_bisimilar(m, el(m, "star"), el(m, "star"), BisimKind::full(5)), InputError);
    CHECK(decide_bisimilar(m, el(m, "leaf(1)"), el(m, "leaf(2)"), BisimKind::full(1)));
    CHECK_FALSE(decide_bisimilar(m, el(m, "star"), el(m, "leaf(2)"), BisimKind::full(1)));
}
