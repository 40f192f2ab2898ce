// Shared model and formula fixtures.
#pragma once

#include <string>
#include <vector>

#include "amu/formula.hpp"
#include "amu/kripke.hpp"

namespace fixtures {

inline const char* kCycle =
    "atoms equality\nconst c1\n"
    "state s(x)\nstate t\n"
    "label s(x) : at(x)\n"
    "trans s(x) -> s(y) where x != y\ntrans t -> s(c1)\ntrans s(x) -> t where x = c1\n";

inline const char* kShift =
    "atoms equality\n"
    "state u(x,y) where x != y\nstate end\n"
    "label u(x,y) : at(x) where x != y\n"
    "trans u(x,y) -> u(y,z) where x != y /\\ z != y /\\ z != x\ntrans u(x,y) -> end where x != y\n";

inline const char* kTwoLevel =
    "atoms equality\nconst c1, c2\n"
    "state root\nstate a(x)\nstate b(x,y) where x != y\n"
    "label a(x) : at(x) where x = c1\nlabel b(x,y) : at(y) where x != y\nlabel b(x,y) : mark where x != y\n"
    "trans root -> a(x)\ntrans a(x) -> b(x,y) where y != c2 /\\ x != y\ntrans b(x,y) -> a(y) where x != y\n";

inline std::vector<std::pair<std::string, amu::KripkeModel>> equality_models() {
    return {{"star", amu::builtin_model("star")},
            {"infsucc(1)", amu::builtin_model("infsucc(1)")},
            {"chain(3)", amu::builtin_model("chain(3)")},
            {"cycle", amu::parse_model(kCycle)},
            {"shift", amu::parse_model(kShift)},
            {"twolevel", amu::parse_model(kTwoLevel)}};
}

inline std::vector<std::string> equality_formulas() {
    return {"AND a . <> (at(a) /\\ (AND b where b != a . ~at(b)))",
            "nu X . ((<> (OR a . at(a))) /\\ [] X)",
            "~(mu X . ((OR a . (at(a) /\\ <> (mu Y . (at(a) \\/ <> Y)))) \\/ <> X))",
            "<> true",
            "[] false",
            "nu X . <> X",
            "OR a . <> at(a)",
            "AND a . [] ~at(a)",
            "mu X . ((OR a . at(a)) \\/ <> X)",
            "nu X . (<> X /\\ [] X)",
            "OR a . nu X . (~at(a) /\\ <> X)",
            "mu X . [] X",
            "OR a . <> <> at(a)",
            "OR a . (at(a) /\\ <> (AND b . (at(b) \\/ <> at(a))))",
            "nu X . mu Y . ((OR a . at(a) /\\ <> X) \\/ <> Y)",
            "OR a . nu X(a) { X(c) := at(c) \\/ <> X(c) }",
            "OR c . mu Z { Z := mark \\/ <> W(c); W(d) := at(d) \\/ <> Z }"};
}

}  // namespace fixtures
