// Fresh paths: infinite paths on which no basic predicate holds twice.
#pragma once

#include <string>
#include <vector>

#include "amu/kripke.hpp"

namespace amu {

enum class Prefilter { FoundPath, Excluded, NotApplicable };
const char* prefilter_str(Prefilter p);

// Paths through a state whose predicate set is co-finite: at most one such
// state, all others predicate-free.
Prefilter cofinite_prefilter(const KripkeModel& m, const Element& x);

// States <x,S> are tagged `x#mask`; bit i of mask marks the i-th trackable
// term of the orbit (nullary labels by name, then unary labels over the
// distinct atoms among constants and arguments, ascending). A transition
// goes to the least admissible forbidden set. With root given, only the
// part reachable from <root, {}> is built.
KripkeModel build_khat(const KripkeModel& m, const Element* root = nullptr);
std::string khat_tag(const std::string& state_tag, unsigned mask);

bool decide_freshpath(const KripkeModel& m, const Element& x);

struct OracleResult {
    bool witness = false;
    std::vector<Element> path;  // last element repeats an earlier one
};
// DFS on the finite sub-model over witnesses plus `extra` fresh atoms.
OracleResult bounded_oracle(const KripkeModel& m, const Element& x, int steps, int extra = -1);

}  // namespace amu
