// k-stack-bisimilarity and k-bisimilarity on orbit-finite models.
#pragma once

#include <string>
#include <vector>

#include "amu/formula.hpp"
#include "amu/games.hpp"
#include "amu/kripke.hpp"

namespace amu {

struct BisimKind {
    enum class Mode { Stack, Full } mode = Mode::Full;
    int k = 0;
    static BisimKind stack(int k) { return {Mode::Stack, k}; }
    static BisimKind full(int k) { return {Mode::Full, k}; }
    std::string str() const;
};

// The bisimulation game as an atomic parity game. Positions are tagged
// `B<x>|<y>|<m>` over (x args, a, y args, b); Duplicator owns the reply
// nodes. Only practical for small models.
AtomicParityGame build_bisim_game(const KripkeModel& m, BisimKind kind);
bool bisimilar_by_game(const KripkeModel& m, const Element& x, const Element& y, BisimKind kind);

// Partition refinement over the orbits of (state, tuple) configurations.
// Needs every state to have finitely many predicates.
bool decide_bisimilar(const KripkeModel& m, const Element& x, const Element& y, BisimKind kind);

struct BisimStats {
    long configs = 0;
    long blocks = 0;
    long moves = 0;
    int rounds = 0;
};
// Equivalence classes of (state, empty tuple) for all state orbits of m.
std::vector<int> bisim_classes(const KripkeModel& m, BisimKind kind, BisimStats* stats = nullptr);

// holds(m,x,f) == holds(m,y,f) for every formula; each must be globally
// k-supported (and scalar for the stack kind).
bool invariance_check(const KripkeModel& m, const Element& x, const Element& y, BisimKind kind,
                      const std::vector<FPtr>& formulas);

}  // namespace amu
