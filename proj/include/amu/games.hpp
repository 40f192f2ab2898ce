// Atomic parity games, their finite orbit quotient, a finite solver, and
// the evaluation game of a formula on a model.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "amu/formula.hpp"
#include "amu/kripke.hpp"

namespace amu {

// Max priority seen infinitely often decides: even for Exists. A player
// who cannot move loses.
struct AtomicParityGame {
    CtxPtr ctx;
    OrbitSet V;
    OrbitSet Vexists;
    OrbitRelation R;
    std::map<Orbit, int> rank;  // absent = 0
    int rank_of(const Orbit& o) const;
    void validate() const;
};

struct OrbitGame {
    std::vector<std::string> names;
    std::vector<bool> exists;  // owner
    std::vector<int> rank;
    std::vector<std::vector<int>> succ;
    int size() const { return static_cast<int>(names.size()); }
};

struct FiniteSolution {
    std::vector<bool> exists_wins;
    std::vector<int> strategy;  // chosen successor at winner-owned nodes, else -1
};

// nodes, if given, receives the orbit of each quotient node.
OrbitGame quotient(const AtomicParityGame& g, std::vector<Orbit>* nodes = nullptr);
FiniteSolution solve_finite(const OrbitGame& g);
// (Exists region, Forall region)
std::pair<OrbitSet, OrbitSet> winners(const AtomicParityGame& g);

// f closed and in negation normal form.
AtomicParityGame build_eval_game(const KripkeModel& m, const Formula& f);
// States x with <f, x> won by Exists.
OrbitSet eval_game_slice(const KripkeModel& m, const Formula& f);
// Compares eval(m, f) with the game slice of nnf(f).
bool adequacy_check(const KripkeModel& m, const Formula& f);

// `node T(v..) [where c]`, `owner exists T(v..) [where c]`,
// `rank N T(v..) [where c]`, `edge T(v..) -> U(w..) [where c]`, plus the
// model header lines `atoms` and `const`.
AtomicParityGame parse_game(const std::string& text);
std::string print_game(const AtomicParityGame& g);

// Equality atoms, up to `tags` node tags of arity <= max_arity.
AtomicParityGame random_game(uint64_t seed, int tags = 3, int max_arity = 2, int max_rank = 3);

}  // namespace amu
