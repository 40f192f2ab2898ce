// Symbolic model checking of atomic mu-calculus formulas on orbit-finite models.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "amu/formula.hpp"
#include "amu/kripke.hpp"

namespace amu {

// Value of a free fixpoint variable X(p1..pn): orbits tagged by the state
// tag, typed over the n parameters followed by the state arguments.
struct EnvEntry {
    int nparams = 0;
    std::vector<Orbit> set;
};
using Environment = std::map<std::string, EnvEntry>;

struct EvalOptions {
    bool nu_by_negation = false;  // greatest fixpoints as complements of least ones
    bool check_monotone = true;   // approximants must grow (mu) / shrink (nu)
};

struct EvalStats {
    long iterations = 0;
    long max_iterations_one_fixpoint = 0;
};

OrbitSet eval(const KripkeModel& m, const Formula& f, const Environment& rho = {}, const EvalOptions& opt = {},
              EvalStats* stats = nullptr);
bool holds(const KripkeModel& m, const Element& x, const Formula& f);

// Naive semantics on the finite sub-model over ctx witnesses plus fresh atoms.
// extra < 0 picks a default from the formula and the model.
OrbitSet brute_force_eval(const KripkeModel& m, const Formula& f, int extra = -1);
int default_pool_extra(const KripkeModel& m, const Formula& f);
// Pool atoms: witnesses plus fresh atoms (for ordered atoms, extra per gap).
std::vector<Atom> atom_pool(const Context& c, int extra);

}  // namespace amu
