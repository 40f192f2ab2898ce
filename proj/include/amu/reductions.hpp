// Turing machine to atomic LTL, LTL to mu-calculus, and run-encoding lasso models.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "amu/formula.hpp"
#include "amu/kripke.hpp"

namespace amu {

struct TmRule {
    std::string q, g, q2, g2;
    bool right = true;
};

// The blank is the first alphabet symbol. Deterministic; no rules leave the
// accepting state.
struct TuringMachine {
    std::vector<std::string> states, alphabet;
    std::string init, accept;
    std::vector<TmRule> rules;
    const std::string& blank() const { return alphabet.front(); }
    void validate() const;
};

// `states`, `alphabet`, `init`, `accept`, `rule q g -> q' g' L|R` lines.
TuringMachine parse_tm(const std::string& text);
std::string print_tm(const TuringMachine& tm);

enum class LK { True, False, Pred, Not, Or, And, OrbitOr, OrbitAnd, X, U, R, F, G };

struct Ltl;
using LPtr = std::shared_ptr<const Ltl>;
struct Ltl {
    LK kind = LK::True;
    std::string name;
    std::vector<std::string> args;
    std::vector<LPtr> kids;  // U, R: (lhs, rhs)
    std::vector<std::string> binders;
    Constraint where;
};

namespace ltl {
LPtr t();
LPtr f();
LPtr pred(std::string tag, std::vector<std::string> args = {});
LPtr neg(LPtr a);
LPtr disj(std::vector<LPtr> ks);
LPtr conj(std::vector<LPtr> ks);
LPtr implies(LPtr a, LPtr b);
LPtr orbit_or(std::vector<std::string> vars, Constraint where, LPtr body);
LPtr orbit_and(std::vector<std::string> vars, Constraint where, LPtr body);
LPtr next(LPtr a);
LPtr until(LPtr a, LPtr b);
LPtr release(LPtr a, LPtr b);
LPtr eventually(LPtr a);
LPtr always(LPtr a);
}  // namespace ltl

std::string print_ltl(const Ltl& f);
LPtr ltl_nnf(const LPtr& f);
bool ltl_is_nnf(const Ltl& f);

// Conjunction of the clauses, one kid each; tags `dollar`, `atom(a)`,
// `tape_<g>`, `head_<q>`.
LPtr tm_to_ltl(const TuringMachine& tm);
int tm_clause_count(const TuringMachine& tm);

FPtr ltl_to_mu(const LPtr& f, bool with_infinite_path = false);

struct TmConfig {
    std::string state;
    std::vector<std::string> tape;
    int head = 0;
};
// Configurations of the run on the empty word, until acceptance, a stuck
// configuration, or max_steps steps.
std::vector<TmConfig> tm_run(const TuringMachine& tm, int max_steps);

struct LassoModel {
    KripkeModel model;
    Element start;
    std::string text;
};
// One `dollar` state then one state per cell for each configuration; the
// last configuration repeats. Cells carry equality constants c1..cT.
LassoModel lasso_of_configs(const TuringMachine& tm, const std::vector<TmConfig>& run);
LassoModel run_to_lasso(const TuringMachine& tm, int max_steps);

// Every (atom, symbol, state or nohead) cell plus a separator state `sep`, all pairs
// connected. Equivariant; no evaluator for the branching-time reading.
std::string tm_universe_text(const TuringMachine& tm);

// Direct LTL semantics on the unique path from start; every reachable state
// must be a single element with exactly one successor.
bool ltl_holds_on_lasso(const KripkeModel& m, const Element& start, const Ltl& f);

std::vector<std::string> fixture_tm_names();
std::string fixture_tm_text(const std::string& name);

}  // namespace amu
