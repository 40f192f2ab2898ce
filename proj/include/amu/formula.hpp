// Atomic mu-calculus formulas: AST, text format, static analysis, library.
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "amu/atoms.hpp"

namespace amu {

struct Formula;
using FPtr = std::shared_ptr<const Formula>;

enum class FK { True, False, Pred, Var, Not, Or, And, Dia, Box, OrbitOr, OrbitAnd, Fix };

// One parameterised equation X(params) where c := body of a fixpoint system.
struct Equation {
    std::string var;
    std::vector<std::string> params;
    Constraint where;
    FPtr body;
};

// Terms (args) are names: either atom variables bound by an enclosing
// binder or equation, or constants resolved against the model.
struct Formula {
    FK kind = FK::True;
    std::string name;                  // Pred tag, Var name, Fix entry variable
    std::vector<std::string> args;     // Pred / Var / Fix entry terms
    std::vector<FPtr> kids;            // Not Dia Box (1), Or And (n), OrbitOr OrbitAnd (1)
    std::vector<std::string> binders;  // OrbitOr / OrbitAnd
    Constraint where;                  // OrbitOr / OrbitAnd guard
    bool nu = false;                   // Fix
    std::vector<Equation> eqs;         // Fix
};

namespace fm {
FPtr t();
FPtr f();
FPtr pred(std::string tag, std::vector<std::string> args = {});
FPtr var(std::string name, std::vector<std::string> args = {});
FPtr neg(FPtr a);
FPtr disj(std::vector<FPtr> ks);
FPtr conj(std::vector<FPtr> ks);
FPtr dia(FPtr a);
FPtr box(FPtr a);
FPtr orbit_or(std::vector<std::string> vars, Constraint where, FPtr body);
FPtr orbit_and(std::vector<std::string> vars, Constraint where, FPtr body);
FPtr mu(std::string x, FPtr body);
FPtr nu(std::string x, FPtr body);
FPtr fix(bool nu, std::vector<Equation> eqs, std::string entry, std::vector<std::string> args);
}  // namespace fm

FPtr parse_formula(const std::string& text);
std::string print_formula(const Formula& f);
bool equal(const Formula& a, const Formula& b);

// Throws InputError on: negative bound occurrence, variable rebound on a
// path, arity mismatch, malformed system.
void validate(const Formula& f);

// Fixpoint variables occurring free.
std::set<std::string> free_vars(const Formula& f);
// Atom names occurring free (bound variables of enclosing scopes and constants).
std::set<std::string> free_atoms(const Formula& f);
// Names in free_atoms(f) that are not bound anywhere above: the constants.
std::set<std::string> constants_of(const Formula& f);
bool is_nnf(const Formula& f);
bool is_closed(const Formula& f);

FPtr nnf(const FPtr& f);
// Alternation depth of every fixpoint node of an NNF formula.
std::map<const Formula*, int> fix_depths(const Formula& nnf_formula);
int alternation_depth(const FPtr& f);
int global_support_bound(const Formula& f);
int binder_depth(const Formula& f);  // max number of atom variables in scope
int size(const Formula& f);

// Splits every equation family into single orbits (relative to the
// formula's constants and the enclosing variables its guard mentions) and
// removes multi-equation systems by nested substitution.
FPtr bekic_single_orbit(const FPtr& f, const Context& ctx);
bool single_orbit_systems(const Formula& f, const Context& ctx);

FPtr builtin_formula(const std::string& name, Sort s);
std::string builtin_formula_text(const std::string& name, Sort s);
std::vector<std::string> builtin_formula_names();

}  // namespace amu
