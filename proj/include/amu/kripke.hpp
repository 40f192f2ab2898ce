// Atomic Kripke models, their text format, and the built-in model families.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "amu/orbit.hpp"

namespace amu {

struct KripkeModel {
    CtxPtr ctx;
    OrbitSet states;
    OrbitRelation trans;  // states -> states
    OrbitRelation sat;    // states -> predicate terms
    bool orbit_infinite = false;

    OrbitSet predicates() const { return codomain(sat); }
    int arity_of(int tag) const;  // -1 if tag is not a state tag
    // Throws InputError when an invariant fails.
    void validate() const;
};

KripkeModel parse_model(const std::string& text);
std::string print_model(const KripkeModel& m);

// Restriction of sat to the given states.
OrbitRelation pred_of(const KripkeModel& m, const OrbitSet& xs);
OrbitSet successors(const KripkeModel& m, const OrbitSet& xs);

// Parses "tag(a1,...,an)" with atoms written as integers or p/q, or constant names.
Element parse_element(const Context& c, const std::string& s);
// Throws InputError if x is not a state of m.
Orbit state_orbit(const KripkeModel& m, const Element& x);

// Concrete successors and predicates of a single element; pred sets must be finite.
std::vector<Element> concrete_preds(const KripkeModel& m, const Element& x);

// name or name(p1,...,pn); see builtin_names().
std::string builtin_model_text(const std::string& spec);
KripkeModel builtin_model(const std::string& spec);
std::vector<std::string> builtin_names();

// Disjoint union; tags of the second model get the given prefix. Contexts must agree.
KripkeModel disjoint_union(const KripkeModel& a, const KripkeModel& b, const std::string& prefix);

}  // namespace amu
