// Orbit-finite sets and relations as canonical unions of orbits.
#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "amu/atoms.hpp"

namespace amu {

// Process-wide constructor-tag table.
int intern_tag(const std::string& name);
const std::string& tag_name(int id);

struct Element {
    std::string tag;
    std::vector<Atom> args;
    std::string str() const;
    friend bool operator==(const Element&, const Element&) = default;
    friend auto operator<=>(const Element&, const Element&) = default;
};

struct Orbit {
    int tag = 0;
    Type type;
    int arity() const { return type.nvars(); }
    friend bool operator==(const Orbit&, const Orbit&) = default;
    friend auto operator<=>(const Orbit&, const Orbit&) = default;
};

struct OrbitHash {
    size_t operator()(const Orbit& o) const { return TypeHash{}(o.type) * 31 + static_cast<size_t>(o.tag); }
};

class OrbitSet {
public:
    OrbitSet() = default;
    explicit OrbitSet(CtxPtr ctx, std::vector<Orbit> orbits = {});
    const CtxPtr& ctx() const { return ctx_; }
    const std::vector<Orbit>& orbits() const { return orbits_; }
    size_t size() const { return orbits_.size(); }
    bool empty() const { return orbits_.empty(); }
    bool contains(const Orbit& o) const;
    friend bool operator==(const OrbitSet& a, const OrbitSet& b) { return a.orbits_ == b.orbits_; }

private:
    CtxPtr ctx_;
    std::vector<Orbit> orbits_;  // sorted, unique
};

struct PairOrbit {
    int ltag = 0, rtag = 0;
    uint8_t larity = 0;
    Type type;  // over larity + rarity variables
    int rarity() const { return type.nvars() - larity; }
    Orbit left(Sort s) const;
    Orbit right(Sort s) const;
    friend bool operator==(const PairOrbit&, const PairOrbit&) = default;
    friend auto operator<=>(const PairOrbit&, const PairOrbit&) = default;
};

class OrbitRelation {
public:
    OrbitRelation() = default;
    explicit OrbitRelation(CtxPtr ctx, std::vector<PairOrbit> pairs = {});
    const CtxPtr& ctx() const { return ctx_; }
    const std::vector<PairOrbit>& pairs() const { return pairs_; }
    size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    bool contains(const PairOrbit& p) const;
    friend bool operator==(const OrbitRelation& a, const OrbitRelation& b) { return a.pairs_ == b.pairs_; }

private:
    CtxPtr ctx_;
    std::vector<PairOrbit> pairs_;
};

enum class SetOp { Union, Intersect, Difference, Product };

OrbitSet set_algebra(SetOp op, const OrbitSet& x, const OrbitSet& y);
OrbitSet set_union(const OrbitSet& x, const OrbitSet& y);
OrbitSet set_intersect(const OrbitSet& x, const OrbitSet& y);
OrbitSet set_difference(const OrbitSet& x, const OrbitSet& y);
OrbitSet set_product(const OrbitSet& x, const OrbitSet& y);

Orbit orbit_of(const Context& c, const Element& e);
bool member(const Element& e, const OrbitSet& x);
bool equals(const OrbitSet& x, const OrbitSet& y);
bool subset(const OrbitSet& x, const OrbitSet& y);

// All orbits of tag/arity over the context.
OrbitSet universe(const CtxPtr& c, const std::string& tag, int arity);
// Orbits of tagged tuples satisfying a constraint over vars.
OrbitSet set_builder(const CtxPtr& c, const std::string& tag, const std::vector<std::string>& vars,
                     const Constraint& where);

std::vector<int> least_support(const OrbitSet& x);
std::vector<std::string> least_support_names(const OrbitSet& x);
bool supports(const OrbitSet& x, const std::vector<int>& t);
// Each cell is a single orbit relative to the sub-context t (constant indices).
std::vector<OrbitSet> orbits_under(const OrbitSet& x, const std::vector<int>& t);
uint64_t count_supported_subsets(const OrbitSet& x, const std::vector<int>& t);

OrbitSet image(const OrbitRelation& r, const OrbitSet& x);
OrbitSet preimage(const OrbitRelation& r, const OrbitSet& y);
OrbitSet domain(const OrbitRelation& r);
OrbitSet codomain(const OrbitRelation& r);
OrbitRelation rel_union(const OrbitRelation& a, const OrbitRelation& b);
OrbitRelation identity_relation(const OrbitSet& x);
// Pair orbits (x, y) with x in X, y in Y and the joint type satisfying where,
// whose variables are X's args followed by Y's args.
OrbitRelation relation_builder(const CtxPtr& c, const std::string& ltag, const std::vector<std::string>& lvars,
                               const std::string& rtag, const std::vector<std::string>& rvars,
                               const Constraint& where);

std::vector<std::string> var_names(int n, const std::string& stem = "v");
std::string orbit_str(const Context& c, const Orbit& o);
std::string pair_str(const Context& c, const PairOrbit& p);
// One orbit per line, `tag(v1..vn) where <constraint>`, sorted by text.
std::string dump(const OrbitSet& x);
std::string dump(const OrbitRelation& r);

}  // namespace amu
