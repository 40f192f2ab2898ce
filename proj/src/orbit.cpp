#include "amu/orbit.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

namespace amu {

namespace {
struct TagTable {
    std::mutex mu;
    std::unordered_map<std::string, int> ids;
    std::vector<std::string> names;
};
TagTable& tags() {
    static TagTable t;
    return t;
}
}  // namespace

int intern_tag(const std::string& name) {
    auto& t = tags();
    std::lock_guard<std::mutex> g(t.mu);
    auto it = t.ids.find(name);
    if (it != t.ids.end()) return it->second;
    int id = static_cast<int>(t.names.size());
    t.names.push_back(name);
    t.ids.emplace(name, id);
    return id;
}

const std::string& tag_name(int id) {
    auto& t = tags();
    std::lock_guard<std::mutex> g(t.mu);
    return t.names.at(id);
}

std::string Element::str() const {
    std::string s = tag + "(";
    for (size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i].str();
    return s + ")";
}

OrbitSet::OrbitSet(CtxPtr ctx, std::vector<Orbit> orbits) : ctx_(std::move(ctx)), orbits_(std::move(orbits)) {
    std::sort(orbits_.begin(), orbits_.end());
    orbits_.erase(std::unique(orbits_.begin(), orbits_.end()), orbits_.end());
}

bool OrbitSet::contains(const Orbit& o) const { return std::binary_search(orbits_.begin(), orbits_.end(), o); }

Orbit PairOrbit::left(Sort s) const {
    std::vector<int> pos;
    for (int i = 0; i < larity; ++i) pos.push_back(type.k + i);
    return Orbit{ltag, select(s, type, pos)};
}

Orbit PairOrbit::right(Sort s) const {
    std::vector<int> pos;
    for (int i = larity; i < type.nvars(); ++i) pos.push_back(type.k + i);
    return Orbit{rtag, select(s, type, pos)};
}

OrbitRelation::OrbitRelation(CtxPtr ctx, std::vector<PairOrbit> pairs) : ctx_(std::move(ctx)), pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool OrbitRelation::contains(const PairOrbit& p) const { return std::binary_search(pairs_.begin(), pairs_.end(), p); }

static void same_ctx(const CtxPtr& a, const CtxPtr& b) {
    if (!a || !b) return;
    if (a != b && !same_context(*a, *b)) throw InputError("context mismatch");
}

static CtxPtr pick(const OrbitSet& x, const OrbitSet& y) {
    same_ctx(x.ctx(), y.ctx());
    return x.ctx() ? x.ctx() : y.ctx();
}

OrbitSet set_union(const OrbitSet& x, const OrbitSet& y) {
    auto c = pick(x, y);
    std::vector<Orbit> out;
    std::set_union(x.orbits().begin(), x.orbits().end(), y.orbits().begin(), y.orbits().end(), std::back_inserter(out));
    return OrbitSet(c, std::move(out));
}

OrbitSet set_intersect(const OrbitSet& x, const OrbitSet& y) {
    auto c = pick(x, y);
    std::vector<Orbit> out;
    std::set_intersection(x.orbits().begin(), x.orbits().end(), y.orbits().begin(), y.orbits().end(),
                          std::back_inserter(out));
    return OrbitSet(c, std::move(out));
}

OrbitSet set_difference(const OrbitSet& x, const OrbitSet& y) {
    auto c = pick(x, y);
    std::vector<Orbit> out;
    std::set_difference(x.orbits().begin(), x.orbits().end(), y.orbits().begin(), y.orbits().end(),
                        std::back_inserter(out));
    return OrbitSet(c, std::move(out));
}

OrbitSet set_product(const OrbitSet& x, const OrbitSet& y) {
    auto c = pick(x, y);
    if (!c) return OrbitSet();
    std::vector<Orbit> out;
    for (auto& a : x.orbits())
        for (auto& b : y.orbits()) {
            int tag = intern_tag(tag_name(a.tag) + "*" + tag_name(b.tag));
            int na = a.arity(), nb = b.arity();
            std::vector<int> rpos;
            for (int i = 0; i < nb; ++i) rpos.push_back(c->size() + na + i);
            extend(c->sort, a.type, nb, [&](const Type& t) {
                if (select(c->sort, t, rpos) == b.type) out.push_back(Orbit{tag, t});
            });
        }
    return OrbitSet(c, std::move(out));
}

OrbitSet set_algebra(SetOp op, const OrbitSet& x, const OrbitSet& y) {
    switch (op) {
        case SetOp::Union: return set_union(x, y);
        case SetOp::Intersect: return set_intersect(x, y);
        case SetOp::Difference: return set_difference(x, y);
        case SetOp::Product: return set_product(x, y);
    }
    throw InternalError("bad set operation");
}

Orbit orbit_of(const Context& c, const Element& e) {
    if (c.sort == Sort::Equality)
        for (auto& a : e.args)
            if (a.den() != 1 || a.num() < 0) throw InputError("equality atoms are natural numbers");
    return Orbit{intern_tag(e.tag), type_of(c, e.args)};
}

bool member(const Element& e, const OrbitSet& x) {
    if (!x.ctx()) return false;
    return x.contains(orbit_of(*x.ctx(), e));
}

bool equals(const OrbitSet& x, const OrbitSet& y) {
    same_ctx(x.ctx(), y.ctx());
    return x == y;
}

bool subset(const OrbitSet& x, const OrbitSet& y) {
    same_ctx(x.ctx(), y.ctx());
    return std::includes(y.orbits().begin(), y.orbits().end(), x.orbits().begin(), x.orbits().end());
}

OrbitSet universe(const CtxPtr& c, const std::string& tag, int arity) {
    int id = intern_tag(tag);
    std::vector<Orbit> out;
    for (auto& t : all_types(*c, arity)) out.push_back(Orbit{id, t});
    return OrbitSet(c, std::move(out));
}

OrbitSet set_builder(const CtxPtr& c, const std::string& tag, const std::vector<std::string>& vars,
                     const Constraint& where) {
    int id = intern_tag(tag);
    std::vector<Orbit> out;
    for (auto& t : complete(where, vars, *c)) out.push_back(Orbit{id, t});
    return OrbitSet(c, std::move(out));
}

static std::vector<int> all_but(int k, int drop) {
    std::vector<int> v;
    for (int i = 0; i < k; ++i)
        if (i != drop) v.push_back(i);
    return v;
}

// True iff x is a union of orbits relative to the constants in keep.
static bool union_of_orbits(const OrbitSet& x, const std::vector<int>& keep) {
    const Context& c = *x.ctx();
    std::set<std::pair<int, Type>> hit;
    for (auto& o : x.orbits()) hit.insert({o.tag, restrict_consts(c.sort, o.type, keep)});
    std::map<std::pair<int, int>, bool> seen;
    for (auto& o : x.orbits()) {
        auto key = std::make_pair(o.tag, o.arity());
        if (seen[key]) continue;
        seen[key] = true;
        for (auto& t : all_types(c, o.arity()))
            if (hit.count({o.tag, restrict_consts(c.sort, t, keep)}) && !x.contains(Orbit{o.tag, t})) return false;
    }
    return true;
}

std::vector<int> least_support(const OrbitSet& x) {
    std::vector<int> out;
    if (!x.ctx()) return out;
    int k = x.ctx()->size();
    for (int i = 0; i < k; ++i)
        if (!union_of_orbits(x, all_but(k, i))) out.push_back(i);
    return out;
}

std::vector<std::string> least_support_names(const OrbitSet& x) {
    std::vector<std::string> out;
    for (int i : least_support(x)) out.push_back(x.ctx()->names[i]);
    return out;
}

bool supports(const OrbitSet& x, const std::vector<int>& t) {
    if (!x.ctx()) return true;
    return union_of_orbits(x, t);
}

std::vector<OrbitSet> orbits_under(const OrbitSet& x, const std::vector<int>& t) {
    if (!x.ctx()) return {};
    for (int i : t)
        if (i < 0 || i >= x.ctx()->size()) throw InputError("constant index out of range");
    if (!supports(x, t)) throw InputError("the given constants do not support the set");
    auto sub = sub_context(*x.ctx(), t);
    std::set<Orbit> cells;
    for (auto& o : x.orbits()) cells.insert(Orbit{o.tag, restrict_consts(x.ctx()->sort, o.type, t)});
    std::vector<OrbitSet> out;
    for (auto& o : cells) out.emplace_back(sub, std::vector<Orbit>{o});
    return out;
}

uint64_t count_supported_subsets(const OrbitSet& x, const std::vector<int>& t) {
    size_t n = orbits_under(x, t).size();
    if (n >= 64) throw InputError("subset count overflows 64 bits");
    return uint64_t{1} << n;
}

OrbitSet image(const OrbitRelation& r, const OrbitSet& x) {
    CtxPtr c = r.ctx() ? r.ctx() : x.ctx();
    same_ctx(r.ctx(), x.ctx());
    std::vector<Orbit> out;
    if (!c) return OrbitSet();
    for (auto& p : r.pairs())
        if (x.contains(p.left(c->sort))) out.push_back(p.right(c->sort));
    return OrbitSet(c, std::move(out));
}

OrbitSet preimage(const OrbitRelation& r, const OrbitSet& y) {
    CtxPtr c = r.ctx() ? r.ctx() : y.ctx();
    same_ctx(r.ctx(), y.ctx());
    std::vector<Orbit> out;
    if (!c) return OrbitSet();
    for (auto& p : r.pairs())
        if (y.contains(p.right(c->sort))) out.push_back(p.left(c->sort));
    return OrbitSet(c, std::move(out));
}

OrbitSet domain(const OrbitRelation& r) {
    std::vector<Orbit> out;
    if (!r.ctx()) return OrbitSet();
    for (auto& p : r.pairs()) out.push_back(p.left(r.ctx()->sort));
    return OrbitSet(r.ctx(), std::move(out));
}

OrbitSet codomain(const OrbitRelation& r) {
    std::vector<Orbit> out;
    if (!r.ctx()) return OrbitSet();
    for (auto& p : r.pairs()) out.push_back(p.right(r.ctx()->sort));
    return OrbitSet(r.ctx(), std::move(out));
}

OrbitRelation rel_union(const OrbitRelation& a, const OrbitRelation& b) {
    same_ctx(a.ctx(), b.ctx());
    std::vector<PairOrbit> v(a.pairs());
    v.insert(v.end(), b.pairs().begin(), b.pairs().end());
    return OrbitRelation(a.ctx() ? a.ctx() : b.ctx(), std::move(v));
}

OrbitRelation identity_relation(const OrbitSet& x) {
    std::vector<PairOrbit> v;
    if (!x.ctx()) return OrbitRelation();
    for (auto& o : x.orbits()) {
        int n = o.arity();
        std::vector<int> pos;
        for (int rep = 0; rep < 2; ++rep)
            for (int i = 0; i < n; ++i) pos.push_back(o.type.k + i);
        v.push_back(PairOrbit{o.tag, o.tag, static_cast<uint8_t>(n), select(x.ctx()->sort, o.type, pos)});
    }
    return OrbitRelation(x.ctx(), std::move(v));
}

OrbitRelation relation_builder(const CtxPtr& c, const std::string& ltag, const std::vector<std::string>& lvars,
                               const std::string& rtag, const std::vector<std::string>& rvars,
                               const Constraint& where) {
    std::vector<std::string> vars;
    for (auto* side : {&lvars, &rvars})
        for (auto& v : *side)
            if (c->find(v) < 0 && std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    std::vector<std::string> extra;
    where.names(extra);
    for (auto& v : extra)
        if (c->find(v) < 0 && std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    auto posof = [&](const std::string& n) {
        int j = c->find(n);
        if (j >= 0) return j;
        return c->size() + static_cast<int>(std::find(vars.begin(), vars.end(), n) - vars.begin());
    };
    std::vector<int> pos;
    for (auto& v : lvars) pos.push_back(posof(v));
    for (auto& v : rvars) pos.push_back(posof(v));
    int lt = intern_tag(ltag), rt = intern_tag(rtag);
    std::vector<PairOrbit> out;
    for (auto& t : complete(where, vars, *c))
        out.push_back(PairOrbit{lt, rt, static_cast<uint8_t>(lvars.size()), select(c->sort, t, pos)});
    return OrbitRelation(c, std::move(out));
}

std::vector<std::string> var_names(int n, const std::string& stem) {
    std::vector<std::string> v;
    for (int i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
    return v;
}

static std::string args_str(const std::vector<std::string>& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s + ")";
}

std::string orbit_str(const Context& c, const Orbit& o) {
    auto vars = var_names(o.arity());
    auto w = type_constraint(c, o.type, vars);
    std::string s = tag_name(o.tag) + args_str(vars);
    if (!w.is_true()) s += " where " + w.str();
    return s;
}

std::string pair_str(const Context& c, const PairOrbit& p) {
    auto vars = var_names(p.type.nvars());
    std::vector<std::string> l(vars.begin(), vars.begin() + p.larity), r(vars.begin() + p.larity, vars.end());
    auto w = type_constraint(c, p.type, vars);
    std::string s = tag_name(p.ltag) + args_str(l) + " -> " + tag_name(p.rtag) + args_str(r);
    if (!w.is_true()) s += " where " + w.str();
    return s;
}

std::string dump(const OrbitSet& x) {
    std::vector<std::string> lines;
    for (auto& o : x.orbits()) lines.push_back(orbit_str(*x.ctx(), o));
    std::sort(lines.begin(), lines.end());
    std::string s;
    for (auto& l : lines) s += l + "\n";
    return s;
}

std::string dump(const OrbitRelation& r) {
    std::vector<std::string> lines;
    for (auto& p : r.pairs()) lines.push_back(pair_str(*r.ctx(), p));
    std::sort(lines.begin(), lines.end());
    std::string s;
    for (auto& l : lines) s += l + "\n";
    return s;
}

}  // namespace amu
