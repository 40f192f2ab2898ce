#include "amu/freshpath.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "amu/checker.hpp"
#include "amu/formula.hpp"

namespace amu {

const char* prefilter_str(Prefilter p) {
    switch (p) {
        case Prefilter::FoundPath: return "found-path";
        case Prefilter::Excluded: return "excluded";
        case Prefilter::NotApplicable: return "not-applicable";
    }
    return "?";
}

std::string khat_tag(const std::string& state_tag, unsigned mask) { return state_tag + "#" + std::to_string(mask); }

namespace {

// (label tag, block label of the atom in the state type; -1 when nullary)
using Term = std::pair<int, int>;

struct PredInfo {
    bool cofinite = false;
    std::set<Term> finite;
};

class Preds {
public:
    explicit Preds(const KripkeModel& m) : m_(m), s_(m.ctx->sort), k_(m.ctx->size()) {
        std::set<int> seen;
        for (auto& p : m.sat.pairs()) {
            if (p.rarity() > 1) throw InputError("fresh paths need labels of arity at most 1: " + tag_name(p.rtag));
            if (seen.insert(p.rtag).second) labels_.emplace_back(tag_name(p.rtag), p.rtag);
            arity_[p.rtag] = p.rarity();
        }
        std::sort(labels_.begin(), labels_.end());
        for (auto& o : m.states.orbits()) info_[o] = compute(o);
    }

    const PredInfo& of(const Orbit& o) const { return info_.at(o); }
    bool any_cofinite() const {
        for (auto& [o, i] : info_)
            if (i.cofinite) return true;
        return false;
    }
    int unary_labels() const {
        int n = 0;
        for (auto& [name, t] : labels_) n += arity_.at(t) == 1;
        return n;
    }

    // Trackable terms of a state orbit, in mask order.
    std::vector<Term> terms(const Orbit& o) const {
        std::vector<Term> out;
        std::vector<int> pts = points(o.type);
        for (auto& [name, t] : labels_) {
            if (arity_.at(t) == 0)
                out.emplace_back(t, -1);
            else
                for (int p : pts) out.emplace_back(t, p);
        }
        return out;
    }

private:
    const KripkeModel& m_;
    Sort s_;
    int k_;
    std::vector<std::pair<std::string, int>> labels_;
    std::map<int, int> arity_;
    std::map<Orbit, PredInfo> info_;

    static std::vector<int> points(const Type& t) {
        std::vector<int> pts(t.lab.begin(), t.lab.end());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }

    PredInfo compute(const Orbit& o) const {
        PredInfo pi;
        int r = o.arity();
        std::vector<int> pts = points(o.type);
        std::map<int, std::set<int>> gaps;  // label tag -> free regions hit
        for (auto& p : m_.sat.pairs()) {
            if (p.ltag != o.tag || !(p.left(s_) == o)) continue;
            if (p.rarity() == 0) {
                pi.finite.emplace(p.rtag, -1);
                continue;
            }
            int b = p.type.var(r);
            std::optional<int> at;
            for (int i = 0; i < k_ + r && !at; ++i)
                if (p.type.lab[i] == b) at = o.type.lab[i];
            if (at) {
                pi.finite.emplace(p.rtag, *at);
                continue;
            }
            int g = 0;
            if (s_ == Sort::Ordered) {
                std::set<int> below;
                for (int i = 0; i < k_ + r; ++i)
                    if (p.type.lab[i] < b) below.insert(p.type.lab[i]);
                g = static_cast<int>(below.size());
            }
            gaps[p.rtag].insert(g);
        }
        int regions = s_ == Sort::Ordered ? static_cast<int>(pts.size()) + 1 : 1;
        for (auto& [t, gs] : gaps) {
            if (static_cast<int>(gs.size()) != regions)
                throw InputError("state orbit of " + tag_name(o.tag) + " has a predicate set that is neither finite nor co-finite");
            pi.cofinite = true;
        }
        return pi;
    }
};

KripkeModel with_markers(const KripkeModel& m, const Preds& pr) {
    KripkeModel out = m;
    std::vector<PairOrbit> sa(m.sat.pairs());
    int e = intern_tag("$empty"), c = intern_tag("$cofinite");
    for (auto& o : m.states.orbits()) {
        const PredInfo& pi = pr.of(o);
        if (pi.cofinite)
            sa.push_back(PairOrbit{o.tag, c, static_cast<uint8_t>(o.arity()), o.type});
        else if (pi.finite.empty())
            sa.push_back(PairOrbit{o.tag, e, static_cast<uint8_t>(o.arity()), o.type});
    }
    out.sat = OrbitRelation(m.ctx, sa);
    return out;
}

KripkeModel drop_cofinite(const KripkeModel& m, const Preds& pr) {
    KripkeModel out;
    out.ctx = m.ctx;
    std::vector<Orbit> st;
    for (auto& o : m.states.orbits())
        if (!pr.of(o).cofinite) st.push_back(o);
    out.states = OrbitSet(m.ctx, st);
    std::vector<PairOrbit> tr, sa;
    for (auto& p : m.trans.pairs())
        if (out.states.contains(p.left(m.ctx->sort)) && out.states.contains(p.right(m.ctx->sort))) tr.push_back(p);
    for (auto& p : m.sat.pairs())
        if (out.states.contains(p.left(m.ctx->sort))) sa.push_back(p);
    out.trans = OrbitRelation(m.ctx, tr);
    out.sat = OrbitRelation(m.ctx, sa);
    return out;
}

}  // namespace

Prefilter cofinite_prefilter(const KripkeModel& m, const Element& x) {
    state_orbit(m, x);
    Preds pr(m);
    if (!pr.any_cofinite()) return Prefilter::NotApplicable;
    if (pr.unary_labels() > 1) throw InputError("co-finite predicate sets need a single unary label");
    KripkeModel mk = with_markers(m, pr);
    using namespace fm;
    if (!holds(mk, x, *mu("Y", disj({pred("$cofinite"), dia(var("Y"))})))) return Prefilter::NotApplicable;
    FPtr tail = nu("Z", conj({pred("$empty"), dia(var("Z"))}));
    FPtr f = mu("Y", disj({conj({pred("$cofinite"), dia(tail)}), conj({pred("$empty"), dia(var("Y"))})}));
    return holds(mk, x, *f) ? Prefilter::FoundPath : Prefilter::Excluded;
}

KripkeModel build_khat(const KripkeModel& m, const Element* root) {
    Preds pr(m);
    for (auto& o : m.states.orbits())
        if (pr.of(o).cofinite) throw InputError("build_khat needs finite predicate sets; drop co-finite states first");
    Sort s = m.ctx->sort;
    int k = m.ctx->size();

    std::map<Orbit, std::vector<Term>> terms;
    for (auto& o : m.states.orbits()) {
        terms[o] = pr.terms(o);
        if (terms[o].size() > 24) throw InputError("too many trackable terms at " + tag_name(o.tag));
    }
    auto forbidden_ok = [&](const Orbit& o, unsigned mask) {
        const auto& ts = terms.at(o);
        for (size_t i = 0; i < ts.size(); ++i)
            if ((mask >> i & 1u) && pr.of(o).finite.count(ts[i])) return false;
        return true;
    };
    auto node = [&](const Orbit& o, unsigned mask) { return Orbit{intern_tag(khat_tag(tag_name(o.tag), mask)), o.type}; };

    std::map<Orbit, std::vector<const PairOrbit*>> out_edges;
    for (auto& p : m.trans.pairs()) out_edges[p.left(s)].push_back(&p);

    std::vector<Orbit> states;
    std::vector<PairOrbit> tr, sa;
    std::set<std::pair<Orbit, unsigned>> seen;
    std::deque<std::pair<Orbit, unsigned>> work;
    auto visit = [&](const Orbit& o, unsigned mask) {
        if (seen.emplace(o, mask).second) work.emplace_back(o, mask);
    };
    if (root) {
        visit(state_orbit(m, *root), 0);
    } else {
        for (auto& o : m.states.orbits())
            for (unsigned mask = 0; mask < (1u << terms.at(o).size()); ++mask)
                if (forbidden_ok(o, mask)) visit(o, mask);
    }
    while (!work.empty()) {
        auto [o, mask] = work.front();
        work.pop_front();
        Orbit me = node(o, mask);
        states.push_back(me);
        for (auto& p : m.sat.pairs())
            if (p.ltag == o.tag && p.left(s) == o) sa.push_back(PairOrbit{me.tag, p.rtag, p.larity, p.type});
        auto it = out_edges.find(o);
        if (it == out_edges.end()) continue;
        const auto& xs = terms.at(o);
        std::set<Term> used;
        for (size_t i = 0; i < xs.size(); ++i)
            if (mask >> i & 1u) used.insert(xs[i]);
        used.insert(pr.of(o).finite.begin(), pr.of(o).finite.end());
        for (const PairOrbit* p : it->second) {
            Orbit y = p->right(s);
            int lx = p->larity, ly = p->rarity();
            // block labels of o and y inside the pair type
            std::map<int, int> xl, yl;
            for (int i = 0; i < k + lx; ++i) xl[o.type.lab[i]] = p->type.lab[i];
            for (int i = 0; i < k; ++i) yl[p->type.lab[i]] = y.type.lab[i];
            for (int j = 0; j < ly; ++j) yl[p->type.lab[k + lx + j]] = y.type.lab[k + j];
            std::set<Term> carried;
            for (auto& [t, b] : used) {
                if (b < 0) {
                    carried.emplace(t, -1);
                    continue;
                }
                auto f = yl.find(xl.at(b));
                if (f != yl.end()) carried.emplace(t, f->second);
            }
            bool clash = false;
            for (auto& t : carried) clash = clash || pr.of(y).finite.count(t);
            if (clash) continue;
            const auto& ys = terms.at(y);
            unsigned ym = 0;
            for (size_t i = 0; i < ys.size(); ++i)
                if (carried.count(ys[i])) ym |= 1u << i;
            visit(y, ym);
            tr.push_back(PairOrbit{me.tag, node(y, ym).tag, p->larity, p->type});
        }
    }
    KripkeModel out;
    out.ctx = m.ctx;
    out.states = OrbitSet(m.ctx, states);
    out.trans = OrbitRelation(m.ctx, tr);
    out.sat = OrbitRelation(m.ctx, sa);
    return out;
}

bool decide_freshpath(const KripkeModel& m, const Element& x) {
    Orbit ox = state_orbit(m, x);
    Prefilter p = cofinite_prefilter(m, x);
    if (p == Prefilter::FoundPath) return true;
    Preds pr(m);
    if (pr.of(ox).cofinite) return false;
    KripkeModel base = pr.any_cofinite() ? drop_cofinite(m, pr) : m;
    KripkeModel kh = build_khat(base, &x);
    Element start{khat_tag(x.tag, 0), x.args};
    return holds(kh, start, *fm::nu("X", fm::dia(fm::var("X"))));
}

OracleResult bounded_oracle(const KripkeModel& m, const Element& x, int steps, int extra) {
    state_orbit(m, x);
    const Context& c = *m.ctx;
    if (extra < 0) {
        int ar = 0;
        for (auto& o : m.states.orbits()) ar = std::max(ar, o.arity());
        extra = 2 * ar + 1;
    }
    std::vector<Atom> pool = atom_pool(c, extra);
    for (auto& a : x.args)
        if (std::find(pool.begin(), pool.end(), a) == pool.end()) pool.push_back(a);

    std::vector<Element> all;
    for (auto& o : m.states.orbits()) {
        int r = o.arity();
        std::vector<int> idx(r, 0);
        for (;;) {
            Element e{tag_name(o.tag), {}};
            for (int i : idx) e.args.push_back(pool[i]);
            if (orbit_of(c, e) == o) all.push_back(e);
            int i = r - 1;
            while (i >= 0 && ++idx[i] == static_cast<int>(pool.size())) idx[i--] = 0;
            if (i < 0) break;
        }
    }
    std::sort(all.begin(), all.end());
    std::map<Element, int> id;
    for (size_t i = 0; i < all.size(); ++i) id[all[i]] = static_cast<int>(i);
    int n = static_cast<int>(all.size());
    std::vector<std::optional<std::vector<Element>>> preds(n);
    for (int i = 0; i < n; ++i) {
        try {
            preds[i] = concrete_preds(m, all[i]);
        } catch (const InputError&) {
            // infinite predicate set: never used
        }
    }
    std::vector<std::vector<int>> succ(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<Atom> joint = all[i].args;
            joint.insert(joint.end(), all[j].args.begin(), all[j].args.end());
            PairOrbit po{intern_tag(all[i].tag), intern_tag(all[j].tag), static_cast<uint8_t>(all[i].args.size()),
                         type_of(c, joint)};
            if (m.trans.contains(po)) succ[i].push_back(j);
        }

    OracleResult res;
    std::vector<int> path;
    std::vector<int> onpath(n, -1);
    std::multiset<Element> used;
    long budget = 200000;
    std::function<bool(int)> dfs = [&](int v) -> bool {
        if (--budget < 0) return false;
        if (onpath[v] >= 0) {
            for (size_t i = onpath[v]; i < path.size(); ++i)
                if (!preds[path[i]]->empty()) return false;
            path.push_back(v);
            return true;
        }
        if (!preds[v]) return false;
        for (auto& p : *preds[v])
            if (used.count(p)) return false;
        if (static_cast<int>(path.size()) >= steps) return false;
        onpath[v] = static_cast<int>(path.size());
        path.push_back(v);
        for (auto& p : *preds[v]) used.insert(p);
        for (int w : succ[v])
            if (dfs(w)) return true;
        for (auto& p : *preds[v]) used.erase(used.find(p));
        path.pop_back();
        onpath[v] = -1;
        return false;
    };
    if (dfs(id.at(x))) {
        res.witness = true;
        for (int v : path) res.path.push_back(all[v]);
    }
    return res;
}

}  // namespace amu
