#include "amu/checker.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_map>

namespace amu {

namespace {

using OV = std::vector<Orbit>;

void canon(OV& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool has(const OV& v, const Orbit& o) { return std::binary_search(v.begin(), v.end(), o); }

OV minus(const OV& a, const OV& b) {
    OV out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}
OV meet(const OV& a, const OV& b) {
    OV out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}
OV join(const OV& a, const OV& b) {
    OV out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// A set of (valuation of vars, state) pairs; types are over vars then state arguments.
struct PVal {
    std::vector<std::string> vars;
    OV set;
};

int index_of(const std::vector<std::string>& v, const std::string& n) {
    auto it = std::find(v.begin(), v.end(), n);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

std::vector<std::string> sorted_union(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

class Checker {
public:
    Checker(const KripkeModel& m, const EvalOptions& o, EvalStats* st)
        : m_(m), c_(*m.ctx), s_(m.ctx->sort), k_(m.ctx->size()), opt_(o), st_(st) {
        if (m.orbit_infinite) throw InputError("model is flagged orbit-infinite; fixpoint iteration would not terminate");
    }

    void bind_free(const Environment& rho) {
        for (auto& [name, e] : rho) {
            VarVal v{{}, e.nparams, e.set};
            canon(v.set);
            for (auto& o : v.set) {
                int r = m_.arity_of(o.tag);
                if (r < 0 || o.arity() != e.nparams + r || o.type.k != k_)
                    throw InputError("environment entry for '" + name + "' is not over the model's states");
            }
            env_[name] = std::move(v);
        }
    }

    OrbitSet top(const Formula& f) {
        std::vector<std::string> scope;
        annotate(f, scope);
        PVal v = eval(f);
        if (!v.vars.empty()) throw InputError("formula has unbound atom name '" + v.vars[0] + "'");
        return OrbitSet(m_.ctx, v.set);
    }

private:
    struct VarVal {
        std::vector<std::string> outer;
        int nparams;
        OV set;  // over outer, params, state
    };
    struct Info {
        std::vector<std::string> avars;
        bool fix_closed;
    };

    const KripkeModel& m_;
    const Context& c_;
    Sort s_;
    int k_;
    EvalOptions opt_;
    EvalStats* st_;
    std::map<std::string, VarVal> env_;
    std::map<std::string, std::vector<std::string>> outer_of_;
    std::unordered_map<const Formula*, Info> info_;
    std::unordered_map<const Formula*, PVal> cache_;
    std::map<int, OV> univ_;
    std::map<int, std::vector<std::pair<Orbit, Orbit>>> lifted_;

    bool is_const(const std::string& n) const { return c_.find(n) >= 0; }

    // Free atom variables (with the implicit parameters of free fixpoint variables).
    Info annotate(const Formula& f, std::vector<std::string>& scope) {
        std::vector<std::string> av;
        bool closed = true;
        auto name = [&](const std::string& n) {
            if (std::find(scope.begin(), scope.end(), n) != scope.end()) av.push_back(n);
            else if (!is_const(n)) throw InputError("unknown atom name '" + n + "' in formula");
        };
        auto bind = [&](const std::vector<std::string>& vs) {
            for (auto& v : vs) {
                if (is_const(v)) throw InputError("bound variable '" + v + "' shadows a constant");
                scope.push_back(v);
            }
        };
        auto unbind = [&](size_t n) { scope.resize(scope.size() - n); };
        auto cnames = [&](const Constraint& c) {
            std::vector<std::string> ns;
            c.names(ns);
            for (auto& n : ns) name(n);
        };
        switch (f.kind) {
            case FK::True:
            case FK::False: break;
            case FK::Pred:
                for (auto& a : f.args) name(a);
                break;
            case FK::Var:
                for (auto& a : f.args) name(a);
                closed = false;
                if (auto it = outer_of_.find(f.name); it != outer_of_.end()) av = sorted_union(av, it->second);
                else if (!env_.count(f.name)) throw InputError("free variable '" + f.name + "' has no value");
                break;
            case FK::OrbitOr:
            case FK::OrbitAnd: {
                bind(f.binders);
                cnames(f.where);
                Info k = annotate(*f.kids[0], scope);
                closed = k.fix_closed;
                av = sorted_union(av, k.avars);
                unbind(f.binders.size());
                std::vector<std::string> keep;
                for (auto& v : av)
                    if (index_of(f.binders, v) < 0) keep.push_back(v);
                av = keep;
                break;
            }
            case FK::Fix: {
                for (auto& a : f.args) name(a);
                for (auto& e : f.eqs) outer_of_[e.var] = {};
                std::vector<std::string> outer;
                for (int round = 0; round < 2; ++round) {
                    std::vector<std::string> o;
                    for (auto& e : f.eqs) {
                        bind(e.params);
                        std::vector<std::string> w;
                        std::vector<std::string> ns;
                        e.where.names(ns);
                        for (auto& n : ns)
                            if (std::find(scope.begin(), scope.end(), n) != scope.end()) w.push_back(n);
                            else if (!is_const(n)) throw InputError("unknown atom name '" + n + "' in formula");
                        Info k = annotate(*e.body, scope);
                        unbind(e.params.size());
                        for (auto& v : sorted_union(k.avars, w))
                            if (index_of(e.params, v) < 0) o.push_back(v);
                        std::set<std::string> fv = free_vars(*e.body);
                        for (auto& x : fv) {
                            bool own = false;
                            for (auto& e2 : f.eqs) own = own || e2.var == x;
                            if (!own) closed = false;
                        }
                    }
                    outer = sorted_union(o, {});
                    for (auto& e : f.eqs) outer_of_[e.var] = outer;
                }
                av = sorted_union(av, outer);
                break;
            }
            default:
                for (auto& k : f.kids) {
                    Info i = annotate(*k, scope);
                    closed = closed && i.fix_closed;
                    av = sorted_union(av, i.avars);
                }
        }
        std::sort(av.begin(), av.end());
        av.erase(std::unique(av.begin(), av.end()), av.end());
        Info in{av, closed};
        info_[&f] = in;
        return in;
    }

    const OV& universe(int n) {
        auto it = univ_.find(n);
        if (it != univ_.end()) return it->second;
        OV out;
        for (auto& o : m_.states.orbits()) {
            int r = o.arity();
            std::vector<int> pos;
            for (int i = 0; i < n; ++i) pos.push_back(k_ + r + i);
            for (int i = 0; i < r; ++i) pos.push_back(k_ + i);
            extend(s_, o.type, n, [&](const Type& t) { out.push_back(Orbit{o.tag, select(s_, t, pos)}); });
        }
        canon(out);
        return univ_[n] = std::move(out);
    }

    const std::vector<std::pair<Orbit, Orbit>>& lifted(int n) {
        auto it = lifted_.find(n);
        if (it != lifted_.end()) return it->second;
        std::vector<std::pair<Orbit, Orbit>> out;
        for (auto& p : m_.trans.pairs()) {
            int lx = p.larity, ly = p.rarity();
            std::vector<int> lpos, rpos;
            for (int i = 0; i < n; ++i) lpos.push_back(k_ + lx + ly + i), rpos.push_back(k_ + lx + ly + i);
            for (int i = 0; i < lx; ++i) lpos.push_back(k_ + i);
            for (int i = 0; i < ly; ++i) rpos.push_back(k_ + lx + i);
            extend(s_, p.type, n, [&](const Type& t) {
                out.emplace_back(Orbit{p.ltag, select(s_, t, lpos)}, Orbit{p.rtag, select(s_, t, rpos)});
            });
        }
        return lifted_[n] = std::move(out);
    }

    // Re-expresses v over target (a superset of v.vars, any order).
    PVal cyl(const PVal& v, const std::vector<std::string>& target) {
        if (v.vars == target) return v;
        int nv = static_cast<int>(v.vars.size()), nt = static_cast<int>(target.size());
        for (auto& n : v.vars)
            if (index_of(target, n) < 0) throw InternalError("cylindrification target misses '" + n + "'");
        PVal out{target, {}};
        for (auto& o : v.set) {
            int r = o.arity() - nv;
            std::vector<int> pos;
            int fresh = 0;
            for (auto& n : target) {
                int i = index_of(v.vars, n);
                pos.push_back(i >= 0 ? k_ + i : k_ + nv + r + fresh++);
            }
            for (int j = 0; j < r; ++j) pos.push_back(k_ + nv + j);
            extend(s_, o.type, nt - nv, [&](const Type& t) { out.set.push_back(Orbit{o.tag, select(s_, t, pos)}); });
        }
        canon(out.set);
        return out;
    }

    PVal proj(const PVal& v, const std::vector<std::string>& keep) {
        PVal out{keep, {}};
        int nv = static_cast<int>(v.vars.size());
        for (auto& o : v.set) {
            std::vector<int> pos;
            for (auto& n : keep) pos.push_back(k_ + index_of(v.vars, n));
            for (int j = nv; j < o.arity(); ++j) pos.push_back(k_ + j);
            out.set.push_back(Orbit{o.tag, select(s_, o.type, pos)});
        }
        canon(out.set);
        return out;
    }

    PVal filter(PVal v, const Constraint& c) {
        if (c.is_true()) return v;
        CompiledConstraint cc(c, v.vars, c_);
        OV keep;
        for (auto& o : v.set)
            if (cc.eval(o.type)) keep.push_back(o);
        v.set = std::move(keep);
        return v;
    }

    PVal complement(const PVal& v) { return PVal{v.vars, minus(universe(static_cast<int>(v.vars.size())), v.set)}; }

    PVal diamond(const PVal& v) {
        OV out;
        for (auto& [l, r] : lifted(static_cast<int>(v.vars.size())))
            if (has(v.set, r)) out.push_back(l);
        canon(out);
        return PVal{v.vars, out};
    }

    // Positions of names of `names` inside a type over vars.
    std::vector<int> positions(const std::vector<std::string>& vars, const std::vector<std::string>& names) {
        std::vector<int> pos;
        for (auto& n : names) {
            int i = index_of(vars, n);
            if (i >= 0) pos.push_back(k_ + i);
            else {
                int j = c_.find(n);
                if (j < 0) throw InternalError("unresolved name '" + n + "'");
                pos.push_back(j);
            }
        }
        return pos;
    }

    PVal eval(const Formula& f) {
        const Info& in = info_.at(&f);
        if (in.fix_closed) {
            auto it = cache_.find(&f);
            if (it != cache_.end()) return it->second;
        }
        PVal v = compute(f, in);
        if (v.vars != in.avars) v = cyl(v, in.avars);
        if (in.fix_closed) cache_[&f] = v;
        return v;
    }

    PVal lookup(const VarVal& x, const std::vector<std::string>& R, const std::vector<std::string>& args) {
        PVal out{R, {}};
        int n = static_cast<int>(R.size());
        auto pre = positions(R, x.outer);
        auto ap = positions(R, args);
        pre.insert(pre.end(), ap.begin(), ap.end());
        for (auto& u : universe(n)) {
            std::vector<int> pos = pre;
            for (int j = n; j < u.arity(); ++j) pos.push_back(k_ + j);
            if (has(x.set, Orbit{u.tag, select(s_, u.type, pos)})) out.set.push_back(u);
        }
        return out;
    }

    PVal compute(const Formula& f, const Info& in) {
        const auto& R = in.avars;
        int n = static_cast<int>(R.size());
        switch (f.kind) {
            case FK::True: return PVal{R, universe(n)};
            case FK::False: return PVal{R, {}};
            case FK::Pred: {
                PVal out{R, {}};
                int tag = intern_tag(f.name);
                auto ap = positions(R, f.args);
                for (auto& u : universe(n)) {
                    std::vector<int> pos;
                    int r = u.arity() - n;
                    for (int j = 0; j < r; ++j) pos.push_back(k_ + n + j);
                    pos.insert(pos.end(), ap.begin(), ap.end());
                    PairOrbit po{u.tag, tag, static_cast<uint8_t>(r), select(s_, u.type, pos)};
                    if (m_.sat.contains(po)) out.set.push_back(u);
                }
                return out;
            }
            case FK::Var: {
                auto it = env_.find(f.name);
                if (it == env_.end()) throw InputError("free variable '" + f.name + "' has no value");
                if (it->second.nparams != static_cast<int>(f.args.size()))
                    throw InputError("variable '" + f.name + "' used with wrong number of arguments");
                return lookup(it->second, R, f.args);
            }
            case FK::Not: return complement(cyl(eval(*f.kids[0]), R));
            case FK::Dia: return diamond(eval(*f.kids[0]));
            case FK::Box: {
                PVal v = eval(*f.kids[0]);
                return complement(diamond(complement(v)));
            }
            case FK::Or:
            case FK::And: {
                OV acc;
                bool first = true;
                for (auto& k : f.kids) {
                    PVal v = cyl(eval(*k), R);
                    if (first) acc = std::move(v.set);
                    else acc = f.kind == FK::Or ? join(acc, v.set) : meet(acc, v.set);
                    first = false;
                }
                return PVal{R, acc};
            }
            case FK::OrbitOr:
            case FK::OrbitAnd: {
                PVal body = eval(*f.kids[0]);
                std::vector<std::string> T = body.vars;
                std::vector<std::string> ns;
                f.where.names(ns);
                for (auto& x : ns)
                    if (!is_const(x)) T.push_back(x);
                for (auto& b : f.binders) T.push_back(b);
                T = sorted_union(T, {});
                PVal w = cyl(body, T);
                if (f.kind == FK::OrbitAnd) w = complement(w);
                w = filter(std::move(w), f.where);
                PVal p = proj(w, R);
                return f.kind == FK::OrbitOr ? p : complement(p);
            }
            case FK::Fix: return fixpoint(f, R);
        }
        throw InternalError("eval: bad node");
    }

    PVal fixpoint(const Formula& f, const std::vector<std::string>& R) {
        const std::vector<std::string> O = outer_of_.at(f.eqs[0].var);
        size_t ne = f.eqs.size();
        std::vector<std::vector<std::string>> names(ne);
        std::vector<OV> dom(ne), cur(ne);
        std::map<std::string, std::optional<VarVal>> saved;
        for (size_t i = 0; i < ne; ++i) {
            auto& e = f.eqs[i];
            names[i] = O;
            names[i].insert(names[i].end(), e.params.begin(), e.params.end());
            dom[i] = filter(PVal{names[i], universe(static_cast<int>(names[i].size()))}, e.where).set;
            auto it = env_.find(e.var);
            saved[e.var] = it == env_.end() ? std::nullopt : std::optional<VarVal>(it->second);
        }
        bool direct_nu = f.nu && !opt_.nu_by_negation;
        bool dual = f.nu && opt_.nu_by_negation;
        for (size_t i = 0; i < ne; ++i) cur[i] = direct_nu ? dom[i] : OV{};
        long rounds = 0;
        for (;;) {
            ++rounds;
            for (size_t i = 0; i < ne; ++i)
                env_[f.eqs[i].var] = VarVal{O, static_cast<int>(f.eqs[i].params.size()), dual ? minus(dom[i], cur[i]) : cur[i]};
            std::vector<OV> nxt(ne);
            for (size_t i = 0; i < ne; ++i) {
                PVal b = cyl(eval(*f.eqs[i].body), names[i]);
                OV val = meet(b.set, dom[i]);
                nxt[i] = dual ? minus(dom[i], val) : val;
            }
            bool same = true;
            for (size_t i = 0; i < ne; ++i) {
                if (opt_.check_monotone) {
                    bool grows = std::includes(nxt[i].begin(), nxt[i].end(), cur[i].begin(), cur[i].end());
                    bool shrinks = std::includes(cur[i].begin(), cur[i].end(), nxt[i].begin(), nxt[i].end());
                    if (direct_nu ? !shrinks : !grows) throw InternalError("fixpoint approximants are not monotone");
                }
                if (nxt[i] != cur[i]) same = false;
            }
            cur = std::move(nxt);
            if (same) break;
        }
        if (st_) {
            st_->iterations += rounds;
            st_->max_iterations_one_fixpoint = std::max(st_->max_iterations_one_fixpoint, rounds);
        }
        const VarVal* entry = nullptr;
        VarVal fin;
        for (size_t i = 0; i < ne; ++i)
            if (f.eqs[i].var == f.name) {
                fin = VarVal{O, static_cast<int>(f.eqs[i].params.size()), dual ? minus(dom[i], cur[i]) : cur[i]};
                entry = &fin;
            }
        PVal out = lookup(*entry, R, f.args);
        for (auto& [v, s] : saved) {
            if (s) env_[v] = *s;
            else env_.erase(v);
        }
        return out;
    }
};

}  // namespace

OrbitSet eval(const KripkeModel& m, const Formula& f, const Environment& rho, const EvalOptions& opt,
              EvalStats* stats) {
    validate(f);
    Checker ch(m, opt, stats);
    ch.bind_free(rho);
    return ch.top(f);
}

bool holds(const KripkeModel& m, const Element& x, const Formula& f) {
    if (!is_closed(f)) throw InputError("holds needs a closed formula");
    Orbit o = state_orbit(m, x);
    return eval(m, f).contains(o);
}

}  // namespace amu
