// Reference semantics on a finite slice of the model: concrete states over a
// pool of atoms, one bit per state, fixpoints recomputed per valuation.
#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "amu/checker.hpp"

namespace amu {

std::vector<Atom> atom_pool(const Context& c, int extra) {
    std::vector<Atom> out = c.witnesses;
    if (c.sort == Sort::Equality) {
        int64_t n = 0;
        for (int i = 0; i < extra; ++n)
            if (std::find(out.begin(), out.end(), Atom(n)) == out.end()) out.push_back(Atom(n)), ++i;
        return out;
    }
    std::vector<Atom> w = c.witnesses;
    std::sort(w.begin(), w.end());
    if (w.empty()) {
        for (int i = 0; i < extra; ++i) out.push_back(Atom(i));
        return out;
    }
    for (int i = 1; i <= extra; ++i) out.push_back(w.front() - Atom(i)), out.push_back(w.back() + Atom(i));
    for (size_t j = 0; j + 1 < w.size(); ++j)
        for (int i = 1; i <= extra; ++i) out.push_back(w[j] + (w[j + 1] - w[j]) * Atom(i, extra + 1));
    std::sort(out.begin(), out.end());
    return out;
}

int default_pool_extra(const KripkeModel& m, const Formula& f) {
    int ar = 0;
    for (auto& o : m.states.orbits()) ar = std::max(ar, o.arity());
    return binder_depth(f) + 2 * ar + 1;
}

namespace {

using Bits = std::vector<bool>;
using Val = std::map<std::string, Atom>;

struct Fam {
    std::map<std::vector<Atom>, Bits> at;
};

bool rel_holds(Rel r, const Atom& a, const Atom& b) {
    switch (r) {
        case Rel::Eq: return a == b;
        case Rel::Ne: return !(a == b);
        case Rel::Lt: return a < b;
        case Rel::Le: return a <= b;
        case Rel::Gt: return a > b;
        case Rel::Ge: return a >= b;
    }
    return false;
}

class Brute {
public:
    Brute(const KripkeModel& m, int extra) : m_(m), c_(*m.ctx) {
        if (m.orbit_infinite) throw InputError("model is flagged orbit-infinite");
        pool_ = atom_pool(c_, extra);
        for (auto& o : m.states.orbits()) {
            int r = o.arity();
            std::vector<int> idx(r, 0);
            for (;;) {
                std::vector<Atom> t;
                for (int i : idx) t.push_back(pool_[i]);
                if (type_of(c_, t) == o.type) states_.push_back({tag_name(o.tag), t}), tags_.push_back(o.tag);
                int i = r - 1;
                while (i >= 0 && ++idx[i] == static_cast<int>(pool_.size())) idx[i--] = 0;
                if (i < 0) break;
            }
        }
        n_ = states_.size();
        succ_.assign(n_, {});
        for (size_t x = 0; x < n_; ++x)
            for (size_t y = 0; y < n_; ++y) {
                std::vector<Atom> t = states_[x].args;
                t.insert(t.end(), states_[y].args.begin(), states_[y].args.end());
                PairOrbit p{tags_[x], tags_[y], static_cast<uint8_t>(states_[x].args.size()), type_of(c_, t)};
                if (m.trans.contains(p)) succ_[x].push_back(y);
            }
    }

    OrbitSet run(const Formula& f) {
        Val s;
        Bits b = sem(f, s);
        std::map<Orbit, int> verdict;
        for (size_t x = 0; x < n_; ++x) {
            Orbit o{tags_[x], type_of(c_, states_[x].args)};
            int v = b[x] ? 1 : 0;
            auto [it, fresh] = verdict.emplace(o, v);
            if (!fresh && it->second != v) throw InputError("pool too small: verdict not uniform on an orbit");
        }
        std::vector<Orbit> out;
        for (auto& o : m_.states.orbits()) {
            auto it = verdict.find(o);
            if (it == verdict.end()) throw InputError("pool too small: a state orbit has no representative");
            if (it->second) out.push_back(o);
        }
        return OrbitSet(m_.ctx, out);
    }

private:
    const KripkeModel& m_;
    const Context& c_;
    std::vector<Atom> pool_;
    std::vector<Element> states_;
    std::vector<int> tags_;
    std::vector<std::vector<size_t>> succ_;
    size_t n_ = 0;
    std::map<std::string, Fam> env_;

    Atom value(const std::string& name, const Val& s) const {
        auto it = s.find(name);
        if (it != s.end()) return it->second;
        int i = c_.find(name);
        if (i < 0) throw InputError("unknown atom name '" + name + "'");
        return c_.witnesses[i];
    }

    bool cons(const Constraint& c, const Val& s) const {
        switch (c.kind) {
            case Constraint::K::True: return true;
            case Constraint::K::False: return false;
            case Constraint::K::Lit: return rel_holds(c.rel, value(c.lhs, s), value(c.rhs, s));
            case Constraint::K::And:
                for (auto& k : c.kids)
                    if (!cons(k, s)) return false;
                return true;
            case Constraint::K::Or:
                for (auto& k : c.kids)
                    if (cons(k, s)) return true;
                return false;
            case Constraint::K::Not: return !cons(c.kids[0], s);
        }
        return false;
    }

    // Calls g on each extension of s by the names, ranging over the pool.
    template <class G>
    void each(const std::vector<std::string>& names, Val s, size_t i, G&& g) {
        if (i == names.size()) {
            g(s);
            return;
        }
        for (auto& a : pool_) {
            s[names[i]] = a;
            each(names, s, i + 1, g);
        }
    }

    Bits sem(const Formula& f, const Val& s) {
        switch (f.kind) {
            case FK::True: return Bits(n_, true);
            case FK::False: return Bits(n_, false);
            case FK::Pred: {
                std::vector<Atom> args;
                for (auto& a : f.args) args.push_back(value(a, s));
                int tag = intern_tag(f.name);
                Bits b(n_);
                for (size_t x = 0; x < n_; ++x) {
                    std::vector<Atom> t = states_[x].args;
                    t.insert(t.end(), args.begin(), args.end());
                    b[x] = m_.sat.contains(
                        PairOrbit{tags_[x], tag, static_cast<uint8_t>(states_[x].args.size()), type_of(c_, t)});
                }
                return b;
            }
            case FK::Var: {
                std::vector<Atom> args;
                for (auto& a : f.args) args.push_back(value(a, s));
                auto& fam = env_.at(f.name).at;
                auto it = fam.find(args);
                return it == fam.end() ? Bits(n_, false) : it->second;
            }
            case FK::Not: {
                Bits b = sem(*f.kids[0], s);
                b.flip();
                return b;
            }
            case FK::Dia:
            case FK::Box: {
                Bits k = sem(*f.kids[0], s), b(n_);
                bool dia = f.kind == FK::Dia;
                for (size_t x = 0; x < n_; ++x) {
                    bool r = !dia;
                    for (size_t y : succ_[x])
                        if (k[y] == dia) r = dia;
                    b[x] = r;
                }
                return b;
            }
            case FK::Or:
            case FK::And: {
                bool orr = f.kind == FK::Or;
                Bits b(n_, !orr);
                for (auto& k : f.kids) {
                    Bits v = sem(*k, s);
                    for (size_t x = 0; x < n_; ++x) b[x] = orr ? (b[x] || v[x]) : (b[x] && v[x]);
                }
                return b;
            }
            case FK::OrbitOr:
            case FK::OrbitAnd: {
                bool orr = f.kind == FK::OrbitOr;
                Bits b(n_, !orr);
                each(f.binders, s, 0, [&](const Val& t) {
                    if (!cons(f.where, t)) return;
                    Bits v = sem(*f.kids[0], t);
                    for (size_t x = 0; x < n_; ++x) b[x] = orr ? (b[x] || v[x]) : (b[x] && v[x]);
                });
                return b;
            }
            case FK::Fix: return fix(f, s);
        }
        throw InternalError("brute force: bad node");
    }

    Bits fix(const Formula& f, const Val& s) {
        std::map<std::string, std::optional<Fam>> saved;
        std::vector<std::vector<std::pair<std::vector<Atom>, Val>>> dom(f.eqs.size());
        for (size_t i = 0; i < f.eqs.size(); ++i) {
            auto& e = f.eqs[i];
            auto it = env_.find(e.var);
            saved[e.var] = it == env_.end() ? std::nullopt : std::optional<Fam>(it->second);
            Fam init;
            each(e.params, s, 0, [&](const Val& t) {
                if (!cons(e.where, t)) return;
                std::vector<Atom> key;
                for (auto& p : e.params) key.push_back(t.at(p));
                dom[i].emplace_back(key, t);
                init.at[key] = Bits(n_, f.nu);
            });
            env_[e.var] = init;
        }
        for (bool changed = true; changed;) {
            changed = false;
            std::vector<Fam> nxt(f.eqs.size());
            for (size_t i = 0; i < f.eqs.size(); ++i)
                for (auto& [key, t] : dom[i]) nxt[i].at[key] = sem(*f.eqs[i].body, t);
            for (size_t i = 0; i < f.eqs.size(); ++i) {
                if (nxt[i].at != env_[f.eqs[i].var].at) changed = true;
                env_[f.eqs[i].var] = std::move(nxt[i]);
            }
        }
        std::vector<Atom> args;
        for (auto& a : f.args) args.push_back(value(a, s));
        auto& fam = env_.at(f.name).at;
        auto it = fam.find(args);
        Bits out = it == fam.end() ? Bits(n_, false) : it->second;
        for (auto& [v, old] : saved) {
            if (old) env_[v] = *old;
            else env_.erase(v);
        }
        return out;
    }
};

}  // namespace

OrbitSet brute_force_eval(const KripkeModel& m, const Formula& f, int extra) {
    validate(f);
    if (!is_closed(f)) throw InputError("brute force evaluation needs a closed formula");
    if (extra < 0) extra = default_pool_extra(m, f);
    return Brute(m, extra).run(f);
}

}  // namespace amu
