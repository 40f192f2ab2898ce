#include "amu/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "text.hpp"

namespace amu {

namespace fm {
static FPtr mk(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
FPtr t() { return mk(Formula{}); }
FPtr f() {
    Formula x;
    x.kind = FK::False;
    return mk(x);
}
FPtr pred(std::string tag, std::vector<std::string> args) {
    Formula x;
    x.kind = FK::Pred;
    x.name = std::move(tag);
    x.args = std::move(args);
    return mk(x);
}
FPtr var(std::string name, std::vector<std::string> args) {
    Formula x;
    x.kind = FK::Var;
    x.name = std::move(name);
    x.args = std::move(args);
    return mk(x);
}
static FPtr unary(FK k, FPtr a) {
    Formula x;
    x.kind = k;
    x.kids = {std::move(a)};
    return mk(x);
}
FPtr neg(FPtr a) { return unary(FK::Not, std::move(a)); }
FPtr dia(FPtr a) { return unary(FK::Dia, std::move(a)); }
FPtr box(FPtr a) { return unary(FK::Box, std::move(a)); }
static FPtr nary(FK k, std::vector<FPtr> ks) {
    if (ks.empty()) return k == FK::Or ? f() : t();
    if (ks.size() == 1) return ks[0];
    Formula x;
    x.kind = k;
    x.kids = std::move(ks);
    return mk(x);
}
FPtr disj(std::vector<FPtr> ks) { return nary(FK::Or, std::move(ks)); }
FPtr conj(std::vector<FPtr> ks) { return nary(FK::And, std::move(ks)); }
static FPtr binder(FK k, std::vector<std::string> vars, Constraint where, FPtr body) {
    Formula x;
    x.kind = k;
    x.binders = std::move(vars);
    x.where = std::move(where);
    x.kids = {std::move(body)};
    return mk(x);
}
FPtr orbit_or(std::vector<std::string> vars, Constraint where, FPtr body) {
    return binder(FK::OrbitOr, std::move(vars), std::move(where), std::move(body));
}
FPtr orbit_and(std::vector<std::string> vars, Constraint where, FPtr body) {
    return binder(FK::OrbitAnd, std::move(vars), std::move(where), std::move(body));
}
FPtr fix(bool nu, std::vector<Equation> eqs, std::string entry, std::vector<std::string> args) {
    Formula x;
    x.kind = FK::Fix;
    x.nu = nu;
    x.eqs = std::move(eqs);
    x.name = std::move(entry);
    x.args = std::move(args);
    return mk(x);
}
FPtr mu(std::string x, FPtr body) { return fix(false, {Equation{x, {}, Constraint::truth(), std::move(body)}}, x, {}); }
FPtr nu(std::string x, FPtr body) { return fix(true, {Equation{x, {}, Constraint::truth(), std::move(body)}}, x, {}); }
}  // namespace fm

// ---- renaming helpers

static Constraint rename(const Constraint& c, const std::map<std::string, std::string>& m) {
    Constraint r = c;
    if (c.kind == Constraint::K::Lit) {
        if (auto it = m.find(c.lhs); it != m.end()) r.lhs = it->second;
        if (auto it = m.find(c.rhs); it != m.end()) r.rhs = it->second;
    }
    for (auto& k : r.kids) k = rename(k, m);
    return r;
}

static std::vector<std::string> rename(const std::vector<std::string>& v, const std::map<std::string, std::string>& m) {
    std::vector<std::string> out;
    for (auto& s : v) {
        auto it = m.find(s);
        out.push_back(it == m.end() ? s : it->second);
    }
    return out;
}

// ---- parser

namespace {

const std::set<std::string> kReserved = {"mu", "nu", "OR", "AND", "where", "true", "false"};

class FParser {
public:
    explicit FParser(const std::string& src) : p_(text::tokenize(src)) {}

    FPtr top() {
        FPtr f = formula();
        if (!p_.at_end()) p_.fail("unexpected trailing input");
        return f;
    }

private:
    text::Parser p_;
    std::vector<std::pair<std::string, std::string>> atoms_;  // source -> AST name
    std::vector<std::pair<std::string, std::string>> vars_;

    static std::string lookup(const std::vector<std::pair<std::string, std::string>>& s, const std::string& n) {
        for (auto it = s.rbegin(); it != s.rend(); ++it)
            if (it->first == n) return it->second;
        return "";
    }
    static std::string fresh(const std::vector<std::pair<std::string, std::string>>& s, std::string n) {
        auto used = [&](const std::string& x) {
            for (auto& [a, b] : s)
                if (b == x) return true;
            return false;
        };
        while (used(n)) n += "'";
        return n;
    }
    std::string atom_name(const std::string& n) const {
        std::string r = lookup(atoms_, n);
        return r.empty() ? n : r;
    }
    std::string name() {
        std::string n = p_.ident();
        if (kReserved.count(n)) {
            p_.seek(p_.pos() - 1);
            p_.fail("reserved word");
        }
        return n;
    }
    std::vector<std::string> terms() {
        std::vector<std::string> out;
        for (auto& a : p_.arg_list()) out.push_back(atom_name(a));
        return out;
    }
    Constraint where_clause() {
        if (!p_.accept_ident("where")) return Constraint::truth();
        Constraint c = p_.constraint();
        std::map<std::string, std::string> m;
        std::vector<std::string> ns;
        c.names(ns);
        for (auto& n : ns) m[n] = atom_name(n);
        return rename(c, m);
    }

    FPtr formula() {
        std::vector<FPtr> ks{conj()};
        while (p_.accept("\\/")) ks.push_back(conj());
        return fm::disj(ks);
    }
    FPtr conj() {
        std::vector<FPtr> ks{unary()};
        while (p_.accept("/\\")) ks.push_back(unary());
        return fm::conj(ks);
    }
    FPtr unary() {
        if (p_.accept("~")) return fm::neg(unary());
        if (p_.accept("<>")) return fm::dia(unary());
        if (p_.accept("[]")) return fm::box(unary());
        if (p_.is_ident("mu") || p_.is_ident("nu")) return fixpoint();
        if (p_.is_ident("OR") || p_.is_ident("AND")) return binder();
        return atom();
    }
    FPtr binder() {
        bool is_or = p_.next().s == "OR";
        std::vector<std::string> src;
        if (!p_.is_ident("where") && !p_.is(".")) {
            src.push_back(name());
            while (p_.accept(",")) src.push_back(name());
        }
        size_t mark = atoms_.size();
        std::vector<std::string> vars;
        for (auto& s : src) {
            if (std::count(src.begin(), src.end(), s) > 1) p_.fail("binder variable '" + s + "' repeated");
            std::string n = fresh(atoms_, s);
            atoms_.push_back({s, n});
            vars.push_back(n);
        }
        Constraint w = where_clause();
        p_.expect(".");
        FPtr body = formula();
        atoms_.resize(mark);
        return is_or ? fm::orbit_or(vars, w, body) : fm::orbit_and(vars, w, body);
    }
    FPtr fixpoint() {
        bool nu = p_.next().s == "nu";
        std::string x = name();
        if (p_.accept(".")) {
            std::string n = fresh(vars_, x);
            vars_.push_back({x, n});
            FPtr body = formula();
            vars_.pop_back();
            return nu ? fm::nu(n, body) : fm::mu(n, body);
        }
        std::vector<std::string> entry = terms();
        p_.expect("{");
        // equation heads are read first so that all variables are in scope in every body
        size_t start = p_.pos();
        std::vector<std::string> heads;
        int depth = 0;
        bool at_head = true;
        while (!p_.at_end()) {
            if (at_head && depth == 0) {
                heads.push_back(p_.ident());
                at_head = false;
            }
            if (p_.is("{") || p_.is("(")) ++depth;
            else if (p_.is("}") || p_.is(")")) {
                if (depth == 0) break;
                --depth;
            } else if (p_.is(";") && depth == 0) at_head = true;
            p_.next();
        }
        p_.seek(start);
        size_t vmark = vars_.size();
        std::map<std::string, std::string> vren;
        for (auto& h : heads) {
            if (vren.count(h)) p_.fail("equation variable '" + h + "' defined twice");
            std::string n = fresh(vars_, h);
            vars_.push_back({h, n});
            vren[h] = n;
        }
        if (!vren.count(x)) p_.fail("entry variable '" + x + "' has no equation");
        std::vector<Equation> eqs;
        do {
            if (p_.is("}")) break;
            Equation e;
            e.var = vren.at(name());
            std::vector<std::string> src = p_.arg_list();
            size_t amark = atoms_.size();
            for (auto& s : src) {
                if (std::count(src.begin(), src.end(), s) > 1) p_.fail("parameter '" + s + "' repeated");
                std::string n = fresh(atoms_, s);
                atoms_.push_back({s, n});
                e.params.push_back(n);
            }
            e.where = where_clause();
            p_.expect(":=");
            e.body = formula();
            atoms_.resize(amark);
            eqs.push_back(std::move(e));
        } while (p_.accept(";"));
        p_.expect("}");
        vars_.resize(vmark);
        return fm::fix(nu, std::move(eqs), vren.at(x), entry);
    }
    FPtr atom() {
        if (p_.accept("(")) {
            FPtr f = formula();
            p_.expect(")");
            return f;
        }
        if (p_.accept_ident("true")) return fm::t();
        if (p_.accept_ident("false")) return fm::f();
        std::string n = name();
        std::vector<std::string> args = terms();
        std::string v = lookup(vars_, n);
        if (!v.empty()) return fm::var(v, args);
        return fm::pred(n, args);
    }
};

}  // namespace

FPtr parse_formula(const std::string& src) {
    FPtr f = FParser(src).top();
    validate(*f);
    return f;
}

// ---- printer

static std::string targs(const std::vector<std::string>& a) {
    if (a.empty()) return "";
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + a[i];
    return s + ")";
}

static bool is_binder(FK k) { return k == FK::OrbitOr || k == FK::OrbitAnd || k == FK::Fix; }

static bool scalar_fix(const Formula& f) {
    return f.eqs.size() == 1 && f.eqs[0].params.empty() && f.eqs[0].where.is_true() && f.args.empty() &&
           f.eqs[0].var == f.name;
}

static void print(const Formula& f, std::ostream& os);

static void print_paren(const Formula& f, std::ostream& os, bool paren) {
    if (paren) os << "(";
    print(f, os);
    if (paren) os << ")";
}

static void print(const Formula& f, std::ostream& os) {
    switch (f.kind) {
        case FK::True: os << "true"; return;
        case FK::False: os << "false"; return;
        case FK::Pred:
        case FK::Var: os << f.name << targs(f.args); return;
        case FK::Not:
        case FK::Dia:
        case FK::Box: {
            os << (f.kind == FK::Not ? "~" : f.kind == FK::Dia ? "<>" : "[]");
            FK k = f.kids[0]->kind;
            print_paren(*f.kids[0], os, k == FK::Or || k == FK::And || is_binder(k));
            return;
        }
        case FK::Or:
        case FK::And:
            for (size_t i = 0; i < f.kids.size(); ++i) {
                if (i) os << (f.kind == FK::Or ? " \\/ " : " /\\ ");
                FK k = f.kids[i]->kind;
                print_paren(*f.kids[i], os, k == FK::Or || k == FK::And || is_binder(k));
            }
            return;
        case FK::OrbitOr:
        case FK::OrbitAnd:
            os << (f.kind == FK::OrbitOr ? "OR" : "AND");
            for (size_t i = 0; i < f.binders.size(); ++i) os << (i ? ", " : " ") << f.binders[i];
            if (!f.where.is_true()) os << " where " << f.where.str();
            os << " . ";
            print(*f.kids[0], os);
            return;
        case FK::Fix:
            os << (f.nu ? "nu " : "mu ") << f.name;
            if (scalar_fix(f)) {
                os << " . ";
                print(*f.eqs[0].body, os);
                return;
            }
            os << targs(f.args) << " { ";
            for (size_t i = 0; i < f.eqs.size(); ++i) {
                auto& e = f.eqs[i];
                if (i) os << " ; ";
                os << e.var << targs(e.params);
                if (!e.where.is_true()) os << " where " << e.where.str();
                os << " := ";
                print(*e.body, os);
            }
            os << " }";
            return;
    }
}

std::string print_formula(const Formula& f) {
    std::ostringstream os;
    print(f, os);
    return os.str();
}

bool equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind || a.name != b.name || a.args != b.args || a.binders != b.binders || !(a.where == b.where) ||
        a.nu != b.nu || a.kids.size() != b.kids.size() || a.eqs.size() != b.eqs.size())
        return false;
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (!equal(*a.kids[i], *b.kids[i])) return false;
    for (size_t i = 0; i < a.eqs.size(); ++i) {
        auto &x = a.eqs[i], &y = b.eqs[i];
        if (x.var != y.var || x.params != y.params || !(x.where == y.where) || !equal(*x.body, *y.body)) return false;
    }
    return true;
}

// ---- validation and free names

namespace {
struct VScope {
    std::map<std::string, std::pair<int, int>> vars;  // name -> (arity, negation depth at binding)
    std::set<std::string> atoms;
};

void check(const Formula& f, VScope& s, int negs) {
    auto bind_atoms = [&](const std::vector<std::string>& vs) {
        for (auto& v : vs) {
            if (s.atoms.count(v)) throw InputError("atom variable '" + v + "' bound twice on a path");
            s.atoms.insert(v);
        }
    };
    auto unbind_atoms = [&](const std::vector<std::string>& vs) {
        for (auto& v : vs) s.atoms.erase(v);
    };
    switch (f.kind) {
        case FK::Var: {
            auto it = s.vars.find(f.name);
            if (it == s.vars.end()) return;
            if (it->second.first != static_cast<int>(f.args.size()))
                throw InputError("variable '" + f.name + "' used with wrong number of arguments");
            if ((negs - it->second.second) % 2 != 0)
                throw InputError("variable '" + f.name + "' occurs negatively in its fixpoint");
            return;
        }
        case FK::Not: check(*f.kids[0], s, negs + 1); return;
        case FK::OrbitOr:
        case FK::OrbitAnd:
            bind_atoms(f.binders);
            check(*f.kids[0], s, negs);
            unbind_atoms(f.binders);
            return;
        case FK::Fix: {
            if (f.eqs.empty()) throw InputError("fixpoint without equations");
            std::set<std::string> names;
            for (auto& e : f.eqs) {
                if (!names.insert(e.var).second) throw InputError("equation variable '" + e.var + "' defined twice");
                if (s.vars.count(e.var)) throw InputError("fixpoint variable '" + e.var + "' bound twice on a path");
                if (!e.body) throw InputError("equation without body");
            }
            const Equation* entry = nullptr;
            for (auto& e : f.eqs)
                if (e.var == f.name) entry = &e;
            if (!entry) throw InputError("entry variable '" + f.name + "' has no equation");
            if (entry->params.size() != f.args.size()) throw InputError("entry of '" + f.name + "' has wrong arity");
            for (auto& e : f.eqs) s.vars[e.var] = {static_cast<int>(e.params.size()), negs};
            for (auto& e : f.eqs) {
                std::set<std::string> ps(e.params.begin(), e.params.end());
                if (ps.size() != e.params.size()) throw InputError("repeated parameter in equation '" + e.var + "'");
                bind_atoms(e.params);
                check(*e.body, s, negs);
                unbind_atoms(e.params);
            }
            for (auto& e : f.eqs) s.vars.erase(e.var);
            return;
        }
        default:
            for (auto& k : f.kids) check(*k, s, negs);
    }
}

void free_names(const Formula& f, std::set<std::string>& bound_v, std::set<std::string>& bound_a,
                std::set<std::string>* fv, std::set<std::string>* fa) {
    auto atom = [&](const std::string& n) {
        if (fa && !bound_a.count(n)) fa->insert(n);
    };
    auto cons = [&](const Constraint& c) {
        std::vector<std::string> ns;
        c.names(ns);
        for (auto& n : ns) atom(n);
    };
    switch (f.kind) {
        case FK::Pred:
            for (auto& a : f.args) atom(a);
            return;
        case FK::Var:
            for (auto& a : f.args) atom(a);
            if (fv && !bound_v.count(f.name)) fv->insert(f.name);
            return;
        case FK::OrbitOr:
        case FK::OrbitAnd: {
            std::vector<std::string> added;
            for (auto& b : f.binders)
                if (bound_a.insert(b).second) added.push_back(b);
            cons(f.where);
            free_names(*f.kids[0], bound_v, bound_a, fv, fa);
            for (auto& b : added) bound_a.erase(b);
            return;
        }
        case FK::Fix: {
            for (auto& a : f.args) atom(a);
            std::vector<std::string> addv;
            for (auto& e : f.eqs)
                if (bound_v.insert(e.var).second) addv.push_back(e.var);
            for (auto& e : f.eqs) {
                std::vector<std::string> added;
                for (auto& b : e.params)
                    if (bound_a.insert(b).second) added.push_back(b);
                cons(e.where);
                free_names(*e.body, bound_v, bound_a, fv, fa);
                for (auto& b : added) bound_a.erase(b);
            }
            for (auto& v : addv) bound_v.erase(v);
            return;
        }
        default:
            for (auto& k : f.kids) free_names(*k, bound_v, bound_a, fv, fa);
    }
}
}  // namespace

void validate(const Formula& f) {
    VScope s;
    check(f, s, 0);
}

std::set<std::string> free_vars(const Formula& f) {
    std::set<std::string> bv, ba, out;
    free_names(f, bv, ba, &out, nullptr);
    return out;
}

std::set<std::string> free_atoms(const Formula& f) {
    std::set<std::string> bv, ba, out;
    free_names(f, bv, ba, nullptr, &out);
    return out;
}

std::set<std::string> constants_of(const Formula& f) { return free_atoms(f); }

bool is_closed(const Formula& f) { return free_vars(f).empty(); }

bool is_nnf(const Formula& f) {
    if (f.kind == FK::Not) return f.kids[0]->kind == FK::Pred || f.kids[0]->kind == FK::Var;
    for (auto& k : f.kids)
        if (!is_nnf(*k)) return false;
    for (auto& e : f.eqs)
        if (!is_nnf(*e.body)) return false;
    return true;
}

// ---- negation normal form

static FPtr nnf_rec(const FPtr& f, bool neg, const std::set<std::string>& flipped) {
    switch (f->kind) {
        case FK::True: return neg ? fm::f() : f;
        case FK::False: return neg ? fm::t() : f;
        case FK::Pred: return neg ? fm::neg(f) : f;
        case FK::Var: return (neg != (flipped.count(f->name) > 0)) ? fm::neg(fm::var(f->name, f->args)) : fm::var(f->name, f->args);
        case FK::Not: return nnf_rec(f->kids[0], !neg, flipped);
        case FK::Dia:
        case FK::Box: {
            FPtr k = nnf_rec(f->kids[0], neg, flipped);
            return (f->kind == FK::Dia) != neg ? fm::dia(k) : fm::box(k);
        }
        case FK::Or:
        case FK::And: {
            std::vector<FPtr> ks;
            for (auto& k : f->kids) ks.push_back(nnf_rec(k, neg, flipped));
            return (f->kind == FK::Or) != neg ? fm::disj(ks) : fm::conj(ks);
        }
        case FK::OrbitOr:
        case FK::OrbitAnd: {
            FPtr k = nnf_rec(f->kids[0], neg, flipped);
            return (f->kind == FK::OrbitOr) != neg ? fm::orbit_or(f->binders, f->where, k)
                                                   : fm::orbit_and(f->binders, f->where, k);
        }
        case FK::Fix: {
            auto fl = flipped;
            for (auto& e : f->eqs) {
                if (neg) fl.insert(e.var);
                else fl.erase(e.var);
            }
            std::vector<Equation> eqs;
            for (auto& e : f->eqs) eqs.push_back(Equation{e.var, e.params, e.where, nnf_rec(e.body, neg, fl)});
            return fm::fix(f->nu != neg, eqs, f->name, f->args);
        }
    }
    throw InternalError("nnf: bad node");
}

FPtr nnf(const FPtr& f) { return nnf_rec(f, false, {}); }

// ---- alternation depth

namespace {
struct FixInfo {
    const Formula* node;
    bool nu;
    int depth;
    std::set<std::string> fv;
};

void depths(const Formula& f, std::vector<FixInfo>& out, std::map<const Formula*, int>& res) {
    if (f.kind != FK::Fix) {
        for (auto& k : f.kids) depths(*k, out, res);
        return;
    }
    std::vector<FixInfo> inner;
    for (auto& e : f.eqs) depths(*e.body, inner, res);
    int d = 1;
    for (auto& g : inner) {
        bool dep = false;
        for (auto& e : f.eqs)
            if (g.fv.count(e.var)) dep = true;
        d = std::max(d, g.depth + (dep && g.nu != f.nu ? 1 : 0));
    }
    res[&f] = d;
    out.insert(out.end(), inner.begin(), inner.end());
    out.push_back(FixInfo{&f, f.nu, d, free_vars(f)});
}
}  // namespace

std::map<const Formula*, int> fix_depths(const Formula& f) {
    std::vector<FixInfo> all;
    std::map<const Formula*, int> res;
    depths(f, all, res);
    return res;
}

int alternation_depth(const FPtr& f) {
    FPtr n = nnf(f);
    int d = 0;
    for (auto& [k, v] : fix_depths(*n)) d = std::max(d, v);
    return d;
}

// ---- supports

static int gsb(const Formula& f, int acc) {
    int best = acc;
    auto child = [&](const Formula& k, bool adds) {
        best = std::max(best, gsb(k, acc + (adds ? static_cast<int>(free_atoms(k).size()) : 0)));
    };
    switch (f.kind) {
        case FK::Or:
        case FK::And:
            for (auto& k : f.kids) child(*k, true);
            break;
        case FK::OrbitOr:
        case FK::OrbitAnd: {
            // the disjunct instance is supported by its free names, binders included
            const Formula& b = *f.kids[0];
            std::set<std::string> fa = free_atoms(b);
            best = std::max(best, gsb(b, acc + static_cast<int>(fa.size())));
            break;
        }
        case FK::Fix:
            for (auto& e : f.eqs) child(*e.body, !e.params.empty());
            break;
        default:
            for (auto& k : f.kids) child(*k, false);
    }
    return best;
}

int global_support_bound(const Formula& f) { return gsb(f, 0); }

int binder_depth(const Formula& f) {
    int best = 0;
    switch (f.kind) {
        case FK::OrbitOr:
        case FK::OrbitAnd: return static_cast<int>(f.binders.size()) + binder_depth(*f.kids[0]);
        case FK::Fix:
            for (auto& e : f.eqs) best = std::max(best, static_cast<int>(e.params.size()) + binder_depth(*e.body));
            return best;
        default:
            for (auto& k : f.kids) best = std::max(best, binder_depth(*k));
            return best;
    }
}

int size(const Formula& f) {
    int n = 1;
    for (auto& k : f.kids) n += size(*k);
    for (auto& e : f.eqs) n += size(*e.body);
    return n;
}

// ---- single-orbit normal form

namespace {

std::set<std::string> all_names(const Formula& f) {
    std::set<std::string> s;
    std::function<void(const Formula&)> go = [&](const Formula& g) {
        s.insert(g.name);
        for (auto& a : g.args) s.insert(a);
        for (auto& b : g.binders) s.insert(b);
        std::vector<std::string> ns;
        g.where.names(ns);
        s.insert(ns.begin(), ns.end());
        for (auto& k : g.kids) go(*k);
        for (auto& e : g.eqs) {
            s.insert(e.var);
            s.insert(e.params.begin(), e.params.end());
            ns.clear();
            e.where.names(ns);
            s.insert(ns.begin(), ns.end());
            go(*e.body);
        }
    };
    go(f);
    return s;
}

struct Bekic {
    const Context& ctx;
    std::set<std::string> consts;  // formula constants known to ctx
    std::set<std::string> used;

    std::string fresh(const std::string& base) {
        std::string n = base;
        while (used.count(n)) n += "'";
        used.insert(n);
        return n;
    }

    // Fresh names for every atom binder and fixpoint variable bound inside f;
    // `atoms` renames free atoms as well.
    FPtr freshen(const FPtr& f, std::map<std::string, std::string> atoms, std::map<std::string, std::string> vars) {
        Formula x = *f;
        switch (f->kind) {
            case FK::Pred: x.args = rename(f->args, atoms); break;
            case FK::Var:
                x.args = rename(f->args, atoms);
                if (auto it = vars.find(f->name); it != vars.end()) x.name = it->second;
                break;
            case FK::OrbitOr:
            case FK::OrbitAnd:
                for (auto& b : x.binders) b = atoms[b] = fresh(b);
                x.where = rename(f->where, atoms);
                x.kids = {freshen(f->kids[0], atoms, vars)};
                break;
            case FK::Fix: {
                x.args = rename(f->args, atoms);
                for (auto& e : x.eqs) e.var = vars[e.var] = fresh(e.var);
                x.name = vars.at(f->name);
                for (auto& e : x.eqs) {
                    auto inner = atoms;
                    for (auto& prm : e.params) prm = inner[prm] = fresh(prm);
                    e.where = rename(e.where, inner);
                    e.body = freshen(e.body, inner, vars);
                }
                break;
            }
            default:
                for (auto& k : x.kids) k = freshen(k, atoms, vars);
        }
        return std::make_shared<const Formula>(std::move(x));
    }

    // Replaces Var occurrences of the listed variables.
    FPtr subst(const FPtr& f, const std::map<std::string, std::function<FPtr(const std::vector<std::string>&)>>& m) {
        if (f->kind == FK::Var) {
            auto it = m.find(f->name);
            return it == m.end() ? f : it->second(f->args);
        }
        Formula x = *f;
        for (auto& k : x.kids) k = subst(k, m);
        for (auto& e : x.eqs) e.body = subst(e.body, m);
        return std::make_shared<const Formula>(std::move(x));
    }

    // Single-orbit pieces of an equation family.
    std::vector<Constraint> pieces(const Equation& e, const std::set<std::string>& outer) {
        std::vector<std::string> vars(outer.begin(), outer.end());
        vars.insert(vars.end(), e.params.begin(), e.params.end());
        std::vector<int> keep;
        for (int i = 0; i < ctx.size(); ++i)
            if (consts.count(ctx.names[i])) keep.push_back(i);
        auto sub = sub_context(ctx, keep);
        std::vector<Constraint> out;
        for (auto& t : complete(e.where, vars, *sub)) out.push_back(type_constraint(*sub, t, vars));
        return out;
    }

    FPtr run(const FPtr& f) {
        if (f->kind != FK::Fix) {
            Formula x = *f;
            for (auto& k : x.kids) k = run(k);
            return std::make_shared<const Formula>(std::move(x));
        }
        // normalise inner systems first
        std::vector<Equation> eqs = f->eqs;
        for (auto& e : eqs) e.body = run(e.body);

        // system support: free atoms of the equations other than their parameters
        std::set<std::string> outer;
        for (auto& e : eqs) {
            std::set<std::string> params(e.params.begin(), e.params.end());
            for (auto& a : free_atoms(*e.body))
                if (!params.count(a) && !consts.count(a)) outer.insert(a);
            std::vector<std::string> ns;
            e.where.names(ns);
            for (auto& a : ns)
                if (!params.count(a) && !consts.count(a)) outer.insert(a);
        }
        struct Piece {
            std::string var;
            size_t src;
            Constraint where;
        };
        std::vector<Piece> ps;
        std::map<std::string, std::vector<size_t>> by_var;
        bool split = false;
        for (size_t i = 0; i < eqs.size(); ++i) {
            auto cs = pieces(eqs[i], outer);
            if (cs.size() != 1) split = true;
            for (auto& c : cs) {
                by_var[eqs[i].var].push_back(ps.size());
                ps.push_back(Piece{cs.size() == 1 ? eqs[i].var : fresh(eqs[i].var), i, cs.size() == 1 ? eqs[i].where : c});
            }
        }
        if (!split && eqs.size() == 1) {
            Formula x = *f;
            x.eqs = eqs;
            return std::make_shared<const Formula>(std::move(x));
        }
        // occurrence X(t) becomes a guarded choice of the piece containing t
        auto guarded = [&](const std::string& var, const std::vector<std::string>& args,
                           const std::function<FPtr(const Piece&)>& make) {
            std::vector<FPtr> alts;
            for (size_t pi : by_var.at(var)) {
                const Piece& p = ps[pi];
                const Equation& e = eqs[p.src];
                std::map<std::string, std::string> m;
                for (size_t j = 0; j < e.params.size(); ++j) m[e.params[j]] = args[j];
                alts.push_back(fm::orbit_or({}, rename(p.where, m), make(p)));
            }
            return fm::disj(alts);
        };
        std::vector<Equation> peqs;
        std::map<std::string, std::function<FPtr(const std::vector<std::string>&)>> redirect;
        for (auto& [v, idx] : by_var) {
            std::string var = v;
            redirect[var] = [&, var](const std::vector<std::string>& args) {
                return guarded(var, args, [&](const Piece& p) { return fm::var(p.var, args); });
            };
        }
        for (auto& p : ps) {
            const Equation& e = eqs[p.src];
            peqs.push_back(Equation{p.var, e.params, p.where, subst(e.body, redirect)});
        }
        bool nu = f->nu;
        std::function<FPtr(size_t, const std::vector<std::string>&, std::set<size_t>)> nest =
            [&](size_t i, const std::vector<std::string>& args, std::set<size_t> bound) -> FPtr {
            bound.insert(i);
            std::map<std::string, std::string> pren;
            Equation e = peqs[i];
            for (auto& prm : e.params) pren[prm] = fresh(prm);
            e.params = rename(e.params, pren);
            e.where = rename(e.where, pren);
            e.body = freshen(e.body, pren, {});
            std::map<std::string, std::function<FPtr(const std::vector<std::string>&)>> m;
            for (size_t j = 0; j < peqs.size(); ++j) {
                if (bound.count(j)) continue;
                m[peqs[j].var] = [&, j, bound](const std::vector<std::string>& a) { return nest(j, a, bound); };
            }
            e.body = subst(e.body, m);
            return fm::fix(nu, {e}, e.var, args);
        };
        std::vector<FPtr> alts;
        for (size_t pi : by_var.at(f->name)) {
            const Piece& p = ps[pi];
            std::map<std::string, std::string> m;
            for (size_t j = 0; j < eqs[p.src].params.size(); ++j) m[eqs[p.src].params[j]] = f->args[j];
            alts.push_back(fm::orbit_or({}, rename(p.where, m), nest(pi, f->args, {})));
        }
        return fm::disj(alts);
    }

    int count_pieces(const Formula& f) {
        int worst = 1;
        if (f.kind == FK::Fix) {
            if (f.eqs.size() > 1) worst = 2;
            std::set<std::string> outer;
            for (auto& e : f.eqs) {
                std::set<std::string> params(e.params.begin(), e.params.end());
                for (auto& a : free_atoms(*e.body))
                    if (!params.count(a) && !consts.count(a)) outer.insert(a);
                std::vector<std::string> ns;
                e.where.names(ns);
                for (auto& a : ns)
                    if (!params.count(a) && !consts.count(a)) outer.insert(a);
            }
            for (auto& e : f.eqs) {
                worst = std::max(worst, static_cast<int>(pieces(e, outer).size()));
                worst = std::max(worst, count_pieces(*e.body));
            }
        }
        for (auto& k : f.kids) worst = std::max(worst, count_pieces(*k));
        return worst;
    }
};

}  // namespace

FPtr bekic_single_orbit(const FPtr& f, const Context& ctx) {
    Bekic b{ctx, {}, all_names(*f)};
    for (auto& c : constants_of(*f)) {
        if (ctx.find(c) < 0) throw InputError("unknown constant '" + c + "' in formula");
        b.consts.insert(c);
    }
    FPtr out = b.run(f);
    validate(*out);
    return out;
}

bool single_orbit_systems(const Formula& f, const Context& ctx) {
    Bekic b{ctx, {}, {}};
    for (auto& c : constants_of(f)) {
        if (ctx.find(c) < 0) throw InputError("unknown constant '" + c + "' in formula");
        b.consts.insert(c);
    }
    return b.count_pieces(f) == 1;
}

// ---- formula library

namespace {

std::string theta(const std::string& b, const std::string& d) {
    return "(at(" + b + ") /\\ (AND " + d + " where " + d + " != " + b + " . ~at(" + d + ")))";
}

std::string phi1(const std::string& a, const std::string& b, const std::string& c) {
    return "(<> at(" + b + ") /\\ (AND " + c + " where " + a + " < " + c + " /\\ " + c + " < " + b + " . ~<> at(" +
           c + ")))";
}

std::string phi2(const std::string& a, const std::string& b, const std::string& c) {
    return "(OR " + c + " where " + a + " < " + c + " /\\ " + c + " < " + b + " . (" + phi1(a, c, c + "1") +
           " /\\ " + phi1(c, b, c + "2") + "))";
}

std::string evensucc_psi(const std::string& a, const std::string& x) {
    std::string b = a + "b", c = a + "c";
    return "(mu " + x + "(" + a + ") { " + x + "(" + b + ") where " + b + " >= " + a + " := (AND " + c + " where " +
           c + " > " + b + " . ~<> at(" + c + ")) \\/ (OR " + c + " where " + c + " > " + b + " . (" +
           phi2(b, c, c + "m") + " /\\ " + x + "(" + c + "))) })";
}

const char* kP1 = "nu X . ((<> (OR a . at(a))) /\\ [] X)";
const char* kP2 = "~(mu X . ((OR a . (at(a) /\\ <> (mu Y . (at(a) \\/ <> Y)))) \\/ <> X))";

}  // namespace

std::vector<std::string> builtin_formula_names() {
    return {"P1",         "P2",       "P1andP2", "P1prime", "psi",          "infsucc",      "chain",
            "chain_phi", "evensucc", "evensucc_psi", "phi1", "phi2", "infpath", "diatrue", "boxfalse"};
}

std::string builtin_formula_text(const std::string& name, Sort s) {
    auto need_order = [&] {
        if (s != Sort::Ordered) throw InputError("formula '" + name + "' needs ordered atoms");
    };
    if (name == "P1") return kP1;
    if (name == "P2") return kP2;
    if (name == "P1andP2") return std::string("(") + kP1 + ") /\\ " + kP2;
    if (name == "P1prime") {
        need_order();
        return "AND a, b where a < b . nu X . ((<> (OR c where a < c /\\ c < b . at(c))) /\\ [] X)";
    }
    if (name == "psi") return "AND a . <> " + theta("a", "b");
    if (name == "infsucc") {
        need_order();
        return "OR a, b where a < b . AND c where a < c /\\ c < b . <> at(c)";
    }
    if (name == "chain_phi" || name == "chain") {
        std::string body = "OR c . (" + theta("c", "d") + " /\\ <> (" + theta("b", "e") + " /\\ <> X(c)))";
        std::string phi = "nu X(a) { X(b) := " + body + " }";
        return name == "chain" ? "OR a . " + phi : phi;
    }
    if (name == "phi1") {
        need_order();
        return phi1("a", "b", "c");
    }
    if (name == "phi2") {
        need_order();
        return phi2("a", "b", "c");
    }
    if (name == "evensucc_psi") {
        need_order();
        return evensucc_psi("a", "X");
    }
    if (name == "evensucc") {
        need_order();
        return "OR a . AND b where b < a . " + evensucc_psi("b", "X");
    }
    if (name == "infpath") return "nu X . <> X";
    if (name == "diatrue") return "<> true";
    if (name == "boxfalse") return "[] false";
    throw InputError("unknown builtin formula '" + name + "'");
}

FPtr builtin_formula(const std::string& name, Sort s) { return parse_formula(builtin_formula_text(name, s)); }

}  // namespace amu
