#include "amu/reductions.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "amu/checker.hpp"
#include "text.hpp"

namespace amu {

// ---- Turing machines

void TuringMachine::validate() const {
    auto has = [](const std::vector<std::string>& v, const std::string& x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    if (states.empty()) throw InputError("TM: no states");
    if (alphabet.empty()) throw InputError("TM: empty alphabet");
    if (!has(states, init)) throw InputError("TM: unknown initial state '" + init + "'");
    if (!has(states, accept)) throw InputError("TM: unknown accepting state '" + accept + "'");
    std::set<std::pair<std::string, std::string>> seen;
    for (auto& r : rules) {
        if (!has(states, r.q) || !has(states, r.q2)) throw InputError("TM: rule uses an unknown state");
        if (!has(alphabet, r.g) || !has(alphabet, r.g2)) throw InputError("TM: rule uses an unknown symbol");
        if (r.q == accept) throw InputError("TM: rules may not leave the accepting state");
        if (!seen.emplace(r.q, r.g).second) throw InputError("TM: two rules for (" + r.q + ", " + r.g + ")");
    }
}

TuringMachine parse_tm(const std::string& src) {
    TuringMachine tm;
    bool init = false, acc = false;
    auto word = [](text::Parser& p) {
        text::Token t = p.next();
        if (t.kind != text::Token::Ident && t.kind != text::Token::Number) p.fail("expected a name");
        return t.s;
    };
    for (auto& l : text::lines(src)) {
        auto toks = text::tokenize(l.body);
        for (auto& t : toks) t.line = l.number;
        text::Parser p(toks);
        std::string kw = p.ident();
        if (kw == "states") {
            while (!p.at_end()) tm.states.push_back(word(p));
        } else if (kw == "alphabet") {
            while (!p.at_end()) tm.alphabet.push_back(word(p));
        } else if (kw == "init") {
            tm.init = word(p);
            init = true;
        } else if (kw == "accept") {
            tm.accept = word(p);
            acc = true;
        } else if (kw == "rule") {
            TmRule r;
            r.q = word(p);
            r.g = word(p);
            p.expect("->");
            r.q2 = word(p);
            r.g2 = word(p);
            std::string d = word(p);
            if (d != "L" && d != "R") p.fail("direction must be L or R");
            r.right = d == "R";
            tm.rules.push_back(r);
        } else {
            throw InputError("line " + std::to_string(l.number) + ": unknown TM statement '" + kw + "'");
        }
        if (!p.at_end()) p.fail("unexpected trailing input");
    }
    if (!init || !acc) throw InputError("TM: missing init or accept line");
    tm.validate();
    return tm;
}

std::string print_tm(const TuringMachine& tm) {
    std::ostringstream os;
    os << "states";
    for (auto& s : tm.states) os << " " << s;
    os << "\nalphabet";
    for (auto& s : tm.alphabet) os << " " << s;
    os << "\ninit " << tm.init << "\naccept " << tm.accept << "\n";
    for (auto& r : tm.rules) os << "rule " << r.q << " " << r.g << " -> " << r.q2 << " " << r.g2 << " " << (r.right ? "R" : "L") << "\n";
    return os.str();
}

// ---- LTL

namespace ltl {
namespace {
LPtr mk(Ltl x) { return std::make_shared<const Ltl>(std::move(x)); }
LPtr nary(LK k, std::vector<LPtr> ks) {
    Ltl x;
    x.kind = k;
    x.kids = std::move(ks);
    return mk(x);
}
LPtr bind(LK k, std::vector<std::string> vars, Constraint where, LPtr body) {
    Ltl x;
    x.kind = k;
    x.binders = std::move(vars);
    x.where = std::move(where);
    x.kids = {std::move(body)};
    return mk(x);
}
}  // namespace
LPtr t() { return nary(LK::True, {}); }
LPtr f() { return nary(LK::False, {}); }
LPtr pred(std::string tag, std::vector<std::string> args) {
    Ltl x;
    x.kind = LK::Pred;
    x.name = std::move(tag);
    x.args = std::move(args);
    return mk(x);
}
LPtr neg(LPtr a) { return nary(LK::Not, {std::move(a)}); }
LPtr disj(std::vector<LPtr> ks) {
    if (ks.empty()) return f();
    if (ks.size() == 1) return ks[0];
    return nary(LK::Or, std::move(ks));
}
LPtr conj(std::vector<LPtr> ks) {
    if (ks.empty()) return t();
    if (ks.size() == 1) return ks[0];
    return nary(LK::And, std::move(ks));
}
LPtr implies(LPtr a, LPtr b) { return disj({neg(std::move(a)), std::move(b)}); }
LPtr orbit_or(std::vector<std::string> vars, Constraint where, LPtr body) {
    return bind(LK::OrbitOr, std::move(vars), std::move(where), std::move(body));
}
LPtr orbit_and(std::vector<std::string> vars, Constraint where, LPtr body) {
    return bind(LK::OrbitAnd, std::move(vars), std::move(where), std::move(body));
}
LPtr next(LPtr a) { return nary(LK::X, {std::move(a)}); }
LPtr until(LPtr a, LPtr b) { return nary(LK::U, {std::move(a), std::move(b)}); }
LPtr release(LPtr a, LPtr b) { return nary(LK::R, {std::move(a), std::move(b)}); }
LPtr eventually(LPtr a) { return nary(LK::F, {std::move(a)}); }
LPtr always(LPtr a) { return nary(LK::G, {std::move(a)}); }
}  // namespace ltl

std::string print_ltl(const Ltl& f) {
    auto kid = [&](int i) { return print_ltl(*f.kids[i]); };
    auto joined = [&](const char* op) {
        std::string s = "(";
        for (size_t i = 0; i < f.kids.size(); ++i) s += (i ? std::string(" ") + op + " " : "") + kid(static_cast<int>(i));
        return s + ")";
    };
    auto binder = [&](const char* op) {
        std::string s = std::string(op) + " ";
        for (size_t i = 0; i < f.binders.size(); ++i) s += (i ? "," : "") + f.binders[i];
        if (!f.where.is_true()) s += " where " + f.where.str();
        return s + ". " + kid(0);
    };
    switch (f.kind) {
        case LK::True: return "true";
        case LK::False: return "false";
        case LK::Pred: {
            std::string s = f.name;
            if (!f.args.empty()) {
                s += "(";
                for (size_t i = 0; i < f.args.size(); ++i) s += (i ? "," : "") + f.args[i];
                s += ")";
            }
            return s;
        }
        case LK::Not: return "~" + kid(0);
        case LK::Or: return joined("\\/");
        case LK::And: return joined("/\\");
        case LK::OrbitOr: return "(" + binder("OR") + ")";
        case LK::OrbitAnd: return "(" + binder("AND") + ")";
        case LK::X: return "X " + kid(0);
        case LK::U: return "(" + kid(0) + " U " + kid(1) + ")";
        case LK::R: return "(" + kid(0) + " R " + kid(1) + ")";
        case LK::F: return "F " + kid(0);
        case LK::G: return "G " + kid(0);
    }
    return "?";
}

namespace {

LPtr nnf_rec(const LPtr& f, bool negate) {
    using namespace ltl;
    const Ltl& x = *f;
    auto kids = [&](bool neg) {
        std::vector<LPtr> ks;
        for (auto& k : x.kids) ks.push_back(nnf_rec(k, neg));
        return ks;
    };
    switch (x.kind) {
        case LK::True: return negate ? ltl::f() : f;
        case LK::False: return negate ? ltl::t() : f;
        case LK::Pred: return negate ? neg(f) : f;
        case LK::Not: return nnf_rec(x.kids[0], !negate);
        case LK::Or: return negate ? conj(kids(true)) : disj(kids(false));
        case LK::And: return negate ? disj(kids(true)) : conj(kids(false));
        case LK::OrbitOr:
            return negate ? orbit_and(x.binders, x.where, nnf_rec(x.kids[0], true))
                          : orbit_or(x.binders, x.where, nnf_rec(x.kids[0], false));
        case LK::OrbitAnd:
            return negate ? orbit_or(x.binders, x.where, nnf_rec(x.kids[0], true))
                          : orbit_and(x.binders, x.where, nnf_rec(x.kids[0], false));
        case LK::X: return next(nnf_rec(x.kids[0], negate));
        case LK::U: {
            auto k = kids(negate);
            return negate ? release(k[0], k[1]) : until(k[0], k[1]);
        }
        case LK::R: {
            auto k = kids(negate);
            return negate ? until(k[0], k[1]) : release(k[0], k[1]);
        }
        case LK::F: return negate ? always(nnf_rec(x.kids[0], true)) : eventually(nnf_rec(x.kids[0], false));
        case LK::G: return negate ? eventually(nnf_rec(x.kids[0], true)) : always(nnf_rec(x.kids[0], false));
    }
    throw InternalError("ltl nnf: bad node");
}

}  // namespace

LPtr ltl_nnf(const LPtr& f) { return nnf_rec(f, false); }

bool ltl_is_nnf(const Ltl& f) {
    if (f.kind == LK::Not) return f.kids[0]->kind == LK::Pred;
    for (auto& k : f.kids)
        if (!ltl_is_nnf(*k)) return false;
    return true;
}

// ---- the TM encoding

namespace {

std::vector<LPtr> tm_clauses(const TuringMachine& tm) {
    using namespace ltl;
    tm.validate();
    auto dollar = [] { return pred("dollar"); };
    auto atom = [](const std::string& v) { return pred("atom", {v}); };
    auto tape = [](const std::string& g) { return pred("tape_" + g); };
    auto head = [](const std::string& q) { return pred("head_" + q); };
    auto ne = [](const std::string& a, const std::string& b) { return Constraint::lit(a, Rel::Ne, b); };
    std::vector<LPtr> heads, tapes;
    for (auto& q : tm.states) heads.push_back(head(q));
    for (auto& g : tm.alphabet) tapes.push_back(tape(g));
    LPtr psi = disj(heads);

    std::vector<LPtr> cs;
    cs.push_back(dollar());
    cs.push_back(always(disj({dollar(), orbit_or({"a"}, {}, atom("a"))})));
    cs.push_back(orbit_and({"a", "b"}, ne("a", "b"), always(implies(atom("a"), neg(atom("b"))))));
    {
        std::vector<LPtr> none{orbit_and({"a"}, {}, neg(atom("a")))};
        for (auto& t : tapes) none.push_back(neg(t));
        for (auto& h : heads) none.push_back(neg(h));
        cs.push_back(always(implies(dollar(), conj(none))));
    }
    cs.push_back(always(implies(neg(dollar()), disj(tapes))));
    {
        std::vector<LPtr> ex;
        for (size_t i = 0; i < tapes.size(); ++i)
            for (size_t j = i + 1; j < tapes.size(); ++j) ex.push_back(disj({neg(tapes[i]), neg(tapes[j])}));
        cs.push_back(always(conj(ex)));
    }
    {
        std::vector<LPtr> ex;
        for (size_t i = 0; i < heads.size(); ++i)
            for (size_t j = i + 1; j < heads.size(); ++j) ex.push_back(disj({neg(heads[i]), neg(heads[j])}));
        cs.push_back(always(conj(ex)));
    }
    // $ w $ w ...: successor of each cell is fixed, cells distinct within w
    cs.push_back(orbit_and({"a", "b"}, {},
                           always(implies(conj({atom("a"), next(atom("b"))}), always(implies(atom("a"), next(atom("b"))))))));
    cs.push_back(orbit_and({"a"}, {}, always(implies(atom("a"), next(until(neg(atom("a")), dollar()))))));
    cs.push_back(always(implies(
        dollar(), next(until(conj({neg(psi), neg(dollar())}), conj({psi, next(until(neg(psi), dollar()))}))))));
    {
        std::vector<LPtr> frame;
        for (auto& g : tm.alphabet)
            frame.push_back(orbit_and({"a"}, {},
                                      always(implies(conj({atom("a"), tape(g), neg(psi)}),
                                                     next(until(neg(atom("a")), conj({atom("a"), tape(g)})))))));
        cs.push_back(conj(frame));
    }
    for (auto& r : tm.rules) {
        if (r.right) {
            cs.push_back(orbit_and(
                {"a"}, {},
                always(implies(conj({atom("a"), head(r.q), tape(r.g)}),
                               next(until(neg(atom("a")), conj({atom("a"), tape(r.g2), next(head(r.q2))})))))));
        } else {
            cs.push_back(orbit_and(
                {"a", "b"}, {},
                always(implies(conj({atom("b"), next(conj({atom("a"), head(r.q), tape(r.g)}))}),
                               next(until(neg(atom("b")),
                                          conj({atom("b"), head(r.q2), next(conj({atom("a"), tape(r.g2)}))})))))));
        }
    }
    cs.push_back(next(head(tm.init)));
    cs.push_back(next(until(tape(tm.blank()), dollar())));
    cs.push_back(eventually(head(tm.accept)));
    return cs;
}

}  // namespace

LPtr tm_to_ltl(const TuringMachine& tm) {
    Ltl x;
    x.kind = LK::And;
    x.kids = tm_clauses(tm);
    return std::make_shared<const Ltl>(std::move(x));
}

int tm_clause_count(const TuringMachine& tm) { return static_cast<int>(tm_clauses(tm).size()); }

// ---- M translation

FPtr ltl_to_mu(const LPtr& f, bool with_infinite_path) {
    if (!ltl_is_nnf(*f)) throw InputError("ltl_to_mu needs negation normal form");
    int fresh = 0;
    std::function<FPtr(const Ltl&)> m = [&](const Ltl& x) -> FPtr {
        auto kids = [&] {
            std::vector<FPtr> ks;
            for (auto& k : x.kids) ks.push_back(m(*k));
            return ks;
        };
        switch (x.kind) {
            case LK::True: return fm::t();
            case LK::False: return fm::f();
            case LK::Pred: return fm::pred(x.name, x.args);
            case LK::Not: return fm::neg(m(*x.kids[0]));
            case LK::Or: return fm::disj(kids());
            case LK::And: return fm::conj(kids());
            case LK::OrbitOr: return fm::orbit_or(x.binders, x.where, m(*x.kids[0]));
            case LK::OrbitAnd: return fm::orbit_and(x.binders, x.where, m(*x.kids[0]));
            case LK::X: return fm::box(m(*x.kids[0]));
            case LK::U:
            case LK::F: {
                std::string y = "Y" + std::to_string(++fresh);
                FPtr a = x.kind == LK::F ? fm::t() : m(*x.kids[0]);
                FPtr b = m(*x.kids.back());
                return fm::mu(y, fm::disj({b, fm::conj({a, fm::box(fm::var(y))})}));
            }
            case LK::R:
            case LK::G: {
                std::string y = "Y" + std::to_string(++fresh);
                FPtr a = x.kind == LK::G ? fm::f() : m(*x.kids[0]);
                FPtr b = m(*x.kids.back());
                return fm::nu(y, fm::conj({b, fm::disj({a, fm::box(fm::var(y))})}));
            }
        }
        throw InternalError("ltl_to_mu: bad node");
    };
    FPtr out = m(*f);
    if (with_infinite_path) out = fm::conj({out, fm::nu("Xinf", fm::dia(fm::var("Xinf")))});
    validate(*out);
    return out;
}

// ---- runs and lassos

std::vector<TmConfig> tm_run(const TuringMachine& tm, int max_steps) {
    tm.validate();
    std::vector<TmConfig> run{TmConfig{tm.init, {tm.blank()}, 0}};
    for (int step = 0; step < max_steps && run.back().state != tm.accept; ++step) {
        TmConfig c = run.back();
        const TmRule* r = nullptr;
        for (auto& x : tm.rules)
            if (x.q == c.state && x.g == c.tape[c.head]) r = &x;
        if (!r) break;
        c.tape[c.head] = r->g2;
        c.state = r->q2;
        if (r->right) {
            if (++c.head == static_cast<int>(c.tape.size())) c.tape.push_back(tm.blank());
        } else {
            if (c.head == 0) throw InputError("TM run moves left of the first cell");
            --c.head;
        }
        run.push_back(c);
    }
    return run;
}

LassoModel lasso_of_configs(const TuringMachine& tm, const std::vector<TmConfig>& run) {
    if (run.empty()) throw InputError("empty run");
    size_t cells = 1;
    for (auto& c : run) cells = std::max(cells, c.tape.size());
    std::ostringstream os;
    os << "atoms equality\nconst";
    for (size_t j = 1; j <= cells; ++j) os << (j > 1 ? ", c" : " c") << j;
    os << "\n";
    int n = 0;
    std::vector<std::string> lines;
    int last_start = 0;
    for (size_t i = 0; i < run.size(); ++i) {
        if (i + 1 == run.size()) last_start = n;
        os << "state w" << n << "\nlabel w" << n << " : dollar\n";
        ++n;
        for (size_t j = 0; j < cells; ++j) {
            std::string g = j < run[i].tape.size() ? run[i].tape[j] : tm.blank();
            os << "state w" << n << "\nlabel w" << n << " : atom(c" << j + 1 << ")\nlabel w" << n << " : tape_" << g << "\n";
            if (static_cast<int>(j) == run[i].head) os << "label w" << n << " : head_" << run[i].state << "\n";
            ++n;
        }
    }
    for (int i = 0; i + 1 < n; ++i) os << "trans w" << i << " -> w" << i + 1 << "\n";
    os << "trans w" << n - 1 << " -> w" << last_start << "\n";
    LassoModel out;
    out.text = os.str();
    out.model = parse_model(out.text);
    out.start = Element{"w0", {}};
    return out;
}

std::string tm_universe_text(const TuringMachine& tm) {
    tm.validate();
    std::vector<std::string> heads = tm.states;
    heads.push_back("nohead");
    std::vector<std::string> tags{"sep"};
    std::ostringstream os;
    os << "atoms equality\nstate sep\nlabel sep : dollar\n";
    for (auto& g : tm.alphabet)
        for (auto& q : heads) {
            std::string t = "cell_" + g + "_" + q;
            tags.push_back(t + "(x)");
            os << "state " << t << "(x)\nlabel " << t << "(x) : atom(x)\nlabel " << t << "(x) : tape_" << g << "\n";
            if (q != "nohead") os << "label " << t << "(x) : head_" << q << "\n";
        }
    for (auto& a : tags)
        for (auto& b : tags) {
            std::string rhs = b;
            if (auto i = rhs.find("(x)"); i != std::string::npos) rhs.replace(i, 3, "(y)");
            os << "trans " << a << " -> " << rhs << "\n";
        }
    return os.str();
}

LassoModel run_to_lasso(const TuringMachine& tm, int max_steps) {
    auto run = tm_run(tm, max_steps);
    if (run.back().state != tm.accept)
        throw InputError("TM does not accept the empty word within " + std::to_string(max_steps) + " steps");
    return lasso_of_configs(tm, run);
}

// ---- direct evaluation on a lasso

bool ltl_holds_on_lasso(const KripkeModel& m, const Element& start, const Ltl& f) {
    const Context& c = *m.ctx;
    std::vector<Element> path;
    std::map<Element, int> at;
    Element cur = start;
    state_orbit(m, cur);
    while (!at.count(cur)) {
        if (!cur.args.empty()) throw InputError("lasso evaluation needs argument-free states");
        at[cur] = static_cast<int>(path.size());
        path.push_back(cur);
        OrbitSet nx = successors(m, OrbitSet(m.ctx, {orbit_of(c, cur)}));
        if (nx.size() != 1 || nx.orbits()[0].arity() != 0) throw InputError("lasso evaluation needs a deterministic model");
        cur = Element{tag_name(nx.orbits()[0].tag), {}};
    }
    int n = static_cast<int>(path.size()), loop = at.at(cur);
    auto succ = [&](int i) { return i + 1 < n ? i + 1 : loop; };
    std::vector<std::vector<Element>> labels;
    for (auto& e : path) labels.push_back(concrete_preds(m, e));

    int depth = 0;
    std::function<void(const Ltl&, int)> bd = [&](const Ltl& x, int d) {
        d += static_cast<int>(x.binders.size());
        depth = std::max(depth, d);
        for (auto& k : x.kids) bd(*k, d);
    };
    bd(f, 0);
    std::vector<Atom> pool = atom_pool(c, depth);

    using Env = std::map<std::string, Atom>;
    auto resolve = [&](const std::string& name, const Env& env) -> Atom {
        if (auto it = env.find(name); it != env.end()) return it->second;
        int j = c.find(name);
        if (j < 0) throw InputError("unbound name '" + name + "' in LTL formula");
        return c.witnesses[j];
    };
    using Vals = std::vector<bool>;
    std::function<Vals(const Ltl&, const Env&)> ev = [&](const Ltl& x, const Env& env) -> Vals {
        Vals out(n, false);
        switch (x.kind) {
            case LK::True: out.assign(n, true); break;
            case LK::False: break;
            case LK::Pred: {
                Element term{x.name, {}};
                for (auto& a : x.args) term.args.push_back(resolve(a, env));
                for (int i = 0; i < n; ++i)
                    out[i] = std::find(labels[i].begin(), labels[i].end(), term) != labels[i].end();
                break;
            }
            case LK::Not: {
                Vals a = ev(*x.kids[0], env);
                for (int i = 0; i < n; ++i) out[i] = !a[i];
                break;
            }
            case LK::Or:
            case LK::And: {
                bool conj = x.kind == LK::And;
                out.assign(n, conj);
                for (auto& k : x.kids) {
                    Vals a = ev(*k, env);
                    for (int i = 0; i < n; ++i) out[i] = conj ? out[i] && a[i] : out[i] || a[i];
                }
                break;
            }
            case LK::OrbitOr:
            case LK::OrbitAnd: {
                bool all = x.kind == LK::OrbitAnd;
                out.assign(n, all);
                std::vector<std::string> names;
                for (auto& [k, v] : env) names.push_back(k);
                names.insert(names.end(), x.binders.begin(), x.binders.end());
                CompiledConstraint guard(x.where, names, c);
                size_t b = x.binders.size();
                std::vector<size_t> idx(b, 0);
                for (;;) {
                    Env e2 = env;
                    std::vector<Atom> tuple;
                    for (auto& [k, v] : env) tuple.push_back(v);
                    for (size_t i = 0; i < b; ++i) {
                        e2[x.binders[i]] = pool[idx[i]];
                        tuple.push_back(pool[idx[i]]);
                    }
                    if (guard.eval(type_of(c, tuple))) {
                        Vals a = ev(*x.kids[0], e2);
                        for (int i = 0; i < n; ++i) out[i] = all ? out[i] && a[i] : out[i] || a[i];
                    }
                    size_t i = b;
                    while (i > 0 && ++idx[i - 1] == pool.size()) idx[--i] = 0;
                    if (i == 0) break;
                }
                break;
            }
            case LK::X: {
                Vals a = ev(*x.kids[0], env);
                for (int i = 0; i < n; ++i) out[i] = a[succ(i)];
                break;
            }
            case LK::U:
            case LK::F:
            case LK::R:
            case LK::G: {
                bool least = x.kind == LK::U || x.kind == LK::F;
                Vals a = x.kind == LK::F ? Vals(n, true) : x.kind == LK::G ? Vals(n, false) : ev(*x.kids[0], env);
                Vals b = ev(*x.kids.back(), env);
                out.assign(n, !least);
                for (bool changed = true; changed;) {
                    changed = false;
                    for (int i = n - 1; i >= 0; --i) {
                        bool v = least ? (b[i] || (a[i] && out[succ(i)])) : (b[i] && (a[i] || out[succ(i)]));
                        if (v != out[i]) out[i] = v, changed = true;
                    }
                }
                break;
            }
        }
        return out;
    };
    return ev(f, {})[0];
}

// ---- fixtures

std::vector<std::string> fixture_tm_names() { return {"accept-now", "write-one", "bounce"}; }

std::string fixture_tm_text(const std::string& name) {
    if (name == "accept-now") return "states qa\nalphabet B\ninit qa\naccept qa\n";
    if (name == "write-one") return "states q0 qa\nalphabet B 1\ninit q0\naccept qa\nrule q0 B -> qa 1 R\n";
    if (name == "bounce")
        return "states q0 q1 q2 qa\nalphabet B 0 1\ninit q0\naccept qa\n"
               "rule q0 B -> q1 1 R\nrule q1 B -> q2 0 L\nrule q2 1 -> qa 1 R\n";
    throw InputError("unknown fixture TM '" + name + "'");
}

}  // namespace amu
