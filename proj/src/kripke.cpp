#include "amu/kripke.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "amu/reductions.hpp"
#include "text.hpp"

namespace amu {

int KripkeModel::arity_of(int tag) const {
    for (auto& o : states.orbits())
        if (o.tag == tag) return o.arity();
    return -1;
}

void KripkeModel::validate() const {
    if (!ctx) throw InputError("model without context");
    std::map<int, int> ar;
    for (auto& o : states.orbits()) {
        auto [it, fresh] = ar.emplace(o.tag, o.arity());
        if (!fresh && it->second != o.arity()) throw InputError("state tag " + tag_name(o.tag) + " used with two arities");
    }
    for (auto& p : trans.pairs()) {
        if (!states.contains(p.left(ctx->sort))) throw InputError("transition source outside the state set");
        if (!states.contains(p.right(ctx->sort))) throw InputError("transition target outside the state set");
    }
    std::map<int, int> par;
    for (auto& p : sat.pairs()) {
        if (!states.contains(p.left(ctx->sort))) throw InputError("label on a state outside the state set");
        auto [it, fresh] = par.emplace(p.rtag, p.rarity());
        if (!fresh && it->second != p.rarity())
            throw InputError("predicate " + tag_name(p.rtag) + " used with two arities");
    }
}

OrbitRelation pred_of(const KripkeModel& m, const OrbitSet& xs) {
    std::vector<PairOrbit> out;
    for (auto& p : m.sat.pairs())
        if (xs.contains(p.left(m.ctx->sort))) out.push_back(p);
    return OrbitRelation(m.ctx, std::move(out));
}

OrbitSet successors(const KripkeModel& m, const OrbitSet& xs) { return image(m.trans, xs); }

namespace {

struct TermList {
    std::string tag;
    std::vector<std::string> args;
};

struct Stmt {
    int line;
    std::string kind;
    std::vector<TermList> terms;
    Constraint where;
};

std::vector<text::Token> line_tokens(const text::Line& l) {
    auto toks = text::tokenize(l.body);
    for (auto& t : toks) t.line = l.number;
    return toks;
}

TermList term(text::Parser& p) {
    TermList t;
    t.tag = p.ident();
    t.args = p.arg_list();
    return t;
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
    throw InputError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

KripkeModel parse_model(const std::string& src) {
    Sort sort = Sort::Equality;
    bool sort_seen = false;
    std::vector<std::string> cnames;
    std::vector<Atom> cwit;
    int with_values = 0;
    std::vector<Stmt> stmts;
    bool infinite = false;

    for (auto& l : text::lines(src)) {
        text::Parser p(line_tokens(l));
        std::string kw = p.ident();
        if (kw == "atoms") {
            if (sort_seen || !cnames.empty() || !stmts.empty()) fail_at(l.number, "'atoms' must come first");
            std::string s = p.ident();
            if (s == "equality") sort = Sort::Equality;
            else if (s == "ordered") sort = Sort::Ordered;
            else fail_at(l.number, "unknown atom structure '" + s + "'");
            sort_seen = true;
        } else if (kw == "const") {
            if (!stmts.empty()) fail_at(l.number, "constants must be declared before states");
            std::string sep = sort == Sort::Ordered ? "<" : ",";
            do {
                cnames.push_back(p.ident());
                if (p.accept("=")) {
                    if (p.peek().kind != text::Token::Number) p.fail("expected a number");
                    cwit.push_back(Rational::parse(p.next().s));
                    ++with_values;
                } else {
                    cwit.push_back(Atom(0));
                }
            } while (p.accept(sep));
        } else if (kw == "orbit_infinite") {
            infinite = true;
        } else if (kw == "state" || kw == "label" || kw == "trans") {
            Stmt s{l.number, kw, {}, Constraint::truth()};
            s.terms.push_back(term(p));
            if (kw == "label") {
                p.expect(":");
                s.terms.push_back(term(p));
            } else if (kw == "trans") {
                p.expect("->");
                s.terms.push_back(term(p));
            }
            if (p.accept_ident("where")) s.where = p.constraint();
            stmts.push_back(std::move(s));
        } else {
            fail_at(l.number, "unknown statement '" + kw + "'");
        }
        if (!p.at_end()) p.fail("unexpected trailing input");
    }

    if (with_values != 0 && with_values != static_cast<int>(cnames.size()))
        throw InputError("either all constants carry values or none do");
    CtxPtr ctx = with_values ? make_context(sort, cnames, cwit) : make_context(sort, cnames);

    std::map<std::string, int> state_ar, pred_ar;
    std::vector<Orbit> st;
    std::vector<PairOrbit> tr, sa;
    for (int pass = 0; pass < 2; ++pass) {
        OrbitSet states(ctx, st);
        for (auto& s : stmts) {
            if ((s.kind == "state") != (pass == 0)) continue;
            std::vector<std::string> vars;
            for (auto& t : s.terms)
                for (auto& a : t.args)
                    if (ctx->find(a) < 0 && std::find(vars.begin(), vars.end(), a) == vars.end()) vars.push_back(a);
            auto posof = [&](const std::string& n) {
                int j = ctx->find(n);
                if (j >= 0) return j;
                return ctx->size() + static_cast<int>(std::find(vars.begin(), vars.end(), n) - vars.begin());
            };
            auto check_ar = [&](std::map<std::string, int>& m, const TermList& t) {
                auto [it, fresh] = m.emplace(t.tag, static_cast<int>(t.args.size()));
                if (!fresh && it->second != static_cast<int>(t.args.size()))
                    fail_at(s.line, "tag '" + t.tag + "' used with two arities");
            };
            check_ar(state_ar, s.terms[0]);
            if (s.kind == "trans") check_ar(state_ar, s.terms[1]);
            if (s.kind == "label") {
                check_ar(pred_ar, s.terms[1]);
                if (state_ar.count(s.terms[1].tag)) fail_at(s.line, "'" + s.terms[1].tag + "' is a state tag");
            }
            std::vector<Type> sols;
            try {
                sols = complete(s.where, vars, *ctx);
            } catch (const InputError& e) {
                fail_at(s.line, e.what());
            }
            std::vector<int> pos;
            for (auto& t : s.terms)
                for (auto& a : t.args) pos.push_back(posof(a));
            int l0 = static_cast<int>(s.terms[0].args.size());
            std::vector<int> lpos(pos.begin(), pos.begin() + l0);
            for (auto& t : sols) {
                if (s.kind == "state") {
                    st.push_back(Orbit{intern_tag(s.terms[0].tag), select(sort, t, lpos)});
                    continue;
                }
                PairOrbit po{intern_tag(s.terms[0].tag), intern_tag(s.terms[1].tag), static_cast<uint8_t>(l0),
                             select(sort, t, pos)};
                if (!states.contains(po.left(sort)))
                    fail_at(s.line, std::string(s.kind == "trans" ? "transition source" : "labelled state") +
                                        " outside the declared states");
                if (s.kind == "trans") {
                    if (!states.contains(po.right(sort))) fail_at(s.line, "transition target outside the declared states");
                    tr.push_back(po);
                } else {
                    sa.push_back(po);
                }
            }
        }
    }
    for (auto& [t, a] : pred_ar)
        if (state_ar.count(t)) throw InputError("'" + t + "' is both a state tag and a predicate tag");

    KripkeModel m;
    m.ctx = ctx;
    m.states = OrbitSet(ctx, st);
    m.trans = OrbitRelation(ctx, tr);
    m.sat = OrbitRelation(ctx, sa);
    m.orbit_infinite = infinite;
    m.validate();
    return m;
}

static std::string args_of(const std::vector<std::string>& v) {
    if (v.empty()) return "";
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s + ")";
}

std::string print_model(const KripkeModel& m) {
    const Context& c = *m.ctx;
    std::ostringstream os;
    os << "atoms " << sort_name(c.sort) << "\n";
    if (c.size()) {
        bool dflt = true;
        for (int i = 0; i < c.size(); ++i)
            if (!(c.witnesses[i] == Atom(i + 1))) dflt = false;
        os << "const ";
        for (int i = 0; i < c.size(); ++i) {
            if (i) os << (c.sort == Sort::Ordered ? " < " : ", ");
            os << c.names[i];
            if (!dflt) os << "=" << c.witnesses[i].str();
        }
        os << "\n";
    }
    if (m.orbit_infinite) os << "orbit_infinite\n";
    auto where = [&](const Type& t, const std::vector<std::string>& vars) {
        auto w = type_constraint(c, t, vars);
        return w.is_true() ? std::string() : " where " + w.str();
    };
    std::vector<std::string> ls;
    for (auto& o : m.states.orbits()) {
        auto v = var_names(o.arity());
        ls.push_back("state " + tag_name(o.tag) + args_of(v) + where(o.type, v));
    }
    std::sort(ls.begin(), ls.end());
    for (auto& l : ls) os << l << "\n";
    for (int pass = 0; pass < 2; ++pass) {
        ls.clear();
        auto& rel = pass == 0 ? m.sat : m.trans;
        for (auto& p : rel.pairs()) {
            auto v = var_names(p.type.nvars());
            std::vector<std::string> l(v.begin(), v.begin() + p.larity), r(v.begin() + p.larity, v.end());
            ls.push_back(std::string(pass == 0 ? "label " : "trans ") + tag_name(p.ltag) + args_of(l) +
                         (pass == 0 ? " : " : " -> ") + tag_name(p.rtag) + args_of(r) + where(p.type, v));
        }
        std::sort(ls.begin(), ls.end());
        for (auto& l : ls) os << l << "\n";
    }
    return os.str();
}

Element parse_element(const Context& c, const std::string& s) {
    text::Parser p(text::tokenize(s));
    Element e;
    e.tag = p.ident();
    if (p.accept("(")) {
        if (!p.accept(")")) {
            do {
                const auto& t = p.peek();
                if (t.kind == text::Token::Number) {
                    e.args.push_back(Rational::parse(p.next().s));
                } else if (t.kind == text::Token::Ident) {
                    int j = c.find(t.s);
                    if (j < 0) p.fail("unknown constant");
                    p.next();
                    e.args.push_back(c.witnesses[j]);
                } else {
                    p.fail("expected an atom");
                }
            } while (p.accept(","));
            p.expect(")");
        }
    }
    if (!p.at_end()) p.fail("unexpected trailing input");
    return e;
}

Orbit state_orbit(const KripkeModel& m, const Element& x) {
    Orbit o = orbit_of(*m.ctx, x);
    if (!m.states.contains(o)) throw InputError("'" + x.str() + "' is not a state of the model");
    return o;
}

std::vector<Element> concrete_preds(const KripkeModel& m, const Element& x) {
    Orbit o = orbit_of(*m.ctx, x);
    const Context& c = *m.ctx;
    std::vector<Element> out;
    for (auto& p : m.sat.pairs()) {
        if (p.ltag != o.tag || !(p.left(c.sort) == o)) continue;
        // every predicate argument must coincide with a constant or a state argument
        Element e{tag_name(p.rtag), {}};
        for (int j = p.larity; j < p.type.nvars(); ++j) {
            int b = p.type.var(j);
            bool found = false;
            for (int i = 0; i < c.size() && !found; ++i)
                if (p.type.lab[i] == b) e.args.push_back(c.witnesses[i]), found = true;
            for (int i = 0; i < p.larity && !found; ++i)
                if (p.type.var(i) == b) e.args.push_back(x.args[i]), found = true;
            if (!found) throw InputError("state " + x.str() + " has infinitely many predicates");
        }
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

KripkeModel disjoint_union(const KripkeModel& a, const KripkeModel& b, const std::string& prefix) {
    if (!same_context(*a.ctx, *b.ctx)) throw InputError("disjoint union needs equal constants");
    auto ren = [&](int t) { return intern_tag(prefix + tag_name(t)); };
    std::vector<Orbit> st(a.states.orbits());
    for (auto o : b.states.orbits()) st.push_back(Orbit{ren(o.tag), o.type});
    std::vector<PairOrbit> tr(a.trans.pairs()), sa(a.sat.pairs());
    for (auto p : b.trans.pairs()) tr.push_back(PairOrbit{ren(p.ltag), ren(p.rtag), p.larity, p.type});
    for (auto p : b.sat.pairs()) sa.push_back(PairOrbit{ren(p.ltag), p.rtag, p.larity, p.type});
    KripkeModel m;
    m.ctx = a.ctx;
    m.states = OrbitSet(a.ctx, st);
    m.trans = OrbitRelation(a.ctx, tr);
    m.sat = OrbitRelation(a.ctx, sa);
    m.orbit_infinite = a.orbit_infinite || b.orbit_infinite;
    m.validate();
    return m;
}

// ---- built-in families

namespace {

struct Spec {
    std::string name;
    std::vector<std::string> params;
};

Spec parse_spec(const std::string& s) {
    Spec sp;
    size_t p = s.find('(');
    sp.name = s.substr(0, p);
    if (p == std::string::npos) return sp;
    size_t q = s.rfind(')');
    if (q == std::string::npos || q < p) throw InputError("bad builtin '" + s + "'");
    std::string in = s.substr(p + 1, q - p - 1);
    std::stringstream ss(in);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) sp.params.push_back(item);
    }
    return sp;
}

int int_param(const Spec& s, size_t i, int dflt = -1) {
    if (i >= s.params.size()) {
        if (dflt >= 0) return dflt;
        throw InputError("builtin " + s.name + " needs parameter " + std::to_string(i + 1));
    }
    try {
        size_t used = 0;
        int v = std::stoi(s.params[i], &used);
        if (used != s.params[i].size()) throw std::invalid_argument("x");
        return v;
    } catch (const std::logic_error&) {
        throw InputError("builtin " + s.name + ": bad parameter '" + s.params[i] + "'");
    }
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

std::string any_of(const std::string& x, const std::vector<std::string>& cs) {
    std::vector<std::string> v;
    for (auto& c : cs) v.push_back(x + " = " + c);
    return v.empty() ? "false" : join(v, " \\/ ");
}

std::string none_of(const std::string& x, const std::vector<std::string>& cs) {
    std::vector<std::string> v;
    for (auto& c : cs) v.push_back(x + " != " + c);
    return v.empty() ? "true" : join(v, " /\\ ");
}

std::vector<std::string> names(const std::string& stem, int from, int to) {
    std::vector<std::string> v;
    for (int i = from; i <= to; ++i) v.push_back(stem + std::to_string(i));
    return v;
}

std::string star(Sort s) {
    return std::string("atoms ") + sort_name(s) +
           "\nstate star\nstate leaf(x)\nlabel leaf(x) : at(x)\ntrans star -> leaf(x)\n";
}

std::string increasing() {
    return "atoms ordered\nstate st(x)\nlabel st(x) : at(x)\ntrans st(x) -> st(y) where x < y\n";
}

std::string infsucc(int k) {
    if (k < 1) throw InputError("infsucc needs k >= 1");
    auto S = names("s", 1, 2 * k);
    std::ostringstream os;
    os << "atoms equality\nconst " << join(S, ", ") << "\n";
    os << "state p\nstate q\nstate r(x)\nlabel r(x) : at(x)\n";
    os << "trans p -> r(x) where " << none_of("x", S) << "\n";
    os << "trans q -> r(x) where " << any_of("x", S) << "\n";
    return os.str();
}

std::string chain(int n) {
    if (n < 2) throw InputError("chain needs n >= 2");
    std::vector<std::string> cs = names("a", 0, n);
    for (auto& b : names("b", 1, n - 1)) cs.push_back(b);
    std::ostringstream os;
    os << "atoms equality\nconst " << join(cs, ", ") << "\n";
    for (int i = 1; i <= 2 * n; ++i) os << "state p" << i << "\nstate q" << i << "\n";
    for (int i = 1; i < n; ++i) os << "state r" << i << "\nstate s" << i << "\n";
    os << "state top\nstate bot\n";
    for (int i = 1; i <= 2 * n; ++i) {
        int a = i % 2 == 0 ? i / 2 - 1 : (i + 1) / 2;
        os << "label p" << i << " : at(a" << a << ")\nlabel q" << i << " : at(a" << a << ")\n";
    }
    for (int i = 1; i < n; ++i) os << "label r" << i << " : at(b" << i << ")\nlabel s" << i << " : at(b" << i << ")\n";
    os << "label top : at(a" << n << ")\n";
    for (int i = 1; i < 2 * n; ++i) os << "trans p" << i << " -> p" << i + 1 << "\ntrans q" << i << " -> q" << i + 1 << "\n";
    os << "trans p" << 2 * n << " -> top\ntrans q" << 2 * n << " -> bot\n";
    for (int i = 1; i < n; ++i)
        os << "trans p" << 2 * i + 1 << " -> r" << i << "\ntrans q" << 2 * i + 1 << " -> s" << i << "\n";
    for (int i = 1; i < n - 1; ++i)
        os << "trans r" << i << " -> q" << 2 * i + 3 << "\ntrans s" << i << " -> p" << 2 * i + 3 << "\n";
    os << "trans r" << n - 1 << " -> bot\ntrans s" << n - 1 << " -> top\ntrans top -> top\n";
    return os.str();
}

std::string evensucc(int k) {
    if (k < 0 || k > 3) throw InputError("evensucc needs 0 <= k <= 3");
    int n = 1 << (k + 1);
    auto S = names("s", 1, n), T = names("t", 1, 2 * n + 1);
    std::ostringstream os;
    os << "atoms ordered\nconst " << join(S, " < ") << " < " << join(T, " < ") << "\n";
    os << "state p\nstate q\nstate r(x)\nlabel r(x) : at(x)\n";
    os << "trans p -> r(x) where " << any_of("x", S) << "\n";
    os << "trans q -> r(x) where " << any_of("x", T) << "\n";
    return os.str();
}

std::string fan(const Spec& sp) {
    std::string kind = sp.params.empty() ? "" : sp.params[0];
    std::ostringstream os;
    os << "atoms ordered\n";
    std::string edge;
    if (kind == "interval") {
        os << "const lo < hi\n";
        edge = "lo < x /\\ x < hi";
    } else if (kind == "cofinite") {
        os << "const c1\n";
        edge = "x != c1";
    } else if (kind == "empty") {
        edge = "";
    } else {
        int n = int_param(sp, 0);
        if (n < 1 || n > 12) throw InputError("fan needs 1..12 labels");
        auto C = names("c", 1, n);
        os << "const " << join(C, " < ") << "\n";
        edge = any_of("x", C);
    }
    os << "state root\nstate leaf(x)\nlabel leaf(x) : at(x)\n";
    if (!edge.empty()) os << "trans root -> leaf(x) where " << edge << "\n";
    return os.str();
}

// Phase I/II/III models; pre marks the copy, full selects K (row 0 present) over the reduced copy.
void path_states(std::ostringstream& os, int n, const std::string& pre, bool full) {
    for (int i = 1; i <= n; ++i) os << "state " << pre << "p" << i << "\n";
    for (int i = full ? 0 : 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) os << "state " << pre << "q" << i << "_" << j << "\n";
    os << "state " << pre << "r(x)\n";
    for (int i = 1; i <= n; ++i) os << "label " << pre << "p" << i << " : at(a" << i << ")\n";
    for (int i = full ? 0 : 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            os << "label " << pre << "q" << i << "_" << j << " : at(" << (i == j ? "a" : "b") << j << ")\n";
    os << "label " << pre << "r(x) : at(x)\n";
    for (int i = 1; i < n; ++i) os << "trans " << pre << "p" << i << " -> " << pre << "p" << i + 1 << "\n";
    for (int i = full ? 0 : 1; i <= n; ++i) {
        os << "trans " << pre << "p" << n << " -> " << pre << "q" << i << "_1\n";
        for (int j = 1; j < n; ++j)
            os << "trans " << pre << "q" << i << "_" << j << " -> " << pre << "q" << i << "_" << j + 1 << "\n";
        os << "trans " << pre << "q" << i << "_" << n << " -> " << pre << "r(x)\n";
    }
    os << "trans " << pre << "r(x) -> " << pre << "r(y)\n";
}

std::string path_model(const Spec& sp, int which) {
    int n = int_param(sp, 0);
    if (sp.params.size() > 1 && !(n > int_param(sp, 1))) throw InputError("#Path models need n > k");
    if (n < 1 || n > 8) throw InputError("#Path models need 1 <= n <= 8");
    std::vector<std::string> cs;
    for (int i = 1; i <= n; ++i) cs.push_back("a" + std::to_string(i)), cs.push_back("b" + std::to_string(i));
    std::ostringstream os;
    os << "atoms ordered\nconst " << join(cs, " < ") << "\n";
    if (which != 2) path_states(os, n, "", true);
    if (which != 1) path_states(os, n, which == 3 ? "c" : "", false);
    return os.str();
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"star",        "star(ordered)", "increasing",      "infsucc(k)",      "chain(n)",
            "evensucc(k)", "fan(n)",        "fan(interval)",   "fan(cofinite)",   "fan(empty)",
            "pathk(n[,k])", "pathkcheck(n[,k])", "freshpath(n[,k])", "tmuniverse(tm)"};
}

std::string builtin_model_text(const std::string& spec) {
    Spec sp = parse_spec(spec);
    if (sp.name == "star") {
        if (sp.params.empty() || sp.params[0] == "equality") return star(Sort::Equality);
        if (sp.params[0] == "ordered") return star(Sort::Ordered);
        throw InputError("star takes equality or ordered");
    }
    if (sp.name == "increasing") return increasing();
    if (sp.name == "infsucc") return infsucc(int_param(sp, 0));
    if (sp.name == "chain") {
        int n = int_param(sp, 0);
        if (sp.params.size() > 1 && !(n > (1 << int_param(sp, 1)))) throw InputError("chain needs n > 2^k");
        return chain(n);
    }
    if (sp.name == "evensucc") return evensucc(int_param(sp, 0));
    if (sp.name == "fan") return fan(sp);
    if (sp.name == "pathk") return path_model(sp, 1);
    if (sp.name == "pathkcheck") return path_model(sp, 2);
    if (sp.name == "freshpath") return path_model(sp, 3);
    if (sp.name == "tmuniverse") {
        if (sp.params.size() != 1) throw InputError("tmuniverse takes a fixture TM name");
        return tm_universe_text(parse_tm(fixture_tm_text(sp.params[0])));
    }
    throw InputError("unknown builtin model '" + sp.name + "'");
}

KripkeModel builtin_model(const std::string& spec) { return parse_model(builtin_model_text(spec)); }

}  // namespace amu
