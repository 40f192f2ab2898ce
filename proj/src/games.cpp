#include "amu/games.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <regex>
#include <sstream>

#include "amu/checker.hpp"

namespace amu {

int AtomicParityGame::rank_of(const Orbit& o) const {
    auto it = rank.find(o);
    return it == rank.end() ? 0 : it->second;
}

void AtomicParityGame::validate() const {
    Sort s = ctx->sort;
    for (auto& o : Vexists.orbits())
        if (!V.contains(o)) throw InputError("owned node outside the game: " + orbit_str(*ctx, o));
    for (auto& p : R.pairs())
        if (!V.contains(p.left(s)) || !V.contains(p.right(s))) throw InputError("edge outside the game: " + pair_str(*ctx, p));
    for (auto& [o, r] : rank) {
        if (!V.contains(o)) throw InputError("ranked node outside the game: " + orbit_str(*ctx, o));
        if (r < 0) throw InputError("negative rank");
    }
}

OrbitGame quotient(const AtomicParityGame& g, std::vector<Orbit>* nodes) {
    OrbitGame q;
    const auto& vs = g.V.orbits();
    for (auto& o : vs) {
        q.names.push_back(orbit_str(*g.ctx, o));
        q.exists.push_back(g.Vexists.contains(o));
        q.rank.push_back(g.rank_of(o));
    }
    q.succ.assign(vs.size(), {});
    auto idx = [&](const Orbit& o) {
        auto it = std::lower_bound(vs.begin(), vs.end(), o);
        if (it == vs.end() || !(*it == o)) throw InputError("edge outside the game");
        return static_cast<int>(it - vs.begin());
    };
    Sort s = g.ctx->sort;
    for (auto& p : g.R.pairs()) q.succ[idx(p.left(s))].push_back(idx(p.right(s)));
    for (auto& v : q.succ) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    if (nodes) *nodes = vs;
    return q;
}

namespace {

// Recursive max-parity solver over a total game (every node has a move).
class Zielonka {
public:
    Zielonka(std::vector<bool> owner, std::vector<int> pr, std::vector<std::vector<int>> succ)
        : own_(std::move(owner)), pr_(std::move(pr)), succ_(std::move(succ)) {
        pred_.assign(succ_.size(), {});
        for (size_t v = 0; v < succ_.size(); ++v)
            for (int w : succ_[v]) pred_[w].push_back(static_cast<int>(v));
    }

    // win[v]: 0 Exists, 1 Forall; strat[v] for the winner's nodes.
    void solve(std::vector<int>& win, std::vector<int>& strat) {
        int n = static_cast<int>(succ_.size());
        win.assign(n, -1);
        strat.assign(n, -1);
        std::vector<char> in(n, 1);
        rec(in, win, strat);
    }

private:
    std::vector<bool> own_;  // true = Exists (player 0)
    std::vector<int> pr_;
    std::vector<std::vector<int>> succ_, pred_;

    int player(int v) const { return own_[v] ? 0 : 1; }

    // Attractor for p of target inside the subgame `in`; records p's choices.
    std::vector<char> attr(const std::vector<char>& in, const std::vector<char>& target, int p, std::vector<int>& strat) {
        int n = static_cast<int>(in.size());
        std::vector<char> a(target);
        std::vector<int> cnt(n, 0);
        std::vector<int> queue;
        for (int v = 0; v < n; ++v)
            if (in[v]) {
                for (int w : succ_[v]) cnt[v] += in[w];
                if (a[v]) queue.push_back(v);
            }
        while (!queue.empty()) {
            int w = queue.back();
            queue.pop_back();
            for (int v : pred_[w]) {
                if (!in[v] || a[v]) continue;
                if (player(v) == p) {
                    a[v] = 1;
                    strat[v] = w;
                    queue.push_back(v);
                } else if (--cnt[v] == 0) {
                    a[v] = 1;
                    queue.push_back(v);
                }
            }
        }
        return a;
    }

    void rec(const std::vector<char>& in, std::vector<int>& win, std::vector<int>& strat) {
        int n = static_cast<int>(in.size());
        int d = -1;
        for (int v = 0; v < n; ++v)
            if (in[v]) d = std::max(d, pr_[v]);
        if (d < 0) return;
        int p = d % 2;
        std::vector<char> top(n, 0);
        for (int v = 0; v < n; ++v) top[v] = in[v] && pr_[v] == d;
        std::vector<int> sa(n, -1);
        std::vector<char> A = attr(in, top, p, sa);
        std::vector<char> rest(n);
        for (int v = 0; v < n; ++v) rest[v] = in[v] && !A[v];
        std::vector<int> w1(n, -1), s1(n, -1);
        rec(rest, w1, s1);
        bool opp_empty = true;
        for (int v = 0; v < n; ++v)
            if (rest[v] && w1[v] == 1 - p) opp_empty = false;
        if (opp_empty) {
            for (int v = 0; v < n; ++v) {
                if (!in[v]) continue;
                win[v] = p;
                if (player(v) != p) continue;
                if (rest[v]) strat[v] = s1[v];
                else if (top[v]) {
                    for (int w : succ_[v])
                        if (in[w]) {
                            strat[v] = w;
                            break;
                        }
                } else strat[v] = sa[v];
            }
            return;
        }
        std::vector<char> opp(n, 0);
        for (int v = 0; v < n; ++v) opp[v] = rest[v] && w1[v] == 1 - p;
        std::vector<int> sb(n, -1);
        std::vector<char> B = attr(in, opp, 1 - p, sb);
        std::vector<char> rest2(n);
        for (int v = 0; v < n; ++v) rest2[v] = in[v] && !B[v];
        std::vector<int> w2(n, -1), s2(n, -1);
        rec(rest2, w2, s2);
        for (int v = 0; v < n; ++v) {
            if (!in[v]) continue;
            if (rest2[v]) {
                win[v] = w2[v];
                strat[v] = s2[v];
            } else {
                win[v] = 1 - p;
                if (player(v) != 1 - p) continue;
                strat[v] = opp[v] ? s1[v] : sb[v];
            }
        }
    }
};

}  // namespace

FiniteSolution solve_finite(const OrbitGame& g) {
    int n = g.size();
    int maxr = 0;
    for (int r : g.rank) maxr = std::max(maxr, r);
    std::vector<int> pr(g.rank);
    std::vector<std::vector<int>> succ(g.succ);
    for (int v = 0; v < n; ++v)
        if (succ[v].empty()) {
            succ[v].push_back(v);
            // a stuck player loses
            pr[v] = g.exists[v] ? (maxr % 2 ? maxr : maxr + 1) : (maxr % 2 ? maxr + 1 : maxr);
        }
    Zielonka z(g.exists, pr, succ);
    std::vector<int> win, strat;
    z.solve(win, strat);
    FiniteSolution s;
    s.exists_wins.resize(n);
    s.strategy.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        s.exists_wins[v] = win[v] == 0;
        bool mine = g.exists[v] == s.exists_wins[v];
        if (mine && !g.succ[v].empty()) s.strategy[v] = strat[v];
    }
    return s;
}

std::pair<OrbitSet, OrbitSet> winners(const AtomicParityGame& g) {
    std::vector<Orbit> nodes;
    OrbitGame q = quotient(g, &nodes);
    FiniteSolution s = solve_finite(q);
    std::vector<Orbit> e, a;
    for (int v = 0; v < q.size(); ++v) (s.exists_wins[v] ? e : a).push_back(nodes[v]);
    return {OrbitSet(g.ctx, e), OrbitSet(g.ctx, a)};
}

// ---- evaluation game

namespace {

std::vector<std::string> uni(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

int find_name(const std::vector<std::string>& v, const std::string& n) {
    auto it = std::find(v.begin(), v.end(), n);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

struct Occ {
    const Formula* f;
    std::vector<int> kids;
    int binder = -1, eq = -1;  // Var: binding Fix occurrence and equation
    std::vector<std::string> av, outer;
};

class GameBuilder {
public:
    GameBuilder(const KripkeModel& m, const Formula& f) : m_(m), c_(*m.ctx), s_(m.ctx->sort), k_(m.ctx->size()) {
        if (m.orbit_infinite) throw InputError("model is flagged orbit-infinite");
        if (!is_nnf(f)) throw InputError("evaluation game needs a formula in negation normal form");
        if (!is_closed(f)) throw InputError("evaluation game needs a closed formula");
        depth_ = fix_depths(f);
        std::vector<std::tuple<std::string, int, int>> scope;
        root_ = occ(f, scope);
        analyse();
    }

    AtomicParityGame build() {
        for (size_t o = 0; o < occs_.size(); ++o) occurrence_nodes(static_cast<int>(o));
        for (size_t o = 0; o < occs_.size(); ++o)
            if (occs_[o].f->kind == FK::Fix)
                for (size_t e = 0; e < occs_[o].f->eqs.size(); ++e) var_nodes(static_cast<int>(o), static_cast<int>(e));
        AtomicParityGame g;
        g.ctx = m_.ctx;
        g.V = OrbitSet(m_.ctx, V_);
        g.Vexists = OrbitSet(m_.ctx, E_);
        g.R = OrbitRelation(m_.ctx, R_);
        g.rank = rank_;
        return g;
    }

    int root() const { return root_; }
    int occ_tag(int o, int state_tag) { return intern_tag("o" + std::to_string(o) + "@" + tag_name(state_tag)); }

private:
    const KripkeModel& m_;
    const Context& c_;
    Sort s_;
    int k_;
    std::map<const Formula*, int> depth_;
    std::vector<Occ> occs_;
    int root_ = 0;
    std::vector<Orbit> V_, E_;
    std::vector<PairOrbit> R_;
    std::map<Orbit, int> rank_;
    std::map<int, std::vector<Orbit>> univ_;

    bool is_const(const std::string& n) const { return c_.find(n) >= 0; }

    int occ(const Formula& f, std::vector<std::tuple<std::string, int, int>>& scope) {
        int id = static_cast<int>(occs_.size());
        occs_.push_back(Occ{&f, {}, -1, -1, {}, {}});
        switch (f.kind) {
            case FK::Not:
                if (f.kids[0]->kind != FK::Pred) throw InputError("evaluation game: negated variable");
                break;
            case FK::Var: {
                for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                    if (std::get<0>(*it) == f.name) {
                        occs_[id].binder = std::get<1>(*it);
                        occs_[id].eq = std::get<2>(*it);
                        break;
                    }
                if (occs_[id].binder < 0) throw InputError("free variable '" + f.name + "'");
                break;
            }
            case FK::Fix: {
                for (size_t e = 0; e < f.eqs.size(); ++e) scope.emplace_back(f.eqs[e].var, id, static_cast<int>(e));
                for (auto& e : f.eqs) {
                    int k = occ(*e.body, scope);
                    occs_[id].kids.push_back(k);
                }
                scope.resize(scope.size() - f.eqs.size());
                break;
            }
            default:
                for (auto& k : f.kids) {
                    int c = occ(*k, scope);
                    occs_[id].kids.push_back(c);
                }
        }
        return id;
    }

    std::vector<std::string> nonconst(const std::vector<std::string>& ns) const {
        std::vector<std::string> out;
        for (auto& n : ns)
            if (!is_const(n)) out.push_back(n);
        return uni(out, {});
    }
    std::vector<std::string> cnames(const Constraint& c) const {
        std::vector<std::string> ns;
        c.names(ns);
        return nonconst(ns);
    }

    void analyse() {
        for (bool changed = true; changed;) {
            changed = false;
            for (int o = static_cast<int>(occs_.size()) - 1; o >= 0; --o) {
                Occ& x = occs_[o];
                const Formula& f = *x.f;
                std::vector<std::string> av;
                switch (f.kind) {
                    case FK::Pred: av = nonconst(f.args); break;
                    case FK::Not: av = nonconst(f.kids[0]->args); break;
                    case FK::Var: av = uni(nonconst(f.args), occs_[x.binder].outer); break;
                    case FK::OrbitOr:
                    case FK::OrbitAnd:
                        for (auto& n : uni(occs_[x.kids[0]].av, cnames(f.where)))
                            if (find_name(f.binders, n) < 0) av.push_back(n);
                        break;
                    case FK::Fix: {
                        std::vector<std::string> out;
                        for (size_t e = 0; e < f.eqs.size(); ++e)
                            for (auto& n : uni(occs_[x.kids[e]].av, cnames(f.eqs[e].where)))
                                if (find_name(f.eqs[e].params, n) < 0) out.push_back(n);
                        out = uni(out, {});
                        if (out != x.outer) changed = true;
                        x.outer = out;
                        av = uni(out, nonconst(f.args));
                        break;
                    }
                    default:
                        for (int k : x.kids) av = uni(av, occs_[k].av);
                }
                av = uni(av, {});
                if (av != x.av) changed = true;
                x.av = av;
            }
        }
    }

    // Types over (n vars, state args), tagged by the state tag.
    const std::vector<Orbit>& universe(int n) {
        auto it = univ_.find(n);
        if (it != univ_.end()) return it->second;
        std::vector<Orbit> out;
        for (auto& o : m_.states.orbits()) {
            int r = o.arity();
            std::vector<int> pos;
            for (int i = 0; i < n; ++i) pos.push_back(k_ + r + i);
            for (int i = 0; i < r; ++i) pos.push_back(k_ + i);
            extend(s_, o.type, n, [&](const Type& t) { out.push_back(Orbit{o.tag, select(s_, t, pos)}); });
        }
        std::sort(out.begin(), out.end());
        return univ_[n] = std::move(out);
    }

    // Positions, in a type over vars (after the constants), of the given names.
    std::vector<int> positions(const std::vector<std::string>& vars, const std::vector<std::string>& names,
                               int offset = 0) {
        std::vector<int> pos;
        for (auto& n : names) {
            int i = find_name(vars, n);
            if (i >= 0) pos.push_back(k_ + offset + i);
            else if (c_.find(n) >= 0) pos.push_back(c_.find(n));
            else throw InternalError("evaluation game: unresolved name '" + n + "'");
        }
        return pos;
    }

    std::vector<int> range(int from, int count) {
        std::vector<int> v;
        for (int i = 0; i < count; ++i) v.push_back(from + i);
        return v;
    }

    int var_tag(int fix, int e, int state_tag) {
        return intern_tag("v" + std::to_string(fix) + "." + std::to_string(e) + "@" + tag_name(state_tag));
    }

    void edge(int ltag, const Type& t, int larity, int rtag, std::vector<int> left, const std::vector<int>& right) {
        left.insert(left.end(), right.begin(), right.end());
        R_.push_back(PairOrbit{ltag, rtag, static_cast<uint8_t>(larity), select(s_, t, left)});
    }

    // Single move into the variable node of (fix, e) with the given terms.
    void to_var(int tag, const Orbit& u, int n, const std::vector<std::string>& av, int fix, int e,
                const std::vector<std::string>& args) {
        int r = u.arity() - n;
        std::vector<int> right = positions(av, occs_[fix].outer);
        auto ap = positions(av, args);
        right.insert(right.end(), ap.begin(), ap.end());
        for (int j = 0; j < r; ++j) right.push_back(k_ + n + j);
        edge(tag, u.type, n + r, var_tag(fix, e, u.tag), range(k_, n + r), right);
    }

    void occurrence_nodes(int o) {
        const Occ& x = occs_[o];
        const Formula& f = *x.f;
        int n = static_cast<int>(x.av.size());
        bool ex = true;
        switch (f.kind) {
            case FK::True:
            case FK::And:
            case FK::Box:
            case FK::OrbitAnd: ex = false; break;
            default: break;
        }
        for (auto& u : universe(n)) {
            int tag = occ_tag(o, u.tag);
            Orbit node{tag, u.type};
            int r = u.arity() - n;
            V_.push_back(node);
            switch (f.kind) {
                case FK::Pred:
                case FK::Not: {
                    const Formula& p = f.kind == FK::Pred ? f : *f.kids[0];
                    std::vector<int> pos = range(k_ + n, r);
                    auto ap = positions(x.av, p.args);
                    pos.insert(pos.end(), ap.begin(), ap.end());
                    bool t = m_.sat.contains(PairOrbit{u.tag, intern_tag(p.name), static_cast<uint8_t>(r), select(s_, u.type, pos)});
                    ex = t != (f.kind == FK::Pred);
                    break;
                }
                case FK::Or:
                case FK::And:
                    for (int k : x.kids) {
                        std::vector<int> right = positions(x.av, occs_[k].av);
                        for (int j = 0; j < r; ++j) right.push_back(k_ + n + j);
                        edge(tag, u.type, n + r, occ_tag(k, u.tag), range(k_, n + r), right);
                    }
                    break;
                case FK::OrbitOr:
                case FK::OrbitAnd: {
                    int kid = x.kids[0];
                    int nb = static_cast<int>(f.binders.size());
                    std::vector<std::string> names = x.av;
                    for (int j = 0; j < r; ++j) names.push_back("\x01" + std::to_string(j));
                    names.insert(names.end(), f.binders.begin(), f.binders.end());
                    CompiledConstraint cc(f.where, names, c_);
                    std::vector<std::string> inner = x.av;
                    inner.insert(inner.end(), f.binders.begin(), f.binders.end());
                    std::vector<int> right;
                    for (auto& nm : occs_[kid].av) {
                        int i = find_name(inner, nm);
                        right.push_back(i < n ? k_ + i : k_ + r + i);
                    }
                    for (int j = 0; j < r; ++j) right.push_back(k_ + n + j);
                    extend(s_, u.type, nb, [&](const Type& t) {
                        if (cc.eval(t)) edge(tag, t, n + r, occ_tag(kid, u.tag), range(k_, n + r), right);
                    });
                    break;
                }
                case FK::Var: to_var(tag, u, n, x.av, x.binder, x.eq, f.args); break;
                case FK::Fix: {
                    int e = 0;
                    while (f.eqs[e].var != f.name) ++e;
                    to_var(tag, u, n, x.av, o, e, f.args);
                    break;
                }
                default: break;
            }
            if (ex) E_.push_back(node);
        }
        if (f.kind == FK::Dia || f.kind == FK::Box) dia_edges(o);
    }

    void dia_edges(int o) {
        const Occ& x = occs_[o];
        int kid = x.kids[0];
        int n = static_cast<int>(x.av.size());
        for (auto& p : m_.trans.pairs()) {
            int lx = p.larity, ly = p.rarity();
            std::vector<int> left = range(k_ + lx + ly, n), right;
            for (int j = 0; j < lx; ++j) left.push_back(k_ + j);
            for (auto& nm : occs_[kid].av) right.push_back(k_ + lx + ly + find_name(x.av, nm));
            for (int j = 0; j < ly; ++j) right.push_back(k_ + lx + j);
            int ltag = occ_tag(o, p.ltag), rtag = occ_tag(kid, p.rtag);
            extend(s_, p.type, n, [&](const Type& t) { edge(ltag, t, n + lx, rtag, left, right); });
        }
    }

    void var_nodes(int fix, int e) {
        const Occ& x = occs_[fix];
        const Formula& f = *x.f;
        const Equation& eq = f.eqs[e];
        int body = x.kids[e];
        std::vector<std::string> names = x.outer;
        names.insert(names.end(), eq.params.begin(), eq.params.end());
        int n = static_cast<int>(names.size());
        CompiledConstraint cc(eq.where, names, c_);
        int a = depth_.at(&f);
        int rk = f.nu ? 2 * ((a + 1) / 2) : 2 * (a / 2) + 1;
        for (auto& u : universe(n)) {
            int tag = var_tag(fix, e, u.tag);
            Orbit node{tag, u.type};
            int r = u.arity() - n;
            V_.push_back(node);
            E_.push_back(node);
            rank_[node] = rk;
            if (!cc.eval(u.type)) continue;
            std::vector<int> right = positions(names, occs_[body].av);
            for (int j = 0; j < r; ++j) right.push_back(k_ + n + j);
            edge(tag, u.type, n + r, occ_tag(body, u.tag), range(k_, n + r), right);
        }
    }
};

}  // namespace

AtomicParityGame build_eval_game(const KripkeModel& m, const Formula& f) {
    validate(f);
    return GameBuilder(m, f).build();
}

OrbitSet eval_game_slice(const KripkeModel& m, const Formula& f) {
    validate(f);
    GameBuilder b(m, f);
    AtomicParityGame g = b.build();
    OrbitSet win = winners(g).first;
    std::vector<Orbit> out;
    for (auto& s : m.states.orbits())
        if (win.contains(Orbit{b.occ_tag(b.root(), s.tag), s.type})) out.push_back(s);
    return OrbitSet(m.ctx, out);
}

bool adequacy_check(const KripkeModel& m, const Formula& f) {
    FPtr n = nnf(std::make_shared<Formula>(f));
    return eval(m, f) == eval_game_slice(m, *n);
}

// ---- text format

AtomicParityGame parse_game(const std::string& text) {
    std::istringstream is(text);
    std::ostringstream mt;
    std::string line;
    std::regex owner(R"(^\s*owner\s+exists\s+(.*)$)"), rank(R"(^\s*rank\s+(\d+)\s+(.*)$)"),
        node(R"(^\s*node\s+(.*)$)"), edge(R"(^\s*edge\s+(.*)$)"), head(R"(^\s*(atoms|const)\b.*$)"),
        blank(R"(^\s*(#.*)?$)"), split(R"(^(.*?\))\s*(where\s.*)?$)"), bare(R"(^([A-Za-z_][\w']*)\s*(where\s.*)?$)");
    auto label = [&](const std::string& term, const std::string& pred, int ln) {
        std::smatch sm;
        if (std::regex_match(term, sm, split) || std::regex_match(term, sm, bare))
            return "label " + sm[1].str() + " : " + pred + " " + sm[2].str();
        throw InputError("line " + std::to_string(ln) + ": malformed node term");
    };
    std::vector<int> lines_of;
    int ln = 0;
    while (std::getline(is, line)) {
        ++ln;
        std::smatch sm;
        std::string out;
        if (std::regex_match(line, sm, blank)) out = "";
        else if (std::regex_match(line, sm, head)) out = line;
        else if (std::regex_match(line, sm, node)) out = "state " + sm[1].str();
        else if (std::regex_match(line, sm, edge)) out = "trans " + sm[1].str();
        else if (std::regex_match(line, sm, owner)) out = label(sm[1].str(), "owner_exists", ln);
        else if (std::regex_match(line, sm, rank)) out = label(sm[2].str(), "rank_" + sm[1].str(), ln);
        else throw InputError("line " + std::to_string(ln) + ": unknown game statement");
        mt << out << "\n";
    }
    KripkeModel m = parse_model(mt.str());
    AtomicParityGame g;
    g.ctx = m.ctx;
    g.V = m.states;
    g.R = m.trans;
    std::vector<Orbit> ex;
    Sort s = m.ctx->sort;
    for (auto& p : m.sat.pairs()) {
        const std::string& t = tag_name(p.rtag);
        Orbit o = p.left(s);
        if (t == "owner_exists") ex.push_back(o);
        else {
            int r = std::stoi(t.substr(5));
            auto [it, fresh] = g.rank.emplace(o, r);
            if (!fresh && it->second != r) throw InputError("two ranks for node " + orbit_str(*m.ctx, o));
        }
    }
    g.Vexists = OrbitSet(m.ctx, ex);
    g.validate();
    return g;
}

std::string print_game(const AtomicParityGame& g) {
    KripkeModel m;
    m.ctx = g.ctx;
    m.states = g.V;
    m.trans = g.R;
    std::vector<PairOrbit> labs;
    int ex = intern_tag("owner_exists");
    for (auto& o : g.Vexists.orbits()) labs.push_back(PairOrbit{o.tag, ex, static_cast<uint8_t>(o.arity()), o.type});
    for (auto& [o, r] : g.rank)
        if (r != 0)
            labs.push_back(PairOrbit{o.tag, intern_tag("rank_" + std::to_string(r)), static_cast<uint8_t>(o.arity()), o.type});
    m.sat = OrbitRelation(g.ctx, labs);
    std::istringstream is(print_model(m));
    std::regex lab(R"(^label (.*) : (owner_exists|rank_(\d+))(\(\))?(.*)$)");
    std::vector<std::string> head, body;
    std::string line;
    while (std::getline(is, line)) {
        std::smatch sm;
        if (line.rfind("state ", 0) == 0) body.push_back("node " + line.substr(6));
        else if (line.rfind("trans ", 0) == 0) body.push_back("edge " + line.substr(6));
        else if (std::regex_match(line, sm, lab)) {
            std::string term = sm[1].str() + sm[5].str();
            body.push_back(sm[2].str() == "owner_exists" ? "owner exists " + term : "rank " + sm[3].str() + " " + term);
        } else head.push_back(line);
    }
    std::string out;
    for (auto& l : head) out += l + "\n";
    for (auto& l : body) out += l + "\n";
    return out;
}

AtomicParityGame random_game(uint64_t seed, int tags, int max_arity, int max_rank) {
    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    CtxPtr ctx = make_context(Sort::Equality, pick(0, 1) ? std::vector<std::string>{"c"} : std::vector<std::string>{});
    std::vector<Orbit> V;
    std::vector<std::pair<std::string, int>> ts;
    int nt = pick(1, tags);
    for (int i = 0; i < nt; ++i) {
        std::string t = "g" + std::to_string(i);
        int ar = pick(0, max_arity);
        ts.emplace_back(t, ar);
        OrbitSet all = universe(ctx, t, ar);
        for (auto& o : all.orbits())
            if (pick(0, 5)) V.push_back(o);
    }
    OrbitSet vs(ctx, V);
    AtomicParityGame g;
    g.ctx = ctx;
    g.V = vs;
    std::vector<Orbit> ex;
    for (auto& o : vs.orbits()) {
        if (pick(0, 1)) ex.push_back(o);
        int r = pick(0, max_rank);
        if (r) g.rank[o] = r;
    }
    g.Vexists = OrbitSet(ctx, ex);
    std::vector<PairOrbit> R;
    for (auto& a : vs.orbits())
        for (auto& b : vs.orbits()) {
            std::vector<std::string> lv = var_names(a.arity(), "x"), rv = var_names(b.arity(), "y");
            Constraint la = type_constraint(*ctx, a.type, lv), rb = type_constraint(*ctx, b.type, rv);
            OrbitRelation all = relation_builder(ctx, tag_name(a.tag), lv, tag_name(b.tag), rv, Constraint::conj({la, rb}));
            for (auto& p : all.pairs())
                if (pick(0, 3) == 0) R.push_back(p);
        }
    g.R = OrbitRelation(ctx, R);
    return g;
}

}  // namespace amu
