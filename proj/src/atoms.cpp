#include "amu/atoms.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace amu {

const char* sort_name(Sort s) { return s == Sort::Equality ? "equality" : "ordered"; }

// ---- rationals

Rational::Rational(int64_t n, int64_t d) {
    if (d == 0) throw InputError("rational with zero denominator");
    if (d < 0) n = -n, d = -d;
    int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    n_ = n / g;
    d_ = d / g;
}

std::string Rational::str() const {
    return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
}

Rational Rational::parse(const std::string& s) {
    try {
        size_t p = s.find('/');
        size_t used = 0;
        if (p == std::string::npos) {
            int64_t v = std::stoll(s, &used);
            if (used != s.size()) throw InputError("bad atom '" + s + "'");
            return Rational(v);
        }
        int64_t a = std::stoll(s.substr(0, p), &used);
        if (used != p) throw InputError("bad atom '" + s + "'");
        int64_t b = std::stoll(s.substr(p + 1), &used);
        if (used != s.size() - p - 1) throw InputError("bad atom '" + s + "'");
        return Rational(a, b);
    } catch (const std::logic_error&) {
        throw InputError("bad atom '" + s + "'");
    }
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.n_) * b.d_;
    __int128 r = static_cast<__int128>(b.n_) * a.d_;
    return l < r ? std::strong_ordering::less : l > r ? std::strong_ordering::greater : std::strong_ordering::equal;
}

static Rational from128(__int128 n, __int128 d) {
    if (d < 0) n = -n, d = -d;
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a == 0) a = 1;
    n /= a;
    d /= a;
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX) throw InternalError("rational overflow");
    return Rational(static_cast<int64_t>(n), static_cast<int64_t>(d));
}

Rational operator+(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_,
                   static_cast<__int128>(a.d_) * b.d_);
}
Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.n_, b.d_); }
Rational operator*(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.n_) * b.n_, static_cast<__int128>(a.d_) * b.d_);
}
Rational operator/(const Rational& a, const Rational& b) {
    if (b.n_ == 0) throw InternalError("division by zero");
    return from128(static_cast<__int128>(a.n_) * b.d_, static_cast<__int128>(a.d_) * b.n_);
}

// ---- contexts

int Context::find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names[i] == name) return i;
    return -1;
}

CtxPtr make_context(Sort s, std::vector<std::string> names, std::vector<Atom> witnesses) {
    if (names.size() != witnesses.size()) throw InputError("constant/witness count mismatch");
    if (names.size() > 100) throw InputError("too many constants");
    for (size_t i = 0; i < names.size(); ++i)
        for (size_t j = i + 1; j < names.size(); ++j) {
            if (names[i] == names[j]) throw InputError("duplicate constant '" + names[i] + "'");
            if (witnesses[i] == witnesses[j]) throw InputError("constants share a witness");
        }
    if (s == Sort::Ordered)
        for (size_t i = 0; i + 1 < witnesses.size(); ++i)
            if (!(witnesses[i] < witnesses[i + 1]))
                throw InputError("ordered witnesses must increase in declared order");
    if (s == Sort::Equality)
        for (auto& w : witnesses)
            if (w.den() != 1 || w.num() < 0) throw InputError("equality atoms are natural numbers");
    auto c = std::make_shared<Context>();
    c->sort = s;
    c->names = std::move(names);
    c->witnesses = std::move(witnesses);
    return c;
}

CtxPtr make_context(Sort s, std::vector<std::string> names) {
    std::vector<Atom> w;
    for (size_t i = 0; i < names.size(); ++i) w.emplace_back(static_cast<int64_t>(i + 1));
    return make_context(s, std::move(names), std::move(w));
}

CtxPtr sub_context(const Context& c, const std::vector<int>& keep) {
    auto r = std::make_shared<Context>();
    r->sort = c.sort;
    for (int i : keep) {
        r->names.push_back(c.names[i]);
        r->witnesses.push_back(c.witnesses[i]);
    }
    return r;
}

bool same_context(const Context& a, const Context& b) {
    return a.sort == b.sort && a.names == b.names && a.witnesses == b.witnesses;
}

// ---- types

size_t TypeHash::operator()(const Type& t) const {
    uint64_t h = 1469598103934665603ull ^ t.k;
    for (uint8_t x : t.lab) h = (h ^ x) * 1099511628211ull;
    return static_cast<size_t>(h ^ (h >> 29));
}

Type normalize(Sort s, int k, const std::vector<int>& keys) {
    Type t;
    t.k = static_cast<uint8_t>(k);
    t.lab.resize(keys.size());
    if (s == Sort::Ordered) {
        std::vector<int> u(keys);
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        for (size_t i = 0; i < keys.size(); ++i)
            t.lab[i] = static_cast<uint8_t>(std::lower_bound(u.begin(), u.end(), keys[i]) - u.begin());
    } else {
        std::vector<int> seen;
        for (size_t i = 0; i < keys.size(); ++i) {
            size_t j = 0;
            while (j < seen.size() && seen[j] != keys[i]) ++j;
            if (j == seen.size()) seen.push_back(keys[i]);
            t.lab[i] = static_cast<uint8_t>(j);
        }
    }
    return t;
}

Type type_of(const Context& c, const std::vector<Atom>& tuple) {
    std::vector<Atom> all(c.witnesses);
    all.insert(all.end(), tuple.begin(), tuple.end());
    std::vector<Atom> u(all);
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    std::vector<int> keys(all.size());
    for (size_t i = 0; i < all.size(); ++i)
        keys[i] = static_cast<int>(std::lower_bound(u.begin(), u.end(), all[i]) - u.begin());
    return normalize(c.sort, c.size(), keys);
}

Type base_type(const Context& c) {
    Type t;
    t.k = static_cast<uint8_t>(c.size());
    for (int i = 0; i < c.size(); ++i) t.lab.push_back(static_cast<uint8_t>(i));
    return t;
}

Type select(Sort s, const Type& t, const std::vector<int>& pos) {
    std::vector<int> keys(t.k + pos.size());
    for (int i = 0; i < t.k; ++i) keys[i] = t.lab[i];
    for (size_t i = 0; i < pos.size(); ++i) keys[t.k + i] = t.lab[pos[i]];
    return normalize(s, t.k, keys);
}

Type restrict_consts(Sort s, const Type& t, const std::vector<int>& keep) {
    std::vector<int> keys;
    for (int i : keep) keys.push_back(t.lab[i]);
    for (size_t i = t.k; i < t.lab.size(); ++i) keys.push_back(t.lab[i]);
    return normalize(s, static_cast<int>(keep.size()), keys);
}

Type project_exists(Sort s, const Type& t, const std::vector<int>& drop_vars) {
    std::vector<int> pos;
    for (int i = 0; i < t.nvars(); ++i)
        if (std::find(drop_vars.begin(), drop_vars.end(), i) == drop_vars.end()) pos.push_back(t.k + i);
    return select(s, t, pos);
}

static void extend_rec(Sort s, Type& cur, int m, int left, const std::function<void(const Type&)>& f) {
    if (left == 0) {
        f(cur);
        return;
    }
    if (s == Sort::Equality) {
        for (int b = 0; b <= m; ++b) {
            cur.lab.push_back(static_cast<uint8_t>(b));
            extend_rec(s, cur, b == m ? m + 1 : m, left - 1, f);
            cur.lab.pop_back();
        }
        return;
    }
    for (int g = 0; g <= m; ++g) {
        // new block inserted below current rank g
        Type nxt = cur;
        for (auto& x : nxt.lab)
            if (x >= g) ++x;
        nxt.lab.push_back(static_cast<uint8_t>(g));
        extend_rec(s, nxt, m + 1, left - 1, f);
        if (g < m) {
            cur.lab.push_back(static_cast<uint8_t>(g));
            extend_rec(s, cur, m, left - 1, f);
            cur.lab.pop_back();
        }
    }
}

void extend(Sort s, const Type& t, int m, const std::function<void(const Type&)>& f) {
    Type cur = t;
    int blocks = 0;
    for (uint8_t x : t.lab) blocks = std::max(blocks, x + 1);
    extend_rec(s, cur, blocks, m, f);
}

std::vector<Type> extensions(Sort s, const Type& t, int m) {
    std::vector<Type> out;
    extend(s, t, m, [&](const Type& x) { out.push_back(x); });
    return out;
}

std::vector<Type> all_types(const Context& c, int n) {
    auto v = extensions(c.sort, base_type(c), n);
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<Atom> realize(const Context& c, const Type& t) {
    int blocks = 0;
    for (uint8_t x : t.lab) blocks = std::max(blocks, x + 1);
    std::vector<Atom> val(blocks);
    std::vector<char> fixed(blocks, 0);
    for (int i = 0; i < t.k; ++i) {
        val[t.lab[i]] = c.witnesses[i];
        fixed[t.lab[i]] = 1;
    }
    if (c.sort == Sort::Equality) {
        int64_t next = 0;
        for (int b = 0; b < blocks; ++b) {
            if (fixed[b]) continue;
            auto used = [&](int64_t v) {
                for (auto& w : c.witnesses)
                    if (w.num() == v) return true;
                return false;
            };
            while (used(next)) ++next;
            val[b] = Atom(next++);
        }
    } else {
        int prev = -1;
        for (int b = 0; b <= blocks; ++b) {
            if (b < blocks && !fixed[b]) continue;
            int gap = b - prev - 1;
            for (int j = 1; j <= gap; ++j) {
                int blk = prev + j;
                if (prev < 0 && b == blocks) val[blk] = Atom(blk);
                else if (prev < 0) val[blk] = val[b] - Atom(b - blk);
                else if (b == blocks) val[blk] = val[prev] + Atom(blk - prev);
                else val[blk] = val[prev] + (val[b] - val[prev]) * Rational(j, gap + 1);
            }
            prev = b;
        }
    }
    std::vector<Atom> out;
    for (uint8_t x : t.lab) out.push_back(val[x]);
    return out;
}

std::vector<Atom> witness(const Context& c, const Type& t) {
    auto all = realize(c, t);
    return std::vector<Atom>(all.begin() + t.k, all.end());
}

// ---- constraints

const char* rel_str(Rel r) {
    switch (r) {
        case Rel::Eq: return "=";
        case Rel::Ne: return "!=";
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
        case Rel::Gt: return ">";
        case Rel::Ge: return ">=";
    }
    return "?";
}

Rel flip(Rel r) {
    switch (r) {
        case Rel::Lt: return Rel::Gt;
        case Rel::Gt: return Rel::Lt;
        case Rel::Le: return Rel::Ge;
        case Rel::Ge: return Rel::Le;
        default: return r;
    }
}

Rel negate(Rel r) {
    switch (r) {
        case Rel::Eq: return Rel::Ne;
        case Rel::Ne: return Rel::Eq;
        case Rel::Lt: return Rel::Ge;
        case Rel::Ge: return Rel::Lt;
        case Rel::Gt: return Rel::Le;
        case Rel::Le: return Rel::Gt;
    }
    return r;
}

Constraint Constraint::falsity() {
    Constraint c;
    c.kind = K::False;
    return c;
}
Constraint Constraint::lit(std::string a, Rel r, std::string b) {
    Constraint c;
    c.kind = K::Lit;
    c.rel = r;
    c.lhs = std::move(a);
    c.rhs = std::move(b);
    return c;
}
Constraint Constraint::conj(std::vector<Constraint> cs) {
    std::vector<Constraint> keep;
    for (auto& c : cs) {
        if (c.kind == K::True) continue;
        if (c.kind == K::False) return falsity();
        if (c.kind == K::And)
            for (auto& d : c.kids) keep.push_back(d);
        else
            keep.push_back(std::move(c));
    }
    if (keep.empty()) return truth();
    if (keep.size() == 1) return keep[0];
    Constraint c;
    c.kind = K::And;
    c.kids = std::move(keep);
    return c;
}
Constraint Constraint::disj(std::vector<Constraint> cs) {
    std::vector<Constraint> keep;
    for (auto& c : cs) {
        if (c.kind == K::False) continue;
        if (c.kind == K::True) return truth();
        if (c.kind == K::Or)
            for (auto& d : c.kids) keep.push_back(d);
        else
            keep.push_back(std::move(c));
    }
    if (keep.empty()) return falsity();
    if (keep.size() == 1) return keep[0];
    Constraint c;
    c.kind = K::Or;
    c.kids = std::move(keep);
    return c;
}
Constraint Constraint::neg(Constraint c) {
    if (c.kind == K::True) return falsity();
    if (c.kind == K::False) return truth();
    if (c.kind == K::Lit) return lit(c.lhs, negate(c.rel), c.rhs);
    if (c.kind == K::Not) return c.kids[0];
    Constraint r;
    r.kind = K::Not;
    r.kids.push_back(std::move(c));
    return r;
}

void Constraint::names(std::vector<std::string>& out) const {
    if (kind == K::Lit) {
        for (auto* n : {&lhs, &rhs})
            if (std::find(out.begin(), out.end(), *n) == out.end()) out.push_back(*n);
    }
    for (auto& k : kids) k.names(out);
}

bool Constraint::uses_order() const {
    if (kind == K::Lit && rel != Rel::Eq && rel != Rel::Ne) return true;
    for (auto& k : kids)
        if (k.uses_order()) return true;
    return false;
}

static int cprec(Constraint::K k) {
    switch (k) {
        case Constraint::K::Or: return 1;
        case Constraint::K::And: return 2;
        default: return 3;
    }
}

std::string Constraint::str() const {
    switch (kind) {
        case K::True: return "true";
        case K::False: return "false";
        case K::Lit: return lhs + " " + rel_str(rel) + " " + rhs;
        case K::Not: {
            std::string s = kids[0].str();
            return cprec(kids[0].kind) < 3 || kids[0].kind == K::Lit ? "~(" + s + ")" : "~" + s;
        }
        case K::And:
        case K::Or: {
            std::string out;
            for (size_t i = 0; i < kids.size(); ++i) {
                if (i) out += kind == K::And ? " /\\ " : " \\/ ";
                std::string s = kids[i].str();
                out += cprec(kids[i].kind) <= cprec(kind) ? "(" + s + ")" : s;
            }
            return out;
        }
    }
    return "?";
}

CompiledConstraint::CompiledConstraint(const Constraint& c, const std::vector<std::string>& vars,
                                       const Context& ctx)
    : sort_(ctx.sort) {
    auto pos = [&](const std::string& n) {
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == n) return ctx.size() + static_cast<int>(i);
        int j = ctx.find(n);
        if (j < 0) throw InputError("unknown name '" + n + "' in constraint");
        return j;
    };
    std::function<int(const Constraint&)> build = [&](const Constraint& x) -> int {
        Node nd{x.kind, x.rel, -1, -1, {}};
        if (x.kind == Constraint::K::Lit) {
            if (sort_ == Sort::Equality && x.rel != Rel::Eq && x.rel != Rel::Ne)
                throw InputError(std::string("order comparison '") + rel_str(x.rel) + "' on equality atoms");
            nd.a = pos(x.lhs);
            nd.b = pos(x.rhs);
        }
        for (auto& k : x.kids) nd.kids.push_back(build(k));
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size()) - 1;
    };
    build(c);
}

bool CompiledConstraint::ev(int i, const Type& t) const {
    const Node& n = nodes_[i];
    switch (n.kind) {
        case Constraint::K::True: return true;
        case Constraint::K::False: return false;
        case Constraint::K::Not: return !ev(n.kids[0], t);
        case Constraint::K::And:
            for (int k : n.kids)
                if (!ev(k, t)) return false;
            return true;
        case Constraint::K::Or:
            for (int k : n.kids)
                if (ev(k, t)) return true;
            return false;
        case Constraint::K::Lit: {
            int a = t.lab[n.a], b = t.lab[n.b];
            switch (n.rel) {
                case Rel::Eq: return a == b;
                case Rel::Ne: return a != b;
                case Rel::Lt: return a < b;
                case Rel::Le: return a <= b;
                case Rel::Gt: return a > b;
                case Rel::Ge: return a >= b;
            }
        }
    }
    return false;
}

bool CompiledConstraint::eval(const Type& t) const {
    if (nodes_.empty()) return true;
    return ev(static_cast<int>(nodes_.size()) - 1, t);
}

static void check_vars(const std::vector<std::string>& vars, const Context& ctx) {
    for (size_t i = 0; i < vars.size(); ++i) {
        if (ctx.find(vars[i]) >= 0) throw InputError("variable '" + vars[i] + "' shadows a constant");
        for (size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j]) throw InputError("duplicate variable '" + vars[i] + "'");
    }
}

std::vector<Type> complete(const Constraint& c, const std::vector<std::string>& vars, const Context& ctx) {
    check_vars(vars, ctx);
    CompiledConstraint cc(c, vars, ctx);
    std::vector<Type> out;
    extend(ctx.sort, base_type(ctx), static_cast<int>(vars.size()), [&](const Type& t) {
        if (cc.eval(t)) out.push_back(t);
    });
    std::sort(out.begin(), out.end());
    return out;
}

bool satisfiable(const Constraint& c, const std::vector<std::string>& vars, const Context& ctx) {
    return !complete(c, vars, ctx).empty();
}

bool holds_on(const Constraint& c, const std::vector<std::string>& vars, const Context& ctx,
              const std::vector<Atom>& values) {
    CompiledConstraint cc(c, vars, ctx);
    return cc.eval(type_of(ctx, values));
}

Constraint type_constraint(const Context& c, const Type& t, const std::vector<std::string>& vars) {
    int blocks = 0;
    for (uint8_t x : t.lab) blocks = std::max(blocks, x + 1);
    std::vector<std::vector<int>> members(blocks);
    for (size_t i = 0; i < t.lab.size(); ++i) members[t.lab[i]].push_back(static_cast<int>(i));
    auto name = [&](int i) { return i < t.k ? c.names[i] : vars[i - t.k]; };
    auto has_var = [&](int b) { return members[b].back() >= t.k; };
    std::vector<Constraint> lits;
    for (int b = 0; b < blocks; ++b)
        for (size_t j = 1; j < members[b].size(); ++j)
            lits.push_back(Constraint::lit(name(members[b][0]), Rel::Eq, name(members[b][j])));
    if (c.sort == Sort::Ordered) {
        for (int b = 0; b + 1 < blocks; ++b)
            if (has_var(b) || has_var(b + 1))
                lits.push_back(Constraint::lit(name(members[b][0]), Rel::Lt, name(members[b + 1][0])));
    } else {
        for (int a = 0; a < blocks; ++a)
            for (int b = a + 1; b < blocks; ++b)
                if (has_var(a) || has_var(b))
                    lits.push_back(Constraint::lit(name(members[a][0]), Rel::Ne, name(members[b][0])));
    }
    return Constraint::conj(std::move(lits));
}

}  // namespace amu
