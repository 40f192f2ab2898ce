#include "oracle.hpp"

#include <algorithm>
#include <functional>

#include "amu/checker.hpp"

namespace oracle {

long bell(int n) {
    long count = 0;
    std::vector<int> rgs(n, 0);
    std::function<void(int, int)> go = [&](int i, int blocks) {
        if (i == n) {
            ++count;
            return;
        }
        for (int b = 0; b <= blocks; ++b) {
            rgs[i] = b;
            go(i + 1, std::max(blocks, b + 1));
        }
    };
    go(0, 0);
    return count;
}

long ordered_bell(int n) {
    if (n == 0) return 1;
    long count = 0;
    std::vector<int> f(n, 0);
    for (;;) {
        std::vector<bool> hit(n, false);
        int top = 0;
        for (int v : f) hit[v] = true, top = std::max(top, v);
        bool onto = true;
        for (int v = 0; v <= top; ++v) onto = onto && hit[v];
        count += onto;
        int i = 0;
        while (i < n && ++f[i] == n) f[i++] = 0;
        if (i == n) break;
    }
    return count;
}

namespace {

using Set = std::vector<bool>;

Set attractor(const Game& g, const Set& in, const Set& target, bool player) {
    Set a = target;
    for (bool grew = true; grew;) {
        grew = false;
        for (size_t v = 0; v < in.size(); ++v) {
            if (!in[v] || a[v]) continue;
            bool any = false, all = true;
            for (int w : g.succ[v]) {
                if (!in[w]) continue;
                any = any || a[w];
                all = all && a[w];
            }
            if (g.exists[v] == player ? any : all) a[v] = true, grew = true;
        }
    }
    return a;
}

Set minus(const Set& x, const Set& y) {
    Set r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] && !y[i];
    return r;
}

// Returns Exists' region inside `in`.
Set solve(const Game& g, const Set& in) {
    int d = -1;
    for (size_t v = 0; v < in.size(); ++v)
        if (in[v]) d = std::max(d, g.rank[v]);
    if (d < 0) return Set(in.size(), false);
    bool p = d % 2 == 0;
    Set top(in.size(), false);
    for (size_t v = 0; v < in.size(); ++v) top[v] = in[v] && g.rank[v] == d;
    Set a = attractor(g, in, top, p);
    Set we = solve(g, minus(in, a));
    Set wo(in.size(), false);
    bool empty = true;
    for (size_t v = 0; v < in.size(); ++v) {
        bool inrest = in[v] && !a[v];
        wo[v] = inrest && (p ? !we[v] : we[v]);
        empty = empty && !wo[v];
    }
    if (empty) return p ? in : Set(in.size(), false);
    Set b = attractor(g, in, wo, !p);
    Set we2 = solve(g, minus(in, b));
    if (p) return we2;
    Set r = we2;
    for (size_t v = 0; v < in.size(); ++v) r[v] = r[v] || b[v];
    return r;
}

}  // namespace

std::vector<bool> zielonka(const Game& g0) {
    Game g = g0;
    int n = static_cast<int>(g.exists.size());
    int sink_e = n, sink_a = n + 1;  // won by Exists / by Forall
    g.exists.push_back(true);
    g.rank.push_back(0);
    g.succ.push_back({sink_e});
    g.exists.push_back(true);
    g.rank.push_back(1);
    g.succ.push_back({sink_a});
    for (int v = 0; v < n; ++v)
        if (g.succ[v].empty()) g.succ[v].push_back(g.exists[v] ? sink_a : sink_e);
    Set w = solve(g, Set(g.exists.size(), true));
    w.resize(n);
    return w;
}

Concrete instantiate(const amu::AtomicParityGame& g, int extra) {
    using namespace amu;
    const Context& c = *g.ctx;
    std::vector<Atom> pool = atom_pool(c, extra);
    Concrete out;
    for (auto& o : g.V.orbits()) {
        int n = o.arity();
        std::vector<size_t> idx(n, 0);
        for (;;) {
            Element e{tag_name(o.tag), {}};
            for (size_t i : idx) e.args.push_back(pool[i]);
            if (orbit_of(c, e) == o) out.nodes.push_back(e);
            int i = n;
            while (i > 0 && ++idx[i - 1] == pool.size()) idx[--i] = 0;
            if (i == 0) break;
        }
    }
    std::sort(out.nodes.begin(), out.nodes.end());
    size_t n = out.nodes.size();
    out.game.exists.resize(n);
    out.game.rank.resize(n);
    out.game.succ.resize(n);
    for (size_t v = 0; v < n; ++v) {
        Orbit ov = orbit_of(c, out.nodes[v]);
        out.game.exists[v] = g.Vexists.contains(ov);
        out.game.rank[v] = g.rank_of(ov);
        for (size_t w = 0; w < n; ++w) {
            std::vector<Atom> joint = out.nodes[v].args;
            joint.insert(joint.end(), out.nodes[w].args.begin(), out.nodes[w].args.end());
            PairOrbit p{ov.tag, intern_tag(out.nodes[w].tag), static_cast<uint8_t>(ov.arity()), type_of(c, joint)};
            if (g.R.contains(p)) out.game.succ[v].push_back(static_cast<int>(w));
        }
    }
    return out;
}

}  // namespace oracle
