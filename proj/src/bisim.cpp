#include "amu/bisim.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

#include "amu/checker.hpp"

namespace amu {

std::string BisimKind::str() const { return std::string(mode == Mode::Stack ? "stack" : "full") + "(" + std::to_string(k) + ")"; }

namespace {

std::vector<int> range(int from, int count) {
    std::vector<int> v;
    for (int i = 0; i < count; ++i) v.push_back(from + i);
    return v;
}

std::vector<int> cat(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Canonical orbit (under all atom automorphisms) of <pred(x), a> for a
// configuration orbit: tag, type over (constants, x args, a).
class Legality {
public:
    explicit Legality(const KripkeModel& m) : m_(m), s_(m.ctx->sort), k_(m.ctx->size()) {
        for (auto& p : m.sat.pairs()) by_tag_[p.ltag].push_back(&p);
    }

    int key(int tag, int r, const Type& t) {
        int mlen = t.nvars() - r;
        std::vector<std::pair<int, std::vector<int>>> preds;
        auto it = by_tag_.find(tag);
        if (it != by_tag_.end()) {
            Type st = select(s_, t, range(k_, r));
            for (const PairOrbit* p : it->second) {
                if (!(p->left(s_).type == st)) continue;
                std::vector<int> labs;
                for (int j = p->larity; j < p->type.nvars(); ++j) {
                    int b = p->type.var(j), found = -1;
                    for (int i = 0; i < k_ && found < 0; ++i)
                        if (p->type.lab[i] == b) found = t.lab[i];
                    for (int i = 0; i < r && found < 0; ++i)
                        if (p->type.var(i) == b) found = t.lab[k_ + i];
                    if (found < 0) throw InputError("bisimulation needs finitely many predicates at every state");
                    labs.push_back(found);
                }
                preds.emplace_back(p->rtag, labs);
            }
        }
        std::vector<int> a;
        for (int i = 0; i < mlen; ++i) a.push_back(t.lab[k_ + r + i]);
        std::vector<int> enc = canon(a, preds);
        auto [pos, fresh] = ids_.emplace(enc, static_cast<int>(ids_.size()));
        return pos->second;
    }

private:
    const KripkeModel& m_;
    Sort s_;
    int k_;
    std::map<int, std::vector<const PairOrbit*>> by_tag_;
    std::map<std::vector<int>, int> ids_;

    static std::vector<int> encode(const std::vector<int>& a, const std::vector<std::pair<int, std::vector<int>>>& preds,
                                   const std::map<int, int>& rn) {
        std::vector<int> head{static_cast<int>(a.size())};
        for (int x : a) head.push_back(rn.at(x));
        std::vector<std::vector<int>> ps;
        for (auto& [tag, labs] : preds) {
            std::vector<int> e{tag, static_cast<int>(labs.size())};
            for (int x : labs) e.push_back(rn.at(x));
            ps.push_back(e);
        }
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        for (auto& e : ps) head.insert(head.end(), e.begin(), e.end());
        return head;
    }

    std::vector<int> canon(const std::vector<int>& a, const std::vector<std::pair<int, std::vector<int>>>& preds) {
        std::map<int, int> rn;
        if (s_ == Sort::Ordered) {
            std::vector<int> all(a);
            for (auto& p : preds) all.insert(all.end(), p.second.begin(), p.second.end());
            std::sort(all.begin(), all.end());
            all.erase(std::unique(all.begin(), all.end()), all.end());
            for (size_t i = 0; i < all.size(); ++i) rn[all[i]] = static_cast<int>(i);
            return encode(a, preds, rn);
        }
        for (int x : a)
            if (!rn.count(x)) rn.emplace(x, static_cast<int>(rn.size()));
        std::vector<int> rest;
        for (auto& p : preds)
            for (int x : p.second)
                if (!rn.count(x) && std::find(rest.begin(), rest.end(), x) == rest.end()) rest.push_back(x);
        if (rest.size() > 7) throw InputError("bisimulation: too many predicate atoms at one state");
        std::sort(rest.begin(), rest.end());
        std::vector<int> best;
        int base = static_cast<int>(rn.size());
        do {
            std::map<int, int> r2 = rn;
            for (size_t i = 0; i < rest.size(); ++i) r2[rest[i]] = base + static_cast<int>(i);
            std::vector<int> e = encode(a, preds, r2);
            if (best.empty() || e < best) best = e;
        } while (std::next_permutation(rest.begin(), rest.end()));
        return best;
    }
};

// Full games only need duplicate-free tuples, increasing for ordered atoms:
// a replacement can permute or copy entries and forces the same on the other side.
bool fresh_ok(Sort s, const Type& t, int from) {
    int last = static_cast<int>(t.lab.size()) - 1;
    for (int i = from; i < last; ++i)
        if (t.lab[i] == t.lab[last] || (s == Sort::Ordered && t.lab[i] > t.lab[last])) return false;
    return true;
}

// Extensions of t by l variables forming a canonical tuple together with
// the variables already at positions >= from.
void extend_canonical(Sort s, const Type& t, int from, int l, const std::function<void(const Type&)>& f) {
    if (l == 0) {
        f(t);
        return;
    }
    extend(s, t, 1, [&](const Type& u) {
        if (fresh_ok(s, u, from)) extend_canonical(s, u, from, l - 1, f);
    });
}

// Pattern of a key sequence under all automorphisms, 3 bits per entry above
// two 3-bit length fields. Needs mlen, l <= 4.
int code_of(Sort s, const int64_t* keys, int mlen, int l) {
    int n = mlen + l, code = 0;
    for (int i = 0; i < n; ++i) {
        int r = 0;
        if (s == Sort::Ordered) {
            for (int j = 0; j < n; ++j)
                if (keys[j] < keys[i] && std::find(keys, keys + j, keys[j]) == keys + j) ++r;
        } else {
            int j = 0;
            while (keys[j] != keys[i]) ++j;
            for (int q = 0; q < j; ++q)
                if (std::find(keys, keys + q, keys[q]) == keys + q) ++r;
        }
        code = code * 8 + r;
    }
    return (code << 6) | (mlen << 3) | l;
}

// Full-automorphism pattern of the selected positions of a type.
std::vector<int> pattern(Sort s, const Type& t, const std::vector<int>& pos) {
    std::vector<int> keys;
    for (int p : pos) keys.push_back(t.lab[p]);
    Type n = normalize(s, 0, keys);
    return std::vector<int>(n.lab.begin(), n.lab.end());
}

struct SigHash {
    size_t operator()(const std::vector<uint64_t>& v) const {
        uint64_t h = 1469598103934665603ull;
        for (uint64_t x : v) h = (h ^ x) * 1099511628211ull;
        return static_cast<size_t>(h ^ (h >> 31));
    }
};

class Configs {
public:
    Configs(const KripkeModel& m, BisimKind kind) : m_(m), s_(m.ctx->sort), k_(m.ctx->size()), kind_(kind), leg_(m) {
        if (m.orbit_infinite) throw InputError("model is flagged orbit-infinite");
        if (kind.k < 0) throw InputError("bisimulation needs k >= 0");
        if (kind.mode == BisimKind::Mode::Full && kind.k > 4) throw InputError("full bisimulation supports k <= 4");
        for (auto& o : m.states.orbits()) {
            arity_[o.tag] = o.arity();
            for (int j = 0; j <= kind.k; ++j) {
                auto add = [&](const Type& t) { id(Orbit{o.tag, t}); };
                if (kind.mode == BisimKind::Mode::Stack)
                    extend(s_, o.type, j, add);
                else
                    extend_canonical(s_, o.type, k_ + o.arity(), j, add);
            }
        }
        int n = size();
        succ_.assign(n, {});
        for (auto& p : m.trans.pairs()) {
            int lx = p.larity, ly = p.rarity();
            for (int j = 0; j <= kind.k; ++j) {
                std::vector<int> lp = cat(range(k_, lx), range(k_ + lx + ly, j));
                std::vector<int> rp = cat(range(k_ + lx, ly), range(k_ + lx + ly, j));
                auto add = [&](const Type& t) {
                    succ_[find(Orbit{p.ltag, select(s_, t, lp)})].push_back(find(Orbit{p.rtag, select(s_, t, rp)}));
                };
                if (kind.mode == BisimKind::Mode::Stack)
                    extend(s_, p.type, j, add);
                else
                    extend_canonical(s_, p.type, k_ + lx + ly, j, add);
            }
        }
        moves_.assign(n, {});
        std::map<Orbit, int> state_index;
        for (auto& o : m.states.orbits()) state_index.emplace(o, static_cast<int>(state_index.size()));
        std::unordered_map<uint64_t, int> target;  // (state orbit, l, slots) -> configuration
        for (int c = 0; c < n; ++c) {
            Orbit o = confs_[c];
            int r = arity_.at(o.tag), mlen = o.arity() - r;
            if (kind.mode == BisimKind::Mode::Stack) {
                if (mlen > 0) moves_[c].emplace_back(-1, find(Orbit{o.tag, select(s_, o.type, range(k_, r + mlen - 1))}));
                if (mlen < kind.k)
                    extend(s_, o.type, 1, [&](const Type& t) { moves_[c].emplace_back(-2, find(Orbit{o.tag, t})); });
            } else {
                replacements(c, r, mlen, state_index.at(Orbit{o.tag, select(s_, o.type, range(k_, r))}), target);
            }
            auto& mv = moves_[c];
            std::sort(mv.begin(), mv.end());
            mv.erase(std::unique(mv.begin(), mv.end()), mv.end());
        }
        for (auto& v : succ_) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    }

    int size() const { return static_cast<int>(confs_.size()); }
    int find(const Orbit& o) const {
        auto it = index_.find(o);
        if (it == index_.end()) throw InternalError("bisimulation: configuration outside the enumeration");
        return it->second;
    }

    std::vector<int> refine(BisimStats* st) {
        int n = size();
        std::vector<int> block(n);
        for (int c = 0; c < n; ++c) block[c] = leg_.key(confs_[c].tag, arity_.at(confs_[c].tag), confs_[c].type);
        long count = -1;
        int rounds = 0;
        for (;;) {
            ++rounds;
            std::unordered_map<std::vector<uint64_t>, int, SigHash> sigs;
            std::vector<int> nb(n);
            std::vector<uint64_t> sig, mv;
            for (int c = 0; c < n; ++c) {
                sig.assign(1, static_cast<uint64_t>(block[c]));
                mv.clear();
                for (int d : succ_[c]) mv.push_back(static_cast<uint64_t>(block[d]));
                std::sort(mv.begin(), mv.end());
                mv.erase(std::unique(mv.begin(), mv.end()), mv.end());
                sig.push_back(mv.size());
                sig.insert(sig.end(), mv.begin(), mv.end());
                // moves are sorted by pattern code; dedupe blocks per code
                const auto& ms = moves_[c];
                for (size_t i = 0; i < ms.size();) {
                    size_t j = i;
                    mv.clear();
                    for (; j < ms.size() && ms[j].first == ms[i].first; ++j) mv.push_back(static_cast<uint64_t>(block[ms[j].second]));
                    std::sort(mv.begin(), mv.end());
                    mv.erase(std::unique(mv.begin(), mv.end()), mv.end());
                    uint64_t hi = static_cast<uint64_t>(static_cast<uint32_t>(ms[i].first)) << 32;
                    for (uint64_t b : mv) sig.push_back(hi | b);
                    i = j;
                }
                auto [it, fresh] = sigs.emplace(sig, static_cast<int>(sigs.size()));
                nb[c] = it->second;
            }
            block = std::move(nb);
            long nc = static_cast<long>(sigs.size());
            if (nc == count) break;
            count = nc;
        }
        if (st) {
            st->moves = 0;
            for (auto& mv : moves_) st->moves += static_cast<long>(mv.size());
            st->configs = n;
            st->blocks = count;
            st->rounds = rounds;
        }
        return block;
    }

    Legality& legality() { return leg_; }
    int arity(int tag) const { return arity_.at(tag); }

private:
    const KripkeModel& m_;
    Sort s_;
    int k_;
    BisimKind kind_;
    Legality leg_;
    std::map<int, int> arity_;
    std::vector<Orbit> confs_;
    std::unordered_map<Orbit, int, OrbitHash> index_;
    std::vector<std::vector<int>> succ_;
    std::vector<std::vector<std::pair<int, int>>> moves_;  // (pattern code | -1 pop | -2 push, target)

    // Replacement moves of configuration c over (k constants, r args, m tuple).
    // New atoms are enumerated by slot: for ordered atoms 2i+1 is rank i of
    // t and 2i the gap below it; for equality atoms a block or fresh.
    void replacements(int c, int r, int mlen, int so, std::unordered_map<uint64_t, int>& target) {
        const Orbit& o = confs_[c];
        const Type& t = o.type;
        int np = k_ + r, R = 0;
        for (uint8_t x : t.lab) R = std::max(R, x + 1);
        bool ord = s_ == Sort::Ordered;
        std::vector<int> red(R + 1, -1), below(R + 1, 0);
        for (int j = np - 1; j >= 0; --j) red[t.lab[j]] = j;
        for (int v = 0; v < R; ++v) below[v + 1] = below[v] + (red[v] >= 0);
        int kmax = kind_.k;
        std::vector<int> slot(kmax);
        int64_t keys[16];
        for (int i = 0; i < mlen; ++i) keys[i] = ord ? (2 * t.lab[np + i] + 1) * 8 : t.lab[np + i];
        auto key_of = [&](int j) -> int64_t {
            int sl = slot[j];
            if (ord) return sl % 2 ? sl * 8 : sl * 8 + 1 + j;
            return sl < R ? sl : 1000 + j;
        };
        auto reduced = [&](int j) -> uint32_t {
            int sl = slot[j];
            if (ord) return sl % 2 ? (red[sl / 2] >= 0 ? 2 * below[sl / 2] + 1 : 2 * below[sl / 2 + 1]) : 2 * below[sl / 2];
            return sl < R && red[sl] >= 0 ? static_cast<uint32_t>(red[sl]) : 127u;
        };
        std::function<void(int, int)> rec = [&](int j, int l) {
            if (j == l) {
                uint64_t key = static_cast<uint64_t>(so) << 32 | static_cast<uint64_t>(l) << 28;
                uint32_t sc = 0;
                for (int i = 0; i < l; ++i) sc = sc << 7 | reduced(i);
                key |= sc;
                auto [it, fresh] = target.emplace(key, 0);
                if (fresh) {
                    std::vector<int> tk;
                    for (int i = 0; i < np; ++i) tk.push_back(ord ? (2 * t.lab[i] + 1) * 8 : t.lab[i]);
                    for (int i = 0; i < l; ++i) tk.push_back(static_cast<int>(key_of(i)));
                    it->second = find(Orbit{o.tag, normalize(s_, k_, tk)});
                }
                for (int i = 0; i < l; ++i) keys[mlen + i] = key_of(i);
                moves_[c].emplace_back(code_of(s_, keys, mlen, l), it->second);
                return;
            }
            if (ord) {
                int from = j == 0 ? 0 : slot[j - 1] + (slot[j - 1] % 2);
                for (int sl = from; sl <= 2 * R; ++sl) {
                    slot[j] = sl;
                    rec(j + 1, l);
                }
            } else {
                for (int sl = 0; sl <= R; ++sl) {
                    if (sl < R && std::find(slot.begin(), slot.begin() + j, sl) != slot.begin() + j) continue;
                    slot[j] = sl;
                    rec(j + 1, l);
                }
            }
        };
        for (int l = 0; l <= kmax; ++l) rec(0, l);
    }

    int id(const Orbit& o) {
        auto [it, fresh] = index_.emplace(o, static_cast<int>(confs_.size()));
        if (fresh) confs_.push_back(o);
        return it->second;
    }
};

}  // namespace

std::vector<int> bisim_classes(const KripkeModel& m, BisimKind kind, BisimStats* stats) {
    Configs cs(m, kind);
    std::vector<int> block = cs.refine(stats);
    std::vector<int> out;
    for (auto& o : m.states.orbits()) out.push_back(block[cs.find(o)]);
    return out;
}

bool decide_bisimilar(const KripkeModel& m, const Element& x, const Element& y, BisimKind kind) {
    Orbit ox = state_orbit(m, x), oy = state_orbit(m, y);
    Configs cs(m, kind);
    std::vector<int> block = cs.refine(nullptr);
    return block[cs.find(ox)] == block[cs.find(oy)];
}

// ---- explicit game

namespace {

class BisimGame {
public:
    BisimGame(const KripkeModel& m, BisimKind kind) : m_(m), s_(m.ctx->sort), k_(m.ctx->size()), kind_(kind), leg_(m) {
        if (m.orbit_infinite) throw InputError("model is flagged orbit-infinite");
        for (auto& o : m.states.orbits()) ar_[o.tag] = o.arity();
    }

    int pos_tag(int x, int y, int mlen) { return tag("B", x, y, mlen); }

    // Legal position orbit over (x args, a, y args, b).
    bool legal(int x, int y, int mlen, const Type& t) {
        int rx = ar_.at(x), ry = ar_.at(y);
        Type l = select(s_, t, range(k_, rx + mlen));
        Type r = select(s_, t, range(k_ + rx + mlen, ry + mlen));
        if (!m_.states.contains(Orbit{x, select(s_, t, range(k_, rx))})) return false;
        if (!m_.states.contains(Orbit{y, select(s_, t, range(k_ + rx + mlen, ry))})) return false;
        return leg_.key(x, rx, l) == leg_.key(y, ry, r);
    }

    AtomicParityGame build() {
        std::vector<Orbit> pos;
        for (auto& ox : m_.states.orbits())
            for (auto& oy : m_.states.orbits())
                for (int mlen = 0; mlen <= kind_.k; ++mlen) {
                    int rx = ar_.at(ox.tag), ry = ar_.at(oy.tag);
                    extend(s_, base_type(*m_.ctx), rx + ry + 2 * mlen, [&](const Type& t) {
                        if (legal(ox.tag, oy.tag, mlen, t)) pos.push_back(Orbit{pos_tag(ox.tag, oy.tag, mlen), t});
                    });
                }
        std::sort(pos.begin(), pos.end());
        pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
        for (auto& p : pos) {
            V_.push_back(p);
            spoiler_moves(p);
        }
        AtomicParityGame g;
        g.ctx = m_.ctx;
        g.V = OrbitSet(m_.ctx, V_);
        g.Vexists = OrbitSet(m_.ctx, E_);
        g.R = OrbitRelation(m_.ctx, R_);
        return g;
    }

    Type joint_of(const Element& x, const Element& y) {
        std::vector<Atom> all = x.args;
        all.insert(all.end(), y.args.begin(), y.args.end());
        return type_of(*m_.ctx, all);
    }

private:
    const KripkeModel& m_;
    Sort s_;
    int k_;
    BisimKind kind_;
    Legality leg_;
    std::map<int, int> ar_;
    std::vector<Orbit> V_, E_;
    std::vector<PairOrbit> R_;
    std::map<std::string, int> tags_;

    int tag(const std::string& kind, int x, int y, int mlen, int extra = -1) {
        std::string n = kind + tag_name(x) + "|" + tag_name(y) + "|" + std::to_string(mlen);
        if (extra >= 0) n += "|" + std::to_string(extra);
        return intern_tag(n);
    }

    void edge(int ltag, const Type& t, int larity, int rtag, const std::vector<int>& right) {
        R_.push_back(PairOrbit{ltag, rtag, static_cast<uint8_t>(larity), select(s_, t, cat(range(k_, larity), right))});
    }

    void dup_node(const Orbit& o) {
        V_.push_back(o);
        E_.push_back(o);
    }

    bool trans(int x, const std::vector<int>& xp, int x2, const std::vector<int>& x2p, const Type& t) {
        std::vector<int> pos = cat(xp, x2p);
        return m_.trans.contains(PairOrbit{x, x2, static_cast<uint8_t>(xp.size()), select(s_, t, pos)});
    }

    // Position p = (x, a, y, b); offsets of the four blocks inside p's type.
    void spoiler_moves(const Orbit& p) {
        const std::string& nm = tag_name(p.tag);
        int x = -1, y = -1, mlen = 0;
        decode(nm, x, y, mlen);
        int rx = ar_.at(x), ry = ar_.at(y);
        int n = rx + ry + 2 * mlen;
        int X = k_, A = k_ + rx, Y = k_ + rx + mlen, B = k_ + rx + mlen + ry;
        // model moves, either side
        for (int side = 0; side < 2; ++side) {
            int from = side == 0 ? x : y;
            int fp = side == 0 ? X : Y, fr = side == 0 ? rx : ry;
            for (auto& st : m_.states.orbits()) {
                int r2 = st.arity();
                extend(s_, p.type, r2, [&](const Type& t) {
                    if (!trans(from, range(fp, fr), st.tag, range(k_ + n, r2), t)) return;
                    // Duplicator node: (x', a, y, b) or (x, a, y', b) plus the side to answer
                    std::vector<int> layout = side == 0 ? cat(cat(range(k_ + n, r2), range(A, mlen)), cat(range(Y, ry), range(B, mlen)))
                                                        : cat(cat(range(X, rx), range(A, mlen)), cat(range(k_ + n, r2), range(B, mlen)));
                    int nx = side == 0 ? st.tag : x, ny = side == 0 ? y : st.tag;
                    int dtag = tag(side == 0 ? "ML" : "MR", nx, ny, mlen);
                    Type d = select(s_, t, layout);
                    edge(p.tag, t, n, dtag, layout);
                    dup_model_reply(Orbit{dtag, d}, nx, ny, mlen, side);
                });
            }
        }
        if (kind_.mode == BisimKind::Mode::Stack) {
            if (mlen > 0) {
                std::vector<int> layout = cat(cat(range(X, rx), range(A, mlen - 1)), cat(range(Y, ry), range(B, mlen - 1)));
                edge(p.tag, p.type, n, pos_tag(x, y, mlen - 1), layout);
            }
            if (mlen < kind_.k)
                for (int side = 0; side < 2; ++side)
                    extend(s_, p.type, 1, [&](const Type& t) {
                        std::vector<int> layout = cat(cat(range(X, rx), range(A, mlen)), cat(range(Y, ry), range(B, mlen)));
                        layout.push_back(k_ + n);
                        int dtag = tag(side == 0 ? "UL" : "UR", x, y, mlen);
                        edge(p.tag, t, n, dtag, layout);
                        dup_push_reply(Orbit{dtag, select(s_, t, layout)}, x, y, mlen, side);
                    });
        } else {
            for (int l = 0; l <= kind_.k; ++l)
                for (int side = 0; side < 2; ++side)
                    extend(s_, p.type, l, [&](const Type& t) {
                        std::vector<int> layout = cat(range(k_, n), range(k_ + n, l));
                        int dtag = tag(side == 0 ? "RL" : "RR", x, y, mlen, l);
                        edge(p.tag, t, n, dtag, layout);
                        dup_replace_reply(Orbit{dtag, select(s_, t, layout)}, x, y, mlen, l, side);
                    });
        }
    }

    void decode(const std::string& nm, int& x, int& y, int& mlen) {
        // B<x>|<y>|<m>
        size_t a = nm.find('|'), b = nm.rfind('|');
        x = intern_tag(nm.substr(1, a - 1));
        y = intern_tag(nm.substr(a + 1, b - a - 1));
        mlen = std::stoi(nm.substr(b + 1));
    }

    std::map<Orbit, bool> done_;
    bool seen(const Orbit& o) { return !done_.emplace(o, true).second; }

    // d over (x', a, y, b) [side 0] or (x, a, y', b) [side 1]; the other side answers.
    void dup_model_reply(const Orbit& d, int nx, int ny, int mlen, int side) {
        if (seen(d)) return;
        dup_node(d);
        int rx = ar_.at(nx), ry = ar_.at(ny);
        int n = rx + ry + 2 * mlen;
        int X = k_, A = k_ + rx, Y = k_ + rx + mlen, B = k_ + rx + mlen + ry;
        int from = side == 0 ? ny : nx;
        int fp = side == 0 ? Y : X, fr = side == 0 ? ry : rx;
        for (auto& st : m_.states.orbits()) {
            int r2 = st.arity();
            extend(s_, d.type, r2, [&](const Type& t) {
                if (!trans(from, range(fp, fr), st.tag, range(k_ + n, r2), t)) return;
                std::vector<int> layout = side == 0 ? cat(cat(range(X, rx), range(A, mlen)), cat(range(k_ + n, r2), range(B, mlen)))
                                                    : cat(cat(range(k_ + n, r2), range(A, mlen)), cat(range(Y, ry), range(B, mlen)));
                int px = side == 0 ? nx : st.tag, py = side == 0 ? st.tag : ny;
                Type np = select(s_, t, layout);
                if (!legal(px, py, mlen, np)) return;
                edge(d.tag, t, n, pos_tag(px, py, mlen), layout);
            });
        }
    }

    // d over (x, a c, y, b) [side 0] or (x, a, y, b d) [side 1], new atom last.
    void dup_push_reply(const Orbit& d, int x, int y, int mlen, int side) {
        if (seen(d)) return;
        dup_node(d);
        int rx = ar_.at(x), ry = ar_.at(y);
        int n = rx + ry + 2 * mlen + 1;
        int X = k_, A = k_ + rx, Y = k_ + rx + mlen, B = k_ + rx + mlen + ry, C = k_ + n - 1;
        extend(s_, d.type, 1, [&](const Type& t) {
            int D = k_ + n;
            std::vector<int> layout = side == 0 ? cat(cat(cat(range(X, rx), range(A, mlen)), std::vector<int>{C}),
                                                      cat(cat(range(Y, ry), range(B, mlen)), std::vector<int>{D}))
                                                : cat(cat(cat(range(X, rx), range(A, mlen)), std::vector<int>{D}),
                                                      cat(cat(range(Y, ry), range(B, mlen)), std::vector<int>{C}));
            Type np = select(s_, t, layout);
            if (!legal(x, y, mlen + 1, np)) return;
            edge(d.tag, t, n, pos_tag(x, y, mlen + 1), layout);
        });
    }

    // d over (x, a, y, b, c) with |c| = l chosen on `side`.
    void dup_replace_reply(const Orbit& d, int x, int y, int mlen, int l, int side) {
        if (seen(d)) return;
        dup_node(d);
        int rx = ar_.at(x), ry = ar_.at(y);
        int n = rx + ry + 2 * mlen + l;
        int X = k_, A = k_ + rx, Y = k_ + rx + mlen, B = k_ + rx + mlen + ry, C = k_ + n - l, D = k_ + n;
        extend(s_, d.type, l, [&](const Type& t) {
            // side 0: Spoiler picked c for a; Duplicator answers d for b
            std::vector<int> mine = side == 0 ? cat(range(A, mlen), range(C, l)) : cat(range(A, mlen), range(D, l));
            std::vector<int> theirs = side == 0 ? cat(range(B, mlen), range(D, l)) : cat(range(B, mlen), range(C, l));
            if (pattern(s_, t, mine) != pattern(s_, t, theirs)) return;
            std::vector<int> cl = side == 0 ? range(C, l) : range(D, l), dl = side == 0 ? range(D, l) : range(C, l);
            std::vector<int> layout = cat(cat(range(X, rx), cl), cat(range(Y, ry), dl));
            Type np = select(s_, t, layout);
            if (!legal(x, y, l, np)) return;
            edge(d.tag, t, n, pos_tag(x, y, l), layout);
        });
    }
};

}  // namespace

AtomicParityGame build_bisim_game(const KripkeModel& m, BisimKind kind) { return BisimGame(m, kind).build(); }

bool bisimilar_by_game(const KripkeModel& m, const Element& x, const Element& y, BisimKind kind) {
    state_orbit(m, x);
    state_orbit(m, y);
    BisimGame b(m, kind);
    AtomicParityGame g = b.build();
    Orbit start{b.pos_tag(orbit_of(*m.ctx, x).tag, orbit_of(*m.ctx, y).tag, 0), b.joint_of(x, y)};
    if (!g.V.contains(start)) return false;
    return winners(g).first.contains(start);
}

bool invariance_check(const KripkeModel& m, const Element& x, const Element& y, BisimKind kind,
                      const std::vector<FPtr>& formulas) {
    for (auto& f : formulas) {
        if (global_support_bound(*f) > kind.k)
            throw InputError("formula exceeds the support bound " + std::to_string(kind.k) + ": " + print_formula(*f));
        if (kind.mode == BisimKind::Mode::Stack) {
            std::function<bool(const Formula&)> vec = [&](const Formula& g) {
                for (auto& e : g.eqs)
                    if (!e.params.empty() || g.eqs.size() > 1 || vec(*e.body)) return true;
                for (auto& k : g.kids)
                    if (vec(*k)) return true;
                return false;
            };
            if (vec(*f)) throw InputError("stack bisimulation needs scalar formulas: " + print_formula(*f));
        }
    }
    for (auto& f : formulas)
        if (holds(m, x, *f) != holds(m, y, *f)) return false;
    return true;
}

}  // namespace amu
