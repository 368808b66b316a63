#include "bigness/omega.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bigness/format.hpp"
#include "skel_builder.hpp"

namespace bigness {

std::string toString(const RankResult& r) { return r.big ? "Big(" + std::to_string(r.rank) + ")" : "Small"; }

namespace {

Nat treeDepth(const TreeRep& t) {
    if (t.isThreshold()) {
        Nat d = t.th().stem.size();
        if (!t.th().theta.empty()) d = std::max(d, t.th().theta.rbegin()->first + 1);
        return d;
    }
    std::map<const SkelNode*, Nat> memo;
    std::function<Nat(const SkelNode*)> rec = [&](const SkelNode* n) -> Nat {
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        Nat d = 0;
        if (n->tail) d = treeDepth(*n->tail);
        for (const auto& [_, c] : n->named) d = std::max(d, 1 + rec(c.get()));
        if (n->genericFrom) d = std::max(d, 1 + rec(n->generic.get()));
        return memo[n] = d;
    };
    return rec(t.root().get());
}

Nat freshValue(const TreeRep& t, const SetRep& b) { return std::max(treeBound(t), bound(b)) + 1; }

// Rank of the root of residual state (t, b). Children are required to lie in t.
RankResult residualRank(TreeRep t, SetRep b, Nat budget) {
    Nat steps = 0;
    while (true) {
        if (b.isEverything()) return RankResult::bigAt(steps);
        if (b.isEmpty()) return RankResult::small();
        if (steps > budget) throw Error(Errc::RankOverflow, "rank recursion exceeded " + std::to_string(budget));
        const Nat fresh = freshValue(t, b);
        auto c = treeChild(t, fresh);
        if (!c) return RankResult::small();
        t = *c;
        b = residual(b, {fresh});
        ++steps;
    }
}

std::string stateKey(const TreeRep& t, const SetRep& b) { return treeKey(t) + "#" + toString(b); }

}  // namespace

RankResult omegaRank(const TreeRep& t, const SetRep& b, const Str& s) {
    if (setMember(b, s)) return RankResult::bigAt(0);
    auto tr = treeResidual(t, s);
    if (!tr) return RankResult::small();
    return residualRank(*tr, residual(b, s), depth(b) + treeDepth(t) + 2);
}

BushyWitness extractWitness(const TreeRep& t, const SetRep& b, const Str& s) {
    const RankResult top = omegaRank(t, b, s);
    if (!top.big) throw Error(Errc::NotBig, "B is small above " + toString(s));
    const Nat budget = depth(b) + treeDepth(t) + 2;
    BushyWitness w;
    w.stem = s;
    std::map<std::string, std::size_t> memo;

    std::function<std::size_t(const TreeRep&, const SetRep&, Nat)> build =
        [&](const TreeRep& tr, const SetRep& br, Nat r) -> std::size_t {
        const std::string key = stateKey(tr, br);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const std::size_t id = w.nodes.size();
        w.nodes.emplace_back();
        memo[key] = id;
        if (r == 0) return id;
        const Nat fresh = freshValue(tr, br);
        const auto fc = treeChild(tr, fresh);
        const SetRep fb = residual(br, {fresh});
        const std::string freshKey = stateKey(*fc, fb);
        Nat gt = fresh;
        while (gt > 0) {
            auto c = treeChild(tr, gt - 1);
            if (!c || stateKey(*c, residual(br, {gt - 1})) != freshKey) break;
            --gt;
        }
        WitnessNode node;
        for (Nat n = 0; n < gt; ++n) {
            auto c = treeChild(tr, n);
            if (!c) continue;
            SetRep cb = residual(br, {n});
            RankResult cr = cb.isEverything() ? RankResult::bigAt(0) : residualRank(*c, cb, budget);
            if (cr.big && cr.rank < r) node.named.emplace_back(n, build(*c, cb, cr.rank));
        }
        node.generic = std::make_pair(gt, build(*fc, fb, r - 1));
        w.nodes[id] = node;
        return id;
    };

    const TreeRep tr = *treeResidual(t, s);
    w.root = build(tr, residual(b, s), top.rank);
    return w;
}

bool verifyWitness(const TreeRep& t, const SetRep& b, const BushyWitness& w) {
    if (w.root >= w.nodes.size()) return false;
    for (const auto& n : w.nodes) {
        for (const auto& [_, c] : n.named)
            if (c >= w.nodes.size()) return false;
        if (n.generic && n.generic->second >= w.nodes.size()) return false;
    }
    // acyclic
    std::vector<int> color(w.nodes.size(), 0);
    std::function<bool(std::size_t)> acyclic = [&](std::size_t id) -> bool {
        if (color[id] == 1) return false;
        if (color[id] == 2) return true;
        color[id] = 1;
        for (const auto& [_, c] : w.nodes[id].named)
            if (!acyclic(c)) return false;
        if (w.nodes[id].generic && !acyclic(w.nodes[id].generic->second)) return false;
        color[id] = 2;
        return true;
    };
    if (!acyclic(w.root)) return false;

    auto tr = treeResidual(t, w.stem);
    if (!tr) return false;
    std::set<std::string> checked;
    std::function<bool(std::size_t, const TreeRep&, const SetRep&)> check =
        [&](std::size_t id, const TreeRep& x, const SetRep& bx) -> bool {
        const std::string key = std::to_string(id) + "@" + stateKey(x, bx);
        if (!checked.insert(key).second) return true;
        const WitnessNode& n = w.nodes[id];
        if (n.isLeaf()) return bx.isEverything();
        if (!n.generic) return false;
        Nat wmax = std::max(treeBound(x), bound(bx));
        for (const auto& [k, _] : n.named) wmax = std::max(wmax, k);
        wmax = std::max(wmax, n.generic->first);
        auto visit = [&](Nat v, std::size_t cid) {
            auto c = treeChild(x, v);
            return c && check(cid, *c, residual(bx, {v}));
        };
        for (const auto& [k, cid] : n.named)
            if (!visit(k, cid)) return false;
        for (Nat v = n.generic->first; v <= wmax + 1; ++v) {
            bool named = std::any_of(n.named.begin(), n.named.end(), [&](const auto& e) { return e.first == v; });
            if (!named && !visit(v, n.generic->second)) return false;
        }
        return true;
    };
    return check(w.root, *tr, residual(b, w.stem));
}

SkelPtr witnessSkeleton(const BushyWitness& w, const std::function<std::optional<TreeRep>(const Str&)>& tail) {
    std::map<std::size_t, SkelPtr> memo;
    std::function<SkelPtr(std::size_t, const Str&)> rec = [&](std::size_t id, const Str& at) -> SkelPtr {
        if (auto it = memo.find(id); it != memo.end()) return it->second;
        const WitnessNode& n = w.nodes[id];
        SkelPtr out;
        if (n.isLeaf()) {
            auto tl = tail(at);
            out = tl ? tailNode(*tl) : leafNode();
        } else {
            std::map<Nat, SkelPtr> named;
            for (const auto& [k, c] : n.named) named[k] = rec(c, extend(at, k));
            std::optional<Nat> gf;
            SkelPtr gen;
            if (n.generic) {
                gf = n.generic->first;
                gen = rec(n.generic->second, extend(at, n.generic->first));
            }
            out = makeNode(std::move(named), gf, gen);
        }
        return memo[id] = out;
    };
    return rec(w.root, w.stem);
}

namespace {

struct AvoidOps {
    using State = std::pair<TreeRep, SetRep>;
    Nat budget;
    std::string key(const State& s) const { return stateKey(s.first, s.second); }
    std::optional<TreeRep> terminal(const State& s) const {
        if (s.second.isEmpty()) return s.first;
        return std::nullopt;
    }
    Nat bound(const State& s) const { return std::max(treeBound(s.first), bigness::bound(s.second)); }
    std::optional<State> child(const State& s, Nat n) const {
        auto c = treeChild(s.first, n);
        if (!c) return std::nullopt;
        SetRep cb = residual(s.second, {n});
        if (cb.isEverything() || residualRank(*c, cb, budget).big) return std::nullopt;
        return State{*c, cb};
    }
};

}  // namespace

Dichotomy bigDichotomy(const TreeRep& t, const SetRep& b, const Str& s) {
    const RankResult r = omegaRank(t, b, s);
    if (r.big) {
        BushyWitness w = extractWitness(t, b, s);
        SkelPtr node = witnessSkeleton(w, [&](const Str& leaf) { return treeResidual(t, leaf); });
        for (std::size_t i = s.size(); i-- > 0;) node = makeNode({{s[i], node}});
        return {Dichotomy::Arm::LaverInto, TreeRep::graft(node), w};
    }
    auto tr = treeResidual(t, s);
    if (!tr) throw Error(Errc::TaskInapplicable, "stem is not a node of the tree");
    AvoidOps ops{depth(b) + treeDepth(t) + 2};
    SkelBuilder<AvoidOps> builder(ops);
    TreeRep avoid = simplify(TreeRep::graft(builder.build({*tr, residual(b, s)})));
    return {Dichotomy::Arm::HechlerAvoid, graftAt(s, avoid), std::nullopt};
}

}  // namespace bigness
