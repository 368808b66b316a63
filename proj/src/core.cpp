#include "bigness/core.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "bigness/format.hpp"
#include "skel_builder.hpp"

namespace bigness {

const char* errcName(Errc c) {
    switch (c) {
        case Errc::RankOverflow: return "RankOverflow";
        case Errc::NotBig: return "NotBig";
        case Errc::IncompatibleStems: return "IncompatibleStems";
        case Errc::StemMismatch: return "StemMismatch";
        case Errc::NotCentered: return "NotCentered";
        case Errc::NotAnExtension: return "NotAnExtension";
        case Errc::TaskInapplicable: return "TaskInapplicable";
        case Errc::NotAFusionSequence: return "NotAFusionSequence";
        case Errc::DivergenceForceable: return "DivergenceForceable";
        case Errc::CertificateFailure: return "CertificateFailure";
        case Errc::MalformedTrace: return "MalformedTrace";
        case Errc::Parse: return "ParseError";
    }
    return "Unknown";
}

Error::Error(Errc c, const std::string& msg) : std::runtime_error(std::string(errcName(c)) + ": " + msg), code_(c) {}

bool pointwiseLeq(const Str& a, const Str& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] > b[i]) return false;
    return true;
}

std::vector<Str> pfReduce(std::vector<Str> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::vector<Str> out;
    for (const auto& x : s) {
        bool absorbed = false;
        for (const auto& y : s)
            if (y != x && isPrefix(y, x)) { absorbed = true; break; }
        if (!absorbed) out.push_back(x);
    }
    return out;
}

Pattern exactPattern(const Str& s) {
    Pattern g;
    for (Nat v : s) g.push_back({v, false});
    return g;
}

bool matchesPrefix(const Pattern& g, const Str& s) {
    if (s.size() < g.size()) return false;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!g[i].matches(s[i])) return false;
    return true;
}

static bool entryWithin(const Entry& inner, const Entry& outer) {
    if (!outer.ge) return !inner.ge && inner.v == outer.v;
    return inner.v >= outer.v;
}

bool subsumes(const Pattern& a, const Pattern& b) {
    if (a.size() > b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!entryWithin(b[i], a[i])) return false;
    return true;
}

std::vector<Pattern> pfReduce(std::vector<Pattern> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::vector<Pattern> out;
    for (const auto& x : s) {
        bool absorbed = false;
        for (const auto& y : s)
            if (y != x && subsumes(y, x)) { absorbed = true; break; }
        if (!absorbed) out.push_back(x);
    }
    return out;
}

Nat patternBound(const Pattern& g) {
    Nat w = 0;
    for (const auto& e : g) w = std::max(w, e.v);
    return w;
}

// ---------------------------------------------------------------- SetRep

SetRep SetRep::empty() { return {}; }

SetRep SetRep::everything() {
    Atom a;
    a.kind = Atom::Kind::UpFin;
    a.gens = {Pattern{}};
    return SetRep{{a}};
}

SetRep SetRep::upFin(const std::vector<Str>& gens) {
    std::vector<Pattern> ps;
    for (const auto& g : gens) ps.push_back(exactPattern(g));
    return upFinP(ps);
}

SetRep SetRep::upFinP(const std::vector<Pattern>& gens) {
    Atom a;
    a.kind = Atom::Kind::UpFin;
    a.gens = gens;
    return canonical(SetRep{{a}});
}

SetRep SetRep::minLen(Nat k) {
    Atom a;
    a.kind = Atom::Kind::MinLen;
    a.k = k;
    return canonical(SetRep{{a}});
}

SetRep SetRep::coordGE(Nat i, Nat m) {
    Atom a;
    a.kind = Atom::Kind::CoordGE;
    a.i = i;
    a.m = m;
    return canonical(SetRep{{a}});
}

SetRep SetRep::unite(const std::vector<SetRep>& parts) {
    SetRep r;
    for (const auto& p : parts) r.atoms.insert(r.atoms.end(), p.atoms.begin(), p.atoms.end());
    return canonical(r);
}

static bool atomEverything(const Atom& a) {
    if (a.kind == Atom::Kind::MinLen) return a.k == 0;
    if (a.kind == Atom::Kind::UpFin)
        return std::any_of(a.gens.begin(), a.gens.end(), [](const Pattern& g) { return g.empty(); });
    return false;
}

bool SetRep::isEverything() const { return std::any_of(atoms.begin(), atoms.end(), atomEverything); }

static bool atomMember(const Atom& a, const Str& s) {
    switch (a.kind) {
        case Atom::Kind::UpFin:
            for (const auto& g : a.gens)
                if (matchesPrefix(g, s)) return true;
            return false;
        case Atom::Kind::MinLen: return s.size() >= a.k;
        case Atom::Kind::CoordGE: return s.size() > a.i && s[a.i] >= a.m;
    }
    return false;
}

bool setMember(const SetRep& b, const Str& s) {
    for (const auto& a : b.atoms)
        if (atomMember(a, s)) return true;
    return false;
}

SetRep canonical(const SetRep& b) {
    if (b.isEverything()) return SetRep::everything();
    std::vector<Pattern> gens;
    std::optional<Nat> minK;
    std::map<Nat, Nat> coord;
    for (const auto& a : b.atoms) {
        switch (a.kind) {
            case Atom::Kind::UpFin: gens.insert(gens.end(), a.gens.begin(), a.gens.end()); break;
            case Atom::Kind::MinLen: minK = minK ? std::min(*minK, a.k) : a.k; break;
            case Atom::Kind::CoordGE:
                if (a.m == 0) {
                    minK = minK ? std::min(*minK, a.i + 1) : a.i + 1;
                } else {
                    auto it = coord.find(a.i);
                    coord[a.i] = it == coord.end() ? a.m : std::min(it->second, a.m);
                }
                break;
        }
    }
    std::vector<Pattern> kept;
    for (auto& g : pfReduce(gens)) {
        if (minK && g.size() >= *minK) continue;
        bool covered = false;
        for (const auto& [i, m] : coord)
            if (g.size() > i && g[i].v >= m) { covered = true; break; }
        if (!covered) kept.push_back(g);
    }
    SetRep out;
    if (!kept.empty()) {
        Atom a;
        a.kind = Atom::Kind::UpFin;
        a.gens = kept;
        out.atoms.push_back(a);
    }
    if (minK) {
        Atom a;
        a.kind = Atom::Kind::MinLen;
        a.k = *minK;
        out.atoms.push_back(a);
    }
    for (const auto& [i, m] : coord) {
        if (minK && i + 1 >= *minK) continue;
        Atom a;
        a.kind = Atom::Kind::CoordGE;
        a.i = i;
        a.m = m;
        out.atoms.push_back(a);
    }
    return out;
}

SetRep residual(const SetRep& b, const Str& s) {
    SetRep out;
    for (const auto& a : b.atoms) {
        switch (a.kind) {
            case Atom::Kind::UpFin: {
                Atom r;
                r.kind = Atom::Kind::UpFin;
                bool hit = false;
                for (const auto& g : a.gens) {
                    if (matchesPrefix(g, s)) { hit = true; break; }
                    bool agrees = true;
                    for (std::size_t i = 0; i < s.size(); ++i)
                        if (!g[i].matches(s[i])) { agrees = false; break; }
                    if (agrees) r.gens.emplace_back(g.begin() + static_cast<std::ptrdiff_t>(s.size()), g.end());
                }
                if (hit) return SetRep::everything();
                if (!r.gens.empty()) out.atoms.push_back(r);
                break;
            }
            case Atom::Kind::MinLen: {
                if (a.k <= s.size()) return SetRep::everything();
                Atom r = a;
                r.k = a.k - s.size();
                out.atoms.push_back(r);
                break;
            }
            case Atom::Kind::CoordGE: {
                if (a.i < s.size()) {
                    if (s[a.i] >= a.m) return SetRep::everything();
                } else {
                    Atom r = a;
                    r.i = a.i - s.size();
                    out.atoms.push_back(r);
                }
                break;
            }
        }
    }
    return canonical(out);
}

Nat depth(const SetRep& b) {
    Nat d = 0;
    for (const auto& a : b.atoms) {
        switch (a.kind) {
            case Atom::Kind::UpFin:
                for (const auto& g : a.gens) d = std::max<Nat>(d, g.size());
                break;
            case Atom::Kind::MinLen: d = std::max(d, a.k); break;
            case Atom::Kind::CoordGE: d = std::max(d, a.i + 1); break;
        }
    }
    return d;
}

Nat bound(const SetRep& b) {
    Nat w = 0;
    for (const auto& a : b.atoms) {
        if (a.kind == Atom::Kind::UpFin)
            for (const auto& g : a.gens) w = std::max(w, patternBound(g));
        if (a.kind == Atom::Kind::CoordGE) w = std::max(w, a.m);
    }
    return w;
}

static void forEachString(std::size_t maxLen, Nat maxEntry, const std::function<bool(const Str&)>& f) {
    Str cur;
    std::function<bool()> rec = [&]() -> bool {
        if (!f(cur)) return false;
        if (cur.size() == maxLen) return true;
        for (Nat n = 0; n <= maxEntry; ++n) {
            cur.push_back(n);
            bool ok = rec();
            cur.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    rec();
}

bool setIncluded(const SetRep& a, const SetRep& b) {
    const std::size_t d = std::max(depth(a), depth(b));
    const Nat w = std::max(bound(a), bound(b)) + 1;
    bool ok = true;
    forEachString(d, w, [&](const Str& s) {
        if (setMember(a, s) && !setMember(b, s)) ok = false;
        return ok;
    });
    return ok;
}

// ---------------------------------------------------------------- Spectrum

bool Spectrum::at(Nat n) const {
    if (auto it = exceptions.find(n); it != exceptions.end()) return it->second;
    bool v = false;
    for (const auto& [t, b] : steps) {
        if (t > n) break;
        v = b;
    }
    return v;
}

Spectrum Spectrum::fromValues(const std::vector<bool>& vals) {
    Spectrum sp;
    if (vals.empty()) {
        sp.steps = {{0, false}};
        return sp;
    }
    const bool tailV = vals.back();
    std::size_t t = vals.size() - 1;
    while (t > 0 && vals[t - 1] == tailV) --t;
    if (!tailV) {
        sp.steps = {{0, false}};
        for (std::size_t n = 0; n < vals.size(); ++n)
            if (vals[n]) sp.exceptions[n] = true;
        return sp;
    }
    if (t == 0) {
        sp.steps = {{0, true}};
    } else {
        sp.steps = {{0, false}, {t, true}};
    }
    for (std::size_t n = 0; n < t; ++n)
        if (vals[n]) sp.exceptions[n] = true;
    return sp;
}

Spectrum childSpectrum(const SetRep& b, const Str& s) {
    const Nat w = bound(b);
    std::vector<bool> vals;
    for (Nat n = 0; n <= w + 1; ++n) vals.push_back(setMember(b, extend(s, n)));
    return Spectrum::fromValues(vals);
}

// ---------------------------------------------------------------- TreeRep

static std::map<Nat, Nat> normalizeTheta(std::map<Nat, Nat> th) {
    for (auto it = th.begin(); it != th.end();) {
        if (it->second == 0) it = th.erase(it);
        else ++it;
    }
    return th;
}

static std::map<Nat, Nat> shiftTheta(const std::map<Nat, Nat>& th, Nat by, bool up) {
    std::map<Nat, Nat> out;
    for (const auto& [i, v] : th) {
        if (up) out[i + by] = v;
        else if (i >= by) out[i - by] = v;
    }
    return out;
}

static Nat thetaAt(const std::map<Nat, Nat>& th, Nat i) {
    auto it = th.find(i);
    return it == th.end() ? 0 : it->second;
}

TreeRep TreeRep::full() { return threshold({}, {}); }

TreeRep TreeRep::threshold(Str stem, std::map<Nat, Nat> theta) {
    // positions inside the stem carry no constraint
    std::map<Nat, Nat> th;
    for (const auto& [i, v] : theta)
        if (i >= stem.size() && v > 0) th[i] = v;
    return TreeRep{Threshold{std::move(stem), std::move(th)}};
}

TreeRep TreeRep::graft(SkelPtr root) {
    if (root->tail) return *root->tail;
    return TreeRep{Graft{std::move(root)}};
}

bool TreeRep::isFull() const { return isThreshold() && th().stem.empty() && th().theta.empty(); }

SkelPtr leafNode() { return std::make_shared<const SkelNode>(); }

SkelPtr tailNode(const TreeRep& t) {
    if (!t.isThreshold()) return t.root();
    auto n = std::make_shared<SkelNode>();
    n->tail = std::make_shared<const TreeRep>(t);
    return n;
}

SkelPtr makeNode(std::map<Nat, SkelPtr> named, std::optional<Nat> genericFrom, SkelPtr generic) {
    auto n = std::make_shared<SkelNode>();
    n->named = std::move(named);
    if (genericFrom && generic) {
        n->genericFrom = genericFrom;
        n->generic = std::move(generic);
    }
    return n;
}

std::optional<TreeRep> treeChild(const TreeRep& t, Nat n) {
    if (t.isThreshold()) {
        const auto& th = t.th();
        if (!th.stem.empty()) {
            if (n != th.stem[0]) return std::nullopt;
            return TreeRep::threshold(dropFront(th.stem, 1), shiftTheta(th.theta, 1, false));
        }
        if (n < thetaAt(th.theta, 0)) return std::nullopt;
        return TreeRep::threshold({}, shiftTheta(th.theta, 1, false));
    }
    const auto& node = t.root();
    if (auto it = node->named.find(n); it != node->named.end()) return TreeRep::graft(it->second);
    if (node->genericFrom && n >= *node->genericFrom) return TreeRep::graft(node->generic);
    return std::nullopt;
}

std::optional<TreeRep> treeResidual(const TreeRep& t, const Str& s) {
    if (t.isThreshold()) {
        const auto& th = t.th();
        if (isPrefix(s, th.stem))
            return TreeRep::threshold(dropFront(th.stem, s.size()), shiftTheta(th.theta, s.size(), false));
        if (!isPrefix(th.stem, s)) return std::nullopt;
        for (std::size_t i = th.stem.size(); i < s.size(); ++i)
            if (s[i] < thetaAt(th.theta, i)) return std::nullopt;
        return TreeRep::threshold({}, shiftTheta(th.theta, s.size(), false));
    }
    std::optional<TreeRep> cur = t;
    for (std::size_t i = 0; i < s.size() && cur; ++i) {
        if (cur->isThreshold()) return treeResidual(*cur, dropFront(s, i));
        cur = treeChild(*cur, s[i]);
    }
    return cur;
}

bool treeMember(const TreeRep& t, const Str& s) { return treeResidual(t, s).has_value(); }

Nat treeBound(const TreeRep& t) {
    if (t.isThreshold()) {
        const auto& th = t.th();
        return th.stem.empty() ? thetaAt(th.theta, 0) : th.stem[0];
    }
    Nat w = 0;
    const auto& node = t.root();
    for (const auto& [k, _] : node->named) w = std::max(w, k);
    if (node->genericFrom) w = std::max(w, *node->genericFrom);
    return w;
}

Spectrum rootSpectrum(const TreeRep& t) {
    const Nat w = treeBound(t);
    std::vector<bool> vals;
    for (Nat n = 0; n <= w + 1; ++n) vals.push_back(treeChild(t, n).has_value());
    return Spectrum::fromValues(vals);
}

bool rootIsLeaf(const TreeRep& t) { return !t.isThreshold() && t.root()->isLeaf(); }

std::string treeKey(const TreeRep& t) {
    if (t.isThreshold()) return "T" + toString(t);
    return "G" + std::to_string(reinterpret_cast<std::uintptr_t>(t.root().get()));
}

Str treeStem(const TreeRep& t) {
    if (t.isThreshold()) return t.th().stem;
    Str prefix;
    const SkelNode* node = t.root().get();
    while (true) {
        if (node->tail) {
            Str rest = treeStem(*node->tail);
            prefix.insert(prefix.end(), rest.begin(), rest.end());
            return prefix;
        }
        if (node->named.size() == 1 && !node->genericFrom) {
            prefix.push_back(node->named.begin()->first);
            node = node->named.begin()->second.get();
            continue;
        }
        return prefix;
    }
}

NodeInfo treeNode(const TreeRep& t, const Str& s) {
    NodeInfo info;
    auto r = treeResidual(t, s);
    if (!r) {
        info.childSpec = Spectrum::fromValues({false});
        return info;
    }
    info.member = true;
    info.childSpec = rootSpectrum(*r);
    info.isLeaf = rootIsLeaf(*r);
    return info;
}

bool hasPath(const TreeRep& t) {
    if (t.isThreshold()) return true;
    std::map<const SkelNode*, bool> memo;
    std::function<bool(const SkelNode*)> rec = [&](const SkelNode* n) -> bool {
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        bool r = false;
        if (n->tail) r = hasPath(*n->tail);
        for (const auto& [_, c] : n->named)
            if (!r) r = rec(c.get());
        if (!r && n->genericFrom) r = rec(n->generic.get());
        memo[n] = r;
        return r;
    };
    return rec(t.root().get());
}

bool treeIncluded(const TreeRep& a, const TreeRep& b) {
    std::set<std::string> assumed;
    std::function<bool(const TreeRep&, const TreeRep&)> rec = [&](const TreeRep& x, const TreeRep& y) -> bool {
        if (y.isFull()) return true;
        const std::string key = treeKey(x) + "<=" + treeKey(y);
        if (!assumed.insert(key).second) return true;
        const Nat w = std::max(treeBound(x), treeBound(y));
        for (Nat n = 0; n <= w + 1; ++n) {
            auto xc = treeChild(x, n);
            if (!xc) continue;
            auto yc = treeChild(y, n);
            if (!yc || !rec(*xc, *yc)) return false;
        }
        return true;
    };
    return rec(a, b);
}

namespace {

struct IntersectOps {
    using State = std::pair<TreeRep, TreeRep>;
    std::string key(const State& s) const { return treeKey(s.first) + "&" + treeKey(s.second); }
    std::optional<TreeRep> terminal(const State& s) const {
        if (s.first.isFull()) return s.second;
        if (s.second.isFull()) return s.first;
        if (s.first.isThreshold() && s.second.isThreshold() && s.first.th().stem.empty() &&
            s.second.th().stem.empty()) {
            auto th = s.first.th().theta;
            for (const auto& [i, v] : s.second.th().theta) th[i] = std::max(thetaAt(th, i), v);
            return TreeRep::threshold({}, th);
        }
        return std::nullopt;
    }
    Nat bound(const State& s) const { return std::max(treeBound(s.first), treeBound(s.second)); }
    std::optional<State> child(const State& s, Nat n) const {
        auto a = treeChild(s.first, n);
        if (!a) return std::nullopt;
        auto b = treeChild(s.second, n);
        if (!b) return std::nullopt;
        return State{*a, *b};
    }
};

struct UnionOps {
    using State = std::pair<std::optional<TreeRep>, std::optional<TreeRep>>;
    std::string key(const State& s) const {
        return (s.first ? treeKey(*s.first) : "-") + "|" + (s.second ? treeKey(*s.second) : "-");
    }
    std::optional<TreeRep> terminal(const State& s) const {
        if (!s.first) return s.second;
        if (!s.second) return s.first;
        if (s.first->isFull() || s.second->isFull()) return TreeRep::full();
        return std::nullopt;
    }
    Nat bound(const State& s) const { return std::max(treeBound(*s.first), treeBound(*s.second)); }
    std::optional<State> child(const State& s, Nat n) const {
        auto a = treeChild(*s.first, n);
        auto b = treeChild(*s.second, n);
        if (!a && !b) return std::nullopt;
        return State{a, b};
    }
};

struct ConeOps {
    using State = std::pair<TreeRep, std::vector<Str>>;
    std::string key(const State& s) const {
        std::string k = treeKey(s.first) + "\\";
        for (const auto& c : s.second) k += toString(c);
        return k;
    }
    std::optional<TreeRep> terminal(const State& s) const {
        if (s.second.empty()) return s.first;
        return std::nullopt;
    }
    Nat bound(const State& s) const {
        Nat w = treeBound(s.first);
        for (const auto& c : s.second) w = std::max(w, c[0]);
        return w;
    }
    std::optional<State> child(const State& s, Nat n) const {
        auto a = treeChild(s.first, n);
        if (!a) return std::nullopt;
        std::vector<Str> cs;
        for (const auto& c : s.second) {
            if (c[0] != n) continue;
            if (c.size() == 1) return std::nullopt;
            cs.push_back(dropFront(c, 1));
        }
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        return State{*a, cs};
    }
};

}  // namespace

std::optional<TreeRep> intersectTrees(const TreeRep& a, const TreeRep& b) {
    IntersectOps ops;
    SkelBuilder<IntersectOps> builder(ops);
    return simplify(TreeRep::graft(builder.build({a, b})));
}

TreeRep unionTrees(const TreeRep& a, const TreeRep& b) {
    UnionOps ops;
    SkelBuilder<UnionOps> builder(ops);
    return simplify(TreeRep::graft(builder.build({a, b})));
}

std::optional<TreeRep> withoutCones(const TreeRep& a, const std::vector<Str>& cones) {
    std::vector<Str> cs = cones;
    for (const auto& c : cs)
        if (c.empty()) return std::nullopt;
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    ConeOps ops;
    SkelBuilder<ConeOps> builder(ops);
    return simplify(TreeRep::graft(builder.build({a, cs})));
}

TreeRep graftAt(const Str& s, const TreeRep& sub) {
    SkelPtr node = tailNode(sub);
    for (std::size_t i = s.size(); i-- > 0;) node = makeNode({{s[i], node}});
    return simplify(TreeRep::graft(node));
}

TreeRep simplify(const TreeRep& t) {
    if (t.isThreshold()) return TreeRep::threshold(t.th().stem, normalizeTheta(t.th().theta));
    std::map<const SkelNode*, TreeRep> memo;
    std::function<TreeRep(const SkelPtr&)> rec = [&](const SkelPtr& n) -> TreeRep {
        if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
        TreeRep out = TreeRep::full();
        if (n->tail) {
            out = simplify(*n->tail);
        } else {
            std::map<Nat, SkelPtr> named;
            std::map<Nat, TreeRep> namedTrees;
            for (const auto& [k, c] : n->named) {
                TreeRep ct = rec(c);
                namedTrees.emplace(k, ct);
                named[k] = tailNode(ct);
            }
            std::optional<TreeRep> genTree;
            if (n->genericFrom) genTree = rec(n->generic);
            if (named.size() == 1 && !genTree && namedTrees.begin()->second.isThreshold()) {
                const auto& [k, ct] = *namedTrees.begin();
                Str stem{k};
                stem.insert(stem.end(), ct.th().stem.begin(), ct.th().stem.end());
                out = TreeRep::threshold(stem, shiftTheta(ct.th().theta, 1, true));
            } else if (named.empty() && genTree && genTree->isThreshold() && genTree->th().stem.empty()) {
                auto th = shiftTheta(genTree->th().theta, 1, true);
                th[0] = *n->genericFrom;
                out = TreeRep::threshold({}, th);
            } else {
                out = TreeRep::graft(makeNode(named, n->genericFrom, genTree ? tailNode(*genTree) : nullptr));
            }
        }
        memo.emplace(n.get(), out);
        return out;
    };
    return rec(t.root());
}

bool bushyAboveStem(const TreeRep& t) {
    auto r = treeResidual(t, treeStem(t));
    if (!r) return false;
    std::set<std::string> seen;
    std::function<bool(const TreeRep&)> rec = [&](const TreeRep& x) -> bool {
        if (x.isThreshold()) return x.th().stem.empty();
        if (!seen.insert(treeKey(x)).second) return true;
        const auto& node = x.root();
        if (node->isLeaf()) return true;
        if (!node->genericFrom) return false;
        for (const auto& [_, c] : node->named)
            if (!rec(TreeRep::graft(c))) return false;
        return rec(TreeRep::graft(node->generic));
    };
    return rec(*r);
}

std::vector<Str> enumerateTree(const TreeRep& t, std::size_t d, Nat maxEntry) {
    std::vector<Str> out;
    Str cur;
    std::function<void(const TreeRep&)> rec = [&](const TreeRep& x) {
        out.push_back(cur);
        if (cur.size() == d) return;
        for (Nat n = 0; n <= maxEntry; ++n) {
            auto c = treeChild(x, n);
            if (!c) continue;
            cur.push_back(n);
            rec(*c);
            cur.pop_back();
        }
    };
    rec(t);
    return out;
}

SetRep tPlusComplement(const std::vector<Str>& finiteTree) {
    if (finiteTree.empty()) return SetRep::everything();
    std::size_t d = 0;
    Nat maxE = 0;
    for (const auto& s : finiteTree) {
        d = std::max(d, s.size());
        for (Nat v : s) maxE = std::max(maxE, v);
    }
    std::vector<Str> outside;
    forEachString(d, maxE + 1, [&](const Str& s) {
        bool dominated = false;
        for (const auto& t : finiteTree)
            if (t.size() == s.size() && pointwiseLeq(t, s)) { dominated = true; break; }
        if (!dominated) outside.push_back(s);
        return true;
    });
    return SetRep::unite({SetRep::upFin(pfReduce(outside)), SetRep::minLen(d + 1)});
}

Str commonBranch(const TreeRep& t, const TreeRep& s, std::size_t depth) {
    const Str st = treeStem(t);
    const Str ss = treeStem(s);
    if (!compatible(st, ss)) throw Error(Errc::IncompatibleStems, toString(st) + " vs " + toString(ss));
    Str cur = st.size() >= ss.size() ? st : ss;
    if (depth <= cur.size()) return Str(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(depth));
    auto a = treeResidual(t, cur);
    auto b = treeResidual(s, cur);
    if (!a || !b) throw Error(Errc::IncompatibleStems, "longer stem leaves the other tree");
    while (cur.size() < depth) {
        const Nat w = std::max(treeBound(*a), treeBound(*b));
        bool found = false;
        for (Nat n = 0; n <= w + 1 && !found; ++n) {
            auto ac = treeChild(*a, n);
            auto bc = treeChild(*b, n);
            if (ac && bc) {
                cur.push_back(n);
                a = ac;
                b = bc;
                found = true;
            }
        }
        if (!found) throw Error(Errc::IncompatibleStems, "no common child above " + toString(cur));
    }
    return cur;
}

}  // namespace bigness
