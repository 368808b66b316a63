#include "bigness/density.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "bigness/format.hpp"

namespace bigness {

namespace {

// Binary extensions of base of exactly length len, lexicographic; stops when fn returns true.
bool anyExtension(const BinStr& base, std::size_t len, const std::function<bool(const BinStr&)>& fn) {
    if (base.size() > len) return false;
    const std::size_t extra = len - base.size();
    BinStr x = base;
    x.resize(len);
    for (Nat code = 0; code < (Nat{1} << extra); ++code) {
        for (std::size_t i = 0; i < extra; ++i)
            x[base.size() + i] = static_cast<std::uint8_t>((code >> (extra - 1 - i)) & 1);
        if (fn(x)) return true;
    }
    return false;
}

// Strings extending base to length len with entry i drawn from [lo(i), hi(i)], lexicographic.
bool anyStr(const Str& base, std::size_t len, const std::function<Nat(std::size_t)>& lo,
            const std::function<Nat(std::size_t)>& hi, const std::function<bool(const Str&)>& fn) {
    if (base.size() > len) return false;
    if (base.size() == len) return fn(base);
    Str x = base;
    x.push_back(0);
    const std::size_t i = base.size();
    for (Nat v = lo(i); v <= hi(i); ++v) {
        x.back() = v;
        if (anyStr(x, len, lo, hi, fn)) return true;
    }
    return false;
}

Nat maxEntry(const Str& s) {
    Nat w = 0;
    for (Nat v : s) w = std::max(w, v);
    return w;
}

bool big(const TreeRep& t, const SetRep& b, const Str& s) { return omegaRank(t, b, s).big; }

Error inapplicable(const DensityTask& task, const char* tag) {
    return Error(Errc::TaskInapplicable, taskName(task) + " does not apply to " + tag);
}

bool entriesOverlap(const Entry& a, const Entry& b) {
    if (!a.ge && !b.ge) return a.v == b.v;
    if (a.ge && b.ge) return true;
    return a.ge ? b.v >= a.v : a.v >= b.v;
}

bool patternsOverlap(const Pattern& a, const Pattern& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        if (!entriesOverlap(a[i], b[i])) return false;
    return true;
}

bool pairKeyMatches(const PairGen& g, const PairStr& x) {
    return isPrefix(g.first, x.first) && matchesPrefix(g.second, x.second);
}

Str truncate(const Str& s, std::size_t n) { return Str(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(std::min(n, s.size()))); }

const Str& stemOf(const Condition& c) {
    if (const auto* l = std::get_if<LBCond>(&c)) return l->stem;
    if (const auto* h = std::get_if<HBCond>(&c)) return h->stem;
    return std::get<ICond>(c).stm;
}

}  // namespace

// ---------------------------------------------------------------- functionals

Str BoundedFunctional::operator()(const Str& rho) const {
    Str best;
    for (const auto& [key, value] : table)
        if (matchesPrefix(key, rho) && value.size() > best.size()) best = value;
    return best;
}

std::size_t BoundedFunctional::depth() const {
    std::size_t d = 0;
    for (const auto& kv : table) d = std::max(d, kv.first.size());
    return d;
}

std::size_t BoundedFunctional::widest() const {
    std::size_t w = 0;
    for (const auto& kv : table) w = std::max(w, kv.second.size());
    return w;
}

bool validFunctional(const BoundedFunctional& phi) {
    for (const auto& [key, value] : phi.table)
        for (std::size_t m = 0; m < std::min(value.size(), phi.bound.size()); ++m)
            if (value[m] > phi.bound[m]) return false;
    for (std::size_t a = 0; a < phi.table.size(); ++a)
        for (std::size_t b = a + 1; b < phi.table.size(); ++b)
            if (patternsOverlap(phi.table[a].first, phi.table[b].first) &&
                !compatible(phi.table[a].second, phi.table[b].second))
                return false;
    return true;
}

SetRep valueSet(const BoundedFunctional& phi, std::size_t m, Nat j) {
    std::vector<Pattern> keys;
    for (const auto& [key, value] : phi.table)
        if (value.size() > m && value[m] == j) keys.push_back(key);
    return keys.empty() ? SetRep::empty() : SetRep::upFinP(keys);
}

SetRep convergenceSet(const BoundedFunctional& phi, std::size_t m) {
    std::vector<Pattern> keys;
    for (const auto& [key, value] : phi.table)
        if (value.size() > m) keys.push_back(key);
    return keys.empty() ? SetRep::empty() : SetRep::upFinP(keys);
}

SetRep extendingSet(const BoundedFunctional& phi, const Str& nu) {
    std::vector<Pattern> keys;
    for (const auto& [key, value] : phi.table)
        if (isPrefix(nu, value)) keys.push_back(key);
    return keys.empty() ? SetRep::empty() : SetRep::upFinP(keys);
}

Str PairFunctional::operator()(const PairStr& x) const {
    Str best;
    for (const auto& [key, value] : table)
        if (pairKeyMatches(key, x) && value.size() > best.size()) best = value;
    return best;
}

std::size_t PairFunctional::widest() const {
    std::size_t w = 0;
    for (const auto& kv : table) w = std::max(w, kv.second.size());
    return w;
}

bool validFunctional(const PairFunctional& phi) {
    for (std::size_t a = 0; a < phi.table.size(); ++a)
        for (std::size_t b = a + 1; b < phi.table.size(); ++b) {
            const auto& [ka, va] = phi.table[a];
            const auto& [kb, vb] = phi.table[b];
            if (compatible(ka.first, kb.first) && patternsOverlap(ka.second, kb.second) && !compatible(va, vb))
                return false;
        }
    return true;
}

PairSetRep convergenceSet(const PairFunctional& phi, std::size_t m) {
    std::vector<PairGen> keys;
    for (const auto& [key, value] : phi.table)
        if (value.size() > m) keys.push_back(key);
    return keys.empty() ? PairSetRep::empty() : PairSetRep::upFinP(keys);
}

PairSetRep extendingSet(const PairFunctional& phi, const Str& nu) {
    std::vector<PairGen> keys;
    for (const auto& [key, value] : phi.table)
        if (isPrefix(nu, value)) keys.push_back(key);
    return keys.empty() ? PairSetRep::empty() : PairSetRep::upFinP(keys);
}

// ---------------------------------------------------------------- fusion

std::set<Str> pSet(const TreeRep& t, std::size_t i) {
    std::set<Str> P{treeStem(t)};
    for (std::size_t k = 0; k < i; ++k) {
        std::set<Str> next = P;
        for (const auto& s : P) {
            auto r = treeResidual(t, s);
            if (!r) continue;
            // past the bound all children look alike, so |P| further candidates suffice
            const Nat limit = treeBound(*r) + 2 + P.size();
            for (Nat n = 0; n <= limit; ++n) {
                if (!treeChild(*r, n)) continue;
                Str c = extend(s, n);
                if (P.count(c)) continue;
                next.insert(std::move(c));
                break;
            }
        }
        P = std::move(next);
    }
    return P;
}

bool fusionStep(const TreeRep& next, const TreeRep& prev, std::size_t i) {
    return treeIncluded(next, prev) && pSet(next, i) == pSet(prev, i);
}

TreeRep fuse(const std::vector<TreeRep>& seq) {
    if (seq.empty()) throw Error(Errc::NotAFusionSequence, "empty sequence");
    for (std::size_t k = 0; k < seq.size(); ++k)
        if (!bushyAboveStem(seq[k]))
            throw Error(Errc::NotAFusionSequence, "T_" + std::to_string(k) + " is not bushy above its stem");
    for (std::size_t k = 0; k + 1 < seq.size(); ++k)
        if (!fusionStep(seq[k + 1], seq[k], k))
            throw Error(Errc::NotAFusionSequence,
                        "T_" + std::to_string(k + 1) + " is not below T_" + std::to_string(k) + " at level " + std::to_string(k));
    TreeRep acc = seq.front();
    for (std::size_t k = 1; k < seq.size(); ++k) {
        auto both = intersectTrees(acc, seq[k]);
        if (!both) throw Error(Errc::NotAFusionSequence, "empty intersection");
        acc = *both;
    }
    return simplify(acc);
}

// ---------------------------------------------------------------- naming

const char* forcingTag(const Condition& c) {
    switch (c.index()) {
        case 0: return "LB";
        case 1: return "HB";
        default: return "IT";
    }
}

std::string taskName(const DensityTask& t) {
    static const char* names[] = {"ExtendStem", "Dominate", "DominateOver", "MeetOpen",
                                  "MeetPi02",   "TraceTask", "SchnorrCapture", "CohenDense"};
    return names[t.index()];
}

bool validCondition(const Condition& c) {
    return std::visit([](const auto& x) { return validateCondition(x); }, c);
}

bool extendsCond(const Condition& p, const Condition& q) {
    if (p.index() != q.index()) return false;
    return std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            return extendsQ(a, std::get<T>(q));
        },
        p);
}

std::string toString(const Condition& c) {
    return std::visit([](const auto& x) { return toString(x); }, c);
}

std::string prefixString(const Condition& c) {
    if (const auto* i = std::get_if<ICond>(&c)) return toString(PairStr{i->mindom, i->stm});
    return toString(stemOf(c));
}

// ---------------------------------------------------------------- 𝕃ᴮ

namespace {

TreeRep rerootedAt(const TreeRep& t, const Str& tau) { return graftAt(tau, *treeResidual(t, tau)); }

// T restricted above tau to the part not passing through the other P_i nodes above tau.
TreeRep localTree(const TreeRep& t, const std::set<Str>& P, const Str& tau) {
    std::vector<Str> cones;
    for (const auto& x : P)
        if (x.size() > tau.size() && isPrefix(tau, x)) cones.push_back(dropFront(x, tau.size()));
    auto rel = treeResidual(t, tau);
    if (!cones.empty()) rel = withoutCones(*rel, cones);
    return graftAt(tau, *rel);
}

// The witness for b above tau, kept whole beyond its leaves.
TreeRep enterTree(const TreeRep& t, const SetRep& b, const Str& tau) {
    auto w = extractWitness(t, b, tau);
    auto skel = witnessSkeleton(w, [&](const Str& leaf) { return treeResidual(t, leaf); });
    return graftAt(tau, TreeRep::graft(skel));
}

Nat lbHorizon(const LBCond& p, std::initializer_list<const SetRep*> sets) {
    Nat e = std::max(maxEntry(p.stem), bound(p.bad));
    for (const auto* s : sets) e = std::max(e, bound(*s));
    if (auto r = treeResidual(p.tree, p.stem)) e = std::max(e, treeBound(*r));
    return e + 2;
}

struct Layer {
    std::string arm;
    Route route;
    TreeRep piece;
};

MeetResult lbExtend(const LBCond& p, Nat m) {
    Str s = p.stem;
    while (s.size() < m) {
        auto r = treeResidual(p.tree, s);
        const Nat limit = std::max(treeBound(*r), bound(p.bad)) + 1;
        bool found = false;
        for (Nat n = 0; n <= limit && !found; ++n) {
            if (!treeChild(*r, n)) continue;
            Str c = extend(s, n);
            if (!big(p.tree, p.bad, c)) {
                s = std::move(c);
                found = true;
            }
        }
        if (!found) throw Error(Errc::TaskInapplicable, "no child of " + toString(s) + " outside cl(bad)");
    }
    Evidence ev;
    ev.arm = "extend";
    ev.walk = {s};
    return {LBCond{rerootedAt(p.tree, s), p.bad, s}, ev};
}

MeetResult lbDominate(const LBCond& p, const Str& h) {
    std::map<Nat, Nat> theta;
    for (std::size_t m = p.stem.size(); m < h.size(); ++m) theta[m] = h[m] + 1;
    auto t = intersectTrees(p.tree, TreeRep::threshold(p.stem, theta));
    if (!t) throw Error(Errc::TaskInapplicable, "domination empties the tree");
    Evidence ev;
    ev.arm = "dominate";
    ev.exploreDepth = std::max(h.size(), p.stem.size()) + 1;
    ev.exploreEntry = maxEntry(h) + 2;
    return {LBCond{simplify(*t), p.bad, p.stem}, ev};
}

MeetResult lbMeetOpen(const LBCond& p, const SetRep& a) {
    Evidence ev;
    if (big(p.tree, a, p.stem)) {
        ev.arm = "enter";
        ev.exploreDepth = std::max<Nat>(p.stem.size(), depth(a));
        ev.exploreEntry = lbHorizon(p, {&a});
        return {LBCond{enterTree(p.tree, a, p.stem), p.bad, p.stem}, ev};
    }
    ev.arm = "avoid";
    return {LBCond{p.tree, SetRep::unite({p.bad, a}), p.stem}, ev};
}

// One fusion layer: each τ ∈ P_i(T) is routed to bad, to the first big candidate set, or the
// layer stops and returns the local tree at τ for the avoid/diverge arm.
struct LayerResult {
    std::optional<TreeRep> next;
    std::vector<Route> routes;
    std::optional<std::pair<Str, TreeRep>> stuck;
};

LayerResult fusionLayer(const TreeRep& t, const SetRep& bad, std::size_t i,
                        const std::vector<std::pair<Nat, SetRep>>& candidates, const std::string& candArm) {
    LayerResult out;
    const auto P = pSet(t, i);
    for (const auto& tau : P) {
        const TreeRep local = localTree(t, P, tau);
        std::optional<TreeRep> piece;
        if (big(local, bad, tau)) {
            piece = enterTree(local, bad, tau);
            out.routes.push_back({i, tau, "bad", 0});
        } else {
            for (const auto& [label, set] : candidates) {
                if (!big(local, set, tau)) continue;
                piece = enterTree(local, set, tau);
                out.routes.push_back({i, tau, candArm, label});
                break;
            }
        }
        if (!piece) {
            out.stuck = std::make_pair(tau, local);
            return out;
        }
        out.next = out.next ? unionTrees(*out.next, *piece) : *piece;
    }
    return out;
}

MeetResult lbMeetPi02(const LBCond& p, const MeetPi02& task) {
    TreeRep t = p.tree;
    Evidence ev;
    Nat setDepth = depth(p.bad);
    Nat entry = lbHorizon(p, {});
    for (const auto& a : task.sets) {
        setDepth = std::max(setDepth, depth(a));
        entry = std::max(entry, bound(a) + 2);
    }
    for (std::size_t i = 0; i < task.sets.size(); ++i) {
        auto layer = fusionLayer(t, p.bad, i, {{i, task.sets[i]}}, "set");
        ev.routes.insert(ev.routes.end(), layer.routes.begin(), layer.routes.end());
        if (layer.stuck) {
            ev.arm = "avoid";
            ev.index = i;
            const auto& [tau, local] = *layer.stuck;
            return {LBCond{local, SetRep::unite({p.bad, task.sets[i]}), tau}, ev};
        }
        t = *layer.next;
    }
    ev.arm = "fuse";
    ev.exploreDepth = std::max<Nat>({task.depth, p.stem.size() + task.sets.size(), setDepth});
    ev.exploreEntry = entry;
    return {LBCond{simplify(t), p.bad, p.stem}, ev};
}

MeetResult lbTrace(const LBCond& p, const TraceTask& task) {
    const auto& phi = task.phi;
    TreeRep t = p.tree;
    Evidence ev;
    Nat entry = lbHorizon(p, {});
    for (const auto& kv : phi.table) entry = std::max(entry, patternBound(kv.first) + 2);
    for (std::size_t i = 0; i < task.depth; ++i) {
        Nat jmax = 0;
        if (i < phi.bound.size()) {
            jmax = phi.bound[i];
        } else {
            for (const auto& kv : phi.table)
                if (kv.second.size() > i) jmax = std::max(jmax, kv.second[i]);
        }
        std::vector<std::pair<Nat, SetRep>> candidates;
        for (Nat j = 0; j <= jmax; ++j) candidates.push_back({j, valueSet(phi, i, j)});
        auto layer = fusionLayer(t, p.bad, i, candidates, "value");
        ev.routes.insert(ev.routes.end(), layer.routes.begin(), layer.routes.end());
        if (layer.stuck) {
            ev.arm = "diverge";
            ev.index = i;
            const auto& [tau, local] = *layer.stuck;
            return {LBCond{local, SetRep::unite({p.bad, convergenceSet(phi, i)}), tau}, ev};
        }
        std::set<Nat> F;
        for (const auto& r : layer.routes)
            if (r.arm == "value") F.insert(r.value);
        ev.trace.emplace_back(F.begin(), F.end());
        t = *layer.next;
    }
    ev.arm = "trace";
    ev.exploreDepth = std::max<Nat>({p.stem.size() + task.depth, depth(p.bad), phi.depth()});
    ev.exploreEntry = entry;
    return {LBCond{simplify(t), p.bad, p.stem}, ev};
}

MeetResult meetLB(const DensityTask& task, const LBCond& p) {
    if (const auto* x = std::get_if<ExtendStem>(&task)) return lbExtend(p, x->m);
    if (const auto* x = std::get_if<Dominate>(&task)) return lbDominate(p, x->h);
    if (const auto* x = std::get_if<MeetOpen>(&task)) return lbMeetOpen(p, x->a);
    if (const auto* x = std::get_if<MeetPi02>(&task)) return lbMeetPi02(p, *x);
    if (const auto* x = std::get_if<TraceTask>(&task)) return lbTrace(p, *x);
    throw inapplicable(task, "LB");
}

// ---------------------------------------------------------------- ℍᴮ

// Least f-respecting walk from s down the rank of a into a, staying outside cl(bad).
std::vector<Str> hbWalk(const HBCond& p, const Str& start, const SetRep& a) {
    const TreeRep full = TreeRep::full();
    std::vector<Str> walk{start};
    Str s = start;
    while (!setMember(a, s)) {
        const Nat r = omegaRank(full, a, s).rank;
        const Nat lo = lowerBoundAt(p.f, s.size());
        const Nat hi = std::max(lo, std::max(bound(a), bound(p.bad)) + 1);
        bool found = false;
        for (Nat n = lo; n <= hi && !found; ++n) {
            Str c = extend(s, n);
            auto rc = omegaRank(full, a, c);
            if (rc.big && rc.rank < r && !big(full, p.bad, c)) {
                s = std::move(c);
                found = true;
            }
        }
        if (!found) throw Error(Errc::CertificateFailure, "walk into the open set stalls at " + toString(s));
        walk.push_back(s);
    }
    return walk;
}

Nat hbLimit(const HBCond& p, std::size_t i, Nat extra) { return std::max(lowerBoundAt(p.f, i), extra); }

// Members of E_p extending the stem by at most `more` entries, shortlex, entries within `spread` of f.
std::vector<Str> hbStems(const HBCond& p, std::size_t more, Nat spread, std::size_t want) {
    std::vector<Str> out;
    const TreeRep full = TreeRep::full();
    for (std::size_t len = p.stem.size(); len <= p.stem.size() + more && out.size() < want; ++len)
        anyStr(
            p.stem, len, [&](std::size_t i) { return lowerBoundAt(p.f, i); },
            [&](std::size_t i) { return lowerBoundAt(p.f, i) + spread; },
            [&](const Str& s) {
                if (!big(full, p.bad, s)) out.push_back(s);
                return out.size() >= want;
            });
    return out;
}

std::optional<std::pair<Str, Nat>> hbDivergence(const HBCond& p, const BoundedFunctional& phi, Nat d) {
    const TreeRep full = TreeRep::full();
    for (Nat m = 0; m < d; ++m) {
        const SetRep c = convergenceSet(phi, m);
        const Nat b = std::max(bound(c), bound(p.bad)) + 1;
        // a longer witness has a prefix of this length that also works
        const std::size_t top = std::max<std::size_t>({p.stem.size(), depth(c) + 1, depth(p.bad) + 1});
        std::optional<Str> hit;
        for (std::size_t len = p.stem.size(); len <= top && !hit; ++len)
            anyStr(
                p.stem, len, [&](std::size_t i) { return lowerBoundAt(p.f, i); },
                [&](std::size_t i) { return hbLimit(p, i, b); },
                [&](const Str& s) {
                    if (big(full, p.bad, s) || big(full, c, s)) return false;
                    hit = s;
                    return true;
                });
        if (hit) return std::make_pair(*hit, m);
    }
    return std::nullopt;
}

MeetResult meetHB(const DensityTask& task, const HBCond& p) {
    const TreeRep full = TreeRep::full();
    Evidence ev;
    if (const auto* x = std::get_if<ExtendStem>(&task)) {
        Str s = p.stem;
        while (s.size() < x->m) {
            const Nat lo = lowerBoundAt(p.f, s.size());
            const Nat hi = std::max(lo, bound(p.bad) + 1);
            bool found = false;
            for (Nat n = lo; n <= hi && !found; ++n)
                if (!big(full, p.bad, extend(s, n))) {
                    s.push_back(n);
                    found = true;
                }
            if (!found) throw Error(Errc::TaskInapplicable, "no child of " + toString(s) + " outside cl(bad)");
        }
        ev.arm = "extend";
        ev.walk = {s};
        return {HBCond{s, p.f, p.bad}, ev};
    }
    if (const auto* x = std::get_if<Dominate>(&task)) {
        Str f(std::max(p.f.size(), x->h.size()), 0);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::max(lowerBoundAt(p.f, i), lowerBoundAt(x->h, i));
        ev.arm = "dominate";
        return {HBCond{p.stem, f, p.bad}, ev};
    }
    if (const auto* x = std::get_if<MeetOpen>(&task)) {
        if (big(full, x->a, p.stem)) {
            ev.arm = "enter";
            ev.walk = hbWalk(p, p.stem, x->a);
            return {HBCond{ev.walk.back(), p.f, p.bad}, ev};
        }
        ev.arm = "avoid";
        return {HBCond{p.stem, p.f, SetRep::unite({p.bad, x->a})}, ev};
    }
    if (const auto* x = std::get_if<SchnorrCapture>(&task)) {
        const auto* phi = std::get_if<BoundedFunctional>(&x->phi);
        if (!phi) throw Error(Errc::TaskInapplicable, "HB capture needs a functional on strings");
        if (auto div = hbDivergence(p, *phi, x->depth)) {
            ev.arm = "diverge";
            ev.index = div->second;
            return {HBCond{div->first, p.f, SetRep::unite({p.bad, convergenceSet(*phi, div->second)})}, ev};
        }
        ev.arm = "capture";
        ev.capture = schnorrCapture(p, *phi, x->depth, x->samples);
        return {p, ev};
    }
    throw inapplicable(task, "HB");
}

// ---------------------------------------------------------------- 𝕀

MonotoneMap zeroPadded(const Str& h) {
    return MonotoneMap::fromFunction(
        [&](const BinStr& x) {
            Str v(x.size(), 0);
            for (std::size_t i = 0; i < std::min(x.size(), h.size()); ++i) v[i] = h[i];
            return v;
        },
        1, 0, h.size() + 1);
}

MeetResult itDominateOver(const ICond& p, const MonotoneMap& phi) {
    auto fn = [&](const BinStr& x) -> Str {
        const Str fq = p.f(x);
        if (!isPrefix(p.mindom, x)) return fq;
        const Str ph = phi(x);
        const std::size_t len = std::max(p.stm.size(), std::min(ph.size(), fq.size()));
        Str out = truncate(fq, len);
        for (std::size_t i = p.stm.size(); i < out.size(); ++i) out[i] = std::max(out[i], ph[i]);
        return out;
    };
    const Nat stretch = std::max(p.f.stretch, phi.stretch);
    const Nat fill = std::max(p.f.fill, phi.fill);
    const std::size_t top = std::max({p.f.horizon() + 1, phi.horizon() + 1, p.mindom.size() + 1,
                                      stretch * (std::max(p.f.widest(), phi.widest()) + 1)});
    Evidence ev;
    ev.arm = "dominate";
    ev.exploreDepth = p.mindom.size() + 3;
    return {ICond{p.stm, MonotoneMap::fromFunction(fn, stretch, fill, top), p.mindom, p.bad}, ev};
}

std::optional<PairStr> itNextStep(const ICond& q) {
    const Str& tau = q.stm;
    const std::size_t lo = std::max(q.mindom.size(), tau.size() + 1);
    const std::size_t hi = std::max({lo, q.f.horizon() + 1, q.f.stretch * (tau.size() + 1), firstDepth(q.bad) + 1}) + 1;
    std::optional<PairStr> hit;
    for (std::size_t len = lo; len <= hi && !hit; ++len)
        anyExtension(q.mindom, len, [&](const BinStr& s) {
            const Str fx = q.f(s);
            if (fx.size() < tau.size() + 1) return false;
            for (Nat n = fx[tau.size()]; n <= fx[tau.size()] + pairBound(q.bad) + 2; ++n) {
                PairStr cand{s, extend(tau, n)};
                if (iterMembership(q, cand).inE) {
                    hit = cand;
                    return true;
                }
            }
            return false;
        });
    return hit;
}

MeetResult itExtend(const ICond& p, Nat m) {
    ICond q = p;
    Evidence ev;
    ev.arm = "extend";
    while (q.stm.size() < m) {
        auto step = itNextStep(q);
        if (!step) throw Error(Errc::TaskInapplicable, "no extension of the stem found within the search bound");
        q = extensionAt(q, *step);
        ev.walk.push_back(q.stm);
    }
    return {q, ev};
}

MeetResult itCohen(const ICond& p, const BinStr& w) {
    std::optional<BinStr> hat;
    for (std::size_t len = std::max(p.mindom.size(), w.size()); len <= p.mindom.size() + w.size() && !hat; ++len)
        anyExtension(p.mindom, len, [&](const BinStr& s) {
            if (!std::equal(w.begin(), w.end(), s.end() - static_cast<std::ptrdiff_t>(w.size()))) return false;
            hat = s;
            return true;
        });
    const BinStr sh = *hat;
    auto fn = [&](const BinStr& x) -> Str {
        if (isPrefix(p.mindom, x) && isPrefix(x, sh)) return p.stm;
        return p.f(x);
    };
    Evidence ev;
    ev.arm = "restrict";
    const std::size_t top = std::max({p.f.horizon(), sh.size(), p.f.stretch * (p.f.widest() + 1)}) + 1;
    return {ICond{p.stm, MonotoneMap::fromFunction(fn, p.f.stretch, p.f.fill, top), sh, p.bad}, ev};
}

// Pairs (σ, τ) of E_p with σ, τ extending mindom, stm by at most `more` places, in enumeration order.
std::vector<PairStr> itPairs(const ICond& p, std::size_t more, Nat spread, std::size_t want,
                             const std::function<bool(const PairStr&)>& keep) {
    std::vector<PairStr> out;
    for (std::size_t sl = p.mindom.size(); sl <= p.mindom.size() + more && out.size() < want; ++sl)
        anyExtension(p.mindom, sl, [&](const BinStr& s) {
            const Str fx = p.f(s);
            for (std::size_t tl = p.stm.size(); tl <= std::min(fx.size(), p.stm.size() + more); ++tl) {
                bool done = anyStr(
                    p.stm, tl, [&](std::size_t i) { return fx[i]; }, [&](std::size_t i) { return fx[i] + spread; },
                    [&](const Str& t) {
                        PairStr x{s, t};
                        if (iterMembership(p, x).inE && keep(x)) out.push_back(x);
                        return out.size() >= want;
                    });
                if (done) return true;
            }
            return false;
        });
    return out;
}

std::optional<std::pair<PairStr, Nat>> itDivergence(const ICond& p, const PairFunctional& phi, Nat d) {
    for (Nat m = 0; m < d; ++m) {
        const PairSetRep c = convergenceSet(phi, m);
        const Nat spread = std::max(pairBound(c), pairBound(p.bad)) + 1;
        auto hit = itPairs(p, 2, spread, 1, [&](const PairStr& x) { return !pairRank(c, x).big; });
        if (!hit.empty()) return std::make_pair(hit.front(), m);
    }
    return std::nullopt;
}

MeetResult meetIT(const DensityTask& task, const ICond& p) {
    Evidence ev;
    if (const auto* x = std::get_if<ExtendStem>(&task)) return itExtend(p, x->m);
    if (const auto* x = std::get_if<Dominate>(&task)) return itDominateOver(p, zeroPadded(x->h));
    if (const auto* x = std::get_if<DominateOver>(&task)) return itDominateOver(p, x->phi);
    if (const auto* x = std::get_if<CohenDense>(&task)) return itCohen(p, x->w);
    if (const auto* x = std::get_if<SchnorrCapture>(&task)) {
        const auto* phi = std::get_if<PairFunctional>(&x->phi);
        if (!phi) throw Error(Errc::TaskInapplicable, "IT capture needs a functional on pairs");
        if (auto div = itDivergence(p, *phi, x->depth)) {
            ev.arm = "diverge";
            ev.index = div->second;
            ICond q = extensionAt(p, div->first);
            q.bad = PairSetRep::unite({q.bad, convergenceSet(*phi, div->second)});
            return {q, ev};
        }
        ev.arm = "capture";
        ev.capture = schnorrCapture(p, *phi, x->depth, x->samples);
        return {p, ev};
    }
    throw inapplicable(task, "IT");
}

// ---------------------------------------------------------------- capture

// Longest ν with inside(ν), lexicographically least among them.
BinStr leftmostBranch(const std::function<bool(const BinStr&)>& inside, std::size_t cap) {
    std::vector<BinStr> level{BinStr{}};
    std::size_t height = 0;
    while (height < cap) {
        std::vector<BinStr> next;
        for (const auto& nu : level)
            for (std::uint8_t b : {0, 1}) {
                BinStr c = nu;
                c.push_back(b);
                if (inside(c)) next.push_back(std::move(c));
            }
        if (next.empty()) break;
        level = std::move(next);
        ++height;
    }
    return level.front();
}

Str toStr(const BinStr& b) { return Str(b.begin(), b.end()); }

// Round-robin over the distinct branches, counted down from the horizon so that the top slots
// hold every branch once. A sample is certified at the least m ≥ n whose h(m) lies in its tree.
template <class Inside, class Walk>
CaptureResult assembleCapture(const std::vector<Condition>& qs, const std::vector<BinStr>& gs, Nat d, Inside inside,
                              Walk walkInto) {
    std::vector<BinStr> distinct;
    std::size_t horizon = SIZE_MAX;
    for (const auto& g : gs) {
        horizon = std::min(horizon, g.size());
        if (std::find(distinct.begin(), distinct.end(), g) == distinct.end()) distinct.push_back(g);
    }
    CaptureResult out;
    for (std::size_t m = 1; m <= horizon; ++m) {
        const BinStr& g = distinct[(horizon - m) % distinct.size()];
        out.h[m] = BinStr(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(m));
    }
    for (Nat n = 0; n <= d; ++n) out.approx.levels.push_back(schnorrFromInterleaver(out.h, n));
    for (std::size_t k = 0; k < qs.size(); ++k)
        for (Nat n = 0; n <= d; ++n) {
            std::optional<Nat> m;
            for (Nat j = std::max<Nat>(n, 1); j <= horizon && !m; ++j)
                if (inside(k, out.h[j])) m = j;
            if (!m)
                throw Error(Errc::CertificateFailure, "horizon " + std::to_string(horizon) + " leaves level " +
                                                          std::to_string(n) + " of sample " + std::to_string(k) + " uncovered");
            out.samples.push_back({qs[k], n, walkInto(k, toStr(out.h[*m])), *m});
        }
    return out;
}

}  // namespace

CaptureResult schnorrCapture(const HBCond& p, const BoundedFunctional& phi, Nat d, Nat samples) {
    if (auto div = hbDivergence(p, phi, d))
        throw Error(Errc::DivergenceForceable,
                    "stem " + toString(div->first) + " is outside cl(C_" + std::to_string(div->second) + ")");
    const TreeRep full = TreeRep::full();
    const auto stems = hbStems(p, 1, 2, std::max<Nat>(samples, 1));
    std::vector<Condition> qs;
    std::vector<BinStr> gs;
    for (const auto& s : stems) {
        qs.push_back(HBCond{s, p.f, p.bad});
        gs.push_back(leftmostBranch([&](const BinStr& nu) { return big(full, extendingSet(phi, toStr(nu)), s); },
                                    phi.widest()));
    }
    auto inside = [&](std::size_t k, const BinStr& nu) { return big(full, extendingSet(phi, toStr(nu)), stems[k]); };
    return assembleCapture(qs, gs, d, inside, [&](std::size_t k, const Str& nu) -> Condition {
        const auto walk = hbWalk(p, stems[k], extendingSet(phi, nu));
        return HBCond{walk.back(), p.f, p.bad};
    });
}

CaptureResult schnorrCapture(const ICond& p, const PairFunctional& phi, Nat d, Nat samples) {
    if (auto div = itDivergence(p, phi, d))
        throw Error(Errc::DivergenceForceable,
                    "pair " + toString(div->first) + " is outside cl(C_" + std::to_string(div->second) + ")");
    const auto pairs = itPairs(p, 1, 2, std::max<Nat>(samples, 1), [](const PairStr&) { return true; });
    std::vector<ICond> qs;
    std::vector<Condition> conds;
    std::vector<BinStr> gs;
    for (const auto& x : pairs) {
        qs.push_back(extensionAt(p, x));
        conds.push_back(qs.back());
        gs.push_back(leftmostBranch([&](const BinStr& nu) { return pairRank(extendingSet(phi, toStr(nu)), x).big; },
                                    phi.widest()));
    }
    auto inside = [&](std::size_t k, const BinStr& nu) { return pairRank(extendingSet(phi, toStr(nu)), pairs[k]).big; };
    return assembleCapture(conds, gs, d, inside, [&](std::size_t k, const Str& nu) -> Condition {
        const ICond& q = qs[k];
        const PairSetRep v = extendingSet(phi, nu);
        const Nat spread = std::max(pairBound(v), pairBound(q.bad)) + 1;
        const std::size_t more = std::max<std::size_t>({firstDepth(v), secondDepth(v), q.f.horizon() + 1}) + 1;
        // τ of length |stm| + secondDepth(V) needs stretch times that many bits of σ
        const std::size_t reach = q.f.stretch * (q.stm.size() + secondDepth(v) + 1);
        std::optional<PairStr> hit;
        for (std::size_t sl = q.mindom.size(); sl <= std::max(q.mindom.size() + more, reach) && !hit; ++sl)
            anyExtension(q.mindom, sl, [&](const BinStr& s) {
                const Str fx = q.f(s);
                for (std::size_t tl = q.stm.size(); tl <= fx.size() && !hit; ++tl)
                    anyStr(
                        q.stm, tl, [&](std::size_t i) { return fx[i]; }, [&](std::size_t i) { return fx[i] + spread; },
                        [&](const Str& t) {
                            PairStr x{s, t};
                            if (!pairMember(v, x) || !iterMembership(q, x).inE) return false;
                            hit = x;
                            return true;
                        });
                return hit.has_value();
            });
        if (!hit) throw Error(Errc::CertificateFailure, "no extension meets V_" + toString(nu) + " within the search bound");
        return extensionAt(q, *hit);
    });
}

MeetResult meet(const DensityTask& task, const Condition& p) {
    if (const auto* l = std::get_if<LBCond>(&p)) return meetLB(task, *l);
    if (const auto* h = std::get_if<HBCond>(&p)) return meetHB(task, *h);
    return meetIT(task, std::get<ICond>(p));
}

GenericRun runGeneric(const Condition& p0, const std::vector<DensityTask>& tasks) {
    GenericRun run{{p0}, {}, p0, std::nullopt};
    for (const auto& task : tasks) {
        try {
            auto res = meet(task, run.chain.back());
            run.chain.push_back(res.q);
            run.evidence.push_back(std::move(res.evidence));
        } catch (const Error& e) {
            run.error = e;
            break;
        }
    }
    run.prefix = run.chain.back();
    return run;
}

// ---------------------------------------------------------------- replay

namespace {

std::string checkNodes(const LBCond& q, const Evidence& ev, const std::function<bool(const Str&)>& ok) {
    for (const auto& x : enumerateTree(q.tree, ev.exploreDepth, ev.exploreEntry))
        if (x.size() == ev.exploreDepth && isPrefix(q.stem, x) && !ok(x)) return "explored node " + toString(x) + " fails";
    return "";
}

std::string replayLB(const DensityTask& task, const LBCond& p, const LBCond& q, const Evidence& ev) {
    if (const auto* x = std::get_if<ExtendStem>(&task))
        return q.stem.size() >= x->m ? "" : "stem shorter than requested";
    if (const auto* x = std::get_if<Dominate>(&task)) {
        const Str& h = x->h;
        return checkNodes(q, ev, [&](const Str& s) {
            for (std::size_t i = p.stem.size(); i < std::min(s.size(), h.size()); ++i)
                if (s[i] <= h[i]) return false;
            return true;
        });
    }
    if (const auto* x = std::get_if<MeetOpen>(&task)) {
        if (ev.arm == "avoid") return setIncluded(x->a, q.bad) ? "" : "bad set does not absorb the open set";
        return checkNodes(q, ev, [&](const Str& s) { return setMember(x->a, s) || setMember(q.bad, s); });
    }
    if (const auto* x = std::get_if<MeetPi02>(&task)) {
        if (ev.arm == "avoid")
            return ev.index < x->sets.size() && setIncluded(x->sets[ev.index], q.bad) ? "" : "bad set does not absorb A_i";
        return checkNodes(q, ev, [&](const Str& s) {
            if (setMember(q.bad, s)) return true;
            return std::all_of(x->sets.begin(), x->sets.end(), [&](const SetRep& a) { return setMember(a, s); });
        });
    }
    if (const auto* x = std::get_if<TraceTask>(&task)) {
        if (ev.arm == "diverge")
            return setIncluded(convergenceSet(x->phi, ev.index), q.bad) ? "" : "bad set does not absorb C_i";
        for (std::size_t n = 0; n < ev.trace.size(); ++n)
            if (n < 64 && ev.trace[n].size() > (std::size_t{1} << n)) return "trace level too large";
        return checkNodes(q, ev, [&](const Str& s) {
            if (setMember(q.bad, s)) return true;
            const Str v = x->phi(s);
            for (std::size_t n = 0; n < ev.trace.size(); ++n)
                if (v.size() <= n || std::find(ev.trace[n].begin(), ev.trace[n].end(), v[n]) == ev.trace[n].end())
                    return false;
            return true;
        });
    }
    return "task not applicable to LB";
}

std::string replayCapture(const CaptureResult& c, const Condition& p, const std::function<Str(const Condition&)>& value) {
    for (const auto& [m, s] : c.h)
        if (s.size() != m) return "interleaver value of wrong length";
    for (const auto& l : c.approx.levels) {
        if (cylinderMeasure(l.set) != l.declared) return "declared measure differs";
        if (!(l.declared <= Dyadic(2, static_cast<unsigned>(l.n)))) return "level measure above 2^{-n+1}";
    }
    for (const auto& smp : c.samples) {
        if (!validCondition(smp.q) || !extendsCond(smp.q, p)) return "sample is not an extension";
        if (!validCondition(smp.r) || !extendsCond(smp.r, smp.q)) return "certificate is not an extension";
        auto it = c.h.find(smp.m);
        if (smp.m < smp.n || it == c.h.end()) return "certificate index out of range";
        if (!isPrefix(toStr(it->second), value(smp.r))) return "certificate value misses h(m)";
    }
    return "";
}

std::string replayHB(const DensityTask& task, const HBCond& p, const HBCond& q, const Evidence& ev) {
    if (const auto* x = std::get_if<ExtendStem>(&task))
        return q.stem.size() >= x->m ? "" : "stem shorter than requested";
    if (const auto* x = std::get_if<Dominate>(&task)) {
        for (std::size_t i = q.stem.size(); i < x->h.size(); ++i)
            if (lowerBoundAt(q.f, i) < x->h[i]) return "bound below h at " + std::to_string(i);
        return "";
    }
    if (const auto* x = std::get_if<MeetOpen>(&task)) {
        if (ev.arm == "avoid") return setIncluded(x->a, q.bad) ? "" : "bad set does not absorb the open set";
        if (ev.walk.empty() || ev.walk.front() != p.stem || ev.walk.back() != q.stem) return "walk endpoints differ";
        for (std::size_t k = 1; k < ev.walk.size(); ++k)
            if (ev.walk[k].size() != ev.walk[k - 1].size() + 1 || !isPrefix(ev.walk[k - 1], ev.walk[k])) return "walk is not a path";
        return setMember(x->a, q.stem) ? "" : "walk ends outside the open set";
    }
    if (const auto* x = std::get_if<SchnorrCapture>(&task)) {
        const auto& phi = std::get<BoundedFunctional>(x->phi);
        if (ev.arm == "diverge")
            return setIncluded(convergenceSet(phi, ev.index), q.bad) ? "" : "bad set does not absorb C_m";
        if (!ev.capture) return "capture evidence missing";
        return replayCapture(*ev.capture, p, [&](const Condition& r) { return phi(std::get<HBCond>(r).stem); });
    }
    return "task not applicable to HB";
}

std::string checkDomination(const ICond& q, const MonotoneMap& phi, std::size_t depthTo) {
    for (std::size_t len = q.mindom.size(); len <= depthTo; ++len) {
        std::string fail;
        anyExtension(q.mindom, len, [&](const BinStr& s) {
            const Str fq = q.f(s);
            const Str ph = phi(s);
            for (std::size_t i = q.stm.size(); i < std::min(fq.size(), ph.size()); ++i)
                if (fq[i] < ph[i]) {
                    fail = "f below the dominated map at " + toString(s);
                    return true;
                }
            return false;
        });
        if (!fail.empty()) return fail;
    }
    return "";
}

std::string replayIT(const DensityTask& task, const ICond& p, const ICond& q, const Evidence& ev) {
    if (const auto* x = std::get_if<ExtendStem>(&task))
        return q.stm.size() >= x->m ? "" : "stem shorter than requested";
    if (const auto* x = std::get_if<Dominate>(&task)) return checkDomination(q, zeroPadded(x->h), ev.exploreDepth);
    if (const auto* x = std::get_if<DominateOver>(&task)) return checkDomination(q, x->phi, ev.exploreDepth);
    if (const auto* x = std::get_if<CohenDense>(&task)) {
        const auto& w = x->w;
        if (!isPrefix(p.mindom, q.mindom) || q.mindom.size() < w.size() ||
            !std::equal(w.begin(), w.end(), q.mindom.end() - static_cast<std::ptrdiff_t>(w.size())))
            return "mindom does not end with w";
        return "";
    }
    if (const auto* x = std::get_if<SchnorrCapture>(&task)) {
        const auto& phi = std::get<PairFunctional>(x->phi);
        if (ev.arm == "diverge")
            return pairIncluded(convergenceSet(phi, ev.index), q.bad) ? "" : "bad set does not absorb C_m";
        if (!ev.capture) return "capture evidence missing";
        return replayCapture(*ev.capture, p, [&](const Condition& r) {
            const auto& c = std::get<ICond>(r);
            return phi(PairStr{c.mindom, c.stm});
        });
    }
    return "task not applicable to IT";
}

bool prefixAccepted(const Condition& c, const Condition& last) {
    if (const auto* l = std::get_if<LBCond>(&c)) return satisfiesPrefix(*l, std::get<LBCond>(last).stem);
    if (const auto* h = std::get_if<HBCond>(&c)) return satisfiesPrefix(*h, std::get<HBCond>(last).stem);
    const auto& i = std::get<ICond>(last);
    return satisfiesPrefix(std::get<ICond>(c), PairStr{i.mindom, i.stm});
}

}  // namespace

std::string exploreChain(const std::vector<Condition>& chain, std::size_t depthTo) {
    if (chain.empty()) return "empty chain";
    Nat e = 0;
    for (const auto& c : chain) {
        if (const auto* l = std::get_if<LBCond>(&c)) e = std::max({e, bound(l->bad), maxEntry(l->stem)});
        else if (const auto* h = std::get_if<HBCond>(&c)) e = std::max({e, bound(h->bad), maxEntry(h->f)});
        else e = std::max(e, pairBound(std::get<ICond>(c).bad));
    }
    e += 2;
    std::string fail;
    auto check = [&](const auto& x, const std::string& shown) {
        for (std::size_t k = 0; k < chain.size() && fail.empty(); ++k)
            if (!std::visit([&](const auto& c) {
                    using C = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<C, ICond>) {
                        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, PairStr>) return satisfiesPrefix(c, x);
                        return false;
                    } else {
                        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Str>) return satisfiesPrefix(c, x);
                        return false;
                    }
                }, chain[k]))
                fail = shown + " is rejected by chain element " + std::to_string(k);
    };
    const Condition& last = chain.back();
    if (const auto* l = std::get_if<LBCond>(&last)) {
        for (const auto& x : enumerateTree(l->tree, depthTo, e))
            if (fail.empty() && isPrefix(l->stem, x) && satisfiesPrefix(*l, x)) check(x, toString(x));
    } else if (const auto* h = std::get_if<HBCond>(&last)) {
        for (std::size_t len = h->stem.size(); len <= std::max(depthTo, h->stem.size()) && fail.empty(); ++len)
            anyStr(
                h->stem, len, [&](std::size_t i) { return lowerBoundAt(h->f, i); },
                [&](std::size_t i) { return lowerBoundAt(h->f, i) + e; },
                [&](const Str& x) {
                    if (satisfiesPrefix(*h, x)) check(x, toString(x));
                    return !fail.empty();
                });
    } else {
        const auto& q = std::get<ICond>(last);
        for (std::size_t len = q.mindom.size(); len <= std::max(depthTo, q.mindom.size()) && fail.empty(); ++len)
            anyExtension(q.mindom, len, [&](const BinStr& s) {
                const Str fs = q.f(s);
                for (Nat bump = 0; bump <= 1 && fs.size() >= q.stm.size(); ++bump) {
                    Str t = fs;
                    for (std::size_t i = q.stm.size(); i < t.size(); ++i) t[i] += bump;
                    const PairStr x{s, t};
                    if (satisfiesPrefix(q, x)) check(x, toString(x));
                }
                return !fail.empty();
            });
    }
    return fail;
}

std::string replayRun(const std::vector<DensityTask>& tasks, const std::vector<Condition>& chain,
                      const std::vector<Evidence>& evidence) {
    if (chain.empty()) return "empty chain";
    if (chain.size() != evidence.size() + 1 || evidence.size() > tasks.size()) return "chain and evidence sizes disagree";
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const std::string at = "step " + std::to_string(k) + ": ";
        if (!validCondition(chain[k])) return at + "invalid condition";
        if (k > 0 && !extendsCond(chain[k], chain[k - 1])) return at + "not an extension of its predecessor";
        if (!prefixAccepted(chain[k], chain.back())) return at + "prefix rejected";
    }
    for (std::size_t k = 0; k < evidence.size(); ++k) {
        const auto& p = chain[k];
        const auto& q = chain[k + 1];
        std::string msg;
        if (const auto* l = std::get_if<LBCond>(&p)) msg = replayLB(tasks[k], *l, std::get<LBCond>(q), evidence[k]);
        else if (const auto* h = std::get_if<HBCond>(&p)) msg = replayHB(tasks[k], *h, std::get<HBCond>(q), evidence[k]);
        else msg = replayIT(tasks[k], std::get<ICond>(p), std::get<ICond>(q), evidence[k]);
        if (!msg.empty()) return "task " + std::to_string(k) + " (" + taskName(tasks[k]) + "): " + msg;
    }
    return "";
}

}  // namespace bigness
