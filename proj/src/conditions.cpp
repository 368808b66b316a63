#include "bigness/conditions.hpp"

#include <algorithm>

#include "bigness/format.hpp"
#include "bigness/omega.hpp"

namespace bigness {

namespace {

void forExtensions(const BinStr& base, std::size_t len, const std::function<bool(const BinStr&)>& f) {
    if (base.size() >= len) {
        f(base);
        return;
    }
    const std::size_t extra = len - base.size();
    BinStr x = base;
    x.resize(len);
    for (Nat code = 0; code < (Nat{1} << extra); ++code) {
        for (std::size_t i = 0; i < extra; ++i) x[base.size() + i] = static_cast<std::uint8_t>((code >> (extra - 1 - i)) & 1);
        if (!f(x)) return;
    }
}

Str longestCommonPrefix(const Str& a, const Str& b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return Str(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i));
}

// Pointwise comparison on the common domain.
bool geOnCommon(const Str& a, const Str& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (a[i] < b[i]) return false;
    return true;
}

Str padTo(Str v, std::size_t len, Nat fill) {
    if (v.size() < len) v.resize(len, fill);
    return v;
}

bool closedLeavesInBad(const SkelPtr& node, Str& path, const SetRep& bad) {
    if (node->tail) {
        if (node->tail->isThreshold()) return true;
        return closedLeavesInBad(node->tail->root(), path, bad);
    }
    if (node->isLeaf()) return setMember(bad, path);
    for (const auto& [n, kid] : node->named) {
        path.push_back(n);
        bool ok = closedLeavesInBad(kid, path, bad);
        path.pop_back();
        if (!ok) return false;
    }
    if (node->genericFrom) {
        const Nat from = *node->genericFrom;
        for (Nat n = from; n <= std::max(from, bound(bad) + 1); ++n) {
            if (node->named.count(n)) continue;
            path.push_back(n);
            bool ok = closedLeavesInBad(node->generic, path, bad);
            path.pop_back();
            if (!ok) return false;
        }
    }
    return true;
}

}  // namespace

Nat lowerBoundAt(const Str& f, std::size_t i) { return i < f.size() ? f[i] : 0; }

Str MonotoneMap::operator()(const BinStr& x) const {
    Str v;
    bool exact = false;
    BinStr pre;
    for (std::size_t len = 0; len <= x.size(); ++len) {
        if (len) pre.push_back(x[len - 1]);
        if (auto it = table.find(pre); it != table.end()) {
            v = it->second;
            exact = len == x.size();
        }
    }
    if (exact) return v;
    auto it = table.upper_bound(x);
    if (it != table.end() && isPrefix(x, it->first)) return v;
    return padTo(v, x.size() / stretch, fill);
}

std::size_t MonotoneMap::horizon() const {
    std::size_t h = 0;
    for (const auto& [k, _] : table) h = std::max(h, k.size());
    return h;
}

std::size_t MonotoneMap::widest() const {
    std::size_t w = 0;
    for (const auto& [_, v] : table) w = std::max(w, v.size());
    return w;
}

MonotoneMap MonotoneMap::fromFunction(const std::function<Str(const BinStr&)>& fn, Nat stretch, Nat fill,
                                      std::size_t depth) {
    MonotoneMap m{{}, stretch, fill};
    std::vector<std::vector<BinStr>> levels(depth + 1);
    for (std::size_t len = 0; len <= depth; ++len)
        forExtensions({}, len, [&](const BinStr& x) {
            m.table[x] = fn(x);
            levels[len].push_back(x);
            return true;
        });
    // Bottom-up: every shorter string is still a key when x is examined, so dropping x only
    // changes the value at x and at strings strictly between x and the keys left above it.
    for (std::size_t len = depth + 1; len-- > 0;) {
        for (const auto& x : levels[len]) {
            auto node = m.table.extract(x);
            const Str& vx = node.mapped();
            bool ok = m(x) == vx;
            if (ok) {
                Str vParent;
                if (!x.empty()) vParent = m.table.at(BinStr(x.begin(), x.end() - 1));
                if (vParent != vx) {
                    for (auto it = m.table.upper_bound(x); it != m.table.end() && isPrefix(x, it->first); ++it)
                        if (it->first.size() >= x.size() + 2) {
                            ok = false;
                            break;
                        }
                }
            }
            if (!ok) m.table.insert(std::move(node));
        }
    }
    return m;
}

bool validMap(const MonotoneMap& f) {
    if (f.stretch == 0) return false;
    for (const auto& [k, v] : f.table)
        if (v.size() > k.size()) return false;
    const std::size_t h = f.horizon() + 1;
    bool ok = true;
    for (std::size_t len = 0; len < h && ok; ++len)
        forExtensions({}, len, [&](const BinStr& x) {
            const Str fx = f(x);
            for (std::uint8_t b : {0, 1})
                if (!isPrefix(fx, f(extend(x, b)))) ok = false;
            return ok;
        });
    return ok;
}

ICond topICond() { return {{}, MonotoneMap::pad(1, 0), {}, PairSetRep::empty()}; }

bool validateCondition(const LBCond& c) {
    if (treeStem(c.tree) != c.stem || !bushyAboveStem(c.tree)) return false;
    if (omegaRank(c.tree, c.bad, c.stem).big) return false;
    if (c.tree.isThreshold()) return true;
    Str path;
    return closedLeavesInBad(c.tree.root(), path, c.bad);
}

bool validateCondition(const HBCond& c) { return !omegaRank(TreeRep::full(), c.bad, c.stem).big; }

bool validateCondition(const ICond& c) {
    if (!validMap(c.f) || c.f(c.mindom) != c.stm) return false;
    return !pairRank(c.bad, {c.mindom, c.stm}).big;
}

bool extendsQ(const LBCond& p, const LBCond& q) {
    return isPrefix(q.stem, p.stem) && treeIncluded(p.tree, q.tree) && setIncluded(q.bad, p.bad);
}

bool extendsQ(const HBCond& p, const HBCond& q) {
    if (!isPrefix(q.stem, p.stem) || !setIncluded(q.bad, p.bad)) return false;
    for (std::size_t i = q.stem.size(); i < p.stem.size(); ++i)
        if (p.stem[i] < lowerBoundAt(q.f, i)) return false;
    for (std::size_t i = 0; i < std::max(p.f.size(), q.f.size()); ++i)
        if (lowerBoundAt(p.f, i) < lowerBoundAt(q.f, i)) return false;
    return true;
}

bool extendsQ(const ICond& p, const ICond& q) {
    if (!isPrefix(q.mindom, p.mindom) || !isPrefix(q.stm, p.stm) || !pairIncluded(q.bad, p.bad)) return false;
    // |f_p(σ)| ≤ |f_q(σ)| and f_p(σ) ≥ f_q(σ) for σ ⪰ mindom_q; past both horizons the maps are pads
    const std::size_t top = std::max({p.f.horizon(), q.f.horizon(), q.mindom.size()}) + 1;
    bool ok = true;
    for (std::size_t len = q.mindom.size(); len <= top && ok; ++len)
        forExtensions(q.mindom, len, [&](const BinStr& x) {
            const Str a = p.f(x), b = q.f(x);
            ok = a.size() <= b.size() && geOnCommon(a, b);
            if (ok && len == top) {
                const std::size_t wide = std::max(a.size(), b.size()) + 1;
                ok = geOnCommon(padTo(a, wide, p.f.fill), padTo(b, wide, q.f.fill));
            }
            return ok;
        });
    return ok && p.f.stretch >= q.f.stretch;
}

HBCond centeredMerge(const HBCond& p, const HBCond& q) {
    if (p.stem != q.stem) throw Error(Errc::NotCentered, "stems " + toString(p.stem) + " and " + toString(q.stem) + " differ");
    Str f(std::max(p.f.size(), q.f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::max(lowerBoundAt(p.f, i), lowerBoundAt(q.f, i));
    return {p.stem, f, SetRep::unite({p.bad, q.bad})};
}

ICond centeredMerge(const ICond& p, const ICond& q) {
    if (p.mindom != q.mindom || p.stm != q.stm) throw Error(Errc::NotCentered, "condition keys differ");
    const Nat s = std::max(p.f.stretch, q.f.stretch);
    const std::size_t wide = std::max(p.f.widest(), q.f.widest());
    const std::size_t depth = std::max({p.f.horizon() + 1, q.f.horizon() + 1, s * (wide + 1)});
    auto fn = [&](const BinStr& x) {
        const Str a = p.f(x), b = q.f(x);
        Str out(std::min(a.size(), b.size()));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(a[i], b[i]);
        return out;
    };
    MonotoneMap f = MonotoneMap::fromFunction(fn, s, std::max(p.f.fill, q.f.fill), depth);
    return {p.stm, f, p.mindom, PairSetRep::unite({p.bad, q.bad})};
}

IterMembership iterMembership(const ICond& p, const PairStr& pair) {
    IterMembership m;
    const auto& [sigma, tau] = pair;
    if (!isPrefix(p.mindom, sigma) || !isPrefix(p.stm, tau)) return m;
    m.inC = p.f(sigma).size() >= tau.size();
    // Past the horizon every branch has converged on |τ| entries; f(σ')↾|τ| is fixed from there on.
    const std::size_t settle = std::max({sigma.size(), p.f.horizon() + 1, p.f.stretch * tau.size()});
    bool someBelow = false;
    forExtensions(sigma, settle, [&](const BinStr& x) {
        Str v = p.f(x);
        v.resize(tau.size());
        someBelow = pointwiseLeq(v, tau);
        return !someBelow;
    });
    m.inD = !someBelow;
    m.inE = m.inC && !m.inD && !pairRank(p.bad, pair).big;
    return m;
}

ICond extensionAt(const ICond& p, const PairStr& target) {
    if (!iterMembership(p, target).inE)
        throw Error(Errc::NotAnExtension, toString(target) + " is not a possible extension");
    const auto& [sigma, tau] = target;
    auto fn = [&](const BinStr& x) -> Str {
        if (x == sigma) return tau;
        const Str fx = p.f(x);
        if (isPrefix(sigma, x)) {
            Str out = fx;
            std::copy(tau.begin(), tau.end(), out.begin());
            return out;
        }
        if (isPrefix(x, sigma)) return longestCommonPrefix(fx, tau);
        return fx;
    };
    MonotoneMap f = MonotoneMap::fromFunction(fn, p.f.stretch, p.f.fill, std::max(p.f.horizon(), sigma.size()) + 1);
    return {tau, f, sigma, p.bad};
}

HBCond extensionAt(const HBCond& p, const Str& target) {
    bool ok = isPrefix(p.stem, target);
    for (std::size_t i = p.stem.size(); ok && i < target.size(); ++i) ok = target[i] >= lowerBoundAt(p.f, i);
    if (!ok || omegaRank(TreeRep::full(), p.bad, target).big)
        throw Error(Errc::NotAnExtension, toString(target) + " is not a possible stem");
    return {target, p.f, p.bad};
}

bool satisfiesPrefix(const LBCond& c, const Str& x) {
    return compatible(x, c.stem) && treeMember(c.tree, x) && !setMember(c.bad, x);
}

bool satisfiesPrefix(const HBCond& c, const Str& x) {
    if (!compatible(x, c.stem) || setMember(c.bad, x)) return false;
    for (std::size_t i = c.stem.size(); i < x.size(); ++i)
        if (x[i] < lowerBoundAt(c.f, i)) return false;
    return true;
}

bool satisfiesPrefix(const ICond& c, const PairStr& x) {
    if (!compatible(x.first, c.mindom) || !compatible(x.second, c.stm)) return false;
    for (std::size_t a = 0; a <= x.first.size(); ++a)
        for (std::size_t b = 0; b <= x.second.size(); ++b) {
            PairStr q{BinStr(x.first.begin(), x.first.begin() + static_cast<std::ptrdiff_t>(a)),
                      Str(x.second.begin(), x.second.begin() + static_cast<std::ptrdiff_t>(b))};
            if (pairMember(c.bad, q)) return false;
        }
    if (!isPrefix(c.mindom, x.first) || !isPrefix(c.stm, x.second)) return true;
    const Str fx = c.f(x.first);
    for (std::size_t i = c.stm.size(); i < fx.size() && i < x.second.size(); ++i)
        if (x.second[i] < fx[i]) return false;
    return !iterMembership(c, x).inD;
}

std::string toString(const MonotoneMap& f) {
    std::string out = "Map({";
    bool first = true;
    for (const auto& [k, v] : f.table) {
        out += (first ? "" : ",") + toString(k) + ":" + toString(v);
        first = false;
    }
    return out + "}," + std::to_string(f.stretch) + "," + std::to_string(f.fill) + ")";
}

std::string toString(const LBCond& c) {
    return "LB(" + toString(c.tree) + "," + toString(c.bad) + "," + toString(c.stem) + ")";
}

std::string toString(const HBCond& c) {
    return "HB(" + toString(c.stem) + "," + toString(c.f) + "," + toString(c.bad) + ")";
}

std::string toString(const ICond& c) {
    return "I(" + toString(c.stm) + "," + toString(c.f) + "," + toString(c.mindom) + "," + toString(c.bad) + ")";
}

}  // namespace bigness
