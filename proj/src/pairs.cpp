#include "bigness/pairs.hpp"

#include <algorithm>
#include <set>

namespace bigness {

namespace {

using Kind = PairSetRep::Kind;

bool genSubsumes(const PairGen& a, const PairGen& b) { return isPrefix(a.first, b.first) && subsumes(a.second, b.second); }

std::vector<PairGen> reduceGens(std::vector<PairGen> g) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    std::vector<PairGen> out;
    for (const auto& x : g) {
        bool absorbed = false;
        for (const auto& y : g)
            if (!(y == x) && genSubsumes(y, x)) { absorbed = true; break; }
        if (!absorbed) out.push_back(x);
    }
    return out;
}

PairSetRep canon(const PairSetRep& b);

PairSetRep canonUnion(const std::vector<PairSetRep>& parts) {
    std::vector<PairGen> gens;
    std::optional<Nat> minK;
    std::map<std::string, PairSetRep> rest;
    std::function<void(const PairSetRep&)> add = [&](const PairSetRep& x) {
        switch (x.kind) {
            case Kind::Empty: break;
            case Kind::UpFinP: gens.insert(gens.end(), x.gens.begin(), x.gens.end()); break;
            case Kind::MinLenSecond: minK = minK ? std::min(*minK, x.k) : x.k; break;
            case Kind::Union:
                for (const auto& k : x.kids) add(k);
                break;
            default: rest.emplace(toString(x), x);
        }
    };
    for (const auto& p : parts) add(canon(p));
    std::vector<PairSetRep> kids;
    if (!gens.empty()) {
        PairSetRep u;
        u.kind = Kind::UpFinP;
        u.gens = reduceGens(gens);
        if (minK) {
            std::erase_if(u.gens, [&](const PairGen& g) { return g.first.empty() && g.second.size() >= *minK; });
        }
        if (!u.gens.empty()) kids.push_back(u);
    }
    if (minK) kids.push_back(PairSetRep::minLenSecond(*minK));
    for (auto& [_, x] : rest) kids.push_back(x);
    for (const auto& k : kids)
        if (k.isEverything()) return PairSetRep::everything();
    if (kids.empty()) return PairSetRep::empty();
    if (kids.size() == 1) return kids[0];
    PairSetRep out;
    out.kind = Kind::Union;
    out.kids = kids;
    return out;
}

PairSetRep canonInter(const std::vector<PairSetRep>& parts) {
    std::map<std::string, PairSetRep> kids;
    std::function<bool(const PairSetRep&)> add = [&](const PairSetRep& x) -> bool {
        if (x.kind == Kind::Empty) return false;
        if (x.isEverything()) return true;
        if (x.kind == Kind::Inter) {
            for (const auto& k : x.kids)
                if (!add(k)) return false;
            return true;
        }
        kids.emplace(toString(x), x);
        return true;
    };
    for (const auto& p : parts)
        if (!add(canon(p))) return PairSetRep::empty();
    if (kids.empty()) return PairSetRep::everything();
    if (kids.size() == 1) return kids.begin()->second;
    PairSetRep out;
    out.kind = Kind::Inter;
    for (auto& [_, x] : kids) out.kids.push_back(x);
    return out;
}

PairSetRep canon(const PairSetRep& b) {
    switch (b.kind) {
        case Kind::Empty: return b;
        case Kind::UpFinP: {
            PairSetRep out = b;
            out.gens = reduceGens(b.gens);
            if (out.gens.empty()) return PairSetRep::empty();
            for (const auto& g : out.gens)
                if (g.first.empty() && g.second.empty()) return PairSetRep::everything();
            return out;
        }
        case Kind::MinLenSecond: return b.k == 0 ? PairSetRep::everything() : b;
        case Kind::StretchGE: {
            PairSetRep out = b;
            out.c = b.c - static_cast<long long>(b.r / b.s);
            out.r = b.r % b.s;
            return out;
        }
        case Kind::Union: return canonUnion(b.kids);
        case Kind::Inter: return canonInter(b.kids);
    }
    return b;
}

bool genMatches(const PairGen& g, const PairStr& p) { return isPrefix(g.first, p.first) && matchesPrefix(g.second, p.second); }

std::string genString(const PairGen& g) { return "(" + toString(g.first) + "," + toString(g.second) + ")"; }

}  // namespace

PairSetRep PairSetRep::empty() { return {}; }

PairSetRep PairSetRep::everything() {
    PairSetRep b;
    b.kind = Kind::UpFinP;
    b.gens = {PairGen{}};
    return b;
}

PairSetRep PairSetRep::upFinP(std::vector<PairGen> gens) {
    PairSetRep b;
    b.kind = Kind::UpFinP;
    b.gens = std::move(gens);
    return canon(b);
}

PairSetRep PairSetRep::minLenSecond(Nat k) {
    PairSetRep b;
    b.kind = Kind::MinLenSecond;
    b.k = k;
    return k == 0 ? everything() : b;
}

PairSetRep PairSetRep::stretchGE(Nat s, Nat r, long long c) {
    if (s == 0) throw Error(Errc::Parse, "stretch must be at least 1");
    PairSetRep b;
    b.kind = Kind::StretchGE;
    b.s = s;
    b.r = r;
    b.c = c;
    return canon(b);
}

PairSetRep PairSetRep::unite(std::vector<PairSetRep> parts) { return canonUnion(parts); }
PairSetRep PairSetRep::inter(std::vector<PairSetRep> parts) { return canonInter(parts); }

bool PairSetRep::isEverything() const {
    if (kind == Kind::MinLenSecond) return k == 0;
    if (kind == Kind::UpFinP)
        return std::any_of(gens.begin(), gens.end(), [](const PairGen& g) { return g.first.empty() && g.second.empty(); });
    return false;
}

std::string toString(const PairSetRep& b) {
    switch (b.kind) {
        case Kind::Empty: return "Empty";
        case Kind::UpFinP: {
            std::string out = "UpFinP{";
            for (std::size_t i = 0; i < b.gens.size(); ++i) out += (i ? "," : "") + genString(b.gens[i]);
            return out + "}";
        }
        case Kind::MinLenSecond: return "MinLenSecond(" + std::to_string(b.k) + ")";
        case Kind::StretchGE:
            return "StretchGE(" + std::to_string(b.s) + "," + std::to_string(b.r) + "," + std::to_string(b.c) + ")";
        case Kind::Union:
        case Kind::Inter: {
            std::string out = b.kind == Kind::Union ? "Union[" : "Inter[";
            for (std::size_t i = 0; i < b.kids.size(); ++i) out += (i ? "," : "") + toString(b.kids[i]);
            return out + "]";
        }
    }
    return "";
}

PairSetRep readPairSetRep(Reader& r) {
    const std::string w = r.word();
    if (w == "Empty") return PairSetRep::empty();
    if (w == "UpFinP") {
        r.expect("{");
        std::vector<PairGen> gens;
        if (!r.accept("}")) {
            do {
                r.expect("(");
                PairGen g;
                g.first = r.binStr();
                r.expect(",");
                g.second = r.pattern();
                r.expect(")");
                gens.push_back(g);
            } while (r.accept(","));
            r.expect("}");
        }
        return PairSetRep::upFinP(gens);
    }
    if (w == "MinLenSecond") {
        r.expect("(");
        Nat k = r.natural();
        r.expect(")");
        return PairSetRep::minLenSecond(k);
    }
    if (w == "StretchGE") {
        r.expect("(");
        Nat s = r.natural();
        r.expect(",");
        Nat ph = r.natural();
        r.expect(",");
        long long c = r.integer();
        r.expect(")");
        if (s == 0) r.fail("stretch must be at least 1");
        return PairSetRep::stretchGE(s, ph, c);
    }
    if (w == "Union" || w == "Inter") {
        r.expect("[");
        std::vector<PairSetRep> parts;
        if (!r.accept("]")) {
            do parts.push_back(readPairSetRep(r));
            while (r.accept(","));
            r.expect("]");
        }
        return w == "Union" ? PairSetRep::unite(parts) : PairSetRep::inter(parts);
    }
    r.fail("unknown pair-set constructor '" + w + "'");
}

PairSetRep parsePairSetRep(std::string_view text) {
    Reader r(text);
    PairSetRep b = readPairSetRep(r);
    if (!r.atEnd()) r.fail("trailing input");
    return b;
}

bool pairMember(const PairSetRep& b, const PairStr& p) {
    switch (b.kind) {
        case Kind::Empty: return false;
        case Kind::UpFinP:
            return std::any_of(b.gens.begin(), b.gens.end(), [&](const PairGen& g) { return genMatches(g, p); });
        case Kind::MinLenSecond: return p.second.size() >= b.k;
        case Kind::StretchGE: {
            const long long lhs = static_cast<long long>((p.first.size() + b.r) / b.s);
            return lhs >= static_cast<long long>(p.second.size()) + b.c;
        }
        case Kind::Union:
            return std::any_of(b.kids.begin(), b.kids.end(), [&](const PairSetRep& k) { return pairMember(k, p); });
        case Kind::Inter:
            return std::all_of(b.kids.begin(), b.kids.end(), [&](const PairSetRep& k) { return pairMember(k, p); });
    }
    return false;
}

PairSetRep pairResidual(const PairSetRep& b, const PairStr& p) {
    switch (b.kind) {
        case Kind::Empty: return b;
        case Kind::UpFinP: {
            std::vector<PairGen> gens;
            for (const auto& g : b.gens) {
                if (genMatches(g, p)) return PairSetRep::everything();
                if (!compatible(g.first, p.first)) continue;
                bool agrees = true;
                for (std::size_t i = 0; i < p.second.size() && i < g.second.size(); ++i)
                    if (!g.second[i].matches(p.second[i])) agrees = false;
                if (!agrees) continue;
                PairGen r;
                r.first = dropFront(g.first, p.first.size());
                if (g.second.size() > p.second.size())
                    r.second = Pattern(g.second.begin() + static_cast<std::ptrdiff_t>(p.second.size()), g.second.end());
                gens.push_back(r);
            }
            return PairSetRep::upFinP(gens);
        }
        case Kind::MinLenSecond:
            return p.second.size() >= b.k ? PairSetRep::everything() : PairSetRep::minLenSecond(b.k - p.second.size());
        case Kind::StretchGE:
            return PairSetRep::stretchGE(b.s, b.r + p.first.size(), b.c + static_cast<long long>(p.second.size()));
        case Kind::Union:
        case Kind::Inter: {
            std::vector<PairSetRep> kids;
            for (const auto& k : b.kids) kids.push_back(pairResidual(k, p));
            return b.kind == Kind::Union ? PairSetRep::unite(kids) : PairSetRep::inter(kids);
        }
    }
    return b;
}

Nat pairBound(const PairSetRep& b) {
    Nat w = 0;
    for (const auto& g : b.gens) w = std::max(w, patternBound(g.second));
    for (const auto& k : b.kids) w = std::max(w, pairBound(k));
    return w;
}

Nat firstDepth(const PairSetRep& b) {
    Nat d = 0;
    for (const auto& g : b.gens) d = std::max<Nat>(d, g.first.size());
    for (const auto& k : b.kids) d = std::max(d, firstDepth(k));
    return d;
}

Nat secondDepth(const PairSetRep& b) {
    Nat d = b.kind == Kind::MinLenSecond ? b.k : 0;
    if (b.kind == Kind::StretchGE && b.c < 0) d = std::max<Nat>(d, static_cast<Nat>(-b.c));
    for (const auto& g : b.gens) d = std::max<Nat>(d, g.second.size());
    for (const auto& k : b.kids) d = std::max(d, secondDepth(k));
    return d;
}

PairSetRep dropStretch(const PairSetRep& b) {
    switch (b.kind) {
        case Kind::StretchGE: return PairSetRep::everything();
        case Kind::Union:
        case Kind::Inter: {
            std::vector<PairSetRep> kids;
            for (const auto& k : b.kids) kids.push_back(dropStretch(k));
            return b.kind == Kind::Union ? PairSetRep::unite(kids) : PairSetRep::inter(kids);
        }
        default: return b;
    }
}

namespace {

Nat stretchReach(const PairSetRep& b, Nat d2) {
    Nat out = 0;
    if (b.kind == Kind::StretchGE) out = b.s * (d2 + static_cast<Nat>(std::max<long long>(b.c, 0)) + 1);
    for (const auto& k : b.kids) out = std::max(out, stretchReach(k, d2));
    return out;
}

}  // namespace

bool pairIncluded(const PairSetRep& a, const PairSetRep& b) {
    if (a.isEmpty() || b.isEverything()) return true;
    if (toString(a) == toString(b)) return true;
    if (a.kind == Kind::Union)
        return std::all_of(a.kids.begin(), a.kids.end(), [&](const PairSetRep& k) { return pairIncluded(k, b); });
    if (b.kind == Kind::Inter)
        return std::all_of(b.kids.begin(), b.kids.end(), [&](const PairSetRep& k) { return pairIncluded(a, k); });
    if (b.kind == Kind::Union)
        for (const auto& k : b.kids)
            if (toString(k) == toString(a)) return true;
    const Nat w = std::max(pairBound(a), pairBound(b)) + 1;
    const Nat d2 = std::max(secondDepth(a), secondDepth(b)) + 1;
    const Nat d1 = std::min<Nat>(12, std::max({firstDepth(a), firstDepth(b), stretchReach(a, d2), stretchReach(b, d2)}) + 1);
    Str tau;
    std::function<bool()> rec = [&]() -> bool {
        for (Nat len = 0; len <= d1; ++len)
            for (Nat code = 0; code < (Nat{1} << len); ++code) {
                PairStr p{BinStr(len), tau};
                for (Nat i = 0; i < len; ++i) p.first[i] = static_cast<std::uint8_t>((code >> i) & 1);
                if (pairMember(a, p) && !pairMember(b, p)) return false;
            }
        if (tau.size() == d2) return true;
        for (Nat v = 0; v <= w; ++v) {
            tau.push_back(v);
            bool ok = rec();
            tau.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    return rec();
}

namespace {

BinStr bitsOf(Nat code, Nat len) {
    BinStr w(len);
    for (Nat i = 0; i < len; ++i) w[i] = static_cast<std::uint8_t>((code >> (len - 1 - i)) & 1);
    return w;
}

struct PairRanker {
    Nat budget;
    std::map<std::string, RankResult> memo;

    // Rank of the empty pair in state b, where the σ side may be stretched freely below the top.
    RankResult rank(const PairSetRep& b, Nat steps) {
        if (pairMember(b, {})) return RankResult::bigAt(0);
        if (b.isEmpty()) return RankResult::small();
        const std::string key = toString(b);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        if (steps > budget) throw Error(Errc::RankOverflow, "pair rank recursion exceeded " + std::to_string(budget));
        const PairSetRep loose = dropStretch(b);
        RankResult best = RankResult::small();
        if (!loose.isEmpty()) {
            const Nat len = std::max<Nat>(firstDepth(loose), 1);
            const Nat fresh = pairBound(loose) + 1;
            for (Nat code = 0; code < (Nat{1} << len); ++code) {
                RankResult r = rank(pairResidual(loose, {bitsOf(code, len), {fresh}}), steps + 1);
                if (r.big && (!best.big || r.rank < best.rank)) best = r;
            }
        }
        RankResult out = best.big ? RankResult::bigAt(best.rank + 1) : RankResult::small();
        memo[key] = out;
        return out;
    }
};

}  // namespace

RankResult pairRank(const PairSetRep& b, const PairStr& p, std::optional<Nat> budget) {
    PairRanker rk{budget ? *budget : secondDepth(b) + firstDepth(b) + 2, {}};
    return rk.rank(pairResidual(b, p), 0);
}

PairStr representative(const PairClass& c) {
    PairStr p;
    p.first = c.p;
    p.first.resize(c.minLength(), 0);
    p.second = c.tau;
    return p;
}

std::vector<std::size_t> pairLeaves(const PairWitness& w) {
    std::set<std::size_t> justifiers;
    for (const auto& c : w.classes) justifiers.insert(c.just.begin(), c.just.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < w.classes.size(); ++i)
        if (!justifiers.count(i)) out.push_back(i);
    return out;
}

PairWitness extractPairWitnessFromClass(const PairSetRep& b, const PairClass& stem) {
    const Nat t = pairBound(b) + 1;
    PairWitness w;
    w.classes.push_back(stem);
    w.classes[0].just.clear();
    RankResult r = pairRank(b, representative(stem));
    if (!r.big) throw Error(Errc::NotBig, "pair set is small above " + toString(representative(stem)));
    const Nat lengthBudget = 64 + stem.minLength();
    std::size_t cur = 0;
    while (r.rank > 0) {
        const PairClass x = w.classes[cur];
        const PairSetRep loose = dropStretch(pairResidual(b, representative(x)));
        PairClass z;
        z.deep = true;
        z.tau = extend(x.tau, t);
        z.generic = x.generic;
        z.generic.push_back(1);
        z.just = {cur};
        z.p = x.p;
        if (!x.deep) {
            const Nat len = std::max<Nat>(firstDepth(loose), 1);
            std::optional<std::pair<Nat, Nat>> best;  // (rank, code)
            for (Nat code = 0; code < (Nat{1} << len); ++code) {
                RankResult cr = pairRank(loose, {bitsOf(code, len), {t}});
                if (cr.big && (!best || cr.rank < best->first)) best = std::make_pair(cr.rank, code);
            }
            if (!best) throw Error(Errc::NotBig, "no extension keeps the pair set big");
            BinStr w2 = bitsOf(best->second, len);
            z.p.insert(z.p.end(), w2.begin(), w2.end());
        } else if (firstDepth(loose) > 0) {
            throw Error(Errc::NotBig, "deep class still depends on the first coordinate");
        }
        bool found = false;
        for (Nat ell = x.minLength() + 1; ell <= lengthBudget; ++ell) {
            z.ell = ell;
            RankResult zr = pairRank(b, representative(z));
            if (zr.big && zr.rank + 1 == r.rank) {
                found = true;
                break;
            }
        }
        if (!found) throw Error(Errc::RankOverflow, "no length stabilizes the child rank");
        w.classes.push_back(z);
        cur = w.classes.size() - 1;
        r = RankResult::bigAt(r.rank - 1);
    }
    return w;
}

PairWitness extractPairWitness(const PairSetRep& b, const PairStr& p) {
    PairClass stem;
    stem.p = p.first;
    stem.tau = p.second;
    stem.generic.assign(p.second.size(), 0);
    return extractPairWitnessFromClass(b, stem);
}

bool classInside(const PairSetRep& b, const PairClass& c) {
    const Nat top = pairBound(b) + 1;
    std::vector<BinStr> sigmas;
    const Nat extra = c.minLength() - c.p.size();
    if (extra > 16) return false;
    for (Nat code = 0; code < (Nat{1} << extra); ++code) {
        BinStr s = c.p;
        BinStr tail = bitsOf(code, extra);
        s.insert(s.end(), tail.begin(), tail.end());
        sigmas.push_back(s);
    }
    Str tau = c.tau;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == tau.size()) {
            for (const auto& s : sigmas)
                if (!pairMember(b, {s, tau})) return false;
            return true;
        }
        if (!c.generic[i]) return rec(i + 1);
        for (Nat v = c.tau[i]; v <= std::max(top, c.tau[i]); ++v) {
            tau[i] = v;
            if (!rec(i + 1)) return false;
        }
        tau[i] = c.tau[i];
        return true;
    };
    return rec(0);
}

bool verifyPairWitnessWith(const PairWitness& w, const std::function<bool(const PairClass&)>& leafOk) {
    const std::size_t n = w.classes.size();
    if (w.stem >= n) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = w.classes[i];
        if (c.generic.size() != c.tau.size()) return false;
        if ((i == w.stem) != c.just.empty()) return false;
        for (auto j : c.just)
            if (j >= n) return false;
    }
    // no infinite justification chains
    std::vector<int> color(n, 0);
    std::function<bool(std::size_t)> acyclic = [&](std::size_t i) -> bool {
        if (color[i] == 1) return false;
        if (color[i] == 2) return true;
        color[i] = 1;
        for (auto j : w.classes[i].just)
            if (!acyclic(j)) return false;
        color[i] = 2;
        return true;
    };
    for (std::size_t i = 0; i < n; ++i)
        if (!acyclic(i)) return false;

    const PairClass& stem = w.classes[w.stem];
    auto tauPrefix = [](const PairClass& a, const PairClass& b) {
        if (a.tau.size() > b.tau.size()) return false;
        for (std::size_t i = 0; i < a.tau.size(); ++i)
            if (a.tau[i] != b.tau[i] || a.generic[i] != b.generic[i]) return false;
        return true;
    };
    for (const auto& c : w.classes) {
        // every member extends a member of the stem class
        if (!isPrefix(stem.p, c.p) || c.minLength() < stem.minLength() || !tauPrefix(stem, c)) return false;
        if (stem.deep && !c.deep) return false;
        for (auto j : c.just) {
            const PairClass& x = w.classes[j];
            if (!isPrefix(x.p, c.p) || c.minLength() <= x.minLength()) return false;
            if (c.tau.size() != x.tau.size() + 1 || !tauPrefix(x, c)) return false;
        }
    }
    // every justifying member has infinitely many justified children above every long enough extension
    for (std::size_t xi = 0; xi < n; ++xi) {
        const PairClass& x = w.classes[xi];
        std::vector<const PairClass*> kids;
        for (const auto& c : w.classes)
            if (std::find(c.just.begin(), c.just.end(), xi) != c.just.end()) kids.push_back(&c);
        if (kids.empty()) continue;
        Nat m = x.deep ? x.minLength() : x.p.size();
        if (x.deep)
            for (auto* k : kids) m = std::max<Nat>(m, k->p.size());
        const Nat extra = m - x.p.size();
        if (extra > 16) return false;
        for (Nat code = 0; code < (Nat{1} << extra); ++code) {
            BinStr s = x.p;
            BinStr tail = bitsOf(code, extra);
            s.insert(s.end(), tail.begin(), tail.end());
            bool ok = std::any_of(kids.begin(), kids.end(), [&](const PairClass* k) {
                return k->deep && k->generic.back() && compatible(k->p, s);
            });
            if (!ok) return false;
        }
    }
    for (auto leaf : pairLeaves(w))
        if (!leafOk(w.classes[leaf])) return false;
    return true;
}

bool verifyPairWitness(const PairSetRep& b, const PairWitness& w) {
    return verifyPairWitnessWith(w, [&](const PairClass& c) { return classInside(b, c); });
}

PairWitness concatPairWitnesses(const PairWitness& outer, const std::map<std::size_t, PairWitness>& perLeaf) {
    PairWitness out = outer;
    const auto leaves = pairLeaves(outer);
    for (const auto& [leaf, inner] : perLeaf) {
        if (std::find(leaves.begin(), leaves.end(), leaf) == leaves.end())
            throw Error(Errc::StemMismatch, "class " + std::to_string(leaf) + " is not a leaf of the outer witness");
        if (!inner.classes.at(inner.stem).sameMembers(outer.classes[leaf]))
            throw Error(Errc::StemMismatch, "inner stem differs from its graft leaf " + std::to_string(leaf));
        std::vector<std::size_t> remap(inner.classes.size());
        for (std::size_t i = 0; i < inner.classes.size(); ++i) {
            if (i == inner.stem) {
                remap[i] = leaf;
            } else {
                remap[i] = out.classes.size();
                out.classes.push_back(inner.classes[i]);
            }
        }
        for (std::size_t i = 0; i < inner.classes.size(); ++i) {
            if (i == inner.stem) continue;
            for (auto& j : out.classes[remap[i]].just) j = remap[j];
        }
    }
    return out;
}

std::string toString(const PairWitness& w) {
    std::string out = "PairWitness{stem:" + std::to_string(w.stem) + ";classes:[";
    for (std::size_t i = 0; i < w.classes.size(); ++i) {
        const auto& c = w.classes[i];
        if (i) out += ";";
        out += "(" + toString(c.p) + "," + (c.deep ? "deep" : "exact") + "," + std::to_string(c.ell) + "," +
               toString(c.tau) + "," + toString(BinStr(c.generic)) + ",[";
        for (std::size_t j = 0; j < c.just.size(); ++j) out += (j ? "," : "") + std::to_string(c.just[j]);
        out += "])";
    }
    return out + "]}";
}

}  // namespace bigness
