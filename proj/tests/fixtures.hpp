#pragma once
// Random conditions, functionals and maps for the forcing and density tests.

#include <functional>
#include <set>

#include "bigness/density.hpp"
#include "gen.hpp"
#include "pair_oracle.hpp"

namespace fixtures {

using namespace bigness;

inline Str asStr(const BinStr& b) { return Str(b.begin(), b.end()); }

// Φ(ρ)(i) = 1 if ρ(i) < 2, else 0, tabulated on patterns up to length k.
inline BoundedFunctional indicator(std::size_t k) {
    BoundedFunctional phi;
    const std::vector<std::pair<Entry, Nat>> cells{{{0, false}, 1}, {{1, false}, 1}, {{2, true}, 0}};
    std::function<void(Pattern&, Str&)> grow = [&](Pattern& g, Str& v) {
        if (!g.empty()) phi.table.push_back({g, v});
        if (g.size() == k) return;
        for (const auto& [e, bit] : cells) {
            g.push_back(e);
            v.push_back(bit);
            grow(g, v);
            g.pop_back();
            v.pop_back();
        }
    };
    Pattern g;
    Str v;
    grow(g, v);
    phi.bound = Str(k, 1);
    return phi;
}

// The same indicator read off the second coordinate of a pair.
inline PairFunctional pairIndicator(std::size_t k) {
    PairFunctional phi;
    for (const auto& [g, v] : indicator(k).table) phi.table.push_back({PairGen{{}, g}, v});
    return phi;
}

// Oracle for P_i(T): plain membership queries, children scanned upward.
inline std::set<Str> pSetOracle(const TreeRep& t, std::size_t i) {
    std::set<Str> P{treeStem(t)};
    for (std::size_t k = 0; k < i; ++k) {
        std::set<Str> next = P;
        for (const auto& s : P) {
            for (Nat n = 0; n < 200; ++n) {
                Str c = s;
                c.push_back(n);
                if (treeMember(t, c) && !P.count(c)) {
                    next.insert(c);
                    break;
                }
            }
        }
        P = next;
    }
    return P;
}

// Total functional on patterns over {=0, =1, ≥2} up to length k; each level appends `per` bits.
inline BoundedFunctional randomFunctional(gen::Rng& r, std::size_t k, std::size_t per) {
    BoundedFunctional phi;
    const std::vector<Entry> cells{{0, false}, {1, false}, {2, true}};
    std::function<void(Pattern&, Str&)> grow = [&](Pattern& g, Str& v) {
        if (g.size() == k) return;
        for (const auto& e : cells) {
            g.push_back(e);
            Str w = v;
            for (std::size_t b = 0; b < per; ++b) w.push_back(r.below(2));
            phi.table.push_back({g, w});
            grow(g, w);
            g.pop_back();
        }
    };
    Pattern g;
    Str v;
    grow(g, v);
    phi.bound = Str(k * per, 1);
    return phi;
}

inline PairFunctional randomPairFunctional(gen::Rng& r, std::size_t k, std::size_t per = 1) {
    PairFunctional phi;
    const bool split = r.coin();
    for (std::uint8_t b : {0, 1}) {
        auto part = randomFunctional(r, k, per);
        for (const auto& [g, v] : part.table) phi.table.push_back({PairGen{split ? BinStr{b} : BinStr{}, g}, v});
        if (!split) break;
    }
    return phi;
}

inline LBCond randomLB(gen::Rng& r) {
    for (;;) {
        LBCond p{gen::threshold(r, 1, 3, 3), gen::setRep(r, 2, 3), {}};
        p.stem = treeStem(p.tree);
        if (r.coin()) {
            // a grafted tree: enter a random open set first
            SetRep a = gen::setRep(r, 2, 3);
            if (!a.isEmpty() && omegaRank(p.tree, a, p.stem).big && !setMember(a, p.stem)) {
                auto q = meet(MeetOpen{a}, p).q;
                p = std::get<LBCond>(q);
            }
        }
        if (validateCondition(p)) return p;
    }
}

inline HBCond randomHB(gen::Rng& r) {
    for (;;) {
        HBCond p{gen::str(r, 1, 3), gen::str(r, 3, 3), gen::setRep(r, 2, 3)};
        if (validateCondition(p)) return p;
    }
}

inline ICond randomICond(gen::Rng& r) {
    for (;;) {
        ICond p{{}, MonotoneMap::pad(1 + r.below(2), r.below(3)), {}, gen::pairSetRep(r)};
        if (!validateCondition(p)) continue;
        if (r.coin()) {
            auto q = meet(ExtendStem{1}, p).q;
            p = std::get<ICond>(q);
        }
        return p;
    }
}

// Monotone map whose i-th output entry is a random function of the first stretch·(i+1) bits.
inline MonotoneMap randomMap(gen::Rng& r) {
    const Nat stretch = 1 + r.below(2);
    const Nat fill = r.below(3);
    std::map<BinStr, Nat> g;
    auto entry = [&](const BinStr& y) -> Nat {
        if (y.size() > 3) return fill;
        auto it = g.find(y);
        if (it == g.end()) it = g.emplace(y, r.below(4)).first;
        return it->second;
    };
    auto fn = [&](const BinStr& x) {
        Str v;
        for (std::size_t i = 0; stretch * (i + 1) <= x.size(); ++i)
            v.push_back(entry(BinStr(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(stretch * (i + 1)))));
        return v;
    };
    return MonotoneMap::fromFunction(fn, stretch, fill, 8);
}

inline void allBinary(const BinStr& base, std::size_t len, const std::function<void(const BinStr&)>& f) {
    if (base.size() == len) {
        f(base);
        return;
    }
    for (std::uint8_t b : {0, 1}) {
        BinStr x = base;
        x.push_back(b);
        allBinary(x, len, f);
    }
}

}  // namespace fixtures
