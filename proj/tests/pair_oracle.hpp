#pragma once
// Pair-set generators and a brute-force cl_p rank evaluator. The evaluator walks every binary
// string up to a fixed length and reads the quantifier clause literally; it only uses membership.

#include <vector>

#include "bigness/pairs.hpp"
#include "gen.hpp"

namespace gen {

inline bigness::BinStr binStr(Rng& r, std::size_t maxLen) {
    bigness::BinStr s(r.below(maxLen + 1));
    for (auto& b : s) b = static_cast<std::uint8_t>(r.below(2));
    return s;
}

inline bigness::PairSetRep pairAtom(Rng& r, bool allowStretch) {
    using bigness::PairSetRep;
    switch (r.below(allowStretch ? 4 : 3)) {
        case 0: return PairSetRep::empty();
        case 1: {
            std::vector<bigness::PairGen> gens(1 + r.below(2));
            for (auto& g : gens) {
                g.first = binStr(r, 2);
                g.second = pattern(r, 2, 2, true);
            }
            return PairSetRep::upFinP(gens);
        }
        case 2: return PairSetRep::minLenSecond(r.below(3));
        default:
            return PairSetRep::stretchGE(1 + r.below(2), r.below(2), static_cast<long long>(r.below(3)) - 1);
    }
}

// Random pair set of combinator depth ≤ 1 with second-coordinate depth ≤ 2.
inline bigness::PairSetRep pairSetRep(Rng& r, bool allowStretch = true) {
    using bigness::PairSetRep;
    if (r.coin(1, 3)) return pairAtom(r, allowStretch);
    std::vector<PairSetRep> parts;
    for (Nat i = 0; i < 2; ++i) parts.push_back(pairAtom(r, allowStretch));
    return r.coin() ? PairSetRep::unite(parts) : PairSetRep::inter(parts);
}

}  // namespace gen

namespace oracle {

using bigness::Nat;

// rank of (p0⌢σ, p1⌢fresh^k) over all σ with |σ| ≤ maxLen, level by level. Strings of length
// maxLen stand for all their extensions, so maxLen must exceed the length where membership settles.
inline std::optional<Nat> pairRank(const std::function<bool(const bigness::PairStr&)>& in, const bigness::PairStr& p,
                                   Nat fresh, std::size_t maxLen, Nat maxLevel) {
    using bigness::BinStr;
    // strings indexed heap-style: node 1 is ⟨⟩, children of i are 2i (bit 0) and 2i+1 (bit 1)
    const std::size_t count = std::size_t{1} << (maxLen + 1);
    auto strOf = [&](std::size_t i) {
        BinStr s;
        while (i > 1) {
            s.insert(s.begin(), static_cast<std::uint8_t>(i & 1));
            i >>= 1;
        }
        return s;
    };
    auto isLeaf = [&](std::size_t i) { return 2 * i >= count; };
    const std::size_t ks = maxLevel + 1;
    std::vector<std::vector<char>> le(ks, std::vector<char>(count, 0));
    for (std::size_t k = 0; k < ks; ++k) {
        bigness::PairStr q{p.first, p.second};
        q.second.insert(q.second.end(), k, fresh);
        for (std::size_t i = 1; i < count; ++i) {
            BinStr s = strOf(i);
            bigness::PairStr x{q.first, q.second};
            x.first.insert(x.first.end(), s.begin(), s.end());
            le[k][i] = in(x);
        }
    }
    if (le[0][1]) return 0;
    std::vector<char> e(count), a(count), d(count);
    for (Nat level = 1; level <= maxLevel; ++level) {
        std::vector<std::vector<char>> next = le;
        for (std::size_t k = 0; k + 1 < ks; ++k) {
            const auto& x = le[k + 1];
            for (std::size_t i = count - 1; i >= 1; --i) {
                if (isLeaf(i)) {
                    e[i] = a[i] = d[i] = x[i];
                } else {
                    e[i] = x[i] || e[2 * i] || e[2 * i + 1];
                    a[i] = e[i] && a[2 * i] && a[2 * i + 1];
                    d[i] = a[i] || d[2 * i] || d[2 * i + 1];
                }
            }
            for (std::size_t i = 1; i < count; ++i) {
                if (isLeaf(i) ? x[i] : (d[2 * i] || d[2 * i + 1])) next[k][i] = 1;
            }
        }
        le = std::move(next);
        if (le[0][1]) return level;
    }
    return std::nullopt;
}

inline std::optional<Nat> pairRank(const bigness::PairSetRep& b, const bigness::PairStr& p, std::size_t maxLen = 13,
                                   Nat maxLevel = 4) {
    return pairRank([&](const bigness::PairStr& x) { return bigness::pairMember(b, x); }, p, bigness::pairBound(b) + 1,
                    maxLen, maxLevel);
}

}  // namespace oracle
