#pragma once
// Hand-rolled random instance generators shared by the property tests.

#include <random>

#include "bigness/core.hpp"

namespace gen {

using bigness::Nat;
using bigness::SetRep;
using bigness::Str;
using bigness::TreeRep;

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    Nat below(Nat n) { return n == 0 ? 0 : std::uniform_int_distribution<Nat>(0, n - 1)(eng); }
    bool coin(int num = 1, int den = 2) { return below(static_cast<Nat>(den)) < static_cast<Nat>(num); }
};

inline Str str(Rng& r, std::size_t maxLen, Nat maxEntry) {
    Str s(r.below(maxLen + 1));
    for (auto& v : s) v = r.below(maxEntry + 1);
    return s;
}

inline bigness::Pattern pattern(Rng& r, std::size_t maxLen, Nat maxEntry, bool allowGe) {
    bigness::Pattern g(r.below(maxLen + 1));
    for (auto& e : g) {
        e.v = r.below(maxEntry + 1);
        e.ge = allowGe && r.coin(1, 4);
    }
    return g;
}

// Random set with depth at most maxDepth and entries at most maxEntry.
inline SetRep setRep(Rng& r, std::size_t maxDepth, Nat maxEntry, bool allowGe = true) {
    std::vector<SetRep> parts;
    const Nat n = r.below(3);
    for (Nat i = 0; i < n; ++i) {
        switch (r.below(4)) {
            case 0:
            case 1: {
                std::vector<bigness::Pattern> gens;
                const Nat k = 1 + r.below(3);
                for (Nat j = 0; j < k; ++j) {
                    auto g = pattern(r, maxDepth, maxEntry, allowGe);
                    if (g.empty()) g.push_back({r.below(maxEntry + 1), false});
                    gens.push_back(g);
                }
                parts.push_back(SetRep::upFinP(gens));
                break;
            }
            case 2: parts.push_back(SetRep::minLen(1 + r.below(maxDepth))); break;
            case 3: parts.push_back(SetRep::coordGE(r.below(maxDepth), 1 + r.below(maxEntry))); break;
        }
    }
    return SetRep::unite(parts);
}

inline TreeRep threshold(Rng& r, std::size_t maxStem, std::size_t maxPos, Nat maxTheta) {
    Str stem = str(r, maxStem, maxTheta);
    std::map<Nat, Nat> th;
    for (std::size_t i = stem.size(); i < stem.size() + maxPos; ++i)
        if (r.coin()) th[i] = r.below(maxTheta + 1);
    return TreeRep::threshold(stem, th);
}

// Random explicit finite tree (prefix closed, contains the root).
inline std::vector<Str> finiteTree(Rng& r, std::size_t maxDepth, Nat maxEntry) {
    std::vector<Str> out{{}};
    std::vector<Str> frontier{{}};
    while (!frontier.empty()) {
        Str s = frontier.back();
        frontier.pop_back();
        if (s.size() >= maxDepth) continue;
        for (Nat n = 0; n <= maxEntry; ++n) {
            if (!r.coin(1, 3)) continue;
            Str c = s;
            c.push_back(n);
            out.push_back(c);
            frontier.push_back(c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace gen
