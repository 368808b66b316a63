#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bigness/core.hpp"

namespace bigness {

struct RankResult {
    bool big = false;
    Nat rank = 0;

    static RankResult small() { return {}; }
    static RankResult bigAt(Nat r) { return {true, r}; }
    bool operator==(const RankResult&) const = default;
};

std::string toString(const RankResult& r);

// Rank of s in the B-T ranking. Small when s is unranked or s is not in T.
RankResult omegaRank(const TreeRep& t, const SetRep& b, const Str& s);

// Node table of a finite ω-bushy tree; node strings are implicit in the edges from root.
struct WitnessNode {
    std::vector<std::pair<Nat, std::size_t>> named;
    std::optional<std::pair<Nat, std::size_t>> generic;  // (t, id): every n ≥ t not named
    bool isLeaf() const { return named.empty() && !generic; }
};

struct BushyWitness {
    std::vector<WitnessNode> nodes;
    Str stem;
    std::size_t root = 0;
};

BushyWitness extractWitness(const TreeRep& t, const SetRep& b, const Str& s);
bool verifyWitness(const TreeRep& t, const SetRep& b, const BushyWitness& w);

// Witness nodes as a skeleton rooted at the stem; leaf x becomes tail(x) or a closed leaf.
SkelPtr witnessSkeleton(const BushyWitness& w, const std::function<std::optional<TreeRep>(const Str&)>& tail);

struct Dichotomy {
    enum class Arm { LaverInto, HechlerAvoid };
    Arm arm;
    TreeRep tree;
    std::optional<BushyWitness> witness;
};

Dichotomy bigDichotomy(const TreeRep& t, const SetRep& b, const Str& s);

}  // namespace bigness
