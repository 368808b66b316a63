#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bigness/core.hpp"
#include "bigness/format.hpp"
#include "bigness/omega.hpp"

namespace bigness {

struct PairGen {
    BinStr first;
    Pattern second;
    auto operator<=>(const PairGen&) const = default;
};

// Sets of pairs (σ, τ). StretchGE(s, r, c) holds when ⌊(|σ|+r)/s⌋ ≥ |τ| + c; it is upward closed
// in σ only, every other atom is upward closed in both coordinates.
struct PairSetRep {
    enum class Kind { Empty, UpFinP, MinLenSecond, StretchGE, Union, Inter };
    Kind kind = Kind::Empty;
    std::vector<PairGen> gens;
    Nat k = 0;
    Nat s = 1;
    Nat r = 0;
    long long c = 0;
    std::vector<PairSetRep> kids;

    static PairSetRep empty();
    static PairSetRep everything();
    static PairSetRep upFinP(std::vector<PairGen> gens);
    static PairSetRep minLenSecond(Nat k);
    static PairSetRep stretchGE(Nat s, Nat r, long long c);
    static PairSetRep unite(std::vector<PairSetRep> parts);
    static PairSetRep inter(std::vector<PairSetRep> parts);

    bool isEmpty() const { return kind == Kind::Empty; }
    bool isEverything() const;
};

std::string toString(const PairSetRep& b);
PairSetRep parsePairSetRep(std::string_view text);
PairSetRep readPairSetRep(Reader& r);

bool pairMember(const PairSetRep& b, const PairStr& p);
PairSetRep pairResidual(const PairSetRep& b, const PairStr& p);
// Largest second-coordinate value mentioned.
Nat pairBound(const PairSetRep& b);
Nat firstDepth(const PairSetRep& b);
Nat secondDepth(const PairSetRep& b);
PairSetRep dropStretch(const PairSetRep& b);
// a ⊆ b: syntactic shortcuts, then exhaustive comparison on the bounded universe the sets can distinguish.
bool pairIncluded(const PairSetRep& a, const PairSetRep& b);

RankResult pairRank(const PairSetRep& b, const PairStr& p, std::optional<Nat> budget = std::nullopt);

// A class of pairs: σ = p exactly, or (deep) every σ ⪰ p with |σ| ≥ ell; τ agrees with tau,
// where generic positions accept every value ≥ the stored one.
struct PairClass {
    BinStr p;
    bool deep = false;
    Nat ell = 0;
    Str tau;
    std::vector<std::uint8_t> generic;
    std::vector<std::size_t> just;  // classes whose members justify members of this one

    Nat minLength() const { return deep ? std::max<Nat>(ell, p.size()) : p.size(); }
    bool sameMembers(const PairClass& o) const {
        return p == o.p && deep == o.deep && minLength() == o.minLength() && tau == o.tau && generic == o.generic;
    }
};

struct PairWitness {
    std::vector<PairClass> classes;
    std::size_t stem = 0;
};

// Representative member: shortest σ padded with zeros, generic entries at their lower bound.
PairStr representative(const PairClass& c);
std::vector<std::size_t> pairLeaves(const PairWitness& w);

PairWitness extractPairWitness(const PairSetRep& b, const PairStr& p);
PairWitness extractPairWitnessFromClass(const PairSetRep& b, const PairClass& stem);
bool verifyPairWitness(const PairSetRep& b, const PairWitness& w);
// Structural checks plus leafOk on every leaf class.
bool verifyPairWitnessWith(const PairWitness& w, const std::function<bool(const PairClass&)>& leafOk);
// Every member of the class lies in b (checked on minimal σ and generic values up to bound+1).
bool classInside(const PairSetRep& b, const PairClass& c);
PairWitness concatPairWitnesses(const PairWitness& outer, const std::map<std::size_t, PairWitness>& perLeaf);

std::string toString(const PairWitness& w);

}  // namespace bigness
