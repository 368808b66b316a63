#pragma once

#include <functional>
#include <map>
#include <string>

#include "bigness/core.hpp"
#include "bigness/pairs.hpp"

namespace bigness {

struct LBCond {
    TreeRep tree;
    SetRep bad;
    Str stem;
};

// f(i) = f[i] below f.size(), 0 beyond.
struct HBCond {
    Str stem;
    Str f;
    SetRep bad;
};

Nat lowerBoundAt(const Str& f, std::size_t i);

// Finite table plus pad rule. At a key, or at a proper prefix of a key, the value is the table
// value of the longest key below (or ⟨⟩); elsewhere that value is padded with `fill` up to
// length ⌊|σ|/stretch⌋.
struct MonotoneMap {
    std::map<BinStr, Str> table;
    Nat stretch = 1;
    Nat fill = 0;

    static MonotoneMap pad(Nat stretch, Nat fill) { return {{}, stretch, fill}; }
    Str operator()(const BinStr& x) const;
    std::size_t horizon() const;  // longest key length
    std::size_t widest() const;   // longest value length

    // The map agreeing with fn, assuming fn beyond length `depth` is the pad of its value at the
    // depth-prefix. Keys are kept only where they change the denoted map.
    static MonotoneMap fromFunction(const std::function<Str(const BinStr&)>& fn, Nat stretch, Nat fill,
                                    std::size_t depth);
};

bool validMap(const MonotoneMap& f);

struct ICond {
    Str stm;
    MonotoneMap f;
    BinStr mindom;
    PairSetRep bad;
};

ICond topICond();

bool validateCondition(const LBCond& c);
bool validateCondition(const HBCond& c);
bool validateCondition(const ICond& c);

bool extendsQ(const LBCond& p, const LBCond& q);
bool extendsQ(const HBCond& p, const HBCond& q);
bool extendsQ(const ICond& p, const ICond& q);

HBCond centeredMerge(const HBCond& p, const HBCond& q);
ICond centeredMerge(const ICond& p, const ICond& q);

struct IterMembership {
    bool inC = false;
    bool inD = false;
    bool inE = false;
};
IterMembership iterMembership(const ICond& p, const PairStr& pair);

ICond extensionAt(const ICond& p, const PairStr& target);
HBCond extensionAt(const HBCond& p, const Str& target);

bool satisfiesPrefix(const LBCond& c, const Str& x);
bool satisfiesPrefix(const HBCond& c, const Str& x);
bool satisfiesPrefix(const ICond& c, const PairStr& x);

std::string toString(const MonotoneMap& f);
std::string toString(const LBCond& c);
std::string toString(const HBCond& c);
std::string toString(const ICond& c);

}  // namespace bigness
