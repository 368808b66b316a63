#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bigness {

using Nat = std::uint64_t;
using Str = std::vector<Nat>;
using BinStr = std::vector<std::uint8_t>;

struct PairStr {
    BinStr first;
    Str second;
    auto operator<=>(const PairStr&) const = default;
};

enum class Errc {
    RankOverflow,
    NotBig,
    IncompatibleStems,
    StemMismatch,
    NotCentered,
    NotAnExtension,
    TaskInapplicable,
    NotAFusionSequence,
    DivergenceForceable,
    CertificateFailure,
    MalformedTrace,
    Parse,
};

const char* errcName(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc c, const std::string& msg);
    Errc code() const { return code_; }

private:
    Errc code_;
};

template <class S>
bool isPrefix(const S& a, const S& b) {
    if (a.size() > b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

template <class S>
bool compatible(const S& a, const S& b) {
    return isPrefix(a, b) || isPrefix(b, a);
}

template <class S>
S extend(S s, typename S::value_type n) {
    s.push_back(n);
    return s;
}

template <class S>
S dropFront(const S& s, std::size_t k) {
    return k >= s.size() ? S{} : S(s.begin() + static_cast<std::ptrdiff_t>(k), s.end());
}

bool pointwiseLeq(const Str& a, const Str& b);
std::vector<Str> pfReduce(std::vector<Str> s);

// A generator entry either names one value or every value from v upward.
struct Entry {
    Nat v = 0;
    bool ge = false;
    bool matches(Nat n) const { return ge ? n >= v : n == v; }
    auto operator<=>(const Entry&) const = default;
};
using Pattern = std::vector<Entry>;

Pattern exactPattern(const Str& s);
bool matchesPrefix(const Pattern& g, const Str& s);
// Every string matched by b has a prefix matched by a.
bool subsumes(const Pattern& a, const Pattern& b);
std::vector<Pattern> pfReduce(std::vector<Pattern> s);
Nat patternBound(const Pattern& g);

struct Atom {
    enum class Kind { UpFin, MinLen, CoordGE };
    Kind kind = Kind::UpFin;
    std::vector<Pattern> gens;
    Nat k = 0;
    Nat i = 0;
    Nat m = 0;
    auto operator<=>(const Atom&) const = default;
};

// Finite union of upward-closed atoms; no atoms means the empty set.
struct SetRep {
    std::vector<Atom> atoms;

    static SetRep empty();
    static SetRep everything();
    static SetRep upFin(const std::vector<Str>& gens);
    static SetRep upFinP(const std::vector<Pattern>& gens);
    static SetRep minLen(Nat k);
    static SetRep coordGE(Nat i, Nat m);
    static SetRep unite(const std::vector<SetRep>& parts);

    bool isEmpty() const { return atoms.empty(); }
    bool isEverything() const;
    auto operator<=>(const SetRep&) const = default;
};

bool setMember(const SetRep& b, const Str& s);
SetRep residual(const SetRep& b, const Str& s);
SetRep canonical(const SetRep& b);
Nat depth(const SetRep& b);
Nat bound(const SetRep& b);
// Exact inclusion test; membership only depends on entries up to bound+1 and length up to depth.
bool setIncluded(const SetRep& a, const SetRep& b);

struct Spectrum {
    std::map<Nat, bool> exceptions;
    std::vector<std::pair<Nat, bool>> steps;

    bool at(Nat n) const;
    bool tail() const { return steps.empty() ? false : steps.back().second; }
    // Canonical spectrum of a value table whose last entry repeats forever.
    static Spectrum fromValues(const std::vector<bool>& vals);
    bool operator==(const Spectrum&) const = default;
};

Spectrum childSpectrum(const SetRep& b, const Str& s);

struct SkelNode;
using SkelPtr = std::shared_ptr<const SkelNode>;

struct TreeRep {
    struct Threshold {
        Str stem;
        std::map<Nat, Nat> theta;  // absolute positions, zero entries omitted
    };
    struct Graft {
        SkelPtr root;
    };
    std::variant<Threshold, Graft> v;

    static TreeRep full();
    static TreeRep threshold(Str stem, std::map<Nat, Nat> theta);
    static TreeRep graft(SkelPtr root);

    bool isThreshold() const { return std::holds_alternative<Threshold>(v); }
    const Threshold& th() const { return std::get<Threshold>(v); }
    const SkelPtr& root() const { return std::get<Graft>(v).root; }
    bool isFull() const;
};

// Skeleton node of a grafted tree. A node with a tail is the tail tree rooted here;
// otherwise its children are the named ones plus, from genericFrom on, copies of `generic`.
struct SkelNode {
    std::map<Nat, SkelPtr> named;
    std::optional<Nat> genericFrom;
    SkelPtr generic;
    std::shared_ptr<const TreeRep> tail;

    bool isLeaf() const { return !tail && named.empty() && !genericFrom; }
};

SkelPtr leafNode();
SkelPtr tailNode(const TreeRep& t);
SkelPtr makeNode(std::map<Nat, SkelPtr> named, std::optional<Nat> genericFrom = std::nullopt,
                 SkelPtr generic = nullptr);

std::optional<TreeRep> treeChild(const TreeRep& t, Nat n);
std::optional<TreeRep> treeResidual(const TreeRep& t, const Str& s);
bool treeMember(const TreeRep& t, const Str& s);
Spectrum rootSpectrum(const TreeRep& t);
Nat treeBound(const TreeRep& t);
bool rootIsLeaf(const TreeRep& t);
std::string treeKey(const TreeRep& t);
Str treeStem(const TreeRep& t);

struct NodeInfo {
    bool member = false;
    Spectrum childSpec;
    bool isLeaf = false;
};
NodeInfo treeNode(const TreeRep& t, const Str& s);

bool hasPath(const TreeRep& t);
bool treeIncluded(const TreeRep& a, const TreeRep& b);
std::optional<TreeRep> intersectTrees(const TreeRep& a, const TreeRep& b);
TreeRep unionTrees(const TreeRep& a, const TreeRep& b);
// a with the cones above the given (relative) nodes removed; nullopt if the root goes.
std::optional<TreeRep> withoutCones(const TreeRep& a, const std::vector<Str>& cones);
// Prefixes of s followed by the relative tree sub at s.
TreeRep graftAt(const Str& s, const TreeRep& sub);
TreeRep simplify(const TreeRep& t);
// Every non-leaf node extending the stem has infinitely many children.
bool bushyAboveStem(const TreeRep& t);
// Nodes of t with length at most d and entries at most maxEntry.
std::vector<Str> enumerateTree(const TreeRep& t, std::size_t d, Nat maxEntry);

SetRep tPlusComplement(const std::vector<Str>& finiteTree);
Str commonBranch(const TreeRep& t, const TreeRep& s, std::size_t depth);

}  // namespace bigness
