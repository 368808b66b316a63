#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bigness/conditions.hpp"
#include "bigness/measure.hpp"
#include "bigness/omega.hpp"

namespace bigness {

// Φ on ω-strings. Φ(ρ) is the longest value among keys matching a prefix of ρ; values of keys
// that can match together must be ⪯-comparable.
struct BoundedFunctional {
    std::vector<std::pair<Pattern, Str>> table;
    Str bound;  // Φ(ρ)(m) ≤ bound[m] below bound.size()

    Str operator()(const Str& rho) const;
    std::size_t depth() const;
    std::size_t widest() const;
};

bool validFunctional(const BoundedFunctional& phi);
SetRep valueSet(const BoundedFunctional& phi, std::size_t m, Nat j);  // {ρ : Φ(ρ)(m) = j}
SetRep convergenceSet(const BoundedFunctional& phi, std::size_t m);   // {ρ : Φ(ρ)(m)↓}
SetRep extendingSet(const BoundedFunctional& phi, const Str& nu);     // {ρ : Φ(ρ) ⪰ ν}

// Φ on pairs, same lookup rule with pair generators as keys.
struct PairFunctional {
    std::vector<std::pair<PairGen, Str>> table;

    Str operator()(const PairStr& x) const;
    std::size_t widest() const;
};

bool validFunctional(const PairFunctional& phi);
PairSetRep convergenceSet(const PairFunctional& phi, std::size_t m);
PairSetRep extendingSet(const PairFunctional& phi, const Str& nu);

using Trace = std::vector<std::vector<Nat>>;

std::set<Str> pSet(const TreeRep& t, std::size_t i);
// T ≤_i T': T ⊆ T' and P_i(T) = P_i(T').
bool fusionStep(const TreeRep& next, const TreeRep& prev, std::size_t i);
TreeRep fuse(const std::vector<TreeRep>& seq);

struct ExtendStem {
    Nat m = 0;
};
struct Dominate {
    Str h;
};
// 𝕀 only: y_G ≥* Φ(x_G) for a total map Φ on binary strings.
struct DominateOver {
    MonotoneMap phi;
};
struct MeetOpen {
    SetRep a;
};
struct MeetPi02 {
    std::vector<SetRep> sets;
    Nat depth = 0;
};
struct TraceTask {
    BoundedFunctional phi;
    Nat depth = 0;
};
struct SchnorrCapture {
    std::variant<BoundedFunctional, PairFunctional> phi;
    Nat depth = 0;
    Nat samples = 1;
};
struct CohenDense {
    BinStr w;
};

using DensityTask =
    std::variant<ExtendStem, Dominate, DominateOver, MeetOpen, MeetPi02, TraceTask, SchnorrCapture, CohenDense>;

using Condition = std::variant<LBCond, HBCond, ICond>;

const char* forcingTag(const Condition& c);  // LB, HB or IT
std::string taskName(const DensityTask& t);

struct Route {
    Nat step = 0;
    Str node;
    std::string arm;  // bad, set, value
    Nat value = 0;
};

struct CaptureSample {
    Condition q;
    Nat n = 0;
    Condition r;
    Nat m = 0;
};

struct CaptureResult {
    SchnorrApprox approx;
    Interleaver h;
    std::vector<CaptureSample> samples;
};

struct Evidence {
    // extend, dominate, enter, avoid, fuse, trace, diverge, capture, restrict
    std::string arm;
    std::vector<Str> walk;
    std::vector<Route> routes;
    Trace trace;
    Nat index = 0;         // diverge: the convergence index m
    Nat exploreDepth = 0;  // bounded replay of "every path" claims
    Nat exploreEntry = 0;
    std::optional<CaptureResult> capture;
};

struct MeetResult {
    Condition q;
    Evidence evidence;
};

MeetResult meet(const DensityTask& task, const Condition& p);

// Throws DivergenceForceable when some extension forces Φ to diverge below length d.
CaptureResult schnorrCapture(const HBCond& p, const BoundedFunctional& phi, Nat d, Nat samples);
CaptureResult schnorrCapture(const ICond& p, const PairFunctional& phi, Nat d, Nat samples);

struct GenericRun {
    std::vector<Condition> chain;  // chain[0] = p0
    std::vector<Evidence> evidence;
    Condition prefix;  // final condition; its stem(s) form the prefix
    std::optional<Error> error;
};

GenericRun runGeneric(const Condition& p0, const std::vector<DensityTask>& tasks);

bool validCondition(const Condition& c);
bool extendsCond(const Condition& p, const Condition& q);
std::string toString(const Condition& c);
std::string prefixString(const Condition& c);

// Re-checks a run from its recorded data: chain order, validity, per-task evidence and the
// prefix against every chain element. Returns an empty string on success, else the first failure.
std::string replayRun(const std::vector<DensityTask>& tasks, const std::vector<Condition>& chain,
                      const std::vector<Evidence>& evidence);

// Every extension of the final prefix up to length `depth` accepted by the last condition is
// accepted by each chain element (in particular it avoids every bad set). Empty string on success.
std::string exploreChain(const std::vector<Condition>& chain, std::size_t depth);

}  // namespace bigness
