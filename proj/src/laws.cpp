#include "bigness/laws.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "bigness/conditions.hpp"
#include "bigness/density.hpp"
#include "bigness/format.hpp"
#include "bigness/omega.hpp"
#include "bigness/pairs.hpp"

namespace bigness {

namespace {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    Nat below(Nat n) { return n == 0 ? 0 : std::uniform_int_distribution<Nat>(0, n - 1)(eng); }
    bool coin(Nat num = 1, Nat den = 2) { return below(den) < num; }
};

Str randomStr(Rng& r, std::size_t maxLen, Nat maxEntry) {
    Str s(r.below(maxLen + 1));
    for (auto& v : s) v = r.below(maxEntry + 1);
    return s;
}

BinStr randomBits(Rng& r, std::size_t maxLen) {
    BinStr s(r.below(maxLen + 1));
    for (auto& b : s) b = static_cast<std::uint8_t>(r.below(2));
    return s;
}

Pattern randomPattern(Rng& r, std::size_t minLen, std::size_t maxLen, Nat maxEntry) {
    Pattern g(minLen + r.below(maxLen - minLen + 1));
    for (auto& e : g) {
        e.v = r.below(maxEntry + 1);
        e.ge = r.coin(1, 4);
    }
    return g;
}

SetRep randomSet(Rng& r, std::size_t maxDepth) {
    std::vector<SetRep> parts;
    for (Nat i = r.below(3); i > 0; --i) {
        switch (r.below(4)) {
            case 0:
            case 1: {
                std::vector<Pattern> gens;
                for (Nat k = 1 + r.below(3); k > 0; --k) gens.push_back(randomPattern(r, 1, maxDepth, 3));
                parts.push_back(SetRep::upFinP(gens));
                break;
            }
            case 2: parts.push_back(SetRep::minLen(1 + r.below(maxDepth))); break;
            default: parts.push_back(SetRep::coordGE(r.below(maxDepth), 1 + r.below(3))); break;
        }
    }
    return SetRep::unite(parts);
}

TreeRep randomThreshold(Rng& r, std::size_t positions) {
    std::map<Nat, Nat> theta;
    for (Nat i = 0; i < positions; ++i)
        if (r.coin()) theta[i] = r.below(4);
    return TreeRep::threshold({}, theta);
}

TreeRep randomTree(Rng& r) { return r.coin(1, 3) ? TreeRep::full() : randomThreshold(r, 3); }

Nat maxTheta(const TreeRep& t) {
    Nat w = 0;
    if (t.isThreshold())
        for (const auto& kv : t.th().theta) w = std::max(w, kv.second);
    return w;
}

PairSetRep randomPairAtom(Rng& r) {
    switch (r.below(4)) {
        case 0: return PairSetRep::empty();
        case 1: {
            std::vector<PairGen> gens(1 + r.below(2));
            for (auto& g : gens) g = {randomBits(r, 2), randomPattern(r, 0, 2, 2)};
            return PairSetRep::upFinP(gens);
        }
        case 2: return PairSetRep::minLenSecond(r.below(3));
        default: return PairSetRep::stretchGE(1 + r.below(2), r.below(2), static_cast<long long>(r.below(3)) - 1);
    }
}

PairSetRep randomPairSet(Rng& r) {
    if (r.coin(1, 3)) return randomPairAtom(r);
    std::vector<PairSetRep> parts{randomPairAtom(r), randomPairAtom(r)};
    return r.coin() ? PairSetRep::unite(parts) : PairSetRep::inter(parts);
}

std::string rankText(const RankResult& x) { return x.big ? "Big(" + std::to_string(x.rank) + ")" : "Small"; }

// Big with respect to the predicate "in cl_T(B)". Past depth(B) the closure is B itself, which is
// upward closed there, and children past every bound share one residual, so one representative
// child decides "infinitely many".
bool bigOverClosure(const TreeRep& t, const SetRep& b, const Str& s) {
    const Nat rep = std::max(bound(b), maxTheta(t)) + 1;
    const std::size_t settled = depth(b) + 1;
    std::function<bool(const Str&)> rec = [&](const Str& x) {
        if (omegaRank(t, b, x).big) return true;
        if (x.size() > settled) return false;
        return rec(extend(x, rep));
    };
    return rec(s);
}

using Case = std::function<std::optional<std::string>(Rng&)>;

struct Law {
    std::string name;
    Case run;
};

std::vector<Law> allLaws(Nat depthCap, Mutation mutation) {
    const std::size_t D = std::max<Nat>(1, depthCap);
    auto closureInstance = [D](Rng& r, TreeRep& t, SetRep& b, Str& s) {
        t = randomTree(r);
        b = randomSet(r, D);
        s = randomStr(r, 2, 4);
        return treeMember(t, s);
    };
    auto describe = [](const TreeRep& t, const SetRep& b, const Str& s) {
        return "T=" + toString(t) + " B=" + toString(b) + " s=" + toString(s);
    };
    std::vector<Law> laws;
    laws.push_back({"closure-extensive", [=](Rng& r) -> std::optional<std::string> {
                        TreeRep t;
                        SetRep b;
                        Str s;
                        if (!closureInstance(r, t, b, s)) return std::nullopt;
                        if (setMember(b, s) && !omegaRank(t, b, s).big) return describe(t, b, s);
                        return std::nullopt;
                    }});
    laws.push_back({"closure-empty", [=](Rng& r) -> std::optional<std::string> {
                        TreeRep t;
                        SetRep b;
                        Str s;
                        closureInstance(r, t, b, s);
                        if (omegaRank(t, SetRep::empty(), s).big) return describe(t, SetRep::empty(), s);
                        return std::nullopt;
                    }});
    laws.push_back({"closure-monotone", [=](Rng& r) -> std::optional<std::string> {
                        TreeRep t;
                        SetRep a;
                        Str s;
                        if (!closureInstance(r, t, a, s)) return std::nullopt;
                        const SetRep b = SetRep::unite({a, randomSet(r, D)});
                        if (omegaRank(t, a, s).big && !omegaRank(t, b, s).big)
                            return describe(t, a, s) + " superset=" + toString(b);
                        return std::nullopt;
                    }});
    laws.push_back({"closure-union", [=](Rng& r) -> std::optional<std::string> {
                        TreeRep t;
                        SetRep a;
                        Str s;
                        if (!closureInstance(r, t, a, s)) return std::nullopt;
                        const SetRep b = randomSet(r, D);
                        const auto ra = omegaRank(t, a, s);
                        const auto rb = omegaRank(t, b, s);
                        // the mutant forgets the second operand
                        const auto ru = mutation == Mutation::Union ? ra : omegaRank(t, SetRep::unite({a, b}), s);
                        RankResult expect;
                        if (ra.big || rb.big)
                            expect = RankResult::bigAt(std::min(ra.big ? ra.rank : ~Nat{0}, rb.big ? rb.rank : ~Nat{0}));
                        if (ru == expect) return std::nullopt;
                        return describe(t, a, s) + " B2=" + toString(b) + " union=" + rankText(ru) +
                               " expected=" + rankText(expect);
                    }});
    laws.push_back({"closure-idempotent", [=](Rng& r) -> std::optional<std::string> {
                        TreeRep t;
                        SetRep b;
                        Str s;
                        if (!closureInstance(r, t, b, s)) return std::nullopt;
                        if (bigOverClosure(t, b, s) != omegaRank(t, b, s).big) return describe(t, b, s);
                        return std::nullopt;
                    }});
    laws.push_back({"tree-monotone", [=](Rng& r) -> std::optional<std::string> {
                        TreeRep t;
                        SetRep b;
                        Str s;
                        if (!closureInstance(r, t, b, s)) return std::nullopt;
                        auto thin = intersectTrees(t, randomThreshold(r, 3));
                        if (!thin || !treeMember(*thin, s)) return std::nullopt;
                        if (omegaRank(*thin, b, s).big && !omegaRank(t, b, s).big)
                            return describe(t, b, s) + " subtree=" + toString(*thin);
                        return std::nullopt;
                    }});
    laws.push_back({"witness-roundtrip", [=](Rng& r) -> std::optional<std::string> {
                        TreeRep t;
                        SetRep b;
                        Str s;
                        if (!closureInstance(r, t, b, s) || !omegaRank(t, b, s).big) return std::nullopt;
                        if (!verifyWitness(t, b, extractWitness(t, b, s))) return describe(t, b, s);
                        return std::nullopt;
                    }});
    laws.push_back({"dichotomy", [=](Rng& r) -> std::optional<std::string> {
                        TreeRep t;
                        SetRep b;
                        Str s;
                        closureInstance(r, t, b, s);
                        s = treeStem(t);
                        const auto d = bigDichotomy(t, b, s);
                        if ((d.arm == Dichotomy::Arm::LaverInto) != omegaRank(t, b, s).big || !treeIncluded(d.tree, t))
                            return describe(t, b, s);
                        return std::nullopt;
                    }});
    laws.push_back({"pair-closure-union", [=](Rng& r) -> std::optional<std::string> {
                        const PairSetRep a = randomPairSet(r);
                        const PairSetRep b = randomPairSet(r);
                        const PairStr p{randomBits(r, 2), randomStr(r, 1, 2)};
                        const auto ra = pairRank(a, p);
                        const auto rb = pairRank(b, p);
                        const auto ru = pairRank(PairSetRep::unite({a, b}), p);
                        const bool ok = (!pairMember(a, p) || ra.big) && !pairRank(PairSetRep::empty(), p).big &&
                                        ru.big == (ra.big || rb.big) &&
                                        (!ru.big || ru.rank == std::min(ra.big ? ra.rank : ~Nat{0}, rb.big ? rb.rank : ~Nat{0}));
                        if (ok) return std::nullopt;
                        return "A=" + toString(a) + " B=" + toString(b) + " p=" + toString(p);
                    }});
    laws.push_back({"pair-witness-roundtrip", [=](Rng& r) -> std::optional<std::string> {
                        const PairSetRep b = randomPairSet(r);
                        const PairStr p{randomBits(r, 2), randomStr(r, 1, 2)};
                        if (!pairRank(b, p).big) return std::nullopt;
                        if (verifyPairWitness(b, extractPairWitness(b, p))) return std::nullopt;
                        return "B=" + toString(b) + " p=" + toString(p);
                    }});
    laws.push_back({"fusion-intersection", [=](Rng& r) -> std::optional<std::string> {
                        std::vector<TreeRep> seq{randomThreshold(r, 3)};
                        for (std::size_t i = 0; i < 3; ++i) {
                            auto next = intersectTrees(seq.back(), randomThreshold(r, 4));
                            if (!next || !fusionStep(*next, seq.back(), i)) break;
                            seq.push_back(*next);
                        }
                        const TreeRep t = fuse(seq);
                        for (const auto& x : enumerateTree(TreeRep::full(), 3, 5)) {
                            bool all = true;
                            for (const auto& s : seq) all = all && treeMember(s, x);
                            if (treeMember(t, x) != all) return "sequence of " + std::to_string(seq.size()) + " at " + toString(x);
                        }
                        for (std::size_t i = 0; i < seq.size(); ++i)
                            if (pSet(t, i) != pSet(seq[i], i)) return "P_" + std::to_string(i) + " changed";
                        return std::nullopt;
                    }});
    laws.push_back({"centered-merge", [=](Rng& r) -> std::optional<std::string> {
                        const Str stem = randomStr(r, 2, 3);
                        const HBCond p{stem, randomStr(r, 3, 3), randomSet(r, D)};
                        const HBCond q{stem, randomStr(r, 3, 3), randomSet(r, D)};
                        if (!validateCondition(p) || !validateCondition(q)) return std::nullopt;
                        const HBCond m = centeredMerge(p, q);
                        if (validateCondition(m) && extendsQ(m, p) && extendsQ(m, q)) return std::nullopt;
                        return "p=" + toString(p) + " q=" + toString(q);
                    }});
    return laws;
}

}  // namespace

bool LawReport::ok() const {
    return std::all_of(laws.begin(), laws.end(), [](const LawOutcome& l) { return !l.counterexample; });
}

LawReport runLawSuite(Nat seed, Nat cases, Nat depth, Mutation mutation) {
    LawReport report{seed, cases, depth, mutation, {}};
    const auto laws = allLaws(depth, mutation);
    for (std::size_t k = 0; k < laws.size(); ++k) {
        Rng r(seed * 1000003 + k);
        LawOutcome out{laws[k].name, 0, cases, std::nullopt};
        for (Nat c = 0; c < cases; ++c) {
            auto failure = laws[k].run(r);
            if (!failure) {
                ++out.passed;
                continue;
            }
            const bool smaller = !out.counterexample || failure->size() < out.counterexample->size() ||
                                 (failure->size() == out.counterexample->size() && *failure < *out.counterexample);
            if (smaller) out.counterexample = failure;
        }
        report.laws.push_back(std::move(out));
    }
    return report;
}

std::string toString(const LawReport& r) {
    std::string out = "bigness-laws v1\n";
    out += "seed " + std::to_string(r.seed) + "\ncases " + std::to_string(r.cases) + "\ndepth " + std::to_string(r.depth) + "\n";
    if (r.mutation == Mutation::Union) out += "mutation union\n";
    for (const auto& l : r.laws) out += "law " + l.name + " " + std::to_string(l.passed) + "/" + std::to_string(l.total) + "\n";
    for (const auto& l : r.laws)
        if (l.counterexample) out += "counterexample " + l.name + " " + *l.counterexample + "\n";
    out += r.ok() ? "status pass\n" : "status fail\n";
    return out;
}

}  // namespace bigness
