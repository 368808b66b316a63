#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bigness/format.hpp"
#include "bigness/omega.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace bigness;

namespace {

const TreeRep kFull = TreeRep::full();

void allStrings(std::size_t maxLen, Nat maxEntry, const std::function<void(const Str&)>& f) {
    Str cur;
    std::function<void()> rec = [&] {
        f(cur);
        if (cur.size() == maxLen) return;
        for (Nat n = 0; n <= maxEntry; ++n) {
            cur.push_back(n);
            rec();
            cur.pop_back();
        }
    };
    rec();
}

std::optional<Nat> asOpt(const RankResult& r) { return r.big ? std::optional<Nat>(r.rank) : std::nullopt; }

}  // namespace

TEST_CASE("omegaRank examples") {
    CHECK(toString(omegaRank(kFull, SetRep::empty(), {})) == "Small");
    CHECK(toString(omegaRank(kFull, SetRep::minLen(2), {})) == "Big(2)");
    CHECK(toString(omegaRank(kFull, SetRep::upFin({{0}}), {})) == "Small");
    CHECK(toString(omegaRank(kFull, SetRep::upFin({{0}}), {0})) == "Big(0)");
    CHECK(toString(omegaRank(TreeRep::threshold({}, {{0, 5}}), SetRep::minLen(1), {})) == "Big(1)");
}

TEST_CASE("extractWitness examples") {
    auto w = extractWitness(kFull, SetRep::minLen(1), {});
    REQUIRE(w.nodes[w.root].generic);
    CHECK(w.nodes[w.root].generic->first == 0);
    CHECK(w.nodes[w.root].named.empty());
    CHECK(w.nodes[w.nodes[w.root].generic->second].isLeaf());
    CHECK(verifyWitness(kFull, SetRep::minLen(1), w));

    auto single = extractWitness(kFull, SetRep::upFin({{2}}), {2});
    CHECK(single.nodes.size() == 1);
    CHECK(single.stem == Str{2});
    CHECK(verifyWitness(kFull, SetRep::upFin({{2}}), single));

    try {
        extractWitness(kFull, SetRep::upFin({{0}}), {});
        FAIL("expected NotBig");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotBig);
    }
}

TEST_CASE("verifyWitness rejects broken witnesses") {
    const SetRep b = SetRep::minLen(1);
    auto w = extractWitness(kFull, b, {});
    // the leaf sits at the root: the root string is not in B
    BushyWitness relabeled = w;
    relabeled.nodes[relabeled.root] = WitnessNode{};
    CHECK_FALSE(verifyWitness(kFull, b, relabeled));
    // three named children and no generic template
    BushyWitness finite = w;
    std::size_t leaf = w.nodes[w.root].generic->second;
    finite.nodes[finite.root] = WitnessNode{{{0, leaf}, {1, leaf}, {2, leaf}}, std::nullopt};
    CHECK_FALSE(verifyWitness(kFull, b, finite));
    // a cycle back to the root
    BushyWitness cyclic = w;
    cyclic.nodes[leaf].generic = std::make_pair(Nat{0}, cyclic.root);
    CHECK_FALSE(verifyWitness(kFull, b, cyclic));
}

TEST_CASE("bigDichotomy examples") {
    auto big = bigDichotomy(kFull, SetRep::minLen(2), {});
    CHECK(big.arm == Dichotomy::Arm::LaverInto);
    CHECK(toString(big.tree) == "Graft(Node{>=0:Node{>=0:Tail(Full)}})");

    auto avoid = bigDichotomy(kFull, SetRep::upFin({{0}}), {});
    CHECK(avoid.arm == Dichotomy::Arm::HechlerAvoid);
    CHECK(toString(avoid.tree) == "Threshold([],{0:1})");

    auto none = bigDichotomy(kFull, SetRep::empty(), {});
    CHECK(none.arm == Dichotomy::Arm::HechlerAvoid);
    CHECK(none.tree.isFull());
}

TEST_CASE("property: omegaRank agrees with the brute-force evaluator") {
    gen::Rng r(21);
    for (int c = 0; c < 500; ++c) {
        TreeRep t = r.coin(1, 3) ? kFull : TreeRep::threshold({}, gen::threshold(r, 0, 3, 3).th().theta);
        SetRep b = gen::setRep(r, 3, 3);
        Str s = gen::str(r, 2, 4);
        if (!treeMember(t, s)) continue;
        CHECK_MESSAGE(asOpt(omegaRank(t, b, s)) == oracle::omegaRank(oracle::plain(t), b, s),
                      toString(t) << " " << toString(b) << " " << toString(s));
    }
}

TEST_CASE("property: witness round trip and dichotomy soundness") {
    gen::Rng r(22);
    for (int c = 0; c < 300; ++c) {
        TreeRep t = r.coin() ? kFull : gen::threshold(r, 1, 3, 3);
        SetRep b = gen::setRep(r, 3, 3);
        Str s = treeStem(t);
        auto rk = omegaRank(t, b, s);
        auto d = bigDichotomy(t, b, s);
        CHECK((d.arm == Dichotomy::Arm::LaverInto) == rk.big);
        const std::size_t depthLimit = depth(b) + s.size() + 1;
        const Nat maxE = bound(b) + 4;
        if (rk.big) {
            auto w = extractWitness(t, b, s);
            CHECK(verifyWitness(t, b, w));
        }
        for (const auto& x : enumerateTree(d.tree, depthLimit, maxE)) {
            CHECK(treeMember(t, x));
            if (x.size() < depthLimit) continue;
            bool hit = false;
            for (std::size_t k = 0; k <= x.size(); ++k)
                if (setMember(b, Str(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k)))) hit = true;
            CHECK(hit == rk.big);
        }
    }
}

TEST_CASE("property: closure laws") {
    gen::Rng r(23);
    for (int c = 0; c < 300; ++c) {
        TreeRep t = r.coin() ? kFull : TreeRep::threshold({}, gen::threshold(r, 0, 3, 3).th().theta);
        SetRep a = gen::setRep(r, 3, 3);
        SetRep b = gen::setRep(r, 3, 3);
        Str s = gen::str(r, 2, 4);
        if (!treeMember(t, s)) continue;
        auto ra = omegaRank(t, a, s);
        auto rb = omegaRank(t, b, s);
        auto ru = omegaRank(t, SetRep::unite({a, b}), s);
        if (setMember(a, s)) CHECK(ra.big);
        CHECK_FALSE(omegaRank(t, SetRep::empty(), s).big);
        if (setIncluded(a, b) && ra.big) CHECK(rb.big);
        CHECK(ru.big == (ra.big || rb.big));
        if (ru.big) CHECK(ru.rank == std::min(ra.big ? ra.rank : ~Nat{0}, rb.big ? rb.rank : ~Nat{0}));
        // a thinner threshold tree keeps fewer big nodes
        auto thin = TreeRep::threshold({}, gen::threshold(r, 0, 3, 3).th().theta);
        auto both = intersectTrees(t, thin);
        if (both && treeMember(*both, s) && omegaRank(*both, a, s).big) CHECK(ra.big);
    }
}

TEST_CASE("property: idempotency with the closure as predicate") {
    gen::Rng r(24);
    for (int c = 0; c < 150; ++c) {
        TreeRep t = r.coin() ? kFull : TreeRep::threshold({}, gen::threshold(r, 0, 2, 3).th().theta);
        SetRep b = gen::setRep(r, 3, 3);
        auto pt = oracle::plain(t);
        const Nat w = std::max(bound(b), pt.maxEntry());
        auto inClosure = [&](const Str& x) { return omegaRank(t, b, x).big; };
        allStrings(2, w + 1, [&](const Str& s) {
            if (!treeMember(t, s)) return;
            bool twice = oracle::predicateRank(pt, inClosure, w, s, depth(b) + 1).has_value();
            CHECK(twice == omegaRank(t, b, s).big);
        });
    }
}
