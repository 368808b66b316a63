#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bigness/pairs.hpp"
#include "pair_oracle.hpp"

using namespace bigness;

namespace {

const PairStr kRoot{};

std::optional<Nat> asOpt(const RankResult& r) { return r.big ? std::optional<Nat>(r.rank) : std::nullopt; }

PairSetRep zeroFiber() { return PairSetRep::upFinP({PairGen{{0}, {}}}); }

Errc errorOf(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::Parse;
}

// Keep the justification chain up to the first class of rank ≤ 1.
PairWitness truncateAtRankOne(const PairSetRep& b, const PairWitness& w) {
    PairWitness out;
    out.stem = w.stem;
    for (const auto& c : w.classes) {
        out.classes.push_back(c);
        if (pairRank(b, representative(c)).rank <= 1) break;
    }
    return out;
}

}  // namespace

TEST_CASE("pairRank examples") {
    CHECK(toString(pairRank(PairSetRep::empty(), kRoot)) == "Small");
    CHECK(toString(pairRank(PairSetRep::minLenSecond(1), kRoot)) == "Big(1)");
    CHECK(toString(pairRank(zeroFiber(), kRoot)) == "Big(1)");
    CHECK(toString(pairRank(zeroFiber(), {{1}, {}})) == "Small");
}

TEST_CASE("pair-set syntax round trips") {
    for (const char* text : {"Empty", "UpFinP{([],[>=2]),([0],[1])}", "MinLenSecond(2)", "StretchGE(2,1,-1)",
                             "Union[MinLenSecond(2),StretchGE(1,0,0)]", "Inter[StretchGE(1,0,0),UpFinP{([1],[])}]"}) {
        CHECK(toString(parsePairSetRep(text)) == text);
    }
    CHECK(toString(parsePairSetRep("StretchGE(2,5,0)")) == "StretchGE(2,1,-2)");
    CHECK(toString(parsePairSetRep("Union[UpFinP{([0],[])},UpFinP{([0,1],[3])}]")) == "UpFinP{([0],[])}");
    CHECK(toString(parsePairSetRep("Inter[]")) == "UpFinP{([],[])}");
    CHECK(errorOf([] { parsePairSetRep("StretchGE(0,0,0)"); }) == Errc::Parse);
    CHECK(errorOf([] { parsePairSetRep("UpFinP{([2],[])}"); }) == Errc::Parse);
}

TEST_CASE("extractPairWitness examples") {
    auto w = extractPairWitness(PairSetRep::minLenSecond(1), kRoot);
    REQUIRE(w.classes.size() == 2);
    const PairClass& leaf = w.classes[1];
    CHECK(leaf.deep);
    CHECK(leaf.generic == std::vector<std::uint8_t>{1});
    CHECK(leaf.just == std::vector<std::size_t>{0});
    CHECK(pairLeaves(w) == std::vector<std::size_t>{1});
    CHECK(verifyPairWitness(PairSetRep::minLenSecond(1), w));

    auto single = extractPairWitness(PairSetRep::everything(), kRoot);
    CHECK(single.classes.size() == 1);
    CHECK(verifyPairWitness(PairSetRep::everything(), single));

    CHECK(errorOf([] { extractPairWitness(PairSetRep::empty(), kRoot); }) == Errc::NotBig);
}

TEST_CASE("verifyPairWitness rejects broken witnesses") {
    const PairSetRep b = PairSetRep::minLenSecond(2);
    auto w = extractPairWitness(b, kRoot);
    REQUIRE(w.classes.size() == 3);
    CHECK(verifyPairWitness(b, w));

    PairWitness flat = w;  // the justified class no longer has a longer first coordinate
    flat.classes[2].p = flat.classes[1].p;
    flat.classes[2].ell = flat.classes[1].minLength();
    CHECK_FALSE(verifyPairWitness(b, flat));

    PairWitness cyclic = w;
    cyclic.classes[1].just = {2};
    CHECK_FALSE(verifyPairWitness(b, cyclic));

    PairWitness early = w;  // stop one step short: the leaf is not in B
    early.classes.pop_back();
    CHECK_FALSE(verifyPairWitness(b, early));

    PairWitness finite = w;  // a fixed second-coordinate value instead of a generic template
    finite.classes[1].generic = {0};
    finite.classes[2].generic = {0, 1};
    CHECK_FALSE(verifyPairWitness(b, finite));
}

TEST_CASE("concatPairWitnesses") {
    const PairSetRep all = PairSetRep::everything();
    auto one = extractPairWitness(all, kRoot);
    auto joined = concatPairWitnesses(one, {{0, one}});
    CHECK(joined.classes.size() == 1);
    CHECK(verifyPairWitness(all, joined));

    const PairSetRep b = PairSetRep::minLenSecond(2);
    auto outer = extractPairWitness(PairSetRep::minLenSecond(1), kRoot);
    auto inner = extractPairWitness(b, {{5}, {}});
    CHECK(errorOf([&] { concatPairWitnesses(outer, {{1, inner}}); }) == Errc::StemMismatch);

    // rank-1 outer into cl_p(B), rank-1 inner into B at the outer leaf
    auto cut = truncateAtRankOne(b, extractPairWitness(b, kRoot));
    CHECK(verifyPairWitnessWith(cut, [&](const PairClass& c) { return pairRank(b, representative(c)).big; }));
    CHECK_FALSE(verifyPairWitness(b, cut));
    const std::size_t leaf = pairLeaves(cut).at(0);
    auto fromLeaf = extractPairWitnessFromClass(b, cut.classes[leaf]);
    auto full = concatPairWitnesses(cut, {{leaf, fromLeaf}});
    CHECK(verifyPairWitness(b, full));
    CHECK(pairLeaves(full).size() == 1);
}

TEST_CASE("property: pairRank agrees with the brute-force evaluator") {
    gen::Rng r(31);
    int checked = 0;
    for (int c = 0; c < 300; ++c) {
        PairSetRep b = gen::pairSetRep(r);
        PairStr p{gen::binStr(r, 2), gen::str(r, 1, 2)};
        CHECK_MESSAGE(asOpt(pairRank(b, p)) == oracle::pairRank(b, p), toString(b) << " at " << toString(p));
        ++checked;
    }
    CHECK(checked == 300);
}

TEST_CASE("property: extensive, monotone, empty-preserving and union laws") {
    gen::Rng r(32);
    for (int c = 0; c < 300; ++c) {
        PairSetRep a = gen::pairSetRep(r);
        PairSetRep b = gen::pairSetRep(r);
        PairStr p{gen::binStr(r, 3), gen::str(r, 2, 3)};
        auto ra = pairRank(a, p);
        auto rb = pairRank(b, p);
        auto ru = pairRank(PairSetRep::unite({a, b}), p);
        if (pairMember(a, p)) CHECK(ra.big);
        CHECK_FALSE(pairRank(PairSetRep::empty(), p).big);
        // a ⊆ a ∪ b
        if (ra.big) CHECK(ru.big);
        CHECK(ru.big == (ra.big || rb.big));
        if (ru.big) CHECK(ru.rank == std::min(ra.big ? ra.rank : ~Nat{0}, rb.big ? rb.rank : ~Nat{0}));
        // a ∩ b ⊆ a
        if (pairRank(PairSetRep::inter({a, b}), p).big) CHECK(ra.big);
    }
}

TEST_CASE("property: witness round trip and idempotency by concatenation") {
    gen::Rng r(33);
    int verified = 0;
    for (int c = 0; c < 300; ++c) {
        PairSetRep b = gen::pairSetRep(r);
        PairStr p{gen::binStr(r, 2), gen::str(r, 1, 2)};
        auto rk = pairRank(b, p);
        if (!rk.big) {
            CHECK(errorOf([&] { extractPairWitness(b, p); }) == Errc::NotBig);
            continue;
        }
        auto w = extractPairWitness(b, p);
        CHECK_MESSAGE(verifyPairWitness(b, w), toString(b) << " at " << toString(p) << ": " << toString(w));
        CHECK(w.classes.size() == rk.rank + 1);

        auto cut = truncateAtRankOne(b, w);
        CHECK(verifyPairWitnessWith(cut, [&](const PairClass& x) { return pairRank(b, representative(x)).big; }));
        std::map<std::size_t, PairWitness> inner;
        for (auto leaf : pairLeaves(cut)) inner[leaf] = extractPairWitnessFromClass(b, cut.classes[leaf]);
        CHECK(verifyPairWitness(b, concatPairWitnesses(cut, inner)));
        ++verified;
    }
    CHECK(verified > 50);
}

TEST_CASE("property: stretch-one length constraint is absorbed") {
    gen::Rng r(34);
    const PairSetRep lengthOk = PairSetRep::stretchGE(1, 0, 0);
    for (int c = 0; c < 300; ++c) {
        PairSetRep a = gen::pairSetRep(r, false);
        PairSetRep both = PairSetRep::inter({a, lengthOk});
        PairStr p{gen::binStr(r, 3), gen::str(r, 2, 2)};
        auto ra = pairRank(a, p);
        auto rb = pairRank(both, p);
        CHECK(ra.big == rb.big);
        if (rb.big) CHECK(verifyPairWitness(both, extractPairWitness(both, p)));
    }
}
