#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bigness/conditions.hpp"
#include "bigness/format.hpp"
#include "pair_oracle.hpp"

using namespace bigness;

namespace {

Errc errorOf(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::Parse;
}

ICond padCond(Nat stretch, Nat fill) { return {{}, MonotoneMap::pad(stretch, fill), {}, PairSetRep::empty()}; }

void allPairsAbove(const PairStr& key, std::size_t extraSigma, std::size_t extraTau, Nat maxEntry,
                   const std::function<void(const PairStr&)>& f) {
    std::function<void(Str&)> taus = [&](Str& tau) {
        for (std::size_t len = key.first.size(); len <= key.first.size() + extraSigma; ++len)
            for (Nat code = 0; code < (Nat{1} << (len - key.first.size())); ++code) {
                BinStr s = key.first;
                for (std::size_t i = key.first.size(); i < len; ++i)
                    s.push_back(static_cast<std::uint8_t>((code >> (i - key.first.size())) & 1));
                f({s, tau});
            }
        if (tau.size() == key.second.size() + extraTau) return;
        for (Nat v = 0; v <= maxEntry; ++v) {
            tau.push_back(v);
            taus(tau);
            tau.pop_back();
        }
    };
    Str tau = key.second;
    taus(tau);
}

// Random valid pad-rule condition: random pad and bad set, then up to two random extensions.
ICond randomICond(gen::Rng& r) {
    for (;;) {
        ICond p = padCond(1 + r.below(2), r.below(3));
        p.bad = gen::pairSetRep(r);
        if (!validateCondition(p)) continue;
        for (Nat step = r.below(3); step > 0; --step) {
            std::vector<PairStr> options;
            allPairsAbove({p.mindom, p.stm}, 2, 1, p.f.fill + 2, [&](const PairStr& x) {
                if (x.second.size() > p.stm.size() && iterMembership(p, x).inE) options.push_back(x);
            });
            if (options.empty()) break;
            p = extensionAt(p, options[r.below(options.size())]);
        }
        return p;
    }
}

}  // namespace

TEST_CASE("validateCondition examples") {
    CHECK(validateCondition(LBCond{TreeRep::full(), SetRep::upFin({{0}}), {}}));
    CHECK_FALSE(validateCondition(LBCond{TreeRep::full(), SetRep::minLen(2), {}}));
    CHECK(validateCondition(padCond(1, 0)));
    CHECK(toString(topICond()) == "I([],Map({},1,0),[],Empty)");
}

TEST_CASE("extendsQ examples") {
    const SetRep bad = SetRep::upFin({{0}});
    CHECK(extendsQ(LBCond{TreeRep::threshold({}, {{0, 6}, {1, 4}}), bad, {}}, LBCond{TreeRep::full(), bad, {}}));
    const HBCond top{{}, {3}, SetRep::empty()};
    CHECK(extendsQ(HBCond{{3}, {3}, SetRep::empty()}, top));
    CHECK_FALSE(extendsQ(HBCond{{2}, {3}, SetRep::empty()}, top));
}

TEST_CASE("centeredMerge examples") {
    auto merged = centeredMerge(HBCond{{}, {3}, SetRep::empty()}, HBCond{{}, {1, 4}, SetRep::empty()});
    CHECK(merged.f == Str{3, 4});
    CHECK(errorOf([] { centeredMerge(HBCond{{1}, {}, SetRep::empty()}, HBCond{{2}, {}, SetRep::empty()}); }) ==
          Errc::NotCentered);

    ICond a = padCond(1, 0), b = padCond(1, 0);
    b.bad = PairSetRep::upFinP({PairGen{{}, {Entry{0, false}, Entry{0, false}}}});
    a.bad = PairSetRep::upFinP({PairGen{{1, 1}, {Entry{2, false}}}});
    auto m = centeredMerge(a, b);
    CHECK(toString(m.bad) == toString(PairSetRep::unite({a.bad, b.bad})));
    CHECK(validateCondition(m));
    CHECK(extendsQ(m, a));
    CHECK(extendsQ(m, b));
}

TEST_CASE("iterMembership examples") {
    const ICond p = padCond(1, 2);
    auto at = [&](BinStr s, Str t) { return iterMembership(p, {s, t}); };
    auto m1 = at({0, 1}, {5, 2});
    CHECK(m1.inC);
    CHECK_FALSE(m1.inD);
    CHECK(m1.inE);
    auto m2 = at({0}, {5, 2});
    CHECK_FALSE(m2.inC);
    CHECK_FALSE(m2.inE);
    auto m3 = at({0, 1}, {1, 2});
    CHECK(m3.inD);
    CHECK_FALSE(m3.inE);
}

TEST_CASE("extensionAt examples") {
    const ICond p = padCond(1, 2);
    auto q = extensionAt(p, {{0, 1}, {5, 2}});
    CHECK(toString(q.f) == "Map({[0,1]:[5,2]},1,2)");
    CHECK(q.mindom == BinStr{0, 1});
    CHECK(q.stm == Str{5, 2});
    CHECK(validateCondition(q));
    CHECK(extendsQ(q, p));

    auto h = extensionAt(HBCond{{}, {3, 3}, SetRep::empty()}, Str{4, 3});
    CHECK(h.stem == Str{4, 3});
    CHECK(h.f == Str{3, 3});
    CHECK(errorOf([&] { extensionAt(p, {{0, 1}, {1, 2}}); }) == Errc::NotAnExtension);
}

TEST_CASE("satisfiesPrefix examples") {
    const HBCond h{{}, {3}, SetRep::upFin({{5}})};
    CHECK(satisfiesPrefix(h, {4, 9}));
    CHECK_FALSE(satisfiesPrefix(h, {5, 0}));
    const LBCond l{TreeRep::threshold({}, {{0, 6}, {1, 4}}), SetRep::upFin({{7}}), {}};
    CHECK(satisfiesPrefix(l, {8, 4}));
}

TEST_CASE("MonotoneMap evaluation") {
    MonotoneMap f{{{{0, 1}, {5, 2}}}, 1, 2};
    CHECK(f({}) == Str{});
    CHECK(f({0}) == Str{});  // below a key: no padding
    CHECK(f({1}) == Str{2});
    CHECK(f({0, 1}) == Str{5, 2});
    CHECK(f({0, 1, 1}) == Str{5, 2, 2});
    CHECK(f({0, 0, 0}) == Str{2, 2, 2});
    CHECK(validMap(f));
    MonotoneMap broken{{{{0}, {1}}, {{0, 1}, {5, 2}}}, 1, 0};
    CHECK_FALSE(validMap(broken));
    MonotoneMap slow = MonotoneMap::pad(2, 1);
    CHECK(slow({0, 0, 0, 0, 0}) == Str{1, 1});
}

TEST_CASE("property: fromFunction reproduces the function") {
    gen::Rng r(41);
    for (int c = 0; c < 100; ++c) {
        ICond p = randomICond(r);
        MonotoneMap rebuilt = MonotoneMap::fromFunction([&](const BinStr& x) { return p.f(x); }, p.f.stretch, p.f.fill,
                                                        p.f.horizon() + 1);
        CHECK(rebuilt.table.size() <= p.f.table.size());
        for (std::size_t len = 0; len <= p.f.horizon() + 4; ++len)
            for (Nat code = 0; code < (Nat{1} << len); ++code) {
                BinStr x(len);
                for (std::size_t i = 0; i < len; ++i) x[i] = static_cast<std::uint8_t>((code >> i) & 1);
                CHECK(rebuilt(x) == p.f(x));
            }
    }
}

TEST_CASE("property: extension is a preorder and merges extend both sides") {
    gen::Rng r(42);
    for (int c = 0; c < 60; ++c) {
        ICond p = randomICond(r);
        CHECK(validateCondition(p));
        CHECK(extendsQ(p, p));
        CHECK(extendsQ(p, padCond(p.f.stretch, 0)));
        std::vector<PairStr> options;
        allPairsAbove({p.mindom, p.stm}, 2, 1, 3, [&](const PairStr& x) {
            if (iterMembership(p, x).inE) options.push_back(x);
        });
        if (options.empty()) continue;
        ICond q = extensionAt(p, options[r.below(options.size())]);
        CHECK(extendsQ(q, p));
        options.clear();
        allPairsAbove({q.mindom, q.stm}, 2, 1, 3, [&](const PairStr& x) {
            if (iterMembership(q, x).inE) options.push_back(x);
        });
        if (options.empty()) continue;
        ICond s = extensionAt(q, options[r.below(options.size())]);
        CHECK(extendsQ(s, q));
        CHECK(extendsQ(s, p));

        ICond other = q;
        other.bad = PairSetRep::unite({q.bad, gen::pairSetRep(r, false)});
        if (!validateCondition(other)) continue;
        ICond m = centeredMerge(q, other);
        CHECK(validateCondition(m));
        CHECK(extendsQ(m, q));
        CHECK(extendsQ(m, other));
    }
    for (int c = 0; c < 200; ++c) {
        Str stem = gen::str(r, 2, 4);
        HBCond a{stem, gen::str(r, 3, 4), gen::setRep(r, 2, 3)};
        HBCond b{stem, gen::str(r, 3, 4), gen::setRep(r, 2, 3)};
        if (!validateCondition(a) || !validateCondition(b)) continue;
        CHECK(extendsQ(a, a));
        HBCond m = centeredMerge(a, b);
        CHECK(validateCondition(m));
        CHECK(extendsQ(m, a));
        CHECK(extendsQ(m, b));
        Str longer = extend(stem, lowerBoundAt(m.f, stem.size()) + r.below(3));
        if (omegaRank(TreeRep::full(), m.bad, longer).big) continue;
        HBCond e = extensionAt(m, longer);
        CHECK(extendsQ(e, m));
        CHECK(extendsQ(e, a));
    }
}

TEST_CASE("property: possible extensions are exactly C minus (closure of bad and D)") {
    gen::Rng r(43);
    int accepted = 0;
    for (int c = 0; c < 60; ++c) {
        ICond p = randomICond(r);
        const Nat w = std::max<Nat>(pairBound(p.bad), p.f.fill) + 1;
        allPairsAbove({p.mindom, p.stm}, 3, 2, w, [&](const PairStr& x) {
            const auto m = iterMembership(p, x);
            if (m.inE) {
                ICond q = extensionAt(p, x);
                CHECK(validateCondition(q));
                CHECK(extendsQ(q, p));
                CHECK(q.mindom == x.first);
                CHECK(q.stm == x.second);
                ++accepted;
            } else {
                CHECK(errorOf([&] { extensionAt(p, x); }) == Errc::NotAnExtension);
                // a pair with f(σ) ≤ τ on |τ| converged entries is outside D
                const Str fx = p.f(x.first);
                if (m.inC && pointwiseLeq(fx, x.second)) CHECK_FALSE(m.inD);
            }
        });
    }
    CHECK(accepted > 100);
}

TEST_CASE("property: long possible extensions are big above the key") {
    gen::Rng r(44);
    for (int c = 0; c < 25; ++c) {
        ICond p = randomICond(r);
        Nat w = std::max<Nat>(pairBound(p.bad), p.f.fill);
        for (const auto& [_, v] : p.f.table)
            for (Nat e : v) w = std::max(w, e);
        ++w;
        for (Nat m = 0; m <= 3; ++m) {
            const std::size_t len = std::max<std::size_t>(m, p.stm.size());
            std::vector<PairGen> gens;
            // entries above w behave alike, so a point with entry w + 1 stands for all larger ones
            allPairsAbove({p.mindom, p.stm}, 2 * len + 2, len - p.stm.size(), w + 1, [&](const PairStr& x) {
                if (x.second.size() != len || x.first.size() < len) return;
                bigness::Pattern pat = exactPattern(x.second);
                for (std::size_t i = p.stm.size(); i < len; ++i)
                    if (x.second[i] == w + 1) pat[i].ge = true;
                for (const auto& g : gens)
                    if (g.second == pat && isPrefix(g.first, x.first)) return;
                if (!iterMembership(p, x).inE) return;
                gens.push_back(PairGen{x.first, pat});
            });
            CHECK_MESSAGE(pairRank(PairSetRep::upFinP(gens), {p.mindom, p.stm}).big, toString(p) << " m=" << m);
        }
    }
}
