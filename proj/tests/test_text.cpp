#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "bigness/text.hpp"
#include "gen.hpp"

using namespace bigness;

namespace {

const char* kLB =
    "bigness-scenario v1\n"
    "# comment lines are skipped\n"
    "forcing LB\n"
    "condition LB(Full,Empty,[])\n"
    "task Dominate([5,3])\n"
    "task MeetOpen(UpFin{[0]})\n"
    "task ExtendStem(2)\n"
    "depth 6\n"
    "seed 1\n";

const char* kHB =
    "bigness-scenario v1\n"
    "forcing HB\n"
    "condition HB([],[3,3],Empty)\n"
    "task MeetOpen(MinLen(2))\n"
    "task Dominate([4,4,4])\n"
    "task ExtendStem(3)\n"
    "depth 6\n"
    "seed 1\n";

const char* kIT =
    "bigness-scenario v1\n"
    "forcing IT\n"
    "condition I([],Map({},1,0),[],Empty)\n"
    "task CohenDense([1])\n"
    "task DominateOver(Map({[0]:[2]},1,1))\n"
    "task ExtendStem(2)\n"
    "depth 6\n"
    "seed 1\n";

Errc errorOf(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::Parse;
}

Certificate certified(const char* text) {
    const Scenario s = parseScenario(text);
    return certify(s, runGeneric(s.p0, s.tasks));
}

std::string replaceOnce(std::string s, const std::string& from, const std::string& to) {
    const auto at = s.find(from);
    REQUIRE(at != std::string::npos);
    return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("scenario text reads back unchanged") {
    for (const char* text : {kLB, kHB, kIT}) {
        const Scenario s = parseScenario(text);
        const std::string printed = toString(s);
        CHECK(toString(parseScenario(printed)) == printed);
    }
    const Scenario s = parseScenario(kLB);
    CHECK(s.tasks.size() == 3);
    CHECK(s.depth == 6);
    CHECK(toString(s.tasks[0]) == "Dominate([5,3])");
}

TEST_CASE("malformed scenarios are parse errors") {
    CHECK(errorOf([] { parseScenario("forcing LB\ncondition LB(Full,Empty,[])\n"); }) == Errc::Parse);
    CHECK(errorOf([] { parseScenario("bigness-scenario v1\nforcing LB\ncondition LB(Full,Empty\n"); }) == Errc::Parse);
    CHECK(errorOf([] { parseScenario("bigness-scenario v1\nforcing LB\ncondition LB(Full,Empty,[])\nflavour x\n"); }) ==
          Errc::Parse);
    CHECK(errorOf([] { parseScenario("bigness-scenario v1\nforcing HB\ncondition LB(Full,Empty,[])\n"); }) ==
          Errc::Parse);
    CHECK(errorOf([] { parseTask("Dominate([5,3]"); }) == Errc::Parse);
    CHECK(errorOf([] { parseCondition("I([],Map({},0,0),[],Empty)"); }) == Errc::Parse);
}

TEST_CASE("tasks and conditions read back unchanged") {
    for (const char* t : {"ExtendStem(2)", "Dominate([5,3])", "DominateOver(Map({[0]:[2]},1,1))", "MeetOpen(UpFin{[0]})",
                          "MeetPi02({MinLen(1),UpFin{[>=2]}},3)", "TraceTask(Phi({[0]:[1]},[1]),2)",
                          "SchnorrCapture(Phi({[0]:[1],[>=1]:[0]},[1]),2,1)", "CohenDense([1])"})
        CHECK(toString(parseTask(t)) == t);
    for (const char* c : {"LB(Full,Empty,[])", "LB(Threshold([],{0:6,1:4}),UpFin{[0]},[])", "HB([3,3],[4,4,4],MinLen(2))",
                          "I([1,1],Map({[0]:[0],[1,0]:[1]},1,1),[1,0],Empty)"})
        CHECK(toString(parseCondition(c)) == c);
}

TEST_CASE("certificates of the worked scenarios round trip and verify") {
    for (const char* text : {kLB, kHB, kIT}) {
        const Certificate c = certified(text);
        CHECK_FALSE(c.error);
        const std::string printed = toString(c);
        CHECK(toString(parseCertificate(printed)) == printed);
        CHECK(verifyCertificate(parseCertificate(printed)) == "");
    }
    const Certificate lb = certified(kLB);
    CHECK(lb.prefix == "[6,4]");
    CHECK(toString(lb.chain[1]) == "LB(Threshold([],{0:6,1:4}),Empty,[])");
    CHECK(certified(kHB).prefix == "[3,3,4]");
}

TEST_CASE("tampered certificates are rejected") {
    const std::string good = toString(certified(kLB));
    const auto verdict = [](const std::string& text) { return verifyCertificate(parseCertificate(text)); };

    CHECK(verdict(replaceOnce(good, "prefix [6,4]", "prefix [6,5]")) != "");
    CHECK(verdict(replaceOnce(good, "chain LB(Threshold([],{0:6,1:4}),Empty,[])",
                              "chain LB(Threshold([],{0:5,1:4}),Empty,[])")) != "");
    CHECK(verdict(replaceOnce(good, "Ev(avoid,", "Ev(enter,")) != "");
    CHECK(verdict(replaceOnce(good, "status ok", "status error TaskInapplicable gone")) != "");
    CHECK(verdict(replaceOnce(good, "chain LB(Full,Empty,[])", "chain LB(Full,MinLen(9),[])")) != "");
}

TEST_CASE("failed runs certify their error and still verify") {
    const Scenario s = parseScenario("bigness-scenario v1\nforcing HB\ncondition HB([],[],Empty)\n"
                                     "task ExtendStem(1)\ntask CohenDense([1])\ndepth 4\n");
    const auto run = runGeneric(s.p0, s.tasks);
    REQUIRE(run.error);
    CHECK(run.error->code() == Errc::TaskInapplicable);
    const Certificate c = certify(s, run);
    REQUIRE(c.error);
    CHECK(c.evidence.size() == 1);
    const std::string printed = toString(c);
    CHECK(printed.find("status error TaskInapplicable") != std::string::npos);
    CHECK(toString(parseCertificate(printed)) == printed);
    CHECK(verifyCertificate(parseCertificate(printed)) == "");
}

TEST_CASE("random LB scenarios certify and verify") {
    gen::Rng r(77);
    for (int it = 0; it < 30; ++it) {
        Scenario s;
        s.p0 = LBCond{gen::threshold(r, 1, 2, 2), gen::setRep(r, 2, 2), {}};
        std::get<LBCond>(s.p0).stem = {};
        if (!validCondition(s.p0)) continue;
        s.depth = 4;
        const Nat n = 1 + r.below(3);
        for (Nat i = 0; i < n; ++i) {
            switch (r.below(3)) {
                case 0: s.tasks.push_back(ExtendStem{1 + r.below(2)}); break;
                case 1: s.tasks.push_back(Dominate{gen::str(r, 2, 3)}); break;
                default: s.tasks.push_back(MeetOpen{gen::setRep(r, 2, 2)}); break;
            }
        }
        const std::string scen = toString(s);
        const Scenario back = parseScenario(scen);
        CHECK(toString(back) == scen);
        const Certificate c = certify(back, runGeneric(back.p0, back.tasks));
        const std::string printed = toString(c);
        INFO(printed);
        CHECK(verifyCertificate(parseCertificate(printed)) == "");
    }
}
