#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bigness/laws.hpp"

using namespace bigness;

TEST_CASE("every law holds on the default streams") {
    const LawReport rep = runLawSuite(1, 60, 3);
    CHECK(rep.ok());
    CHECK(rep.laws.size() == 12);
    for (const auto& law : rep.laws) {
        INFO(law.name);
        CHECK(law.total == 60);
        CHECK(law.passed == law.total);
        CHECK_FALSE(law.counterexample);
    }
    const std::string text = toString(rep);
    CHECK(text.rfind("bigness-laws v1\n", 0) == 0);
    CHECK(text.find("status pass") != std::string::npos);
}

TEST_CASE("the report is a function of the seed") {
    CHECK(toString(runLawSuite(9, 25, 2)) == toString(runLawSuite(9, 25, 2)));
    CHECK(toString(runLawSuite(9, 25, 2)) != toString(runLawSuite(10, 25, 2)));
}

TEST_CASE("the union mutant is caught with a small counterexample") {
    const LawReport rep = runLawSuite(1, 60, 3, Mutation::Union);
    CHECK_FALSE(rep.ok());
    bool found = false;
    for (const auto& law : rep.laws) {
        if (law.name != "closure-union") {
            CHECK_FALSE(law.counterexample);
            continue;
        }
        found = true;
        CHECK(law.passed < law.total);
        REQUIRE(law.counterexample);
        CHECK(law.counterexample->size() < 120);
    }
    CHECK(found);
    const std::string text = toString(rep);
    CHECK(text.find("mutation union") != std::string::npos);
    CHECK(text.find("status fail") != std::string::npos);
}
