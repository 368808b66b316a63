#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bigness/core.hpp"

namespace bigness {

enum class Mutation { None, Union };

struct LawOutcome {
    std::string name;
    Nat passed = 0;
    Nat total = 0;
    std::optional<std::string> counterexample;  // smallest failing instance
};

struct LawReport {
    Nat seed = 0;
    Nat cases = 0;
    Nat depth = 0;
    Mutation mutation = Mutation::None;
    std::vector<LawOutcome> laws;

    bool ok() const;
};

// `cases` random instances per law, set depth ≤ depth; each law draws from its own seeded stream.
LawReport runLawSuite(Nat seed, Nat cases, Nat depth, Mutation mutation = Mutation::None);
std::string toString(const LawReport& r);

}  // namespace bigness
