#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bigness/density.hpp"
#include "bigness/format.hpp"

namespace bigness {

// Expression syntax shared by scenarios and certificates; toString output reads back unchanged.
MonotoneMap readMap(Reader& r);
Condition readCondition(Reader& r);
BoundedFunctional readFunctional(Reader& r);
PairFunctional readPairFunctional(Reader& r);
DensityTask readTask(Reader& r);
Evidence readEvidence(Reader& r);
Dyadic readDyadic(Reader& r);

Condition parseCondition(std::string_view text);
DensityTask parseTask(std::string_view text);

std::string toString(const BoundedFunctional& phi);
std::string toString(const PairFunctional& phi);
std::string toString(const DensityTask& t);
std::string toString(const Evidence& e);
std::string toString(const CaptureResult& c);

struct Scenario {
    Condition p0;
    std::vector<DensityTask> tasks;
    Nat depth = 6;
    Nat seed = 1;
};

struct Certificate {
    Scenario scenario;
    std::vector<Condition> chain;
    std::vector<Evidence> evidence;
    std::string prefix;
    std::optional<std::pair<Errc, std::string>> error;
};

// Line format: a versioned header, then one "key value" line per field; '#' starts a comment line.
Scenario parseScenario(std::string_view text);
std::string toString(const Scenario& s);
Certificate parseCertificate(std::string_view text);
std::string toString(const Certificate& c);

Certificate certify(const Scenario& s, const GenericRun& run);
// Empty string when the certificate replays from its own data.
std::string verifyCertificate(const Certificate& c);

}  // namespace bigness
