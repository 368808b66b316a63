#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bigness/core.hpp"

namespace bigness {

// num / 2^exp, kept with num odd or exp = 0.
class Dyadic {
public:
    using Int = boost::multiprecision::cpp_int;

    Dyadic() = default;
    Dyadic(Int num, unsigned exp);
    static Dyadic pow2neg(unsigned k) { return Dyadic(1, k); }

    const Int& num() const { return num_; }
    unsigned exp() const { return exp_; }

    Dyadic operator+(const Dyadic& o) const;
    bool operator==(const Dyadic& o) const = default;
    std::strong_ordering operator<=>(const Dyadic& o) const;

private:
    Int num_ = 0;
    unsigned exp_ = 0;
};

std::string toString(const Dyadic& d);  // "p/2^k"
Dyadic parseDyadic(std::string_view text);

struct CylinderUnion {
    std::vector<BinStr> gens;
};

// Prefix-free, sorted generators with the same open set.
CylinderUnion normalize(const CylinderUnion& u);
Dyadic cylinderMeasure(const CylinderUnion& u);
bool cylinderCovers(const CylinderUnion& u, const BinStr& s);

struct SchnorrLevel {
    Nat n = 0;
    CylinderUnion set;
    Dyadic declared;
};

struct SchnorrApprox {
    std::vector<SchnorrLevel> levels;
};

// m ↦ h(m) with |h(m)| = m.
using Interleaver = std::map<Nat, BinStr>;

// ⋃_{n ≤ m ≤ M} [h(m)] with M the largest defined index.
SchnorrLevel schnorrFromInterleaver(const Interleaver& h, Nat n);
bool validateSchnorr(const SchnorrApprox& s, const Dyadic& eps);

struct TraceTree {
    std::vector<std::vector<BinStr>> levels;  // T ∩ 2^(2^n)
    std::vector<std::size_t> counts;
};

// F(n) ⊆ 2^(2^n) with |F(n)| ≤ 2^n; T = {ρ : ρ↾2^m ∈ F(m) whenever 2^m ≤ |ρ|}.
TraceTree traceNowhereDense(const std::vector<std::vector<BinStr>>& F);
bool traceTreeMember(const std::vector<std::vector<BinStr>>& F, const BinStr& rho);

std::string toString(const CylinderUnion& u);
std::string toString(const SchnorrApprox& s);

}  // namespace bigness
