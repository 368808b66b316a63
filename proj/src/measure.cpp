#include "bigness/measure.hpp"

#include <algorithm>
#include <set>

#include "bigness/format.hpp"

namespace bigness {

Dyadic::Dyadic(Int num, unsigned exp) : num_(std::move(num)), exp_(exp) {
    while (exp_ > 0 && num_ != 0 && (num_ & 1) == 0) {
        num_ >>= 1;
        --exp_;
    }
    if (num_ == 0) exp_ = 0;
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    const unsigned e = std::max(exp_, o.exp_);
    return Dyadic((num_ << (e - exp_)) + (o.num_ << (e - o.exp_)), e);
}

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
    const unsigned e = std::max(exp_, o.exp_);
    const Int a = num_ << (e - exp_);
    const Int b = o.num_ << (e - o.exp_);
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string toString(const Dyadic& d) { return d.num().str() + "/2^" + std::to_string(d.exp()); }

Dyadic parseDyadic(std::string_view text) {
    const auto slash = text.find("/2^");
    if (slash == std::string_view::npos || slash == 0) throw Error(Errc::Parse, "dyadic '" + std::string(text) + "'");
    try {
        Dyadic::Int num(std::string(text.substr(0, slash)));
        const std::string e(text.substr(slash + 3));
        if (e.empty() || !std::all_of(e.begin(), e.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw Error(Errc::Parse, "dyadic exponent '" + e + "'");
        if (num < 0) throw Error(Errc::Parse, "negative dyadic");
        return Dyadic(num, static_cast<unsigned>(std::stoul(e)));
    } catch (const std::runtime_error& ex) {
        if (dynamic_cast<const Error*>(&ex)) throw;
        throw Error(Errc::Parse, "dyadic '" + std::string(text) + "'");
    }
}

CylinderUnion normalize(const CylinderUnion& u) {
    std::set<BinStr> sorted(u.gens.begin(), u.gens.end());
    CylinderUnion out;
    // In lexicographic order a prefix comes right before its extensions.
    for (const auto& s : sorted)
        if (out.gens.empty() || !isPrefix(out.gens.back(), s)) out.gens.push_back(s);
    return out;
}

Dyadic cylinderMeasure(const CylinderUnion& u) {
    Dyadic total;
    for (const auto& s : normalize(u).gens) total = total + Dyadic::pow2neg(static_cast<unsigned>(s.size()));
    return total;
}

bool cylinderCovers(const CylinderUnion& u, const BinStr& s) {
    return std::any_of(u.gens.begin(), u.gens.end(), [&](const BinStr& g) { return isPrefix(g, s); });
}

SchnorrLevel schnorrFromInterleaver(const Interleaver& h, Nat n) {
    SchnorrLevel level;
    level.n = n;
    for (auto it = h.lower_bound(n); it != h.end(); ++it) level.set.gens.push_back(it->second);
    level.set = normalize(level.set);
    level.declared = cylinderMeasure(level.set);
    return level;
}

bool validateSchnorr(const SchnorrApprox& s, const Dyadic& eps) {
    for (const auto& l : s.levels)
        if (cylinderMeasure(l.set) != l.declared) return false;
    return s.levels.empty() || s.levels.back().declared <= eps;
}

TraceTree traceNowhereDense(const std::vector<std::vector<BinStr>>& F) {
    TraceTree t;
    for (std::size_t n = 0; n < F.size(); ++n) {
        if (n >= 32) throw Error(Errc::MalformedTrace, "trace longer than 32 levels");
        const std::size_t len = std::size_t{1} << n;
        if (F[n].size() > len) throw Error(Errc::MalformedTrace, "|F(" + std::to_string(n) + ")| exceeds 2^n");
        for (const auto& s : F[n])
            if (s.size() != len)
                throw Error(Errc::MalformedTrace, "F(" + std::to_string(n) + ") holds " + toString(s));
    }
    for (std::size_t n = 0; n < F.size(); ++n) {
        std::vector<BinStr> level;
        for (const auto& s : std::set<BinStr>(F[n].begin(), F[n].end()))
            if (traceTreeMember(F, s)) level.push_back(s);
        t.counts.push_back(level.size());
        t.levels.push_back(std::move(level));
    }
    return t;
}

bool traceTreeMember(const std::vector<std::vector<BinStr>>& F, const BinStr& rho) {
    for (std::size_t m = 0; m < F.size() && (std::size_t{1} << m) <= rho.size(); ++m) {
        BinStr pre(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(std::size_t{1} << m));
        if (std::find(F[m].begin(), F[m].end(), pre) == F[m].end()) return false;
    }
    return true;
}

std::string toString(const CylinderUnion& u) {
    std::string out = "{";
    for (std::size_t i = 0; i < u.gens.size(); ++i) out += (i ? "," : "") + toString(u.gens[i]);
    return out + "}";
}

std::string toString(const SchnorrApprox& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
        const auto& l = s.levels[i];
        out += (i ? ";" : "") + std::string("(") + std::to_string(l.n) + "," + toString(l.set) + "," + toString(l.declared) +
               ")";
    }
    return out + "]";
}

}  // namespace bigness
