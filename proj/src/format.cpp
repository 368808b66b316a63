#include "bigness/format.hpp"

#include <cctype>
#include <functional>

namespace bigness {

namespace {

template <class Seq>
std::string joinNats(const Seq& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(static_cast<Nat>(s[i]));
    }
    return out + "]";
}

std::string atomString(const Atom& a) {
    switch (a.kind) {
        case Atom::Kind::UpFin: {
            std::string out = "UpFin{";
            for (std::size_t i = 0; i < a.gens.size(); ++i) {
                if (i) out += ",";
                out += toString(a.gens[i]);
            }
            return out + "}";
        }
        case Atom::Kind::MinLen: return "MinLen(" + std::to_string(a.k) + ")";
        case Atom::Kind::CoordGE: return "CoordGE(" + std::to_string(a.i) + "," + std::to_string(a.m) + ")";
    }
    return "";
}

std::string nodeString(const SkelPtr& n) {
    if (n->tail) return "Tail(" + toString(*n->tail) + ")";
    if (n->isLeaf()) return "Leaf";
    std::string out = "Node{";
    bool first = true;
    for (const auto& [k, c] : n->named) {
        if (!first) out += ";";
        first = false;
        out += std::to_string(k) + ":" + nodeString(c);
    }
    if (n->genericFrom) {
        if (!first) out += ";";
        out += ">=" + std::to_string(*n->genericFrom) + ":" + nodeString(n->generic);
    }
    return out + "}";
}

}  // namespace

std::string toString(const Str& s) { return joinNats(s); }
std::string toString(const BinStr& s) { return joinNats(s); }
std::string toString(const PairStr& p) { return "(" + toString(p.first) + "," + toString(p.second) + ")"; }

std::string toString(const Pattern& g) {
    std::string out = "[";
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out += ",";
        if (g[i].ge) out += ">=";
        out += std::to_string(g[i].v);
    }
    return out + "]";
}

std::string toString(const SetRep& b) {
    if (b.atoms.empty()) return "Empty";
    if (b.atoms.size() == 1) return atomString(b.atoms[0]);
    std::string out = "Union[";
    for (std::size_t i = 0; i < b.atoms.size(); ++i) {
        if (i) out += ",";
        out += atomString(b.atoms[i]);
    }
    return out + "]";
}

std::string toString(const std::map<Nat, Nat>& m) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : m) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(k) + ":" + std::to_string(v);
    }
    return out + "}";
}

std::string toString(const TreeRep& t) {
    if (t.isThreshold()) {
        if (t.isFull()) return "Full";
        return "Threshold(" + toString(t.th().stem) + "," + toString(t.th().theta) + ")";
    }
    return "Graft(" + nodeString(t.root()) + ")";
}

std::string toString(const Spectrum& sp) {
    std::string out = "Spectrum{exceptions:{";
    bool first = true;
    for (const auto& [n, b] : sp.exceptions) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(n) + ":" + (b ? "true" : "false");
    }
    out += "};steps:[";
    for (std::size_t i = 0; i < sp.steps.size(); ++i) {
        if (i) out += ",";
        out += "(" + std::to_string(sp.steps[i].first) + "," + (sp.steps[i].second ? "true" : "false") + ")";
    }
    return out + "]}";
}

// ---------------------------------------------------------------- Reader

void Reader::skipSpace() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
}

bool Reader::atEnd() {
    skipSpace();
    return pos_ >= s_.size();
}

bool Reader::peek(std::string_view tok) {
    skipSpace();
    return s_.substr(pos_, tok.size()) == tok;
}

bool Reader::accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
}

void Reader::expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
}

void Reader::fail(const std::string& what) const {
    throw Error(Errc::Parse, what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
}

Nat Reader::natural() {
    skipSpace();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected natural");
    Nat v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = v * 10 + static_cast<Nat>(s_[pos_] - '0');
        if (v > (Nat{1} << 40)) fail("natural too large");
        ++pos_;
    }
    return v;
}

long long Reader::integer() {
    bool neg = accept("-");
    long long v = static_cast<long long>(natural());
    return neg ? -v : v;
}

std::string Reader::word() {
    skipSpace();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'))
        ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(s_.substr(start, pos_ - start));
}

Str Reader::str() {
    expect("[");
    Str out;
    if (accept("]")) return out;
    do out.push_back(natural());
    while (accept(","));
    expect("]");
    return out;
}

BinStr Reader::binStr() {
    BinStr out;
    for (Nat v : str()) {
        if (v > 1) fail("binary string entry must be 0 or 1");
        out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

PairStr Reader::pairStr() {
    expect("(");
    PairStr p;
    p.first = binStr();
    expect(",");
    p.second = str();
    expect(")");
    return p;
}

Pattern Reader::pattern() {
    expect("[");
    Pattern out;
    if (accept("]")) return out;
    do {
        Entry e;
        e.ge = accept(">=");
        e.v = natural();
        out.push_back(e);
    } while (accept(","));
    expect("]");
    return out;
}

std::map<Nat, Nat> Reader::natMap() {
    expect("{");
    std::map<Nat, Nat> out;
    if (accept("}")) return out;
    do {
        Nat k = natural();
        expect(":");
        out[k] = natural();
    } while (accept(","));
    expect("}");
    return out;
}

SetRep Reader::setRep() {
    const std::string w = word();
    if (w == "Empty") return SetRep::empty();
    if (w == "Everything") return SetRep::everything();
    if (w == "UpFin") {
        expect("{");
        std::vector<Pattern> gens;
        if (!accept("}")) {
            do gens.push_back(pattern());
            while (accept(","));
            expect("}");
        }
        return SetRep::upFinP(gens);
    }
    if (w == "MinLen") {
        expect("(");
        Nat k = natural();
        expect(")");
        return SetRep::minLen(k);
    }
    if (w == "CoordGE") {
        expect("(");
        Nat i = natural();
        expect(",");
        Nat m = natural();
        expect(")");
        return SetRep::coordGE(i, m);
    }
    if (w == "Union") {
        expect("[");
        std::vector<SetRep> parts;
        if (!accept("]")) {
            do parts.push_back(setRep());
            while (accept(","));
            expect("]");
        }
        return SetRep::unite(parts);
    }
    fail("unknown set constructor '" + w + "'");
}

SkelPtr Reader::node() {
    const std::string w = word();
    if (w == "Leaf") return leafNode();
    if (w == "Tail") {
        expect("(");
        TreeRep t = treeRep();
        expect(")");
        return tailNode(t);
    }
    if (w != "Node") fail("unknown node constructor '" + w + "'");
    expect("{");
    std::map<Nat, SkelPtr> named;
    std::optional<Nat> gf;
    SkelPtr gen;
    if (!accept("}")) {
        do {
            if (accept(">=")) {
                gf = natural();
                expect(":");
                gen = node();
            } else {
                Nat k = natural();
                expect(":");
                named[k] = node();
            }
        } while (accept(";"));
        expect("}");
    }
    return makeNode(std::move(named), gf, gen);
}

TreeRep Reader::treeRep() {
    const std::string w = word();
    if (w == "Full") return TreeRep::full();
    if (w == "Threshold") {
        expect("(");
        Str stem = str();
        std::map<Nat, Nat> th;
        if (accept(",")) th = natMap();
        expect(")");
        return TreeRep::threshold(stem, th);
    }
    if (w == "Graft") {
        expect("(");
        SkelPtr r = node();
        expect(")");
        return TreeRep::graft(r);
    }
    fail("unknown tree constructor '" + w + "'");
}

namespace {
template <class T, class F>
T parseWhole(std::string_view text, F f) {
    Reader r(text);
    T v = f(r);
    if (!r.atEnd()) r.fail("trailing input");
    return v;
}
}  // namespace

Str parseStr(std::string_view text) {
    return parseWhole<Str>(text, [](Reader& r) { return r.str(); });
}
BinStr parseBinStr(std::string_view text) {
    return parseWhole<BinStr>(text, [](Reader& r) { return r.binStr(); });
}
SetRep parseSetRep(std::string_view text) {
    return parseWhole<SetRep>(text, [](Reader& r) { return r.setRep(); });
}
TreeRep parseTreeRep(std::string_view text) {
    return parseWhole<TreeRep>(text, [](Reader& r) { return r.treeRep(); });
}

}  // namespace bigness
