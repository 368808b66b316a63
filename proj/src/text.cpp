#include "bigness/text.hpp"

#include <sstream>

namespace bigness {

namespace {

template <class F>
void readList(Reader& r, const char* open, const char* close, F item) {
    r.expect(open);
    if (r.accept(close)) return;
    do item();
    while (r.accept(","));
    r.expect(close);
}

template <class T, class F>
std::string joinList(const std::vector<T>& xs, const char* open, const char* close, F show) {
    std::string out = open;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + show(xs[i]);
    return out + close;
}

std::string pairGenString(const PairGen& g) { return "(" + toString(g.first) + "," + toString(g.second) + ")"; }

template <class T>
T parseWhole(std::string_view text, T (*read)(Reader&)) {
    Reader r(text);
    T v = read(r);
    if (!r.atEnd()) r.fail("trailing input");
    return v;
}

CylinderUnion readCylinders(Reader& r) {
    CylinderUnion u;
    readList(r, "{", "}", [&] { u.gens.push_back(r.binStr()); });
    return u;
}

CaptureResult readCapture(Reader& r) {
    CaptureResult c;
    r.expect("Cap(");
    r.expect("h");
    readList(r, "{", "}", [&] {
        const Nat m = r.natural();
        r.expect(":");
        c.h[m] = r.binStr();
    });
    r.expect(",");
    r.expect("levels");
    readList(r, "{", "}", [&] {
        SchnorrLevel l;
        r.expect("(");
        l.n = r.natural();
        r.expect(",");
        l.set = readCylinders(r);
        r.expect(",");
        l.declared = readDyadic(r);
        r.expect(")");
        c.approx.levels.push_back(l);
    });
    r.expect(",");
    r.expect("samples");
    readList(r, "{", "}", [&] {
        r.expect("(");
        CaptureSample s{readCondition(r), 0, {}, 0};
        r.expect(",");
        s.n = r.natural();
        r.expect(",");
        s.r = readCondition(r);
        r.expect(",");
        s.m = r.natural();
        r.expect(")");
        c.samples.push_back(s);
    });
    r.expect(")");
    return c;
}

std::string trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

// Splits "key rest" lines after checking the header; skips blanks and comments.
std::vector<std::pair<std::string, std::string>> fieldLines(std::string_view text, std::string_view header) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    bool seenHeader = false;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!seenHeader) {
            if (t != header) throw Error(Errc::Parse, "line " + std::to_string(lineNo) + ": expected '" + std::string(header) + "'");
            seenHeader = true;
            continue;
        }
        const auto sp = t.find(' ');
        out.emplace_back(t.substr(0, sp), sp == std::string::npos ? "" : trim(std::string_view(t).substr(sp + 1)));
    }
    if (!seenHeader) throw Error(Errc::Parse, "missing header '" + std::string(header) + "'");
    return out;
}

Nat parseNat(const std::string& v) {
    Reader r(v);
    const Nat n = r.natural();
    if (!r.atEnd()) r.fail("trailing input");
    return n;
}

Errc errcFromName(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(Errc::Parse); ++i)
        if (name == errcName(static_cast<Errc>(i))) return static_cast<Errc>(i);
    throw Error(Errc::Parse, "unknown error code '" + name + "'");
}

// Fields shared by scenarios and certificates. Returns false for keys it does not own.
bool scenarioField(Scenario& s, const std::string& key, const std::string& value, std::optional<std::string>& forcing,
                   bool& haveCondition) {
    if (key == "forcing") {
        if (value != "LB" && value != "HB" && value != "IT") throw Error(Errc::Parse, "unknown forcing '" + value + "'");
        forcing = value;
    } else if (key == "condition") {
        s.p0 = parseCondition(value);
        haveCondition = true;
    } else if (key == "task") {
        s.tasks.push_back(parseTask(value));
    } else if (key == "depth") {
        s.depth = parseNat(value);
    } else if (key == "seed") {
        s.seed = parseNat(value);
    } else {
        return false;
    }
    return true;
}

void finishScenario(const Scenario& s, const std::optional<std::string>& forcing, bool haveCondition) {
    if (!haveCondition) throw Error(Errc::Parse, "missing condition");
    if (forcing && *forcing != forcingTag(s.p0))
        throw Error(Errc::Parse, "forcing " + *forcing + " does not match a " + forcingTag(s.p0) + " condition");
}

std::string scenarioLines(const Scenario& s) {
    std::string out = "forcing " + std::string(forcingTag(s.p0)) + "\n";
    out += "condition " + toString(s.p0) + "\n";
    for (const auto& t : s.tasks) out += "task " + toString(t) + "\n";
    out += "depth " + std::to_string(s.depth) + "\n";
    out += "seed " + std::to_string(s.seed) + "\n";
    return out;
}

}  // namespace

Dyadic readDyadic(Reader& r) {
    const Nat num = r.natural();
    r.expect("/2^");
    const Nat exp = r.natural();
    return Dyadic(num, static_cast<unsigned>(exp));
}

MonotoneMap readMap(Reader& r) {
    MonotoneMap f;
    r.expect("Map(");
    readList(r, "{", "}", [&] {
        BinStr k = r.binStr();
        r.expect(":");
        f.table[k] = r.str();
    });
    r.expect(",");
    f.stretch = r.natural();
    r.expect(",");
    f.fill = r.natural();
    r.expect(")");
    if (f.stretch == 0) r.fail("stretch must be positive");
    return f;
}

Condition readCondition(Reader& r) {
    if (r.accept("LB(")) {
        LBCond c;
        c.tree = r.treeRep();
        r.expect(",");
        c.bad = r.setRep();
        r.expect(",");
        c.stem = r.str();
        r.expect(")");
        return c;
    }
    if (r.accept("HB(")) {
        HBCond c;
        c.stem = r.str();
        r.expect(",");
        c.f = r.str();
        r.expect(",");
        c.bad = r.setRep();
        r.expect(")");
        return c;
    }
    if (r.accept("I(")) {
        ICond c;
        c.stm = r.str();
        r.expect(",");
        c.f = readMap(r);
        r.expect(",");
        c.mindom = r.binStr();
        r.expect(",");
        c.bad = readPairSetRep(r);
        r.expect(")");
        return c;
    }
    r.fail("expected a condition LB(...), HB(...) or I(...)");
}

BoundedFunctional readFunctional(Reader& r) {
    BoundedFunctional phi;
    r.expect("Phi(");
    readList(r, "{", "}", [&] {
        Pattern k = r.pattern();
        r.expect(":");
        phi.table.push_back({k, r.str()});
    });
    r.expect(",");
    phi.bound = r.str();
    r.expect(")");
    return phi;
}

PairFunctional readPairFunctional(Reader& r) {
    PairFunctional phi;
    r.expect("PairPhi(");
    readList(r, "{", "}", [&] {
        PairGen g;
        r.expect("(");
        g.first = r.binStr();
        r.expect(",");
        g.second = r.pattern();
        r.expect(")");
        r.expect(":");
        phi.table.push_back({g, r.str()});
    });
    r.expect(")");
    return phi;
}

DensityTask readTask(Reader& r) {
    const std::string w = r.word();
    r.expect("(");
    DensityTask t;
    if (w == "ExtendStem") {
        t = ExtendStem{r.natural()};
    } else if (w == "Dominate") {
        t = Dominate{r.str()};
    } else if (w == "DominateOver") {
        t = DominateOver{readMap(r)};
    } else if (w == "MeetOpen") {
        t = MeetOpen{r.setRep()};
    } else if (w == "MeetPi02") {
        MeetPi02 m;
        readList(r, "{", "}", [&] { m.sets.push_back(r.setRep()); });
        r.expect(",");
        m.depth = r.natural();
        t = m;
    } else if (w == "TraceTask") {
        TraceTask x;
        x.phi = readFunctional(r);
        r.expect(",");
        x.depth = r.natural();
        t = x;
    } else if (w == "SchnorrCapture") {
        SchnorrCapture x;
        if (r.peek("PairPhi(")) x.phi = readPairFunctional(r);
        else x.phi = readFunctional(r);
        r.expect(",");
        x.depth = r.natural();
        r.expect(",");
        x.samples = r.natural();
        t = x;
    } else if (w == "CohenDense") {
        t = CohenDense{r.binStr()};
    } else {
        r.fail("unknown task '" + w + "'");
    }
    r.expect(")");
    return t;
}

Evidence readEvidence(Reader& r) {
    Evidence e;
    r.expect("Ev(");
    e.arm = r.word();
    r.expect(",");
    r.expect("walk");
    readList(r, "{", "}", [&] { e.walk.push_back(r.str()); });
    r.expect(",");
    r.expect("routes");
    readList(r, "{", "}", [&] {
        Route x;
        r.expect("(");
        x.step = r.natural();
        r.expect(",");
        x.node = r.str();
        r.expect(",");
        x.arm = r.word();
        r.expect(",");
        x.value = r.natural();
        r.expect(")");
        e.routes.push_back(x);
    });
    r.expect(",");
    r.expect("trace");
    readList(r, "{", "}", [&] { e.trace.push_back(r.str()); });
    r.expect(",");
    e.index = r.natural();
    r.expect(",");
    e.exploreDepth = r.natural();
    r.expect(",");
    e.exploreEntry = r.natural();
    r.expect(",");
    if (!r.accept("None")) e.capture = readCapture(r);
    r.expect(")");
    return e;
}

Condition parseCondition(std::string_view text) { return parseWhole<Condition>(text, readCondition); }
DensityTask parseTask(std::string_view text) { return parseWhole<DensityTask>(text, readTask); }

std::string toString(const BoundedFunctional& phi) {
    return "Phi(" +
           joinList(phi.table, "{", "}", [](const auto& kv) { return toString(kv.first) + ":" + toString(kv.second); }) +
           "," + toString(phi.bound) + ")";
}

std::string toString(const PairFunctional& phi) {
    return "PairPhi(" +
           joinList(phi.table, "{", "}", [](const auto& kv) { return pairGenString(kv.first) + ":" + toString(kv.second); }) +
           ")";
}

std::string toString(const DensityTask& t) {
    std::string args;
    if (const auto* x = std::get_if<ExtendStem>(&t)) args = std::to_string(x->m);
    else if (const auto* x = std::get_if<Dominate>(&t)) args = toString(x->h);
    else if (const auto* x = std::get_if<DominateOver>(&t)) args = toString(x->phi);
    else if (const auto* x = std::get_if<MeetOpen>(&t)) args = toString(x->a);
    else if (const auto* x = std::get_if<MeetPi02>(&t))
        args = joinList(x->sets, "{", "}", [](const SetRep& a) { return toString(a); }) + "," + std::to_string(x->depth);
    else if (const auto* x = std::get_if<TraceTask>(&t)) args = toString(x->phi) + "," + std::to_string(x->depth);
    else if (const auto* x = std::get_if<SchnorrCapture>(&t))
        args = std::visit([](const auto& phi) { return toString(phi); }, x->phi) + "," + std::to_string(x->depth) + "," +
               std::to_string(x->samples);
    else args = toString(std::get<CohenDense>(t).w);
    return taskName(t) + "(" + args + ")";
}

std::string toString(const CaptureResult& c) {
    std::string out = "Cap(h{";
    bool first = true;
    for (const auto& [m, s] : c.h) {
        out += (first ? "" : ",") + std::to_string(m) + ":" + toString(s);
        first = false;
    }
    out += "},levels" + joinList(c.approx.levels, "{", "}", [](const SchnorrLevel& l) {
               return "(" + std::to_string(l.n) + "," + toString(l.set) + "," + toString(l.declared) + ")";
           });
    out += ",samples" + joinList(c.samples, "{", "}", [](const CaptureSample& s) {
               return "(" + toString(s.q) + "," + std::to_string(s.n) + "," + toString(s.r) + "," + std::to_string(s.m) + ")";
           });
    return out + ")";
}

std::string toString(const Evidence& e) {
    std::string out = "Ev(" + e.arm + ",walk" + joinList(e.walk, "{", "}", [](const Str& s) { return toString(s); });
    out += ",routes" + joinList(e.routes, "{", "}", [](const Route& x) {
               return "(" + std::to_string(x.step) + "," + toString(x.node) + "," + x.arm + "," + std::to_string(x.value) + ")";
           });
    out += ",trace" + joinList(e.trace, "{", "}", [](const std::vector<Nat>& f) { return toString(Str(f)); });
    out += "," + std::to_string(e.index) + "," + std::to_string(e.exploreDepth) + "," + std::to_string(e.exploreEntry) + ",";
    out += e.capture ? toString(*e.capture) : "None";
    return out + ")";
}

Scenario parseScenario(std::string_view text) {
    Scenario s;
    std::optional<std::string> forcing;
    bool haveCondition = false;
    for (const auto& [key, value] : fieldLines(text, "bigness-scenario v1"))
        if (!scenarioField(s, key, value, forcing, haveCondition)) throw Error(Errc::Parse, "unknown field '" + key + "'");
    finishScenario(s, forcing, haveCondition);
    return s;
}

std::string toString(const Scenario& s) { return "bigness-scenario v1\n" + scenarioLines(s); }

Certificate parseCertificate(std::string_view text) {
    Certificate c;
    std::optional<std::string> forcing;
    bool haveCondition = false;
    for (const auto& [key, value] : fieldLines(text, "bigness-cert v1")) {
        if (scenarioField(c.scenario, key, value, forcing, haveCondition)) continue;
        if (key == "chain") {
            c.chain.push_back(parseCondition(value));
        } else if (key == "evidence") {
            c.evidence.push_back(parseWhole<Evidence>(value, readEvidence));
        } else if (key == "prefix") {
            c.prefix = value;
        } else if (key == "status") {
            if (value == "ok") continue;
            Reader r(value);
            r.expect("error");
            const std::string code = r.word();
            const auto sp = value.find(code) + code.size();
            c.error = std::make_pair(errcFromName(code), trim(std::string_view(value).substr(sp)));
        } else {
            throw Error(Errc::Parse, "unknown field '" + key + "'");
        }
    }
    finishScenario(c.scenario, forcing, haveCondition);
    return c;
}

std::string toString(const Certificate& c) {
    std::string out = "bigness-cert v1\n" + scenarioLines(c.scenario);
    for (const auto& q : c.chain) out += "chain " + toString(q) + "\n";
    for (const auto& e : c.evidence) out += "evidence " + toString(e) + "\n";
    out += "prefix " + c.prefix + "\n";
    if (c.error) out += "status error " + std::string(errcName(c.error->first)) + " " + c.error->second + "\n";
    else out += "status ok\n";
    return out;
}

Certificate certify(const Scenario& s, const GenericRun& run) {
    Certificate c{s, run.chain, run.evidence, prefixString(run.prefix), std::nullopt};
    if (run.error) c.error = std::make_pair(run.error->code(), std::string(run.error->what()));
    return c;
}

std::string verifyCertificate(const Certificate& c) {
    if (c.chain.empty()) return "empty chain";
    if (toString(c.chain.front()) != toString(c.scenario.p0)) return "chain does not start at the scenario condition";
    if (!c.error && c.evidence.size() != c.scenario.tasks.size()) return "run is marked complete but evidence is missing";
    if (c.error && c.evidence.size() >= c.scenario.tasks.size()) return "run is marked failed but every task has evidence";
    if (c.prefix != prefixString(c.chain.back())) return "prefix does not match the last condition";
    if (auto msg = replayRun(c.scenario.tasks, c.chain, c.evidence); !msg.empty()) return msg;
    return exploreChain(c.chain, c.scenario.depth);
}

}  // namespace bigness
