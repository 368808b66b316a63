#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "bigness/laws.hpp"
#include "bigness/omega.hpp"
#include "bigness/pairs.hpp"
#include "bigness/text.hpp"

using namespace bigness;

namespace {

int exitCode(Errc c) {
    switch (c) {
        case Errc::Parse: return 2;
        case Errc::RankOverflow: return 4;
        default: return 3;
    }
}

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Parse, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw Error(Errc::Parse, "cannot write " + out);
    f << text;
}

template <class T>
T parseArg(const std::string& text, T (Reader::*read)()) {
    Reader r(text);
    T v = (r.*read)();
    if (!r.atEnd()) r.fail("trailing input");
    return v;
}

template <class T>
T parseArg(const std::string& text, T (*read)(Reader&)) {
    Reader r(text);
    T v = read(r);
    if (!r.atEnd()) r.fail("trailing input");
    return v;
}

std::vector<Str> readStrList(Reader& r) {
    std::vector<Str> out;
    r.expect("{");
    if (r.accept("}")) return out;
    do out.push_back(r.str());
    while (r.accept(","));
    r.expect("}");
    return out;
}

void checkBudget(const RankResult& rk, std::optional<Nat> budget) {
    if (budget && rk.big && rk.rank > *budget)
        throw Error(Errc::RankOverflow, "rank " + std::to_string(rk.rank) + " exceeds budget " + std::to_string(*budget));
}

std::string rankLine(const RankResult& rk) { return rk.big ? "Big rank " + std::to_string(rk.rank) : "Small"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bushy-tree bigness, forcing conditions and generic runs"};
    app.require_subcommand(1);

    std::string tree, set, node, out, pairSet, pair, fin, scenario, cert, cond, functional, eps = "1/2^2", mutate;
    std::vector<std::string> trees;
    Nat depth = 6, seed = 1, cases = 100, samples = 1;
    std::optional<Nat> budget;

    auto addTriple = [&](CLI::App* sub) {
        sub->add_option("tree", tree, "tree, e.g. Full or Threshold([],{0:2})")->required();
        sub->add_option("set", set, "open set, e.g. UpFin{[0]}")->required();
        sub->add_option("node", node, "node, e.g. [1,2]")->default_val("[]");
    };

    auto* bigCheck = app.add_subcommand("big-check", "rank of a node in the B-T ranking");
    addTriple(bigCheck);
    bigCheck->add_option("--budget", budget, "largest rank accepted before RankOverflow");

    auto* witness = app.add_subcommand("witness", "extract and verify a bushy witness");
    addTriple(witness);

    auto* pairWitness = app.add_subcommand("pair-witness", "extract and verify a witness for a pair set");
    pairWitness->add_option("set", pairSet, "pair set, e.g. UpFinP{([0],[])}")->required();
    pairWitness->add_option("pair", pair, "pair, e.g. ([],[])")->default_val("([],[])");
    pairWitness->add_option("--budget", budget, "largest rank accepted before RankOverflow");

    auto* dichotomy = app.add_subcommand("dichotomy", "Laver tree into the set, or a tree avoiding it");
    addTriple(dichotomy);

    auto* marcone = app.add_subcommand("marcone", "rank of the root for a finite tree's complement set");
    marcone->add_option("tree", fin, "finite tree as a node list, e.g. {[],[3]}")->required();

    auto* fuseCmd = app.add_subcommand("fuse", "fuse a sequence of trees");
    fuseCmd->add_option("trees", trees, "trees T_0 T_1 ...")->required();

    auto* run = app.add_subcommand("run", "run a scenario and write its certificate");
    run->add_option("scenario", scenario, "scenario file")->required();
    run->add_option("--out", out, "certificate path (default stdout)");
    auto* depthOpt = run->add_option("--depth", depth, "exploration depth for the avoidance check");

    auto* schnorr = app.add_subcommand("schnorr", "Schnorr capture for an HB or IT condition");
    schnorr->add_option("condition", cond, "condition, e.g. HB([],[],Empty)")->required();
    schnorr->add_option("functional", functional, "Phi(...) or PairPhi(...)")->required();
    schnorr->add_option("--depth", depth, "levels to certify")->default_val(3);
    schnorr->add_option("--samples", samples, "sampled extensions")->default_val(1);
    schnorr->add_option("--eps", eps, "measure bound at the last level, p/2^k")->default_val("1/2^2");

    auto* laws = app.add_subcommand("laws", "randomized law suite");
    laws->add_option("--seed", seed, "seed")->default_val(1);
    laws->add_option("--cases", cases, "instances per law")->default_val(100);
    laws->add_option("--depth", depth, "largest set depth")->default_val(3);
    laws->add_option("--mutate", mutate, "break a law on purpose")->check(CLI::IsMember({"union"}));
    laws->add_option("--out", out, "report path (default stdout)");

    auto* verify = app.add_subcommand("verify", "re-check a certificate from its own data");
    verify->add_option("certificate", cert, "certificate file")->required();

    for (auto* sub : {bigCheck, witness, pairWitness, dichotomy, marcone, fuseCmd, schnorr, verify})
        sub->add_option("--out", out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*bigCheck) {
            const TreeRep t = parseTreeRep(tree);
            const auto rk = omegaRank(t, parseSetRep(set), parseStr(node));
            checkBudget(rk, budget);
            emit(rankLine(rk) + "\n", out);
        } else if (*witness) {
            const TreeRep t = parseTreeRep(tree);
            const SetRep b = parseSetRep(set);
            const auto w = extractWitness(t, b, parseStr(node));
            const auto skel = witnessSkeleton(w, [](const Str&) { return std::optional<TreeRep>{}; });
            emit("witness " + toString(graftAt(w.stem, TreeRep::graft(skel))) + "\nnodes " + std::to_string(w.nodes.size()) +
                     "\nverified " + (verifyWitness(t, b, w) ? "true" : "false") + "\n",
                 out);
        } else if (*pairWitness) {
            const PairSetRep b = parsePairSetRep(pairSet);
            const PairStr p = parseArg(pair, &Reader::pairStr);
            checkBudget(pairRank(b, p), budget);
            const auto w = extractPairWitness(b, p);
            emit("witness " + toString(w) + "\nverified " + (verifyPairWitness(b, w) ? "true" : "false") + "\n", out);
        } else if (*dichotomy) {
            const auto d = bigDichotomy(parseTreeRep(tree), parseSetRep(set), parseStr(node));
            emit(std::string("arm ") + (d.arm == Dichotomy::Arm::LaverInto ? "laver-into" : "hechler-avoid") + "\ntree " +
                     toString(d.tree) + "\n",
                 out);
        } else if (*marcone) {
            const auto nodes = parseArg(fin, &readStrList);
            const SetRep b = tPlusComplement(nodes);
            emit("set " + toString(b) + "\n" + rankLine(omegaRank(TreeRep::full(), b, {})) + "\n", out);
        } else if (*fuseCmd) {
            std::vector<TreeRep> seq;
            for (const auto& t : trees) seq.push_back(parseTreeRep(t));
            emit(toString(fuse(seq)) + "\n", out);
        } else if (*run) {
            Scenario s = parseScenario(readFile(scenario));
            if (depthOpt->count()) s.depth = depth;
            const auto result = runGeneric(s.p0, s.tasks);
            const Certificate c = certify(s, result);
            emit(toString(c), out);
            if (result.error) {
                std::cerr << "error " << result.error->what() << "\n";
                return exitCode(result.error->code());
            }
        } else if (*schnorr) {
            const Condition p = parseCondition(cond);
            const Dyadic bound = parseDyadic(eps);
            CaptureResult c;
            if (const auto* h = std::get_if<HBCond>(&p))
                c = schnorrCapture(*h, parseArg(functional, &readFunctional), depth, samples);
            else if (const auto* i = std::get_if<ICond>(&p))
                c = schnorrCapture(*i, parseArg(functional, &readPairFunctional), depth, samples);
            else
                throw Error(Errc::TaskInapplicable, "Schnorr capture needs an HB or IT condition");
            const bool valid = validateSchnorr(c.approx, bound);
            emit("capture " + toString(c) + "\napprox " + toString(c.approx) + "\nvalid " + (valid ? "true" : "false") + "\n",
                 out);
            if (!valid) return 1;
        } else if (*laws) {
            const auto report = runLawSuite(seed, cases, depth, mutate == "union" ? Mutation::Union : Mutation::None);
            emit(toString(report), out);
            return report.ok() ? 0 : 1;
        } else if (*verify) {
            const Certificate c = parseCertificate(readFile(cert));
            const std::string msg = verifyCertificate(c);
            emit(msg.empty() ? "verified\n" : "rejected: " + msg + "\n", out);
            return msg.empty() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error " << e.what() << "\n";
        return exitCode(e.code());
    }
    return 0;
}
