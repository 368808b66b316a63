#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bigness/core.hpp"

namespace bigness {

// Builds a finite skeleton from a state machine over tree nodes.
// Ops supplies key, terminal (state collapses to a known tree), bound and child.
// Children from the least t agreeing with child bound+1 share one generic template.
template <class Ops>
class SkelBuilder {
public:
    using State = typename Ops::State;

    explicit SkelBuilder(const Ops& ops, int maxDepth = 512) : ops_(ops), maxDepth_(maxDepth) {}

    SkelPtr build(const State& s, int level = 0) {
        if (level > maxDepth_) throw Error(Errc::RankOverflow, "tree construction does not close up");
        const std::string key = ops_.key(s);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        SkelPtr out;
        if (auto term = ops_.terminal(s)) {
            out = tailNode(*term);
        } else {
            const Nat w = ops_.bound(s);
            std::vector<std::optional<State>> kids;
            std::vector<std::string> keys;
            for (Nat n = 0; n <= w + 1; ++n) {
                kids.push_back(ops_.child(s, n));
                keys.push_back(kids.back() ? ops_.key(*kids.back()) : std::string());
            }
            Nat t = w + 2;
            if (kids[w + 1]) {
                t = w + 1;
                while (t > 0 && kids[t - 1] && keys[t - 1] == keys[w + 1]) --t;
            }
            std::map<Nat, SkelPtr> named;
            for (Nat n = 0; n < t && n <= w; ++n)
                if (kids[n]) named[n] = build(*kids[n], level + 1);
            std::optional<Nat> gf;
            SkelPtr gen;
            if (t <= w + 1) {
                gf = t;
                gen = build(*kids[w + 1], level + 1);
            }
            out = makeNode(std::move(named), gf, gen);
        }
        memo_[key] = out;
        return out;
    }

private:
    const Ops& ops_;
    int maxDepth_;
    std::map<std::string, SkelPtr> memo_;
};

}  // namespace bigness
