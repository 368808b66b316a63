#pragma once

#include <string>
#include <string_view>

#include "bigness/core.hpp"

namespace bigness {

std::string toString(const Str& s);
std::string toString(const BinStr& s);
std::string toString(const PairStr& p);
std::string toString(const Pattern& g);
std::string toString(const SetRep& b);
std::string toString(const TreeRep& t);
std::string toString(const Spectrum& sp);
std::string toString(const std::map<Nat, Nat>& m);

// Recursive-descent reader over the bracketed text syntax. Throws Error(Parse).
class Reader {
public:
    explicit Reader(std::string_view text) : s_(text) {}

    void skipSpace();
    bool atEnd();
    bool peek(std::string_view tok);
    bool accept(std::string_view tok);
    void expect(std::string_view tok);
    Nat natural();
    long long integer();
    std::string word();
    [[noreturn]] void fail(const std::string& what) const;

    Str str();
    BinStr binStr();
    PairStr pairStr();
    Pattern pattern();
    SetRep setRep();
    TreeRep treeRep();
    std::map<Nat, Nat> natMap();

private:
    SkelPtr node();
    std::string_view s_;
    std::size_t pos_ = 0;
};

// Parses the whole text as one value; trailing input is an error.
Str parseStr(std::string_view text);
BinStr parseBinStr(std::string_view text);
SetRep parseSetRep(std::string_view text);
TreeRep parseTreeRep(std::string_view text);

}  // namespace bigness
