#pragma once

// Context-free grammars: normal form conversion, CYK membership and parse
// trees, quotients, finiteness, pumping, intersection with regular
// languages, and the extraction of an infinite regular subset or
// co-subset of a context-free language inside a regular domain.

#include <filesystem>
#include <string>
#include <vector>

#include "autorand/automata.hpp"
#include "autorand/constructions.hpp"
#include "autorand/engine.hpp"

namespace autorand {

struct GSym {
    bool terminal = false;
    int id = 0;  // nonterminal index, or the letter's char code

    static GSym nt(int i) { return {false, i}; }
    static GSym letter(char c) { return {true, static_cast<unsigned char>(c)}; }
    friend bool operator==(const GSym&, const GSym&) = default;
    friend auto operator<=>(const GSym&, const GSym&) = default;
};

struct Production {
    int lhs = 0;
    std::vector<GSym> rhs;  // empty = ε
};

struct Cfg {
    std::vector<std::string> names;
    std::string alphabet = std::string(kBinary);
    std::vector<Production> rules;
    int start = 0;

    /// Index of `name`, adding it if new.
    int nonterminal(const std::string& name);
    void add(int lhs, std::vector<GSym> rhs) { rules.push_back({lhs, std::move(rhs)}); }
    /// Throws ParseError on undeclared symbols.
    void validate() const;
    std::string to_text() const;
};

/// Rules A -> B C and A -> a; ε only through `start_eps`, in which case
/// the start symbol never occurs on a right-hand side.
struct CnfGrammar {
    struct Binary {
        int lhs, left, right;
        friend auto operator<=>(const Binary&, const Binary&) = default;
    };
    struct Terminal {
        int lhs;
        char letter;
        friend auto operator<=>(const Terminal&, const Terminal&) = default;
    };

    std::vector<std::string> names;
    std::string alphabet = std::string(kBinary);
    std::vector<Binary> binary;
    std::vector<Terminal> terminal;
    int start = 0;
    bool start_eps = false;

    std::size_t size() const { return names.size(); }
    Cfg to_cfg() const;
};

CnfGrammar to_cnf(const Cfg& g);

struct ParseTree {
    struct Node {
        int nt = 0;
        std::size_t begin = 0, end = 0;  // span of the input
        int left = -1, right = -1;       // children; both -1 at a leaf
    };
    std::vector<Node> nodes;  // nodes[0] is the root
    Word input;

    Word yield() const;
    std::size_t height() const;
};

bool cyk_member(const CnfGrammar& g, std::string_view w);
/// Throws PreconditionError for a non-member.
ParseTree parse(const CnfGrammar& g, std::string_view w);

/// {w : u w v ∈ L(g)}
CnfGrammar quotient(const CnfGrammar& g, std::string_view u, std::string_view v);

bool is_finite_cfl(const CnfGrammar& g);
/// The language of a finite grammar, ll-sorted. Throws PreconditionError if
/// the language is infinite.
std::vector<Word> finite_words(const CnfGrammar& g);

/// 2^|V|, saturating at SIZE_MAX.
std::size_t pumping_bound(const CnfGrammar& g);

struct CflPump {
    Word a, b, c, d, e;
    Word pumped(std::size_t n) const;
};

/// y = a b c d e from the lowest repeated nonterminal on a longest path of
/// parse(y), checked by a b^n c d^n e ∈ L for n <= 4. Throws PumpingError
/// if y is not a member or the tree has no repeat.
CflPump pump_cfl(const CnfGrammar& g, std::string_view y);

/// L(g) ∩ L(d) by the (state, nonterminal, state) product.
CnfGrammar intersect(const CnfGrammar& g, const Dfa& d);

struct RegularSubset {
    Dfa r;
    Side side = Side::Inside;
    Word u, v, w;  // x = u v w from the domain
    /// Inside: r = u v^{m + k n} w. Outside: unused.
    std::size_t m = 0, k = 0;
    /// Outside: the finite M = L ∩ u v* w that r avoids.
    std::vector<Word> excluded;
};

RegularSubset infinite_regular_subset(const CnfGrammar& g, const Dfa& domain);

struct CflPipeline {
    RegularSubset subset;
    Setup setup;
};

CflPipeline cfl_nonrandom_pipeline(const Cfg& g, const Dfa& domain);

/// Line format: `%alphabet 01`, `%start S`, `NT -> rhs | rhs`, with `#eps`
/// for the empty word and `//` comments. Right-hand sides are
/// whitespace-separated symbols; a token naming a nonterminal is one,
/// otherwise each character is a terminal. The start defaults to the first
/// left-hand side.
Cfg parse_grammar(std::string_view text);
Cfg load_grammar(const std::filesystem::path& path);

}  // namespace autorand
