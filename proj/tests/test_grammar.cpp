#include <doctest.h>

#include <random>
#include <set>

#include "autorand/catalog.hpp"
#include "autorand/grammar.hpp"
#include "oracles.hpp"

using namespace autorand;

namespace {

// derives[A][i][j] to a fixpoint, straight from the productions (ε, unit
// rules and cycles included).
bool derives(const Cfg& g, const Word& w) {
    const std::size_t n = w.size(), v = g.names.size();
    std::vector<char> d(v * (n + 1) * (n + 1), 0);
    auto at = [&](std::size_t a, std::size_t i, std::size_t j) -> char& { return d[(a * (n + 1) + i) * (n + 1) + j]; };
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : g.rules) {
            for (std::size_t i = 0; i <= n; ++i) {
                std::vector<char> reach(n + 1, 0);
                reach[i] = 1;
                for (const auto& s : r.rhs) {
                    std::vector<char> next(n + 1, 0);
                    for (std::size_t p = i; p <= n; ++p) {
                        if (!reach[p]) continue;
                        if (s.terminal) {
                            if (p < n && w[p] == static_cast<char>(s.id)) next[p + 1] = 1;
                        } else {
                            for (std::size_t q = p; q <= n; ++q) {
                                if (at(s.id, p, q)) next[q] = 1;
                            }
                        }
                    }
                    reach = std::move(next);
                }
                for (std::size_t j = i; j <= n; ++j) {
                    if (reach[j] && !at(r.lhs, i, j)) at(r.lhs, i, j) = changed = true;
                }
            }
        }
    }
    return at(g.start, 0, n);
}

Cfg grammar(std::string_view text) { return parse_grammar(text); }

const char* kEqualBlocks = "S -> 0 S 1 | 01\n";
const char* kEqualBlocks0 = "S -> 0 S 1 | #eps\n";
const char* kZeroStar = "S -> 0 S | #eps\n";

std::vector<std::string> corpus() {
    return {
        kEqualBlocks,
        kEqualBlocks0,
        kZeroStar,
        "S -> S S | 0 S 1 | #eps\n",
        "S -> A\nA -> 0 A\n",
        "S -> #eps\n",
        "S -> A | B\nA -> B | 0 A | #eps\nB -> A | 1\n",
        "S -> 0 S 0 | 1 S 1 | 0 | 1 | #eps\n",
        "S -> 01\nU -> 0 U | 1\n",
        "S -> 0 S 1 S | 1 S 0 S | #eps\n",
        "S -> A B C\nA -> 0 | #eps\nB -> 1 B | #eps\nC -> A A 0\n",
    };
}

Cfg random_cfg(std::mt19937_64& rng) {
    Cfg g;
    for (const char* n : {"S", "A", "B"}) g.nonterminal(n);
    std::uniform_int_distribution<int> len(0, 3), sym(0, 4), count(1, 3);
    for (int a = 0; a < 3; ++a) {
        for (int k = count(rng); k > 0; --k) {
            std::vector<GSym> rhs;
            for (int i = len(rng); i > 0; --i) {
                int s = sym(rng);
                rhs.push_back(s < 3 ? GSym::nt(s) : GSym::letter(static_cast<char>('0' + s - 3)));
            }
            g.add(a, rhs);
        }
    }
    return g;
}

bool start_on_rhs(const CnfGrammar& g) {
    if (!g.start_eps) return false;
    for (const auto& b : g.binary) {
        if (b.left == g.start || b.right == g.start) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("grammar") {

TEST_CASE("normal form preserves membership") {
    const auto words = oracle::all_words(8);
    for (const auto& text : corpus()) {
        Cfg g = grammar(text);
        CnfGrammar c = to_cnf(g);
        REQUIRE_FALSE(start_on_rhs(c));
        for (const auto& w : words) REQUIRE(cyk_member(c, w) == derives(g, w));
    }
    std::mt19937_64 rng(5);
    const auto short_words = oracle::all_words(6);
    for (int round = 0; round < 200; ++round) {
        Cfg g = random_cfg(rng);
        CnfGrammar c = to_cnf(g);
        REQUIRE_FALSE(start_on_rhs(c));
        for (const auto& w : short_words) REQUIRE(cyk_member(c, w) == derives(g, w));
    }
}

TEST_CASE("normal form edge cases") {
    CnfGrammar none = to_cnf(grammar("S -> A\nA -> 0 A\n"));
    CHECK(none.binary.empty());
    CHECK(none.terminal.empty());
    CHECK_FALSE(none.start_eps);
    CnfGrammar eps = to_cnf(grammar("S -> #eps\n"));
    CHECK(eps.binary.empty());
    CHECK(eps.terminal.empty());
    CHECK(eps.start_eps);
    CHECK(eps.size() == 1);
    CnfGrammar c = to_cnf(grammar(kEqualBlocks));
    CHECK(cyk_member(c, "0011"));
    CHECK_FALSE(cyk_member(c, "010"));
    CHECK_FALSE(cyk_member(c, ""));
    CHECK(cyk_member(to_cnf(grammar(kEqualBlocks0)), ""));
}

TEST_CASE("parse trees yield their input") {
    std::mt19937_64 rng(9);
    for (const auto& text : corpus()) {
        Cfg g = grammar(text);
        CnfGrammar c = to_cnf(g);
        std::vector<Word> members;
        for (const auto& w : oracle::all_words(10)) {
            if (cyk_member(c, w)) members.push_back(w);
        }
        for (int i = 0; i < 100 && !members.empty(); ++i) {
            const Word& w = members[rng() % members.size()];
            ParseTree t = parse(c, w);
            REQUIRE(t.yield() == w);
            REQUIRE(t.nodes[0].nt == c.start);
            for (const auto& n : t.nodes) {
                if (n.left < 0) {
                    REQUIRE(n.end - n.begin == (w.empty() ? 0u : 1u));
                } else {
                    REQUIRE(t.nodes[n.left].begin == n.begin);
                    REQUIRE(t.nodes[n.left].end == t.nodes[n.right].begin);
                    REQUIRE(t.nodes[n.right].end == n.end);
                }
            }
        }
    }
    CHECK_THROWS_AS(parse(to_cnf(grammar(kEqualBlocks)), "10"), PreconditionError);
}

TEST_CASE("quotients") {
    CnfGrammar c = to_cnf(grammar(kEqualBlocks));
    CnfGrammar q = quotient(c, "0", "");
    CHECK(cyk_member(q, "1"));
    CHECK(cyk_member(q, "011"));
    CHECK_FALSE(cyk_member(q, "01"));
    const auto words = oracle::all_words(6);
    const std::vector<std::pair<Word, Word>> cuts{{"", ""}, {"0", ""}, {"", "1"}, {"00", "1"}, {"1", "0"}, {"010", "01"}};
    for (const auto& text : corpus()) {
        CnfGrammar g = to_cnf(grammar(text));
        for (const auto& [u, v] : cuts) {
            CnfGrammar l = quotient(g, u, v);
            for (const auto& w : words) REQUIRE(cyk_member(l, w) == cyk_member(g, u + w + v));
        }
    }
    CnfGrammar gone = quotient(to_cnf(grammar("S -> 01 | 1\n")), "0101", "");
    for (const auto& w : oracle::all_words(6)) REQUIRE_FALSE(cyk_member(gone, w));
    CHECK(is_finite_cfl(gone));
}

TEST_CASE("finiteness") {
    CHECK_FALSE(is_finite_cfl(to_cnf(grammar(kEqualBlocks))));
    CHECK(is_finite_cfl(to_cnf(grammar("S -> #eps\n"))));
    CHECK(is_finite_cfl(to_cnf(grammar("S -> 01\nU -> 0 U | 1\n"))));
    CnfGrammar raw;
    raw.names = {"S", "U"};
    raw.terminal = {{0, '0'}, {1, '1'}};
    raw.binary = {{1, 1, 1}};
    CHECK(is_finite_cfl(raw));
    CHECK(finite_words(raw) == std::vector<Word>{"0"});
    std::mt19937_64 rng(13);
    for (int round = 0; round < 200; ++round) {
        Cfg g = random_cfg(rng);
        CnfGrammar c = to_cnf(g);
        if (!is_finite_cfl(c)) {
            CHECK_THROWS_AS(finite_words(c), PreconditionError);
            continue;
        }
        auto fw = finite_words(c);
        std::size_t longest = 0;
        for (const auto& w : fw) longest = std::max(longest, w.size());
        // a finite CNF language has no member longer than 2^|V|
        std::vector<Word> brute;
        for (const auto& w : oracle::all_words(std::min<std::size_t>(longest + 2, 10))) {
            if (derives(g, w)) brute.push_back(w);
        }
        std::sort(brute.begin(), brute.end(), oracle::ll_before);
        if (longest + 2 <= 10) REQUIRE(fw == brute);
    }
}

TEST_CASE("pumping") {
    CnfGrammar c = to_cnf(grammar(kEqualBlocks));
    CflPump p = pump_cfl(c, "0011");
    CHECK(p.a.empty());
    CHECK(p.e.empty());
    CHECK(p.b == "0");
    CHECK(p.d == "1");
    CHECK(p.c == "01");
    CHECK_THROWS_AS(pump_cfl(c, "0101"), PumpingError);
    CHECK_THROWS_AS(pump_cfl(c, "01"), PumpingError);
    CHECK(pumping_bound(c) == (std::size_t{1} << c.size()));
    for (const auto& text : corpus()) {
        CnfGrammar g = to_cnf(grammar(text));
        if (is_finite_cfl(g)) continue;
        for (const auto& w : oracle::all_words(9)) {
            if (!cyk_member(g, w) || w.size() < 6) continue;
            CflPump q;
            try {
                q = pump_cfl(g, w);
            } catch (const PumpingError&) {
                REQUIRE(parse(g, w).height() <= g.size());
                continue;
            }
            REQUIRE(q.pumped(1) == w);
            REQUIRE(q.b.size() + q.d.size() >= 1);
            for (std::size_t n = 0; n <= 4; ++n) REQUIRE(cyk_member(g, q.pumped(n)));
        }
    }
}

TEST_CASE("intersection with regular languages") {
    const auto words = oracle::all_words(8);
    for (const auto& text : corpus()) {
        CnfGrammar g = to_cnf(grammar(text));
        for (const auto& dn : {"zero-star-one-star", "no-double-one", "sigma-star", "finite-three", "epsilon"}) {
            Dfa d = catalog_dfa(dn);
            CnfGrammar m = intersect(g, d);
            for (const auto& w : words) REQUIRE(cyk_member(m, w) == (cyk_member(g, w) && d.accepts(w)));
        }
    }
}

TEST_CASE("regular subsets inside a domain") {
    auto sweep = [](const RegularSubset& s, const CnfGrammar& g, const Dfa& domain) {
        auto members = enumerate_ll(s.r, 100);
        REQUIRE(members.size() == 100);
        for (const auto& w : members) {
            REQUIRE(domain.accepts(w));
            REQUIRE(cyk_member(g, w) == (s.side == Side::Inside));
        }
        REQUIRE(is_infinite(s.r));
    };
    CnfGrammar blocks = to_cnf(grammar(kEqualBlocks0));
    auto s = infinite_regular_subset(blocks, Dfa::universal());
    CHECK(s.side == Side::Outside);
    CHECK(s.excluded == std::vector<Word>{""});
    CHECK(s.u.empty());
    CHECK(s.v == "0");
    CHECK(s.w.empty());
    CHECK(enumerate_ll(s.r, 3) == std::vector<Word>{"0", "00", "000"});
    sweep(s, blocks, Dfa::universal());

    CnfGrammar zeros = to_cnf(grammar(kZeroStar));
    auto z = infinite_regular_subset(zeros, Dfa::universal());
    CHECK(z.side == Side::Inside);
    CHECK(z.k >= 1);
    sweep(z, zeros, Dfa::universal());
    for (const auto& w : enumerate_ll(z.r, 100)) {
        REQUIRE(w.size() >= z.m);
        REQUIRE((w.size() - z.m) % z.k == 0);
    }

    for (const auto& text : corpus()) {
        CnfGrammar g = to_cnf(grammar(text));
        for (const auto& dn : {"sigma-star", "zero-star-one-star", "no-double-one", "one-zero-star", "even-zeros"}) {
            Dfa dom = catalog_dfa(dn);
            auto r = infinite_regular_subset(g, dom);
            sweep(r, g, dom);
            if (r.side == Side::Inside) {
                for (const auto& w : enumerate_ll(r.r, 40)) {
                    REQUIRE(w.size() >= r.u.size() + r.w.size());
                    const std::size_t exp = (w.size() - r.u.size() - r.w.size()) / r.v.size();
                    REQUIRE(exp >= r.m);
                    REQUIRE((exp - r.m) % r.k == 0);
                }
            }
        }
    }
    CHECK_THROWS_AS(infinite_regular_subset(blocks, catalog_dfa("finite-three")), PreconditionError);
}

TEST_CASE("context-free pipeline") {
    Cfg g = grammar(kEqualBlocks);
    auto p = cfl_nonrandom_pipeline(g, Dfa::universal());
    Oracle truth = [c = to_cnf(g)](std::string_view w) { return cyk_member(c, w); };

    Stream z(ll_text(Dfa::universal()), truth);
    auto r = run(p.setup, z, 140000);
    CHECK(succeeded(r.trace, pow2(10)));

    auto cursor = std::make_shared<LlCursor>(Dfa::universal());
    auto block = std::make_shared<std::vector<Word>>();
    Text reversed_blocks([cursor, block]() -> TextItem {
        if (block->empty()) {
            for (int i = 0; i < 64; ++i) block->push_back(*cursor->next());
        }
        Word w = block->back();
        block->pop_back();
        return w;
    });
    Stream zs(std::move(reversed_blocks), truth);
    CHECK(succeeded(run(p.setup, zs, 140000).trace, pow2(10)));

    auto ll = enumerate_ll(Dfa::universal(), 4096);
    std::vector<TextItem> avoiding;
    for (const auto& w : ll) {
        if (!p.subset.r.accepts(w)) avoiding.push_back(w);
    }
    Stream za(sequence_text(avoiding), truth);
    auto ra = run(p.setup, za, avoiding.size());
    for (const auto& c : ra.trace.capitals()) REQUIRE(c == Dyadic(1));
}

TEST_CASE("grammar files") {
    Cfg g = parse_grammar(R"(// comment
%alphabet 01
%start S
S -> 0 S 1   // trailing
   | A
A -> #eps | 1 1
)");
    CHECK(g.names == std::vector<std::string>{"S", "A"});
    CHECK(g.rules.size() == 4);
    CHECK(g.rules[3].rhs.size() == 2);
    Cfg again = parse_grammar(g.to_text());
    for (const auto& w : oracle::all_words(7)) REQUIRE(derives(again, w) == derives(g, w));
    CHECK_THROWS_AS(parse_grammar("S -> 2\n"), ParseError);
    CHECK_THROWS_AS(parse_grammar("S 0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_grammar("S -> 0 |\n"), ParseError);
    CHECK_THROWS_AS(parse_grammar("%start T\nS -> 0\n"), ParseError);
    CHECK_THROWS_AS(parse_grammar(""), ParseError);
    CHECK_THROWS_AS(load_grammar("/nonexistent/g.cfg"), ParseError);
    Cfg abc = parse_grammar("%alphabet abc\nS -> a S c | b\n");
    CHECK(cyk_member(to_cnf(abc), "aabcc"));
}

}
