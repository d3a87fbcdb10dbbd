#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "autorand/automata.hpp"
#include "autorand/catalog.hpp"
#include "autorand/kernels.hpp"
#include "oracles.hpp"

using namespace autorand;

namespace {

using Pred = std::function<bool(const Word&)>;

// Independent membership predicates for catalog domains.
const std::map<std::string, Pred>& predicates() {
    static const std::map<std::string, Pred> p = {
        {"sigma-star", [](const Word&) { return true; }},
        {"zero-star", [](const Word& w) { return w.find('1') == Word::npos; }},
        {"one-star", [](const Word& w) { return w.find('0') == Word::npos; }},
        {"zero-star-one-star", [](const Word& w) { return w.find("10") == Word::npos; }},
        {"even-zeros",
         [](const Word& w) { return w.find('1') == Word::npos && w.size() % 2 == 0; }},
        {"zero-or-one-star",
         [](const Word& w) {
             return w.find('1') == Word::npos || w.find('0') == Word::npos;
         }},
        {"one-sigma-star", [](const Word& w) { return !w.empty() && w[0] == '1'; }},
        {"one-zero-star",
         [](const Word& w) {
             return !w.empty() && w[0] == '1' && w.find('1', 1) == Word::npos;
         }},
        {"zero-one-star",
         [](const Word& w) {
             if (w.size() % 2) return false;
             for (std::size_t i = 0; i < w.size(); ++i) {
                 if (w[i] != (i % 2 ? '1' : '0')) return false;
             }
             return true;
         }},
        {"zero-star-one-star-zero-star",
         [](const Word& w) {
             auto a = w.find('1');
             if (a == Word::npos) return true;
             auto b = w.find('0', a);
             if (b == Word::npos) return true;
             return w.find('1', b) == Word::npos;
         }},
        {"no-double-one", [](const Word& w) { return w.find("11") == Word::npos; }},
        {"finite-three", [](const Word& w) { return w == "0" || w == "11" || w == "101"; }},
        {"epsilon", [](const Word& w) { return w.empty(); }},
        {"empty", [](const Word&) { return false; }},
    };
    return p;
}

Dfa random_dfa(std::mt19937_64& rng, std::size_t states) {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(states - 1));
    std::bernoulli_distribution acc(0.4);
    std::vector<bool> a(states);
    std::vector<Dfa::State> delta(states * 2);
    for (std::size_t q = 0; q < states; ++q) a[q] = acc(rng);
    for (auto& t : delta) t = pick(rng);
    return Dfa(1, "01", states, 0, a, delta);
}

bool brute_nfa_accepts(const Nfa& n, const Word& w) {
    return n.accepts(convolve({w}));
}

}  // namespace

TEST_SUITE("automata") {

TEST_CASE("convolution examples") {
    auto c = convolve({"01", "1"});
    CHECK(c.columns == std::vector<std::string>{"01", "1#"});
    CHECK(convolve({"", ""}).columns.empty());
    CHECK(convolve({"0", "011"}).columns == std::vector<std::string>{"00", "#1", "#1"});
    CHECK(c.rows() == std::vector<Word>{"01", "1"});
}

TEST_CASE("shorter relation") {
    Dfa s = catalog_dfa("shorter");
    CHECK(s.accepts(convolve({"0", "11"})));
    CHECK_FALSE(s.accepts(convolve({"11", "0"})));
    CHECK_FALSE(s.accepts(convolve({"0", "1"})));
    CHECK_THROWS_AS(s.accepts(convolve({"0"})), ArityMismatch);
    for (const auto& x : oracle::all_words(4)) {
        for (const auto& y : oracle::all_words(4)) {
            REQUIRE(s.accepts(convolve({x, y})) == (x.size() < y.size()));
        }
    }
}

TEST_CASE("catalog agrees with independent predicates") {
    for (const auto& [name, pred] : predicates()) {
        Dfa d = catalog_dfa(name);
        for (const auto& w : oracle::all_words(10)) REQUIRE_MESSAGE(d.accepts(w) == pred(w), name << " " << w);
    }
}

TEST_CASE("boolean combinations") {
    Dfa a = catalog_dfa("zero-star-one-star"), b = catalog_dfa("one-star");
    Dfa both = combine(a, b, BoolOp::And);
    CHECK(both.accepts("11"));
    CHECK_FALSE(both.accepts("01"));
    CHECK(combine(a, a, BoolOp::Xor).is_empty());

    std::mt19937_64 rng(3);
    for (int round = 0; round < 40; ++round) {
        Dfa x = random_dfa(rng, 1 + round % 6), y = random_dfa(rng, 1 + (round * 7) % 5);
        Dfa o = combine(x, y, BoolOp::Or), m = combine(x, y, BoolOp::Minus),
            e = combine(x, y, BoolOp::Xor), n = combine(x, y, BoolOp::And);
        Dfa c = complement(x, Dfa::universal());
        for (const auto& w : oracle::all_words(8)) {
            bool px = x.accepts(w), py = y.accepts(w);
            REQUIRE(n.accepts(w) == (px && py));
            REQUIRE(o.accepts(w) == (px || py));
            REQUIRE(m.accepts(w) == (px && !py));
            REQUIRE(e.accepts(w) == (px != py));
            REQUIRE(c.accepts(w) == !px);
        }
    }
}

TEST_CASE("combine merges alphabets") {
    DfaBuilder b(1, "ab");
    auto s = b.add_state(true);
    b.add(s, "a", s);
    Dfa astar = b.build();
    Dfa u = combine(astar, Dfa::universal(), BoolOp::Or);
    CHECK(u.accepts("aaa"));
    CHECK(u.accepts("0101"));
    CHECK_FALSE(u.accepts("a0"));
}

TEST_CASE("determinize preserves random NFAs") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 40; ++round) {
        std::size_t states = 1 + round % 5;
        Nfa n(1, "01", states);
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(states - 1));
        std::bernoulli_distribution coin(0.35);
        n.add_start(0);
        for (std::uint32_t q = 0; q < states; ++q) {
            n.set_accepting(q, coin(rng));
            for (int k = 0; k < 3; ++k) {
                if (coin(rng)) n.add(q, 0, pick(rng));
                if (coin(rng)) n.add(q, 1, pick(rng));
            }
            if (coin(rng)) n.add_epsilon(q, pick(rng));
        }
        Dfa d = determinize(n);
        for (const auto& w : oracle::all_words(8)) REQUIRE(d.accepts(w) == brute_nfa_accepts(n, w));
    }
}

TEST_CASE("projection of equality is the universe") {
    DfaBuilder b(2);
    auto s = b.add_state(true);
    b.add(s, "00", s);
    b.add(s, "11", s);
    Dfa eq = b.build();
    std::vector<std::size_t> coords{1};
    Dfa p = exists(eq, coords);
    for (const auto& w : oracle::all_words(8)) REQUIRE(p.accepts(w));

    // ∃e: e is a prefix of x and e ends with 1  ⇔  x contains a 1
    DfaBuilder e1(1);
    auto a0 = e1.add_state(false), a1 = e1.add_state(true);
    e1.add(a0, "0", a0);
    e1.add(a0, "1", a1);
    e1.add(a1, "0", a0);
    e1.add(a1, "1", a1);
    Dfa ends1 = e1.build();
    Dfa rel = catalog_dfa("prefix-family");
    // lift ends1 to the second coordinate
    DfaBuilder lift(2);
    auto l0 = lift.add_state(false), l1 = lift.add_state(true), l2 = lift.add_state(false),
        l3 = lift.add_state(true);
    for (char x : std::string("01#")) {
        for (char y : std::string("01")) {
            std::string col{x, y};
            auto to = [&](bool one) { return one ? l1 : l0; };
            lift.add(l0, col, to(y == '1'));
            lift.add(l1, col, to(y == '1'));
        }
        if (x != '#') {
            std::string col{x, '#'};
            lift.add(l0, col, l2);
            lift.add(l1, col, l3);
            lift.add(l2, col, l2);
            lift.add(l3, col, l3);
        }
    }
    Dfa lifted = lift.build();
    Dfa both = combine(rel, lifted, BoolOp::And);
    Dfa has1 = exists(both, coords);
    for (const auto& w : oracle::all_words(8)) {
        REQUIRE(has1.accepts(w) == (w.find('1') != Word::npos));
    }
    (void)ends1;
}

TEST_CASE("ll utilities examples") {
    Dfa s = Dfa::universal();
    CHECK(min_ll(s) == "");
    CHECK(succ_ll(s, "1") == "00");
    CHECK(succ_ll(catalog_dfa("zero-star-one-star"), "01") == "11");
    CHECK(min_ll(catalog_dfa("one-sigma-star")) == "1");
    CHECK(count_leq_ll(s, "11") == 7);
    CHECK(count_leq_ll(catalog_dfa("zero-star"), "000") == 4);
    CHECK(count_leq_ll(catalog_dfa("zero-star-one-star"), "11") == 6);
    CHECK(enumerate_ll(s, 4) == std::vector<Word>{"", "0", "1", "00"});
    CHECK(enumerate_ll(catalog_dfa("one-zero-star"), 3) == std::vector<Word>{"1", "10", "100"});
    CHECK(enumerate_ll(Dfa::empty(), 5).empty());
    CHECK_THROWS_AS(min_ll(Dfa::empty()), EmptyLanguage);
    CHECK_THROWS_AS(succ_ll(catalog_dfa("finite-three"), "101"), NoSuccessor);
    CHECK(succ_ll(catalog_dfa("finite-three"), "000") == "101");
    CHECK(min_ll_of_length_at_least(s, 5) == "00000");
    CHECK(min_ll_of_length_at_least(catalog_dfa("even-zeros"), 3) == "0000");
}

TEST_CASE("ll utilities agree with brute-force enumeration") {
    for (const auto& [name, pred] : predicates()) {
        Dfa d = catalog_dfa(name);
        auto members = oracle::members_upto(pred, 12);
        auto listed = enumerate_ll(d, 50);
        std::vector<Word> expect(members.begin(), members.begin() + std::min<std::size_t>(50, members.size()));
        if (listed.size() == 50 && listed.back().size() > 12) continue;  // sparse domain
        REQUIRE_MESSAGE(listed == expect, name);
        for (std::size_t i = 0; i + 1 < listed.size(); ++i) REQUIRE(succ_ll(d, listed[i]) == listed[i + 1]);
        for (const auto& w : oracle::all_words(10)) {
            std::size_t expect_count = 0;
            for (const auto& m : members) {
                if (!oracle::ll_before(w, m)) ++expect_count;
            }
            REQUIRE_MESSAGE(count_leq_ll(d, w) == expect_count, name << " " << w);
        }
        for (const auto& w : oracle::all_words(6)) {
            auto it = std::find_if(members.begin(), members.end(),
                                   [&](const Word& m) { return oracle::ll_before(w, m); });
            if (it != members.end() && it->size() <= 11) REQUIRE(succ_ll(d, w) == *it);
        }
    }
}

TEST_CASE("pumping decomposition") {
    auto check = [](const Dfa& d, const Word& x) {
        auto [u, v, w] = pump_decompose(d, x);
        REQUIRE(u + v + w == x);
        REQUIRE(v.size() >= 1);
        Word pumped = u;
        for (int n = 0; n <= 6; ++n) {
            REQUIRE(d.accepts(pumped + w));
            for (const auto& y : oracle::all_words(3)) REQUIRE(d.accepts(pumped + w + y) == d.accepts(x + y));
            pumped += v;
        }
        return Decomposition{u, v, w};
    };
    auto a = check(Dfa::universal(), "000");
    CHECK((a.u == "" && a.v == "0" && a.w == "00"));
    auto b = check(catalog_dfa("zero-star-one-star"), "01");
    CHECK(((b.u == "0" && b.v == "1" && b.w == "") || (b.u == "" && b.v == "0" && b.w == "1")));
    auto c = check(catalog_dfa("even-zeros"), "0000");
    CHECK((c.u == "" && c.v == "00" && c.w == "00"));
    for (const auto& [name, pred] : predicates()) {
        Dfa d = catalog_dfa(name);
        for (const auto& x : oracle::members_upto(pred, 9)) {
            if (x.size() >= d.live_state_count()) check(d, x);
        }
    }
    CHECK_THROWS_AS(pump_decompose(catalog_dfa("zero-star"), "01"), PumpingError);
    CHECK_THROWS_AS(pump_decompose(catalog_dfa("even-zeros"), ""), PumpingError);
}

TEST_CASE("growth classification agrees with brute-force slice counts") {
    using K = GrowthClass::Kind;
    CHECK(growth_class(Dfa::universal()).kind == K::Exponential);
    CHECK(growth_class(catalog_dfa("zero-star-one-star")).kind == K::Polynomial);
    CHECK(growth_class(catalog_dfa("zero-or-one-star")) == GrowthClass{K::BoundedSlices, 2, 0});
    CHECK(growth_class(Dfa::empty()) == GrowthClass{K::BoundedSlices, 0, 0});
    CHECK(growth_class(catalog_dfa("zero-star-one-star-zero-star")).degree == 2);

    for (const auto& [name, pred] : predicates()) {
        Dfa d = catalog_dfa(name);
        GrowthClass g = growth_class(d);
        std::vector<std::size_t> counts;
        for (std::size_t n = 0; n <= 12; ++n) counts.push_back(oracle::slice(pred, n));
        auto kc = kernels::slice_counts_bruteforce(d, 12);
        for (std::size_t n = 0; n <= 12; ++n) {
            REQUIRE(kc[n] == counts[n]);
            REQUIRE(slice_count(d, n) == counts[n]);
        }
        std::size_t peak = *std::max_element(counts.begin(), counts.end());
        if (g.kind == K::BoundedSlices) {
            REQUIRE_MESSAGE(peak <= g.bound, name);
            REQUIRE_MESSAGE(peak == g.bound, name);
        } else if (g.kind == K::Exponential) {
            auto k = exponential_witness(d);
            REQUIRE_MESSAGE(k.has_value(), name);
            std::size_t total = 0;
            for (std::size_t n = 0; n <= 12; ++n) total += counts[n];
            REQUIRE(total >= 64);
        } else {
            REQUIRE_MESSAGE(counts[12] > counts[6], name);
            REQUIRE_MESSAGE(counts[12] <= 13 * 13, name);
        }
        REQUIRE(is_infinite(d) == (g.kind != K::BoundedSlices || counts[12] > 0));
    }
}

TEST_CASE("alphabet embedding") {
    AlphabetCodec abc("abc");
    CHECK(abc.arity() == 2);
    CHECK(abc.phi('a') == "00");
    CHECK(abc.phi('b') == "01");
    CHECK(abc.phi('c') == "10");
    CHECK(abc.encode("ab").rows() == std::vector<Word>{"00", "01"});
    AlphabetCodec bin("01");
    CHECK(bin.arity() == 1);
    CHECK(bin.phi('1') == "1");
    for (const auto& w : oracle::all_words(6, "abc")) REQUIRE(abc.decode(abc.encode(w)) == w);

    DfaBuilder b(1, "abc");
    auto s0 = b.add_state(true), s1 = b.add_state(false);
    b.add(s0, "a", s1);
    b.add(s1, "b", s0);
    b.add(s0, "c", s0);
    Dfa g = b.build();
    Embedding e = embed_alphabet(g);
    for (const auto& w : oracle::all_words(6, "abc")) {
        REQUIRE(e.image.accepts(e.codec.encode(w)) == g.accepts(w));
    }
}

TEST_CASE("json roundtrip and implicit trap") {
    for (const auto& name : catalog_names()) {
        Dfa d = catalog_dfa(name);
        Dfa r = dfa_from_json(to_json(d));
        for (const auto& x : oracle::all_words(6)) {
            if (d.arity() == 1) {
                REQUIRE(r.accepts(x) == d.accepts(x));
            } else {
                for (const auto& y : oracle::all_words(3)) {
                    REQUIRE(r.accepts(convolve({x, y})) == d.accepts(convolve({x, y})));
                }
            }
        }
    }
    auto j = nlohmann::json::parse(
        R"({"arity":1,"alphabet":"01","states":2,"start":0,"accepting":[1],"transitions":[[0,"1",1]]})");
    Dfa d = dfa_from_json(j);
    CHECK(d.accepts("1"));
    CHECK_FALSE(d.accepts("0"));
    CHECK_FALSE(d.accepts("11"));
    CHECK_THROWS_AS(dfa_from_json(nlohmann::json::parse(R"({"arity":1})")), ParseError);
}

TEST_CASE("lasso and finite languages") {
    Dfa l = lasso("1", "01", "0");
    for (const auto& w : oracle::all_words(10)) {
        bool expect = false;
        for (std::size_t n = 0; 2 * n + 2 <= w.size(); ++n) {
            Word m = "1";
            for (std::size_t i = 0; i < n; ++i) m += "01";
            m += "0";
            if (m == w) expect = true;
        }
        REQUIRE(l.accepts(w) == expect);
    }
    std::vector<Word> ws{"", "01", "111"};
    Dfa f = finite_language(ws);
    for (const auto& w : oracle::all_words(6)) {
        REQUIRE(f.accepts(w) == (std::find(ws.begin(), ws.end(), w) != ws.end()));
    }
}

}
