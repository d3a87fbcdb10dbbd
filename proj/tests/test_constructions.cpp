#include <doctest.h>

#include <random>
#include <set>

#include "autorand/catalog.hpp"
#include "autorand/constructions.hpp"
#include "autorand/tm.hpp"
#include "oracles.hpp"

using namespace autorand;

namespace {

Dyadic q(long a, std::uint64_t b) { return Dyadic::fraction(a, b); }

bool is_power_of_two_times(const Dyadic& c, std::size_t k) { return c == pow2(static_cast<std::int64_t>(k)); }

bool equal_blocks(const Word& w) {
    const auto n = w.size();
    if (n % 2) return false;
    return w == std::string(n / 2, '0') + std::string(n / 2, '1');
}

}  // namespace

TEST_SUITE("tm") {

TEST_CASE("built-in machines decide their languages") {
    for (const auto& w : oracle::all_words(9)) {
        REQUIRE(tm_decide(tm_equal_blocks(), w, 100000) == equal_blocks(w));
        REQUIRE(tm_decide(tm_all_zeros(), w, 100000) == (w.find('1') == Word::npos));
        REQUIRE(tm_decide(tm_starts_with_one(), w, 100000) == (!w.empty() && w[0] == '1'));
        REQUIRE(tm_decide(tm_constant(false), w, 100000) == false);
    }
    CHECK_FALSE(tm_decide(tm_equal_blocks(), "000111", 3).has_value());
}

TEST_CASE("configurations roundtrip") {
    TmProgram p = tm_equal_blocks();
    TmConfig c = tm_initial(p, "0011");
    for (int i = 0; i < 12; ++i) {
        REQUIRE(decode_config(encode_config(c)).tape == c.tape);
        REQUIRE(encode_config(decode_config(encode_config(c))) == encode_config(c));
        c = tm_step(p, c);
    }
    CHECK_THROWS_AS(decode_config("x"), ParseError);
    auto j = to_json(p);
    CHECK(to_json(tm_from_json(j)) == j);
}

}

TEST_SUITE("constructions") {

TEST_CASE("regular bettor loses on the complement") {
    Dfa l = catalog_dfa("zero-star-one-star");
    Stream z(ll_text(Dfa::universal()), oracle_of(complement(l, Dfa::universal())));
    auto r = run(regular_bettor(l), z, 5);
    CHECK(r.trace.final_capital() == q(1, 5));
}

TEST_CASE("subset bettor") {
    Dfa r = catalog_dfa("one-zero-star");
    Stream z(ll_text(Dfa::universal()), oracle_of(catalog_dfa("one-sigma-star")));
    auto res = run(subset_bettor(r, Side::Inside), z, 31);
    std::size_t hits = 0;
    for (const auto& w : enumerate_ll(Dfa::universal(), 31)) hits += r.accepts(w);
    Dyadic expect(1);
    for (std::size_t i = 0; i < hits; ++i) expect = scale_const(expect, q(3, 1));
    CHECK(res.trace.final_capital() == expect);
    CHECK(parse_side("outside") == Side::Outside);
    CHECK_THROWS_AS(parse_side("left"), ParseError);
}

TEST_CASE("adversarial texts never let the capital rise") {
    const std::vector<std::string> domains{"sigma-star", "no-double-one", "zero-star-one-star", "one-sigma-star"};
    for (const auto& dn : domains) {
        Dfa dom = catalog_dfa(dn);
        for (auto mode : {TextMode::Any, TextMode::RepetitionFree}) {
            Setup s = regular_bettor(catalog_dfa("zero-star"));
            auto res = adversarial_text(s, oracle_of(catalog_dfa("no-double-one")), dom, mode, 40);
            REQUIRE(std::holds_alternative<AdversarialText>(res));
            const auto& t = std::get<AdversarialText>(res);
            REQUIRE(t.words.size() == 40);
            auto caps = t.trace.capitals();
            for (std::size_t i = 1; i < caps.size(); ++i) REQUIRE(caps[i] <= caps[i - 1]);
            for (const auto& w : t.words) REQUIRE(dom.accepts(w));
            if (mode == TextMode::RepetitionFree) {
                REQUIRE(std::set<Word>(t.words.begin(), t.words.end()).size() == t.words.size());
            }
        }
    }
}

TEST_CASE("adversarial text stalls against a perfect bettor") {
    Dfa l = catalog_dfa("no-double-one");
    auto res = adversarial_text(regular_bettor(l), oracle_of(l), Dfa::universal(), TextMode::Any, 10, 50);
    REQUIRE(std::holds_alternative<StallWitness>(res));
    CHECK(std::get<StallWitness>(res).stage == 0);
    CHECK(std::get<StallWitness>(res).bound == 50);
}

TEST_CASE("extracted language") {
    for (const auto& name : catalog_names()) {
        Dfa l = catalog_dfa(name);
        if (l.arity() != 1) continue;
        Setup s = regular_bettor(l);
        Oracle o = extract_language(s, s.start);
        for (const auto& w : oracle::all_words(7)) REQUIRE(o(w) == l.accepts(w));
    }
    Setup c = constant_setup();
    Oracle none = extract_language(c, c.start);
    CHECK_FALSE(none("0"));
}

TEST_CASE("family learner converges") {
    auto fam = prefix_family();
    for (const Word target : {"", "1", "01", "110"}) {
        Oracle o = [&](std::string_view x) { return fam.member(x, target); };
        Stream z(ll_text(Dfa::universal()), o);
        auto r = run(family_learner(fam), z, 400);
        REQUIRE(r.final_state.memory[0] == target);
        REQUIRE(succeeded(r.trace, default_threshold()));
    }
    Stream z(ll_text(Dfa::universal()), oracle_of(catalog_dfa("zero-star")));
    auto r = run(variant_family_learner(fam), z, 300);
    CHECK(r.final_state.memory.size() == 2);
}

TEST_CASE("prefix family membership") {
    auto fam = prefix_family();
    for (const auto& x : oracle::all_words(5)) {
        for (const auto& e : oracle::all_words(3)) {
            REQUIRE(fam.member(x, e) == (x.compare(0, e.size(), e) == 0));
        }
    }
}

TEST_CASE("dovetailing visits every pair below the ceiling") {
    auto got = dovetail_order(prefix_family(), 20);
    std::vector<std::pair<Word, Word>> expect;
    auto ws = oracle::all_words(3);
    std::sort(ws.begin(), ws.end(), oracle::ll_before);
    for (std::size_t d = 0; expect.size() < 20; ++d) {
        for (std::size_t e = 0; e <= d && expect.size() < 20; ++e) expect.push_back({ws[e], ws[d]});
    }
    CHECK(got == expect);
}

TEST_CASE("machine bettor doubles on every decided word") {
    for (bool honest : {true, false}) {
        TmProgram p = tm_equal_blocks();
        auto b = tm_dynamic_bettor(p, Dfa::universal());
        Oracle truth = [&](std::string_view w) { return tm_decide(p, w, 1000000).value() == honest; };
        auto r = run_dynamic(b.setup, b.generator, truth, 400);
        std::size_t words = 0;
        for (std::size_t i = 1; i < r.trace.size(); ++i) {
            if (!r.trace.entries[i].point.is_pause()) {
                ++words;
                if (honest) {
                    REQUIRE(is_power_of_two_times(r.trace.entries[i].capital, words));
                } else {
                    REQUIRE(r.trace.entries[i].capital.is_zero());
                }
            } else {
                REQUIRE(r.trace.entries[i].capital == r.trace.entries[i - 1].capital);
            }
        }
        REQUIRE(words >= 5);
    }
}

TEST_CASE("diagonalization defeats every listed setup") {
    nlohmann::json specs = nlohmann::json::array();
    specs.push_back({{"kind", "regular-bettor"}, {"dfa", to_json(catalog_dfa("zero-star-one-star"))}});
    specs.push_back({{"kind", "subset-bettor"}, {"dfa", to_json(catalog_dfa("one-sigma-star"))}, {"side", "inside"}});
    specs.push_back({{"kind", "family-learner"},
                     {"index", to_json(Dfa::universal())},
                     {"relation", to_json(catalog_dfa("prefix-family"))}});
    specs.push_back({{"kind", "regular-bettor"}, {"dfa", to_json(catalog_dfa("no-double-one"))}});
    Dfa dom = Dfa::universal();
    auto cert = diagonalize_specs(specs, dom, 120);
    REQUIRE(cert.entries.size() == 120);
    CHECK_FALSE(replay_certificate(cert).has_value());
    for (const auto& e : cert.entries) REQUIRE(e.capital <= Dyadic(2));

    std::vector<TextItem> items;
    std::map<Word, bool> bits;
    for (const auto& e : cert.entries) {
        items.push_back(e.word);
        bits[e.word] = e.bit;
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        Setup s = setup_from_spec(specs[i]);
        Stream z(sequence_text(items), [&](std::string_view w) { return bits.at(Word(w)); });
        auto r = run(s, z, items.size());
        Dyadic cap = pow2(2 * static_cast<std::int64_t>(i) + 1);
        for (const auto& c : r.trace.capitals()) REQUIRE(c <= cap);
    }

    auto round = DiagonalCertificate::from_json(cert.to_json());
    CHECK(round.to_json() == cert.to_json());

    auto flipped = cert;
    flipped.entries[17].bit = !flipped.entries[17].bit;
    CHECK(replay_certificate(flipped).has_value());
    auto retimed = cert;
    retimed.entries[40].capital = retimed.entries[40].capital + q(1, 30);
    CHECK(replay_certificate(retimed).has_value());
    auto rehashed = cert;
    rehashed.enumeration.erase(rehashed.enumeration.begin());
    CHECK(*replay_certificate(rehashed) == "enumeration hash mismatch");
    auto swapped = cert;
    std::swap(swapped.entries[3].word, swapped.entries[4].word);
    CHECK(replay_certificate(swapped).has_value());
}

TEST_CASE("setup specs") {
    CHECK_THROWS_AS(setup_from_spec({{"kind", "nonsense"}}), ParseError);
    CHECK_THROWS_AS(setup_from_spec({{"kind", "regular-bettor"}}), ParseError);
    CHECK(setup_from_spec({{"kind", "constant"}}).normed());
    CHECK(enumeration_hash(nlohmann::json::array()).size() == 16);
}

TEST_CASE("hypothesis positions") {
    CHECK(hypothesis_position("") == 0);
    CHECK(hypothesis_position("0") == 1);
    CHECK(hypothesis_position("1") == 2);
    CHECK(hypothesis_position("00") == 3);
    CHECK(hypothesis_position("11") == 6);
}

TEST_CASE("anchor bettor on the full binary domain") {
    Setup s = pclass_bettor(default_hypotheses(), Dfa::universal());
    Stream z(ll_text(Dfa::universal()), oracle_of(catalog_dfa("zero-star")));
    auto r = run(s, z, 40);
    auto caps = r.trace.capitals();
    std::set<Word> anchors{"", "0", "00", "0000"};
    for (std::size_t i = 1; i < caps.size(); ++i) {
        const Word& w = *r.trace.entries[i].point.word;
        if (!anchors.count(w)) REQUIRE(caps[i] == caps[i - 1]);
    }
    CHECK(caps[4] == q(1, 1));
    CHECK(caps[16] == q(1, 2));
    CHECK(r.final_state.memory[kHypothesis] == "1");
    CHECK(audit_fairness(s, oracle::all_words(3), 2, 64).passed());
    CHECK_THROWS_AS(pclass_bettor(default_hypotheses(), catalog_dfa("zero-star-one-star")), PreconditionError);
}

TEST_CASE("anchor report") {
    auto rep = anchor_report(Dfa::universal(), 10, 1 << 20);
    std::vector<Word> expect{"", "0", "00", "0000", std::string(16, '0'), std::string(65536, '0')};
    CHECK(rep.anchors == expect);
    CHECK(rep.truncated);
    CHECK(rep.next_length == BigInt(1) << 65536);
    CHECK(rep.checks.size() == 5);
    for (const auto& c : rep.checks) {
        CHECK(c.gap_holds);
        CHECK(c.lower_holds);
        CHECK(c.upper_holds);
        CHECK(c.gap == c.next_position - c.position);
    }
    auto nd = anchor_report(catalog_dfa("no-double-one"), 7, 4000);
    for (std::size_t i = 0; i < nd.checks.size(); ++i) {
        const auto& c = nd.checks[i];
        REQUIRE(c.gap_holds);
        REQUIRE(c.upper_holds);
        REQUIRE(nd.anchors[i + 1].size() >= c.counter.get_ui());
    }
    CHECK_THROWS_AS(anchor_report(catalog_dfa("zero-star"), 3, 100), PreconditionError);
}

TEST_CASE("finite subsets of bounded-slice domains") {
    for (const auto& name : {"zero-or-one-star", "finite-three", "one-zero-star", "even-zeros"}) {
        Dfa dom = catalog_dfa(name);
        auto idx = finite_set_indexing(dom);
        auto in = [&](const Word& w) { return dom.accepts(w); };
        auto members = oracle::members_upto(in, 7);
        std::sort(members.begin(), members.end(), oracle::ll_before);
        const std::size_t k = std::min<std::size_t>(8, members.size());
        for (std::size_t n = 0; n <= 7; ++n) {
            auto s = idx.slice(n);
            REQUIRE(s.size() == oracle::slice(in, n));
            REQUIRE(std::is_sorted(s.begin(), s.end()));
        }
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            std::vector<Word> set;
            for (std::size_t i = 0; i < k; ++i) {
                if ((mask >> i) & 1) set.push_back(members[i]);
            }
            Word e = idx.encode(set);
            REQUIRE(idx.family.index.accepts(e));
            REQUIRE(idx.decode(e) == set);
            for (const auto& x : oracle::all_words(5)) {
                const bool want = std::find(set.begin(), set.end(), x) != set.end();
                REQUIRE(idx.family.member(x, e) == want);
            }
        }
    }
    CHECK_THROWS_AS(finite_set_indexing(Dfa::universal()), PreconditionError);
    CHECK_THROWS_AS(finite_set_indexing(catalog_dfa("zero-star-one-star")), PreconditionError);
}

}
