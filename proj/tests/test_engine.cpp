#include <doctest.h>

#include <random>

#include "autorand/catalog.hpp"
#include "autorand/constructions.hpp"
#include "autorand/engine.hpp"
#include "autorand/kernels.hpp"
#include "oracles.hpp"

using namespace autorand;

namespace {

Dyadic q(long a, std::uint64_t b) { return Dyadic::fraction(a, b); }

Setup broken_setup() {
    Setup s;
    s.name = "broken";
    s.start = {Dyadic(1), {Word()}};
    s.bet_factors = {q(3, 1), q(3, 2)};
    s.step = [](MState st, const DataPoint& t) {
        if (t.is_pause()) return st;
        st.capital = scale_const(st.capital, t.bit ? q(3, 1) : q(3, 2));
        return st;
    };
    return s;
}

std::vector<TextItem> random_items(std::mt19937_64& rng, std::size_t n, double pause = 0.1) {
    auto words = oracle::all_words(6);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::bernoulli_distribution p(pause);
    std::vector<TextItem> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (p(rng)) {
            out.push_back(std::nullopt);
        } else {
            out.push_back(words[pick(rng)]);
        }
    }
    return out;
}

std::vector<Setup> shipped_setups() {
    std::vector<Setup> out;
    out.push_back(regular_bettor(catalog_dfa("zero-star-one-star")));
    out.push_back(regular_bettor(catalog_dfa("one-star")));
    out.push_back(subset_bettor(catalog_dfa("one-zero-star"), Side::Inside));
    out.push_back(subset_bettor(catalog_dfa("zero-star"), Side::Outside));
    out.push_back(family_learner(prefix_family()));
    out.push_back(variant_family_learner(prefix_family()));
    out.push_back(constant_setup());
    return out;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("regular bettor on its own language") {
    Dfa l = catalog_dfa("zero-star-one-star");
    Stream z(ll_text(Dfa::universal()), oracle_of(l));
    auto r = run(regular_bettor(l), z, 4);
    CHECK(r.trace.capitals() == std::vector<Dyadic>{1, q(3, 1), q(9, 2), q(27, 3), q(81, 4)});
}

TEST_CASE("pauses preserve capital") {
    std::vector<TextItem> items(5, std::nullopt);
    items.push_back("0");
    items.push_back("1");
    Stream z(sequence_text(items), oracle_of(Dfa::universal()));
    auto r = run(regular_bettor(catalog_dfa("zero-star")), z, 7);
    for (std::size_t i = 0; i <= 5; ++i) CHECK(r.trace.entries[i].capital == Dyadic(1));
    CHECK(r.trace.entries[6].capital == q(3, 1));
    CHECK(r.trace.entries[7].capital == q(3, 2));
    CHECK(r.trace.entries[6].point.word == Word("0"));
}

TEST_CASE("zero steps") {
    Stream z(ll_text(Dfa::universal()), oracle_of(Dfa::universal()));
    auto r = run(constant_setup(), z, 0);
    CHECK(r.trace.size() == 1);
    CHECK(r.trace.final_capital() == Dyadic(1));
}

TEST_CASE("validity budget") {
    Stream z(sequence_text({"0"}, 3), oracle_of(Dfa::universal()));
    CHECK_THROWS_AS(run(constant_setup(), z, 10), ValidityBudgetExceeded);
    Stream ok(sequence_text({"0", std::nullopt, std::nullopt, "1"}, 3), oracle_of(Dfa::universal()));
    CHECK_NOTHROW(run(constant_setup(), ok, 4));
}

TEST_CASE("ll text and empty domains") {
    Text t = ll_text(Dfa::universal());
    CHECK(*t.next() == "");
    CHECK(*t.next() == "0");
    CHECK(*t.next() == "1");
    CHECK(*t.next() == "00");
    CHECK_THROWS_AS(ll_text(Dfa::empty()), EmptyLanguage);
}

TEST_CASE("fairness audit") {
    auto words = oracle::all_words(5);
    auto good = audit_fairness(regular_bettor(catalog_dfa("zero-star")), words);
    CHECK(good.passed());
    CHECK(good.transitions > 0);
    auto bad = audit_fairness(broken_setup(), words);
    CHECK_FALSE(bad.passed());
    CHECK(bad.violations.front().kind == "fairness");
    CHECK(bad.to_json()["violations"].size() == bad.violations.size());

    Stream z(ll_text(Dfa::universal()), oracle_of(Dfa::universal()));
    CHECK_THROWS_AS(run(broken_setup(), z, 3), FairnessViolation);
}

TEST_CASE("bet factor discipline") {
    Setup s = regular_bettor(catalog_dfa("zero-star"));
    s.bet_factors = {q(3, 1)};
    CHECK_THROWS_AS(checked_step(s, s.start, DataPoint::labeled("1", true)), BetFactorViolation);
    Setup grow = constant_setup();
    grow.step = [](MState st, const DataPoint&) {
        st.memory[0] += std::string(20, '0');
        return st;
    };
    CHECK_THROWS_AS(checked_step(grow, grow.start, DataPoint::pause()), BetFactorViolation);
    Setup arity = constant_setup();
    arity.step = [](MState st, const DataPoint&) {
        st.memory.push_back("");
        return st;
    };
    CHECK_THROWS_AS(checked_step(arity, arity.start, DataPoint::pause()), ArityMismatch);
    Setup neg = constant_setup();
    neg.bet_factors.clear();
    neg.step = [](MState st, const DataPoint&) {
        st.capital = Dyadic(-1);
        return st;
    };
    CHECK_THROWS_AS(checked_step(neg, neg.start, DataPoint::pause()), BetFactorViolation);
}

TEST_CASE("success proxy") {
    CapitalTrace t;
    for (Dyadic c : {Dyadic(1), q(3, 1), q(9, 2)}) t.entries.push_back({0, DataPoint::pause(), c});
    CHECK(succeeded(t, Dyadic(2)));
    CapitalTrace flat;
    for (int i = 0; i < 5; ++i) flat.entries.push_back({0, DataPoint::pause(), Dyadic(1)});
    CHECK_FALSE(succeeded(flat, q(3, 1)));
    CHECK_THROWS_AS(succeeded(flat, Dyadic(1)), PreconditionError);

    Dfa l = catalog_dfa("zero-star-one-star");
    Stream z(ll_text(Dfa::universal()), oracle_of(l));
    auto r = run(regular_bettor(l), z, 35);
    CHECK(succeeded(r.trace, default_threshold()));
    Stream z2(ll_text(Dfa::universal()), oracle_of(l));
    CHECK_FALSE(succeeded(run(regular_bettor(l), z2, 34).trace, default_threshold()));
}

TEST_CASE("setup algebra identities on random honest streams") {
    std::mt19937_64 rng(17);
    auto setups = shipped_setups();
    auto targets = catalog_names();
    for (int round = 0; round < 20; ++round) {
        const auto& a = setups[rng() % setups.size()];
        const auto& b = setups[rng() % setups.size()];
        Dfa target = catalog_dfa(targets[rng() % 14]);
        if (target.arity() != 1) target = Dfa::universal();
        auto items = random_items(rng, 50);
        auto trace_of = [&](const Setup& s) {
            Stream z(sequence_text(items), oracle_of(target));
            return run(s, z, 50).trace.capitals();
        };
        auto ta = trace_of(a), tb = trace_of(b);
        auto sum = trace_of(add_setups(a, b));
        Dyadic c = q(5, 3);
        auto scaled = trace_of(scale_setup(c, a));
        REQUIRE(add_setups(a, b).start.capital == a.start.capital + b.start.capital);
        REQUIRE(add_setups(a, b).memory_arity == a.memory_arity + b.memory_arity + 4);
        for (std::size_t i = 0; i < ta.size(); ++i) {
            REQUIRE(sum[i] == ta[i] + tb[i]);
            REQUIRE(scaled[i] == multiply_unrestricted(c, ta[i]));
        }
        REQUIRE(trace_of(scale_setup(Dyadic(1), a)) == ta);
    }
}

TEST_CASE("truncated sums") {
    auto setups = shipped_setups();
    std::vector<Setup> three(setups.begin(), setups.begin() + 3);
    Dyadic quarter = q(1, 2);
    CHECK(truncated_sum(three, quarter).start.capital == q(21, 4));
    std::span<const Setup> one(three.data(), 1);
    std::mt19937_64 rng(23);
    auto items = random_items(rng, 30, 0.0);
    Dfa target = catalog_dfa("zero-star-one-star");
    auto trace_of = [&](const Setup& s) {
        Stream z(sequence_text(items), oracle_of(target));
        return run(s, z, 30).trace.capitals();
    };
    CHECK(trace_of(truncated_sum(one, quarter)) == trace_of(three[0]));
    std::vector<std::vector<Dyadic>> parts;
    for (const auto& s : setups) parts.push_back(trace_of(s));
    auto total = trace_of(truncated_sum(setups, quarter));
    for (std::size_t i = 0; i < total.size(); ++i) {
        Dyadic weighted;
        for (std::size_t k = 0; k < parts.size(); ++k) {
            weighted += multiply_unrestricted(parts[k][i], pow2(-2 * static_cast<std::int64_t>(k)));
        }
        REQUIRE(total[i] == weighted);
    }
}

TEST_CASE("fairness brackets the capital") {
    std::mt19937_64 rng(29);
    auto words = oracle::all_words(4);
    for (const auto& s : shipped_setups()) {
        auto states = explore_states(s, words, 2, 64);
        for (const auto& st : states) {
            for (const auto& w : words) {
                auto a = checked_step(s, st, DataPoint::labeled(w, false)).capital;
                auto b = checked_step(s, st, DataPoint::labeled(w, true)).capital;
                REQUIRE(std::min(a, b) <= st.capital);
                REQUIRE(st.capital <= std::max(a, b));
            }
        }
    }
}

TEST_CASE("honest labels") {
    Dfa l = catalog_dfa("no-double-one");
    Stream z(ll_text(Dfa::universal()), oracle_of(l));
    for (int i = 0; i < 200; ++i) {
        DataPoint t = z.next();
        REQUIRE(t.bit == l.accepts(*t.word));
    }
}

TEST_CASE("text classification") {
    std::vector<TextItem> items{"0", std::nullopt, "0"};
    CHECK_FALSE(classify_text_prefix(items, Dfa::universal()).repetition_free);
    std::vector<TextItem> ll;
    Text t = ll_text(Dfa::universal());
    for (int i = 0; i < 15; ++i) ll.push_back(t.next());
    auto f = classify_text_prefix(ll, Dfa::universal());
    CHECK(f.repetition_free);
    CHECK(f.exhaustive_up_to == std::size_t{3});
    CHECK(f.distinct_words == 15);
    CHECK(f.range_growing);
    std::vector<TextItem> skip{"0", "1"};
    CHECK_FALSE(classify_text_prefix(skip, Dfa::universal()).exhaustive_up_to.has_value());
}

TEST_CASE("trace serialization") {
    std::vector<TextItem> items{"01", std::nullopt};
    Stream z(sequence_text(items), oracle_of(catalog_dfa("zero-star-one-star")));
    auto r = run(regular_bettor(catalog_dfa("zero-star")), z, 2);
    CHECK(trace_csv(r.trace) ==
          "stage,word,label,capital_num,capital_exp\n0,,,1,0\n1,01,1,1,1\n2,#,,1,1\n");
    auto j = trace_json(r.trace);
    CHECK(j["entries"][1]["capital"] == "1/2^1");
    CHECK(j["entries"][2]["word"] == "#");
}

TEST_CASE("parallel kernels agree with serial references") {
    auto words = oracle::all_words(5);
    for (const auto& s : shipped_setups()) {
        auto states = explore_states(s, words, 2, 40);
        auto a = kernels::audit_transitions(s, states, words);
        auto b = kernels::serial::audit_transitions(s, states, words);
        REQUIRE(a.transitions == b.transitions);
        REQUIRE(a.violations.size() == b.violations.size());
    }
    auto bad = explore_states(broken_setup(), words, 1, 10);
    auto pa = kernels::audit_transitions(broken_setup(), bad, words);
    auto pb = kernels::serial::audit_transitions(broken_setup(), bad, words);
    REQUIRE(pa.violations.size() == pb.violations.size());
    for (std::size_t i = 0; i < pa.violations.size(); ++i) {
        REQUIRE(pa.violations[i].word == pb.violations[i].word);
        REQUIRE(pa.violations[i].state == pb.violations[i].state);
    }
    for (const auto& name : {"sigma-star", "no-double-one", "zero-star-one-star"}) {
        Dfa d = catalog_dfa(name);
        REQUIRE(kernels::slice_counts_bruteforce(d, 14) == kernels::serial::slice_counts_bruteforce(d, 14));
    }
    std::vector<kernels::BatchJob> jobs;
    for (int i = 0; i < 8; ++i) {
        jobs.push_back({[i] {
                            return Stream(ll_text(Dfa::universal()),
                                          oracle_of(catalog_dfa(i % 2 ? "zero-star" : "one-star")));
                        },
                        static_cast<std::size_t>(20 + i)});
    }
    jobs.push_back({[] { return Stream(sequence_text({}, 2), oracle_of(Dfa::universal())); }, 5});
    Setup s = regular_bettor(catalog_dfa("zero-star"));
    auto pr = kernels::run_batch(s, jobs);
    auto sr = kernels::serial::run_batch(s, jobs);
    REQUIRE(pr.size() == sr.size());
    for (std::size_t i = 0; i < pr.size(); ++i) {
        REQUIRE(pr[i].error == sr[i].error);
        REQUIRE(pr[i].trace.has_value() == sr[i].trace.has_value());
        if (pr[i].trace) REQUIRE(pr[i].trace->capitals() == sr[i].trace->capitals());
    }
    CHECK_FALSE(pr.back().error.empty());
}

}
