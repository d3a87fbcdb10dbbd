#include "autorand/constructions.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <memory>
#include <set>

#include "autorand/catalog.hpp"

namespace autorand {

namespace {

const Dyadic kThreeHalves = Dyadic::fraction(3, 1);
const Dyadic kHalf = Dyadic::fraction(1, 1);

Dyadic bet(const Dyadic& c, bool won) { return scale_const(c, won ? kThreeHalves : kHalf); }

}  // namespace

Setup regular_bettor(const Dfa& l) {
    auto dfa = std::make_shared<const Dfa>(l);
    Setup s;
    s.name = "regular-bettor";
    s.memory_arity = 1;
    s.start = {Dyadic(1), {Word()}};
    s.bet_factors = {kThreeHalves, kHalf};
    s.step = [dfa](MState st, const DataPoint& t) {
        if (t.is_pause()) return st;
        st.capital = bet(st.capital, dfa->accepts(*t.word) == t.bit);
        return st;
    };
    return s;
}

std::string to_string(Side s) { return s == Side::Inside ? "inside" : "outside"; }

Side parse_side(std::string_view text) {
    if (text == "inside") return Side::Inside;
    if (text == "outside") return Side::Outside;
    throw ParseError("side must be inside or outside, got '" + std::string(text) + "'");
}

Setup subset_bettor(const Dfa& r, Side side) {
    auto dfa = std::make_shared<const Dfa>(r);
    const bool target = side == Side::Inside;
    Setup s;
    s.name = "subset-bettor(" + to_string(side) + ")";
    s.memory_arity = 1;
    s.start = {Dyadic(1), {Word()}};
    s.bet_factors = {Dyadic(1), kThreeHalves, kHalf};
    s.step = [dfa, target](MState st, const DataPoint& t) {
        if (t.is_pause() || !dfa->accepts(*t.word)) return st;
        st.capital = bet(st.capital, t.bit == target);
        return st;
    };
    return s;
}

Setup constant_setup() {
    Setup s;
    s.name = "constant";
    s.memory_arity = 1;
    s.start = {Dyadic(1), {Word()}};
    s.bet_factors = {Dyadic(1)};
    s.step = [](MState st, const DataPoint&) { return st; };
    return s;
}

// ---------------------------------------------------------------------------

std::variant<AdversarialText, StallWitness> adversarial_text(const Setup& d, const Oracle& oracle,
                                                             const Dfa& domain, TextMode mode,
                                                             std::size_t horizon,
                                                             std::size_t search_bound) {
    LlCursor cursor(domain);
    std::vector<Word> listed;
    bool exhausted = false;
    std::set<Word> used;
    AdversarialText out;
    MState s = d.start;
    out.trace.entries.push_back({0, DataPoint::pause(), s.capital});
    for (std::size_t stage = 0; stage < horizon; ++stage) {
        std::optional<std::pair<DataPoint, MState>> found;
        std::size_t examined = 0;
        for (std::size_t i = 0; examined < search_bound; ++i) {
            if (i == listed.size()) {
                if (exhausted) break;
                auto w = cursor.next();
                if (!w) {
                    exhausted = true;
                    break;
                }
                listed.push_back(std::move(*w));
            }
            const Word& w = listed[i];
            if (mode == TextMode::RepetitionFree && used.count(w)) continue;
            ++examined;
            DataPoint t = DataPoint::labeled(w, oracle(w));
            MState next = checked_step(d, s, t);
            if (next.capital <= s.capital) {
                found.emplace(std::move(t), std::move(next));
                break;
            }
        }
        if (!found) return StallWitness{s, stage, search_bound};
        used.insert(*found->first.word);
        out.words.push_back(*found->first.word);
        s = std::move(found->second);
        out.trace.entries.push_back({stage + 1, found->first, s.capital});
    }
    return out;
}

Oracle extract_language(const Setup& d, const MState& p) {
    return [d, p](std::string_view x) {
        Word w(x);
        MState one = checked_step(d, p, DataPoint::labeled(w, true));
        MState zero = checked_step(d, p, DataPoint::labeled(w, false));
        return one.capital > zero.capital;
    };
}

// ---------------------------------------------------------------------------

bool AutomaticFamily::member(std::string_view x, std::string_view e) const {
    return relation.accepts(convolve({Word(x), Word(e)}));
}

AutomaticFamily prefix_family() { return {Dfa::universal(), catalog_dfa("prefix-family")}; }

namespace {

Word next_index(const Dfa& index, const Word& e) {
    try {
        return succ_ll(index, e);
    } catch (const NoSuccessor&) {
        throw LearnerStall("index set exhausted after '" + e + "'");
    }
}

}  // namespace

Setup family_learner(const AutomaticFamily& fam) {
    if (fam.index.is_empty()) throw EmptyLanguage("empty index set");
    auto f = std::make_shared<const AutomaticFamily>(fam);
    Setup s;
    s.name = "family-learner";
    s.memory_arity = 1;
    s.start = {Dyadic(1), {min_ll(fam.index)}};
    s.bet_factors = {kThreeHalves, kHalf};
    s.memory_slack = fam.index.size() + 2;
    s.step = [f](MState st, const DataPoint& t) {
        if (t.is_pause()) return st;
        const bool right = f->member(*t.word, st.memory[0]) == t.bit;
        st.capital = bet(st.capital, right);
        if (!right) st.memory[0] = next_index(f->index, st.memory[0]);
        return st;
    };
    return s;
}

namespace {

void advance_pair(const Dfa& index, const Word& first, Word& e, Word& d) {
    if (ll_less(e, d, index.letters())) {
        e = next_index(index, e);
    } else {
        e = first;
        d = next_index(index, d);
    }
}

}  // namespace

Setup variant_family_learner(const AutomaticFamily& fam) {
    if (fam.index.is_empty()) throw EmptyLanguage("empty index set");
    auto f = std::make_shared<const AutomaticFamily>(fam);
    const Word first = min_ll(fam.index);
    Setup s;
    s.name = "variant-learner";
    s.memory_arity = 2;
    s.start = {Dyadic(1), {first, first}};
    s.bet_factors = {kThreeHalves, kHalf};
    s.memory_slack = fam.index.size() + 2;
    s.step = [f, first](MState st, const DataPoint& t) {
        if (t.is_pause()) return st;
        const bool right = f->member(*t.word, st.memory[0]) == t.bit;
        st.capital = bet(st.capital, right);
        if (!right) advance_pair(f->index, first, st.memory[0], st.memory[1]);
        return st;
    };
    return s;
}

std::vector<std::pair<Word, Word>> dovetail_order(const AutomaticFamily& fam, std::size_t count) {
    std::vector<std::pair<Word, Word>> out;
    if (count == 0) return out;
    const Word first = min_ll(fam.index);
    Word e = first, d = first;
    out.push_back({e, d});
    while (out.size() < count) {
        advance_pair(fam.index, first, e, d);
        out.push_back({e, d});
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

enum TmSlot : std::size_t { kTmInput, kTmConfig, kTmOutput };

std::string output_of(const TmProgram& p, const TmConfig& c) {
    auto o = tm_output(p, c);
    if (!o) return "";
    return *o ? "1" : "0";
}

}  // namespace

TmBettor tm_dynamic_bettor(const TmProgram& prog, const Dfa& domain) {
    auto p = std::make_shared<const TmProgram>(prog);
    auto dom = std::make_shared<const Dfa>(domain);
    const Word first = min_ll(domain);
    TmConfig c0 = tm_initial(prog, first);

    TmBettor out;
    Setup& s = out.setup;
    s.name = "tm-dynamic(" + prog.name + ")";
    s.memory_arity = 3;
    s.start = {Dyadic(1), {first, encode_config(c0), output_of(prog, c0)}};
    s.bet_factors = {Dyadic(2), Dyadic(0), Dyadic(1)};
    s.memory_slack = domain.size() + 8;
    s.step = [p, dom](MState st, const DataPoint& t) {
        auto& m = st.memory;
        if (t.word && !m[kTmOutput].empty() && *t.word == m[kTmInput]) {
            const bool predicted = m[kTmOutput] == "1";
            st.capital = predicted == t.bit ? scale_const(st.capital, Dyadic(2)) : Dyadic(0);
            m[kTmInput] = succ_ll(*dom, m[kTmInput]);
            TmConfig c = tm_initial(*p, m[kTmInput]);
            m[kTmConfig] = encode_config(c);
            m[kTmOutput] = output_of(*p, c);
        } else if (m[kTmOutput].empty()) {
            TmConfig c = tm_step(*p, decode_config(m[kTmConfig]));
            m[kTmConfig] = encode_config(c);
            m[kTmOutput] = output_of(*p, c);
        }
        return st;
    };
    out.generator = [](const MState& st) -> TextItem {
        if (st.memory[kTmOutput].empty()) return std::nullopt;
        return st.memory[kTmInput];
    };
    return out;
}

// ---------------------------------------------------------------------------

nlohmann::json DiagonalCertificate::to_json() const {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& e : entries) {
        words.push_back({{"w", e.word}, {"bit", e.bit ? 1 : 0}, {"capital", e.capital.to_string()}});
    }
    return {{"domain", domain},
            {"enumeration", enumeration},
            {"weight_base", weight_base.to_string()},
            {"words", words},
            {"enum_hash", enum_hash}};
}

DiagonalCertificate DiagonalCertificate::from_json(const nlohmann::json& j) {
    try {
        DiagonalCertificate c;
        c.domain = j.at("domain");
        c.enumeration = j.at("enumeration");
        c.weight_base = Dyadic::parse(j.at("weight_base").get<std::string>());
        c.enum_hash = j.at("enum_hash").get<std::string>();
        for (const auto& w : j.at("words")) {
            int bit = w.at("bit").get<int>();
            if (bit != 0 && bit != 1) throw ParseError("certificate bit must be 0 or 1");
            c.entries.push_back({w.at("w").get<std::string>(), bit == 1,
                                 Dyadic::parse(w.at("capital").get<std::string>())});
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("certificate: ") + e.what());
    }
}

Setup setup_from_spec(const nlohmann::json& spec) {
    try {
        const auto kind = spec.at("kind").get<std::string>();
        if (kind == "regular-bettor") return regular_bettor(dfa_from_json(spec.at("dfa")));
        if (kind == "subset-bettor") {
            return subset_bettor(dfa_from_json(spec.at("dfa")),
                                 parse_side(spec.at("side").get<std::string>()));
        }
        if (kind == "family-learner" || kind == "variant-learner") {
            AutomaticFamily f{dfa_from_json(spec.at("index")), dfa_from_json(spec.at("relation"))};
            return kind == "family-learner" ? family_learner(f) : variant_family_learner(f);
        }
        if (kind == "constant") return constant_setup();
        throw ParseError("unknown setup kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("setup spec: ") + e.what());
    }
}

std::string enumeration_hash(const nlohmann::json& enumeration) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : enumeration.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

MState replay_prefix(const Setup& d, std::span<const CertificateEntry> prefix) {
    MState s = d.start;
    for (const auto& e : prefix) s = checked_step(d, std::move(s), DataPoint::labeled(e.word, e.bit));
    return s;
}

}  // namespace

DiagonalCertificate diagonalize(std::span<const Setup> enumeration, const Dfa& domain,
                                std::size_t words) {
    if (enumeration.empty()) throw PreconditionError("empty enumeration");
    for (const auto& d : enumeration) {
        if (!d.normed()) throw PreconditionError(d.name + " is not normed");
    }
    const auto list = enumerate_ll(domain, words);
    if (list.size() < words) throw PreconditionError("domain has fewer than the requested words");

    DiagonalCertificate cert;
    cert.domain = to_json(domain);
    for (const auto& d : enumeration) cert.enumeration.push_back({{"kind", "opaque"}, {"name", d.name}});
    cert.enum_hash = enumeration_hash(cert.enumeration);

    const std::size_t last = enumeration.size() - 1;
    std::vector<Dyadic> weight{Dyadic(1)};
    for (std::size_t i = 1; i <= last; ++i) weight.push_back(scale_const(weight.back(), cert.weight_base));

    std::vector<MState> comp;
    for (std::size_t j = 1; j <= words; ++j) {
        const Word& w = list[j - 1];
        const std::size_t m = std::min(j, last);
        while (comp.size() < m + 1) {
            comp.push_back(replay_prefix(enumeration[comp.size()], cert.entries));
        }
        std::array<std::vector<MState>, 2> next;
        std::array<Dyadic, 2> total;
        for (int b = 0; b < 2; ++b) {
            for (std::size_t i = 0; i <= m; ++i) {
                next[b].push_back(checked_step(enumeration[i], comp[i], DataPoint::labeled(w, b == 1)));
                total[b] += scale_const(next[b].back().capital, weight[i]);
            }
        }
        const int bit = total[1] < total[0] ? 1 : 0;
        comp = std::move(next[bit]);
        cert.entries.push_back({w, bit == 1, total[bit]});
    }
    return cert;
}

DiagonalCertificate diagonalize_specs(const nlohmann::json& enumeration, const Dfa& domain,
                                      std::size_t words) {
    std::vector<Setup> setups;
    for (const auto& spec : enumeration) setups.push_back(setup_from_spec(spec));
    DiagonalCertificate cert = diagonalize(setups, domain, words);
    cert.enumeration = enumeration;
    cert.enum_hash = enumeration_hash(enumeration);
    return cert;
}

std::optional<std::string> replay_certificate(const DiagonalCertificate& cert) {
    if (enumeration_hash(cert.enumeration) != cert.enum_hash) return "enumeration hash mismatch";
    if (cert.enumeration.empty()) return "empty enumeration";
    std::vector<Setup> setups;
    for (const auto& spec : cert.enumeration) setups.push_back(setup_from_spec(spec));
    Dfa domain = dfa_from_json(cert.domain);
    const auto list = enumerate_ll(domain, cert.entries.size());
    for (std::size_t j = 0; j < cert.entries.size(); ++j) {
        const auto& e = cert.entries[j];
        if (j >= list.size() || list[j] != e.word) {
            return "word " + std::to_string(j + 1) + " '" + e.word + "' is not the next domain word";
        }
        if (e.capital > Dyadic(2)) return "capital above 2 at word '" + e.word + "'";
    }

    // Each position j uses the sum over components 0..min(j, N).
    const std::size_t last = setups.size() - 1;
    const std::size_t n = cert.entries.size();
    for (std::size_t m = 1; m <= last + 1 && m <= n; ++m) {
        const std::size_t top = std::min(m, last);
        std::span<const Setup> parts(setups.data(), top + 1);
        Setup sum = truncated_sum(parts, cert.weight_base);
        MState s = sum.start;
        const std::size_t until = m <= last ? m : n;
        for (std::size_t j = 1; j <= until; ++j) {
            const auto& e = cert.entries[j - 1];
            if (j >= m) {
                MState s0 = checked_step(sum, s, DataPoint::labeled(e.word, false));
                MState s1 = checked_step(sum, s, DataPoint::labeled(e.word, true));
                const bool choice = s1.capital < s0.capital;
                if (choice != e.bit) return "label of word '" + e.word + "' is not the diagonal choice";
                const Dyadic& got = e.bit ? s1.capital : s0.capital;
                if (got != e.capital) {
                    return "capital mismatch at word '" + e.word + "': recorded " + e.capital.to_string() +
                           ", replayed " + got.to_string();
                }
                s = e.bit ? std::move(s1) : std::move(s0);
            } else {
                s = checked_step(sum, std::move(s), DataPoint::labeled(e.word, e.bit));
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

HypothesisSpace default_hypotheses() {
    return {{"always-0", tm_constant(false), 1000},
            {"starts-with-one", tm_starts_with_one(), 1000},
            {"all-zeros", tm_all_zeros(), 1'000'000}};
}

std::size_t hypothesis_position(std::string_view index_word) {
    BigInt n = count_leq_ll(Dfa::universal(), index_word) - 1;
    if (!n.fits_ulong_p()) throw HypothesesExhausted("hypothesis index out of range");
    return n.get_ui();
}

namespace {

struct MachineSlots {
    std::string state;
    std::string config;
    std::string output;
};

MachineSlots machine_slots(const Hypothesis& h, const TmConfig& c) {
    std::string full = encode_config(c);
    auto comma = full.find(',');
    std::string out;
    if (auto o = tm_output(h.program, c)) {
        out = *o ? "1" : "0";
    } else if (c.steps >= h.budget) {
        out = "T";
    }
    return {full.substr(0, comma), full.substr(comma + 1), out};
}

const Hypothesis* hypothesis_at(const HypothesisSpace& hyp, const Word& index) {
    const std::size_t pos = hypothesis_position(index);
    return pos < hyp.size() ? &hyp[pos] : nullptr;
}

}  // namespace

Setup pclass_bettor(const HypothesisSpace& hyp, const Dfa& domain) {
    if (hyp.empty()) throw PreconditionError("empty hypothesis space");
    if (growth_class(domain).kind != GrowthClass::Kind::Exponential) {
        throw PreconditionError("anchor bettor needs a domain of exponential growth");
    }
    auto space = std::make_shared<const HypothesisSpace>(hyp);
    auto dom = std::make_shared<const Dfa>(domain);
    auto sigma = std::make_shared<const Dfa>(Dfa::universal());

    auto load = [space](std::vector<Word>& m) {
        const Hypothesis* h = hypothesis_at(*space, m[kHypothesis]);
        if (!h) {
            m[kMachine] = m[kConfig] = Word();
            m[kOutput] = "X";
            return;
        }
        MachineSlots ms = machine_slots(*h, tm_initial(h->program, m[kInput]));
        m[kMachine] = std::move(ms.state);
        m[kConfig] = std::move(ms.config);
        m[kOutput] = std::move(ms.output);
    };

    Setup s;
    s.name = "pclass";
    s.memory_arity = 7;
    s.bet_factors = {Dyadic(1), kThreeHalves, kHalf};
    s.memory_slack = domain.size() + 48;
    const Word first = min_ll(domain);
    s.start = {Dyadic(1), {Word(), first, first, Word(), Word(), Word(), Word()}};
    load(s.start.memory);

    s.step = [space, dom, sigma, load](MState st, const DataPoint& t) {
        auto& m = st.memory;
        m[kCounter].push_back('0');
        if (t.word && *t.word == m[kAnchor]) {
            if (m[kOutput] == "0" || m[kOutput] == "1") {
                const bool right = (m[kOutput] == "1") == t.bit;
                st.capital = bet(st.capital, right);
                if (!right) m[kHypothesis] = succ_ll(*sigma, m[kHypothesis]);
            }
            Word next = min_ll_of_length_at_least(*dom, m[kCounter].size());
            if (!ll_less(m[kAnchor], next)) next = succ_ll(*dom, m[kAnchor]);
            m[kAnchor] = next;
            m[kInput] = std::move(next);
            load(m);
        } else if (m[kOutput].empty()) {
            const Hypothesis& h = *hypothesis_at(*space, m[kHypothesis]);
            TmConfig c = decode_config(m[kMachine] + "," + m[kConfig]);
            MachineSlots ms = machine_slots(h, tm_step(h.program, std::move(c)));
            m[kMachine] = std::move(ms.state);
            m[kConfig] = std::move(ms.config);
            m[kOutput] = std::move(ms.output);
        }
        return st;
    };
    return s;
}

namespace {

// (gap + t)^k >= 2^(t - k), the k-th power form of gap >= 2^((t-k)/k) - t.
bool power_at_least(const BigInt& base, std::size_t k, const BigInt& t) {
    if (t < k) return base >= 1;
    BigInt lhs;
    mpz_pow_ui(lhs.get_mpz_t(), base.get_mpz_t(), k);
    BigInt e = t - k;
    if (!e.fits_ulong_p()) return false;
    BigInt rhs;
    mpz_ui_pow_ui(rhs.get_mpz_t(), 2, e.get_ui());
    return lhs >= rhs;
}

}  // namespace

AnchorReport anchor_report(const Dfa& domain, std::size_t count, std::size_t max_length) {
    AnchorReport r;
    auto k = exponential_witness(domain);
    if (!k) throw PreconditionError("domain shows no exponential growth witness");
    r.k = *k;
    r.p = domain.live_state_count();
    Word a = min_ll(domain);
    BigInt la = count_leq_ll(domain, a);
    r.anchors.push_back(a);
    while (r.anchors.size() < count) {
        const BigInt t = la;
        if (!t.fits_ulong_p() || t.get_ui() > max_length) {
            r.truncated = true;
            r.next_length = t;
            break;
        }
        Word y = min_ll_of_length_at_least(domain, t.get_ui());
        if (!ll_less(a, y)) y = succ_ll(domain, a);
        BigInt ly = count_leq_ll(domain, y);

        AnchorCheck c;
        c.n = r.anchors.size();
        c.length = a.size();
        c.position = la;
        c.counter = t;
        c.next_position = ly;
        c.gap = ly - la;
        c.gap_holds = power_at_least(c.gap + t, r.k, t);
        c.lower_holds = power_at_least(ly, r.k, t);
        BigInt upper;
        mpz_ui_pow_ui(upper.get_mpz_t(), 2, t.get_ui() + r.p);
        c.upper_holds = ly <= upper;
        r.checks.push_back(c);

        r.anchors.push_back(y);
        a = std::move(y);
        la = ly;
    }
    return r;
}

// ---------------------------------------------------------------------------

std::vector<Word> FiniteSetIndexing::slice(std::size_t n) const {
    std::vector<Word> out;
    Word w;
    try {
        w = min_ll_of_length_at_least(domain, n);
    } catch (const NoSuccessor&) {
        return out;
    }
    while (w.size() == n) {
        out.push_back(w);
        try {
            w = succ_ll(domain, w);
        } catch (const NoSuccessor&) {
            break;
        }
    }
    return out;
}

Word FiniteSetIndexing::encode(std::span<const Word> set) const {
    std::size_t top = 0;
    bool any = false;
    for (const auto& w : set) {
        if (!domain.accepts(w)) throw PreconditionError("'" + w + "' is not a domain word");
        top = std::max(top, w.size());
        any = true;
    }
    if (!any) return Word();
    std::set<Word> members(set.begin(), set.end());
    Word out;
    for (std::size_t n = 0; n <= top; ++n) {
        const auto s = slice(n);
        std::size_t v = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (members.count(s[i])) v |= std::size_t{1} << i;
        }
        out.push_back(letters[v]);
    }
    return out;
}

std::vector<Word> FiniteSetIndexing::decode(std::string_view index) const {
    std::vector<Word> out;
    for (std::size_t n = 0; n < index.size(); ++n) {
        const auto pos = letters.find(index[n]);
        if (pos == std::string::npos) throw MalformedCode("index letter not in the index alphabet");
        const auto s = slice(n);
        for (std::size_t i = 0; i < c; ++i) {
            if (!((pos >> i) & 1)) continue;
            if (i >= s.size()) throw MalformedCode("index selects a missing slice element");
            out.push_back(s[i]);
        }
    }
    std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) { return ll_less(a, b); });
    return out;
}

namespace {

// Relation {(x, e) : x ∈ F_e}. While x is being read the automaton tracks
// x's domain state and, per domain state, how many live lexicographically
// smaller words of the same length lead there; at the first column past x
// it reads x's rank in its slice and tests that bit of e's letter.
Dfa indexing_relation(const Dfa& d, std::size_t c, const std::string& letters) {
    constexpr std::size_t kCap = 64;
    const auto live = d.live_states();
    const std::size_t n = d.size();

    struct Key {
        Dfa::State qx;
        std::vector<std::uint8_t> counts;
        auto operator<=>(const Key&) const = default;
    };

    DfaBuilder b(2, "01" + letters);
    const auto sink = b.add_state(true);
    for (char k : letters) b.add(sink, std::string{'#', k}, sink);

    std::map<Key, DfaBuilder::State> ids;
    std::vector<Key> work;
    auto id_of = [&](const Key& k) {
        auto [it, fresh] = ids.emplace(k, 0);
        if (fresh) {
            it->second = b.add_state(false);
            work.push_back(k);
        }
        return it->second;
    };
    const auto start = id_of({d.start(), std::vector<std::uint8_t>(n, 0)});
    b.set_start(start);

    while (!work.empty()) {
        Key k = work.back();
        work.pop_back();
        const auto from = ids.at(k);
        for (std::size_t a = 0; a < 2; ++a) {
            Key nk{d.next(k.qx, a), std::vector<std::uint8_t>(n, 0)};
            std::vector<std::size_t> acc(n, 0);
            for (Dfa::State q = 0; q < n; ++q) {
                if (!k.counts[q]) continue;
                for (std::size_t l = 0; l < 2; ++l) {
                    const auto t = d.next(q, l);
                    if (live[t]) acc[t] += k.counts[q];
                }
            }
            for (std::size_t l = 0; l < a; ++l) {
                const auto t = d.next(k.qx, l);
                if (live[t]) acc[t] += 1;
            }
            for (Dfa::State q = 0; q < n; ++q) {
                if (acc[q] > kCap) throw PreconditionError("domain slices are not bounded");
                nk.counts[q] = static_cast<std::uint8_t>(acc[q]);
            }
            const auto to = id_of(nk);
            for (char e : letters) b.add(from, std::string{"01"[a], e}, to);
        }
        if (d.accepting(k.qx)) {
            std::size_t rank = 0;
            for (Dfa::State q = 0; q < n; ++q) {
                if (d.accepting(q)) rank += k.counts[q];
            }
            for (std::size_t v = 0; v < letters.size(); ++v) {
                if (rank < c && ((v >> rank) & 1)) b.add(from, std::string{'#', letters[v]}, sink);
            }
        }
        if (ids.size() > 100'000) throw PreconditionError("indexing relation too large");
    }
    return b.build();
}

}  // namespace

FiniteSetIndexing finite_set_indexing(const Dfa& domain) {
    const GrowthClass g = growth_class(domain);
    if (g.kind != GrowthClass::Kind::BoundedSlices) {
        throw PreconditionError("domain is not of bounded slice size (" + g.to_string() + ")");
    }
    if (g.bound == 0) throw PreconditionError("empty domain");
    if (g.bound > 5) throw PreconditionError("slice bound above 5 needs more than 32 index letters");
    std::string letters;
    for (std::size_t v = 0; v < (std::size_t{1} << g.bound); ++v) letters.push_back(static_cast<char>('A' + v));
    Dfa index(1, letters, 1, 0, {true}, std::vector<Dfa::State>(letters.size(), 0));
    AutomaticFamily family{std::move(index), indexing_relation(domain, g.bound, letters)};
    return FiniteSetIndexing{domain, g.bound, letters, std::move(family)};
}

}  // namespace autorand
