#include "autorand/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "autorand/kernels.hpp"

namespace autorand {

namespace fs = std::filesystem;
using nlohmann::json;

Word Lcg::word(std::size_t max_length, std::string_view letters) {
    const std::size_t n = below(max_length + 1);
    Word w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(letters[below(letters.size())]);
    return w;
}

// ---------------------------------------------------------------------------
// Config

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s, char sep = ',') {
    std::vector<std::string> out;
    while (true) {
        const auto p = s.find(sep);
        auto item = trim(s.substr(0, p));
        if (!item.empty()) out.emplace_back(item);
        if (p == std::string_view::npos) break;
        s = s.substr(p + 1);
    }
    return out;
}

std::size_t positive(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty() || value[0] == '-' || v == 0) {
        throw ParseError(key + " must be a positive integer, got '" + value + "'");
    }
    return static_cast<std::size_t>(v);
}

std::size_t index_of(const std::string& where, const std::string& key) {
    if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError(where + "enumeration keys are setup indices, got '" + key + "'");
    }
    return std::stoull(key);
}

bool boolean(const std::string& key, const std::string& value) {
    if (value == "true" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "no" || value == "0") return false;
    throw ParseError(key + " must be true or false, got '" + value + "'");
}

fs::path resolve(const fs::path& base, const std::string& value) {
    fs::path p(value);
    return p.is_absolute() ? p : base / p;
}

template <class F>
auto load_input(const std::string& key, const fs::path& path, F&& loader) {
    if (!fs::exists(path)) throw ParseError(key + ": file not found: " + path.string());
    try {
        return loader(path);
    } catch (const ParseError& e) {
        throw ParseError(key + " (" + path.string() + "): " + e.what());
    }
}

Dfa load_dfa_input(const std::string& key, const fs::path& path) {
    return load_input(key, path, [](const fs::path& p) { return load_dfa(p); });
}

HypothesisSpace load_hypotheses(const std::string& value, const fs::path& base) {
    if (value == "default") return default_hypotheses();
    HypothesisSpace out;
    for (const auto& item : split_list(value)) {
        auto colon = item.rfind(':');
        std::string file = item;
        std::size_t budget = 10'000;
        if (colon != std::string::npos) {
            file = item.substr(0, colon);
            budget = positive("hypothesis budget", item.substr(colon + 1));
        }
        TmProgram p = load_input("hypotheses", resolve(base, file), [](const fs::path& q) { return load_tm(q); });
        out.push_back({p.name, p, budget});
    }
    if (out.empty()) throw ParseError("hypotheses: empty list");
    return out;
}

}  // namespace

json setup_spec_from_line(std::string_view line, const fs::path& base_dir) {
    auto toks = split_list(line, ' ');
    if (toks.empty()) throw ParseError("empty setup line");
    const std::string& kind = toks[0];
    auto need = [&](std::size_t n) {
        if (toks.size() != n) {
            throw ParseError("setup '" + kind + "' expects " + std::to_string(n - 1) + " argument(s)");
        }
    };
    auto dfa = [&](std::size_t i) { return to_json(load_dfa_input(kind, resolve(base_dir, toks[i]))); };
    if (kind == "regular-bettor") {
        need(2);
        return {{"kind", kind}, {"dfa", dfa(1)}};
    }
    if (kind == "subset-bettor") {
        need(3);
        return {{"kind", kind}, {"dfa", dfa(1)}, {"side", to_string(parse_side(toks[2]))}};
    }
    if (kind == "family-learner" || kind == "variant-learner") {
        if (toks.size() == 1) {
            auto fam = prefix_family();
            return {{"kind", kind}, {"index", to_json(fam.index)}, {"relation", to_json(fam.relation)}};
        }
        need(3);
        return {{"kind", kind}, {"index", dfa(1)}, {"relation", dfa(2)}};
    }
    if (kind == "constant") {
        need(1);
        return {{"kind", kind}};
    }
    throw ParseError("unknown setup kind '" + kind + "'");
}

ExperimentConfig parse_config(std::string_view text, const fs::path& base_dir) {
    ExperimentConfig cfg;
    std::map<std::string, std::pair<std::string, std::size_t>> values;
    std::vector<std::pair<std::size_t, std::string>> setups;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    for (std::size_t number = 1; std::getline(in, raw); ++number) {
        std::string_view line = raw;
        if (auto c = line.find(';'); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        auto where = "config line " + std::to_string(number) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(where + "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "experiment" && section != "inputs" && section != "enumeration") {
                throw ParseError(where + "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(where + "expected key = value");
        if (section.empty()) throw ParseError(where + "key outside any section");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (section == "enumeration") {
            setups.push_back({index_of(where, key), value});
            continue;
        }
        const std::string full = section + "." + key;
        if (values.count(full)) throw ParseError(where + "duplicate key " + full);
        values[full] = {value, number};
    }

    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        std::string v = it->second.first;
        values.erase(it);
        return v;
    };

    auto kind = take("experiment.kind");
    if (!kind) throw ParseError("config has no [experiment] kind");
    if (std::find(experiment_kinds().begin(), experiment_kinds().end(), *kind) == experiment_kinds().end()) {
        throw ParseError("unknown experiment kind '" + *kind + "'");
    }
    cfg.kind = *kind;
    for (auto [key, field] : {std::pair{"steps", &cfg.steps}, {"horizon", &cfg.horizon},
                              {"search_bound", &cfg.search_bound}, {"words", &cfg.words}, {"count", &cfg.count}}) {
        if (auto v = take(std::string("experiment.") + key)) *field = positive(key, *v);
    }
    if (auto v = take("experiment.seed")) cfg.seed = positive("seed", *v);
    if (auto v = take("experiment.threshold")) {
        cfg.threshold = Dyadic::parse(*v);
        if (cfg.threshold.sign() <= 0) throw ParseError("threshold must be positive");
    }
    if (auto v = take("experiment.text")) {
        if (*v != "ll" && *v != "reversed-blocks") throw ParseError("text must be ll or reversed-blocks");
        cfg.text = *v;
    }
    if (auto v = take("experiment.mode")) {
        if (*v == "any") {
            cfg.mode = TextMode::Any;
        } else if (*v == "repetition-free") {
            cfg.mode = TextMode::RepetitionFree;
        } else {
            throw ParseError("mode must be any or repetition-free");
        }
    }
    if (auto v = take("experiment.expect_success")) cfg.expect_success = boolean("expect_success", *v);
    if (auto v = take("experiment.expect_final")) cfg.expect_final = Dyadic::parse(*v);

    for (auto [key, field] : {std::pair{"language", &cfg.language}, {"domain", &cfg.domain}, {"target", &cfg.target},
                              {"index", &cfg.index}, {"relation", &cfg.relation}}) {
        if (auto v = take(std::string("inputs.") + key)) *field = load_dfa_input(key, resolve(base_dir, *v));
    }
    if (auto v = take("inputs.side")) cfg.side = parse_side(*v);
    if (auto v = take("inputs.grammar")) {
        cfg.grammar = load_input("grammar", resolve(base_dir, *v), [](const fs::path& p) { return load_grammar(p); });
    }
    if (auto v = take("inputs.tm")) {
        cfg.tm = load_input("tm", resolve(base_dir, *v), [](const fs::path& p) { return load_tm(p); });
    }
    if (auto v = take("inputs.hypotheses")) cfg.hypotheses = load_hypotheses(*v, base_dir);
    if (auto v = take("inputs.target_index")) cfg.target_index = *v == "#eps" ? "" : *v;
    if (auto v = take("inputs.difference")) {
        for (auto& w : split_list(*v)) cfg.difference.push_back(w == "#eps" ? "" : w);
    }
    if (auto v = take("inputs.corpus")) {
        for (const auto& item : split_list(*v)) {
            cfg.corpus.push_back(load_dfa_input("corpus", resolve(base_dir, item)));
            cfg.corpus_names.push_back(fs::path(item).stem().string());
        }
    }
    if (!values.empty()) {
        const auto& [key, v] = *values.begin();
        throw ParseError("config line " + std::to_string(v.second) + ": unknown key " + key);
    }
    std::sort(setups.begin(), setups.end());
    for (std::size_t i = 0; i < setups.size(); ++i) {
        if (i && setups[i].first == setups[i - 1].first) {
            throw ParseError("duplicate enumeration index " + std::to_string(setups[i].first));
        }
        cfg.enumeration.push_back(setup_spec_from_line(setups[i].second, base_dir));
    }
    return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    ExperimentConfig cfg = parse_config(buf.str(), path.parent_path());
    cfg.source = path;
    return cfg;
}

// ---------------------------------------------------------------------------
// Audits and reports

AuditReport embedded_audit(const Setup& d, std::span<const MState> states, std::uint64_t seed,
                           std::size_t probes, std::size_t max_states) {
    std::vector<MState> picked;
    if (states.size() <= max_states) {
        picked.assign(states.begin(), states.end());
    } else {
        for (std::size_t i = 0; i < max_states; ++i) picked.push_back(states[i * (states.size() - 1) / (max_states - 1)]);
    }
    std::set<Word> words;
    for (std::size_t n = 0; n <= 3; ++n) {
        for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
            Word w;
            for (std::size_t b = 0; b < n; ++b) w.push_back((i >> (n - 1 - b)) & 1 ? '1' : '0');
            words.insert(w);
        }
    }
    Lcg rng(seed);
    for (std::size_t i = 0; i < probes; ++i) words.insert(rng.word(10));
    for (const auto& s : picked) {
        for (const auto& m : s.memory) {
            if (m.size() <= 64 && m.find_first_not_of("01") == Word::npos) words.insert(m);
        }
    }
    std::vector<Word> list(words.begin(), words.end());
    return kernels::audit_transitions(d, picked, list);
}

json growth_report(const Dfa& d, std::size_t max_len) {
    const GrowthClass g = growth_class(d);
    json counts = json::array();
    auto brute = kernels::slice_counts_bruteforce(d, max_len);
    bool agree = true;
    for (std::size_t n = 0; n <= max_len; ++n) {
        const BigInt exact = slice_count(d, n);
        agree &= exact == brute[n];
        counts.push_back(exact.get_str());
    }
    json out{{"class", g.to_string()},
             {"kind", g.kind == GrowthClass::Kind::BoundedSlices ? "bounded"
                      : g.kind == GrowthClass::Kind::Polynomial  ? "polynomial"
                                                                 : "exponential"},
             {"slice_counts", counts},
             {"brute_force_agrees", agree},
             {"live_states", d.live_state_count()},
             {"infinite", is_infinite(d)}};
    if (g.kind == GrowthClass::Kind::BoundedSlices) out["bound"] = g.bound;
    if (g.kind == GrowthClass::Kind::Polynomial) out["degree"] = g.degree;
    if (auto k = exponential_witness(d)) out["exponential_witness_k"] = *k;
    return out;
}

// ---------------------------------------------------------------------------
// Runners

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class Runner {
public:
    Runner(const ExperimentConfig& cfg, fs::path out, bool replay)
        : cfg_(cfg), out_(std::move(out)), replay_(replay) {
        summary_["kind"] = cfg.kind;
    }

    ExperimentOutcome go();

private:
    void fail(std::string what) { failures_.push_back(std::move(what)); }
    void check(bool ok, std::string what) {
        if (!ok) fail(std::move(what));
    }

    Dfa domain() const { return cfg_.domain ? *cfg_.domain : Dfa::universal(); }
    template <class T>
    const T& need(const std::optional<T>& v, const char* key) const {
        if (!v) throw ParseError(cfg_.kind + " needs inputs." + key);
        return *v;
    }

    Oracle truth() const;
    Text text(const Dfa& dom) const;
    void write_trace(const CapitalTrace& t);
    void write_audit(const AuditReport& r);
    RunResult run_setup(const Setup& s, const Oracle& o);
    void expectations(const CapitalTrace& t);

    void regular_bettor_kind();
    void adversarial_kind();
    void subset_bettor_kind();
    void learner_kind(bool variant);
    void tm_dynamic_kind();
    void diagonalize_kind();
    void pclass_kind();
    void cfl_pipeline_kind();
    void growth_kind();
    void dyadic_kind();

    const ExperimentConfig& cfg_;
    fs::path out_;
    bool replay_;
    json summary_;
    std::vector<std::string> failures_;
};

Oracle Runner::truth() const {
    if (cfg_.target) return oracle_of(*cfg_.target);
    if (cfg_.grammar) {
        return [g = to_cnf(*cfg_.grammar)](std::string_view w) { return cyk_member(g, w); };
    }
    if (cfg_.language) return oracle_of(*cfg_.language);
    throw ParseError(cfg_.kind + " needs a target language (inputs.target, grammar or language)");
}

Text Runner::text(const Dfa& dom) const {
    if (cfg_.text == "ll") return ll_text(dom);
    auto cursor = std::make_shared<LlCursor>(dom);
    auto block = std::make_shared<std::vector<Word>>();
    if (dom.is_empty()) throw EmptyLanguage("empty domain");
    return Text([cursor, block]() -> TextItem {
        if (block->empty()) {
            for (int i = 0; i < 64; ++i) {
                auto w = cursor->next();
                if (!w) break;
                block->push_back(std::move(*w));
            }
        }
        if (block->empty()) return std::nullopt;
        Word w = std::move(block->back());
        block->pop_back();
        return w;
    });
}

void Runner::write_trace(const CapitalTrace& t) {
    write_file(out_ / "trace.csv", trace_csv(t));
    write_file(out_ / "trace.json", trace_json(t).dump(2) + "\n");
    summary_["steps"] = t.size() - 1;
    summary_["final_capital"] = t.final_capital().to_string();
    Dyadic top = t.entries.front().capital;
    for (const auto& e : t.entries) top = std::max(top, e.capital);
    summary_["max_capital"] = top.to_string();
}

void Runner::write_audit(const AuditReport& r) {
    json j = r.to_json();
    j["seed"] = cfg_.seed;
    write_file(out_ / "audit.json", j.dump(2) + "\n");
    summary_["audit"] = {{"transitions", r.transitions}, {"violations", r.violations.size()}};
    if (!r.passed()) {
        const auto& v = r.violations.front();
        fail("fairness audit: " + v.kind + " violation on '" + v.word + "' at " + v.state + ": " + v.detail);
    }
}

RunResult Runner::run_setup(const Setup& s, const Oracle& o) {
    Stream z(text(domain()), o);
    RunOptions opts;
    opts.keep_states = true;
    opts.state_stride = std::max<std::size_t>(1, cfg_.steps / 256);
    auto r = run(s, z, cfg_.steps, opts);
    write_trace(r.trace);
    write_audit(embedded_audit(s, r.states, cfg_.seed));
    expectations(r.trace);
    return r;
}

void Runner::expectations(const CapitalTrace& t) {
    const bool hit = cfg_.threshold > t.entries.front().capital && succeeded(t, cfg_.threshold);
    summary_["threshold"] = cfg_.threshold.to_string();
    summary_["succeeded"] = hit;
    if (cfg_.expect_success) {
        check(hit == *cfg_.expect_success,
              std::string("expected the run to ") + (*cfg_.expect_success ? "reach" : "stay below") +
                  " threshold " + cfg_.threshold.to_string());
    }
    if (cfg_.expect_final) {
        check(t.final_capital() == *cfg_.expect_final, "final capital " + t.final_capital().to_string() +
                                                           " differs from the expected " +
                                                           cfg_.expect_final->to_string());
    }
}

std::size_t labeled_words(const CapitalTrace& t) {
    std::size_t n = 0;
    for (std::size_t i = 1; i < t.size(); ++i) n += !t.entries[i].point.is_pause();
    return n;
}

void Runner::regular_bettor_kind() {
    const Dfa& l = need(cfg_.language, "language");
    auto r = run_setup(regular_bettor(l), truth());
    if (!cfg_.target && !cfg_.grammar) {
        Dyadic expect(1);
        for (std::size_t i = labeled_words(r.trace); i > 0; --i) expect = scale_const(expect, Dyadic::fraction(3, 1));
        summary_["expected_capital"] = expect.to_string();
        check(r.trace.final_capital() == expect, "honest run did not multiply by exactly 3/2 per word");
    }
}

void Runner::adversarial_kind() {
    const Dfa& l = need(cfg_.language, "language");
    const Setup s = regular_bettor(l);
    const Dfa dom = domain();
    auto res = adversarial_text(s, truth(), dom, cfg_.mode, cfg_.horizon, cfg_.search_bound);
    if (auto* t = std::get_if<AdversarialText>(&res)) {
        summary_["outcome"] = "text";
        write_trace(t->trace);
        for (const auto& e : t->trace.entries) {
            if (e.capital > s.start.capital) {
                fail("adversarial trace exceeded the start capital at stage " + std::to_string(e.stage));
                break;
            }
        }
        std::vector<MState> states{s.start};
        for (const auto& e : t->trace.entries) {
            if (e.stage == 0) continue;
            states.push_back(checked_step(s, states.back(), e.point));
        }
        write_audit(embedded_audit(s, states, cfg_.seed));
        return;
    }
    const auto& w = std::get<StallWitness>(res);
    summary_["outcome"] = "stall";
    summary_["stall"] = {{"stage", w.stage}, {"bound", w.bound}, {"state", w.state.describe()}};
    const Oracle extracted = extract_language(s, w.state);
    std::size_t checked = 0, mismatches = 0;
    Word first;
    for (std::size_t n = 0; n <= 8; ++n) {
        for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
            Word x;
            for (std::size_t b = 0; b < n; ++b) x.push_back((i >> (n - 1 - b)) & 1 ? '1' : '0');
            ++checked;
            if (extracted(x) != l.accepts(x)) {
                if (!mismatches++) first = x;
            }
        }
    }
    summary_["extracted_checked"] = checked;
    summary_["extracted_mismatches"] = mismatches;
    check(mismatches == 0, "extracted predicate differs from the bettor's language on '" + first + "'");
    CapitalTrace t;
    t.entries.push_back({0, DataPoint::pause(), w.state.capital});
    write_trace(t);
    write_audit(embedded_audit(s, std::vector<MState>{s.start, w.state}, cfg_.seed));
}

void Runner::subset_bettor_kind() {
    const Dfa& r = need(cfg_.language, "language");
    run_setup(subset_bettor(r, cfg_.side.value_or(Side::Inside)), truth());
}

void Runner::learner_kind(bool variant) {
    AutomaticFamily fam = prefix_family();
    if (cfg_.index || cfg_.relation) fam = {need(cfg_.index, "index"), need(cfg_.relation, "relation")};
    Oracle o;
    if (cfg_.target_index) {
        std::set<Word> diff(cfg_.difference.begin(), cfg_.difference.end());
        o = [fam, e = *cfg_.target_index, diff](std::string_view x) {
            return fam.member(x, e) != (diff.count(Word(x)) > 0);
        };
        summary_["target_index"] = *cfg_.target_index;
        summary_["difference"] = cfg_.difference;
    } else {
        o = truth();
    }
    const Setup s = variant ? variant_family_learner(fam) : family_learner(fam);
    auto r = run_setup(s, o);
    summary_["final_memory"] = r.final_state.memory;
}

void Runner::tm_dynamic_kind() {
    const TmProgram& p = need(cfg_.tm, "tm");
    const Dfa dom = domain();
    auto b = tm_dynamic_bettor(p, dom);
    Oracle o;
    const bool honest = !cfg_.target && !cfg_.grammar;
    if (honest) {
        o = [p](std::string_view w) {
            auto v = tm_decide(p, w, 10'000'000);
            if (!v) throw PreconditionError("machine did not halt on '" + Word(w) + "'");
            return *v;
        };
    } else {
        o = truth();
    }
    RunOptions opts;
    opts.keep_states = true;
    opts.state_stride = std::max<std::size_t>(1, cfg_.steps / 256);
    auto r = run_dynamic(b.setup, b.generator, o, cfg_.steps, kDefaultValidityBudget, opts);
    write_trace(r.trace);
    write_audit(embedded_audit(b.setup, r.states, cfg_.seed));
    expectations(r.trace);
    const std::size_t bets = labeled_words(r.trace);
    summary_["bets"] = bets;
    if (honest) {
        check(r.trace.final_capital() == pow2(static_cast<std::int64_t>(bets)),
              "capital after " + std::to_string(bets) + " decided words is not 2^" + std::to_string(bets));
    }
}

void Runner::diagonalize_kind() {
    if (cfg_.enumeration.empty()) throw ParseError("diagonalize needs an [enumeration] section");
    const Dfa dom = domain();
    DiagonalCertificate cert = diagonalize_specs(cfg_.enumeration, dom, cfg_.words);
    const std::string text = cert.to_json().dump(2) + "\n";
    const fs::path path = out_ / "certificate.json";
    if (replay_) {
        if (!fs::exists(path)) {
            fail("--replay: no certificate at " + path.string());
        } else {
            const std::string old = read_file(path);
            check(old == text, "--replay: regenerated certificate differs from " + path.string());
            auto problem = replay_certificate(DiagonalCertificate::from_json(json::parse(old)));
            check(!problem, "--replay: " + problem.value_or(""));
        }
        summary_["replayed"] = true;
    } else {
        write_file(path, text);
    }
    auto problem = replay_certificate(cert);
    check(!problem, "certificate replay: " + problem.value_or(""));
    Dyadic top;
    CapitalTrace t;
    t.entries.push_back({0, DataPoint::pause(), Dyadic(1)});
    for (std::size_t i = 0; i < cert.entries.size(); ++i) {
        const auto& e = cert.entries[i];
        top = std::max(top, e.capital);
        t.entries.push_back({i + 1, DataPoint::labeled(e.word, e.bit), e.capital});
        check(e.capital <= Dyadic(2), "capital above 2 at '" + e.word + "'");
    }
    write_trace(t);
    summary_["components"] = cfg_.enumeration.size();
    summary_["enum_hash"] = cert.enum_hash;

    AuditReport audit;
    std::map<Word, bool> bits;
    std::vector<TextItem> items;
    for (const auto& e : cert.entries) {
        bits[e.word] = e.bit;
        items.push_back(e.word);
    }
    for (std::size_t i = 0; i < cfg_.enumeration.size(); ++i) {
        const Setup s = setup_from_spec(cfg_.enumeration[i]);
        Stream z(sequence_text(items), [&bits](std::string_view w) { return bits.at(Word(w)); });
        RunOptions opts;
        opts.keep_states = true;
        auto r = run(s, z, items.size(), opts);
        audit.merge(embedded_audit(s, r.states, cfg_.seed + i));
    }
    write_audit(audit);
}

void Runner::pclass_kind() {
    const Dfa dom = domain();
    const HypothesisSpace hyp = cfg_.hypotheses.empty() ? default_hypotheses() : cfg_.hypotheses;
    const Setup s = pclass_bettor(hyp, dom);
    auto r = run_setup(s, truth());
    const std::size_t pos = hypothesis_position(r.final_state.memory[kHypothesis]);
    summary_["hypothesis"] = pos < hyp.size() ? hyp[pos].name : "exhausted";
    summary_["hypothesis_position"] = pos;
    check(pos < hyp.size(), "hypothesis space exhausted after " + std::to_string(hyp.size()) + " hypotheses");
    summary_["anchor_length"] = r.final_state.memory[kAnchor].size();
    json bets = json::array();
    const auto caps = r.trace.capitals();
    for (std::size_t i = 1; i < caps.size(); ++i) {
        if (caps[i] != caps[i - 1]) {
            bets.push_back({{"stage", i},
                            {"word_length", r.trace.entries[i].point.word->size()},
                            {"won", caps[i] > caps[i - 1]}});
        }
    }
    summary_["bets"] = bets;
}

void Runner::cfl_pipeline_kind() {
    const Cfg& g = need(cfg_.grammar, "grammar");
    const Dfa dom = domain();
    const CnfGrammar cnf = to_cnf(g);
    auto p = cfl_nonrandom_pipeline(g, dom);
    const auto& sub = p.subset;
    json subset{{"side", to_string(sub.side)}, {"u", sub.u}, {"v", sub.v}, {"w", sub.w}, {"dfa", to_json(sub.r)}};
    if (sub.side == Side::Inside) {
        subset["m"] = sub.m;
        subset["k"] = sub.k;
    } else {
        subset["excluded"] = sub.excluded;
    }
    write_file(out_ / "subset.json", subset.dump(2) + "\n");
    summary_["side"] = to_string(sub.side);
    const auto members = enumerate_ll(sub.r, 100);
    std::size_t consistent = 0;
    for (const auto& w : members) {
        if (dom.accepts(w) && cyk_member(cnf, w) == (sub.side == Side::Inside)) ++consistent;
    }
    summary_["sweep"] = {{"members", members.size()}, {"consistent", consistent}};
    check(members.size() == 100 && consistent == 100,
          "side sweep: " + std::to_string(consistent) + " of " + std::to_string(members.size()) + " consistent");
    run_setup(p.setup, [cnf](std::string_view w) { return cyk_member(cnf, w); });
}

void Runner::growth_kind() {
    std::vector<Dfa> list = cfg_.corpus;
    std::vector<std::string> names = cfg_.corpus_names;
    if (cfg_.language) {
        list.push_back(*cfg_.language);
        names.push_back("language");
    }
    if (list.empty()) throw ParseError("growth-report needs inputs.corpus or inputs.language");
    json report = json::object();
    for (std::size_t i = 0; i < list.size(); ++i) {
        json g = growth_report(list[i]);
        check(g["brute_force_agrees"].get<bool>(), "slice counts of " + names[i] + " disagree with brute force");
        report[names[i]] = g;
    }
    write_file(out_ / "growth.json", report.dump(2) + "\n");
    summary_["domains"] = list.size();
    write_audit(AuditReport{});
}

void Runner::dyadic_kind() {
    Lcg rng(cfg_.seed);
    auto draw = [&] {
        const int bits = static_cast<int>(rng.below(48));
        BigInt n = 0;
        for (int i = 0; i < bits; ++i) n = n * 2 + static_cast<long>(rng.below(2));
        if (rng.below(2)) n = -n;
        return Dyadic(n, rng.below(25));
    };
    auto exact = [](const Dyadic& x) {
        mpq_class q(x.numerator(), BigInt(1) << static_cast<mp_bitcnt_t>(x.exponent()));
        q.canonicalize();
        return q;
    };
    std::size_t bad_add = 0, bad_rel = 0, bad_code = 0;
    int carry = 0;
    for (std::size_t i = 0; i < cfg_.count; ++i) {
        const Dyadic a = draw(), b = draw();
        const auto ca = encode_tworow(a), cb = encode_tworow(b);
        bad_code += decode_tworow(ca) != a;
        const auto s = tworow_add_traced(ca, cb);
        carry = std::max(carry, s.max_carry);
        bad_add += exact(decode_tworow(s.code)) != exact(a) + exact(b);
        bad_rel += rel_z(ca) != (exact(a) == 0);
        bad_rel += rel_p(ca) != (exact(a) > 0);
        bad_rel += rel_l(ca, cb) != (exact(a) < exact(b));
    }
    summary_["inputs"] = cfg_.count;
    summary_["add_mismatches"] = bad_add;
    summary_["relation_mismatches"] = bad_rel;
    summary_["code_mismatches"] = bad_code;
    summary_["max_carry"] = carry;
    check(bad_add == 0, std::to_string(bad_add) + " sums disagree with exact arithmetic");
    check(bad_rel == 0, std::to_string(bad_rel) + " relation answers disagree with exact arithmetic");
    check(bad_code == 0, std::to_string(bad_code) + " codes fail to roundtrip");
    check(carry <= 1, "carry exceeded one bit");
    write_audit(AuditReport{});
}

ExperimentOutcome Runner::go() {
    fs::create_directories(out_);
    const std::string& k = cfg_.kind;
    if (k == "regular-bettor") {
        regular_bettor_kind();
    } else if (k == "adversarial") {
        adversarial_kind();
    } else if (k == "subset-bettor") {
        subset_bettor_kind();
    } else if (k == "family-learner") {
        learner_kind(false);
    } else if (k == "variant-learner") {
        learner_kind(true);
    } else if (k == "tm-dynamic") {
        tm_dynamic_kind();
    } else if (k == "diagonalize") {
        diagonalize_kind();
    } else if (k == "pclass") {
        pclass_kind();
    } else if (k == "cfl-pipeline") {
        cfl_pipeline_kind();
    } else if (k == "growth-report") {
        growth_kind();
    } else {
        dyadic_kind();
    }
    summary_["failures"] = failures_;
    summary_["status"] = failures_.empty() ? 0 : 1;
    write_file(out_ / "summary.json", summary_.dump(2) + "\n");
    return {failures_, summary_};
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir, bool replay) {
    return Runner(cfg, out_dir, replay).go();
}

}  // namespace autorand
