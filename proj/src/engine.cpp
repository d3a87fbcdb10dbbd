#include "autorand/engine.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_set>

#include "autorand/kernels.hpp"

namespace autorand {

std::string MState::describe() const {
    std::string out = "capital=" + capital.to_string() + " memory=(";
    for (std::size_t i = 0; i < memory.size(); ++i) {
        if (i) out += ",";
        out += "\"" + memory[i] + "\"";
    }
    return out + ")";
}

Oracle oracle_of(const Dfa& d) {
    auto shared = std::make_shared<const Dfa>(d);
    return [shared](std::string_view w) { return shared->accepts(w); };
}

Text::Text(Generator gen, std::size_t budget) : gen_(std::move(gen)), budget_(budget) {
    if (budget_ == 0) throw PreconditionError("validity budget must be positive");
}

TextItem Text::next() {
    TextItem item = gen_();
    ++stage_;
    if (item) {
        pauses_in_row_ = 0;
    } else if (++pauses_in_row_ >= budget_) {
        throw ValidityBudgetExceeded("text paused for " + std::to_string(pauses_in_row_) +
                                     " consecutive stages (budget " + std::to_string(budget_) +
                                     ") at stage " + std::to_string(stage_ - 1));
    }
    return item;
}

Text ll_text(const Dfa& domain, std::size_t budget) {
    if (domain.is_empty()) throw EmptyLanguage("ll text over an empty domain");
    auto cursor = std::make_shared<LlCursor>(domain);
    return Text([cursor]() -> TextItem { return cursor->next(); }, budget);
}

Text sequence_text(std::vector<TextItem> items, std::size_t budget) {
    auto data = std::make_shared<std::vector<TextItem>>(std::move(items));
    auto pos = std::make_shared<std::size_t>(0);
    return Text(
        [data, pos]() -> TextItem {
            if (*pos >= data->size()) return std::nullopt;
            return (*data)[(*pos)++];
        },
        budget);
}

TextFlags classify_text_prefix(std::span<const TextItem> prefix, const Dfa& domain) {
    TextFlags flags;
    std::set<Word> seen;
    std::size_t max_len = 0;
    std::size_t half = prefix.size() / 2;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (!prefix[i]) continue;
        const Word& w = *prefix[i];
        max_len = std::max(max_len, w.size());
        if (!seen.insert(w).second) {
            flags.repetition_free = false;
        } else if (i >= half && i > 0) {
            flags.range_growing = true;
        }
    }
    flags.distinct_words = seen.size();
    if (domain.is_empty()) return flags;

    std::size_t shortest = min_ll(domain).size();
    LlCursor cursor(domain);
    flags.exhaustive_up_to = max_len;
    while (auto w = cursor.next()) {
        if (w->size() > max_len) break;
        if (!seen.count(*w)) {
            if (w->size() == shortest) {
                flags.exhaustive_up_to.reset();
            } else {
                flags.exhaustive_up_to = w->size() - 1;
            }
            break;
        }
    }
    return flags;
}

DataPoint Stream::next() {
    TextItem item = text_.next();
    if (!item) return DataPoint::pause();
    bool bit = oracle_(*item);
    return DataPoint::labeled(std::move(*item), bit);
}

MState checked_step(const Setup& d, MState s, const DataPoint& t) {
    if (s.memory.size() != d.memory_arity) {
        throw ArityMismatch(d.name + ": state has " + std::to_string(s.memory.size()) +
                            " memory words, expected " + std::to_string(d.memory_arity));
    }
    Dyadic before = s.capital;
    std::size_t longest = t.word ? t.word->size() : 0;
    for (const Word& m : s.memory) longest = std::max(longest, m.size());

    MState next = d.step(std::move(s), t);

    if (next.memory.size() != d.memory_arity) {
        throw ArityMismatch(d.name + ": step changed memory arity to " +
                            std::to_string(next.memory.size()));
    }
    if (next.capital.sign() < 0) {
        throw BetFactorViolation(d.name + ": negative capital " + next.capital.to_string());
    }
    for (const Word& m : next.memory) {
        if (m.size() > longest + d.memory_slack) {
            throw BetFactorViolation(d.name + ": memory word grew from at most " +
                                     std::to_string(longest) + " to " + std::to_string(m.size()) +
                                     " letters in one step");
        }
    }
    if (!d.bet_factors.empty()) {
        bool ok = false;
        if (before.is_zero() || next.capital == before) {
            ok = next.capital == before;
        } else {
            for (const Dyadic& f : d.bet_factors) {
                if (scale_const(before, f) == next.capital) {
                    ok = true;
                    break;
                }
            }
        }
        if (!ok) {
            throw BetFactorViolation(d.name + ": capital moved from " + before.to_string() +
                                     " to " + next.capital.to_string() +
                                     ", not a declared bet factor");
        }
    }
    return next;
}

std::vector<Violation> check_transition(const Setup& d, const MState& s, const TextItem& probe) {
    std::vector<Violation> out;
    std::string word = probe ? *probe : std::string("#");
    try {
        if (!probe) {
            MState p = checked_step(d, s, DataPoint::pause());
            if (p.capital != s.capital) {
                out.push_back({"pause", s.describe(), word,
                               "capital " + s.capital.to_string() + " -> " + p.capital.to_string()});
            }
        } else {
            MState s0 = checked_step(d, s, DataPoint::labeled(*probe, false));
            MState s1 = checked_step(d, s, DataPoint::labeled(*probe, true));
            Dyadic lhs = s.capital + s.capital;
            Dyadic rhs = s0.capital + s1.capital;
            if (lhs != rhs) {
                out.push_back({"fairness", s.describe(), word,
                               "2*capital=" + lhs.to_string() + " but outcomes sum to " +
                                   rhs.to_string()});
            }
        }
    } catch (const Error& e) {
        out.push_back({"discipline", s.describe(), word, e.what()});
    }
    return out;
}

std::vector<Dyadic> CapitalTrace::capitals() const {
    std::vector<Dyadic> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.capital);
    return out;
}

namespace {

void audit_or_throw(const Setup& d, const MState& s, const DataPoint& t) {
    auto v = check_transition(d, s, t.word);
    if (!v.empty()) {
        throw FairnessViolation(d.name + ": " + v.front().kind + " violation at state " +
                                v.front().state + " on word \"" + v.front().word +
                                "\": " + v.front().detail);
    }
}

}  // namespace

RunResult run(const Setup& d, Stream& z, std::size_t steps, const RunOptions& opts) {
    RunResult res;
    MState s = d.start;
    res.trace.entries.reserve(steps + 1);
    res.trace.entries.push_back({0, DataPoint::pause(), s.capital});
    if (opts.keep_states) res.states.push_back(s);
    for (std::size_t n = 1; n <= steps; ++n) {
        DataPoint t = z.next();
        if (opts.audit) audit_or_throw(d, s, t);
        s = checked_step(d, std::move(s), t);
        res.trace.entries.push_back({n, t, s.capital});
        if (opts.keep_states && n % opts.state_stride == 0) res.states.push_back(s);
    }
    res.final_state = std::move(s);
    return res;
}

RunResult run_dynamic(const Setup& d, const DynamicGenerator& g, const Oracle& oracle,
                      std::size_t steps, std::size_t budget, const RunOptions& opts) {
    RunResult res;
    MState s = d.start;
    res.trace.entries.push_back({0, DataPoint::pause(), s.capital});
    if (opts.keep_states) res.states.push_back(s);
    std::size_t pauses = 0;
    for (std::size_t n = 1; n <= steps; ++n) {
        TextItem x = g(s);
        DataPoint t;
        if (x) {
            pauses = 0;
            bool bit = oracle(*x);
            t = DataPoint::labeled(std::move(*x), bit);
        } else if (++pauses >= budget) {
            throw ValidityBudgetExceeded(d.name + ": generated text paused for " +
                                         std::to_string(pauses) + " consecutive stages");
        }
        if (opts.audit) audit_or_throw(d, s, t);
        s = checked_step(d, std::move(s), t);
        res.trace.entries.push_back({n, t, s.capital});
        if (opts.keep_states && n % opts.state_stride == 0) res.states.push_back(s);
    }
    res.final_state = std::move(s);
    return res;
}

bool succeeded(const CapitalTrace& t, const Dyadic& threshold) {
    if (t.entries.empty()) throw PreconditionError("empty trace");
    if (threshold <= t.entries.front().capital) {
        throw PreconditionError("threshold " + threshold.to_string() +
                                " does not exceed the starting capital");
    }
    return std::any_of(t.entries.begin(), t.entries.end(),
                       [&](const TraceEntry& e) { return e.capital >= threshold; });
}

Dyadic default_threshold() { return pow2(20); }

nlohmann::json AuditReport::to_json() const {
    nlohmann::json j;
    j["transitions"] = transitions;
    j["passed"] = passed();
    j["violations"] = nlohmann::json::array();
    for (const auto& v : violations) {
        j["violations"].push_back(
            {{"kind", v.kind}, {"state", v.state}, {"word", v.word}, {"detail", v.detail}});
    }
    return j;
}

void AuditReport::merge(const AuditReport& other) {
    transitions += other.transitions;
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

AuditReport audit_fairness(const Setup& d, std::span<const MState> states,
                           std::span<const Word> probes) {
    return kernels::audit_transitions(d, states, probes);
}

std::vector<MState> explore_states(const Setup& d, std::span<const Word> probes,
                                   std::size_t depth, std::size_t max_states) {
    std::vector<MState> out{d.start};
    std::set<std::pair<std::string, std::vector<Word>>> seen;
    seen.insert({d.start.capital.to_string(), d.start.memory});
    std::size_t frontier_begin = 0;
    for (std::size_t level = 0; level < depth && out.size() < max_states; ++level) {
        std::size_t frontier_end = out.size();
        for (std::size_t i = frontier_begin; i < frontier_end && out.size() < max_states; ++i) {
            std::vector<DataPoint> moves{DataPoint::pause()};
            for (const Word& w : probes) {
                moves.push_back(DataPoint::labeled(w, false));
                moves.push_back(DataPoint::labeled(w, true));
            }
            for (const auto& t : moves) {
                if (out.size() >= max_states) break;
                MState next;
                try {
                    next = checked_step(d, out[i], t);
                } catch (const Error&) {
                    continue;
                }
                if (seen.insert({next.capital.to_string(), next.memory}).second) {
                    out.push_back(std::move(next));
                }
            }
        }
        frontier_begin = frontier_end;
    }
    return out;
}

AuditReport audit_fairness(const Setup& d, std::span<const Word> probes, std::size_t depth,
                           std::size_t max_states) {
    auto states = explore_states(d, probes, depth, max_states);
    return audit_fairness(d, states, probes);
}

// ---------------------------------------------------------------------------

namespace {

struct Block {
    Setup setup;
    Dyadic weight;
    std::size_t offset;
};

MState unpack(const Block& b, const std::vector<Word>& memory) {
    MState s;
    s.capital = decode_tworow({memory[b.offset], memory[b.offset + 1]});
    s.memory.assign(memory.begin() + static_cast<std::ptrdiff_t>(b.offset + 2),
                    memory.begin() + static_cast<std::ptrdiff_t>(b.offset + 2 + b.setup.memory_arity));
    return s;
}

void pack(const Block& b, const MState& s, std::vector<Word>& memory) {
    TwoRowCode c = encode_tworow(s.capital);
    memory[b.offset] = std::move(c.top);
    memory[b.offset + 1] = std::move(c.bottom);
    std::copy(s.memory.begin(), s.memory.end(),
              memory.begin() + static_cast<std::ptrdiff_t>(b.offset + 2));
}

}  // namespace

Setup weighted_sum(std::span<const Setup> setups, std::span<const Dyadic> weights) {
    if (setups.size() != weights.size()) throw PreconditionError("one weight per setup required");
    if (setups.empty()) throw PreconditionError("empty sum");
    auto blocks = std::make_shared<std::vector<Block>>();
    std::size_t offset = 0;
    std::size_t slack = 0;
    std::string name = "sum(";
    for (std::size_t i = 0; i < setups.size(); ++i) {
        if (weights[i].sign() <= 0) throw PreconditionError("weights must be positive");
        blocks->push_back({setups[i], weights[i], offset});
        offset += setups[i].memory_arity + 2;
        slack = std::max(slack, setups[i].memory_slack);
        if (i) name += ",";
        name += weights[i].to_string() + "*" + setups[i].name;
    }
    name += ")";

    Setup out;
    out.name = name;
    out.memory_arity = offset;
    out.memory_slack = slack + 2;
    out.start.memory.assign(offset, Word());
    for (const Block& b : *blocks) {
        pack(b, b.setup.start, out.start.memory);
        out.start.capital += scale_const(b.setup.start.capital, b.weight);
    }
    out.step = [blocks](MState s, const DataPoint& t) {
        Dyadic total;
        for (const Block& b : *blocks) {
            MState c = checked_step(b.setup, unpack(b, s.memory), t);
            total += scale_const(c.capital, b.weight);
            pack(b, c, s.memory);
        }
        s.capital = total;
        return s;
    };
    return out;
}

Setup add_setups(const Setup& d1, const Setup& d2) {
    std::vector<Setup> s{d1, d2};
    std::vector<Dyadic> w{Dyadic(1), Dyadic(1)};
    return weighted_sum(s, w);
}

Setup scale_setup(const Dyadic& c, const Setup& d) {
    std::vector<Setup> s{d};
    std::vector<Dyadic> w{c};
    return weighted_sum(s, w);
}

Setup truncated_sum(std::span<const Setup> setups, const Dyadic& weight_base) {
    std::vector<Dyadic> w;
    Dyadic cur(1);
    for (std::size_t i = 0; i < setups.size(); ++i) {
        w.push_back(cur);
        cur = scale_const(cur, weight_base);
    }
    return weighted_sum(setups, w);
}

std::string trace_csv(const CapitalTrace& t) {
    std::ostringstream out;
    out << "stage,word,label,capital_num,capital_exp\n";
    for (const auto& e : t.entries) {
        out << e.stage << ",";
        if (e.stage > 0) {
            if (e.point.word) {
                out << *e.point.word << "," << (e.point.bit ? 1 : 0);
            } else {
                out << "#,";
            }
        } else {
            out << ",";
        }
        out << "," << e.capital.numerator().get_str() << "," << e.capital.exponent() << "\n";
    }
    return out.str();
}

nlohmann::json trace_json(const CapitalTrace& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : t.entries) {
        nlohmann::json r{{"stage", e.stage}, {"capital", e.capital.to_string()}};
        if (e.stage > 0) {
            if (e.point.word) {
                r["word"] = *e.point.word;
                r["label"] = e.point.bit ? 1 : 0;
            } else {
                r["word"] = "#";
            }
        }
        rows.push_back(std::move(r));
    }
    return {{"entries", rows}};
}

}  // namespace autorand
