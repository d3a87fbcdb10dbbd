#pragma once

// Martingale state space, texts and streams, the run loop with fairness
// auditing, and the setup algebra (sums, scalar multiples, truncated
// weighted sums).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "autorand/automata.hpp"
#include "autorand/dyadic.hpp"

namespace autorand {

/// Capital plus a fixed-arity tuple of memory words.
struct MState {
    Dyadic capital;
    std::vector<Word> memory;

    friend bool operator==(const MState&, const MState&) = default;
    std::string describe() const;
};

/// A labeled domain word, or the pause symbol.
struct DataPoint {
    std::optional<Word> word;
    bool bit = false;

    static DataPoint pause() { return {}; }
    static DataPoint labeled(Word w, bool b) { return {std::move(w), b}; }
    bool is_pause() const { return !word.has_value(); }
};

/// Membership oracle for the target language.
using Oracle = std::function<bool(std::string_view)>;
Oracle oracle_of(const Dfa& d);

/// One text element: a word, or nullopt for a pause.
using TextItem = std::optional<Word>;

inline constexpr std::size_t kDefaultValidityBudget = 10'000;
inline constexpr std::size_t kDefaultStepBudget = 100'000;

/// Sequential text source. Within every window of `budget` consecutive
/// stages at least one element must be a word.
class Text {
public:
    using Generator = std::function<TextItem()>;

    explicit Text(Generator gen, std::size_t budget = kDefaultValidityBudget);

    /// Throws ValidityBudgetExceeded after `budget` consecutive pauses.
    TextItem next();
    std::size_t stage() const { return stage_; }
    std::size_t budget() const { return budget_; }

private:
    Generator gen_;
    std::size_t budget_;
    std::size_t stage_ = 0;
    std::size_t pauses_in_row_ = 0;
};

/// Domain words in increasing length-lexicographic order. Throws
/// EmptyLanguage for an empty domain; a finite domain pauses once exhausted.
Text ll_text(const Dfa& domain, std::size_t budget = kDefaultValidityBudget);
/// A fixed finite prefix followed by pauses.
Text sequence_text(std::vector<TextItem> items, std::size_t budget = kDefaultValidityBudget);

struct TextFlags {
    bool repetition_free = true;
    /// Largest n such that every domain word of length <= n occurs
    /// (nullopt if even the shortest domain word is missing).
    std::optional<std::size_t> exhaustive_up_to;
    std::size_t distinct_words = 0;
    /// New words keep appearing in the second half of the prefix.
    bool range_growing = false;
};

TextFlags classify_text_prefix(std::span<const TextItem> prefix, const Dfa& domain);

/// A text labeled by the oracle: Z = X ∘ L.
class Stream {
public:
    Stream(Text text, Oracle oracle) : text_(std::move(text)), oracle_(std::move(oracle)) {}
    DataPoint next();

private:
    Text text_;
    Oracle oracle_;
};

/// A martingale step function with its start state.
///
/// `bet_factors` lists the fixed constants the step may multiply capital
/// by; an empty list marks a composite setup whose components are checked
/// individually. `memory_slack` bounds how much longer any memory word may
/// become in one step than the longest word seen in the old memory and
/// the data point.
struct Setup {
    using StepFn = std::function<MState(MState, const DataPoint&)>;

    std::string name;
    StepFn step;
    MState start;
    std::size_t memory_arity = 1;
    std::vector<Dyadic> bet_factors;
    std::size_t memory_slack = 8;

    bool normed() const { return start.capital == Dyadic(1); }
};

/// One step with the automaticity discipline enforced: memory arity is
/// preserved, capital stays nonnegative, the capital ratio is a declared
/// bet factor and memory growth is bounded.
MState checked_step(const Setup& d, MState s, const DataPoint& t);

struct TraceEntry {
    std::size_t stage = 0;      // index into the capital sequence
    DataPoint point;            // data point consumed to reach this entry
    Dyadic capital;
};

/// Entry 0 is the start; entry n holds the capital after n data points.
struct CapitalTrace {
    std::vector<TraceEntry> entries;

    std::vector<Dyadic> capitals() const;
    const Dyadic& final_capital() const { return entries.back().capital; }
    std::size_t size() const { return entries.size(); }
};

struct RunOptions {
    bool audit = true;
    /// Keep visited states (for later auditing): the start and every
    /// `state_stride`-th one after it.
    bool keep_states = false;
    std::size_t state_stride = 1;
};

struct RunResult {
    CapitalTrace trace;
    std::vector<MState> states;
    MState final_state;
};

/// Runs d on `steps` data points of z.
RunResult run(const Setup& d, Stream& z, std::size_t steps, const RunOptions& opts = {});

/// Text generated by the martingale's own state: X(n) = g(s_n).
using DynamicGenerator = std::function<TextItem(const MState&)>;

RunResult run_dynamic(const Setup& d, const DynamicGenerator& g, const Oracle& oracle,
                      std::size_t steps, std::size_t budget = kDefaultValidityBudget,
                      const RunOptions& opts = {});

/// capital >= threshold somewhere in the trace. Requires threshold > π(start).
bool succeeded(const CapitalTrace& t, const Dyadic& threshold);

/// Default success threshold 2^20.
Dyadic default_threshold();

// ---------------------------------------------------------------------------
// Fairness audit

struct Violation {
    std::string kind;   // "fairness", "pause", "discipline"
    std::string state;
    std::string word;   // "#" for a pause
    std::string detail;
};

struct AuditReport {
    std::size_t transitions = 0;
    std::vector<Violation> violations;

    bool passed() const { return violations.empty(); }
    nlohmann::json to_json() const;
    void merge(const AuditReport& other);
};

/// Checks one state against one probe (nullopt = pause), including both
/// labels of a word.
std::vector<Violation> check_transition(const Setup& d, const MState& s, const TextItem& probe);

/// Exact fairness and pause-preservation check of `d` at every given state
/// against every probe word.
AuditReport audit_fairness(const Setup& d, std::span<const MState> states,
                           std::span<const Word> probes);

/// Audit at the states reachable from the start within `depth` steps over
/// the probe words (both labels), capped at `max_states`.
AuditReport audit_fairness(const Setup& d, std::span<const Word> probes, std::size_t depth = 2,
                           std::size_t max_states = 256);

std::vector<MState> explore_states(const Setup& d, std::span<const Word> probes,
                                   std::size_t depth, std::size_t max_states);

// ---------------------------------------------------------------------------
// Setup algebra. A combined setup keeps each component's full state
// (two-row capital code followed by its memory) in its own memory.

Setup add_setups(const Setup& d1, const Setup& d2);
Setup scale_setup(const Dyadic& c, const Setup& d);
/// Σ_i c_i d_i for positive constants c_i.
Setup weighted_sum(std::span<const Setup> setups, std::span<const Dyadic> weights);
/// Σ_i base^i d_i, i = 0..N.
Setup truncated_sum(std::span<const Setup> setups, const Dyadic& weight_base);

// ---------------------------------------------------------------------------
// Trace serialization

/// CSV columns: stage, word ("#" for a pause), label, capital numerator,
/// capital exponent.
std::string trace_csv(const CapitalTrace& t);
nlohmann::json trace_json(const CapitalTrace& t);

}  // namespace autorand
