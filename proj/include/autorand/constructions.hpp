#pragma once

// Concrete martingales and the procedures built around them: DFA and
// subset bettors, adversarial texts, learners over automatic families, the
// machine-simulating dynamic bettor, diagonalization against a finite
// enumeration, the anchor bettor for exponential domains, and the finite
// subset indexing of bounded-slice domains.

#include <variant>

#include <json.hpp>

#include "autorand/automata.hpp"
#include "autorand/engine.hpp"
#include "autorand/tm.hpp"

namespace autorand {

/// Bets 3/2 of the capital on the DFA's verdict.
Setup regular_bettor(const Dfa& l);

enum class Side { Inside, Outside };
std::string to_string(Side s);
Side parse_side(std::string_view text);

/// Bets 3/2 on label 1 (inside) or 0 (outside) for members of r; neutral
/// elsewhere.
Setup subset_bettor(const Dfa& r, Side side);

/// Capital 1 forever.
Setup constant_setup();

// ---------------------------------------------------------------------------

enum class TextMode { Any, RepetitionFree };

struct AdversarialText {
    std::vector<Word> words;
    CapitalTrace trace;
};

/// Reached when no candidate among the searched words keeps the capital
/// from rising.
struct StallWitness {
    MState state;
    std::size_t stage = 0;
    std::size_t bound = 0;
};

std::variant<AdversarialText, StallWitness> adversarial_text(const Setup& d, const Oracle& oracle,
                                                             const Dfa& domain, TextMode mode,
                                                             std::size_t horizon,
                                                             std::size_t search_bound = 1000);

/// x ∈ L ⇔ π(step(p, (x,1))) > π(step(p, (x,0))).
Oracle extract_language(const Setup& d, const MState& p);

// ---------------------------------------------------------------------------

/// {L_e : e ∈ E} with membership relation over convolutions (x, e).
struct AutomaticFamily {
    Dfa index;
    Dfa relation;

    bool member(std::string_view x, std::string_view e) const;
};

/// L_e = {x : e is a prefix of x}, E = Σ*.
AutomaticFamily prefix_family();

/// Memory (e). Wrong bets advance e to its successor in E.
Setup family_learner(const AutomaticFamily& fam);

/// Memory (e, d). Wrong bets advance e while e <_ll d, otherwise reset e
/// to min E and advance the ceiling d.
Setup variant_family_learner(const AutomaticFamily& fam);

/// The first `count` index pairs the variant learner visits under
/// persistent wrong bets.
std::vector<std::pair<Word, Word>> dovetail_order(const AutomaticFamily& fam, std::size_t count);

// ---------------------------------------------------------------------------

struct TmBettor {
    Setup setup;
    DynamicGenerator generator;
};

/// Memory (input, configuration, output). One machine step per stage; the
/// generator pauses until the output is known, then emits the input, which
/// is bet on at factor 2 (or lost).
TmBettor tm_dynamic_bettor(const TmProgram& prog, const Dfa& domain);

// ---------------------------------------------------------------------------

struct CertificateEntry {
    Word word;
    bool bit = false;
    Dyadic capital;
};

struct DiagonalCertificate {
    nlohmann::json domain;
    nlohmann::json enumeration = nlohmann::json::array();
    Dyadic weight_base = Dyadic::fraction(1, 2);
    std::vector<CertificateEntry> entries;
    std::string enum_hash;

    nlohmann::json to_json() const;
    static DiagonalCertificate from_json(const nlohmann::json& j);
};

/// Setups described by JSON specs:
///   {"kind": "regular-bettor", "dfa": DFA}
///   {"kind": "subset-bettor", "dfa": DFA, "side": "inside"|"outside"}
///   {"kind": "family-learner"|"variant-learner", "index": DFA, "relation": DFA}
///   {"kind": "constant"}
Setup setup_from_spec(const nlohmann::json& spec);

/// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string enumeration_hash(const nlohmann::json& enumeration);

/// Labels the first `words` domain words so the truncated weighted sum of
/// the enumeration never gains.
DiagonalCertificate diagonalize(std::span<const Setup> enumeration, const Dfa& domain,
                                std::size_t words);
DiagonalCertificate diagonalize_specs(const nlohmann::json& enumeration, const Dfa& domain,
                                      std::size_t words);

/// Replays the certificate through the engine's truncated sums. Returns the
/// first problem found, or nullopt if it reproduces exactly.
std::optional<std::string> replay_certificate(const DiagonalCertificate& cert);

// ---------------------------------------------------------------------------

struct Hypothesis {
    std::string name;
    TmProgram program;
    std::size_t budget = 10'000;
};

using HypothesisSpace = std::vector<Hypothesis>;

/// always-0, starts-with-one, all-zeros.
HypothesisSpace default_hypotheses();

/// Memory (counter, anchor, input, hypothesis index, machine state,
/// configuration, output). The hypothesis index is a word of Σ* read in
/// ll-order. Once the index runs past the space the output slot holds "X"
/// and every later step is neutral.
Setup pclass_bettor(const HypothesisSpace& hyp, const Dfa& domain);

/// Field names of the pclass memory tuple.
enum PclassSlot : std::size_t { kCounter, kAnchor, kInput, kHypothesis, kMachine, kConfig, kOutput };
std::size_t hypothesis_position(std::string_view index_word);

struct AnchorCheck {
    std::size_t n = 0;        // anchor a_n, 1-based
    std::size_t length = 0;   // |a_n|
    BigInt position;          // l(a_n)
    BigInt counter;           // t after a_n's stage
    BigInt next_position;     // l(a_{n+1})
    BigInt gap;               // l(a_{n+1}) - l(a_n)
    bool gap_holds = false;   // gap >= 2^{(t-k)/k} - t
    bool lower_holds = false; // 2^{(t-k)/k} <= l(a_{n+1})
    bool upper_holds = false; // l(a_{n+1}) <= 2^{t+p}
};

struct AnchorReport {
    std::vector<Word> anchors;
    std::vector<AnchorCheck> checks;
    std::size_t k = 0;
    std::size_t p = 0;
    /// Anchors stopped because the next one exceeds `max_length`.
    bool truncated = false;
    /// Minimum length of the next anchor.
    BigInt next_length;
};

/// Anchors a_1 = min D, a_{n+1} = least member of length >= l(a_n) above
/// a_n, with the gap inequalities for each consecutive pair.
AnchorReport anchor_report(const Dfa& domain, std::size_t count, std::size_t max_length);

// ---------------------------------------------------------------------------

struct FiniteSetIndexing {
    Dfa domain;
    std::size_t c = 0;
    std::string letters;  // |letters| = 2^c
    AutomaticFamily family;

    Word encode(std::span<const Word> set) const;
    std::vector<Word> decode(std::string_view index) const;
    /// Lexicographically ordered members of D of length n.
    std::vector<Word> slice(std::size_t n) const;
};

FiniteSetIndexing finite_set_indexing(const Dfa& domain);

}  // namespace autorand
