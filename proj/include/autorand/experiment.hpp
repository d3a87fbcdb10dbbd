#pragma once

// File-driven experiments: config parsing, the per-kind runners, artifact
// writing and the seeded probe generator used by embedded audits.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "autorand/constructions.hpp"
#include "autorand/grammar.hpp"

namespace autorand {

/// 64-bit linear congruential generator with Knuth's MMIX constants.
class Lcg {
public:
    static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
    static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

    explicit Lcg(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() { return state_ = state_ * kMultiplier + kIncrement; }
    /// Uniform-ish value in [0, n) from the high bits.
    std::uint64_t below(std::uint64_t n) { return (next() >> 33) % n; }
    Word word(std::size_t max_length, std::string_view letters = kBinary);

private:
    std::uint64_t state_;
};

inline const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds{
        "regular-bettor", "adversarial", "subset-bettor", "family-learner", "variant-learner", "tm-dynamic",
        "diagonalize",    "pclass",      "cfl-pipeline",  "growth-report",  "dyadic-audit"};
    return kinds;
}

/// Sections `[experiment]`, `[inputs]` and `[enumeration]` of `key = value`
/// lines. `;` starts a comment anywhere, `#` only at the start of a line
/// (`#eps` names the empty word). Input paths are relative to the config
/// file.
struct ExperimentConfig {
    std::string kind;
    std::filesystem::path source;

    std::size_t steps = 40;
    std::size_t horizon = 100;
    std::size_t search_bound = 1000;
    std::size_t words = 30;
    std::size_t count = 10'000;
    std::uint64_t seed = 1;
    Dyadic threshold = default_threshold();
    std::string text = "ll";      // ll | reversed-blocks
    TextMode mode = TextMode::Any;
    std::optional<bool> expect_success;
    std::optional<Dyadic> expect_final;

    std::optional<Dfa> language, domain, target, index, relation;
    std::optional<Side> side;
    std::optional<Cfg> grammar;
    std::optional<TmProgram> tm;
    HypothesisSpace hypotheses;
    std::optional<Word> target_index;
    std::vector<Word> difference;
    std::vector<Dfa> corpus;
    std::vector<std::string> corpus_names;
    nlohmann::json enumeration = nlohmann::json::array();
};

/// Throws ParseError on malformed text, unknown keys or kinds, nonpositive
/// numbers and unreadable input files.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Setup spec from "kind path [side]" (paths relative to base_dir).
nlohmann::json setup_spec_from_line(std::string_view line, const std::filesystem::path& base_dir);

struct ExperimentOutcome {
    /// Declared invariants that failed; empty means status 0.
    std::vector<std::string> failures;
    nlohmann::json summary;

    int status() const { return failures.empty() ? 0 : 1; }
};

/// Runs the experiment and writes its artifacts to out_dir. With `replay`
/// an existing certificate.json must be reproduced byte for byte.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                 bool replay = false);

/// Embedded audit: every visited state in `states` (thinned to at most
/// `max_states`) against the pause, `probes` seeded words and the domain's
/// short words.
AuditReport embedded_audit(const Setup& d, std::span<const MState> states, std::uint64_t seed,
                           std::size_t probes = 32, std::size_t max_states = 64);

/// Growth class plus brute and exact slice counts up to max_len.
nlohmann::json growth_report(const Dfa& d, std::size_t max_len = 12);

}  // namespace autorand
