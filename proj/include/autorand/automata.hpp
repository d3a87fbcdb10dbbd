#pragma once

// Finite automata over plain words and over convolutions of word tuples,
// plus the length-lexicographic utilities the martingale constructions use.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "autorand/dyadic.hpp"
#include "autorand/error.hpp"

namespace autorand {

/// A plain word: a sequence of alphabet letters (never the padding mark).
using Word = std::string;

inline constexpr char kPad = '#';
inline constexpr std::string_view kBinary = "01";

/// Column-wise alignment of k words; shorter rows are padded with '#'.
struct ConvolvedWord {
    std::size_t arity = 1;
    std::vector<std::string> columns;  // each column has `arity` characters

    friend bool operator==(const ConvolvedWord&, const ConvolvedWord&) = default;

    std::vector<Word> rows() const;
};

ConvolvedWord convolve(std::span<const Word> words);
inline ConvolvedWord convolve(std::initializer_list<Word> words) {
    return convolve(std::span<const Word>(words.begin(), words.size()));
}

/// Complete deterministic automaton. For arity 1 the column alphabet is the
/// letter set itself; for arity k > 1 a column is a k-tuple over
/// letters + '#', indexed in base (|letters| + 1) with row 0 least
/// significant.
class Dfa {
public:
    using State = std::uint32_t;

    Dfa(std::size_t arity, std::string letters, std::size_t states, State start,
        std::vector<bool> accepting, std::vector<State> delta);

    /// Sigma* over the given letters.
    static Dfa universal(std::string letters = std::string(kBinary));
    static Dfa empty(std::size_t arity = 1, std::string letters = std::string(kBinary));

    std::size_t arity() const { return arity_; }
    const std::string& letters() const { return letters_; }
    std::size_t size() const { return accepting_.size(); }
    State start() const { return start_; }
    bool accepting(State q) const { return accepting_[q]; }
    std::size_t column_count() const { return columns_; }

    State next(State q, std::size_t column) const { return delta_[q * columns_ + column]; }

    /// Index of a column given as `arity` characters; nullopt for foreign
    /// letters (and for the padding mark when arity == 1).
    std::optional<std::size_t> column_index(std::string_view column) const;
    std::string column_text(std::size_t column) const;
    /// Letter position in the alphabet, or nullopt.
    std::optional<std::size_t> letter_index(char letter) const;

    /// Plain word; requires arity 1.
    bool accepts(std::string_view w) const;
    bool accepts(const ConvolvedWord& w) const;

    /// State reached from the start on a plain word; nullopt on a foreign letter.
    std::optional<State> run(std::string_view w) const;

    /// Same language over a larger alphabet; new letters lead to a trap.
    Dfa over_letters(const std::string& letters) const;

    /// Reachable states that can also reach an accepting state.
    std::vector<bool> live_states() const;
    std::size_t live_state_count() const;
    bool is_empty() const;

private:
    std::size_t arity_;
    std::string letters_;
    std::size_t columns_;
    State start_;
    std::vector<bool> accepting_;
    std::vector<State> delta_;
};

/// Incremental construction; unset transitions go to a rejecting trap
/// state that is only materialized when needed.
class DfaBuilder {
public:
    using State = Dfa::State;

    explicit DfaBuilder(std::size_t arity = 1, std::string letters = std::string(kBinary));

    State add_state(bool accepting = false);
    void set_start(State q) { start_ = q; }
    void set_accepting(State q, bool accepting = true) { accepting_.at(q) = accepting; }
    /// `column` is `arity` characters from letters + '#'.
    void add(State from, std::string_view column, State to);
    /// Every column leaving `from` goes to `to`.
    void add_all(State from, State to);

    Dfa build() const;

private:
    std::size_t arity_;
    std::string letters_;
    std::size_t columns_;
    State start_ = 0;
    std::vector<bool> accepting_;
    std::vector<std::optional<State>> delta_;
};

/// Nondeterministic automaton with epsilon moves; intermediate form for
/// projection.
class Nfa {
public:
    using State = std::uint32_t;

    Nfa(std::size_t arity, std::string letters, std::size_t states);
    static Nfa from_dfa(const Dfa& d);

    std::size_t arity() const { return arity_; }
    const std::string& letters() const { return letters_; }
    std::size_t size() const { return accepting_.size(); }
    std::size_t column_count() const { return columns_; }

    void add_start(State q) { starts_.push_back(q); }
    void set_accepting(State q, bool acc = true) { accepting_.at(q) = acc; }
    void add(State from, std::size_t column, State to) { moves_.at(from).push_back({column, to}); }
    void add_epsilon(State from, State to) { eps_.at(from).push_back(to); }

    const std::vector<State>& starts() const { return starts_; }
    bool accepting(State q) const { return accepting_[q]; }
    const std::vector<std::pair<std::size_t, State>>& moves(State q) const { return moves_[q]; }
    const std::vector<State>& epsilon(State q) const { return eps_[q]; }

    bool accepts(const ConvolvedWord& w) const;

private:
    std::size_t arity_;
    std::string letters_;
    std::size_t columns_;
    std::vector<State> starts_;
    std::vector<bool> accepting_;
    std::vector<std::vector<std::pair<std::size_t, State>>> moves_;
    std::vector<std::vector<State>> eps_;
};

enum class BoolOp { And, Or, Minus, Xor };

/// Product automaton; alphabets are merged when they differ.
Dfa combine(const Dfa& a, const Dfa& b, BoolOp op);
/// universe minus a.
Dfa complement(const Dfa& a, const Dfa& universe);
/// Removes the listed coordinates. Columns whose remaining rows are all '#'
/// become epsilon moves, so `a` should only accept well-formed convolutions.
Nfa project(const Nfa& a, std::span<const std::size_t> coords);
Dfa determinize(const Nfa& n);
/// Existential quantification over the listed coordinates of a relation.
Dfa exists(const Dfa& relation, std::span<const std::size_t> coords);

/// Well-formed convolutions of the given arity: padding only as a suffix of
/// each row and no all-'#' column.
Dfa valid_convolutions(std::size_t arity, std::string letters = std::string(kBinary));

/// prefix . loop* . suffix
Dfa lasso(const Word& prefix, const Word& loop, const Word& suffix,
          std::string letters = std::string(kBinary));
/// A finite set of words.
Dfa finite_language(std::span<const Word> words, std::string letters = std::string(kBinary));

// ---------------------------------------------------------------------------
// Length-lexicographic order (shorter first, then by alphabet position).

bool ll_less(std::string_view x, std::string_view y, std::string_view letters = kBinary);

Word min_ll(const Dfa& d);
/// Least member strictly above w. Throws NoSuccessor when none exists.
Word succ_ll(const Dfa& d, std::string_view w);
/// Least member of length >= n.
Word min_ll_of_length_at_least(const Dfa& d, std::size_t n);
/// |{v in L(d) : v <=_ll w}|.
BigInt count_leq_ll(const Dfa& d, std::string_view w);
/// |L(d) ∩ letters^n|.
BigInt slice_count(const Dfa& d, std::size_t n);
/// |L(d) ∩ letters^{<n}|.
BigInt count_shorter_than(const Dfa& d, std::size_t n);
std::vector<Word> enumerate_ll(const Dfa& d, std::size_t limit);

namespace detail {

/// finish(r)[q]: some word of length exactly r leads q to acceptance.
class LengthTable {
public:
    explicit LengthTable(const Dfa& d);
    const std::vector<char>& finish(std::size_t r);

private:
    const Dfa* dfa_;
    std::vector<std::vector<char>> rows_;
};

}  // namespace detail

/// Iterates L(d) in ll-order, reusing its length tables between calls.
class LlCursor {
public:
    explicit LlCursor(Dfa d);
    LlCursor(const LlCursor&) = delete;
    LlCursor& operator=(const LlCursor&) = delete;

    /// Next member, or nullopt once the language is exhausted.
    std::optional<Word> next();

private:
    Dfa dfa_;
    detail::LengthTable table_;
    std::optional<Word> last_;
    bool done_ = false;
};

struct Decomposition {
    Word u, v, w;
};

/// x = u v w with |v| >= 1, where u and uv reach the same state, so
/// u v^n w y ∈ L ⇔ x y ∈ L for all n and y. The pumping constant is the
/// number of live states.
Decomposition pump_decompose(const Dfa& d, std::string_view x);

struct GrowthClass {
    enum class Kind { BoundedSlices, Polynomial, Exponential };
    Kind kind = Kind::BoundedSlices;
    /// Slice bound for BoundedSlices.
    std::size_t bound = 0;
    /// Polynomial degree of slice growth (cyclic components on a path - 1).
    std::size_t degree = 0;

    friend bool operator==(const GrowthClass&, const GrowthClass&) = default;
    std::string to_string() const;
};

GrowthClass growth_class(const Dfa& d);
bool is_infinite(const Dfa& d);

/// Smallest k with |D ∩ Σ^{<nk}| >= 2^n for n = 1..check_up_to, or nullopt
/// if none up to max_k.
std::optional<std::size_t> exponential_witness(const Dfa& d, std::size_t check_up_to = 12,
                                               std::size_t max_k = 16);

/// Letter-wise injective embedding of Γ into binary k-tuples.
class AlphabetCodec {
public:
    explicit AlphabetCodec(std::string gamma);

    std::size_t arity() const { return arity_; }
    const std::string& gamma() const { return gamma_; }
    /// Bits of φ(letter), most significant first.
    std::string phi(char letter) const;
    ConvolvedWord encode(std::string_view w) const;
    Word decode(const ConvolvedWord& c) const;

private:
    std::string gamma_;
    std::size_t arity_;
};

struct Embedding {
    Dfa image;
    AlphabetCodec codec;
};

Embedding embed_alphabet(const Dfa& d);

// ---------------------------------------------------------------------------
// JSON: {arity, alphabet, states, start, accepting, transitions: [[q, col, r]]}

nlohmann::json to_json(const Dfa& d);
Dfa dfa_from_json(const nlohmann::json& j);
Dfa load_dfa(const std::filesystem::path& path);
void save_dfa(const Dfa& d, const std::filesystem::path& path);

}  // namespace autorand
