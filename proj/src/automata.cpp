#include "autorand/automata.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace autorand {

namespace {

std::size_t column_count_for(std::size_t arity, std::size_t letters) {
    if (arity == 0) throw ArityMismatch("arity must be positive");
    if (arity == 1) return letters;
    std::size_t n = 1;
    for (std::size_t i = 0; i < arity; ++i) n *= letters + 1;
    return n;
}

std::string merge_letters(const std::string& a, const std::string& b) {
    std::string out = a;
    for (char c : b) {
        if (out.find(c) == std::string::npos) out.push_back(c);
    }
    return out;
}

}  // namespace

std::vector<Word> ConvolvedWord::rows() const {
    std::vector<Word> out(arity);
    for (const auto& col : columns) {
        for (std::size_t r = 0; r < arity; ++r) {
            if (col[r] != kPad) out[r].push_back(col[r]);
        }
    }
    return out;
}

ConvolvedWord convolve(std::span<const Word> words) {
    if (words.empty()) throw ArityMismatch("convolution needs at least one word");
    ConvolvedWord out;
    out.arity = words.size();
    std::size_t len = 0;
    for (const auto& w : words) len = std::max(len, w.size());
    out.columns.assign(len, std::string(out.arity, kPad));
    for (std::size_t r = 0; r < words.size(); ++r) {
        for (std::size_t j = 0; j < words[r].size(); ++j) out.columns[j][r] = words[r][j];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dfa

Dfa::Dfa(std::size_t arity, std::string letters, std::size_t states, State start,
         std::vector<bool> accepting, std::vector<State> delta)
    : arity_(arity),
      letters_(std::move(letters)),
      columns_(column_count_for(arity, letters_.size())),
      start_(start),
      accepting_(std::move(accepting)),
      delta_(std::move(delta)) {
    if (states == 0 || accepting_.size() != states || delta_.size() != states * columns_) {
        throw PreconditionError("inconsistent DFA tables");
    }
    if (start_ >= states) throw PreconditionError("DFA start state out of range");
    for (State t : delta_) {
        if (t >= states) throw PreconditionError("DFA transition target out of range");
    }
}

Dfa Dfa::universal(std::string letters) {
    const std::size_t cols = letters.size();
    return Dfa(1, std::move(letters), 1, 0, {true}, std::vector<State>(cols, 0));
}

Dfa Dfa::empty(std::size_t arity, std::string letters) {
    const std::size_t cols = column_count_for(arity, letters.size());
    return Dfa(arity, std::move(letters), 1, 0, {false}, std::vector<State>(cols, 0));
}

std::optional<std::size_t> Dfa::letter_index(char letter) const {
    const auto pos = letters_.find(letter);
    if (pos == std::string::npos) return std::nullopt;
    return pos;
}

std::optional<std::size_t> Dfa::column_index(std::string_view column) const {
    if (column.size() != arity_) return std::nullopt;
    if (arity_ == 1) return letter_index(column[0]);
    const std::size_t base = letters_.size() + 1;
    std::size_t idx = 0;
    std::size_t weight = 1;
    for (char c : column) {
        std::size_t digit;
        if (c == kPad) {
            digit = letters_.size();
        } else if (auto li = letter_index(c)) {
            digit = *li;
        } else {
            return std::nullopt;
        }
        idx += digit * weight;
        weight *= base;
    }
    return idx;
}

std::string Dfa::column_text(std::size_t column) const {
    if (arity_ == 1) return std::string(1, letters_.at(column));
    const std::size_t base = letters_.size() + 1;
    std::string out;
    for (std::size_t r = 0; r < arity_; ++r) {
        const std::size_t digit = column % base;
        column /= base;
        out.push_back(digit == letters_.size() ? kPad : letters_[digit]);
    }
    return out;
}

std::optional<Dfa::State> Dfa::run(std::string_view w) const {
    if (arity_ != 1) throw ArityMismatch("plain word given to a DFA of arity " + std::to_string(arity_));
    State q = start_;
    for (char c : w) {
        const auto li = letter_index(c);
        if (!li) return std::nullopt;
        q = next(q, *li);
    }
    return q;
}

bool Dfa::accepts(std::string_view w) const {
    const auto q = run(w);
    return q && accepting_[*q];
}

bool Dfa::accepts(const ConvolvedWord& w) const {
    if (w.arity != arity_) {
        throw ArityMismatch("convolution of arity " + std::to_string(w.arity) +
                            " given to a DFA of arity " + std::to_string(arity_));
    }
    State q = start_;
    for (const auto& col : w.columns) {
        const auto ci = column_index(col);
        if (!ci) return false;
        q = next(q, *ci);
    }
    return accepting_[q];
}

Dfa Dfa::over_letters(const std::string& letters) const {
    for (char c : letters_) {
        if (letters.find(c) == std::string::npos) {
            throw PreconditionError("alphabet extension must keep every existing letter");
        }
    }
    if (letters == letters_) return *this;
    Dfa widened(arity_, letters, 1, 0, {false},
                std::vector<State>(column_count_for(arity_, letters.size()), 0));
    const std::size_t n = size() + 1;
    const State trap = static_cast<State>(size());
    std::vector<bool> acc(accepting_);
    acc.push_back(false);
    std::vector<State> delta(n * widened.column_count(), trap);
    for (State q = 0; q < size(); ++q) {
        for (std::size_t c = 0; c < widened.column_count(); ++c) {
            if (auto old = column_index(widened.column_text(c))) delta[q * widened.column_count() + c] = next(q, *old);
        }
    }
    return Dfa(arity_, letters, n, start_, std::move(acc), std::move(delta));
}

std::vector<bool> Dfa::live_states() const {
    std::vector<bool> reach(size(), false);
    std::vector<State> stack{start_};
    reach[start_] = true;
    std::vector<std::vector<State>> rev(size());
    while (!stack.empty()) {
        const State q = stack.back();
        stack.pop_back();
        for (std::size_t c = 0; c < columns_; ++c) {
            const State t = next(q, c);
            rev[t].push_back(q);
            if (!reach[t]) {
                reach[t] = true;
                stack.push_back(t);
            }
        }
    }
    std::vector<bool> co(size(), false);
    for (State q = 0; q < size(); ++q) {
        if (reach[q] && accepting_[q]) {
            co[q] = true;
            stack.push_back(q);
        }
    }
    while (!stack.empty()) {
        const State q = stack.back();
        stack.pop_back();
        for (State p : rev[q]) {
            if (!co[p]) {
                co[p] = true;
                stack.push_back(p);
            }
        }
    }
    for (State q = 0; q < size(); ++q) co[q] = co[q] && reach[q];
    return co;
}

std::size_t Dfa::live_state_count() const {
    const auto live = live_states();
    return static_cast<std::size_t>(std::count(live.begin(), live.end(), true));
}

bool Dfa::is_empty() const { return !live_states()[start_]; }

// ---------------------------------------------------------------------------
// DfaBuilder

DfaBuilder::DfaBuilder(std::size_t arity, std::string letters)
    : arity_(arity), letters_(std::move(letters)), columns_(column_count_for(arity_, letters_.size())) {}

DfaBuilder::State DfaBuilder::add_state(bool accepting) {
    accepting_.push_back(accepting);
    delta_.resize(delta_.size() + columns_);
    return static_cast<State>(accepting_.size() - 1);
}

void DfaBuilder::add(State from, std::string_view column, State to) {
    // Borrow the column indexing of a one-state automaton over the same alphabet.
    const Dfa shape = Dfa::empty(arity_, letters_);
    const auto ci = shape.column_index(column);
    if (!ci) throw PreconditionError("column '" + std::string(column) + "' not over the alphabet");
    if (from >= accepting_.size() || to >= accepting_.size()) {
        throw PreconditionError("builder state out of range");
    }
    delta_[from * columns_ + *ci] = to;
}

void DfaBuilder::add_all(State from, State to) {
    for (std::size_t c = 0; c < columns_; ++c) delta_.at(from * columns_ + c) = to;
}

Dfa DfaBuilder::build() const {
    if (accepting_.empty()) return Dfa::empty(arity_, letters_);
    const bool need_trap = std::any_of(delta_.begin(), delta_.end(), [](const auto& t) { return !t; });
    const std::size_t n = accepting_.size() + (need_trap ? 1 : 0);
    const State trap = static_cast<State>(accepting_.size());
    std::vector<bool> acc = accepting_;
    std::vector<Dfa::State> delta(n * columns_, trap);
    for (std::size_t i = 0; i < delta_.size(); ++i) {
        if (delta_[i]) delta[i] = *delta_[i];
    }
    if (need_trap) acc.push_back(false);
    return Dfa(arity_, letters_, n, start_, std::move(acc), std::move(delta));
}

// ---------------------------------------------------------------------------
// Nfa

Nfa::Nfa(std::size_t arity, std::string letters, std::size_t states)
    : arity_(arity),
      letters_(std::move(letters)),
      columns_(column_count_for(arity_, letters_.size())),
      accepting_(states, false),
      moves_(states),
      eps_(states) {}

Nfa Nfa::from_dfa(const Dfa& d) {
    Nfa n(d.arity(), d.letters(), d.size());
    n.add_start(d.start());
    for (Dfa::State q = 0; q < d.size(); ++q) {
        n.set_accepting(q, d.accepting(q));
        for (std::size_t c = 0; c < d.column_count(); ++c) n.add(q, c, d.next(q, c));
    }
    return n;
}

namespace {

std::vector<Nfa::State> closure(const Nfa& n, std::vector<Nfa::State> set) {
    std::vector<bool> seen(n.size(), false);
    for (auto q : set) seen[q] = true;
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (auto t : n.epsilon(set[i])) {
            if (!seen[t]) {
                seen[t] = true;
                set.push_back(t);
            }
        }
    }
    std::sort(set.begin(), set.end());
    return set;
}

}  // namespace

bool Nfa::accepts(const ConvolvedWord& w) const {
    if (w.arity != arity_) throw ArityMismatch("convolution arity does not match NFA");
    const Dfa shape = Dfa::empty(arity_, letters_);
    auto current = closure(*this, starts_);
    for (const auto& col : w.columns) {
        const auto ci = shape.column_index(col);
        if (!ci) return false;
        std::vector<State> nxt;
        for (auto q : current) {
            for (const auto& [c, t] : moves_[q]) {
                if (c == *ci) nxt.push_back(t);
            }
        }
        current = closure(*this, std::move(nxt));
    }
    return std::any_of(current.begin(), current.end(), [&](State q) { return accepting_[q]; });
}

// ---------------------------------------------------------------------------
// Boolean operations, projection, determinization

Dfa combine(const Dfa& a0, const Dfa& b0, BoolOp op) {
    if (a0.arity() != b0.arity()) {
        throw ArityMismatch("combine: arities " + std::to_string(a0.arity()) + " and " +
                            std::to_string(b0.arity()));
    }
    const std::string letters = merge_letters(a0.letters(), b0.letters());
    const Dfa a = a0.over_letters(letters);
    const Dfa b = b0.over_letters(letters);
    const std::size_t cols = a.column_count();

    std::map<std::pair<Dfa::State, Dfa::State>, Dfa::State> index;
    std::vector<std::pair<Dfa::State, Dfa::State>> order;
    auto intern = [&](Dfa::State p, Dfa::State q) {
        auto [it, fresh] = index.try_emplace({p, q}, static_cast<Dfa::State>(order.size()));
        if (fresh) order.push_back({p, q});
        return it->second;
    };
    intern(a.start(), b.start());
    std::vector<Dfa::State> delta;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto [p, q] = order[i];
        for (std::size_t c = 0; c < cols; ++c) delta.push_back(intern(a.next(p, c), b.next(q, c)));
    }
    std::vector<bool> acc;
    for (const auto& [p, q] : order) {
        const bool x = a.accepting(p);
        const bool y = b.accepting(q);
        switch (op) {
            case BoolOp::And: acc.push_back(x && y); break;
            case BoolOp::Or: acc.push_back(x || y); break;
            case BoolOp::Minus: acc.push_back(x && !y); break;
            case BoolOp::Xor: acc.push_back(x != y); break;
        }
    }
    return Dfa(a.arity(), letters, order.size(), 0, std::move(acc), std::move(delta));
}

Dfa complement(const Dfa& a, const Dfa& universe) { return combine(universe, a, BoolOp::Minus); }

Nfa project(const Nfa& a, std::span<const std::size_t> coords) {
    std::vector<bool> drop(a.arity(), false);
    for (auto c : coords) {
        if (c >= a.arity()) throw ArityMismatch("projection coordinate out of range");
        drop[c] = true;
    }
    const std::size_t keep = static_cast<std::size_t>(std::count(drop.begin(), drop.end(), false));
    if (keep == 0) throw ArityMismatch("projection must keep at least one coordinate");

    const Dfa src_shape = Dfa::empty(a.arity(), a.letters());
    const Dfa dst_shape = Dfa::empty(keep, a.letters());
    Nfa out(keep, a.letters(), a.size());
    for (auto s : a.starts()) out.add_start(s);
    for (Nfa::State q = 0; q < a.size(); ++q) {
        out.set_accepting(q, a.accepting(q));
        for (auto t : a.epsilon(q)) out.add_epsilon(q, t);
        for (const auto& [c, t] : a.moves(q)) {
            const std::string col = src_shape.column_text(c);
            std::string kept;
            for (std::size_t r = 0; r < col.size(); ++r) {
                if (!drop[r]) kept.push_back(col[r]);
            }
            if (std::all_of(kept.begin(), kept.end(), [](char x) { return x == kPad; })) {
                out.add_epsilon(q, t);
            } else if (auto ci = dst_shape.column_index(kept)) {
                out.add(q, *ci, t);
            }
        }
    }
    return out;
}

Dfa determinize(const Nfa& n) {
    std::map<std::vector<Nfa::State>, Dfa::State> index;
    std::vector<std::vector<Nfa::State>> order;
    auto intern = [&](std::vector<Nfa::State> set) {
        auto [it, fresh] = index.try_emplace(set, static_cast<Dfa::State>(order.size()));
        if (fresh) order.push_back(std::move(set));
        return it->second;
    };
    intern(closure(n, n.starts()));
    std::vector<Dfa::State> delta;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::vector<std::vector<Nfa::State>> targets(n.column_count());
        for (auto q : order[i]) {
            for (const auto& [c, t] : n.moves(q)) targets[c].push_back(t);
        }
        for (std::size_t c = 0; c < n.column_count(); ++c) {
            auto& t = targets[c];
            std::sort(t.begin(), t.end());
            t.erase(std::unique(t.begin(), t.end()), t.end());
            delta.push_back(intern(closure(n, std::move(t))));
        }
    }
    std::vector<bool> acc;
    for (const auto& set : order) {
        acc.push_back(std::any_of(set.begin(), set.end(), [&](auto q) { return n.accepting(q); }));
    }
    return Dfa(n.arity(), n.letters(), order.size(), 0, std::move(acc), std::move(delta));
}

Dfa valid_convolutions(std::size_t arity, std::string letters) {
    // State = bitmask of rows that have already ended; all states accept.
    const std::size_t masks = std::size_t{1} << arity;
    DfaBuilder b(arity, letters);
    for (std::size_t m = 0; m < masks; ++m) b.add_state(true);
    b.set_start(0);
    const Dfa shape = Dfa::empty(arity, letters);
    for (std::size_t m = 0; m < masks; ++m) {
        for (std::size_t c = 0; c < shape.column_count(); ++c) {
            const std::string col = shape.column_text(c);
            std::size_t pad = 0;
            for (std::size_t r = 0; r < arity; ++r) {
                if (col[r] == kPad) pad |= std::size_t{1} << r;
            }
            if (pad == masks - 1) continue;   // all-# column
            if ((m & ~pad) != 0) continue;    // an ended row resumed
            b.add(static_cast<Dfa::State>(m), col, static_cast<Dfa::State>(pad));
        }
    }
    return b.build();
}

Dfa exists(const Dfa& relation, std::span<const std::size_t> coords) {
    const Dfa valid = combine(relation, valid_convolutions(relation.arity(), relation.letters()), BoolOp::And);
    return determinize(project(Nfa::from_dfa(valid), coords));
}

Dfa lasso(const Word& prefix, const Word& loop, const Word& suffix, std::string letters) {
    const Dfa shape = Dfa::universal(letters);
    Nfa n(1, letters, prefix.size() + loop.size() + suffix.size() + 1);
    Nfa::State q = 0;
    n.add_start(0);
    auto chain = [&](const Word& w) {
        for (char c : w) {
            const auto li = shape.letter_index(c);
            if (!li) throw PreconditionError(std::string("letter '") + c + "' not in alphabet");
            n.add(q, *li, q + 1);
            ++q;
        }
    };
    chain(prefix);
    const Nfa::State loop_head = q;
    chain(loop);
    if (!loop.empty()) n.add_epsilon(q, loop_head);
    chain(suffix);
    n.set_accepting(q);
    // The loop may also be skipped entirely.
    if (!loop.empty()) n.add_epsilon(loop_head, static_cast<Nfa::State>(loop_head + loop.size()));
    return determinize(n);
}

Dfa finite_language(std::span<const Word> words, std::string letters) {
    DfaBuilder b(1, letters);
    const Dfa shape = Dfa::universal(letters);
    b.set_start(b.add_state(false));
    std::vector<std::map<char, Dfa::State>> trie(1);
    for (const auto& w : words) {
        Dfa::State q = 0;
        for (char c : w) {
            if (!shape.letter_index(c)) throw PreconditionError(std::string("letter '") + c + "' not in alphabet");
            auto it = trie[q].find(c);
            if (it == trie[q].end()) {
                const auto fresh = b.add_state(false);
                trie.emplace_back();
                trie[q][c] = fresh;
                b.add(q, std::string(1, c), fresh);
                q = fresh;
            } else {
                q = it->second;
            }
        }
        b.set_accepting(q);
    }
    return b.build();
}

// ---------------------------------------------------------------------------
// Length-lexicographic utilities

bool ll_less(std::string_view x, std::string_view y, std::string_view letters) {
    if (x.size() != y.size()) return x.size() < y.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != y[i]) return letters.find(x[i]) < letters.find(y[i]);
    }
    return false;
}

namespace detail {

LengthTable::LengthTable(const Dfa& d) : dfa_(&d) {
    std::vector<char> row(d.size());
    for (Dfa::State q = 0; q < d.size(); ++q) row[q] = d.accepting(q);
    rows_.push_back(std::move(row));
}

const std::vector<char>& LengthTable::finish(std::size_t r) {
    const Dfa& d = *dfa_;
    while (rows_.size() <= r) {
        const auto& prev = rows_.back();
        std::vector<char> row(d.size(), 0);
        for (Dfa::State q = 0; q < d.size(); ++q) {
            for (std::size_t c = 0; c < d.column_count(); ++c) {
                if (prev[d.next(q, c)]) {
                    row[q] = 1;
                    break;
                }
            }
        }
        rows_.push_back(std::move(row));
    }
    return rows_[r];
}

}  // namespace detail

namespace {

void require_plain(const Dfa& d) {
    if (d.arity() != 1) throw ArityMismatch("length-lexicographic operations need arity 1");
}

// Least completion of length r from q; requires finish(r)[q].
Word least_completion(const Dfa& d, detail::LengthTable& table, Dfa::State q, std::size_t r) {
    Word out;
    for (std::size_t left = r; left > 0; --left) {
        const auto& fin = table.finish(left - 1);
        for (std::size_t c = 0; c < d.column_count(); ++c) {
            if (fin[d.next(q, c)]) {
                out.push_back(d.letters()[c]);
                q = d.next(q, c);
                break;
            }
        }
    }
    return out;
}

std::optional<Word> least_of_length_at_least(const Dfa& d, detail::LengthTable& table, std::size_t n) {
    // A shortest member of length >= n is shorter than n + |Q|.
    for (std::size_t len = n; len < n + d.size(); ++len) {
        if (table.finish(len)[d.start()]) return least_completion(d, table, d.start(), len);
    }
    return std::nullopt;
}

std::optional<Word> successor(const Dfa& d, detail::LengthTable& table, std::string_view w) {
    std::vector<Dfa::State> path{d.start()};
    for (char c : w) {
        const auto li = d.letter_index(c);
        if (!li) throw PreconditionError(std::string("letter '") + c + "' not in alphabet");
        path.push_back(d.next(path.back(), *li));
    }
    const std::size_t len = w.size();
    for (std::size_t i = len; i-- > 0;) {
        const std::size_t here = *d.letter_index(w[i]);
        const auto& fin = table.finish(len - i - 1);
        for (std::size_t c = here + 1; c < d.column_count(); ++c) {
            const Dfa::State t = d.next(path[i], c);
            if (fin[t]) {
                Word out(w.substr(0, i));
                out.push_back(d.letters()[c]);
                return out + least_completion(d, table, t, len - i - 1);
            }
        }
    }
    return least_of_length_at_least(d, table, len + 1);
}

}  // namespace

Word min_ll(const Dfa& d) {
    require_plain(d);
    detail::LengthTable table(d);
    if (auto w = least_of_length_at_least(d, table, 0)) return *w;
    throw EmptyLanguage("min_ll of an empty language");
}

Word min_ll_of_length_at_least(const Dfa& d, std::size_t n) {
    require_plain(d);
    detail::LengthTable table(d);
    if (auto w = least_of_length_at_least(d, table, n)) return *w;
    throw NoSuccessor("no member of length >= " + std::to_string(n));
}

Word succ_ll(const Dfa& d, std::string_view w) {
    require_plain(d);
    detail::LengthTable table(d);
    if (auto s = successor(d, table, w)) return *s;
    throw NoSuccessor("no member above '" + std::string(w) + "'");
}

BigInt count_leq_ll(const Dfa& d, std::string_view w) {
    require_plain(d);
    const std::size_t n = d.size();
    // all[q]: words of the current length reaching q.
    // below[q]: words of length i lexicographically below w[0..i) reaching q.
    std::vector<BigInt> all(n, 0), below(n, 0);
    all[d.start()] = 1;
    BigInt total = 0;
    Dfa::State exact = d.start();
    for (std::size_t i = 0; i <= w.size(); ++i) {
        if (i < w.size()) {
            for (Dfa::State q = 0; q < n; ++q) {
                if (d.accepting(q)) total += all[q];
            }
        }
        if (i == w.size()) break;
        const auto li = d.letter_index(w[i]);
        if (!li) throw PreconditionError(std::string("letter '") + w[i] + "' not in alphabet");
        std::vector<BigInt> all2(n, 0), below2(n, 0);
        for (Dfa::State q = 0; q < n; ++q) {
            if (all[q] == 0 && below[q] == 0) continue;
            for (std::size_t c = 0; c < d.column_count(); ++c) {
                const Dfa::State t = d.next(q, c);
                if (all[q] != 0) all2[t] += all[q];
                if (below[q] != 0) below2[t] += below[q];
            }
        }
        for (std::size_t c = 0; c < *li; ++c) below2[d.next(exact, c)] += 1;
        exact = d.next(exact, *li);
        all.swap(all2);
        below.swap(below2);
    }
    for (Dfa::State q = 0; q < n; ++q) {
        if (d.accepting(q)) total += below[q];
    }
    if (d.accepting(exact)) total += 1;
    return total;
}

namespace {

std::vector<BigInt> slice_counts_upto(const Dfa& d, std::size_t n_max) {
    std::vector<BigInt> out;
    std::vector<BigInt> all(d.size(), 0);
    all[d.start()] = 1;
    for (std::size_t len = 0; len <= n_max; ++len) {
        BigInt here = 0;
        for (Dfa::State q = 0; q < d.size(); ++q) {
            if (d.accepting(q)) here += all[q];
        }
        out.push_back(here);
        if (len == n_max) break;
        std::vector<BigInt> nxt(d.size(), 0);
        for (Dfa::State q = 0; q < d.size(); ++q) {
            if (all[q] == 0) continue;
            for (std::size_t c = 0; c < d.column_count(); ++c) nxt[d.next(q, c)] += all[q];
        }
        all.swap(nxt);
    }
    return out;
}

}  // namespace

BigInt slice_count(const Dfa& d, std::size_t n) {
    require_plain(d);
    return slice_counts_upto(d, n).back();
}

BigInt count_shorter_than(const Dfa& d, std::size_t n) {
    require_plain(d);
    if (n == 0) return 0;
    const auto counts = slice_counts_upto(d, n - 1);
    return std::accumulate(counts.begin(), counts.end(), BigInt(0));
}

std::vector<Word> enumerate_ll(const Dfa& d, std::size_t limit) {
    std::vector<Word> out;
    LlCursor cursor(d);
    while (out.size() < limit) {
        auto w = cursor.next();
        if (!w) break;
        out.push_back(std::move(*w));
    }
    return out;
}

LlCursor::LlCursor(Dfa d) : dfa_(std::move(d)), table_(dfa_) { require_plain(dfa_); }

std::optional<Word> LlCursor::next() {
    if (done_) return std::nullopt;
    last_ = last_ ? successor(dfa_, table_, *last_) : least_of_length_at_least(dfa_, table_, 0);
    if (!last_) done_ = true;
    return last_;
}

// ---------------------------------------------------------------------------
// Pumping and growth

Decomposition pump_decompose(const Dfa& d, std::string_view x) {
    require_plain(d);
    if (!d.accepts(x)) throw PumpingError("'" + std::string(x) + "' is not a member");
    const std::size_t p = d.live_state_count();
    if (x.size() < p) {
        throw PumpingError("'" + std::string(x) + "' is shorter than the pumping constant " + std::to_string(p));
    }
    std::vector<long> first_seen(d.size(), -1);
    Dfa::State q = d.start();
    first_seen[q] = 0;
    for (std::size_t j = 1; j <= x.size(); ++j) {
        q = d.next(q, *d.letter_index(x[j - 1]));
        if (first_seen[q] >= 0) {
            const auto i = static_cast<std::size_t>(first_seen[q]);
            return {Word(x.substr(0, i)), Word(x.substr(i, j - i)), Word(x.substr(j))};
        }
        first_seen[q] = static_cast<long>(j);
    }
    throw PumpingError("no repeated state on the run of '" + std::string(x) + "'");
}

std::string GrowthClass::to_string() const {
    switch (kind) {
        case Kind::BoundedSlices: return "BoundedSlices(" + std::to_string(bound) + ")";
        case Kind::Polynomial: return "Polynomial(degree " + std::to_string(degree) + ")";
        case Kind::Exponential: return "Exponential";
    }
    return "?";
}

GrowthClass growth_class(const Dfa& d) {
    require_plain(d);
    const auto live = d.live_states();
    const std::size_t n = d.size();
    if (!live[d.start()]) return {GrowthClass::Kind::BoundedSlices, 0, 0};

    // Tarjan SCC over the live subgraph.
    std::vector<int> comp(n, -1), low(n, 0), idx(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<Dfa::State> stack;
    int counter = 0, comps = 0;
    std::function<void(Dfa::State)> visit = [&](Dfa::State v) {
        idx[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (std::size_t c = 0; c < d.column_count(); ++c) {
            const Dfa::State w = d.next(v, c);
            if (!live[w]) continue;
            if (idx[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], idx[w]);
            }
        }
        if (low[v] == idx[v]) {
            Dfa::State w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp[w] = comps;
            } while (w != v);
            ++comps;
        }
    };
    for (Dfa::State q = 0; q < n; ++q) {
        if (live[q] && idx[q] < 0) visit(q);
    }

    std::vector<std::size_t> nodes(comps, 0), edges(comps, 0);
    std::vector<std::set<int>> succ(comps);
    for (Dfa::State q = 0; q < n; ++q) {
        if (!live[q]) continue;
        ++nodes[comp[q]];
        for (std::size_t c = 0; c < d.column_count(); ++c) {
            const Dfa::State t = d.next(q, c);
            if (!live[t]) continue;
            if (comp[t] == comp[q]) {
                ++edges[comp[q]];
            } else {
                succ[comp[q]].insert(comp[t]);
            }
        }
    }
    for (int s = 0; s < comps; ++s) {
        if (edges[s] > nodes[s]) return {GrowthClass::Kind::Exponential, 0, 0};
    }
    // Tarjan numbers components in reverse topological order, so successors
    // have smaller indices.
    std::vector<std::size_t> chain(comps, 0);
    for (int s = 0; s < comps; ++s) {
        std::size_t best = 0;
        for (int t : succ[s]) best = std::max(best, chain[t]);
        chain[s] = best + (edges[s] > 0 ? 1 : 0);
    }
    const std::size_t cyclic = chain[comp[d.start()]];
    if (cyclic >= 2) return {GrowthClass::Kind::Polynomial, 0, cyclic - 1};

    // Bounded: slice counts are periodic after 2|Q| with period dividing the
    // lcm of the cycle lengths.
    std::size_t period = 1;
    for (int s = 0; s < comps; ++s) {
        if (edges[s] > 0) period = std::lcm(period, nodes[s]);
        if (period > 1'000'000) break;
    }
    const std::size_t horizon = 2 * n + std::min<std::size_t>(period, 1'000'000);
    const auto counts = slice_counts_upto(d, horizon);
    BigInt best = *std::max_element(counts.begin(), counts.end());
    return {GrowthClass::Kind::BoundedSlices, best.get_ui(), 0};
}

bool is_infinite(const Dfa& d) {
    require_plain(d);
    const std::size_t n = d.size();
    const auto counts = slice_counts_upto(d, 2 * n);
    for (std::size_t i = n; i < counts.size(); ++i) {
        if (counts[i] > 0) return true;
    }
    return false;
}

std::optional<std::size_t> exponential_witness(const Dfa& d, std::size_t check_up_to, std::size_t max_k) {
    require_plain(d);
    const auto counts = slice_counts_upto(d, check_up_to * max_k);
    std::vector<BigInt> prefix(counts.size() + 1, 0);
    for (std::size_t i = 0; i < counts.size(); ++i) prefix[i + 1] = prefix[i] + counts[i];
    for (std::size_t k = 1; k <= max_k; ++k) {
        bool ok = true;
        for (std::size_t n = 1; n <= check_up_to && ok; ++n) {
            BigInt need;
            mpz_ui_pow_ui(need.get_mpz_t(), 2, n);
            ok = prefix[n * k] >= need;  // |D ∩ Σ^{<nk}|
        }
        if (ok) return k;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Alphabet embedding

AlphabetCodec::AlphabetCodec(std::string gamma) : gamma_(std::move(gamma)), arity_(1) {
    if (gamma_.empty()) throw PreconditionError("alphabet must be nonempty");
    while ((std::size_t{1} << arity_) < gamma_.size()) ++arity_;
}

std::string AlphabetCodec::phi(char letter) const {
    const auto pos = gamma_.find(letter);
    if (pos == std::string::npos) throw PreconditionError(std::string("letter '") + letter + "' not in Γ");
    std::string bits(arity_, '0');
    for (std::size_t i = 0; i < arity_; ++i) {
        if ((pos >> (arity_ - 1 - i)) & 1) bits[i] = '1';
    }
    return bits;
}

ConvolvedWord AlphabetCodec::encode(std::string_view w) const {
    ConvolvedWord out;
    out.arity = arity_;
    for (char c : w) out.columns.push_back(phi(c));
    return out;
}

Word AlphabetCodec::decode(const ConvolvedWord& c) const {
    if (c.arity != arity_) throw ArityMismatch("codec arity mismatch");
    Word out;
    for (const auto& col : c.columns) {
        std::size_t pos = 0;
        for (char bit : col) {
            if (bit != '0' && bit != '1') throw PreconditionError("column '" + col + "' is not in the image");
            pos = pos * 2 + (bit == '1');
        }
        if (pos >= gamma_.size()) throw PreconditionError("column '" + col + "' is not in the image");
        out.push_back(gamma_[pos]);
    }
    return out;
}

Embedding embed_alphabet(const Dfa& d) {
    require_plain(d);
    AlphabetCodec codec(d.letters());
    DfaBuilder b(codec.arity(), std::string(kBinary));
    for (Dfa::State q = 0; q < d.size(); ++q) b.add_state(d.accepting(q));
    b.set_start(d.start());
    for (Dfa::State q = 0; q < d.size(); ++q) {
        for (std::size_t c = 0; c < d.column_count(); ++c) b.add(q, codec.phi(d.letters()[c]), d.next(q, c));
    }
    return {b.build(), std::move(codec)};
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const Dfa& d) {
    nlohmann::json j;
    j["arity"] = d.arity();
    j["alphabet"] = d.letters();
    j["states"] = d.size();
    j["start"] = d.start();
    std::vector<Dfa::State> acc;
    for (Dfa::State q = 0; q < d.size(); ++q) {
        if (d.accepting(q)) acc.push_back(q);
    }
    j["accepting"] = acc;
    auto trans = nlohmann::json::array();
    for (Dfa::State q = 0; q < d.size(); ++q) {
        for (std::size_t c = 0; c < d.column_count(); ++c) {
            trans.push_back({q, d.column_text(c), d.next(q, c)});
        }
    }
    j["transitions"] = trans;
    return j;
}

Dfa dfa_from_json(const nlohmann::json& j) {
    try {
        const std::size_t arity = j.value("arity", std::size_t{1});
        const std::string letters = j.value("alphabet", std::string(kBinary));
        std::map<std::string, Dfa::State> names;
        std::size_t states = 0;
        if (j.at("states").is_array()) {
            for (const auto& s : j["states"]) names[s.get<std::string>()] = static_cast<Dfa::State>(states++);
        } else {
            states = j["states"].get<std::size_t>();
        }
        auto state_of = [&](const nlohmann::json& v) -> Dfa::State {
            if (v.is_string()) {
                auto it = names.find(v.get<std::string>());
                if (it == names.end()) throw ParseError("unknown state '" + v.get<std::string>() + "'");
                return it->second;
            }
            const auto q = v.get<std::size_t>();
            if (q >= states) throw ParseError("state " + std::to_string(q) + " out of range");
            return static_cast<Dfa::State>(q);
        };
        DfaBuilder b(arity, letters);
        for (std::size_t q = 0; q < states; ++q) b.add_state(false);
        b.set_start(state_of(j.at("start")));
        for (const auto& a : j.at("accepting")) b.set_accepting(state_of(a));
        for (const auto& t : j.at("transitions")) {
            if (!t.is_array() || t.size() != 3) throw ParseError("transition must be [state, column, state]");
            b.add(state_of(t[0]), t[1].get<std::string>(), state_of(t[2]));
        }
        return b.build();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("DFA JSON: ") + e.what());
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("DFA JSON: ") + e.what());
    }
}

Dfa load_dfa(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open automaton file '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
    return dfa_from_json(j);
}

void save_dfa(const Dfa& d, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << to_json(d).dump(2) << '\n';
}

}  // namespace autorand
