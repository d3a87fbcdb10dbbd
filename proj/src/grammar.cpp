#include "autorand/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace autorand {

namespace {

std::string unique_name(const std::vector<std::string>& names, std::string base) {
    std::set<std::string> taken(names.begin(), names.end());
    while (taken.count(base)) base += "'";
    return base;
}

std::string repeat(std::string_view w, std::size_t n) {
    std::string out;
    out.reserve(w.size() * n);
    for (std::size_t i = 0; i < n; ++i) out += w;
    return out;
}

}  // namespace

int Cfg::nonterminal(const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<int>(it - names.begin());
    names.push_back(name);
    return static_cast<int>(names.size() - 1);
}

void Cfg::validate() const {
    const int n = static_cast<int>(names.size());
    if (start < 0 || start >= n) throw ParseError("grammar start symbol is undeclared");
    for (const auto& r : rules) {
        if (r.lhs < 0 || r.lhs >= n) throw ParseError("production with undeclared left-hand side");
        for (const auto& s : r.rhs) {
            if (s.terminal) {
                if (alphabet.find(static_cast<char>(s.id)) == std::string::npos) {
                    throw ParseError(std::string("terminal '") + static_cast<char>(s.id) +
                                     "' is not in the alphabet");
                }
            } else if (s.id < 0 || s.id >= n) {
                throw ParseError("production references an undeclared nonterminal");
            }
        }
    }
}

std::string Cfg::to_text() const {
    std::ostringstream out;
    out << "%alphabet " << alphabet << "\n%start " << names.at(start) << "\n";
    for (std::size_t a = 0; a < names.size(); ++a) {
        std::vector<std::string> alts;
        for (const auto& r : rules) {
            if (r.lhs != static_cast<int>(a)) continue;
            if (r.rhs.empty()) {
                alts.push_back("#eps");
                continue;
            }
            std::string alt;
            for (const auto& s : r.rhs) {
                if (!alt.empty()) alt += ' ';
                alt += s.terminal ? std::string(1, static_cast<char>(s.id)) : names[s.id];
            }
            alts.push_back(alt);
        }
        if (alts.empty()) continue;
        out << names[a] << " ->";
        for (std::size_t i = 0; i < alts.size(); ++i) out << (i ? " | " : " ") << alts[i];
        out << "\n";
    }
    return out.str();
}

Cfg CnfGrammar::to_cfg() const {
    Cfg g;
    g.names = names;
    g.alphabet = alphabet;
    g.start = start;
    for (const auto& b : binary) g.add(b.lhs, {GSym::nt(b.left), GSym::nt(b.right)});
    for (const auto& t : terminal) g.add(t.lhs, {GSym::letter(t.letter)});
    if (start_eps) g.add(start, {});
    return g;
}

// ---------------------------------------------------------------------------

CnfGrammar to_cnf(const Cfg& source) {
    source.validate();
    std::vector<std::string> names = source.names;
    std::vector<std::pair<int, std::vector<GSym>>> rules;
    for (const auto& r : source.rules) rules.push_back({r.lhs, r.rhs});
    auto fresh = [&](const std::string& base) {
        names.push_back(unique_name(names, base));
        return static_cast<int>(names.size() - 1);
    };

    int start = source.start;
    bool start_on_rhs = false;
    for (const auto& [lhs, rhs] : rules) {
        for (const auto& s : rhs) start_on_rhs |= !s.terminal && s.id == start;
    }
    std::vector<bool> null0(names.size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [lhs, rhs] : rules) {
            if (!null0[lhs] && std::all_of(rhs.begin(), rhs.end(), [&](const GSym& s) { return !s.terminal && null0[s.id]; })) {
                null0[lhs] = changed = true;
            }
        }
    }
    if (start_on_rhs && null0[start]) {
        const int s0 = fresh(names[start] + "0");
        rules.push_back({s0, {GSym::nt(start)}});
        start = s0;
    }

    std::map<int, int> term_nt;
    for (auto& [lhs, rhs] : rules) {
        if (rhs.size() < 2) continue;
        for (auto& s : rhs) {
            if (!s.terminal) continue;
            auto it = term_nt.find(s.id);
            if (it == term_nt.end()) {
                it = term_nt.emplace(s.id, fresh(std::string("T") + static_cast<char>(s.id))).first;
            }
            s = GSym::nt(it->second);
        }
    }
    for (const auto& [c, t] : term_nt) rules.push_back({t, {GSym::letter(static_cast<char>(c))}});

    std::vector<std::pair<int, std::vector<GSym>>> binarized;
    for (auto& [lhs, rhs] : rules) {
        int a = lhs;
        std::size_t i = 0;
        while (rhs.size() - i > 2) {
            const int rest = fresh(names[lhs] + "_" + std::to_string(binarized.size()));
            binarized.push_back({a, {rhs[i], GSym::nt(rest)}});
            a = rest;
            ++i;
        }
        binarized.push_back({a, std::vector<GSym>(rhs.begin() + static_cast<std::ptrdiff_t>(i), rhs.end())});
    }

    const std::size_t n = names.size();
    std::vector<bool> nullable(n, false);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [lhs, rhs] : binarized) {
            if (nullable[lhs]) continue;
            bool all = std::all_of(rhs.begin(), rhs.end(), [&](const GSym& s) { return !s.terminal && nullable[s.id]; });
            if (all) nullable[lhs] = changed = true;
        }
    }
    std::set<std::pair<int, std::vector<GSym>>> dense;
    for (const auto& [lhs, rhs] : binarized) {
        if (rhs.size() == 2) {
            dense.insert({lhs, rhs});
            if (!rhs[0].terminal && nullable[rhs[0].id]) dense.insert({lhs, {rhs[1]}});
            if (!rhs[1].terminal && nullable[rhs[1].id]) dense.insert({lhs, {rhs[0]}});
        } else if (rhs.size() == 1) {
            dense.insert({lhs, rhs});
        }
    }

    std::vector<std::vector<int>> unit(n);
    for (const auto& [lhs, rhs] : dense) {
        if (rhs.size() == 1 && !rhs[0].terminal) unit[lhs].push_back(rhs[0].id);
    }
    std::set<CnfGrammar::Binary> bin;
    std::set<CnfGrammar::Terminal> term;
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack{static_cast<int>(a)};
        seen[a] = true;
        while (!stack.empty()) {
            const int b = stack.back();
            stack.pop_back();
            for (int c : unit[b]) {
                if (!seen[c]) {
                    seen[c] = true;
                    stack.push_back(c);
                }
            }
        }
        for (const auto& [lhs, rhs] : dense) {
            if (!seen[lhs]) continue;
            if (rhs.size() == 2) {
                bin.insert({static_cast<int>(a), rhs[0].id, rhs[1].id});
            } else if (rhs[0].terminal) {
                term.insert({static_cast<int>(a), static_cast<char>(rhs[0].id)});
            }
        }
    }

    std::vector<bool> generating(n, false);
    for (const auto& t : term) generating[t.lhs] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& b : bin) {
            if (!generating[b.lhs] && generating[b.left] && generating[b.right]) {
                generating[b.lhs] = changed = true;
            }
        }
    }
    std::vector<bool> reachable(n, false);
    reachable[start] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& b : bin) {
            if (!reachable[b.lhs] || !generating[b.left] || !generating[b.right]) continue;
            for (int c : {b.left, b.right}) {
                if (!reachable[c]) reachable[c] = changed = true;
            }
        }
    }

    CnfGrammar out;
    out.alphabet = source.alphabet;
    out.start_eps = nullable[start];
    std::vector<int> id(n, -1);
    auto keep = [&](std::size_t a) { return a == static_cast<std::size_t>(start) || (generating[a] && reachable[a]); };
    for (std::size_t a = 0; a < n; ++a) {
        if (!keep(a)) continue;
        id[a] = static_cast<int>(out.names.size());
        out.names.push_back(names[a]);
    }
    out.start = id[start];
    for (const auto& b : bin) {
        if (id[b.lhs] >= 0 && generating[b.lhs] && id[b.left] >= 0 && id[b.right] >= 0 &&
            generating[b.left] && generating[b.right]) {
            out.binary.push_back({id[b.lhs], id[b.left], id[b.right]});
        }
    }
    for (const auto& t : term) {
        if (id[t.lhs] >= 0) out.terminal.push_back({id[t.lhs], t.letter});
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

class CykTable {
public:
    CykTable(const CnfGrammar& g, std::string_view w) : g_(g), n_(w.size()), v_(g.size()) {
        cells_.assign((n_ + 1) * (n_ + 1) * v_, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (const auto& t : g.terminal) {
                if (t.letter == w[i]) at(i, 1, t.lhs) = 1;
            }
        }
        for (std::size_t len = 2; len <= n_; ++len) {
            for (std::size_t i = 0; i + len <= n_; ++i) {
                for (std::size_t s = 1; s < len; ++s) {
                    for (const auto& b : g.binary) {
                        if (at(i, s, b.left) && at(i + s, len - s, b.right)) at(i, len, b.lhs) = 1;
                    }
                }
            }
        }
    }

    bool has(std::size_t i, std::size_t len, int a) const { return cells_[index(i, len, a)] != 0; }

private:
    std::size_t index(std::size_t i, std::size_t len, int a) const {
        return (i * (n_ + 1) + len) * v_ + static_cast<std::size_t>(a);
    }
    char& at(std::size_t i, std::size_t len, int a) { return cells_[index(i, len, a)]; }

    const CnfGrammar& g_;
    std::size_t n_, v_;
    std::vector<char> cells_;
};

}  // namespace

bool cyk_member(const CnfGrammar& g, std::string_view w) {
    if (w.empty()) return g.start_eps;
    CykTable t(g, w);
    return t.has(0, w.size(), g.start);
}

ParseTree parse(const CnfGrammar& g, std::string_view w) {
    ParseTree tree;
    tree.input = Word(w);
    if (w.empty()) {
        if (!g.start_eps) throw PreconditionError("the empty word is not in the language");
        tree.nodes.push_back({g.start, 0, 0, -1, -1});
        return tree;
    }
    CykTable t(g, w);
    if (!t.has(0, w.size(), g.start)) throw PreconditionError("'" + Word(w) + "' is not in the language");
    tree.nodes.push_back({g.start, 0, w.size(), -1, -1});
    std::vector<int> todo{0};
    while (!todo.empty()) {
        const int id = todo.back();
        todo.pop_back();
        const auto node = tree.nodes[id];
        const std::size_t len = node.end - node.begin;
        if (len == 1) continue;
        bool done = false;
        for (std::size_t s = 1; s < len && !done; ++s) {
            for (const auto& b : g.binary) {
                if (b.lhs != node.nt || !t.has(node.begin, s, b.left) || !t.has(node.begin + s, len - s, b.right)) {
                    continue;
                }
                const int l = static_cast<int>(tree.nodes.size());
                tree.nodes.push_back({b.left, node.begin, node.begin + s, -1, -1});
                tree.nodes.push_back({b.right, node.begin + s, node.end, -1, -1});
                tree.nodes[id].left = l;
                tree.nodes[id].right = l + 1;
                todo.push_back(l);
                todo.push_back(l + 1);
                done = true;
                break;
            }
        }
    }
    return tree;
}

Word ParseTree::yield() const {
    Word out;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const auto& n = nodes[stack.back()];
        stack.pop_back();
        if (n.left < 0) {
            out += input.substr(n.begin, n.end - n.begin);
        } else {
            stack.push_back(n.right);
            stack.push_back(n.left);
        }
    }
    return out;
}

std::size_t ParseTree::height() const {
    std::vector<std::size_t> h(nodes.size(), 1);
    for (std::size_t i = nodes.size(); i-- > 0;) {
        if (nodes[i].left >= 0) h[i] = 1 + std::max(h[nodes[i].left], h[nodes[i].right]);
    }
    return h.empty() ? 0 : h[0];
}

// ---------------------------------------------------------------------------

namespace {

CnfGrammar quotient_letter(const CnfGrammar& g, char a, bool left) {
    Cfg q = g.to_cfg();
    const int n = static_cast<int>(g.size());
    std::vector<int> dot(n);
    for (int x = 0; x < n; ++x) dot[x] = q.nonterminal(unique_name(q.names, g.names[x] + (left ? "." : "`")));
    std::vector<bool> yields_a(n, false);
    for (const auto& t : g.terminal) {
        if (t.letter == a) {
            yields_a[t.lhs] = true;
            q.add(dot[t.lhs], {});
        }
    }
    for (const auto& b : g.binary) {
        if (left) {
            q.add(dot[b.lhs], {GSym::nt(dot[b.left]), GSym::nt(b.right)});
            if (yields_a[b.left]) q.add(dot[b.lhs], {GSym::nt(b.right)});
        } else {
            q.add(dot[b.lhs], {GSym::nt(b.left), GSym::nt(dot[b.right])});
            if (yields_a[b.right]) q.add(dot[b.lhs], {GSym::nt(b.left)});
        }
    }
    q.start = dot[g.start];
    return to_cnf(q);
}

std::vector<bool> useful(const CnfGrammar& g) {
    const std::size_t n = g.size();
    std::vector<bool> gen(n, false);
    for (const auto& t : g.terminal) gen[t.lhs] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& b : g.binary) {
            if (!gen[b.lhs] && gen[b.left] && gen[b.right]) gen[b.lhs] = changed = true;
        }
    }
    std::vector<bool> reach(n, false);
    if (gen[g.start]) reach[g.start] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& b : g.binary) {
            if (!reach[b.lhs] || !gen[b.left] || !gen[b.right]) continue;
            for (int c : {b.left, b.right}) {
                if (!reach[c]) reach[c] = changed = true;
            }
        }
    }
    std::vector<bool> out(n);
    for (std::size_t a = 0; a < n; ++a) out[a] = gen[a] && reach[a];
    return out;
}

}  // namespace

CnfGrammar quotient(const CnfGrammar& g, std::string_view u, std::string_view v) {
    CnfGrammar out = g;
    for (char a : u) out = quotient_letter(out, a, true);
    for (auto it = v.rbegin(); it != v.rend(); ++it) out = quotient_letter(out, *it, false);
    return out;
}

bool is_finite_cfl(const CnfGrammar& g) {
    const auto ok = useful(g);
    const std::size_t n = g.size();
    std::vector<std::vector<int>> edges(n);
    for (const auto& b : g.binary) {
        if (ok[b.lhs] && ok[b.left] && ok[b.right]) {
            edges[b.lhs].push_back(b.left);
            edges[b.lhs].push_back(b.right);
        }
    }
    std::vector<int> color(n, 0);
    for (std::size_t root = 0; root < n; ++root) {
        if (!ok[root] || color[root]) continue;
        std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto& [a, i] = stack.back();
            if (i == edges[a].size()) {
                color[a] = 2;
                stack.pop_back();
                continue;
            }
            const int b = edges[a][i++];
            if (color[b] == 1) return false;
            if (color[b] == 0) {
                color[b] = 1;
                stack.push_back({b, 0});
            }
        }
    }
    return true;
}

std::vector<Word> finite_words(const CnfGrammar& g) {
    if (!is_finite_cfl(g)) throw PreconditionError("finite_words on an infinite language");
    constexpr std::size_t kCap = 200'000;
    const auto ok = useful(g);
    std::vector<std::optional<std::set<Word>>> memo(g.size());
    std::function<const std::set<Word>&(int)> words = [&](int a) -> const std::set<Word>& {
        if (memo[a]) return *memo[a];
        std::set<Word> out;
        for (const auto& t : g.terminal) {
            if (t.lhs == a) out.insert(Word(1, t.letter));
        }
        for (const auto& b : g.binary) {
            if (b.lhs != a || !ok[b.left] || !ok[b.right]) continue;
            const auto& l = words(b.left);
            const auto& r = words(b.right);
            for (const auto& x : l) {
                for (const auto& y : r) {
                    out.insert(x + y);
                    if (out.size() > kCap) throw PreconditionError("finite language too large to list");
                }
            }
        }
        memo[a] = std::move(out);
        return *memo[a];
    };
    std::vector<Word> out;
    if (g.start_eps) out.push_back("");
    if (ok[g.start]) {
        const auto& s = words(g.start);
        out.insert(out.end(), s.begin(), s.end());
    }
    std::sort(out.begin(), out.end(), [&](const Word& x, const Word& y) { return ll_less(x, y, g.alphabet); });
    return out;
}

std::size_t pumping_bound(const CnfGrammar& g) {
    if (g.size() >= 63) return SIZE_MAX;
    return std::size_t{1} << g.size();
}

Word CflPump::pumped(std::size_t n) const { return a + repeat(b, n) + c + repeat(d, n) + e; }

CflPump pump_cfl(const CnfGrammar& g, std::string_view y) {
    if (!cyk_member(g, y)) throw PumpingError("'" + Word(y) + "' is not in the language");
    if (y.empty()) throw PumpingError("the empty word cannot be pumped");
    ParseTree t = parse(g, y);
    std::vector<std::size_t> h(t.nodes.size(), 1);
    for (std::size_t i = t.nodes.size(); i-- > 0;) {
        const auto& n = t.nodes[i];
        if (n.left >= 0) h[i] = 1 + std::max(h[n.left], h[n.right]);
    }
    std::vector<int> path{0};
    while (t.nodes[path.back()].left >= 0) {
        const auto& n = t.nodes[path.back()];
        path.push_back(h[n.left] >= h[n.right] ? n.left : n.right);
    }
    std::map<int, int> below;
    for (std::size_t i = path.size(); i-- > 0;) {
        const auto& upper = t.nodes[path[i]];
        auto it = below.find(upper.nt);
        if (it == below.end()) {
            below.emplace(upper.nt, path[i]);
            continue;
        }
        const auto& lower = t.nodes[it->second];
        const Word w(y);
        CflPump p{w.substr(0, upper.begin), w.substr(upper.begin, lower.begin - upper.begin),
                  w.substr(lower.begin, lower.end - lower.begin), w.substr(lower.end, upper.end - lower.end),
                  w.substr(upper.end)};
        if (p.b.empty() && p.d.empty()) throw PumpingError("repeat with empty flanks");
        for (std::size_t k = 0; k <= 4; ++k) {
            if (!cyk_member(g, p.pumped(k))) {
                throw PumpingError("pumped word '" + p.pumped(k) + "' left the language");
            }
        }
        return p;
    }
    throw PumpingError("no repeated nonterminal in the parse of '" + Word(y) + "'");
}

CnfGrammar intersect(const CnfGrammar& g, const Dfa& d) {
    if (d.arity() != 1) throw PreconditionError("intersection needs a plain-word automaton");
    const std::size_t q = d.size();
    const std::size_t v = g.size();
    auto key = [&](std::size_t p, std::size_t a, std::size_t r) { return (a * q + p) * q + r; };
    std::vector<char> gen(v * q * q, 0);
    for (const auto& t : g.terminal) {
        auto col = d.column_index(std::string(1, t.letter));
        if (!col) continue;
        for (std::size_t p = 0; p < q; ++p) gen[key(p, t.lhs, d.next(p, *col))] = 1;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& b : g.binary) {
            for (std::size_t p = 0; p < q; ++p) {
                for (std::size_t m = 0; m < q; ++m) {
                    if (!gen[key(p, b.left, m)]) continue;
                    for (std::size_t r = 0; r < q; ++r) {
                        if (gen[key(m, b.right, r)] && !gen[key(p, b.lhs, r)]) {
                            gen[key(p, b.lhs, r)] = 1;
                            changed = true;
                        }
                    }
                }
            }
        }
    }

    Cfg out;
    out.alphabet = g.alphabet;
    std::map<std::size_t, int> ids;
    auto sym = [&](std::size_t p, int a, std::size_t r) {
        const std::size_t k = key(p, a, r);
        auto it = ids.find(k);
        if (it != ids.end()) return it->second;
        out.names.push_back(g.names[a] + "[" + std::to_string(p) + "," + std::to_string(r) + "]");
        const int id = static_cast<int>(out.names.size() - 1);
        ids.emplace(k, id);
        return id;
    };
    out.names.push_back(g.names[g.start] + "^");
    const int start = 0;
    for (const auto& t : g.terminal) {
        auto col = d.column_index(std::string(1, t.letter));
        if (!col) continue;
        for (std::size_t p = 0; p < q; ++p) out.add(sym(p, t.lhs, d.next(p, *col)), {GSym::letter(t.letter)});
    }
    for (const auto& b : g.binary) {
        for (std::size_t p = 0; p < q; ++p) {
            for (std::size_t m = 0; m < q; ++m) {
                if (!gen[key(p, b.left, m)]) continue;
                for (std::size_t r = 0; r < q; ++r) {
                    if (!gen[key(m, b.right, r)]) continue;
                    out.add(sym(p, b.lhs, r), {GSym::nt(sym(p, b.left, m)), GSym::nt(sym(m, b.right, r))});
                }
            }
        }
    }
    for (std::size_t f = 0; f < q; ++f) {
        if (d.accepting(f) && gen[key(d.start(), g.start, f)]) {
            out.add(start, {GSym::nt(sym(d.start(), g.start, f))});
        }
    }
    if (g.start_eps && d.accepting(d.start())) out.add(start, {});
    return to_cnf(out);
}

// ---------------------------------------------------------------------------

RegularSubset infinite_regular_subset(const CnfGrammar& g, const Dfa& domain) {
    if (!is_infinite(domain)) throw PreconditionError("domain is finite");
    const std::string& letters = domain.letters();
    const Word x = min_ll_of_length_at_least(domain, domain.live_state_count());
    const Decomposition dec = pump_decompose(domain, x);

    RegularSubset out{lasso(dec.u, dec.v, dec.w, letters), Side::Inside, dec.u, dec.v, dec.w, 0, 0, {}};
    const CnfGrammar m = intersect(g, out.r);
    if (is_finite_cfl(m)) {
        out.excluded = finite_words(m);
        out.r = combine(out.r, finite_language(out.excluded, letters), BoolOp::Minus);
        out.side = Side::Outside;
        return out;
    }

    const CnfGrammar n = quotient(m, dec.u, dec.w);
    constexpr std::size_t kMaxLength = 4096;
    for (std::size_t i = 1; i * dec.v.size() <= kMaxLength; ++i) {
        const Word y = repeat(dec.v, i);
        if (!cyk_member(n, y)) continue;
        CflPump p;
        try {
            p = pump_cfl(n, y);
        } catch (const PumpingError&) {
            continue;
        }
        const std::size_t bd = p.b.size() + p.d.size();
        if (bd % dec.v.size() != 0) {
            throw PumpingError("pumped flanks '" + p.b + "', '" + p.d + "' are not a multiple of |v| = " +
                               std::to_string(dec.v.size()));
        }
        out.k = bd / dec.v.size();
        out.m = (y.size() - bd) / dec.v.size();
        out.r = lasso(dec.u + repeat(dec.v, out.m), repeat(dec.v, out.k), dec.w, letters);
        out.side = Side::Inside;
        return out;
    }
    throw PumpingError("no pumpable member of the quotient up to length " + std::to_string(kMaxLength));
}

CflPipeline cfl_nonrandom_pipeline(const Cfg& g, const Dfa& domain) {
    RegularSubset sub = infinite_regular_subset(to_cnf(g), domain);
    Setup s = subset_bettor(sub.r, sub.side);
    return {std::move(sub), std::move(s)};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Cfg parse_grammar(std::string_view text) {
    struct Line {
        std::size_t number;
        std::string lhs;
        std::string body;
    };
    Cfg g;
    std::vector<Line> lines;
    std::optional<std::string> start;
    std::istringstream in{std::string(text)};
    std::string raw;
    for (std::size_t number = 1; std::getline(in, raw); ++number) {
        std::string_view line = raw;
        if (auto c = line.find("//"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty()) continue;
        auto fail = [&](const std::string& what) {
            throw ParseError("grammar line " + std::to_string(number) + ": " + what);
        };
        if (line.front() == '%') {
            auto toks = split_ws(line);
            if (toks.size() != 2) fail("directive needs exactly one argument");
            if (toks[0] == "%alphabet") {
                g.alphabet = toks[1];
            } else if (toks[0] == "%start") {
                start = toks[1];
            } else {
                fail("unknown directive " + toks[0]);
            }
            continue;
        }
        if (line.front() == '|') {
            if (lines.empty()) fail("continuation before any rule");
            lines.push_back({number, lines.back().lhs, std::string(line.substr(1))});
            continue;
        }
        const auto arrow = line.find("->");
        if (arrow == std::string_view::npos) fail("expected 'NT -> rhs'");
        const auto lhs = split_ws(line.substr(0, arrow));
        if (lhs.size() != 1) fail("left-hand side must be one nonterminal");
        lines.push_back({number, lhs[0], std::string(line.substr(arrow + 2))});
    }
    if (lines.empty()) throw ParseError("grammar has no productions");
    for (const auto& l : lines) g.nonterminal(l.lhs);
    const std::set<std::string> declared(g.names.begin(), g.names.end());
    for (const auto& l : lines) {
        const int lhs = g.nonterminal(l.lhs);
        std::string_view body = l.body;
        while (true) {
            const auto bar = body.find('|');
            auto toks = split_ws(body.substr(0, bar));
            std::vector<GSym> rhs;
            if (toks.empty()) {
                throw ParseError("grammar line " + std::to_string(l.number) + ": empty alternative (use #eps)");
            }
            for (const auto& t : toks) {
                if (t == "#eps") continue;
                if (declared.count(t)) {
                    rhs.push_back(GSym::nt(g.nonterminal(t)));
                    continue;
                }
                for (char c : t) {
                    if (g.alphabet.find(c) == std::string::npos) {
                        throw ParseError("grammar line " + std::to_string(l.number) + ": '" + t +
                                         "' is neither a nonterminal nor a word over " + g.alphabet);
                    }
                    rhs.push_back(GSym::letter(c));
                }
            }
            g.add(lhs, std::move(rhs));
            if (bar == std::string_view::npos) break;
            body = body.substr(bar + 1);
        }
    }
    if (start) {
        if (!declared.count(*start)) throw ParseError("start symbol " + *start + " has no productions");
        g.start = g.nonterminal(*start);
    }
    g.validate();
    return g;
}

Cfg load_grammar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open grammar file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_grammar(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace autorand
