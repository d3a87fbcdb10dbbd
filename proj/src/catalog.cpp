#include "autorand/catalog.hpp"

#include <array>
#include <functional>
#include <map>

namespace autorand {

namespace {

// Plain binary DFA from a table: rows[q] = {next on 0, next on 1}.
Dfa table(std::vector<std::array<Dfa::State, 2>> rows, std::vector<bool> accepting,
          Dfa::State start = 0) {
    std::vector<Dfa::State> delta;
    for (const auto& r : rows) {
        delta.push_back(r[0]);
        delta.push_back(r[1]);
    }
    return Dfa(1, std::string(kBinary), rows.size(), start, std::move(accepting), std::move(delta));
}

// {(x, e) : e is a prefix of x}
Dfa prefix_relation() {
    DfaBuilder b(2);
    auto agree = b.add_state(true);
    auto rest = b.add_state(true);
    b.add(agree, "00", agree);
    b.add(agree, "11", agree);
    b.add(agree, "0#", rest);
    b.add(agree, "1#", rest);
    b.add(rest, "0#", rest);
    b.add(rest, "1#", rest);
    return b.build();
}

// {(x, y) : |x| < |y|}
Dfa shorter_relation() {
    DfaBuilder b(2);
    auto s0 = b.add_state(false);
    auto s1 = b.add_state(true);
    for (const char* c : {"00", "01", "10", "11"}) b.add(s0, c, s0);
    b.add(s0, "#0", s1);
    b.add(s0, "#1", s1);
    b.add(s1, "#0", s1);
    b.add(s1, "#1", s1);
    return b.build();
}

const std::map<std::string, std::function<Dfa()>, std::less<>>& registry() {
    static const std::map<std::string, std::function<Dfa()>, std::less<>> r = {
        {"sigma-star", [] { return Dfa::universal(); }},
        {"zero-star", [] { return table({{0, 1}, {1, 1}}, {true, false}); }},
        {"one-star", [] { return table({{1, 0}, {1, 1}}, {true, false}); }},
        {"zero-star-one-star", [] { return table({{0, 1}, {2, 1}, {2, 2}}, {true, true, false}); }},
        {"even-zeros", [] { return table({{1, 2}, {0, 2}, {2, 2}}, {true, false, false}); }},
        {"zero-or-one-star",
         [] { return table({{1, 2}, {1, 3}, {3, 2}, {3, 3}}, {true, true, true, false}); }},
        {"one-sigma-star", [] { return table({{2, 1}, {1, 1}, {2, 2}}, {false, true, false}); }},
        {"one-zero-star", [] { return table({{2, 1}, {1, 2}, {2, 2}}, {false, true, false}); }},
        {"zero-one-star", [] { return table({{1, 2}, {2, 0}, {2, 2}}, {true, false, false}); }},
        {"zero-star-one-star-zero-star",
         [] { return table({{0, 1}, {2, 1}, {2, 3}, {3, 3}}, {true, true, true, false}); }},
        {"no-double-one", [] { return table({{0, 1}, {0, 2}, {2, 2}}, {true, true, false}); }},
        {"finite-three",
         [] {
             std::vector<Word> w{"0", "11", "101"};
             return finite_language(w);
         }},
        {"epsilon", [] { return table({{1, 1}, {1, 1}}, {true, false}); }},
        {"empty", [] { return Dfa::empty(); }},
        {"prefix-family", [] { return prefix_relation(); }},
        {"shorter", [] { return shorter_relation(); }},
    };
    return r;
}

}  // namespace

Dfa catalog_dfa(std::string_view name) {
    const auto& r = registry();
    auto it = r.find(name);
    if (it == r.end()) throw PreconditionError("unknown catalog domain '" + std::string(name) + "'");
    return it->second();
}

std::vector<std::string> catalog_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

}  // namespace autorand
