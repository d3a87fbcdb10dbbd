#include "autorand/tm.hpp"

#include <charconv>
#include <fstream>

namespace autorand {

void TmProgram::add(std::size_t state, char read, char write, int move, std::size_t next) {
    rules[{state, read}] = {write, move, next};
}

TmConfig tm_initial(const TmProgram& p, std::string_view input) {
    TmConfig c;
    c.state = p.start;
    c.tape = input.empty() ? std::string(1, p.blank) : std::string(input);
    return c;
}

bool tm_halted(const TmProgram& p, const TmConfig& c) {
    return c.state == p.accept || c.state == p.reject;
}

std::optional<bool> tm_output(const TmProgram& p, const TmConfig& c) {
    if (c.state == p.accept) return true;
    if (c.state == p.reject) return false;
    return std::nullopt;
}

TmConfig tm_step(const TmProgram& p, TmConfig c) {
    if (tm_halted(p, c)) return c;
    ++c.steps;
    auto it = p.rules.find({c.state, c.tape[c.head]});
    if (it == p.rules.end()) {
        c.state = p.reject;
        return c;
    }
    const auto& r = it->second;
    c.tape[c.head] = r.write;
    c.state = r.next;
    if (r.move < 0) {
        if (c.head > 0) --c.head;
    } else if (r.move > 0) {
        ++c.head;
        if (c.head == c.tape.size()) c.tape.push_back(p.blank);
    }
    return c;
}

std::optional<bool> tm_decide(const TmProgram& p, std::string_view input, std::size_t budget) {
    TmConfig c = tm_initial(p, input);
    while (!tm_halted(p, c)) {
        if (c.steps >= budget) return std::nullopt;
        c = tm_step(p, std::move(c));
    }
    return tm_output(p, c);
}

std::string encode_config(const TmConfig& c) {
    return std::to_string(c.state) + "," + std::to_string(c.head) + "," + std::to_string(c.steps) +
           ":" + c.tape;
}

TmConfig decode_config(std::string_view text) {
    TmConfig c;
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("bad machine configuration");
    std::size_t* fields[] = {&c.state, &c.head, &c.steps};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t end = i < 2 ? text.find(',', pos) : colon;
        if (end == std::string_view::npos || end > colon) throw ParseError("bad machine configuration");
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, *fields[i]);
        if (ec != std::errc() || ptr != text.data() + end) throw ParseError("bad machine configuration");
        pos = end + 1;
    }
    c.tape = std::string(text.substr(colon + 1));
    if (c.head >= c.tape.size()) throw ParseError("head outside the tape");
    return c;
}

TmProgram tm_equal_blocks() {
    // 0: start, 1: accept, 2: reject, 3: scan right, 4: scan left, 5: check Ys
    TmProgram p;
    p.name = "equal-blocks";
    p.states = 6;
    p.add(0, '0', 'X', +1, 3);
    p.add(0, 'Y', 'Y', +1, 5);
    p.add(0, '_', '_', 0, 1);
    p.add(3, '0', '0', +1, 3);
    p.add(3, 'Y', 'Y', +1, 3);
    p.add(3, '1', 'Y', -1, 4);
    p.add(4, '0', '0', -1, 4);
    p.add(4, 'Y', 'Y', -1, 4);
    p.add(4, 'X', 'X', +1, 0);
    p.add(5, 'Y', 'Y', +1, 5);
    p.add(5, '_', '_', 0, 1);
    return p;
}

TmProgram tm_constant(bool verdict) {
    TmProgram p;
    p.name = verdict ? "always-1" : "always-0";
    p.states = 3;
    for (char c : std::string("01_")) p.add(0, c, c, 0, verdict ? 1 : 2);
    return p;
}

TmProgram tm_starts_with_one() {
    TmProgram p;
    p.name = "starts-with-one";
    p.states = 3;
    p.add(0, '1', '1', 0, 1);
    return p;
}

TmProgram tm_all_zeros() {
    TmProgram p;
    p.name = "all-zeros";
    p.states = 3;
    p.add(0, '0', '0', +1, 0);
    p.add(0, '_', '_', 0, 1);
    return p;
}

nlohmann::json to_json(const TmProgram& p) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& [key, r] : p.rules) {
        const char* mv = r.move < 0 ? "L" : (r.move > 0 ? "R" : "S");
        rules.push_back({key.first, std::string(1, key.second), std::string(1, r.write), mv, r.next});
    }
    return {{"name", p.name},   {"states", p.states}, {"blank", std::string(1, p.blank)},
            {"start", p.start}, {"accept", p.accept}, {"reject", p.reject},
            {"rules", rules}};
}

TmProgram tm_from_json(const nlohmann::json& j) {
    try {
        TmProgram p;
        p.name = j.value("name", std::string("tm"));
        p.states = j.at("states").get<std::size_t>();
        p.blank = j.value("blank", std::string("_")).at(0);
        p.start = j.value("start", std::size_t{0});
        p.accept = j.value("accept", std::size_t{1});
        p.reject = j.value("reject", std::size_t{2});
        for (std::size_t s : {p.start, p.accept, p.reject}) {
            if (s >= p.states) throw ParseError("machine state out of range");
        }
        for (const auto& r : j.at("rules")) {
            auto from = r.at(0).get<std::size_t>();
            auto read = r.at(1).get<std::string>();
            auto write = r.at(2).get<std::string>();
            auto mv = r.at(3).get<std::string>();
            auto next = r.at(4).get<std::size_t>();
            if (from >= p.states || next >= p.states || read.size() != 1 || write.size() != 1) {
                throw ParseError("malformed machine rule");
            }
            int move = mv == "L" ? -1 : mv == "R" ? 1 : mv == "S" ? 0 : 2;
            if (move == 2) throw ParseError("move must be L, R or S");
            p.add(from, read[0], write[0], move, next);
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("machine json: ") + e.what());
    }
}

TmProgram load_tm(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open machine file " + path.string());
    try {
        return tm_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace autorand
