#pragma once

// Single-tape deterministic Turing machines deciding languages over {0,1}.
// One call of tm_step rewrites one cell and moves the head by at most one.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "autorand/automata.hpp"

namespace autorand {

struct TmProgram {
    struct Rule {
        char write;
        int move;  // -1, 0, +1
        std::size_t next;
    };

    std::string name;
    std::size_t states = 1;
    char blank = '_';
    std::size_t start = 0;
    std::size_t accept = 1;
    std::size_t reject = 2;
    /// Missing entries move to the reject state.
    std::map<std::pair<std::size_t, char>, Rule> rules;

    void add(std::size_t state, char read, char write, int move, std::size_t next);
};

struct TmConfig {
    std::size_t state = 0;
    std::size_t head = 0;
    std::size_t steps = 0;
    std::string tape;

    friend bool operator==(const TmConfig&, const TmConfig&) = default;
};

TmConfig tm_initial(const TmProgram& p, std::string_view input);
bool tm_halted(const TmProgram& p, const TmConfig& c);
/// 1 on accept, 0 on reject, nullopt while running.
std::optional<bool> tm_output(const TmProgram& p, const TmConfig& c);
TmConfig tm_step(const TmProgram& p, TmConfig c);
/// Runs to completion or until `budget` steps; nullopt when out of budget.
std::optional<bool> tm_decide(const TmProgram& p, std::string_view input, std::size_t budget);

/// "state,head,steps:tape"
std::string encode_config(const TmConfig& c);
TmConfig decode_config(std::string_view text);

// Built-in machines.
TmProgram tm_equal_blocks();   // {0^n 1^n : n >= 0}
TmProgram tm_constant(bool verdict);
TmProgram tm_starts_with_one();
TmProgram tm_all_zeros();

// JSON: {name, states, blank, start, accept, reject,
//        rules: [[state, read, write, "L"|"R"|"S", next], ...]}
nlohmann::json to_json(const TmProgram& p);
TmProgram tm_from_json(const nlohmann::json& j);
TmProgram load_tm(const std::filesystem::path& path);

}  // namespace autorand
