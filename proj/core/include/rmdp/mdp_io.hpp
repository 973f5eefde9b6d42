#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rmdp/mdp.hpp"

namespace rmdp {

/// Malformed model file. `field()` names the offending JSON path when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::string field = {}, std::size_t line = 0)
        : std::runtime_error(message), field_(std::move(field)), line_(line) {}

    const std::string& field() const { return field_; }
    /// 1-based line of a syntax error, 0 when the error is structural.
    std::size_t line() const { return line_; }

private:
    std::string field_;
    std::size_t line_;
};

// MDP file format (UTF-8 JSON, // comments tolerated):
//
//   { "gamma": 0.9, "num_states": 2,
//     "actions": [["al","ar"], ["al","ar"]],
//     "rewards": [[0.0, -0.90909], [0.0, 1.0]],
//     "transitions": [[[1,0],[0,1]], [[1,0],[0,1]]],   // [s][a][s']
//     "terminal": [],
//     "reward_bound": 1.0 }                             // optional
//
// Doubles are written with shortest round-trip precision.

nlohmann::json mdp_to_json(const TabularMDP& mdp);

/// Structural parse only; throws ParseError. Does not run validate_mdp.
TabularMDP mdp_from_json(const nlohmann::json& doc);

/// Parses text and validates; throws ParseError or ValidationError.
TabularMDP parse_mdp(const std::string& text);

TabularMDP load_mdp(const std::filesystem::path& path);
void save_mdp(const TabularMDP& mdp, const std::filesystem::path& path);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace rmdp
