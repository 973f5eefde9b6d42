#pragma once

#include <nlohmann/json.hpp>

#include "rmdp/generative.hpp"
#include "rmdp/robust_dp.hpp"

namespace rmdp {

/// {"values", "q", "policy", "iterations", "residual", "converged", "history"};
/// policy entries are action labels.
nlohmann::json solve_report_to_json(const TabularMDP& mdp, const SolveReport& report);

/// {"n": N, "counts": [s][a][s']}
nlohmann::json counts_to_json(const TransitionCounts& counts);

/// Throws ParseError on a malformed document or rows that do not sum to n.
TransitionCounts counts_from_json(const nlohmann::json& doc, const PairLayout& layout,
                                  std::size_t num_next);

} // namespace rmdp
