#include "rmdp/report_io.hpp"

#include "rmdp/mdp_io.hpp"

namespace rmdp {

nlohmann::json solve_report_to_json(const TabularMDP& mdp, const SolveReport& report) {
    nlohmann::json policy = nlohmann::json::array();
    for (std::size_t s = 0; s < report.policy.size(); ++s) {
        if (s < mdp.num_states() && report.policy[s] < mdp.num_actions(s)) {
            policy.push_back(mdp.action_label(s, report.policy[s]));
        } else {
            policy.push_back(nullptr);
        }
    }
    return {
        {"values", report.values},
        {"q", report.q.to_nested()},
        {"policy", policy},
        {"iterations", report.iterations},
        {"residual", report.residual},
        {"converged", report.converged},
        {"history", report.history},
    };
}

nlohmann::json counts_to_json(const TransitionCounts& counts) {
    return {{"n", counts.n()}, {"counts", counts.to_nested()}};
}

TransitionCounts counts_from_json(const nlohmann::json& doc, const PairLayout& layout,
                                  std::size_t num_next) {
    if (!doc.is_object() || !doc.contains("n")) throw ParseError("missing required field \"n\"", "n");
    if (!doc.contains("counts")) throw ParseError("missing required field \"counts\"", "counts");
    const auto& nested = doc.at("counts");
    if (!nested.is_array() || nested.size() != layout.num_states()) {
        throw ParseError("counts: expected one entry per state", "counts");
    }
    std::vector<std::uint64_t> flat;
    flat.reserve(layout.num_pairs() * num_next);
    try {
        for (std::size_t s = 0; s < layout.num_states(); ++s) {
            if (nested[s].size() != layout.num_actions(s)) {
                throw ParseError("counts[" + std::to_string(s) + "]: wrong number of actions", "counts");
            }
            for (std::size_t a = 0; a < layout.num_actions(s); ++a) {
                const auto& row = nested[s][a];
                if (row.size() != num_next) {
                    throw ParseError("counts[" + std::to_string(s) + "][" + std::to_string(a) +
                                         "]: wrong row length",
                                     "counts");
                }
                for (const auto& c : row) flat.push_back(c.get<std::uint64_t>());
            }
        }
        return TransitionCounts(layout, num_next, doc.at("n").get<std::uint64_t>(), std::move(flat));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("counts: ") + e.what(), "counts");
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), "counts");
    }
}

} // namespace rmdp
