#include "rmdp/mdp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace rmdp {

PairLayout::PairLayout(const std::vector<std::size_t>& actions_per_state) {
    offsets_.reserve(actions_per_state.size() + 1);
    offsets_.push_back(0);
    for (std::size_t n : actions_per_state) {
        offsets_.push_back(offsets_.back() + n);
    }
}

std::size_t PairLayout::max_actions() const {
    std::size_t m = 0;
    for (std::size_t s = 0; s < num_states(); ++s) {
        m = std::max(m, num_actions(s));
    }
    return m;
}

TransitionKernel::TransitionKernel(PairLayout layout, std::size_t num_next, std::vector<double> rows)
    : layout_(std::move(layout)), num_next_(num_next), rows_(std::move(rows)) {
    if (rows_.size() != layout_.num_pairs() * num_next_) {
        throw std::invalid_argument("transition kernel: row storage does not match layout");
    }
}

TransitionKernel TransitionKernel::from_nested(
    const std::vector<std::vector<std::vector<double>>>& rows) {
    std::vector<std::size_t> counts;
    counts.reserve(rows.size());
    for (const auto& per_state : rows) {
        counts.push_back(per_state.size());
    }
    const std::size_t width = rows.size();
    std::vector<double> flat;
    for (std::size_t s = 0; s < rows.size(); ++s) {
        for (std::size_t a = 0; a < rows[s].size(); ++a) {
            if (rows[s][a].size() != width) {
                std::ostringstream msg;
                msg << "transitions[" << s << "][" << a << "]: expected " << width
                    << " entries, got " << rows[s][a].size();
                throw std::invalid_argument(msg.str());
            }
            flat.insert(flat.end(), rows[s][a].begin(), rows[s][a].end());
        }
    }
    return TransitionKernel(PairLayout(counts), width, std::move(flat));
}

std::vector<std::vector<std::vector<double>>> TransitionKernel::to_nested() const {
    std::vector<std::vector<std::vector<double>>> out(layout_.num_states());
    for (std::size_t s = 0; s < layout_.num_states(); ++s) {
        for (std::size_t a = 0; a < layout_.num_actions(s); ++a) {
            auto r = row(s, a);
            out[s].emplace_back(r.begin(), r.end());
        }
    }
    return out;
}

std::vector<std::vector<double>> QFunction::to_nested() const {
    std::vector<std::vector<double>> out(layout_.num_states());
    for (std::size_t s = 0; s < layout_.num_states(); ++s) {
        auto r = row(s);
        out[s].assign(r.begin(), r.end());
    }
    return out;
}

TabularMDP::TabularMDP(double gamma,
                       std::vector<std::vector<std::string>> action_labels,
                       std::vector<std::vector<double>> rewards,
                       TransitionKernel kernel,
                       std::vector<std::size_t> terminal,
                       std::optional<double> reward_bound)
    : gamma_(gamma), labels_(std::move(action_labels)), kernel_(std::move(kernel)) {
    const PairLayout& lay = kernel_.layout();
    if (labels_.size() != lay.num_states() || rewards.size() != lay.num_states()) {
        throw std::invalid_argument("mdp: actions, rewards and transitions disagree on the number of states");
    }
    rewards_.reserve(lay.num_pairs());
    for (std::size_t s = 0; s < lay.num_states(); ++s) {
        if (labels_[s].size() != lay.num_actions(s) || rewards[s].size() != lay.num_actions(s)) {
            std::ostringstream msg;
            msg << "mdp: state " << s << " has " << labels_[s].size() << " action labels, "
                << rewards[s].size() << " rewards and " << lay.num_actions(s) << " transition rows";
            throw std::invalid_argument(msg.str());
        }
        rewards_.insert(rewards_.end(), rewards[s].begin(), rewards[s].end());
    }

    std::sort(terminal.begin(), terminal.end());
    terminal.erase(std::unique(terminal.begin(), terminal.end()), terminal.end());
    terminal_ = std::move(terminal);
    terminal_mask_.assign(lay.num_states(), false);
    for (std::size_t t : terminal_) {
        if (t < terminal_mask_.size()) terminal_mask_[t] = true;
    }

    if (reward_bound) {
        reward_bound_ = *reward_bound;
    } else {
        reward_bound_ = 0.0;
        for (double r : rewards_) reward_bound_ = std::max(reward_bound_, std::abs(r));
    }
}

std::vector<std::vector<double>> TabularMDP::rewards_nested() const {
    std::vector<std::vector<double>> out(num_states());
    for (std::size_t s = 0; s < num_states(); ++s) {
        for (std::size_t a = 0; a < num_actions(s); ++a) out[s].push_back(reward(s, a));
    }
    return out;
}

TabularMDP TabularMDP::with_kernel(TransitionKernel kernel) const {
    if (!(kernel.layout() == layout()) || kernel.num_next() != kernel_.num_next()) {
        throw std::invalid_argument("with_kernel: kernel layout differs from the model");
    }
    TabularMDP copy = *this;
    copy.kernel_ = std::move(kernel);
    return copy;
}

std::string to_string(const Violation& v) {
    std::ostringstream out;
    out << v.code;
    if (v.state) {
        out << " at s=" << *v.state;
        if (v.action) out << ", a=" << *v.action;
    }
    out << ": " << v.message;
    return out.str();
}

std::vector<Violation> validate_row(std::span<const double> row, std::optional<std::size_t> s,
                                    std::optional<std::size_t> a) {
    std::vector<Violation> out;
    double sum = 0.0;
    bool finite = true;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (!std::isfinite(row[j])) {
            finite = false;
            continue;
        }
        if (row[j] < 0.0) {
            std::ostringstream msg;
            msg << "probability of next state " << j << " is negative (" << row[j] << ")";
            out.push_back({"negative-prob", s, a, msg.str()});
        }
        sum += row[j];
    }
    if (!finite) {
        out.push_back({"non-finite", s, a, "transition row has a non-finite entry"});
    } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "row sums to " << sum;
        out.push_back({"row-sum", s, a, msg.str()});
    }
    return out;
}

std::vector<Violation> validate_mdp(const TabularMDP& mdp) {
    std::vector<Violation> out;
    const std::size_t n = mdp.num_states();

    if (n == 0) {
        out.push_back({"no-states", {}, {}, "model has no states"});
    }
    if (!(mdp.gamma() > 0.0 && mdp.gamma() < 1.0)) {
        std::ostringstream msg;
        msg << "gamma out of range (0,1): " << mdp.gamma();
        out.push_back({"gamma-range", {}, {}, msg.str()});
    }
    if (mdp.kernel().num_next() != n) {
        std::ostringstream msg;
        msg << "transition rows have " << mdp.kernel().num_next() << " entries for " << n << " states";
        out.push_back({"kernel-width", {}, {}, msg.str()});
        return out;
    }
    if (!std::isfinite(mdp.reward_bound())) {
        out.push_back({"reward-bound", {}, {}, "reward bound is not finite"});
    }
    for (std::size_t t : mdp.terminal_states()) {
        if (t >= n) {
            std::ostringstream msg;
            msg << "terminal state " << t << " is out of range";
            out.push_back({"terminal-index", t, {}, msg.str()});
        }
    }

    for (std::size_t s = 0; s < n; ++s) {
        if (mdp.num_actions(s) == 0) {
            out.push_back({"no-actions", s, {}, "state has no admissible action"});
        }
        for (std::size_t a = 0; a < mdp.num_actions(s); ++a) {
            const double r = mdp.reward(s, a);
            if (!std::isfinite(r)) {
                out.push_back({"non-finite", s, a, "reward is not finite"});
            } else if (std::abs(r) > mdp.reward_bound()) {
                std::ostringstream msg;
                msg << "|reward| " << std::abs(r) << " exceeds reward bound " << mdp.reward_bound();
                out.push_back({"reward-bound", s, a, msg.str()});
            }
            auto row = mdp.row(s, a);
            auto row_issues = validate_row(row, s, a);
            out.insert(out.end(), row_issues.begin(), row_issues.end());

            if (mdp.is_terminal(s)) {
                if (row[s] != 1.0) {
                    out.push_back({"terminal-absorbing", s, a,
                                   "terminal state must self-loop with probability 1"});
                }
                if (r != 0.0) {
                    out.push_back({"terminal-reward", s, a, "terminal state must have zero reward"});
                }
            }
        }
    }
    return out;
}

namespace {

std::string join_violations(const std::vector<Violation>& vs) {
    std::string msg = "model validation failed";
    for (const auto& v : vs) {
        msg += "\n  ";
        msg += to_string(v);
    }
    return msg;
}

} // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

std::string_view to_string(SetKind kind) {
    switch (kind) {
    case SetKind::None: return "none";
    case SetKind::TV: return "tv";
    case SetKind::Chi2: return "chi2";
    case SetKind::KL: return "kl";
    case SetKind::FiniteSet: return "finite";
    }
    return "unknown";
}

SetKind parse_set_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "none") return SetKind::None;
    if (lower == "tv") return SetKind::TV;
    if (lower == "chi2") return SetKind::Chi2;
    if (lower == "kl") return SetKind::KL;
    if (lower == "finite") return SetKind::FiniteSet;
    throw std::invalid_argument("unknown ambiguity set kind: " + std::string(text));
}

std::vector<Violation> validate_ambiguity(const AmbiguitySpec& set, const TabularMDP& mdp) {
    std::vector<Violation> out;
    switch (set.kind) {
    case SetKind::None:
        break;
    case SetKind::TV:
    case SetKind::Chi2:
    case SetKind::KL:
        if (!(set.radius >= 0.0) || !std::isfinite(set.radius)) {
            out.push_back({"radius", {}, {}, "radius must be a finite non-negative number"});
        }
        break;
    case SetKind::FiniteSet:
        if (set.models.empty()) {
            out.push_back({"models-empty", {}, {}, "finite ambiguity set has no models"});
        }
        for (std::size_t m = 0; m < set.models.size(); ++m) {
            const auto& model = set.models[m];
            if (!(model.layout() == mdp.layout()) || model.num_next() != mdp.num_states()) {
                std::ostringstream msg;
                msg << "model " << m << " does not match the MDP's state/action layout";
                out.push_back({"model-shape", {}, {}, msg.str()});
                continue;
            }
            for (std::size_t s = 0; s < mdp.num_states(); ++s) {
                for (std::size_t a = 0; a < mdp.num_actions(s); ++a) {
                    auto issues = validate_row(model.row(s, a), s, a);
                    for (auto& v : issues) v.message = "model " + std::to_string(m) + ": " + v.message;
                    out.insert(out.end(), issues.begin(), issues.end());
                }
            }
        }
        break;
    }
    return out;
}

} // namespace rmdp
