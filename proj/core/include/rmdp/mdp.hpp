#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rmdp {

/// Absolute tolerance on the sum of a probability row.
inline constexpr double kRowSumTolerance = 1e-9;

using Distribution = std::vector<double>;
using ValueFunction = std::vector<double>;

/// Deterministic policy: one action index per state.
using Policy = std::vector<std::size_t>;

/**
 * Index map for state-dependent action sets.
 *
 * Pairs (s, a) are laid out state-major, so the pairs of state s occupy
 * [first_pair(s), first_pair(s) + num_actions(s)).
 */
class PairLayout {
public:
    PairLayout() : offsets_{0} {}
    explicit PairLayout(const std::vector<std::size_t>& actions_per_state);

    std::size_t num_states() const { return offsets_.size() - 1; }
    std::size_t num_pairs() const { return offsets_.back(); }
    std::size_t num_actions(std::size_t s) const { return offsets_[s + 1] - offsets_[s]; }
    std::size_t first_pair(std::size_t s) const { return offsets_[s]; }
    std::size_t pair(std::size_t s, std::size_t a) const { return offsets_[s] + a; }
    std::size_t max_actions() const;

    bool operator==(const PairLayout&) const = default;

private:
    std::vector<std::size_t> offsets_;
};

/// One next-state distribution per (s, a) pair, stored densely.
class TransitionKernel {
public:
    TransitionKernel() = default;
    TransitionKernel(PairLayout layout, std::size_t num_next, std::vector<double> rows);

    /// Builds from transitions[s][a][s']. Throws std::invalid_argument on ragged rows.
    static TransitionKernel from_nested(const std::vector<std::vector<std::vector<double>>>& rows);

    const PairLayout& layout() const { return layout_; }
    std::size_t num_next() const { return num_next_; }

    std::span<const double> row(std::size_t pair) const {
        return {rows_.data() + pair * num_next_, num_next_};
    }
    std::span<const double> row(std::size_t s, std::size_t a) const {
        return row(layout_.pair(s, a));
    }

    std::vector<std::vector<std::vector<double>>> to_nested() const;

    bool operator==(const TransitionKernel&) const = default;

private:
    PairLayout layout_;
    std::size_t num_next_ = 0;
    std::vector<double> rows_;
};

/// Action values on exactly the admissible (s, a) pairs.
class QFunction {
public:
    QFunction() = default;
    explicit QFunction(PairLayout layout, double fill = 0.0)
        : layout_(std::move(layout)), values_(layout_.num_pairs(), fill) {}

    const PairLayout& layout() const { return layout_; }

    double operator()(std::size_t s, std::size_t a) const { return values_[layout_.pair(s, a)]; }
    double& operator()(std::size_t s, std::size_t a) { return values_[layout_.pair(s, a)]; }

    std::span<const double> row(std::size_t s) const {
        return {values_.data() + layout_.first_pair(s), layout_.num_actions(s)};
    }
    std::span<double> row(std::size_t s) {
        return {values_.data() + layout_.first_pair(s), layout_.num_actions(s)};
    }
    std::span<const double> flat() const { return values_; }

    std::vector<std::vector<double>> to_nested() const;

    bool operator==(const QFunction&) const = default;

private:
    PairLayout layout_;
    std::vector<double> values_;
};

/**
 * Finite-state, finite-action discounted MDP with a nominal transition kernel.
 *
 * Immutable after construction. The constructor checks only structural
 * consistency (label, reward and kernel shapes agree); semantic invariants
 * such as row sums and terminal absorption are reported by validate_mdp().
 */
class TabularMDP {
public:
    TabularMDP(double gamma,
               std::vector<std::vector<std::string>> action_labels,
               std::vector<std::vector<double>> rewards,
               TransitionKernel kernel,
               std::vector<std::size_t> terminal,
               std::optional<double> reward_bound = std::nullopt);

    std::size_t num_states() const { return layout().num_states(); }
    std::size_t num_actions(std::size_t s) const { return layout().num_actions(s); }
    const PairLayout& layout() const { return kernel_.layout(); }

    double gamma() const { return gamma_; }
    double reward(std::size_t s, std::size_t a) const { return rewards_[layout().pair(s, a)]; }
    double reward_bound() const { return reward_bound_; }
    const TransitionKernel& kernel() const { return kernel_; }
    std::span<const double> row(std::size_t s, std::size_t a) const { return kernel_.row(s, a); }

    const std::string& action_label(std::size_t s, std::size_t a) const { return labels_[s][a]; }
    const std::vector<std::vector<std::string>>& action_labels() const { return labels_; }
    std::vector<std::vector<double>> rewards_nested() const;

    /// Sorted, de-duplicated terminal state indices.
    const std::vector<std::size_t>& terminal_states() const { return terminal_; }
    bool is_terminal(std::size_t s) const { return s < terminal_mask_.size() && terminal_mask_[s]; }

    /// Copy of this model with another kernel of the same layout.
    TabularMDP with_kernel(TransitionKernel kernel) const;

    bool operator==(const TabularMDP&) const = default;

private:
    double gamma_;
    std::vector<std::vector<std::string>> labels_;
    std::vector<double> rewards_;
    TransitionKernel kernel_;
    std::vector<std::size_t> terminal_;
    std::vector<bool> terminal_mask_;
    double reward_bound_;
};

/// An invariant violation, located at (state, action) when applicable.
struct Violation {
    std::string code;
    std::optional<std::size_t> state;
    std::optional<std::size_t> action;
    std::string message;

    bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& v);

/// Returns every invariant violation; empty iff the model is well-formed.
std::vector<Violation> validate_mdp(const TabularMDP& mdp);

/// Checks a single probability row: non-negative, finite, sums to one.
std::vector<Violation> validate_row(std::span<const double> row,
                                    std::optional<std::size_t> s = std::nullopt,
                                    std::optional<std::size_t> a = std::nullopt);

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

enum class SetKind { None, TV, Chi2, KL, FiniteSet };

std::string_view to_string(SetKind kind);
/// Accepts "none", "tv", "chi2", "kl", "finite" (case-insensitive).
SetKind parse_set_kind(std::string_view text);

/**
 * (s,a)-rectangular ambiguity set around the nominal kernel.
 *
 * kind None behaves exactly like TV with radius 0. FiniteSet carries whole
 * alternative kernels; Bellman backups take the minimum over the per-(s,a)
 * rows of every model.
 */
struct AmbiguitySpec {
    SetKind kind = SetKind::None;
    double radius = 0.0;
    std::vector<TransitionKernel> models;

    static AmbiguitySpec none() { return {}; }
    static AmbiguitySpec tv(double r) { return {SetKind::TV, r, {}}; }
    static AmbiguitySpec chi2(double r) { return {SetKind::Chi2, r, {}}; }
    static AmbiguitySpec kl(double r) { return {SetKind::KL, r, {}}; }
    static AmbiguitySpec finite(std::vector<TransitionKernel> models) {
        return {SetKind::FiniteSet, 0.0, std::move(models)};
    }
};

/// Violations of the set against the model it will be applied to.
std::vector<Violation> validate_ambiguity(const AmbiguitySpec& set, const TabularMDP& mdp);

} // namespace rmdp
