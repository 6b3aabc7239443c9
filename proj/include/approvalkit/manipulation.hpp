#pragma once

#include "core.hpp"
#include "pav_solver.hpp"
#include "rules.hpp"
#include "score.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace approvalkit {

/// Additive utilities of a manipulator, one entry per candidate.
class UtilitySpec {
 public:
  UtilitySpec() = default;
  explicit UtilitySpec(std::vector<Score> utilities) : utilities_(std::move(utilities)) {
    for (const auto& u : utilities_) {
      if (u < Score(0)) {
        throw InputError("utilities must be non-negative");
      }
    }
  }

  /// Utility 1 for the members of `liked`, 0 for everyone else.
  static UtilitySpec dichotomous_from(const ApprovalBallot& liked, std::size_t m) {
    std::vector<Score> u(m);
    for (auto c : liked) {
      u.at(c) = Score(1);
    }
    return UtilitySpec(std::move(u));
  }

  [[nodiscard]] const std::vector<Score>& utilities() const { return utilities_; }
  [[nodiscard]] std::size_t size() const { return utilities_.size(); }

  [[nodiscard]] bool dichotomous() const {
    return std::all_of(utilities_.begin(), utilities_.end(),
                       [](const Score& u) { return u == Score(0) || u == Score(1); });
  }

  [[nodiscard]] Score of(const Committee& w) const {
    Score total;
    for (auto c : w) {
      total += utilities_.at(c);
    }
    return total;
  }

  /// Candidates with utility 1 (the truthful ballot under dichotomous preferences).
  [[nodiscard]] ApprovalBallot liked() const {
    std::vector<Candidate> members;
    for (Candidate c = 0; c < utilities_.size(); ++c) {
      if (utilities_[c] == Score(1)) {
        members.push_back(c);
      }
    }
    return ApprovalBallot(std::move(members));
  }

 private:
  std::vector<Score> utilities_;
};

struct IncludeGoal {
  Candidate preferred = 0;
};
struct ExactSetGoal {
  Committee target;
};
struct MaximizeGoal {
  UtilitySpec utility;
};
using ManipulationGoal = std::variant<IncludeGoal, ExactSetGoal, MaximizeGoal>;

struct ManipulationQuery {
  Rule rule = Rule::av;
  ApprovalProfile fixed_ballots;
  std::size_t k = 1;
  std::size_t manipulators = 0;
  ManipulationGoal goal;
  PriorityOrder tiebreak;

  [[nodiscard]] ElectionInstance election_with(const std::vector<ApprovalBallot>& extra) const {
    return ElectionInstance{fixed_ballots.with_ballots(extra), k, tiebreak};
  }
};

struct ManipulationOptions {
  /// Largest (2^m)^j the exhaustive search accepts.
  std::uint64_t tuple_guard = std::uint64_t{1} << 24;
  /// Only consider tuples in which every manipulator casts the same ballot.
  bool identical_ballots_only = false;
  SolverOptions solver;
};

struct ManipulationResult {
  bool success = false;
  std::vector<ApprovalBallot> witness;
  /// Winning committee once the witness is appended.
  std::optional<Committee> outcome;
  std::optional<Score> achieved_utility;
  std::uint64_t search_space = 0;
};

/// Every ballot over m candidates, ordered by size and then by priority key.
[[nodiscard]] inline std::vector<ApprovalBallot> ballots_in_search_order(std::size_t m, const PriorityOrder& t,
                                                                        bool allow_empty) {
  std::vector<ApprovalBallot> out;
  std::vector<std::size_t> ranks;
  auto emit = [&](auto& self, std::size_t start, std::size_t size) -> void {
    if (ranks.size() == size) {
      std::vector<Candidate> members;
      for (auto r : ranks) {
        members.push_back(t.order()[r]);
      }
      out.emplace_back(std::move(members));
      return;
    }
    for (std::size_t r = start; r + (size - ranks.size()) <= m; ++r) {
      ranks.push_back(r);
      self(self, r + 1, size);
      ranks.pop_back();
    }
  };
  for (std::size_t size = allow_empty ? 0 : 1; size <= m; ++size) {
    emit(emit, 0, size);
  }
  return out;
}

namespace detail {

inline void require_query_valid(const ManipulationQuery& q) {
  require_valid(ElectionInstance{q.fixed_ballots, q.k, q.tiebreak});
  const auto m = q.fixed_ballots.candidate_count();
  if (q.rule == Rule::sav) {
    require_no_empty_ballot(q.fixed_ballots);
  }
  std::visit(
      [&](const auto& goal) {
        using G = std::decay_t<decltype(goal)>;
        if constexpr (std::is_same_v<G, IncludeGoal>) {
          if (goal.preferred >= m) {
            throw InputError("preferred candidate is not in the election");
          }
        } else if constexpr (std::is_same_v<G, ExactSetGoal>) {
          require_members_valid(goal.target, m, "target set");
          if (goal.target.size() != q.k) {
            throw InputError("target set size " + std::to_string(goal.target.size()) + " differs from k = " +
                             std::to_string(q.k));
          }
        } else {
          if (goal.utility.size() != m) {
            throw InputError("utility vector must cover every candidate");
          }
        }
      },
      q.goal);
}

inline void require_within_guard(const ManipulationQuery& q, const ManipulationOptions& options) {
  const auto m = q.fixed_ballots.candidate_count();
  const auto bits = m * q.manipulators;
  const bool exceeded = bits >= 64 || (std::uint64_t{1} << bits) > options.tuple_guard;
  if (exceeded) {
    throw ResourceError("manipulation search over (2^" + std::to_string(m) + ")^" + std::to_string(q.manipulators) +
                        " ballot tuples exceeds the guard of " + std::to_string(options.tuple_guard));
  }
}

/// Visits ballot tuples in search order: non-decreasing index sequences, so
/// each multiset of ballots is seen once. `visit` returns false to stop.
inline std::uint64_t for_each_tuple(const ManipulationQuery& q, const ManipulationOptions& options,
                                    const std::function<bool(const std::vector<ApprovalBallot>&)>& visit) {
  const auto pool = ballots_in_search_order(q.fixed_ballots.candidate_count(), q.tiebreak, q.rule != Rule::sav);
  const auto j = q.manipulators;
  std::uint64_t examined = 0;
  std::vector<ApprovalBallot> tuple;
  if (j == 0) {
    ++examined;
    visit(tuple);
    return examined;
  }
  if (options.identical_ballots_only) {
    for (const auto& b : pool) {
      tuple.assign(j, b);
      ++examined;
      if (!visit(tuple)) {
        break;
      }
    }
    return examined;
  }
  bool stop = false;
  auto recurse = [&](auto& self, std::size_t start) -> void {
    if (tuple.size() == j) {
      ++examined;
      stop = !visit(tuple);
      return;
    }
    for (std::size_t b = start; b < pool.size() && !stop; ++b) {
      tuple.push_back(pool[b]);
      self(self, b);
      tuple.pop_back();
    }
  };
  recurse(recurse, 0);
  return examined;
}

inline ManipulationResult search_for(const ManipulationQuery& q, const ManipulationOptions& options,
                                     const std::function<bool(const Committee&)>& achieves) {
  require_within_guard(q, options);
  ManipulationResult result;
  result.search_space = for_each_tuple(q, options, [&](const std::vector<ApprovalBallot>& tuple) {
    const auto w = elect(q.rule, q.election_with(tuple), options.solver);
    if (achieves(w)) {
      result.success = true;
      result.witness = tuple;
      result.outcome = w;
      return false;
    }
    return true;
  });
  return result;
}

}  // namespace detail

/// SAV winner manipulation: every manipulator approves only the preferred
/// candidate, which maximizes its weight and adds nothing to anyone else.
[[nodiscard]] inline ManipulationResult sav_wm_fast(const ManipulationQuery& q) {
  if (q.rule != Rule::sav) {
    throw InputError("sav_wm_fast applies to SAV only");
  }
  const auto* goal = std::get_if<IncludeGoal>(&q.goal);
  if (goal == nullptr) {
    throw InputError("sav_wm_fast needs an include goal");
  }
  detail::require_query_valid(q);
  const std::vector<ApprovalBallot> tuple(q.manipulators, ApprovalBallot{goal->preferred});
  const auto w = sav_winners(q.election_with(tuple));
  ManipulationResult result;
  result.search_space = 1;
  result.outcome = w;
  if (w.contains(goal->preferred)) {
    result.success = true;
    result.witness = tuple;
  }
  return result;
}

/// Winner manipulation: can j extra ballots put the preferred candidate in W?
[[nodiscard]] inline ManipulationResult solve_wm(const ManipulationQuery& q, const ManipulationOptions& options = {}) {
  const auto* goal = std::get_if<IncludeGoal>(&q.goal);
  if (goal == nullptr) {
    throw InputError("solve_wm needs an include goal");
  }
  detail::require_query_valid(q);
  if (q.rule == Rule::sav) {
    try {
      detail::require_within_guard(q, options);
    } catch (const ResourceError&) {
      return sav_wm_fast(q);
    }
  }
  const auto p = goal->preferred;
  return detail::search_for(q, options, [p](const Committee& w) { return w.contains(p); });
}

/// Winning-set manipulation: can j extra ballots make W exactly the target?
[[nodiscard]] inline ManipulationResult solve_wsm(const ManipulationQuery& q, const ManipulationOptions& options = {}) {
  const auto* goal = std::get_if<ExactSetGoal>(&q.goal);
  if (goal == nullptr) {
    throw InputError("solve_wsm needs an exact-set goal");
  }
  detail::require_query_valid(q);
  const auto target = goal->target;
  return detail::search_for(q, options, [&target](const Committee& w) { return w == target; });
}

/// Utility-maximizing ballots for the j manipulators. Utility ties go to the
/// preferred resulting committee, then to the earliest tuple in search order.
[[nodiscard]] inline ManipulationResult best_response(const ManipulationQuery& q,
                                                      const ManipulationOptions& options = {}) {
  const auto* goal = std::get_if<MaximizeGoal>(&q.goal);
  if (goal == nullptr) {
    throw InputError("best_response needs a maximize goal");
  }
  detail::require_query_valid(q);
  detail::require_within_guard(q, options);
  ManipulationResult best;
  best.search_space = detail::for_each_tuple(q, options, [&](const std::vector<ApprovalBallot>& tuple) {
    const auto w = elect(q.rule, q.election_with(tuple), options.solver);
    const auto u = goal->utility.of(w);
    const bool better = !best.achieved_utility || u > *best.achieved_utility ||
                        (u == *best.achieved_utility && committee_preferred(w, *best.outcome, q.tiebreak));
    if (better) {
      best.achieved_utility = u;
      best.outcome = w;
      best.witness = tuple;
    }
    return true;
  });
  best.success = true;
  return best;
}

struct Deviation {
  ApprovalBallot truthful_ballot;
  Committee truthful_outcome;
  Score truthful_utility;
  ApprovalBallot ballot;
  Committee outcome;
  Score utility;
  /// The deviating ballot approves a candidate the agent values at 0.
  bool approves_zero_utility = false;
  /// The deviating ballot leaves out a candidate the agent values at 1.
  bool drops_positive_utility = false;

  [[nodiscard]] Score gain() const { return utility - truthful_utility; }
};

/// Looks for a ballot that gives one extra agent with dichotomous preferences
/// a strictly better committee than approving exactly its utility-1 set.
/// Returns the largest-gain deviation, earliest in search order on ties.
[[nodiscard]] inline std::optional<Deviation> audit_strategyproofness(Rule rule, const ApprovalProfile& fixed_ballots,
                                                                      std::size_t k, const PriorityOrder& tiebreak,
                                                                      const UtilitySpec& truth,
                                                                      const SolverOptions& solver = {}) {
  const auto m = fixed_ballots.candidate_count();
  if (truth.size() != m) {
    throw InputError("utility vector must cover every candidate");
  }
  if (!truth.dichotomous()) {
    throw InputError("strategyproofness audit needs dichotomous utilities");
  }
  const auto truthful = truth.liked();
  if (rule == Rule::sav && truthful.empty()) {
    throw DomainError("SAV undefined for empty ballot (the truthful ballot approves nobody)");
  }
  auto outcome_for = [&](const ApprovalBallot& b) {
    return elect(rule, ElectionInstance{fixed_ballots.with_ballots({b}), k, tiebreak}, solver);
  };
  const auto truthful_outcome = outcome_for(truthful);
  const auto truthful_utility = truth.of(truthful_outcome);

  std::optional<Deviation> best;
  for (const auto& b : ballots_in_search_order(m, tiebreak, rule != Rule::sav)) {
    if (b == truthful) {
      continue;
    }
    const auto w = outcome_for(b);
    const auto u = truth.of(w);
    if (u <= truthful_utility || (best && u <= best->utility)) {
      continue;
    }
    Deviation d{truthful, truthful_outcome, truthful_utility, b, w, u};
    for (auto c : b) {
      d.approves_zero_utility = d.approves_zero_utility || !truthful.contains(c);
    }
    for (auto c : truthful) {
      d.drops_positive_utility = d.drops_positive_utility || !b.contains(c);
    }
    best = std::move(d);
  }
  return best;
}

}  // namespace approvalkit
