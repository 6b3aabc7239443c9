#pragma once

#include "core.hpp"
#include "rules.hpp"
#include "score.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

namespace approvalkit {

enum class Method { exhaustive, branch_and_bound, greedy };

[[nodiscard]] inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::exhaustive:
      return "exhaustive";
    case Method::branch_and_bound:
      return "branch-and-bound";
    case Method::greedy:
      return "greedy";
  }
  return "?";
}

/// Snapshot of a branch-and-bound node, handed to SolverOptions::node_observer.
struct SearchNode {
  Committee partial;
  std::vector<Candidate> undecided;
  std::size_t open_slots = 0;
  Score current;
  Score bound;
};

struct SolverOptions {
  /// Largest C(m, k) pav_exhaustive will enumerate.
  std::uint64_t enumeration_guard = 10'000'000;
  /// Start branch-and-bound from the greedy committee.
  bool seed_with_greedy = true;
  /// Called at every expanded branch-and-bound node (tests only; slows the search).
  std::function<void(const SearchNode&)> node_observer;
};

struct SolveReport {
  Committee winner;
  Score score;
  Method method = Method::exhaustive;
  std::uint64_t nodes_explored = 0;
  bool optimal = false;
};

/// C(n, r), saturating at UINT64_MAX.
[[nodiscard]] inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t r) {
  if (r > n) {
    return 0;
  }
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(acc);
}

namespace detail {

/// Incremental PAV evaluator over candidates renumbered by priority rank.
/// Scores are integers scaled by lcm(1..k): for committees of at most k
/// members every ballot's r(hits) is an exact multiple of 1/lcm(1..k).
class ScaledPav {
 public:
  explicit ScaledPav(const ElectionInstance& e) : order_(e.tiebreak.order()), k_(e.k) {
    const auto& ballots = e.profile.ballots();
    const auto m = e.profile.candidate_count();
    approvers_.assign(m, {});
    for (std::size_t i = 0; i < ballots.size(); ++i) {
      for (auto c : ballots[i]) {
        approvers_[e.tiebreak.rank(c)].push_back(static_cast<std::uint32_t>(i));
      }
    }
    hits_.assign(ballots.size(), 0);

    std::int64_t lcm = 1;
    for (std::int64_t j = 2; j <= static_cast<std::int64_t>(k_); ++j) {
      const auto g = std::gcd(lcm, j);
      if (__builtin_mul_overflow(lcm / g, j, &lcm)) {
        throw ResourceError("committee size " + std::to_string(k_) + " too large for exact scaled arithmetic");
      }
    }
    // Total never exceeds n * k * lcm (r(p) <= p).
    std::int64_t ceiling = 0;
    if (__builtin_mul_overflow(static_cast<std::int64_t>(ballots.size()) + 1, static_cast<std::int64_t>(k_) + 1,
                               &ceiling) ||
        __builtin_mul_overflow(ceiling, lcm, &ceiling)) {
      throw ResourceError("election too large for exact scaled arithmetic");
    }
    scale_ = lcm;
    step_.resize(k_ + 1);
    for (std::size_t h = 0; h <= k_; ++h) {
      step_[h] = scale_ / static_cast<std::int64_t>(h + 1);
    }
  }

  [[nodiscard]] std::size_t size() const { return approvers_.size(); }
  [[nodiscard]] Candidate candidate_at(std::size_t pos) const { return order_[pos]; }

  [[nodiscard]] std::int64_t gain(std::size_t pos) const {
    std::int64_t g = 0;
    for (auto i : approvers_[pos]) {
      g += step_[hits_[i]];
    }
    return g;
  }

  std::int64_t add(std::size_t pos) {
    std::int64_t g = 0;
    for (auto i : approvers_[pos]) {
      g += step_[hits_[i]++];
    }
    return g;
  }

  void remove(std::size_t pos) {
    for (auto i : approvers_[pos]) {
      --hits_[i];
    }
  }

  [[nodiscard]] Score to_score(std::int64_t scaled) const { return Score(scaled, scale_); }

  [[nodiscard]] Committee committee(const std::vector<std::size_t>& positions) const {
    std::vector<Candidate> members;
    members.reserve(positions.size());
    for (auto p : positions) {
      members.push_back(order_[p]);
    }
    return Committee(std::move(members));
  }

 private:
  std::vector<Candidate> order_;
  std::size_t k_;
  std::vector<std::vector<std::uint32_t>> approvers_;
  std::vector<std::size_t> hits_;
  std::vector<std::int64_t> step_;
  std::int64_t scale_ = 1;
};

struct GreedyPick {
  std::vector<std::size_t> positions;
  std::int64_t scaled = 0;
  std::uint64_t evaluations = 0;
};

// Leaves the evaluator with the greedy committee removed again.
inline GreedyPick greedy_positions(ScaledPav& eval, std::size_t k) {
  GreedyPick pick;
  std::vector<bool> taken(eval.size(), false);
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best = eval.size();
    std::int64_t best_gain = -1;
    for (std::size_t p = 0; p < eval.size(); ++p) {
      if (taken[p]) {
        continue;
      }
      ++pick.evaluations;
      const auto g = eval.gain(p);
      if (g > best_gain) {
        best_gain = g;
        best = p;
      }
    }
    taken[best] = true;
    pick.scaled += eval.add(best);
    pick.positions.push_back(best);
  }
  for (auto p : pick.positions) {
    eval.remove(p);
  }
  std::sort(pick.positions.begin(), pick.positions.end());
  return pick;
}

class BranchAndBound {
 public:
  BranchAndBound(const ElectionInstance& e, const SolverOptions& options)
      : eval_(e), k_(e.k), m_(e.profile.candidate_count()), options_(options) {}

  SolveReport run() {
    if (options_.seed_with_greedy) {
      auto pick = greedy_positions(eval_, k_);
      best_positions_ = std::move(pick.positions);
      best_ = pick.scaled;
      have_best_ = true;
    }
    visit(0, 0);
    SolveReport report;
    report.winner = eval_.committee(best_positions_);
    report.score = eval_.to_score(best_);
    report.method = Method::branch_and_bound;
    report.nodes_explored = nodes_;
    report.optimal = true;
    return report;
  }

 private:
  // Sum of the `slots` largest standalone gains among undecided positions.
  std::int64_t bound(std::size_t pos, std::size_t slots) {
    gains_.clear();
    for (std::size_t q = pos; q < m_; ++q) {
      gains_.push_back(eval_.gain(q));
    }
    std::partial_sort(gains_.begin(), gains_.begin() + static_cast<std::ptrdiff_t>(slots), gains_.end(),
                      std::greater<>());
    return std::accumulate(gains_.begin(), gains_.begin() + static_cast<std::ptrdiff_t>(slots), std::int64_t{0});
  }

  // An equal-score subtree can only matter if it might hold a committee
  // that beats the incumbent on tie-break; its earliest member sequence is
  // the chosen prefix followed by the next `slots` positions.
  [[nodiscard]] bool incumbent_wins_ties(std::size_t pos, std::size_t slots) const {
    std::vector<std::size_t> earliest = chosen_;
    for (std::size_t s = 0; s < slots; ++s) {
      earliest.push_back(pos + s);
    }
    return best_positions_ <= earliest;
  }

  void visit(std::size_t pos, std::int64_t current) {
    ++nodes_;
    const auto slots = k_ - chosen_.size();
    if (slots == 0) {
      if (!have_best_ || current > best_ || (current == best_ && chosen_ < best_positions_)) {
        best_ = current;
        best_positions_ = chosen_;
        have_best_ = true;
      }
      return;
    }
    const auto ub = current + bound(pos, slots);
    if (options_.node_observer) {
      std::vector<Candidate> undecided;
      for (std::size_t q = pos; q < m_; ++q) {
        undecided.push_back(eval_.candidate_at(q));
      }
      options_.node_observer(SearchNode{eval_.committee(chosen_), std::move(undecided), slots,
                                        eval_.to_score(current), eval_.to_score(ub - current)});
    }
    if (have_best_ && (ub < best_ || (ub == best_ && incumbent_wins_ties(pos, slots)))) {
      return;
    }
    chosen_.push_back(pos);
    const auto g = eval_.add(pos);
    visit(pos + 1, current + g);
    eval_.remove(pos);
    chosen_.pop_back();
    if (m_ - pos - 1 >= slots) {
      visit(pos + 1, current);
    }
  }

  ScaledPav eval_;
  std::size_t k_;
  std::size_t m_;
  const SolverOptions& options_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_positions_;
  std::vector<std::int64_t> gains_;
  std::int64_t best_ = 0;
  bool have_best_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Enumerates every k-subset. Committees are visited in tie-break order and
/// only a strictly better score replaces the incumbent, so the first optimum
/// found is the preferred one.
[[nodiscard]] inline SolveReport pav_exhaustive(const ElectionInstance& e, const SolverOptions& options = {}) {
  require_valid(e);
  const auto m = e.profile.candidate_count();
  const auto total = binomial_saturating(m, e.k);
  if (total > options.enumeration_guard) {
    throw ResourceError("exhaustive PAV would enumerate " + std::to_string(total) + " committees (guard " +
                        std::to_string(options.enumeration_guard) + "); use branch-and-bound");
  }
  detail::ScaledPav eval(e);
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> best_positions;
  std::int64_t best = -1;
  std::uint64_t visited = 0;

  auto recurse = [&](auto& self, std::size_t start, std::int64_t current) -> void {
    if (chosen.size() == e.k) {
      ++visited;
      if (current > best) {
        best = current;
        best_positions = chosen;
      }
      return;
    }
    const auto slots = e.k - chosen.size();
    for (std::size_t p = start; p + slots <= m; ++p) {
      chosen.push_back(p);
      const auto g = eval.add(p);
      self(self, p + 1, current + g);
      eval.remove(p);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0, 0);

  SolveReport report;
  report.winner = eval.committee(best_positions);
  report.score = eval.to_score(best);
  report.method = Method::exhaustive;
  report.nodes_explored = visited;
  report.optimal = true;
  return report;
}

/// Depth-first include/exclude search in priority order, pruned with the sum
/// of the largest standalone marginal gains (admissible by submodularity).
[[nodiscard]] inline SolveReport pav_branch_and_bound(const ElectionInstance& e, const SolverOptions& options = {}) {
  require_valid(e);
  detail::BranchAndBound search(e, options);
  return search.run();
}

/// Sequential PAV: repeatedly add the candidate with the largest marginal gain.
[[nodiscard]] inline SolveReport pav_greedy(const ElectionInstance& e) {
  require_valid(e);
  detail::ScaledPav eval(e);
  auto pick = detail::greedy_positions(eval, e.k);
  SolveReport report;
  report.winner = eval.committee(pick.positions);
  report.score = eval.to_score(pick.scaled);
  report.method = Method::greedy;
  report.nodes_explored = pick.evaluations;
  report.optimal = false;
  return report;
}

[[nodiscard]] inline SolveReport solve_pav(const ElectionInstance& e, Method method, const SolverOptions& options = {}) {
  switch (method) {
    case Method::exhaustive:
      return pav_exhaustive(e, options);
    case Method::branch_and_bound:
      return pav_branch_and_bound(e, options);
    case Method::greedy:
      return pav_greedy(e);
  }
  throw InputError("unknown PAV method");
}

/// Winning committee of any rule; PAV is solved exactly by branch-and-bound.
[[nodiscard]] inline Committee elect(Rule rule, const ElectionInstance& e, const SolverOptions& options = {}) {
  switch (rule) {
    case Rule::av:
      return av_winners(e);
    case Rule::sav:
      return sav_winners(e);
    case Rule::pav:
      return pav_branch_and_bound(e, options).winner;
    case Rule::rav:
      return rav_winners(e).winners;
  }
  throw InputError("unknown rule");
}

}  // namespace approvalkit
