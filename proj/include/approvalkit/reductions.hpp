#pragma once

#include "core.hpp"
#include "errors.hpp"
#include "pav_solver.hpp"
#include "score.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace approvalkit {

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  Graph() = default;
  Graph(std::size_t vertex_count, std::vector<Edge> edges) : n_(vertex_count), adjacency_(vertex_count, 0) {
    if (vertex_count > 64) {
      throw InputError("graphs are limited to 64 vertices");
    }
    for (auto [u, v] : edges) {
      if (u >= n_ || v >= n_) {
        throw InputError("edge " + std::to_string(u) + " " + std::to_string(v) + " names a vertex outside 0.." +
                         std::to_string(n_ == 0 ? 0 : n_ - 1));
      }
      if (u == v) {
        throw InputError("self-loop on vertex " + std::to_string(u));
      }
      if (u > v) {
        std::swap(u, v);
      }
      if (adjacent(u, v)) {
        throw InputError("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
      }
      adjacency_[u] |= std::uint64_t{1} << v;
      adjacency_[v] |= std::uint64_t{1} << u;
      edges_.emplace_back(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
  }

  [[nodiscard]] std::size_t vertex_count() const { return n_; }
  /// Normalized (u < v) and sorted.
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] bool adjacent(std::size_t u, std::size_t v) const { return (adjacency_[u] >> v) & 1U; }
  [[nodiscard]] std::uint64_t neighbours(std::size_t v) const { return adjacency_[v]; }
  [[nodiscard]] std::size_t degree(std::size_t v) const {
    return static_cast<std::size_t>(__builtin_popcountll(adjacency_[v]));
  }
  [[nodiscard]] std::size_t max_degree() const {
    std::size_t d = 0;
    for (std::size_t v = 0; v < n_; ++v) {
      d = std::max(d, degree(v));
    }
    return d;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> adjacency_;
  std::vector<Edge> edges_;
};

struct ReductionInstance {
  ElectionInstance election;
  Score threshold;
  std::size_t max_degree = 0;
  /// vertex_candidates[v] is the candidate standing for vertex v.
  std::vector<CandidateId> vertex_candidates;
  std::vector<CandidateId> dummy_candidates;
};

/// PAV election whose best committee of size t reaches deg(G)·t exactly when
/// G has an independent set of size t.
///
/// Candidates are "v<i>" for every vertex, then "d<i>_<j>" for the
/// deg(G) - deg(i) dummies of vertex i; this is also the tie-break order.
/// Ballots: for each vertex i, deg(G) - deg(i) agents approving {v<i>, d<i>_<j>};
/// then one agent {v<u>, v<w>} per edge.
[[nodiscard]] inline ReductionInstance is_to_pav(const Graph& g, std::size_t t) {
  const auto delta = g.max_degree();
  if (delta <= 1) {
    throw InputError("reduction needs maximum degree > 1 (got " + std::to_string(delta) + ")");
  }
  if (t < 1 || t > g.vertex_count()) {
    throw InputError("target " + std::to_string(t) + " outside 1.." + std::to_string(g.vertex_count()));
  }
  const auto n = g.vertex_count();
  ReductionInstance out;
  out.max_degree = delta;
  std::vector<CandidateId> names;
  for (std::size_t v = 0; v < n; ++v) {
    out.vertex_candidates.push_back("v" + std::to_string(v));
    names.push_back(out.vertex_candidates.back());
  }
  std::vector<ApprovalBallot> ballots;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t j = 0; j < delta - g.degree(v); ++j) {
      out.dummy_candidates.push_back("d" + std::to_string(v) + "_" + std::to_string(j));
      names.push_back(out.dummy_candidates.back());
      ballots.push_back(ApprovalBallot{v, names.size() - 1});
    }
  }
  for (auto [u, w] : g.edges()) {
    ballots.push_back(ApprovalBallot{u, w});
  }
  const auto m = names.size();
  out.election = ElectionInstance{ApprovalProfile(std::move(names), std::move(ballots)), t, PriorityOrder::identity(m)};
  out.threshold = Score(static_cast<Score::value_type>(delta * t));
  return out;
}

/// Brute force over vertex subsets; at most 20 vertices.
[[nodiscard]] inline bool independent_set_exists(const Graph& g, std::size_t t) {
  const auto n = g.vertex_count();
  if (n > 20) {
    throw ResourceError("independent set oracle limited to 20 vertices (got " + std::to_string(n) + ")");
  }
  if (t == 0) {
    return true;
  }
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << n); ++set) {
    if (static_cast<std::size_t>(__builtin_popcountll(set)) != t) {
      continue;
    }
    bool independent = true;
    for (std::size_t v = 0; v < n && independent; ++v) {
      if (((set >> v) & 1U) && (g.neighbours(v) & set)) {
        independent = false;
      }
    }
    if (independent) {
      return true;
    }
  }
  return false;
}

struct ReductionVerdict {
  bool holds = false;
  bool independent_set = false;
  bool reaches_threshold = false;
  Score threshold;
  SolveReport optimum;
};

/// Checks both directions of the reduction on one (G, t): the PAV optimum
/// reaches the threshold iff G has an independent set of size t. The optimum
/// comes from branch-and-bound so that dummy-heavy instances stay tractable.
[[nodiscard]] inline ReductionVerdict verify_reduction(const Graph& g, std::size_t t, const SolverOptions& options = {}) {
  const auto instance = is_to_pav(g, t);
  ReductionVerdict verdict;
  verdict.threshold = instance.threshold;
  verdict.optimum = pav_branch_and_bound(instance.election, options);
  verdict.reaches_threshold = verdict.optimum.score >= instance.threshold;
  verdict.independent_set = independent_set_exists(g, t);
  verdict.holds = verdict.reaches_threshold == verdict.independent_set;
  return verdict;
}

}  // namespace approvalkit
