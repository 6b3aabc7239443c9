#include "approvalkit/reductions.hpp"
#include "approvalkit/rules.hpp"
#include "support/graphs.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

using namespace approvalkit;

namespace {

const Graph triangle(3, {{0, 1}, {1, 2}, {0, 2}});
const Graph path3(3, {{0, 1}, {1, 2}});
const Graph star3(4, {{0, 1}, {0, 2}, {0, 3}});

std::size_t approvals_of(const ApprovalProfile& p, Candidate c) {
  return static_cast<std::size_t>(std::count_if(p.ballots().begin(), p.ballots().end(),
                                                [c](const ApprovalBallot& b) { return b.contains(c); }));
}

}  // namespace

TEST_CASE("graph validation", "[reductions]") {
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), InputError);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), InputError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), InputError);
  CHECK(Graph(3, {{2, 0}}).edges() == std::vector<Graph::Edge>{{0, 2}});
  CHECK(star3.max_degree() == 3);
  CHECK(star3.degree(1) == 1);
}

TEST_CASE("reduction of the triangle", "[reductions]") {
  const auto r = is_to_pav(triangle, 1);
  CHECK(r.election.profile.candidate_count() == 3);
  CHECK(r.election.profile.voter_count() == 3);
  CHECK(r.dummy_candidates.empty());
  CHECK(r.election.k == 1);
  CHECK(r.threshold == Score(2));
  CHECK(r.vertex_candidates == std::vector<CandidateId>{"v0", "v1", "v2"});
}

TEST_CASE("reduction of the path a-b-c", "[reductions]") {
  const auto r = is_to_pav(path3, 2);
  const auto& p = r.election.profile;
  CHECK(p.candidates() == std::vector<CandidateId>{"v0", "v1", "v2", "d0_0", "d2_0"});
  CHECK(r.dummy_candidates == std::vector<CandidateId>{"d0_0", "d2_0"});
  CHECK(p.voter_count() == 4);
  CHECK(p.ballots()[0] == ApprovalBallot{0, 3});
  CHECK(p.ballots()[1] == ApprovalBallot{2, 4});
  CHECK(p.ballots()[2] == ApprovalBallot{0, 1});
  CHECK(p.ballots()[3] == ApprovalBallot{1, 2});
  CHECK(r.election.k == 2);
  CHECK(r.threshold == Score(4));
  CHECK(r.election.tiebreak == PriorityOrder::identity(5));
}

TEST_CASE("reduction of the star K1,3", "[reductions]") {
  const auto r = is_to_pav(star3, 3);
  CHECK(r.max_degree == 3);
  CHECK(r.dummy_candidates.size() == 6);
  CHECK(r.election.profile.voter_count() == 9);
  CHECK(r.threshold == Score(9));
}

TEST_CASE("reduction preconditions", "[reductions]") {
  CHECK_THROWS_AS(is_to_pav(Graph(3, {{0, 1}}), 1), InputError);
  CHECK_THROWS_AS(is_to_pav(Graph(2, {}), 1), InputError);
  CHECK_THROWS_AS(is_to_pav(triangle, 0), InputError);
  CHECK_THROWS_AS(is_to_pav(triangle, 4), InputError);
}

TEST_CASE("generated approvals: deg(G) per vertex candidate, one per dummy", "[reductions][prop]") {
  const auto families = graphs::all_graphs_up_to_isomorphism(6);
  for (const auto& [n, family] : families) {
    for (const auto& g : family) {
      if (g.max_degree() <= 1) continue;
      const auto r = is_to_pav(g, 1);
      const auto& p = r.election.profile;
      for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        REQUIRE(approvals_of(p, v) == r.max_degree);
      }
      for (std::size_t d = g.vertex_count(); d < p.candidate_count(); ++d) {
        REQUIRE(approvals_of(p, d) == 1);
      }
      for (const auto& b : p.ballots()) REQUIRE(b.size() == 2);
    }
  }
}

TEST_CASE("independent set oracle", "[reductions]") {
  CHECK(independent_set_exists(triangle, 1));
  CHECK_FALSE(independent_set_exists(triangle, 2));
  CHECK(independent_set_exists(path3, 2));
  CHECK(independent_set_exists(star3, 3));
  CHECK_FALSE(independent_set_exists(star3, 4));
  CHECK_THROWS_AS(independent_set_exists(Graph(21, {}), 1), ResourceError);
}

TEST_CASE("verify_reduction on the hand-checked cases", "[reductions]") {
  const auto t1 = verify_reduction(triangle, 1);
  CHECK(t1.holds);
  CHECK(t1.independent_set);
  CHECK(t1.optimum.score == Score(2));

  const auto t2 = verify_reduction(triangle, 2);
  CHECK(t2.holds);
  CHECK_FALSE(t2.independent_set);
  CHECK(t2.optimum.score == Score(7, 2));

  const auto p2 = verify_reduction(path3, 2);
  CHECK(p2.holds);
  CHECK(p2.optimum.score == Score(4));
  CHECK(p2.optimum.winner == Committee{0, 2});
}

TEST_CASE("enumeration yields the known counts of unlabeled graphs", "[reductions][support]") {
  const auto families = graphs::all_graphs_up_to_isomorphism(6);
  CHECK(families.at(1).size() == 1);
  CHECK(families.at(2).size() == 2);
  CHECK(families.at(3).size() == 4);
  CHECK(families.at(4).size() == 11);
  CHECK(families.at(5).size() == 34);
  CHECK(families.at(6).size() == 156);
}

TEST_CASE("reduction equivalence on every graph up to 5 vertices", "[reductions][prop]") {
  for (const auto& [n, family] : graphs::all_graphs_up_to_isomorphism(5)) {
    for (const auto& g : family) {
      if (g.max_degree() <= 1) continue;
      for (std::size_t t = 1; t <= g.vertex_count(); ++t) {
        REQUIRE(verify_reduction(g, t).holds);
      }
    }
  }
}

TEST_CASE("marginal gains never exceed deg(G)", "[reductions][prop]") {
  for (const auto& [n, family] : graphs::all_graphs_up_to_isomorphism(4)) {
    for (const auto& g : family) {
      if (g.max_degree() <= 1) continue;
      const auto r = is_to_pav(g, 1);
      const auto& p = r.election.profile;
      const auto m = p.candidate_count();
      const Score cap(static_cast<Score::value_type>(r.max_degree));
      for (std::uint32_t w = 0; w < (1U << m); ++w) {
        std::vector<Candidate> members;
        for (Candidate c = 0; c < m; ++c)
          if (w >> c & 1U) members.push_back(c);
        const Committee committee(members);
        for (Candidate c = 0; c < m; ++c) {
          REQUIRE(pav_gain(p, committee, c) <= cap);
        }
      }
    }
  }
}

TEST_CASE("the reduction's decision does not depend on the tie-break order", "[reductions][prop]") {
  std::mt19937_64 rng(41);
  for (const auto& [n, family] : graphs::all_graphs_up_to_isomorphism(5)) {
    for (const auto& g : family) {
      if (g.max_degree() <= 1) continue;
      for (std::size_t t = 1; t <= g.vertex_count(); ++t) {
        auto r = is_to_pav(g, t);
        const auto reference = pav_branch_and_bound(r.election);
        std::vector<Candidate> order = r.election.tiebreak.order();
        std::shuffle(order.begin(), order.end(), rng);
        r.election.tiebreak = PriorityOrder(order);
        const auto shuffled = pav_branch_and_bound(r.election);
        REQUIRE(shuffled.score == reference.score);
        REQUIRE((shuffled.score >= r.threshold) == independent_set_exists(g, t));
      }
    }
  }
}
