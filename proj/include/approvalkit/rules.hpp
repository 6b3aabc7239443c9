#pragma once

#include "core.hpp"
#include "score.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace approvalkit {

enum class Rule { av, sav, pav, rav };

[[nodiscard]] inline std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::av:
      return "av";
    case Rule::sav:
      return "sav";
    case Rule::pav:
      return "pav";
    case Rule::rav:
      return "rav";
  }
  return "?";
}

[[nodiscard]] inline Rule parse_rule(std::string_view name) {
  if (name == "av") return Rule::av;
  if (name == "sav") return Rule::sav;
  if (name == "pav") return Rule::pav;
  if (name == "rav") return Rule::rav;
  throw InputError("unknown rule '" + std::string(name) + "' (expected av, sav, pav or rav)");
}

/// r(p) = 1 + 1/2 + ... + 1/p, with r(0) = 0.
[[nodiscard]] inline Score harmonic(std::size_t p) {
  Score r;
  for (std::size_t j = 1; j <= p; ++j) {
    r += Score(1, static_cast<Score::value_type>(j));
  }
  return r;
}

/// Sum over ballots of |W ∩ A_i|.
[[nodiscard]] inline Score av_score(const ApprovalProfile& profile, const Committee& w) {
  require_members_valid(w, profile.candidate_count(), "committee");
  Score::value_type total = 0;
  for (const auto& ballot : profile.ballots()) {
    total += static_cast<Score::value_type>(intersection_size(w, ballot));
  }
  return Score(total);
}

inline void require_no_empty_ballot(const ApprovalProfile& profile) {
  const auto& ballots = profile.ballots();
  for (std::size_t i = 0; i < ballots.size(); ++i) {
    if (ballots[i].empty()) {
      throw DomainError("SAV undefined for empty ballot (ballot " + std::to_string(i) + ")");
    }
  }
}

/// Sum over ballots of |W ∩ A_i| / |A_i|. Throws DomainError on an empty ballot.
[[nodiscard]] inline Score sav_score(const ApprovalProfile& profile, const Committee& w) {
  require_members_valid(w, profile.candidate_count(), "committee");
  require_no_empty_ballot(profile);
  Score total;
  for (const auto& ballot : profile.ballots()) {
    total += Score(static_cast<Score::value_type>(intersection_size(w, ballot)),
                   static_cast<Score::value_type>(ballot.size()));
  }
  return total;
}

/// Sum over ballots of r(|W ∩ A_i|). Empty ballots contribute nothing.
[[nodiscard]] inline Score pav_score(const ApprovalProfile& profile, const Committee& w) {
  require_members_valid(w, profile.candidate_count(), "committee");
  std::vector<Score> r{Score(0)};
  Score total;
  for (const auto& ballot : profile.ballots()) {
    const auto hits = intersection_size(w, ballot);
    while (r.size() <= hits) {
      r.push_back(r.back() + Score(1, static_cast<Score::value_type>(r.size())));
    }
    total += r[hits];
  }
  return total;
}

/// 1 / (1 + |W ∩ A_i|).
template <typename Tag>
[[nodiscard]] Score rav_weight(const ApprovalBallot& ballot, const CandidateSet<Tag>& w) {
  return Score(1, static_cast<Score::value_type>(1 + intersection_size(ballot, w)));
}

/// pav_score(W ∪ {c}) - pav_score(W), computed as the sum of RAV weights of
/// the ballots approving `c`.
[[nodiscard]] inline Score pav_gain(const ApprovalProfile& profile, const Committee& w, Candidate c) {
  if (w.contains(c)) {
    return Score(0);
  }
  Score gain;
  for (const auto& ballot : profile.ballots()) {
    if (ballot.contains(c)) {
      gain += rav_weight(ballot, w);
    }
  }
  return gain;
}

/// The k best candidates under (score descending, priority ascending).
[[nodiscard]] inline Committee top_k(const std::vector<Score>& per_candidate, std::size_t k, const PriorityOrder& t) {
  std::vector<Candidate> ranked(per_candidate.size());
  std::iota(ranked.begin(), ranked.end(), Candidate{0});
  std::sort(ranked.begin(), ranked.end(), [&](Candidate a, Candidate b) {
    if (per_candidate[a] != per_candidate[b]) {
      return per_candidate[a] > per_candidate[b];
    }
    return t.rank(a) < t.rank(b);
  });
  ranked.resize(std::min(k, ranked.size()));
  return Committee(std::move(ranked));
}

/// Approval count of every candidate.
[[nodiscard]] inline std::vector<Score> av_candidate_scores(const ApprovalProfile& profile) {
  std::vector<Score::value_type> counts(profile.candidate_count(), 0);
  for (const auto& ballot : profile.ballots()) {
    for (auto c : ballot) {
      ++counts.at(c);
    }
  }
  return {counts.begin(), counts.end()};
}

/// Sum of 1/|A_i| over the ballots approving each candidate.
[[nodiscard]] inline std::vector<Score> sav_candidate_scores(const ApprovalProfile& profile) {
  require_no_empty_ballot(profile);
  std::vector<Score> scores(profile.candidate_count());
  for (const auto& ballot : profile.ballots()) {
    const Score share(1, static_cast<Score::value_type>(ballot.size()));
    for (auto c : ballot) {
      scores.at(c) += share;
    }
  }
  return scores;
}

[[nodiscard]] inline Committee av_winners(const ElectionInstance& e) {
  require_valid(e);
  return top_k(av_candidate_scores(e.profile), e.k, e.tiebreak);
}

[[nodiscard]] inline Committee sav_winners(const ElectionInstance& e) {
  require_valid(e);
  return top_k(sav_candidate_scores(e.profile), e.k, e.tiebreak);
}

struct RavRound {
  Candidate selected = 0;
  /// Weighted score of every candidate still unelected at the start of the
  /// round, in tie-break order.
  std::vector<std::pair<Candidate, Score>> scores;

  friend bool operator==(const RavRound&, const RavRound&) = default;
};

struct RavTrace {
  std::vector<RavRound> rounds;

  friend bool operator==(const RavTrace&, const RavTrace&) = default;
};

struct RavOutcome {
  Committee winners;
  RavTrace trace;
};

/// k rounds of reweighted approval; each round elects the unelected candidate
/// with the largest weighted approval, breaking ties by priority.
[[nodiscard]] inline RavOutcome rav_winners(const ElectionInstance& e) {
  require_valid(e);
  const auto& ballots = e.profile.ballots();
  std::vector<std::size_t> elected_hits(ballots.size(), 0);
  std::vector<bool> elected(e.profile.candidate_count(), false);
  std::vector<Candidate> chosen;
  RavOutcome out;

  for (std::size_t round = 0; round < e.k; ++round) {
    std::vector<Score> weighted(e.profile.candidate_count());
    for (std::size_t i = 0; i < ballots.size(); ++i) {
      const Score weight(1, static_cast<Score::value_type>(1 + elected_hits[i]));
      for (auto c : ballots[i]) {
        if (!elected[c]) {
          weighted[c] += weight;
        }
      }
    }
    RavRound r;
    bool have_best = false;
    for (auto c : e.tiebreak.order()) {
      if (elected[c]) {
        continue;
      }
      r.scores.emplace_back(c, weighted[c]);
      // Tie-break order iteration: only a strictly larger score displaces.
      if (!have_best || weighted[c] > weighted[r.selected]) {
        r.selected = c;
        have_best = true;
      }
    }
    elected[r.selected] = true;
    chosen.push_back(r.selected);
    for (std::size_t i = 0; i < ballots.size(); ++i) {
      if (ballots[i].contains(r.selected)) {
        ++elected_hits[i];
      }
    }
    out.trace.rounds.push_back(std::move(r));
  }
  out.winners = Committee(std::move(chosen));
  return out;
}

}  // namespace approvalkit
