#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace approvalkit {

/// Printable candidate token as it appears in files and on the command line.
using CandidateId = std::string;

/// Position of a candidate in its profile's candidate list.
using Candidate = std::size_t;

/// Sorted, duplicate-free set of candidate indices. The tag keeps ballots and
/// committees from being mixed up by accident; convert explicitly with
/// `members()`.
template <typename Tag>
class CandidateSet {
 public:
  CandidateSet() = default;
  explicit CandidateSet(std::vector<Candidate> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }
  CandidateSet(std::initializer_list<Candidate> members) : CandidateSet(std::vector<Candidate>(members)) {}

  [[nodiscard]] const std::vector<Candidate>& members() const { return members_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }
  [[nodiscard]] bool contains(Candidate c) const {
    return std::binary_search(members_.begin(), members_.end(), c);
  }
  [[nodiscard]] auto begin() const { return members_.begin(); }
  [[nodiscard]] auto end() const { return members_.end(); }

  [[nodiscard]] CandidateSet with(Candidate c) const {
    auto m = members_;
    m.push_back(c);
    return CandidateSet(std::move(m));
  }

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
  friend auto operator<=>(const CandidateSet&, const CandidateSet&) = default;

 private:
  std::vector<Candidate> members_;
};

using ApprovalBallot = CandidateSet<struct BallotTag>;
using Committee = CandidateSet<struct CommitteeTag>;

template <typename A, typename B>
[[nodiscard]] std::size_t intersection_size(const CandidateSet<A>& a, const CandidateSet<B>& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

[[nodiscard]] inline bool is_valid_token(const std::string& token) {
  return !token.empty() &&
         std::none_of(token.begin(), token.end(), [](unsigned char ch) { return std::isspace(ch) || !std::isprint(ch); });
}

/// Candidate list plus the ordered multiset of approval ballots.
class ApprovalProfile {
 public:
  ApprovalProfile() = default;
  explicit ApprovalProfile(std::vector<CandidateId> candidates, std::vector<ApprovalBallot> ballots = {})
      : candidates_(std::move(candidates)), ballots_(std::move(ballots)) {
    for (Candidate c = 0; c < candidates_.size(); ++c) {
      index_.emplace(candidates_[c], c);
    }
  }

  /// Builds a profile from candidate tokens; throws InputError on an unknown token.
  static ApprovalProfile from_names(std::vector<CandidateId> candidates,
                                    const std::vector<std::vector<CandidateId>>& ballots) {
    ApprovalProfile p(std::move(candidates));
    for (const auto& names : ballots) {
      p.ballots_.push_back(p.ballot_from_names(names));
    }
    return p;
  }

  [[nodiscard]] const std::vector<CandidateId>& candidates() const { return candidates_; }
  [[nodiscard]] const std::vector<ApprovalBallot>& ballots() const { return ballots_; }
  [[nodiscard]] std::size_t candidate_count() const { return candidates_.size(); }
  [[nodiscard]] std::size_t voter_count() const { return ballots_.size(); }
  [[nodiscard]] const CandidateId& name(Candidate c) const { return candidates_.at(c); }

  [[nodiscard]] std::optional<Candidate> find(const CandidateId& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  [[nodiscard]] Candidate candidate(const CandidateId& name) const {
    if (auto c = find(name)) {
      return *c;
    }
    throw InputError("unknown candidate '" + name + "'");
  }

  template <typename Set = ApprovalBallot>
  [[nodiscard]] Set set_from_names(const std::vector<CandidateId>& names) const {
    std::vector<Candidate> members;
    members.reserve(names.size());
    for (const auto& n : names) {
      members.push_back(candidate(n));
    }
    return Set(std::move(members));
  }
  [[nodiscard]] ApprovalBallot ballot_from_names(const std::vector<CandidateId>& names) const {
    return set_from_names<ApprovalBallot>(names);
  }
  [[nodiscard]] Committee committee_from_names(const std::vector<CandidateId>& names) const {
    return set_from_names<Committee>(names);
  }

  /// Copy of this profile with `extra` appended after the existing ballots.
  [[nodiscard]] ApprovalProfile with_ballots(const std::vector<ApprovalBallot>& extra) const {
    ApprovalProfile p = *this;
    p.ballots_.insert(p.ballots_.end(), extra.begin(), extra.end());
    return p;
  }

  void add_ballot(ApprovalBallot ballot) { ballots_.push_back(std::move(ballot)); }

  friend bool operator==(const ApprovalProfile& a, const ApprovalProfile& b) {
    return a.candidates_ == b.candidates_ && a.ballots_ == b.ballots_;
  }

 private:
  std::vector<CandidateId> candidates_;
  std::vector<ApprovalBallot> ballots_;
  std::unordered_map<CandidateId, Candidate> index_;
};

/// Tie-breaking linear order, highest priority first.
class PriorityOrder {
 public:
  static constexpr std::size_t unranked = static_cast<std::size_t>(-1);

  PriorityOrder() = default;
  explicit PriorityOrder(std::vector<Candidate> order) : order_(std::move(order)) {
    std::size_t extent = 0;
    for (auto c : order_) {
      extent = std::max(extent, c + 1);
    }
    rank_.assign(extent, unranked);
    for (std::size_t r = 0; r < order_.size(); ++r) {
      if (rank_[order_[r]] == unranked) {
        rank_[order_[r]] = r;
      }
    }
  }

  /// Candidate 0 first, then 1, and so on.
  static PriorityOrder identity(std::size_t m) {
    std::vector<Candidate> order(m);
    for (std::size_t i = 0; i < m; ++i) {
      order[i] = i;
    }
    return PriorityOrder(std::move(order));
  }

  [[nodiscard]] const std::vector<Candidate>& order() const { return order_; }
  [[nodiscard]] std::size_t size() const { return order_.size(); }

  /// 0 for the highest priority candidate; InputError if `c` is not ranked.
  [[nodiscard]] std::size_t rank(Candidate c) const {
    if (c >= rank_.size() || rank_[c] == unranked) {
      throw InputError("candidate #" + std::to_string(c) + " is missing from the tie-break order");
    }
    return rank_[c];
  }

  [[nodiscard]] bool is_permutation_of(std::size_t m) const {
    if (order_.size() != m || rank_.size() != m) {
      return false;
    }
    return std::none_of(rank_.begin(), rank_.end(), [](std::size_t r) { return r == unranked; });
  }

  /// true when `a` beats `b` on a candidate tie.
  [[nodiscard]] bool prefers(Candidate a, Candidate b) const { return rank(a) < rank(b); }

  friend bool operator==(const PriorityOrder& a, const PriorityOrder& b) { return a.order_ == b.order_; }

 private:
  std::vector<Candidate> order_;
  std::vector<std::size_t> rank_;
};

/// Members of `w` listed from highest to lowest priority.
template <typename Tag>
[[nodiscard]] std::vector<Candidate> by_priority(const CandidateSet<Tag>& w, const PriorityOrder& t) {
  std::vector<Candidate> members = w.members();
  std::sort(members.begin(), members.end(), [&](Candidate a, Candidate b) { return t.rank(a) < t.rank(b); });
  return members;
}

/// Sorted rank sequence; comparing keys lexicographically compares committees.
template <typename Tag>
[[nodiscard]] std::vector<std::size_t> priority_key(const CandidateSet<Tag>& w, const PriorityOrder& t) {
  std::vector<std::size_t> key;
  key.reserve(w.size());
  for (auto c : w) {
    key.push_back(t.rank(c));
  }
  std::sort(key.begin(), key.end());
  return key;
}

enum class Preference { first, second, equal };

/// Committees compare by their members read in decreasing priority; the
/// lexicographically earlier sequence wins.
[[nodiscard]] inline Preference compare_committees(const Committee& x, const Committee& y, const PriorityOrder& t) {
  if (x.size() != y.size()) {
    throw InputError("compare_committees: committees differ in size");
  }
  const auto kx = priority_key(x, t);
  const auto ky = priority_key(y, t);
  if (kx < ky) {
    return Preference::first;
  }
  if (ky < kx) {
    return Preference::second;
  }
  return Preference::equal;
}

[[nodiscard]] inline bool committee_preferred(const Committee& x, const Committee& y, const PriorityOrder& t) {
  return compare_committees(x, y, t) == Preference::first;
}

struct ElectionInstance {
  ApprovalProfile profile;
  std::size_t k = 1;
  PriorityOrder tiebreak;

  friend bool operator==(const ElectionInstance&, const ElectionInstance&) = default;
};

/// Every broken invariant of `e`, in a stable order. Empty means valid.
[[nodiscard]] inline std::vector<std::string> validate_instance(const ElectionInstance& e) {
  std::vector<std::string> violations;
  const auto& cands = e.profile.candidates();
  const auto m = cands.size();
  if (m == 0) {
    violations.emplace_back("profile has no candidates");
  }
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t c = 0; c < m; ++c) {
    if (!is_valid_token(cands[c])) {
      violations.push_back("candidate #" + std::to_string(c) + " '" + cands[c] + "' is not a valid token");
    }
    if (!seen.emplace(cands[c], c).second) {
      violations.push_back("duplicate candidate '" + cands[c] + "'");
    }
  }
  if (e.k < 1) {
    violations.emplace_back("k must be at least 1");
  } else if (e.k > m) {
    violations.push_back("k exceeds candidate count (" + std::to_string(e.k) + " > " + std::to_string(m) + ")");
  }
  if (!e.tiebreak.is_permutation_of(m)) {
    violations.emplace_back("tiebreak is not a permutation of the candidates");
  }
  const auto& ballots = e.profile.ballots();
  for (std::size_t i = 0; i < ballots.size(); ++i) {
    for (auto c : ballots[i]) {
      if (c >= m) {
        violations.push_back("ballot " + std::to_string(i) + " mentions unknown candidate #" + std::to_string(c));
      }
    }
  }
  return violations;
}

inline void require_valid(const ElectionInstance& e) {
  const auto violations = validate_instance(e);
  if (violations.empty()) {
    return;
  }
  std::string message = "invalid election: ";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) {
      message += "; ";
    }
    message += violations[i];
  }
  throw InputError(message);
}

template <typename Tag>
void require_members_valid(const CandidateSet<Tag>& w, std::size_t m, const char* what) {
  for (auto c : w) {
    if (c >= m) {
      throw InputError(std::string(what) + " mentions unknown candidate #" + std::to_string(c));
    }
  }
}

}  // namespace approvalkit
