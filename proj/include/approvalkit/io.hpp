#pragma once

#include "core.hpp"
#include "errors.hpp"
#include "reductions.hpp"

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace approvalkit {

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : InputError("line " + std::to_string(line) + ": " + message), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

struct Line {
  std::size_t number;
  std::string_view text;
};

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) {
    return {};
  }
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

/// Non-blank lines that are not '#' comments, trimmed.
inline std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++number;
    const auto line = trim(raw);
    if (!line.empty() && line.front() != '#') {
      out.push_back({number, line});
    }
    if (nl == std::string_view::npos) {
      break;
    }
    pos = nl + 1;
  }
  return out;
}

inline std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) {
    out.push_back(tok);
  }
  return out;
}

/// If `line` is "<key>: rest", returns rest.
inline std::optional<std::string_view> field(std::string_view line, std::string_view key) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key || line[key.size()] != ':') {
    return std::nullopt;
  }
  return line.substr(key.size() + 1);
}

inline std::optional<std::size_t> parse_count(std::string_view s) {
  s = trim(s);
  std::size_t value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    return std::nullopt;
  }
  return value;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) {
      out += sep;
    }
    out += parts[i];
  }
  return out;
}

}  // namespace detail

/// Parses the line-oriented election format:
///
///     # comment
///     candidates: a b c
///     k: 2
///     tiebreak: a b c
///     3 * ballot: a
///     ballot: b c
///     ballot:
///
/// `candidates:` must be the first content line; `k:` and `tiebreak:` appear
/// once each before any ballot. An empty `ballot:` is an empty ballot.
[[nodiscard]] inline ElectionInstance parse_election(std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) {
    throw ParseError(1, "missing 'candidates:' header");
  }
  const auto cand_field = detail::field(lines.front().text, "candidates");
  if (!cand_field) {
    throw ParseError(lines.front().number, "first line must be 'candidates:'");
  }
  auto names = detail::tokens(*cand_field);
  if (names.empty()) {
    throw ParseError(lines.front().number, "no candidates listed");
  }
  {
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
      if (!seen.insert(n).second) {
        throw ParseError(lines.front().number, "duplicate candidate '" + n + "'");
      }
    }
  }
  ApprovalProfile profile(names);
  std::optional<std::size_t> k;
  std::optional<PriorityOrder> tiebreak;

  auto resolve = [&](const detail::Line& line, const std::vector<std::string>& toks) {
    std::vector<Candidate> members;
    for (const auto& tok : toks) {
      const auto c = profile.find(tok);
      if (!c) {
        throw ParseError(line.number, "unknown candidate '" + tok + "'");
      }
      members.push_back(*c);
    }
    return members;
  };

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    if (detail::field(line.text, "candidates")) {
      throw ParseError(line.number, "'candidates:' given twice");
    }
    if (auto rest = detail::field(line.text, "k")) {
      if (k) {
        throw ParseError(line.number, "'k:' given twice");
      }
      k = detail::parse_count(*rest);
      if (!k || *k < 1 || *k > names.size()) {
        throw ParseError(line.number, "k must be an integer in 1.." + std::to_string(names.size()));
      }
      continue;
    }
    if (auto rest = detail::field(line.text, "tiebreak")) {
      if (tiebreak) {
        throw ParseError(line.number, "'tiebreak:' given twice");
      }
      PriorityOrder order(resolve(line, detail::tokens(*rest)));
      if (!order.is_permutation_of(names.size())) {
        throw ParseError(line.number, "tiebreak must list every candidate exactly once");
      }
      tiebreak = std::move(order);
      continue;
    }

    const auto at = line.text.find("ballot:");
    if (at == std::string_view::npos) {
      throw ParseError(line.number, "unrecognized line '" + std::string(line.text) + "'");
    }
    std::size_t multiplicity = 1;
    if (const auto prefix = detail::trim(line.text.substr(0, at)); !prefix.empty()) {
      const auto count = prefix.back() == '*' ? detail::parse_count(prefix.substr(0, prefix.size() - 1))
                                              : std::optional<std::size_t>{};
      if (!count || *count < 1) {
        throw ParseError(line.number, "expected '<count> * ballot:' with a positive count");
      }
      multiplicity = *count;
    }
    const auto rest = line.text.substr(at + 7);
    if (!k || !tiebreak) {
      throw ParseError(line.number, "ballot before the 'k:' and 'tiebreak:' headers");
    }
    auto members = resolve(line, detail::tokens(rest));
    const ApprovalBallot ballot(members);
    if (ballot.size() != members.size()) {
      throw ParseError(line.number, "candidate repeated within a ballot");
    }
    for (std::size_t r = 0; r < multiplicity; ++r) {
      profile.add_ballot(ballot);
    }
  }
  if (!k) {
    throw ParseError(lines.back().number, "missing 'k:' header");
  }
  if (!tiebreak) {
    throw ParseError(lines.back().number, "missing 'tiebreak:' header");
  }
  return ElectionInstance{std::move(profile), *k, std::move(*tiebreak)};
}

/// Canonical text: headers, then ballots with runs of equal consecutive
/// ballots folded into "N * ballot:" and members in candidate-list order.
[[nodiscard]] inline std::string render_election(const ElectionInstance& e) {
  const auto& p = e.profile;
  std::string out = "candidates: " + detail::join(p.candidates()) + "\n";
  out += "k: " + std::to_string(e.k) + "\n";
  std::vector<std::string> order;
  for (auto c : e.tiebreak.order()) {
    order.push_back(p.name(c));
  }
  out += "tiebreak: " + detail::join(order) + "\n";
  const auto& ballots = p.ballots();
  for (std::size_t i = 0; i < ballots.size();) {
    std::size_t run = 1;
    while (i + run < ballots.size() && ballots[i + run] == ballots[i]) {
      ++run;
    }
    if (run > 1) {
      out += std::to_string(run) + " * ";
    }
    out += "ballot:";
    for (auto c : ballots[i]) {
      out += " " + p.name(c);
    }
    out += "\n";
    i += run;
  }
  return out;
}

/// "vertices: N" followed by one "edge: u v" line per edge.
[[nodiscard]] inline Graph parse_graph(std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) {
    throw ParseError(1, "missing 'vertices:' header");
  }
  const auto header = detail::field(lines.front().text, "vertices");
  if (!header) {
    throw ParseError(lines.front().number, "first line must be 'vertices:'");
  }
  const auto n = detail::parse_count(*header);
  if (!n) {
    throw ParseError(lines.front().number, "vertex count must be a non-negative integer");
  }
  std::vector<Graph::Edge> edges;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    const auto rest = detail::field(line.text, "edge");
    if (!rest) {
      throw ParseError(line.number, "expected 'edge: u v'");
    }
    const auto toks = detail::tokens(*rest);
    std::optional<std::size_t> u;
    std::optional<std::size_t> v;
    if (toks.size() == 2) {
      u = detail::parse_count(toks[0]);
      v = detail::parse_count(toks[1]);
    }
    if (!u || !v) {
      throw ParseError(line.number, "expected 'edge: u v'");
    }
    if (*u >= *n || *v >= *n) {
      throw ParseError(line.number, "vertex outside 0.." + std::to_string(*n == 0 ? 0 : *n - 1));
    }
    if (*u == *v) {
      throw ParseError(line.number, "self-loop on vertex " + std::to_string(*u));
    }
    const Graph::Edge e{std::min(*u, *v), std::max(*u, *v)};
    if (std::find(edges.begin(), edges.end(), e) != edges.end()) {
      throw ParseError(line.number, "duplicate edge");
    }
    edges.push_back(e);
  }
  if (*n > 64) {
    throw ParseError(lines.front().number, "graphs are limited to 64 vertices");
  }
  return Graph(*n, std::move(edges));
}

[[nodiscard]] inline std::string render_graph(const Graph& g) {
  std::string out = "vertices: " + std::to_string(g.vertex_count()) + "\n";
  for (auto [u, v] : g.edges()) {
    out += "edge: " + std::to_string(u) + " " + std::to_string(v) + "\n";
  }
  return out;
}

[[nodiscard]] inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace approvalkit
