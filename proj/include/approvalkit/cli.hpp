#pragma once

#include "core.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "manipulation.hpp"
#include "pav_solver.hpp"
#include "reductions.hpp"
#include "rules.hpp"
#include "score.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace approvalkit::cli {

enum ExitCode : int { computed = 0, input_error = 1, goal_unreachable = 2, resource_guard = 3 };

using Document = nlohmann::ordered_json;

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = std::string(approvalkit::detail::trim(item));
    if (item.empty()) {
      throw InputError("empty entry in list '" + text + "'");
    }
    out.push_back(item);
  }
  return out;
}

template <typename Tag>
Document names(const CandidateSet<Tag>& w, const ElectionInstance& e) {
  Document arr = Document::array();
  for (auto c : by_priority(w, e.tiebreak)) {
    arr.push_back(e.profile.name(c));
  }
  return arr;
}

inline Document trace_document(const RavTrace& trace, const ElectionInstance& e) {
  Document rounds = Document::array();
  for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
    Document scores = Document::object();
    for (const auto& [c, s] : trace.rounds[r].scores) {
      scores[e.profile.name(c)] = s.to_string();
    }
    rounds.push_back(Document{{"round", r + 1},
                              {"selected", e.profile.name(trace.rounds[r].selected)},
                              {"scores", std::move(scores)}});
  }
  return rounds;
}

inline std::string scalar_text(const Document& v) {
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_null()) {
    return "none";
  }
  return v.dump();
}

inline bool all_scalars(const Document& arr) {
  for (const auto& v : arr) {
    if (v.is_structured()) {
      return false;
    }
  }
  return true;
}

inline void render_text(const Document& doc, const std::string& prefix, std::ostream& out) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const auto key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object()) {
      render_text(v, key, out);
    } else if (v.is_array() && all_scalars(v)) {
      out << key << ":";
      for (const auto& x : v) {
        out << " " << scalar_text(x);
      }
      out << "\n";
    } else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto item_key = key + "[" + std::to_string(i + 1) + "]";
        if (v[i].is_object()) {
          render_text(v[i], item_key, out);
        } else {
          out << item_key << ":";
          for (const auto& x : v[i]) {
            out << " " << scalar_text(x);
          }
          out << "\n";
        }
      }
    } else {
      out << key << ": " << scalar_text(v) << "\n";
    }
  }
}

inline void emit(const Document& doc, bool json, std::ostream& out) {
  if (json) {
    out << doc.dump(2) << "\n";
  } else {
    render_text(doc, "", out);
  }
}

inline std::optional<std::uint64_t> guard_from_environment() {
  const char* raw = std::getenv("APPROVALKIT_GUARD");
  if (raw == nullptr || *raw == '\0') {
    return std::nullopt;
  }
  const auto value = approvalkit::detail::parse_count(raw);
  if (!value) {
    throw InputError("APPROVALKIT_GUARD must be a non-negative integer, got '" + std::string(raw) + "'");
  }
  return *value;
}

inline ElectionInstance load_election(const std::string& path) {
  try {
    return parse_election(read_file(path));
  } catch (const ParseError& err) {
    throw InputError(path + ":" + err.what());
  }
}

inline Graph load_graph(const std::string& path) {
  try {
    return parse_graph(read_file(path));
  } catch (const ParseError& err) {
    throw InputError(path + ":" + err.what());
  }
}

inline Method parse_method(const std::string& name) {
  if (name == "exact") return Method::exhaustive;
  if (name == "bb") return Method::branch_and_bound;
  if (name == "greedy") return Method::greedy;
  throw InputError("unknown method '" + name + "' (expected exact, bb or greedy)");
}

inline UtilitySpec parse_utilities(const std::string& text, const ApprovalProfile& profile) {
  std::vector<Score> u(profile.candidate_count());
  for (const auto& item : split_list(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw InputError("utility entry '" + item + "' is not of the form candidate=value");
    }
    u[profile.candidate(item.substr(0, eq))] = parse_score(item.substr(eq + 1));
  }
  return UtilitySpec(std::move(u));
}

struct Settings {
  SolverOptions solver;
  ManipulationOptions manipulation;
};

inline Document winners_document(Rule rule, const std::string& method_name, const ElectionInstance& e,
                                 const Settings& settings) {
  Document doc{{"command", "winners"}, {"rule", std::string(to_string(rule))}};
  if (rule == Rule::pav) {
    const auto report = solve_pav(e, parse_method(method_name), settings.solver);
    doc["method"] = std::string(to_string(report.method));
    doc["k"] = e.k;
    doc["winners"] = names(report.winner, e);
    doc["score"] = report.score.to_string();
    doc["optimal"] = report.optimal;
    doc["nodes_explored"] = report.nodes_explored;
    return doc;
  }
  if (!method_name.empty() && method_name != "bb") {
    throw InputError("--method applies to pav only");
  }
  doc["method"] = rule == Rule::rav ? "sequential" : "top-k";
  doc["k"] = e.k;
  if (rule == Rule::rav) {
    const auto outcome = rav_winners(e);
    Score total;
    for (const auto& round : outcome.trace.rounds) {
      for (const auto& [c, s] : round.scores) {
        if (c == round.selected) {
          total += s;
        }
      }
    }
    doc["winners"] = names(outcome.winners, e);
    doc["score"] = total.to_string();
    doc["trace"] = trace_document(outcome.trace, e);
    return doc;
  }
  const auto w = rule == Rule::av ? av_winners(e) : sav_winners(e);
  doc["winners"] = names(w, e);
  doc["score"] = (rule == Rule::av ? av_score(e.profile, w) : sav_score(e.profile, w)).to_string();
  return doc;
}

inline Document score_document(Rule rule, const std::string& committee, const ElectionInstance& e) {
  require_valid(e);
  const auto w = e.profile.committee_from_names(split_list(committee));
  Score s;
  switch (rule) {
    case Rule::av:
      s = av_score(e.profile, w);
      break;
    case Rule::sav:
      s = sav_score(e.profile, w);
      break;
    case Rule::pav:
      s = pav_score(e.profile, w);
      break;
    case Rule::rav:
      throw InputError("rav is sequential and has no committee score; use pav");
  }
  return Document{{"command", "score"}, {"rule", std::string(to_string(rule))}, {"committee", names(w, e)},
                  {"score", s.to_string()}};
}

}  // namespace detail

/// Runs one command line (without the program name). The result document
/// goes to `out`, diagnostics to `err`; the return value is the exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact solvers for approval-based multi-winner elections", "approvalkit"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Emit the result document as JSON");

  std::string rule_name;
  std::string method_name = "bb";
  std::string input;
  std::string committee;
  std::string candidate;
  std::string target_set;
  std::string utilities;
  std::string truth;
  std::string graph_path;
  std::string out_path;
  std::size_t manipulators = 0;
  std::size_t target = 0;
  bool identical = false;

  auto* winners = app.add_subcommand("winners", "Compute the winning committee");
  winners->add_option("--rule", rule_name, "av, sav, pav or rav")->required();
  winners->add_option("--method", method_name, "PAV method: exact, bb or greedy")->capture_default_str();
  winners->add_option("--input", input, "Election file")->required();
  winners->add_flag("--json", json);

  auto* score = app.add_subcommand("score", "Score a given committee");
  score->add_option("--rule", rule_name, "av, sav or pav")->required();
  score->add_option("--committee", committee, "Comma-separated candidates")->required();
  score->add_option("--input", input, "Election file")->required();
  score->add_flag("--json", json);

  auto* manipulate = app.add_subcommand("manipulate", "Search for manipulating ballots");
  manipulate->require_subcommand(1);
  auto add_manipulation = [&](const std::string& name, const std::string& description) {
    auto* sub = manipulate->add_subcommand(name, description);
    sub->add_option("--rule", rule_name, "av, sav, pav or rav")->required();
    sub->add_option("--manipulators", manipulators, "Number of extra ballots")->required();
    sub->add_option("--input", input, "Election file holding the fixed ballots")->required();
    sub->add_flag("--identical", identical, "Only try tuples of identical ballots");
    sub->add_flag("--json", json);
    return sub;
  };
  auto* wm = add_manipulation("wm", "Winner manipulation");
  wm->add_option("--candidate", candidate, "Candidate to get elected")->required();
  auto* wsm = add_manipulation("wsm", "Winning-set manipulation");
  wsm->add_option("--set", target_set, "Comma-separated target committee")->required();
  auto* br = add_manipulation("best-response", "Utility-maximizing ballots");
  br->add_option("--utilities", utilities, "c=v,... (unlisted candidates get 0)")->required();

  auto* reduce = app.add_subcommand("reduce", "Generate hardness instances");
  reduce->require_subcommand(1);
  auto* is2pav = reduce->add_subcommand("is2pav", "Independent set to PAV winner determination");
  is2pav->add_option("--graph", graph_path, "Graph file")->required();
  is2pav->add_option("--target", target, "Independent set size t")->required();
  is2pav->add_option("--out", out_path, "Write the election file here");
  is2pav->add_flag("--json", json);

  auto* verify = app.add_subcommand("verify", "Check a reduction on one instance");
  verify->require_subcommand(1);
  auto* verify_reduction_cmd = verify->add_subcommand("reduction", "Independent set vs PAV threshold");
  verify_reduction_cmd->add_option("--graph", graph_path, "Graph file")->required();
  verify_reduction_cmd->add_option("--target", target, "Independent set size t")->required();
  verify_reduction_cmd->add_flag("--json", json);

  auto* audit = app.add_subcommand("audit", "Look for a profitable deviation of one extra agent");
  audit->add_option("--rule", rule_name, "av, sav, pav or rav")->required();
  audit->add_option("--truth", truth, "Comma-separated utility-1 candidates")->required();
  audit->add_option("--input", input, "Election file holding the other ballots")->required();
  audit->add_flag("--json", json);

  std::vector<const char*> argv{"approvalkit"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const auto code = app.exit(e, out, err);
    return code == 0 ? ExitCode::computed : ExitCode::input_error;
  }

  try {
    detail::Settings settings;
    if (const auto guard = detail::guard_from_environment()) {
      settings.solver.enumeration_guard = *guard;
      settings.manipulation.tuple_guard = *guard;
    }
    settings.manipulation.solver = settings.solver;
    settings.manipulation.identical_ballots_only = identical;

    if (winners->parsed()) {
      const auto e = detail::load_election(input);
      detail::emit(detail::winners_document(parse_rule(rule_name), winners->count("--method") ? method_name : "bb", e,
                                            settings),
                   json, out);
      return ExitCode::computed;
    }
    if (score->parsed()) {
      detail::emit(detail::score_document(parse_rule(rule_name), committee, detail::load_election(input)), json, out);
      return ExitCode::computed;
    }
    if (manipulate->parsed()) {
      const auto e = detail::load_election(input);
      ManipulationQuery q{parse_rule(rule_name), e.profile, e.k, manipulators, IncludeGoal{}, e.tiebreak};
      Document doc{{"command", "manipulate"}};
      ManipulationResult result;
      if (wm->parsed()) {
        q.goal = IncludeGoal{e.profile.candidate(candidate)};
        doc["problem"] = "wm";
        doc["rule"] = std::string(to_string(q.rule));
        doc["candidate"] = candidate;
        result = solve_wm(q, settings.manipulation);
      } else if (wsm->parsed()) {
        const auto set = e.profile.committee_from_names(detail::split_list(target_set));
        q.goal = ExactSetGoal{set};
        doc["problem"] = "wsm";
        doc["rule"] = std::string(to_string(q.rule));
        doc["set"] = detail::names(set, e);
        result = solve_wsm(q, settings.manipulation);
      } else {
        const auto u = detail::parse_utilities(utilities, e.profile);
        q.goal = MaximizeGoal{u};
        doc["problem"] = "best-response";
        doc["rule"] = std::string(to_string(q.rule));
        Document ud = Document::object();
        for (auto c : e.tiebreak.order()) {
          ud[e.profile.name(c)] = u.utilities()[c].to_string();
        }
        doc["utilities"] = std::move(ud);
        result = best_response(q, settings.manipulation);
      }
      doc["manipulators"] = manipulators;
      doc["identical_only"] = identical;
      doc["success"] = result.success;
      Document witness = Document::array();
      for (const auto& b : result.witness) {
        witness.push_back(detail::names(b, e));
      }
      doc["witness"] = std::move(witness);
      doc["outcome"] = result.outcome ? detail::names(*result.outcome, e) : Document();
      if (result.achieved_utility) {
        doc["achieved_utility"] = result.achieved_utility->to_string();
      }
      doc["search_space"] = result.search_space;
      detail::emit(doc, json, out);
      return result.success ? ExitCode::computed : ExitCode::goal_unreachable;
    }
    if (is2pav->parsed()) {
      const auto g = detail::load_graph(graph_path);
      const auto instance = is_to_pav(g, target);
      const auto text = render_election(instance.election);
      Document doc{{"command", "reduce"},
                   {"reduction", "is2pav"},
                   {"vertices", g.vertex_count()},
                   {"edges", g.edges().size()},
                   {"max_degree", instance.max_degree},
                   {"target", target},
                   {"k", instance.election.k},
                   {"threshold", instance.threshold.to_string()},
                   {"candidates", instance.election.profile.candidate_count()},
                   {"dummies", instance.dummy_candidates.size()},
                   {"ballots", instance.election.profile.voter_count()}};
      if (out_path.empty()) {
        if (json) {
          doc["election"] = text;
          detail::emit(doc, true, out);
        } else {
          out << "# threshold: " << instance.threshold.to_string() << "\n" << text;
        }
        return ExitCode::computed;
      }
      std::ofstream file(out_path, std::ios::binary);
      if (!file || !(file << text) || !file.flush()) {
        throw InputError("cannot write '" + out_path + "'");
      }
      doc["file"] = out_path;
      detail::emit(doc, json, out);
      return ExitCode::computed;
    }
    if (verify_reduction_cmd->parsed()) {
      const auto g = detail::load_graph(graph_path);
      const auto verdict = verify_reduction(g, target, settings.solver);
      const auto instance = is_to_pav(g, target);
      Document doc{{"command", "verify"},
                   {"reduction", "is2pav"},
                   {"target", target},
                   {"threshold", verdict.threshold.to_string()},
                   {"optimum", verdict.optimum.score.to_string()},
                   {"winners", detail::names(verdict.optimum.winner, instance.election)},
                   {"reaches_threshold", verdict.reaches_threshold},
                   {"independent_set", verdict.independent_set},
                   {"holds", verdict.holds}};
      detail::emit(doc, json, out);
      return verdict.holds ? ExitCode::computed : ExitCode::goal_unreachable;
    }
    if (audit->parsed()) {
      const auto e = detail::load_election(input);
      const auto rule = parse_rule(rule_name);
      const auto liked = e.profile.ballot_from_names(detail::split_list(truth));
      const auto truth_spec = UtilitySpec::dichotomous_from(liked, e.profile.candidate_count());
      const auto deviation = audit_strategyproofness(rule, e.profile, e.k, e.tiebreak, truth_spec, settings.solver);
      Document doc{{"command", "audit"}, {"rule", std::string(to_string(rule))}, {"truth", detail::names(liked, e)}};
      if (deviation) {
        doc["truthful_outcome"] = detail::names(deviation->truthful_outcome, e);
        doc["truthful_utility"] = deviation->truthful_utility.to_string();
        doc["strategyproof"] = false;
        doc["deviation"] = Document{{"ballot", detail::names(deviation->ballot, e)},
                                    {"outcome", detail::names(deviation->outcome, e)},
                                    {"utility", deviation->utility.to_string()},
                                    {"gain", deviation->gain().to_string()},
                                    {"approves_zero_utility", deviation->approves_zero_utility},
                                    {"drops_positive_utility", deviation->drops_positive_utility}};
      } else {
        const auto w = elect(rule, ElectionInstance{e.profile.with_ballots({liked}), e.k, e.tiebreak}, settings.solver);
        doc["truthful_outcome"] = detail::names(w, e);
        doc["truthful_utility"] = truth_spec.of(w).to_string();
        doc["strategyproof"] = true;
        doc["deviation"] = nullptr;
      }
      detail::emit(doc, json, out);
      return ExitCode::computed;
    }
  } catch (const ResourceError& e) {
    err << "approvalkit: " << e.what() << "\n";
    return ExitCode::resource_guard;
  } catch (const std::overflow_error& e) {
    err << "approvalkit: " << e.what() << "\n";
    return ExitCode::resource_guard;
  } catch (const std::exception& e) {
    err << "approvalkit: " << e.what() << "\n";
    return ExitCode::input_error;
  }
  return ExitCode::input_error;
}

}  // namespace approvalkit::cli
