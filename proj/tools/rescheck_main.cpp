// Command-line front end for LTLf strategy classification and responsibility
// verdicts over problem files.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <future>
#include <iostream>

#include "rescheck/oracle.hpp"
#include "rescheck/problem.hpp"

using namespace rescheck;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInternal = 4;

struct CheckRequest {
  std::string kind;
  std::string file;
  std::string goal;
  std::string env;
  std::string strategy;
  std::string env_strategy;
  std::string history;
  bool oracle = false;
  bool as_json = false;
  bool full_play = false;
  int horizon = 0;  // 0 = sufficient_horizon
};

bool is_checker_kind(const std::string& k) {
  return k == "win" || k == "dom" || k == "be" || k == "weak" || k == "exists-weak";
}

std::string trace_text(const Trace& t) { return trace_to_string(t); }

void print_verdict_text(const Verdict& v, const AtomPartition& p, const std::string& kind) {
  std::cout << "kind: " << kind << "\n";
  std::cout << "decision: " << (v.decision ? "true" : "false") << "\n";
  if (v.witness) {
    if (std::holds_alternative<Trace>(*v.witness)) {
      std::cout << "witness trace: " << trace_text(std::get<Trace>(*v.witness)) << "\n";
    } else if (std::holds_alternative<TracePair>(*v.witness)) {
      const auto& [pi, alt] = std::get<TracePair>(*v.witness);
      std::cout << "witness play:        " << trace_text(pi) << "\n";
      std::cout << "witness alternative: " << trace_text(alt) << "\n";
    } else {
      const auto& g = std::get<GamePathWitness>(*v.witness);
      std::cout << "witness game state " << g.state << " (" << g.state_class
                << "), path: " << trace_text(Trace(p, g.letters)) << "\n";
    }
  }
  std::cout << "time: " << v.diagnostics.wall_time_ms << " ms\n";
}

void print_report_text(const ResponsibilityReport& r, const AtomPartition& p) {
  std::cout << "kind: " << responsibility_kind_name(r.kind) << "\n";
  std::cout << "decision: " << (r.decision ? "true" : "false") << "\n";
  std::cout << "goal: " << r.goal << "\n";
  std::cout << "env: " << r.env_spec << "\n";
  for (const auto& [label, verdict] : r.parts) {
    std::cout << "part " << label << ": " << (verdict.decision ? "true" : "false");
    if (verdict.witness && std::holds_alternative<Trace>(*verdict.witness)) {
      std::cout << "  witness: " << trace_text(std::get<Trace>(*verdict.witness));
    } else if (verdict.witness && std::holds_alternative<TracePair>(*verdict.witness)) {
      const auto& [pi, alt] = std::get<TracePair>(*verdict.witness);
      std::cout << "  play: " << trace_text(pi) << "  alternative: " << trace_text(alt);
    }
    std::cout << "\n";
  }
  std::cout << "time: " << r.wall_time_ms << " ms\n";
  (void)p;
}

bool oracle_counterpart(const CheckRequest& req, const Problem& prob, const Formula& goal,
                        const Formula& env, const AgentStrategy* strat) {
  int horizon = req.horizon;
  if (horizon == 0) {
    horizon = strat ? sufficient_horizon(goal, env, *strat,
                                         req.history.empty()
                                             ? 0
                                             : prob.history(req.history).length())
                    : sufficient_horizon(goal, env, prob.partition);
  }
  BoundedStrategySpace space(prob.partition, horizon);
  if (req.kind == "win") return oracle_check_win(goal, env, *strat, space);
  if (req.kind == "weak") return oracle_check_weak(goal, env, *strat, space);
  if (req.kind == "dom") return oracle_check_dom(goal, env, *strat, space);
  if (req.kind == "be") return oracle_check_be(goal, env, *strat, space);
  if (req.kind == "exists-weak") return oracle_exists_weak(goal, env, space);
  OracleExtras extras;
  History h;
  if (!req.history.empty()) {
    h = prob.history(req.history);
    extras.history = &h;
  }
  EnvStrategy es;
  if (!req.env_strategy.empty()) {
    es = prob.env_strategy(req.env_strategy);
    extras.env_strategy = &es;
  }
  ResponsibilityKind kind;
  if (req.kind == "pr-ant") kind = ResponsibilityKind::PassiveAnticipation;
  else if (req.kind == "ipr-ant") kind = ResponsibilityKind::InexcusablePassiveAnticipation;
  else if (req.kind == "pr-attr") kind = ResponsibilityKind::PassiveAttributionOnHistory;
  else if (req.kind == "ipr-attr") kind = ResponsibilityKind::InexcusablePassiveAttributionOnHistory;
  else if (req.kind == "ara") kind = ResponsibilityKind::Active;
  else kind = ResponsibilityKind::PassiveAttributionVsEnv;
  return oracle_responsibility(kind, goal, env, *strat, extras, space);
}

int run_check(const CheckRequest& req) {
  Problem prob = Problem::from_file(req.file);
  Formula goal = prob.formula(req.goal);
  Formula env = prob.formula(req.env);
  const AgentStrategy* strat = nullptr;
  if (!req.strategy.empty()) strat = &prob.strategy(req.strategy);

  bool decision = false;
  json output;
  if (is_checker_kind(req.kind)) {
    if (req.kind != "exists-weak" && !strat) {
      std::cerr << "error: --strategy is required for kind " << req.kind << "\n";
      return kExitUsage;
    }
    Verdict v;
    if (req.kind == "win") v = check_win(goal, env, *strat);
    else if (req.kind == "dom") v = check_dom(goal, env, *strat);
    else if (req.kind == "be") v = check_be(goal, env, *strat);
    else if (req.kind == "weak") v = check_weak(goal, env, *strat);
    else v = exists_weak(goal, env, prob.partition);
    decision = v.decision;
    if (req.as_json) {
      output = verdict_to_json(v, prob.partition, req.kind);
    } else {
      print_verdict_text(v, prob.partition, req.kind);
    }
  } else {
    if (!strat) {
      std::cerr << "error: --strategy is required for kind " << req.kind << "\n";
      return kExitUsage;
    }
    ResponsibilityChecker checker;
    ResponsibilityReport r;
    if (req.kind == "pr-ant") {
      r = checker.anticipate_passive(goal, env, *strat);
    } else if (req.kind == "ipr-ant") {
      r = checker.anticipate_inexcusable(goal, env, *strat);
    } else if (req.kind == "pr-attr" || req.kind == "ipr-attr") {
      if (req.history.empty()) {
        std::cerr << "error: --history is required for kind " << req.kind << "\n";
        return kExitUsage;
      }
      const History& h = prob.history(req.history);
      r = req.kind == "pr-attr"
              ? checker.attribute_passive_on_history(goal, env, *strat, h, req.full_play)
              : checker.attribute_inexcusable_on_history(goal, env, *strat, h, req.full_play);
    } else if (req.kind == "ara") {
      r = checker.active_responsibility(goal, env, *strat);
    } else if (req.kind == "pr-attr-vs-env") {
      if (req.env_strategy.empty()) {
        std::cerr << "error: --env-strategy is required for kind pr-attr-vs-env\n";
        return kExitUsage;
      }
      r = checker.attribute_passive_vs_env(goal, env, *strat, prob.env_strategy(req.env_strategy));
    } else {
      std::cerr << "error: unknown kind '" << req.kind << "'\n";
      return kExitUsage;
    }
    decision = r.decision;
    if (req.as_json) {
      output = report_to_json(r, prob.partition);
    } else {
      print_report_text(r, prob.partition);
    }
  }

  if (req.oracle) {
    bool reference = oracle_counterpart(req, prob, goal, env, strat);
    if (reference != decision) {
      std::cerr << "ORACLE DISAGREEMENT: checker says " << decision << ", oracle says "
                << reference << "\n";
      return kExitInternal;
    }
    if (req.as_json) output["oracleConfirmed"] = true;
    else std::cout << "oracle: agrees\n";
  }
  if (req.as_json) std::cout << output.dump(2) << "\n";
  return kExitOk;
}

int run_validate(const std::string& file) {
  Problem prob = Problem::from_file(file);
  std::cout << "ok: " << prob.formulas.size() << " formulas, " << prob.strategies.size()
            << " strategies, " << prob.env_strategies.size() << " environment strategies, "
            << prob.histories.size() << " histories\n";
  return kExitOk;
}

int run_automaton(const std::string& file, const std::string& formula_text,
                  const std::string& dot_path, bool regions) {
  Problem prob = Problem::from_file(file);
  Formula f = prob.formula(formula_text);
  Dfa d = to_dfa(f, prob.partition);
  std::vector<std::string> notes;
  if (regions) {
    notes.resize(static_cast<size_t>(d.num_states));
    std::vector<bool> env_region = env_win_region(d);
    GameArena arena{restrict(d, env_region)};
    std::vector<bool> win = agent_win_region(arena);
    std::vector<bool> weak = weak_region(arena);
    for (int s = 0; s < d.num_states; ++s) {
      std::string& n = notes[static_cast<size_t>(s)];
      if (env_region[static_cast<size_t>(s)]) n += "envwin";
      if (win[static_cast<size_t>(s)]) n += n.empty() ? "win" : ",win";
      else if (weak[static_cast<size_t>(s)]) n += n.empty() ? "weak" : ",weak";
    }
  }
  std::string dot = to_dot(d, render(f), notes);
  if (dot_path.empty() || dot_path == "-") {
    std::cout << dot;
  } else {
    std::ofstream out(dot_path);
    if (!out) throw ValidationError("cannot write '" + dot_path + "'");
    out << dot;
    std::cout << "wrote " << dot_path << " (" << d.num_states << " states)\n";
  }
  return kExitOk;
}

int run_check_all(const std::string& file, const std::string& env_name, int jobs, bool as_json) {
  Problem prob = Problem::from_file(file);
  Formula env = prob.formula(env_name);
  struct Task {
    std::string goal, strategy, kind;
  };
  std::vector<Task> tasks;
  const std::vector<std::string> kinds = {"win", "dom", "be", "weak", "pr-ant", "ipr-ant", "ara"};
  for (const auto& [gname, goal] : prob.formulas) {
    if (gname == env_name) continue;
    for (const auto& [sname, strat] : prob.strategies) {
      for (const auto& kind : kinds) tasks.push_back({gname, sname, kind});
    }
  }
  auto evaluate_task = [&](const Task& t) -> bool {
    Formula goal = prob.formula(t.goal);
    const AgentStrategy& strat = prob.strategy(t.strategy);
    if (t.kind == "win") return check_win(goal, env, strat).decision;
    if (t.kind == "dom") return check_dom(goal, env, strat).decision;
    if (t.kind == "be") return check_be(goal, env, strat).decision;
    if (t.kind == "weak") return check_weak(goal, env, strat).decision;
    if (t.kind == "pr-ant") return anticipate_passive(goal, env, strat).decision;
    if (t.kind == "ipr-ant") return anticipate_inexcusable(goal, env, strat).decision;
    return active_responsibility(goal, env, strat).decision;
  };
  std::vector<bool> results(tasks.size());
  if (jobs > 1) {
    // Independent pure checks; fan out in batches.
    std::vector<std::future<bool>> futures(tasks.size());
    size_t next = 0;
    while (next < tasks.size()) {
      size_t batch_end = std::min(tasks.size(), next + static_cast<size_t>(jobs));
      for (size_t i = next; i < batch_end; ++i) {
        futures[i] = std::async(std::launch::async, evaluate_task, tasks[i]);
      }
      for (size_t i = next; i < batch_end; ++i) results[i] = futures[i].get();
      next = batch_end;
    }
  } else {
    for (size_t i = 0; i < tasks.size(); ++i) results[i] = evaluate_task(tasks[i]);
  }
  if (as_json) {
    json out = json::array();
    for (size_t i = 0; i < tasks.size(); ++i) {
      out.push_back(json{{"goal", tasks[i].goal},
                         {"strategy", tasks[i].strategy},
                         {"kind", tasks[i].kind},
                         {"decision", static_cast<bool>(results[i])}});
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (size_t i = 0; i < tasks.size(); ++i) {
      std::cout << tasks[i].kind << " " << tasks[i].goal << " / " << tasks[i].strategy << ": "
                << (results[i] ? "true" : "false") << "\n";
    }
  }
  return kExitOk;
}

int run_oracle_suite(const std::string& file, const std::string& env_name, int horizon_flag,
                     int budget_cap) {
  Problem prob = Problem::from_file(file);
  Formula env = prob.formula(env_name);
  int checks = 0, skipped = 0;
  bool all_agree = true;
  auto report = [&](const std::string& what, bool checker, bool oracle) {
    ++checks;
    bool ok = checker == oracle;
    all_agree = all_agree && ok;
    std::cout << (ok ? "agree " : "DISAGREE ") << what << ": checker=" << checker
              << " oracle=" << oracle << "\n";
  };
  for (const auto& [gname, goal] : prob.formulas) {
    if (gname == env_name) continue;
    for (const auto& [sname, strat] : prob.strategies) {
      int horizon = horizon_flag > 0 ? horizon_flag : sufficient_horizon(goal, env, strat);
      double env_count = BoundedStrategySpace::env_tree_count(
          1 << prob.partition.agent_count(), 1 << prob.partition.env_count(), horizon);
      double agent_count = BoundedStrategySpace::agent_tree_count(
          1 << prob.partition.agent_count(), 1 << prob.partition.env_count(), horizon);
      if (env_count > budget_cap || agent_count > budget_cap) {
        std::cout << "skip " << gname << "/" << sname << ": horizon " << horizon
                  << " beyond the enumeration budget\n";
        ++skipped;
        continue;
      }
      BoundedStrategySpace space(prob.partition, horizon);
      std::string tag = gname + "/" + sname;
      report("win " + tag, check_win(goal, env, strat).decision,
             oracle_check_win(goal, env, strat, space));
      report("weak " + tag, check_weak(goal, env, strat).decision,
             oracle_check_weak(goal, env, strat, space));
      report("dom " + tag, check_dom(goal, env, strat).decision,
             oracle_check_dom(goal, env, strat, space));
      report("be " + tag, check_be(goal, env, strat).decision,
             oracle_check_be(goal, env, strat, space));
      OracleExtras none;
      report("pr-ant " + tag, anticipate_passive(goal, env, strat).decision,
             oracle_responsibility(ResponsibilityKind::PassiveAnticipation, goal, env, strat,
                                   none, space));
      report("ipr-ant " + tag, anticipate_inexcusable(goal, env, strat).decision,
             oracle_responsibility(ResponsibilityKind::InexcusablePassiveAnticipation, goal, env,
                                   strat, none, space));
      report("ara " + tag, active_responsibility(goal, env, strat).decision,
             oracle_responsibility(ResponsibilityKind::Active, goal, env, strat, none, space));
      for (const auto& [hname, h] : prob.histories) {
        if (!is_consistent(h, strat) || h.length() > horizon) continue;
        OracleExtras extras;
        extras.history = &h;
        report("pr-attr " + tag + "@" + hname,
               attribute_passive_on_history(goal, env, strat, h).decision,
               oracle_responsibility(ResponsibilityKind::PassiveAttributionOnHistory, goal, env,
                                     strat, extras, space));
        report("ipr-attr " + tag + "@" + hname,
               attribute_inexcusable_on_history(goal, env, strat, h).decision,
               oracle_responsibility(ResponsibilityKind::InexcusablePassiveAttributionOnHistory,
                                     goal, env, strat, extras, space));
      }
      for (const auto& [ename, estrat] : prob.env_strategies) {
        if (!env_enforces(estrat, env)) continue;
        OracleExtras extras;
        extras.env_strategy = &estrat;
        report("pr-attr-vs-env " + tag + "@" + ename,
               attribute_passive_vs_env(goal, env, strat, estrat).decision,
               oracle_responsibility(ResponsibilityKind::PassiveAttributionVsEnv, goal, env,
                                     strat, extras, space));
      }
    }
  }
  std::cout << checks << " checks, " << skipped << " skipped, "
            << (all_agree ? "all agree" : "DISAGREEMENTS FOUND") << "\n";
  return all_agree ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTLf strategy classification and responsibility verdicts"};
  app.require_subcommand(1);

  CheckRequest req;
  CLI::App* check = app.add_subcommand("check", "Run one checker or responsibility verdict");
  check->add_option("--kind", req.kind,
                    "win|dom|be|weak|exists-weak|pr-ant|ipr-ant|pr-attr|ipr-attr|ara|pr-attr-vs-env")
      ->required();
  check->add_option("-f,--file", req.file, "problem file")->required();
  check->add_option("--goal", req.goal, "goal formula (name or inline)")->required();
  check->add_option("--env", req.env, "environment specification (name or inline)")->required();
  check->add_option("--strategy", req.strategy, "agent strategy name");
  check->add_option("--env-strategy", req.env_strategy, "environment strategy name");
  check->add_option("--history", req.history, "history name");
  check->add_flag("--oracle", req.oracle, "re-run through the bounded oracle and compare");
  check->add_flag("--json", req.as_json, "emit the verdict as JSON");
  check->add_flag("--full-play", req.full_play, "require the history to be a complete play");
  check->add_option("--horizon", req.horizon, "override the oracle horizon");

  std::string validate_file;
  CLI::App* validate = app.add_subcommand("validate", "Validate a problem file");
  validate->add_option("-f,--file", validate_file, "problem file")->required();

  std::string auto_file, auto_formula, dot_path = "-";
  bool regions = false;
  CLI::App* automaton = app.add_subcommand("automaton", "Export a formula DFA as GraphViz");
  automaton->add_option("--formula", auto_formula, "formula (name or inline)")->required();
  automaton->add_option("-f,--file", auto_file, "problem file")->required();
  automaton->add_option("--dot", dot_path, "output path, - for stdout");
  automaton->add_flag("--regions", regions, "annotate game regions");

  std::string all_file, all_env = "E1";
  int all_jobs = 1;
  bool all_json = false;
  CLI::App* check_all = app.add_subcommand("check-all", "Run every verdict over every pair");
  check_all->add_option("-f,--file", all_file, "problem file")->required();
  check_all->add_option("--env", all_env, "environment specification name");
  check_all->add_option("--jobs", all_jobs, "parallel checks (pairs are independent)");
  check_all->add_flag("--json", all_json, "emit results as JSON");

  std::string suite_file, suite_env = "E1";
  int suite_horizon = 0, suite_budget = 100000;
  CLI::App* suite = app.add_subcommand("oracle-suite", "Compare every verdict with the oracle");
  suite->add_option("-f,--file", suite_file, "problem file")->required();
  suite->add_option("--env", suite_env, "environment specification name");
  suite->add_option("--horizon", suite_horizon, "override the oracle horizon");
  suite->add_option("--budget", suite_budget, "enumeration budget per space");

  std::string example_out;
  CLI::App* example = app.add_subcommand("example", "Emit the bundled plant-watering corpus");
  example->add_option("-o,--output", example_out, "output path, default stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return run_check(req);
    if (validate->parsed()) return run_validate(validate_file);
    if (automaton->parsed()) return run_automaton(auto_file, auto_formula, dot_path, regions);
    if (check_all->parsed()) return run_check_all(all_file, all_env, all_jobs, all_json);
    if (suite->parsed()) return run_oracle_suite(suite_file, suite_env, suite_horizon, suite_budget);
    if (example->parsed()) {
      std::string text = plant_example_json().dump(2) + "\n";
      if (example_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(example_out);
        if (!out) throw ValidationError("cannot write '" + example_out + "'");
        out << text;
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
