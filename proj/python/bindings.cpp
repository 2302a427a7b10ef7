// Python bindings for the problem-level operations: loading problem files,
// running checkers and responsibility verdicts, plays, and DOT export.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rescheck/oracle.hpp"
#include "rescheck/problem.hpp"

namespace py = pybind11;
using namespace rescheck;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<long long>());
    case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(json_to_py(e));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) {
        out[py::str(it.key())] = json_to_py(it.value());
      }
      return out;
    }
    default: return py::none();
  }
}

json py_to_json(const py::handle& obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    json out = json::array();
    for (const auto& e : obj) out.push_back(py_to_json(e));
    return out;
  }
  if (py::isinstance<py::dict>(obj)) {
    json out = json::object();
    for (const auto& item : obj.cast<py::dict>()) {
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    }
    return out;
  }
  throw py::type_error("cannot convert python object to JSON");
}

struct PyProblem {
  Problem problem;

  static PyProblem from_file(const std::string& path) { return {Problem::from_file(path)}; }
  static PyProblem from_json(const py::object& doc) {
    return {Problem::from_json(py_to_json(doc))};
  }

  std::vector<std::string> formula_names() const {
    std::vector<std::string> out;
    for (const auto& [name, f] : problem.formulas) out.push_back(name);
    return out;
  }
  std::vector<std::string> strategy_names() const {
    std::vector<std::string> out;
    for (const auto& [name, s] : problem.strategies) out.push_back(name);
    return out;
  }
  std::vector<std::string> env_strategy_names() const {
    std::vector<std::string> out;
    for (const auto& [name, s] : problem.env_strategies) out.push_back(name);
    return out;
  }
  std::vector<std::string> history_names() const {
    std::vector<std::string> out;
    for (const auto& [name, h] : problem.histories) out.push_back(name);
    return out;
  }

  std::string format_formula(const std::string& text) const {
    return render(problem.formula(text));
  }

  History resolve_history(const py::object& history) const {
    if (py::isinstance<py::str>(history)) return problem.history(history.cast<std::string>());
    return history_from_json(py_to_json(history), problem.partition);
  }

  bool evaluate_on(const std::string& formula, const py::object& history) const {
    return evaluate(problem.formula(formula), resolve_history(history), 0);
  }

  py::object play_of(const std::string& strategy, const std::string& env_strategy) const {
    Trace t = play(problem.strategy(strategy), problem.env_strategy(env_strategy));
    return json_to_py(trace_to_json(t));
  }

  std::string dot(const std::string& formula) const {
    Formula f = problem.formula(formula);
    return to_dot(to_dfa(f, problem.partition), render(f));
  }

  py::object check(const std::string& kind, const std::string& goal, const std::string& env,
                   const py::object& strategy, const py::object& env_strategy,
                   const py::object& history, bool full_play, bool oracle, int horizon) {
    Formula goal_f = problem.formula(goal);
    Formula env_f = problem.formula(env);
    const AgentStrategy* strat = nullptr;
    if (!strategy.is_none()) strat = &problem.strategy(strategy.cast<std::string>());

    json out;
    bool decision = false;
    if (kind == "win" || kind == "dom" || kind == "be" || kind == "weak") {
      if (!strat) throw ValidationError("kind '" + kind + "' needs a strategy");
      Verdict v;
      if (kind == "win") v = check_win(goal_f, env_f, *strat);
      else if (kind == "dom") v = check_dom(goal_f, env_f, *strat);
      else if (kind == "be") v = check_be(goal_f, env_f, *strat);
      else v = check_weak(goal_f, env_f, *strat);
      decision = v.decision;
      out = verdict_to_json(v, problem.partition, kind);
    } else if (kind == "exists-weak") {
      Verdict v = exists_weak(goal_f, env_f, problem.partition);
      decision = v.decision;
      out = verdict_to_json(v, problem.partition, kind);
    } else {
      if (!strat) throw ValidationError("kind '" + kind + "' needs a strategy");
      ResponsibilityChecker checker;
      ResponsibilityReport r;
      if (kind == "pr-ant") {
        r = checker.anticipate_passive(goal_f, env_f, *strat);
      } else if (kind == "ipr-ant") {
        r = checker.anticipate_inexcusable(goal_f, env_f, *strat);
      } else if (kind == "pr-attr" || kind == "ipr-attr") {
        if (history.is_none()) throw ValidationError("kind '" + kind + "' needs a history");
        History h = resolve_history(history);
        r = kind == "pr-attr"
                ? checker.attribute_passive_on_history(goal_f, env_f, *strat, h, full_play)
                : checker.attribute_inexcusable_on_history(goal_f, env_f, *strat, h, full_play);
      } else if (kind == "ara") {
        r = checker.active_responsibility(goal_f, env_f, *strat);
      } else if (kind == "pr-attr-vs-env") {
        if (env_strategy.is_none()) throw ValidationError("kind needs an env_strategy");
        r = checker.attribute_passive_vs_env(goal_f, env_f, *strat,
                                             problem.env_strategy(env_strategy.cast<std::string>()));
      } else {
        throw ValidationError("unknown check kind '" + kind + "'");
      }
      decision = r.decision;
      out = report_to_json(r, problem.partition);
    }

    if (oracle) {
      int h = horizon;
      if (h == 0) {
        h = strat ? sufficient_horizon(goal_f, env_f, *strat)
                  : sufficient_horizon(goal_f, env_f, problem.partition);
      }
      BoundedStrategySpace space(problem.partition, h);
      bool reference;
      if (kind == "win") reference = oracle_check_win(goal_f, env_f, *strat, space);
      else if (kind == "weak") reference = oracle_check_weak(goal_f, env_f, *strat, space);
      else if (kind == "dom") reference = oracle_check_dom(goal_f, env_f, *strat, space);
      else if (kind == "be") reference = oracle_check_be(goal_f, env_f, *strat, space);
      else if (kind == "exists-weak") reference = oracle_exists_weak(goal_f, env_f, space);
      else {
        OracleExtras extras;
        History h_obj;
        if (!history.is_none()) {
          h_obj = resolve_history(history);
          extras.history = &h_obj;
        }
        EnvStrategy es;
        if (!env_strategy.is_none()) {
          es = problem.env_strategy(env_strategy.cast<std::string>());
          extras.env_strategy = &es;
        }
        ResponsibilityKind rk;
        if (kind == "pr-ant") rk = ResponsibilityKind::PassiveAnticipation;
        else if (kind == "ipr-ant") rk = ResponsibilityKind::InexcusablePassiveAnticipation;
        else if (kind == "pr-attr") rk = ResponsibilityKind::PassiveAttributionOnHistory;
        else if (kind == "ipr-attr") rk = ResponsibilityKind::InexcusablePassiveAttributionOnHistory;
        else if (kind == "ara") rk = ResponsibilityKind::Active;
        else rk = ResponsibilityKind::PassiveAttributionVsEnv;
        reference = oracle_responsibility(rk, goal_f, env_f, *strat, extras, space);
      }
      if (reference != decision) {
        throw std::logic_error("oracle disagreement: checker says " + std::to_string(decision) +
                               ", oracle says " + std::to_string(reference));
      }
      out["oracleConfirmed"] = true;
    }
    return json_to_py(out);
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LTLf strategy classification and responsibility verdicts";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "FormulaParseError", PyExc_ValueError);

  py::class_<PyProblem>(m, "Problem")
      .def_static("from_file", &PyProblem::from_file, py::arg("path"))
      .def_static("from_json", &PyProblem::from_json, py::arg("doc"))
      .def_property_readonly("formula_names", &PyProblem::formula_names)
      .def_property_readonly("strategy_names", &PyProblem::strategy_names)
      .def_property_readonly("env_strategy_names", &PyProblem::env_strategy_names)
      .def_property_readonly("history_names", &PyProblem::history_names)
      .def("format_formula", &PyProblem::format_formula, py::arg("formula"),
           "Canonical rendering of a named or inline formula.")
      .def("evaluate", &PyProblem::evaluate_on, py::arg("formula"), py::arg("trace"),
           "Satisfaction of a formula on a named history or a list of steps.")
      .def("play", &PyProblem::play_of, py::arg("strategy"), py::arg("env_strategy"),
           "The joint trace the two machines generate.")
      .def("dot", &PyProblem::dot, py::arg("formula"), "GraphViz export of the formula DFA.")
      .def("check", &PyProblem::check, py::arg("kind"), py::arg("goal"), py::arg("env"),
           py::arg("strategy") = py::none(), py::arg("env_strategy") = py::none(),
           py::arg("history") = py::none(), py::arg("full_play") = false,
           py::arg("oracle") = false, py::arg("horizon") = 0,
           "Run a checker (win|dom|be|weak|exists-weak) or responsibility verdict "
           "(pr-ant|ipr-ant|pr-attr|ipr-attr|ara|pr-attr-vs-env); returns the report dict.");

  m.def("plant_example", [] { return json_to_py(plant_example_json()); },
        "The bundled plant-watering corpus as a dict.");
}
