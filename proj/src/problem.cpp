#include "rescheck/problem.hpp"

#include <fstream>
#include <set>

namespace rescheck {

using nlohmann::json;

namespace {

Letter letter_from_object(const json& obj, const AtomPartition& p, bool agent_side,
                          const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an atom-to-bool object");
  Letter l = 0;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    auto idx = p.index_of(it.key());
    if (!idx) throw ValidationError(where + ": undeclared atom '" + it.key() + "'");
    bool is_agent = p.is_agent(it.key());
    if (is_agent != agent_side) {
      throw ValidationError(where + ": atom '" + it.key() + "' belongs to the other side");
    }
    if (!it.value().is_boolean()) {
      throw ValidationError(where + ": atom '" + it.key() + "' needs a boolean");
    }
    if (it.value().get<bool>()) l |= Letter{1} << *idx;
  }
  return l;  // omitted atoms are false
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of names");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ValidationError(where + ": expected strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::map<int, int> state_index_map(const json& states, const std::string& where) {
  std::map<int, int> ids;
  if (!states.is_array() || states.empty()) {
    throw ValidationError(where + ": needs a nonempty state array");
  }
  int dense = 0;
  for (const auto& s : states) {
    if (!s.contains("id") || !s["id"].is_number_integer()) {
      throw ValidationError(where + ": every state needs an integer id");
    }
    int id = s["id"].get<int>();
    if (!ids.emplace(id, dense++).second) {
      throw ValidationError(where + ": duplicate state id " + std::to_string(id));
    }
  }
  return ids;
}

int lookup_state(const std::map<int, int>& ids, int id, const std::string& where) {
  auto it = ids.find(id);
  if (it == ids.end()) {
    throw ValidationError(where + ": reference to undeclared state " + std::to_string(id));
  }
  return it->second;
}

AgentStrategy strategy_from_json(const json& j, const AtomPartition& p, const std::string& name) {
  std::string where = "strategy '" + name + "'";
  AgentStrategy a;
  a.partition = p;
  auto ids = state_index_map(j.at("states"), where);
  a.num_states = static_cast<int>(ids.size());
  a.output.assign(static_cast<size_t>(a.num_states), 0);
  a.terminating.assign(static_cast<size_t>(a.num_states), false);
  a.next.assign(static_cast<size_t>(a.num_states),
                std::vector<int>(static_cast<size_t>(1 << p.env_count()), -1));
  for (const auto& s : j.at("states")) {
    int idx = lookup_state(ids, s["id"].get<int>(), where);
    if (s.contains("output")) {
      a.output[static_cast<size_t>(idx)] = letter_from_object(s["output"], p, true, where);
    }
  }
  if (!j.contains("initial")) throw ValidationError(where + ": missing initial state");
  a.initial = lookup_state(ids, j["initial"].get<int>(), where);
  for (const auto& t : j.value("terminating", json::array())) {
    if (!t.is_number_integer()) throw ValidationError(where + ": terminating ids must be integers");
    a.terminating[static_cast<size_t>(lookup_state(ids, t.get<int>(), where))] = true;
  }
  for (const auto& tr : j.value("transitions", json::array())) {
    int from = lookup_state(ids, tr.at("from").get<int>(), where);
    int to = lookup_state(ids, tr.at("to").get<int>(), where);
    Letter input = letter_from_object(tr.at("input"), p, false, where);
    int x = static_cast<int>(input >> p.agent_count());
    int& slot = a.next[static_cast<size_t>(from)][static_cast<size_t>(x)];
    if (slot >= 0) {
      throw ValidationError(where + ": duplicate transition from state " +
                            std::to_string(tr.at("from").get<int>()) + " on " +
                            letter_to_string(p, input));
    }
    slot = to;
  }
  // Totality on non-terminating states; named error per missing input.
  for (int s = 0; s < a.num_states; ++s) {
    if (a.terminating[static_cast<size_t>(s)]) continue;
    for (int x = 0; x < (1 << p.env_count()); ++x) {
      if (a.next[static_cast<size_t>(s)][static_cast<size_t>(x)] < 0) {
        throw ValidationError(where + ": missing transition from state " + std::to_string(s) +
                              " on environment letter " +
                              letter_to_string(p, static_cast<Letter>(x) << p.agent_count()));
      }
    }
  }
  StoppingReport stopping = validate_stopping(a);
  if (!stopping.ok) {
    std::string lasso;
    for (int s : stopping.lasso) lasso += (lasso.empty() ? "" : " -> ") + std::to_string(s);
    throw ValidationError(where + ": not stopping, lasso " + lasso);
  }
  return a;
}

EnvStrategy env_strategy_from_json(const json& j, const AtomPartition& p,
                                   const std::string& name) {
  std::string where = "environment strategy '" + name + "'";
  EnvStrategy e;
  e.partition = p;
  auto ids = state_index_map(j.at("states"), where);
  e.num_states = static_cast<int>(ids.size());
  int agent_letters = 1 << p.agent_count();
  e.next.assign(static_cast<size_t>(e.num_states),
                std::vector<int>(static_cast<size_t>(agent_letters), -1));
  e.output.assign(static_cast<size_t>(e.num_states),
                  std::vector<Letter>(static_cast<size_t>(agent_letters), 0));
  if (!j.contains("initial")) throw ValidationError(where + ": missing initial state");
  e.initial = lookup_state(ids, j["initial"].get<int>(), where);
  for (const auto& tr : j.value("transitions", json::array())) {
    int from = lookup_state(ids, tr.at("from").get<int>(), where);
    int to = lookup_state(ids, tr.at("to").get<int>(), where);
    Letter input = letter_from_object(tr.at("input"), p, true, where);
    Letter output = letter_from_object(tr.at("output"), p, false, where);
    int y = static_cast<int>(input);
    if (e.next[static_cast<size_t>(from)][static_cast<size_t>(y)] >= 0) {
      throw ValidationError(where + ": duplicate transition from state " +
                            std::to_string(tr.at("from").get<int>()) + " on " +
                            letter_to_string(p, input));
    }
    e.next[static_cast<size_t>(from)][static_cast<size_t>(y)] = to;
    e.output[static_cast<size_t>(from)][static_cast<size_t>(y)] = output;
  }
  for (int s = 0; s < e.num_states; ++s) {
    for (int y = 0; y < agent_letters; ++y) {
      if (e.next[static_cast<size_t>(s)][static_cast<size_t>(y)] < 0) {
        throw ValidationError(where + ": missing transition from state " + std::to_string(s) +
                              " on agent letter " + letter_to_string(p, static_cast<Letter>(y)));
      }
    }
  }
  e.check_well_formed();
  return e;
}

}  // namespace

History history_from_json(const json& j, const AtomPartition& p) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError("history: expected a nonempty array of steps");
  }
  std::vector<Letter> letters;
  for (const auto& step : j) {
    Letter agent = letter_from_object(step.value("agent", json::object()), p, true, "history");
    Letter env = letter_from_object(step.value("env", json::object()), p, false, "history");
    letters.push_back(agent | env);
  }
  return History(p, letters);
}

Problem Problem::from_json(const json& j) {
  Problem prob;
  if (!j.contains("atoms")) throw ValidationError("problem: missing atoms declaration");
  prob.partition = AtomPartition(string_list(j["atoms"].value("agent", json::array()), "atoms.agent"),
                                 string_list(j["atoms"].value("env", json::array()), "atoms.env"));

  // Formulas may reference each other by name; resolve to a fixpoint and
  // report a cycle or an unknown identifier otherwise.
  const json formulas_j = j.value("formulas", json::object());
  const json strategies_j = j.value("strategies", json::object());
  const json env_strategies_j = j.value("envStrategies", json::object());
  const json histories_j = j.value("histories", json::object());
  std::map<std::string, std::string> pending;
  for (auto it = formulas_j.begin(); it != formulas_j.end(); ++it) {
    if (!it.value().is_string()) {
      throw ValidationError("formula '" + it.key() + "': expected a string");
    }
    pending[it.key()] = it.value().get<std::string>();
    prob.formula_texts[it.key()] = it.value().get<std::string>();
  }
  IdentifierResolver resolver = [&prob](const std::string& name) -> std::optional<Formula> {
    auto it = prob.formulas.find(name);
    if (it == prob.formulas.end()) return std::nullopt;
    return it->second;
  };
  while (!pending.empty()) {
    bool progress = false;
    for (auto it = pending.begin(); it != pending.end();) {
      try {
        prob.formulas[it->first] = parse(it->second, prob.partition, resolver);
        it = pending.erase(it);
        progress = true;
      } catch (const ParseError&) {
        ++it;
      }
    }
    if (!progress) {
      // Re-parse one to surface the underlying error message.
      auto it = pending.begin();
      try {
        parse(it->second, prob.partition, resolver);
      } catch (const ParseError& e) {
        throw ValidationError("formula '" + it->first + "': " + e.what() +
                              " (unknown name or reference cycle)");
      }
    }
  }

  for (auto it = strategies_j.begin(); it != strategies_j.end(); ++it) {
    prob.strategies[it.key()] = strategy_from_json(it.value(), prob.partition, it.key());
  }
  for (auto it = env_strategies_j.begin(); it != env_strategies_j.end(); ++it) {
    prob.env_strategies[it.key()] = env_strategy_from_json(it.value(), prob.partition, it.key());
  }
  for (auto it = histories_j.begin(); it != histories_j.end(); ++it) {
    prob.histories[it.key()] = history_from_json(it.value(), prob.partition);
  }
  return prob;
}

Problem Problem::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open problem file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("problem file '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

Formula Problem::formula(const std::string& name_or_text) const {
  auto it = formulas.find(name_or_text);
  if (it != formulas.end()) return it->second;
  IdentifierResolver resolver = [this](const std::string& name) -> std::optional<Formula> {
    auto f = formulas.find(name);
    if (f == formulas.end()) return std::nullopt;
    return f->second;
  };
  return parse(name_or_text, partition, resolver);
}

const AgentStrategy& Problem::strategy(const std::string& name) const {
  auto it = strategies.find(name);
  if (it == strategies.end()) throw ValidationError("unknown strategy '" + name + "'");
  return it->second;
}

const EnvStrategy& Problem::env_strategy(const std::string& name) const {
  auto it = env_strategies.find(name);
  if (it == env_strategies.end()) {
    throw ValidationError("unknown environment strategy '" + name + "'");
  }
  return it->second;
}

const History& Problem::history(const std::string& name) const {
  auto it = histories.find(name);
  if (it == histories.end()) throw ValidationError("unknown history '" + name + "'");
  return it->second;
}

json plant_example_json() {
  json j;
  j["atoms"] = {{"agent", {"w"}}, {"env", {"r"}}};
  j["formulas"] = {
      {"watered", "w | r"},
      {"day", "X true & WX WX false"},
      {"phi1", "F watered"},
      {"phi2",
       "day & (((w & !r | !w & r) & X (!w & !r)) | ((!w & !r) & X (w & !r | !w & r)))"},
      {"phi3", "day & G !watered"},
      {"E1", "true"},
  };
  auto two_step = [](bool morning, bool evening) {
    json s;
    s["states"] = json::array({
        json{{"id", 0}, {"output", {{"w", morning}}}},
        json{{"id", 1}, {"output", {{"w", evening}}}},
        json{{"id", 2}},
    });
    s["initial"] = 0;
    s["terminating"] = {2};
    s["transitions"] = json::array({
        json{{"from", 0}, {"input", {{"r", false}}}, {"to", 1}},
        json{{"from", 0}, {"input", {{"r", true}}}, {"to", 1}},
        json{{"from", 1}, {"input", {{"r", false}}}, {"to", 2}},
        json{{"from", 1}, {"input", {{"r", true}}}, {"to", 2}},
    });
    return s;
  };
  j["strategies"] = {
      {"sigma1", two_step(true, true)},
      {"sigma2", two_step(true, false)},
      {"sigma3", two_step(false, false)},
  };
  auto env = [](std::vector<bool> rain_by_step) {
    // Chain machine raining per step, constant after the last step.
    json s;
    s["states"] = json::array();
    s["transitions"] = json::array();
    int n = static_cast<int>(rain_by_step.size());
    for (int i = 0; i <= n; ++i) s["states"].push_back(json{{"id", i}});
    s["initial"] = 0;
    for (int i = 0; i <= n; ++i) {
      bool rain = i < n ? rain_by_step[static_cast<size_t>(i)] : false;
      int to = std::min(i + 1, n);
      for (bool w : {false, true}) {
        s["transitions"].push_back(json{{"from", i},
                                        {"input", {{"w", w}}},
                                        {"to", to},
                                        {"output", {{"r", rain}}}});
      }
    }
    return s;
  };
  j["envStrategies"] = {
      {"rain_evening_only", env({false, true})},
      {"never_rain", env({})},
      {"always_rain",
       [] {
         json s;
         s["states"] = json::array({json{{"id", 0}}});
         s["initial"] = 0;
         s["transitions"] = json::array({
             json{{"from", 0}, {"input", {{"w", false}}}, {"to", 0}, {"output", {{"r", true}}}},
             json{{"from", 0}, {"input", {{"w", true}}}, {"to", 0}, {"output", {{"r", true}}}},
         });
         return s;
       }()},
  };
  j["histories"] = {
      {"sigma2_rainy_evening",
       json::array({
           json{{"agent", {{"w", true}}}, {"env", {{"r", false}}}},
           json{{"agent", {{"w", false}}}, {"env", {{"r", true}}}},
       })},
  };
  return j;
}

json trace_to_json(const Trace& t) {
  json out = json::array();
  const AtomPartition& p = t.partition();
  for (int i = 0; i < t.length(); ++i) {
    json step;
    for (int b = 0; b < p.atom_count(); ++b) {
      bool value = (t.letter(i) >> b) & 1u;
      step[b < p.agent_count() ? "agent" : "env"][p.atom_name(b)] = value;
    }
    if (!step.contains("agent")) step["agent"] = json::object();
    if (!step.contains("env")) step["env"] = json::object();
    out.push_back(step);
  }
  return out;
}

namespace {

json witness_to_json(const Witness& w, const AtomPartition& p) {
  if (std::holds_alternative<Trace>(w)) {
    return json{{"type", "trace"}, {"trace", trace_to_json(std::get<Trace>(w))}};
  }
  if (std::holds_alternative<TracePair>(w)) {
    const auto& [pi, alt] = std::get<TracePair>(w);
    return json{{"type", "tracePair"},
                {"play", trace_to_json(pi)},
                {"alternative", trace_to_json(alt)}};
  }
  const auto& g = std::get<GamePathWitness>(w);
  return json{{"type", "gamePath"},
              {"state", g.state},
              {"stateClass", g.state_class},
              {"path", trace_to_json(Trace(p, g.letters))}};
}

}  // namespace

json verdict_to_json(const Verdict& v, const AtomPartition& p, const std::string& kind) {
  json diag;
  diag["automatonSizes"] = v.diagnostics.automaton_sizes;
  diag["regionSizes"] = v.diagnostics.region_sizes;
  diag["wallTimeMs"] = v.diagnostics.wall_time_ms;
  json out;
  out["kind"] = kind;
  out["decision"] = v.decision;
  out["witness"] = v.witness ? witness_to_json(*v.witness, p) : json(nullptr);
  out["diagnostics"] = diag;
  return out;
}

json report_to_json(const ResponsibilityReport& r, const AtomPartition& p) {
  json parts = json::array();
  for (const auto& [label, verdict] : r.parts) {
    parts.push_back(json{{"label", label}, {"verdict", verdict_to_json(verdict, p, label)}});
  }
  return json{{"kind", responsibility_kind_name(r.kind)},
              {"decision", r.decision},
              {"goal", r.goal},
              {"envSpec", r.env_spec},
              {"parts", parts},
              {"diagnostics", {{"wallTimeMs", r.wall_time_ms}}}};
}

}  // namespace rescheck
