#include "revtm/envelope.hpp"

namespace revtm {

Json to_json(const Budget& b) { return Json{{"max_len", b.max_len}, {"steps", b.steps}}; }

Json to_json(const PrefixRunResult& r) {
  return Json{{"outcome", to_string(r.outcome)}, {"program", r.program}, {"output", r.output},
              {"steps", r.steps},                {"diverges", r.diverges}};
}

Json to_json(const ComplexityRecord& r) {
  Json j{{"x", r.x}, {"aux", r.aux}, {"status", r.found() ? "ok" : "no_witness"}};
  j["k_upper"] = r.k_upper ? Json(*r.k_upper) : Json(nullptr);
  j["witnesses"] = r.witnesses;
  j["budget"] = to_json(r.budget);
  j["exhaustive"] = r.exhaustive;
  j["undecided"] = r.undecided;
  return j;
}

Json to_json(const DepthRecord& r) {
  Json j{{"x", r.x}, {"b", r.b}, {"variant", to_string(r.variant)}, {"status", r.found() ? "ok" : "no_witness"}};
  j["ld"] = r.ld ? Json(*r.ld) : Json(nullptr);
  j["witness"] = r.found() ? Json(r.witness) : Json(nullptr);
  j["k_upper"] = r.k_upper ? Json(*r.k_upper) : Json(nullptr);
  j["candidates"] = r.candidates;
  j["budget"] = to_json(r.budget);
  j["exhaustive"] = r.exhaustive;
  j["nested_fallback"] = r.nested_fallback;
  return j;
}

Json to_json(const GrowthTable& t) {
  Json rows = Json::array();
  bool conclusive = true;
  for (const GrowthRow& r : t.rows) {
    Json row{{"n", r.n}, {"status", r.conclusive ? "ok" : "inconclusive"}, {"value", r.value}, {"x", r.x}};
    if (t.kind == TableKind::F) row["b"] = r.b ? Json(*r.b) : Json(nullptr);
    row["program"] = r.program;
    rows.push_back(std::move(row));
    conclusive = conclusive && r.conclusive;
  }
  return Json{{"table", to_string(t.kind)},
              {"variant", to_string(t.variant)},
              {"status", conclusive ? "ok" : "inconclusive"},
              {"budget", to_json(t.budget)},
              {"rows", std::move(rows)}};
}

Json to_json(const ValidationReport& r, const Machine& m) {
  Json conflicts = Json::array();
  for (const RulePair& p : r.conflicts) conflicts.push_back(Json::array({p.first + 1, p.second + 1}));
  Json unreachable = Json::array();
  for (StateId q : r.unreachable) unreachable.push_back(m.states[q]);
  return Json{{"machine", m.name},
              {"rules", m.rules.size()},
              {"deterministic", r.deterministic()},
              {"conflicts", std::move(conflicts)},
              {"unreachable", std::move(unreachable)}};
}

Json to_json(const Configuration& c, const Machine& m) {
  Configuration n = c;
  n.normalize();
  Json tapes = Json::array();
  for (std::size_t t = 0; t < n.tapes.size(); ++t) {
    Json cells = Json::array();
    for (Symbol s : n.tapes[t]) cells.push_back(m.alphabets[t].name(s));
    tapes.push_back(Json{{"head", n.heads[t]}, {"cells", std::move(cells)}});
  }
  return Json{{"state", m.states[n.state]}, {"steps", n.steps}, {"tapes", std::move(tapes)}};
}

Json Envelope::to_json() const {
  Json j{{"tool", kToolName}, {"version", kToolVersion}};
  j["digest"] = digest.empty() ? Json(nullptr) : Json(digest);
  j["budget"] = budget ? revtm::to_json(*budget) : Json(nullptr);
  j["kind"] = kind;
  j["payload"] = payload;
  j["wall_ms"] = wall_ms;
  return j;
}

}  // namespace revtm
