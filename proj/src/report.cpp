#include "bss/report.hpp"

#include "bss/error.hpp"

namespace bss {

using nlohmann::json;

json tuple_to_json(const Structure& s, const Tuple& t) {
  json a = json::array();
  for (const auto& v : t) a.push_back(s.format_value(v));
  return a;
}

Tuple tuple_from_json(const Structure& s, const json& j) {
  Tuple t;
  for (const auto& v : j) t.push_back(s.parse_value(v.get<std::string>()));
  return t;
}

json to_json(const Structure& s, const ResultSet& r) {
  json out;
  json outs = json::array();
  for (const auto& t : r.outputs) outs.push_back(tuple_to_json(s, t));
  out["outputs"] = std::move(outs);
  out["complete"] = r.complete;
  out["halted"] = r.halted;
  out["diverged"] = r.diverged;
  out["loop_certified"] = r.loop_certified;
  out["pruned"] = r.pruned;
  return out;
}

ResultSet result_set_from_json(const Structure& s, const json& j) {
  ResultSet r;
  try {
    for (const auto& t : j.at("outputs")) r.outputs.insert(tuple_from_json(s, t));
    r.complete = j.at("complete").get<bool>();
    r.halted = j.at("halted").get<std::size_t>();
    r.diverged = j.at("diverged").get<std::size_t>();
    r.loop_certified = j.at("loop_certified").get<std::size_t>();
    r.pruned = j.at("pruned").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SyntaxError, std::string("result report: ") + e.what());
  }
  return r;
}

json to_json(const Structure& s, const RunResult& r) {
  json out;
  out["status"] = to_string(r.status);
  out["steps"] = r.steps;
  if (r.status == RunStatus::Halted) out["output"] = tuple_to_json(s, r.output);
  if (r.evaluator_gap) out["evaluator_gap"] = true;
  return out;
}

json to_json(const Structure& s, const Configuration& c) {
  json out;
  out["label"] = c.label;
  out["iregs"] = c.iregs;
  json tapes = json::array();
  for (const auto& t : c.tapes) {
    json cells = json::array();
    for (std::size_t i = 1; i <= t.support(); ++i) cells.push_back(t.pending(i) ? "?" : s.format_value(t.get(i)));
    tapes.push_back({{"cells", cells}, {"fill", s.format_value(t.fill())}});
  }
  out["tapes"] = std::move(tapes);
  return out;
}

std::string format_configuration(const Structure& s, const Configuration& c) {
  std::string out = std::to_string(c.label) + " . (";
  for (std::size_t t = 0; t < c.iregs.size(); ++t) {
    if (t) out += " | ";
    for (std::size_t j = 0; j < c.iregs[t].size(); ++j) out += (j ? "," : "") + std::to_string(c.iregs[t][j]);
  }
  out += ") . (";
  for (std::size_t t = 0; t < c.tapes.size(); ++t) {
    const Tape& tp = c.tapes[t];
    if (t) out += " | ";
    for (std::size_t i = 1; i <= tp.support(); ++i) out += (tp.pending(i) ? "?" : s.format_value(tp.get(i))) + ",";
    out += s.format_value(tp.fill()) + ",...";
  }
  return out + ")";
}

std::string format_outputs(const Structure& s, const ResultSet& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : r.outputs) {
    if (!first) out += ", ";
    first = false;
    out += format_tuple(s, t);
  }
  return out + "}";
}

}  // namespace bss
