#include <ostream>

#include <json.hpp>

#include "matchbound/transcript.hpp"

namespace matchbound {

namespace {

using nlohmann::json;

json event_json(const ArrivalEvent& event) {
  json vertices = json::array();
  for (const auto& v : event.batch) {
    json nbrs = json::array();
    for (VertexId w : *v.neighbors) nbrs.push_back(w.value);
    vertices.push_back({{"id", v.id.value}, {"neighbors", std::move(nbrs)}});
  }
  return {{"simultaneous", event.simultaneous}, {"vertices", std::move(vertices)}};
}

json decision_json(const AlgorithmDecision& decision) {
  json out = json::array();
  for (const auto& inc : decision.increments) {
    out.push_back(json::array({inc.arriving.value, inc.existing.value, inc.amount}));
  }
  return out;
}

json step_json(const StepRecord& s) {
  json out = {{"partition", s.partition},
              {"steps_remaining", s.steps_remaining},
              {"size_a", s.size_a},
              {"size_b", s.size_b},
              {"a", s.a},
              {"x_before", s.x_before},
              {"x_after", s.x_after},
              {"branch", to_string(s.branch)}};
  if (s.branch != Branch::none) {
    out["a_grid"] = s.a_grid;
    out["aggressive_value"] = s.expressions.aggressive;
    out["conservative_value"] = s.expressions.conservative;
  }
  if (s.branch == Branch::aggressive) out["spawned_partition"] = s.spawned_partition;
  return out;
}

}  // namespace

void write_transcript_json(std::ostream& out, const Transcript& t, int indent) {
  const auto& p = t.params;
  json doc;
  doc["params"] = {{"n", p.n},
                   {"N", p.N},
                   {"eps", p.fparams.eps},
                   {"gamma", p.fparams.gamma},
                   {"grid_step", p.fparams.grid_step},
                   {"x0", p.x0}};
  doc["algorithm"] = t.algorithm;

  json events = json::array();
  for (const auto& e : t.events) events.push_back(event_json(e));
  doc["events"] = std::move(events);

  json decisions = json::array();
  for (const auto& d : t.decisions) decisions.push_back(decision_json(d));
  doc["decisions"] = std::move(decisions);

  json branches = json::array();
  for (const auto& s : t.steps) branches.push_back(step_json(s));
  doc["branches"] = std::move(branches);

  json pairs = json::array();
  for (const auto& [u, v] : t.deactivations) pairs.push_back(json::array({u.value, v.value}));
  doc["deactivations"] = std::move(pairs);

  json colors = json::array();
  for (Color c : t.colors) colors.push_back(c == Color::white ? "white" : "black");
  doc["colors"] = std::move(colors);

  json sizes = json::array();
  for (const auto& s : t.partition_sizes) {
    sizes.push_back({{"partition", s.partition}, {"size", s.size}, {"steps_remaining", s.steps_remaining}});
  }
  doc["partition_sizes"] = std::move(sizes);

  doc["v_alg"] = t.v_alg;
  doc["alg_total"] = t.alg_total;
  doc["opt_size"] = t.opt_size;
  doc["bound"] = t.value_bound;
  out << doc.dump(indent) << '\n';
}

}  // namespace matchbound
