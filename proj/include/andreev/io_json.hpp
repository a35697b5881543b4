#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "andreev/angles.hpp"
#include "andreev/complex.hpp"
#include "andreev/error.hpp"
#include "andreev/rational.hpp"
#include "andreev/realize.hpp"
#include "andreev/whitehead.hpp"

namespace andreev::io {

using Json = nlohmann::ordered_json;

/// Wraps nlohmann's exceptions so malformed files surface as InvalidInput.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed json: ") + e.what());
  }
}

inline Json parse(const std::string& text) {
  return guarded([&] { return Json::parse(text); });
}

// ---------------------------------------------------------------------------
// Complex

inline Json complex_to_json(const AbstractPolyhedron& c, const std::string& name = "") {
  Json j;
  j["name"] = name;
  j["vertex_count"] = c.vertex_count();
  j["faces"] = c.faces();
  return j;
}

inline AbstractPolyhedron complex_from_json(const Json& j) {
  auto [n, faces] = guarded([&] {
    return std::pair{j.at("vertex_count").get<int>(), j.at("faces").get<std::vector<std::vector<int>>>()};
  });
  for (const auto& f : faces)
    for (int v : f)
      if (v < 0 || v >= n) fail(ErrorCode::InvalidInput, "vertex id " + std::to_string(v) + " out of range");
  return AbstractPolyhedron::build(n, std::move(faces));
}

inline Json circuit_to_json(const Circuit& c) {
  Json j;
  j["kind"] = std::string(to_string(c.kind));
  j["dual_nodes"] = c.dual_nodes;
  j["crossed_edges"] = c.crossed_edges;
  return j;
}

inline Json circuits_to_json(const std::vector<Circuit>& cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back(circuit_to_json(c));
  return out;
}

// ---------------------------------------------------------------------------
// Angles

inline Json angles_to_json(const AngleAssignment& a) {
  Json m = Json::object();
  for (size_t e = 0; e < a.size(); ++e) m[std::to_string(e)] = format_rational(a[e]);
  Json j;
  j["angles"] = m;
  return j;
}

/// Every edge must be listed exactly once; values are p/q meaning (p/q)*pi.
inline AngleAssignment angles_from_json(const Json& j, const AbstractPolyhedron& c) {
  const auto& m = guarded([&]() -> const Json& { return j.at("angles"); });
  if (!m.is_object()) fail(ErrorCode::InvalidInput, "\"angles\" must be an object");
  AngleAssignment a;
  a.values.assign(c.edge_count(), Rational(0));
  std::vector<bool> seen(c.edge_count(), false);
  for (const auto& [key, value] : m.items()) {
    std::size_t used = 0;
    int e = -1;
    try {
      e = std::stoi(key, &used);
    } catch (const std::exception&) {
    }
    if (used != key.size() || e < 0 || e >= c.edge_count())
      fail(ErrorCode::InvalidInput, "bad edge index '" + key + "'");
    if (!value.is_string()) fail(ErrorCode::InvalidInput, "angle for edge " + key + " must be a \"p/q\" string");
    a[e] = parse_rational(value.get<std::string>());
    seen[e] = true;
  }
  for (int e = 0; e < c.edge_count(); ++e)
    if (!seen[e]) fail(ErrorCode::SizeMismatch, "no angle for edge " + std::to_string(e));
  return a;
}

inline Json conditions_to_json(const ConditionReport& r) {
  Json j;
  j["member"] = r.member();
  for (int k = 1; k <= 5; ++k) j["condition_" + std::to_string(k)] = r.condition(k);
  j["non_obtuse"] = r.non_obtuse();
  j["positive_violations"] = r.positive;
  j["vertex_violations"] = r.vertex_sum;
  j["circuit3_violations"] = circuits_to_json(r.circuit3);
  j["circuit4_violations"] = circuits_to_json(r.circuit4);
  j["quadrilateral_violations"] = r.quadrilateral;
  j["obtuse_edges"] = r.obtuse;
  return j;
}

inline Json feasibility_to_json(const FeasibilityReport& r) {
  Json j;
  j["verdict"] = r.nonempty ? "nonempty" : "empty";
  j["max_slack"] = format_rational(r.max_slack);
  j["pivots"] = r.pivots;
  if (r.nonempty) j["witness"] = angles_to_json(r.witness)["angles"];
  return j;
}

// ---------------------------------------------------------------------------
// Traces

inline Json dual_to_json(const DualComplex& d) {
  Json j;
  j["node_count"] = d.node_count();
  j["triangles"] = d.triangles();
  return j;
}

inline DualComplex dual_from_json(const Json& j) {
  auto [n, tris] = guarded([&] {
    return std::pair{j.at("node_count").get<int>(), j.at("triangles").get<std::vector<std::array<int, 3>>>()};
  });
  return DualComplex::from_triangles(n, std::move(tris));
}

struct Trace {
  DualComplex start;
  std::vector<WhiteheadMove> moves;
  DualComplex end;
};

inline Json trace_to_json(const DualComplex& start, const std::vector<WhiteheadMove>& moves, const DualComplex& end) {
  Json j;
  j["start"] = dual_to_json(start);
  Json ms = Json::array();
  for (const auto& mv : moves) {
    Json m;
    m["remove"] = mv.remove;
    m["insert"] = mv.insert;
    ms.push_back(m);
  }
  j["moves"] = ms;
  j["end"] = dual_to_json(end);
  return j;
}

inline Json trace_to_json(const ReductionTrace& t) { return trace_to_json(t.start, t.moves(), t.end); }

inline Trace trace_from_json(const Json& j) {
  return guarded([&] {
    Trace t{dual_from_json(j.at("start")), {}, dual_from_json(j.at("end"))};
    for (const auto& m : j.at("moves"))
      t.moves.push_back({m.at("remove").get<std::array<int, 2>>(), m.at("insert").get<std::array<int, 2>>()});
    return t;
  });
}

/// Replays the moves from the start complex; true when the result has
/// exactly the recorded end triangles (after canonical ordering).
inline bool verify_trace(const Trace& t) {
  try {
    return replay(t.start, t.moves).canonical_triangles() == t.end.canonical_triangles() &&
           t.start.node_count() == t.end.node_count();
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Pipeline report

inline Json report_to_json(const RealizeReport& r) {
  Json j;
  j["route"] = r.route;
  Json stages = Json::array();
  for (const auto& s : r.stages) {
    Json x;
    x["name"] = s.name;
    x["steps"] = s.steps;
    x["residual"] = format_double(s.residual);
    stages.push_back(x);
  }
  j["stages"] = stages;
  Json events = Json::array();
  for (const auto& t : r.events) events.push_back(format_rational(t));
  j["events"] = events;
  j["residual"] = format_double(r.residual);
  j["margin"] = format_double(r.margin);
  j["gauge_vertex"] = r.gauge_vertex;
  return j;
}

}  // namespace andreev::io
