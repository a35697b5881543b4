#pragma once

// Andreev's conditions in exact arithmetic, and the max-slack feasibility LP.
// An angle r stands for r*pi.

#include <string>
#include <vector>

#include "andreev/complex.hpp"
#include "andreev/lp.hpp"
#include "andreev/rational.hpp"

namespace andreev {

struct AngleAssignment {
  std::vector<Rational> values;  // indexed by edge

  size_t size() const { return values.size(); }
  const Rational& operator[](size_t e) const { return values[e]; }
  Rational& operator[](size_t e) { return values[e]; }

  static AngleAssignment uniform(const AbstractPolyhedron& c, const Rational& r) {
    return AngleAssignment{std::vector<Rational>(c.edge_count(), r)};
  }

  std::vector<double> radians() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& r : values) out.push_back(to_double(r) * 3.14159265358979323846);
    return out;
  }

  friend bool operator==(const AngleAssignment&, const AngleAssignment&) = default;
};

/// Violations per condition. Circuit and face entries identify the offending
/// prismatic circuit or quadrilateral face.
struct ConditionReport {
  std::vector<int> positive;             // (1) edges with r <= 0
  std::vector<int> vertex_sum;           // (2) vertices with sum <= 1
  std::vector<Circuit> circuit3;         // (3) prismatic 3-circuits with sum >= 1
  std::vector<Circuit> circuit4;         // (4) prismatic 4-circuits with sum >= 2
  std::vector<int> quadrilateral;        // (5) quadrilateral faces with a sum >= 3
  std::vector<int> obtuse;               // edges with r > 1/2

  bool condition(int k) const {
    switch (k) {
      case 1: return positive.empty();
      case 2: return vertex_sum.empty();
      case 3: return circuit3.empty();
      case 4: return circuit4.empty();
      case 5: return quadrilateral.empty();
      default: return false;
    }
  }
  /// Conjunction of conditions (1)-(5).
  bool overall() const {
    for (int k = 1; k <= 5; ++k)
      if (!condition(k)) return false;
    return true;
  }
  bool non_obtuse() const { return obtuse.empty(); }
  /// Membership in the Andreev polytope: (1)-(5) and all angles at most pi/2.
  bool member() const { return overall() && non_obtuse(); }
};

namespace detail {

inline Rational edge_sum(const AngleAssignment& a, const std::vector<int>& edges) {
  Rational s = 0;
  for (int e : edges) s += a[e];
  return s;
}

// The two six-edge sums of condition (5).
inline std::array<std::vector<int>, 2> quad_sums(const QuadContext& q) {
  std::vector<int> entering(q.entering.begin(), q.entering.end());
  std::vector<int> odd{q.sides[0], q.sides[2]}, even{q.sides[1], q.sides[3]};
  odd.insert(odd.end(), entering.begin(), entering.end());
  even.insert(even.end(), entering.begin(), entering.end());
  return {odd, even};
}

}  // namespace detail

inline ConditionReport check_conditions(const AbstractPolyhedron& c, const AngleAssignment& a) {
  if (static_cast<int>(a.size()) != c.edge_count())
    fail(ErrorCode::SizeMismatch,
         "assignment has " + std::to_string(a.size()) + " values for " + std::to_string(c.edge_count()) + " edges");
  ConditionReport r;
  const Rational half(1, 2);
  for (int e = 0; e < c.edge_count(); ++e) {
    if (sgn(a[e]) <= 0) r.positive.push_back(e);
    if (a[e] > half) r.obtuse.push_back(e);
  }
  for (int v = 0; v < c.vertex_count(); ++v) {
    const auto& es = c.vertex_edges(v);
    if (detail::edge_sum(a, {es[0], es[1], es[2]}) <= 1) r.vertex_sum.push_back(v);
  }
  for (auto& circ : prismatic_circuits(c, 3))
    if (detail::edge_sum(a, circ.crossed_edges) >= 1) r.circuit3.push_back(circ);
  for (auto& circ : prismatic_circuits(c, 4))
    if (detail::edge_sum(a, circ.crossed_edges) >= 2) r.circuit4.push_back(circ);
  for (const auto& q : quadrilateral_contexts(c)) {
    auto sums = detail::quad_sums(q);
    if (detail::edge_sum(a, sums[0]) >= 3 || detail::edge_sum(a, sums[1]) >= 3) r.quadrilateral.push_back(q.face);
  }
  return r;
}

struct FeasibilityReport {
  bool nonempty = false;
  AngleAssignment witness;  // the optimizer's vector (meaningful when nonempty)
  Rational max_slack;       // optimal minimum slack, units of pi
  long pivots = 0;
};

/// Decides whether the Andreev polytope is nonempty: maximize t subject to
/// t <= r_i <= 1/2 and every strict inequality holding with slack t.
inline FeasibilityReport feasible(const AbstractPolyhedron& c) {
  const int ne = c.edge_count();
  const int s = ne;  // column of s = t + 1 >= 0
  lp::Problem p;
  p.c.assign(ne + 1, Rational(0));
  p.c[s] = 1;
  auto add_row = [&](const std::vector<int>& edges, int edge_sign, int s_coef, const Rational& rhs) {
    std::vector<Rational> row(ne + 1, Rational(0));
    for (int e : edges) row[e] += edge_sign;
    row[s] = s_coef;
    p.a.push_back(std::move(row));
    p.b.push_back(rhs);
  };
  for (int e = 0; e < ne; ++e) {
    add_row({e}, -1, 1, 1);               // t <= r_e
    add_row({e}, 1, 0, Rational(1, 2));  // r_e <= 1/2
  }
  for (int v = 0; v < c.vertex_count(); ++v) {
    const auto& es = c.vertex_edges(v);
    add_row({es[0], es[1], es[2]}, -1, 1, 0);  // sum >= 1 + t
  }
  for (const auto& circ : prismatic_circuits(c, 3)) add_row(circ.crossed_edges, 1, 1, 2);  // sum <= 1 - t
  for (const auto& circ : prismatic_circuits(c, 4)) add_row(circ.crossed_edges, 1, 1, 3);  // sum <= 2 - t
  for (const auto& q : quadrilateral_contexts(c))
    for (const auto& sum : detail::quad_sums(q)) add_row(sum, 1, 1, 4);  // sum <= 3 - t
  add_row({}, 1, 1, Rational(3, 2));  // t <= 1/2

  auto sol = lp::maximize(p);
  FeasibilityReport rep;
  rep.pivots = sol.pivots;
  rep.max_slack = sol.x[s] - 1;
  rep.nonempty = sgn(rep.max_slack) > 0;
  rep.witness.values.assign(sol.x.begin(), sol.x.begin() + ne);
  return rep;
}

/// (1 - t) a + t (1/3, ..., 1/3); stays inside the polytope by convexity.
inline AngleAssignment interior_path(const AbstractPolyhedron& c, const AngleAssignment& a, const Rational& t) {
  if (t < 0 || t >= 1) fail(ErrorCode::OutOfRange, "path parameter must lie in [0, 1)");
  if (!check_conditions(c, a).member()) fail(ErrorCode::NotMember, "start point is not in the Andreev polytope");
  AngleAssignment out;
  const Rational third(1, 3);
  for (const auto& r : a.values) {
    Rational v = (1 - t) * r + t * third;
    v.canonicalize();
    out.values.push_back(v);
  }
  if (!check_conditions(c, out).member()) fail(ErrorCode::InternalInvariantBroken, "convex combination left polytope");
  return out;
}

}  // namespace andreev
