#pragma once

// Whitehead moves on dual triangulations and the reduction of a simple
// complex to the split prism D_N by moves that never create a prismatic
// 3-circuit.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "andreev/catalog.hpp"
#include "andreev/complex.hpp"

namespace andreev {

/// Replaces dual edge {A,B}, flanked by triangles ABX and BAY, with {X,Y}.
struct WhiteheadMove {
  std::array<int, 2> remove{};
  std::array<int, 2> insert{};

  WhiteheadMove inverse() const { return WhiteheadMove{insert, remove}; }
  friend bool operator==(const WhiteheadMove&, const WhiteheadMove&) = default;
};

/// The move removing edge {a,b} of d, with its inserted edge filled in.
inline WhiteheadMove move_on(const DualComplex& d, int a, int b) {
  auto x = d.apex(a, b);
  auto y = d.apex(b, a);
  if (!x || !y) fail(ErrorCode::EdgeMissing, "no dual edge " + std::to_string(a) + "-" + std::to_string(b));
  return WhiteheadMove{{a, b}, {*x, *y}};
}

inline DualComplex apply_move(const DualComplex& d, const WhiteheadMove& mv) {
  const int a = mv.remove[0], b = mv.remove[1];
  auto x = d.apex(a, b);
  auto y = d.apex(b, a);
  if (!x || !y) fail(ErrorCode::EdgeMissing, "no dual edge " + std::to_string(a) + "-" + std::to_string(b));
  if (*x == *y || d.adjacent(*x, *y))
    fail(ErrorCode::TargetEdgeExists, "nodes " + std::to_string(*x) + " and " + std::to_string(*y) + " already adjacent");
  std::set<int> want{mv.insert[0], mv.insert[1]}, have{*x, *y};
  if (want != have) fail(ErrorCode::NotFlankedByTwoTriangles, "requested edge is not the opposite diagonal");
  auto tris = d.triangles();
  for (auto& t : tris) {
    std::array<int, 3> r = t;
    for (int k = 0; k < 3; ++k) {
      if (r[k] == a && r[(k + 1) % 3] == b) t = {a, *y, *x};
      if (r[k] == b && r[(k + 1) % 3] == a) t = {b, *x, *y};
    }
  }
  return DualComplex::from_triangles(d.node_count(), std::move(tris));
}

/// True when {a,b,c} bounds a triangle of d.
inline bool is_face_triangle(const DualComplex& d, int a, int b, int c) {
  auto z = d.apex(a, b);
  auto w = d.apex(b, a);
  return (z && *z == c) || (w && *w == c);
}

/// 3-cycles present after the move and not before, as sorted triples. Each
/// must contain the inserted edge.
inline std::vector<std::array<int, 3>> new_3cycles(const DualComplex& before, const WhiteheadMove& mv) {
  auto after = apply_move(before, mv);
  const int x = mv.insert[0], y = mv.insert[1];
  std::vector<std::array<int, 3>> out;
  for (int z = 0; z < after.node_count(); ++z) {
    if (z == x || z == y || !after.adjacent(x, z) || !after.adjacent(y, z)) continue;
    std::array<int, 3> t{x, y, z};
    std::sort(t.begin(), t.end());
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// New 3-cycles that do not bound a triangle afterwards (prismatic ones).
inline std::vector<std::array<int, 3>> new_prismatic_3cycles(const DualComplex& before, const WhiteheadMove& mv) {
  auto after = apply_move(before, mv);
  std::vector<std::array<int, 3>> out;
  for (const auto& t : new_3cycles(before, mv))
    if (!is_face_triangle(after, t[0], t[1], t[2])) out.push_back(t);
  return out;
}

/// Dual of the split prism D_N.
inline DualComplex dn_dual(int n) { return dual(catalog::split_prism(n)); }

// ---------------------------------------------------------------------------
// Outer polygon

struct OuterPolygonView {
  int v_inf = -1;
  std::vector<int> polygon;   // link of v_inf, counterclockwise, lowest id first
  std::vector<int> interior;  // ascending
  std::map<int, std::vector<int>> interior_neighbors;
  /// Maximal runs of an interior node's link lying on P, each listed in
  /// polygon order, sorted by polygon position of the first node.
  std::map<int, std::vector<std::vector<int>>> components;

  bool is_endpoint(int a) const { return interior_neighbors.at(a).size() == 1; }
  std::vector<int> endpoints() const {
    std::vector<int> out;
    for (int a : interior)
      if (is_endpoint(a)) out.push_back(a);
    return out;
  }
  int connection_count(int a) const {
    int n = 0;
    for (const auto& c : components.at(a)) n += static_cast<int>(c.size());
    return n;
  }
};

inline int max_degree_node(const DualComplex& d) {
  int best = 0;
  for (int a = 1; a < d.node_count(); ++a)
    if (d.degree(a) > d.degree(best)) best = a;
  return best;
}

/// View relative to a given v_inf; no preconditions.
inline OuterPolygonView outer_view_at(const DualComplex& d, int v_inf) {
  OuterPolygonView v;
  v.v_inf = v_inf;
  v.polygon = d.link(v_inf);
  std::map<int, int> pos;
  for (int i = 0; i < static_cast<int>(v.polygon.size()); ++i) pos[v.polygon[i]] = i;
  for (int a = 0; a < d.node_count(); ++a)
    if (a != v_inf && !pos.count(a)) v.interior.push_back(a);
  for (int a : v.interior) {
    auto link = d.link(a);
    auto& nb = v.interior_neighbors[a];
    for (int b : link)
      if (b != v_inf && !pos.count(b)) nb.push_back(b);
    std::sort(nb.begin(), nb.end());
    std::vector<std::vector<int>> runs;
    const int len = static_cast<int>(link.size());
    int start = -1;
    for (int i = 0; i < len; ++i)
      if (!pos.count(link[i])) {
        start = i;
        break;
      }
    if (start < 0) {
      // Entire link on P.
      std::vector<int> run(link.rbegin(), link.rend());
      runs.push_back(run);
    } else {
      std::vector<int> cur;
      for (int k = 1; k <= len; ++k) {
        int b = link[(start + k) % len];
        if (pos.count(b)) {
          cur.push_back(b);
        } else if (!cur.empty()) {
          std::reverse(cur.begin(), cur.end());  // link runs opposite to P
          runs.push_back(cur);
          cur.clear();
        }
      }
    }
    std::sort(runs.begin(), runs.end(), [&](const auto& x, const auto& y) { return pos[x.front()] < pos[y.front()]; });
    v.components[a] = runs;
  }
  return v;
}

inline OuterPolygonView outer_view(const DualComplex& d) {
  const int n = d.node_count();
  if (n <= 7) fail(ErrorCode::TooSmall, "reduction needs more than seven faces");
  const int v_inf = max_degree_node(d);
  if (d.degree(v_inf) == n - 2) fail(ErrorCode::IsPrism, "outer polygon has N-2 nodes");
  return outer_view_at(d, v_inf);
}

// ---------------------------------------------------------------------------
// Reduction

struct TraceStep {
  WhiteheadMove move;
  int prismatic_after = 0;  // independently recounted; always 0
  std::string rule;         // the step kind or case that issued the move
};

/// One growth of the outer polygon (or the final adjustment).
struct Episode {
  std::string name;
  int polygon_before = 0;
  int polygon_after = 0;
  int first_step = 0;
  int step_count = 0;
};

struct ReductionTrace {
  DualComplex start;
  std::vector<TraceStep> steps;
  std::vector<Episode> episodes;
  DualComplex end;
  int v_inf = -1;

  std::vector<WhiteheadMove> moves() const {
    std::vector<WhiteheadMove> out;
    for (const auto& s : steps) out.push_back(s.move);
    return out;
  }
};

/// Replays moves, checking each one; returns the final complex.
inline DualComplex replay(const DualComplex& start, const std::vector<WhiteheadMove>& moves) {
  DualComplex d = start;
  for (const auto& mv : moves) d = apply_move(d, mv);
  return d;
}

namespace detail {

class Reducer {
 public:
  explicit Reducer(const DualComplex& d) : d_(d) {
    trace_.start = d;
    seen_.insert(d_.canonical_triangles());
  }

  ReductionTrace run() {
    const int n = d_.node_count();
    auto first = outer_view(d_);
    v_inf_ = first.v_inf;
    trace_.v_inf = v_inf_;
    const int limit = 40 * n * n;
    while (static_cast<int>(d_.link(v_inf_).size()) < n - 3) {
      auto v = view();
      Episode ep;
      ep.polygon_before = static_cast<int>(v.polygon.size());
      ep.first_step = static_cast<int>(trace_.steps.size());
      ep.name = grow(v);
      ep.polygon_after = static_cast<int>(d_.link(v_inf_).size());
      ep.step_count = static_cast<int>(trace_.steps.size()) - ep.first_step;
      if (ep.polygon_after != ep.polygon_before + 1)
        fail(ErrorCode::InternalInvariantBroken, ep.name + " did not grow the outer polygon by one");
      trace_.episodes.push_back(ep);
      if (static_cast<int>(trace_.steps.size()) > limit) fail(ErrorCode::InternalInvariantBroken, "move limit exceeded");
    }
    finish();
    if (canonical_code(d_) != canonical_code(dn_dual(n)))
      fail(ErrorCode::InternalInvariantBroken, "reduction did not end at the split prism");
    trace_.end = d_;
    return trace_;
  }

 private:
  OuterPolygonView view() const { return outer_view_at(d_, v_inf_); }

  void apply(int a, int b, const std::string& rule) {
    auto mv = move_on(d_, a, b);
    auto bad = new_prismatic_3cycles(d_, mv);
    if (!bad.empty())
      fail(ErrorCode::InternalInvariantBroken, rule + " move " + std::to_string(a) + "-" + std::to_string(b) +
                                                   " creates a prismatic 3-circuit");
    d_ = apply_move(d_, mv);
    TraceStep st;
    st.move = mv;
    st.rule = rule;
    st.prismatic_after = static_cast<int>(prismatic_circuits(primal(d_), 3).size());
    if (st.prismatic_after != 0) fail(ErrorCode::InternalInvariantBroken, "complex not simple after " + rule);
    if (!seen_.insert(d_.canonical_triangles()).second)
      fail(ErrorCode::InternalInvariantBroken, "reduction revisited a complex");
    trace_.steps.push_back(st);
  }

  const std::vector<int>* component_of(const OuterPolygonView& v, int a, int node) const {
    for (const auto& c : v.components.at(a))
      if (std::find(c.begin(), c.end(), node) != c.end()) return &c;
    return nullptr;
  }

  // Shrinks the component of `a` containing `anchor` (its first node) to
  // `keep` nodes by removing connections from the far end.
  void shrink(int a, int anchor, size_t keep, const std::string& rule) {
    for (;;) {
      auto v = view();
      const auto* c = component_of(v, a, anchor);
      if (!c) fail(ErrorCode::InternalInvariantBroken, "lost component while shrinking");
      if (c->size() <= keep) return;
      int far = c->front() == anchor ? c->back() : c->front();
      apply(a, far, rule);
    }
  }

  // Removes every connection of `a` to P outside the components holding x and y.
  void eliminate_others(int a, int x, int y) {
    for (;;) {
      auto v = view();
      const std::vector<int>* target = nullptr;
      for (const auto& c : v.components.at(a)) {
        bool keep = std::find(c.begin(), c.end(), x) != c.end() || std::find(c.begin(), c.end(), y) != c.end();
        if (!keep) {
          target = &c;
          break;
        }
      }
      if (!target) return;
      std::vector<int> comp = *target;
      if (comp.size() > 2) {
        shrink(a, comp.front(), 2, "shrink to pair");
        comp = {comp.front(), comp[1]};
      }
      if (comp.size() == 2) {
        apply(a, comp[1], "detach");
        comp = {comp[0]};
      }
      apply(a, comp[0], "detach");
    }
  }

  // Case 1 on non-endpoint a and its component starting at q1.
  void case1(int a, int q1) {
    shrink(a, q1, 2, "shrink to pair");
    auto v = view();
    const auto* c = component_of(v, a, q1);
    const int q2 = c->front() == q1 ? (*c)[1] : (*c)[0];
    eliminate_others(a, q1, q2);
    v = view();
    if (v.components.at(a).size() != 1 || v.components.at(a)[0].size() != 2)
      fail(ErrorCode::InternalInvariantBroken, "pair flip hypothesis fails");
    apply(q1, q2, "grow polygon");
  }

  std::string grow(const OuterPolygonView& v) {
    // Case 1: a non-endpoint with a component of two or more nodes.
    for (int a : v.interior) {
      if (v.is_endpoint(a)) continue;
      for (const auto& c : v.components.at(a))
        if (c.size() >= 2) {
          case1(a, c.front());
          return "case1";
        }
    }
    // Case 2: an endpoint with more than three connections.
    for (int a : v.interior) {
      if (!v.is_endpoint(a) || v.connection_count(a) <= 3) continue;
      const auto& c = v.components.at(a).front();
      const int e = v.interior_neighbors.at(a).front();
      apply(a, c.back(), "shrink to three");
      auto w = view();
      if (w.is_endpoint(e)) fail(ErrorCode::InternalInvariantBroken, "case2 neighbor is an endpoint");
      const auto* ce = component_of(w, e, c.back());
      if (!ce || ce->size() != 2) fail(ErrorCode::InternalInvariantBroken, "case2 transfer did not form a pair");
      case1(e, ce->front());
      return "case2";
    }
    case3(v);
    return "case3";
  }

  void case3(const OuterPolygonView& v) {
    auto ends = v.endpoints();
    if (ends.empty()) fail(ErrorCode::InternalInvariantBroken, "case3 without endpoints");
    const int i1 = ends.front();
    const auto& comp = v.components.at(i1);
    if (comp.size() != 1 || comp[0].size() != 3) fail(ErrorCode::InternalInvariantBroken, "case3 endpoint shape");
    const int p1 = comp[0][0], p2 = comp[0][1], p3 = comp[0][2];
    std::vector<int> chain{i1};
    int prev = -1, cur = i1;
    for (;;) {
      const auto& nb = v.interior_neighbors.at(cur);
      if (cur != i1 && nb.size() > 2) break;
      if (cur != i1 && nb.size() < 2) fail(ErrorCode::InternalInvariantBroken, "interior graph is a path");
      int next = nb[0] == prev ? nb[1] : nb[0];
      if (cur == i1) next = nb[0];
      prev = cur;
      cur = next;
      chain.push_back(cur);
    }
    const int im = chain.back();
    eliminate_others(im, p1, p3);
    apply(im, p3, "case3");
    for (int k = static_cast<int>(chain.size()) - 2; k >= 0; --k) apply(chain[k], p1, "case3");
    apply(p1, p2, "grow polygon");
  }

  void finish() {
    auto v = view();
    if (v.interior.size() != 2) fail(ErrorCode::InternalInvariantBroken, "expected two interior nodes");
    for (int a : v.interior) {
      if (v.connection_count(a) > 3) {
        const int anchor = v.components.at(a).front().front();
        shrink(a, anchor, 3, "shrink to three");
        Episode ep;
        ep.name = "final";
        ep.polygon_before = ep.polygon_after = static_cast<int>(v.polygon.size());
        ep.first_step = static_cast<int>(trace_.steps.size());
        trace_.episodes.push_back(ep);
        return;
      }
    }
  }

  DualComplex d_;
  int v_inf_ = -1;
  ReductionTrace trace_;
  std::set<std::vector<std::array<int, 3>>> seen_;  // labeled complexes visited
};

}  // namespace detail

/// Reduces a simple complex (N > 7, not a prism) to D_N* by the corrected
/// sequence of Whitehead moves. Every step is certified simple.
inline ReductionTrace reduce_to_dn(const DualComplex& d) {
  if (d.node_count() <= 7) fail(ErrorCode::TooSmall, "reduction needs more than seven faces");
  if (!is_simple(primal(d))) fail(ErrorCode::NotSimple, "complex has a prismatic 3-circuit");
  outer_view(d);  // prism check
  return detail::Reducer(d).run();
}

/// Random simple complex: `moves` accepted Whitehead moves from D_N*, each
/// rejected if it would create a prismatic 3-circuit.
inline DualComplex random_simple(int n, std::uint64_t seed, int moves) {
  if (n < 8) fail(ErrorCode::TooSmall, "generator needs at least eight faces");
  std::mt19937_64 rng(seed);
  DualComplex d = dn_dual(n);
  int accepted = 0, attempts = 0;
  while (accepted < moves && attempts < 1000 * (moves + 1)) {
    ++attempts;
    const auto& es = d.edges();
    const auto& e = es[std::uniform_int_distribution<size_t>(0, es.size() - 1)(rng)];
    auto x = d.apex(e.a, e.b);
    auto y = d.apex(e.b, e.a);
    if (*x == *y || d.adjacent(*x, *y)) continue;
    WhiteheadMove mv{{e.a, e.b}, {*x, *y}};
    if (!new_prismatic_3cycles(d, mv).empty()) continue;
    d = apply_move(d, mv);
    ++accepted;
  }
  return d;
}

}  // namespace andreev
