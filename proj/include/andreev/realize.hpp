#pragma once

// Construction of a compact polyhedron with prescribed non-obtuse dihedral
// angles, following the existence proof: explicit prisms, the split prism
// D_N, Whitehead moves replayed geometrically, truncation of ideal vertices,
// and gluing along essential 3-circuits.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "andreev/angles.hpp"
#include "andreev/catalog.hpp"
#include "andreev/complex.hpp"
#include "andreev/gram.hpp"
#include "andreev/minkowski.hpp"
#include "andreev/whitehead.hpp"

namespace andreev {

struct RealizeOptions {
  PathOptions path;
  Rational epsilon = Rational(1, 60);  // collapsing-edge angle for Whitehead replay
  double delta_start = 1e-2;           // first push-out distance for truncation
  int delta_halvings = 20;
  // Called with each intermediate realization of the Whitehead replay.
  std::function<void(const std::string&, const Realization&)> observer;
};

struct StageReport {
  std::string name;
  int steps = 0;
  double residual = 0;
};

struct RealizeReport {
  std::string route;
  std::vector<StageReport> stages;
  std::vector<Rational> events;  // truncation times T_i
  double residual = 0;
  double margin = 0;
  int gauge_vertex = 0;
};

namespace detail {

inline void note(RealizeReport* rep, std::string name, int steps, double residual) {
  if (rep) rep->stages.push_back({std::move(name), steps, residual});
}

inline std::vector<MVec> relabel(const std::vector<MVec>& normals, const std::vector<int>& face_map) {
  std::vector<MVec> out(normals.size());
  for (size_t f = 0; f < normals.size(); ++f) out[face_map[f]] = normals[f];
  return out;
}

inline Realization follow_to(const Realization& r, const AngleAssignment& target, PathOptions opt, RealizeReport* rep,
                             const std::string& stage) {
  opt.base_vertex = central_vertex(r.complex, r.normals);
  PathResult info;
  auto out = continue_path(r, target, opt, &info);
  note(rep, stage, info.steps, info.residual);
  return out;
}

inline int edge_of(const AbstractPolyhedron& c, int f, int g) {
  auto e = c.edge_between_faces(f, g);
  if (!e) fail(ErrorCode::InternalInvariantBroken, "faces " + std::to_string(f) + " and " + std::to_string(g) + " are not adjacent");
  return *e;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Prisms

/// Realization of any complex isomorphic to Pr_N, continued from the explicit
/// prism with polygon angle pi/4 and caps at 49pi/100.
inline Realization realize_prism(const AbstractPolyhedron& c, const AngleAssignment& target,
                                 const RealizeOptions& opt = {}, RealizeReport* rep = nullptr) {
  const int n = c.face_count();
  auto iso = isomorphic(catalog::prism(n), c);
  if (!iso) fail(ErrorCode::InvalidInput, "complex is not a prism");
  const Rational side(1, 4), gap(1, 100);
  auto p = build_prism(n, side, gap);
  auto start = make_realization(c, detail::relabel(p.normals, iso->face_map));
  detail::note(rep, "explicit prism", 0, 0);
  return detail::follow_to(start, target, opt.path, rep, "prism continuation");
}

struct SplitPrism {
  Realization half;    // Pr_{N-1}; its last face is the mirror
  Realization whole;   // D_N with the face labels of catalog::split_prism
  MVec mirror;
  double coplanarity = 0;  // largest |R(v) - v| over laterals merged by the reflection
};

/// The split prism D_N: the (N-1)-prism with caps at pi/3 (top) and pi/2
/// (mirror, pi/4 on lateral 0), doubled across the mirror. Lateral angles are
/// pi/2; for N = 7 the four laterals would then sum to 2pi, so 2pi/5 is used.
inline SplitPrism build_split_prism_parts(int n, const PathOptions& opt = {}) {
  if (n < 7) fail(ErrorCode::BadParameters, "split prism needs at least seven faces");
  const int m = n - 3;  // laterals of the half
  const Rational lateral = n == 7 ? Rational(2, 5) : Rational(1, 2);
  auto start = build_prism(n - 1, lateral, Rational(1, 100));
  const auto& half_c = start.complex;
  const int top = m, mirror = m + 1;
  AngleAssignment a;
  for (const auto& e : half_c.edges()) {
    int lo = std::min(e.left, e.right), hi = std::max(e.left, e.right);
    if (hi < m)
      a.values.push_back(lateral);
    else if (hi == top)
      a.values.push_back(Rational(1, 3));
    else
      a.values.push_back(lo == 0 ? Rational(1, 4) : Rational(1, 2));
  }
  SplitPrism out;
  out.half = continue_path(start, a, opt);
  const MVec g = out.half.normals[mirror];
  out.mirror = g;
  auto reflect = [&](const MVec& x) -> MVec { return x - 2 * inner(x, g) * g; };
  std::vector<MVec> normals(out.half.normals.begin(), out.half.normals.begin() + m + 1);
  normals.push_back(reflect(out.half.normals[top]));
  normals.push_back(reflect(out.half.normals[0]));
  for (int i = 1; i < m; ++i)
    out.coplanarity = std::max(out.coplanarity, (reflect(out.half.normals[i]) - out.half.normals[i]).norm());
  out.whole = make_realization(catalog::split_prism(n), normals);
  return out;
}

inline Realization build_split_prism(int n) { return build_split_prism_parts(n).whole; }

// ---------------------------------------------------------------------------
// Whitehead moves

/// Angles used around a collapsing edge: eps on the edge between faces
/// {a, b}, pi/2 on the four edges around it, 2pi/5 elsewhere.
inline AngleAssignment collapse_angles(const AbstractPolyhedron& c, int a, int b, int x, int y, const Rational& eps) {
  AngleAssignment out = AngleAssignment::uniform(c, Rational(2, 5));
  out[detail::edge_of(c, a, b)] = eps;
  for (int f : {a, b})
    for (int g : {x, y}) out[detail::edge_of(c, f, g)] = Rational(1, 2);
  return out;
}

/// Geometric Whitehead move: the realization of c (any angles) is driven to
/// the collapse angles, the move is made at the nearly ideal vertex, and the
/// new complex is continued to all 2pi/5.
inline Realization replay_whitehead(const Realization& r, const WhiteheadMove& mv, const RealizeOptions& opt = {},
                                    RealizeReport* rep = nullptr) {
  const auto& c = r.complex;
  const int a = mv.remove[0], b = mv.remove[1], x = mv.insert[0], y = mv.insert[1];
  auto e = c.edge_between_faces(a, b);
  if (!e) fail(ErrorCode::EdgeMissing, "faces " + std::to_string(a) + " and " + std::to_string(b) + " are not adjacent");
  collapse_edge(c, *e);  // precondition: simple, edge not on a triangle
  const auto d = dual(c);
  const auto d2 = apply_move(d, mv);
  const auto c2 = primal(d2);

  // Gauge at a central vertex away from the two triangles that change; it
  // survives the move, so it is found again in c2 by its faces.
  std::vector<int> changing;
  for (int v = 0; v < c.vertex_count(); ++v) {
    auto t = c.vertex_faces(v);
    if (std::count(t.begin(), t.end(), a) && std::count(t.begin(), t.end(), b)) changing.push_back(v);
  }
  const int base = central_vertex(c, r.normals, changing);
  const auto& bf = c.vertex_faces(base);
  const int base2 = *c2.vertex_of_faces(bf[0], bf[1], bf[2]);
  PathOptions popt = opt.path;
  NewtonOptions nopt;
  nopt.base_vertex = base2;

  auto attempt = [&](const Rational& eps, RealizeReport* log) {
    auto before = collapse_angles(c, a, b, x, y, eps);
    auto after = collapse_angles(c2, x, y, a, b, eps);
    if (!check_conditions(c, before).member() || !check_conditions(c2, after).member())
      fail(ErrorCode::InternalInvariantBroken, "collapse angles left the polytope");
    auto squeezed = detail::follow_to(r, before, popt, log, "collapse edge");
    try {
      auto normals = newton_normals(c2, after.radians(), squeezed.normals, nopt);
      detail::note(log, "reseed", 0, gram_residual(c2, normals, after.radians()));
      return normals;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::WrongCombinatorics && err.code() != ErrorCode::Diverged &&
          err.code() != ErrorCode::SingularJacobian)
        throw;
    }
    // Carry the inner products over from the old configuration.
    PathOptions hopt = popt;
    hopt.base_vertex = base2;
    auto h = homotopy_path(c2, squeezed.normals, after.radians(), hopt);
    if (!same_combinatorics(c2, h.normals))
      fail(ErrorCode::WrongCombinatorics, "reseeded move did not produce the new complex");
    detail::note(log, "reseed homotopy", h.steps, h.residual);
    return h.normals;
  };

  // Small eps stretches the collapsing edge far out; when rounding stalls
  // the solver, eps is doubled (three times at most).
  std::vector<MVec> normals;
  Rational eps = opt.epsilon;
  for (int k = 0;; ++k, eps *= 2) {
    RealizeReport local;
    try {
      normals = attempt(eps, rep ? &local : nullptr);
      if (rep)
        for (auto& st : local.stages) rep->stages.push_back(st);
      break;
    } catch (const Error& err) {
      bool numeric = err.code() == ErrorCode::StepFloorReached || err.code() == ErrorCode::Diverged ||
                     err.code() == ErrorCode::SingularJacobian || err.code() == ErrorCode::WrongCombinatorics;
      if (!numeric || k == 3) throw;
    }
  }
  auto moved = make_realization(c2, normals);
  return detail::follow_to(moved, AngleAssignment::uniform(c2, Rational(2, 5)), popt, rep, "spread");
}

/// Simple complexes other than prisms: realize D_N, then undo the reduction
/// trace move by move.
inline Realization realize_simple(const AbstractPolyhedron& c, const AngleAssignment& target,
                                  const RealizeOptions& opt = {}, RealizeReport* rep = nullptr) {
  const int n = c.face_count();
  auto trace = reduce_to_dn(dual(c));
  auto dn = build_split_prism_parts(n, opt.path).whole;
  auto iso = isomorphic(dual(dn.complex), trace.end);
  if (!iso) fail(ErrorCode::InternalInvariantBroken, "reduction did not end at the split prism");
  auto k = primal(trace.end);
  auto r = make_realization(k, detail::relabel(dn.normals, *iso));
  detail::note(rep, "split prism", 0, 0);
  r = detail::follow_to(r, AngleAssignment::uniform(k, Rational(2, 5)), opt.path, rep, "split prism spread");
  if (opt.observer) opt.observer("split prism", r);
  auto moves = trace.moves();
  int step = 0;
  for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
    r = replay_whitehead(r, it->inverse(), opt, rep);
    if (opt.observer) opt.observer("move " + std::to_string(++step), r);
  }
  r = make_realization(c, r.normals);
  r = detail::follow_to(r, target, opt.path, rep, "final continuation");
  if (opt.observer) opt.observer("final", r);
  return r;
}

// ---------------------------------------------------------------------------
// Truncation

struct Truncation {
  Realization result;
  double delta = 0;
  std::vector<int> new_faces;  // one per ideal vertex, in input order
};

/// Pushes every plane outward by delta from an interior point, then cuts each
/// (now hyperideal) vertex off with the plane perpendicular to its three faces.
inline Truncation truncate_ideal(const AbstractPolyhedron& c, const std::vector<MVec>& normals,
                                 const std::vector<int>& ideal, const RealizeOptions& opt = {}) {
  Truncation out;
  if (ideal.empty()) {
    out.result = make_realization(c, normals);
    return out;
  }
  // Average of all vertex directions, ideal ones included, each scaled to
  // x0 = 1; finite vertices alone may all lie on one face.
  MVec center = MVec::Zero();
  for (int v = 0; v < c.vertex_count(); ++v) {
    const auto& f = c.vertex_faces(v);
    MVec p = cross(normals[f[0]], normals[f[1]], normals[f[2]]);
    center += p / p[0];
  }
  if (!(inner(center, center) < 0)) fail(ErrorCode::DeltaSearchFailed, "vertex average is not timelike");
  center /= std::sqrt(-inner(center, center));
  AbstractPolyhedron cut = c;
  for (int v : ideal) {
    cut = catalog::truncate_vertex(cut, v);
    out.new_faces.push_back(cut.face_count() - 1);
  }
  double delta = opt.delta_start;
  for (int k = 0; k <= opt.delta_halvings; ++k, delta /= 2) {
    std::vector<MVec> pushed;
    bool ok = true;
    for (const auto& v : normals) {
      double s = -inner(center, v);
      if (s <= 0) ok = false;
      double d = std::asinh(s);
      MVec u = (v - s * center) / std::cosh(d);
      pushed.push_back(std::sinh(d + delta) * center + std::cosh(d + delta) * u);
    }
    if (!ok) fail(ErrorCode::DeltaSearchFailed, "base point is not interior");
    for (const auto& e : c.edges()) {
      double ip = inner(pushed[e.left], pushed[e.right]);
      if (!(ip * ip < 1)) ok = false;
    }
    for (int v = 0; v < c.vertex_count() && ok; ++v) {
      const auto& f = c.vertex_faces(v);
      double det = gram_det(pushed[f[0]], pushed[f[1]], pushed[f[2]]);
      bool is_ideal = std::count(ideal.begin(), ideal.end(), v) > 0;
      if (is_ideal ? det >= -1e-12 : det <= 1e-9) ok = false;
    }
    if (!ok) continue;
    for (int v : ideal) {
      const auto& f = c.vertex_faces(v);
      pushed.push_back(perp_plane(pushed[f[0]], pushed[f[1]], pushed[f[2]], center, 1e-12));
    }
    if (!same_combinatorics(cut, pushed)) continue;
    out.result = make_realization(cut, pushed);
    out.delta = delta;
    return out;
  }
  fail(ErrorCode::DeltaSearchFailed, "no push-out distance satisfied the truncation conditions");
}

/// c with the given triangular faces shrunk back to vertices. Faces keep their
/// relative order; `orig` maps new face ids to ids of c, `vertex_of` maps each
/// contracted face to its vertex.
struct Contraction {
  AbstractPolyhedron complex;
  std::vector<int> orig;
  std::map<int, int> vertex_of;
};

inline Contraction contract_triangles(const AbstractPolyhedron& c, const std::set<int>& triangles) {
  Contraction out;
  if (triangles.empty()) {
    out.complex = c;
    out.orig.resize(c.face_count());
    std::iota(out.orig.begin(), out.orig.end(), 0);
    return out;
  }
  std::vector<int> to_new(c.face_count(), -1);
  for (int f = 0; f < c.face_count(); ++f)
    if (!triangles.count(f)) {
      to_new[f] = static_cast<int>(out.orig.size());
      out.orig.push_back(f);
    }
  std::vector<std::array<int, 3>> tris;
  std::map<int, std::map<int, int>> link;  // triangle -> a -> b for each directed link edge
  for (int v = 0; v < c.vertex_count(); ++v) {
    auto t = c.vertex_faces(v);
    int hits = 0;
    for (int k = 0; k < 3; ++k)
      if (triangles.count(t[k])) {
        ++hits;
        link[t[k]][t[(k + 1) % 3]] = t[(k + 2) % 3];
      }
    if (hits > 1) fail(ErrorCode::Unsupported, "adjacent triangular faces");
    if (hits == 0) tris.push_back({to_new[t[0]], to_new[t[1]], to_new[t[2]]});
  }
  for (int f : triangles) {
    if (c.face(f).size() != 3) fail(ErrorCode::InvalidInput, "face " + std::to_string(f) + " is not a triangle");
    const auto& l = link.at(f);
    int p = l.begin()->first, q = l.at(p), r = l.at(q);
    out.vertex_of[f] = static_cast<int>(tris.size());
    tris.push_back({to_new[p], to_new[q], to_new[r]});
  }
  try {
    out.complex = primal(DualComplex::from_triangles(static_cast<int>(out.orig.size()), std::move(tris)));
  } catch (const Error& e) {
    fail(ErrorCode::Unsupported, std::string("contraction is not a polyhedron: ") + e.what());
  }
  return out;
}

inline Realization realize(const AbstractPolyhedron& c, const AngleAssignment& target, const RealizeOptions& opt = {},
                           RealizeReport* rep = nullptr);

/// Complexes whose prismatic 3-circuits all surround triangular faces: shrink
/// the triangles, realize the result, then lower the angles so that the
/// shrunk vertices pass through infinity one group at a time, truncating each.
inline Realization realize_truncated(const AbstractPolyhedron& c, const AngleAssignment& target,
                                     const RealizeOptions& opt = {}, RealizeReport* rep = nullptr) {
  std::set<int> tri;
  for (int f = 0; f < c.face_count(); ++f)
    if (c.face(f).size() == 3) tri.insert(f);
  if (tri.empty()) fail(ErrorCode::InvalidInput, "no triangular faces");
  if (c.face_count() - static_cast<int>(tri.size()) == 4) tri.erase(tri.begin());
  auto c0 = contract_triangles(c, tri);
  const auto& k0 = c0.complex;
  if (!is_simple(k0) && !isomorphic(k0, catalog::prism(5)))
    fail(ErrorCode::Unsupported, "shrinking the triangles does not give a simple complex");

  // gamma raises all but three edges of beta by 2 delta.
  const Rational delta(1, 20);
  std::vector<int> first;
  if (k0.face_count() == 5 && !is_simple(k0)) {
    first = prismatic_circuits(k0, 3).front().crossed_edges;
  } else {
    const int ne = k0.edge_count();
    for (int i = 0; i < ne && first.empty(); ++i)
      for (int j = i + 1; j < ne && first.empty(); ++j)
        for (int l = j + 1; l < ne && first.empty(); ++l) {
          std::set<int> ends{k0.edge(i).u, k0.edge(i).v, k0.edge(j).u, k0.edge(j).v, k0.edge(l).u, k0.edge(l).v};
          if (ends.size() == 6) first = {i, j, l};
        }
  }
  AngleAssignment beta, gamma;
  auto beta0 = [&](int e0) { return beta[detail::edge_of(c, c0.orig[k0.edge(e0).left], c0.orig[k0.edge(e0).right])]; };
  // Event times: the sum at a shrunk vertex falls through 1 (units of pi).
  // Ties share one event; groups run in increasing time.
  std::map<Rational, std::vector<int>> events;
  // beta = (1 - s) a + s pi/3. The smallest workable s keeps the circuit sums
  // at beta, and so the final triangles, away from the degenerate size.
  auto schedule = [&](const Rational& s) {
    beta = interior_path(c, target, s);
    gamma.values.clear();
    events.clear();
    for (int e0 = 0; e0 < k0.edge_count(); ++e0)
      gamma.values.push_back(std::count(first.begin(), first.end(), e0) ? beta0(e0) : beta0(e0) + 2 * delta);
    if (!check_conditions(k0, gamma).member()) return false;
    for (int f : tri) {
      int v = c0.vertex_of.at(f);
      Rational g = 0, b = 0;
      for (int e0 : k0.vertex_edges(v)) {
        g += gamma[e0];
        b += beta0(e0);
      }
      if (g <= 1) return false;
      Rational t = (g - 1) / (g - b);
      t.canonicalize();
      if (t <= 0 || t >= 1) return false;
      events[t].push_back(f);
    }
    return true;
  };
  bool found = false;
  for (const auto& s : {Rational(1, 2), Rational(2, 3), Rational(3, 4), Rational(5, 6), Rational(9, 10), Rational(19, 20)})
    if ((found = schedule(s))) break;
  if (!found) fail(ErrorCode::InternalInvariantBroken, "no truncation schedule near pi/3 fits the polytope");

  RealizeReport sub;
  auto r = realize(k0, gamma, opt, rep ? &sub : nullptr);
  if (rep)
    for (auto& s : sub.stages) rep->stages.push_back({"shrunk: " + s.name, s.steps, s.residual});

  std::set<int> pending = tri;
  // alpha(t) on the current stage: triangle edges pi/2, others from gamma to beta.
  auto alpha = [&](const Contraction& ci, const Rational& t) {
    AngleAssignment a;
    for (const auto& e : ci.complex.edges()) {
      int f = ci.orig[e.left], g = ci.orig[e.right];
      if ((tri.count(f) && !pending.count(f)) || (tri.count(g) && !pending.count(g))) {
        a.values.push_back(Rational(1, 2));
        continue;
      }
      auto in0 = [&](int face) {
        return static_cast<int>(std::find(c0.orig.begin(), c0.orig.end(), face) - c0.orig.begin());
      };
      int e0 = detail::edge_of(k0, in0(f), in0(g));
      Rational v = (1 - t) * gamma[e0] + t * beta0(e0);
      v.canonicalize();
      a.values.push_back(v);
    }
    return a;
  };
  auto base_for = [&](const Contraction& ci, const std::vector<MVec>& normals) {
    std::vector<int> avoid;
    for (int f : pending)
      if (ci.vertex_of.count(f)) avoid.push_back(ci.vertex_of.at(f));
    return central_vertex(ci.complex, normals, avoid);
  };

  Contraction ci = c0;
  for (const auto& [t, faces] : events) {
    if (rep) rep->events.push_back(t);
    PathOptions popt = opt.path;
    popt.base_vertex = base_for(ci, r.normals);
    std::vector<int> ideal;
    for (int f : faces) ideal.push_back(ci.vertex_of.at(f));
    popt.ideal_at_end = ideal;
    auto target_t = alpha(ci, t);
    auto path = trace_path(ci.complex, r.normals, r.dihedral, target_t.radians(), popt);
    if (path.event)
      fail(ErrorCode::EventDetected, "unexpected vertex at infinity before t = " + format_rational(t));
    detail::note(rep, "to infinity at t = " + format_rational(t), path.steps, path.residual);
    auto cut = truncate_ideal(ci.complex, path.normals, ideal, opt);
    for (int f : faces) pending.erase(f);
    auto next = contract_triangles(c, pending);
    // Faces of the cut complex: those of ci, then one triangle per ideal vertex.
    std::vector<MVec> normals(next.orig.size());
    auto place = [&](int orig_face, const MVec& v) {
      normals[std::find(next.orig.begin(), next.orig.end(), orig_face) - next.orig.begin()] = v;
    };
    for (int f = 0; f < ci.complex.face_count(); ++f) place(ci.orig[f], cut.result.normals[f]);
    for (size_t i = 0; i < faces.size(); ++i) place(faces[i], cut.result.normals[cut.new_faces[i]]);
    ci = std::move(next);
    r = make_realization(ci.complex, normals);
    detail::note(rep, "truncate", 0, cut.delta);
  }
  PathOptions popt = opt.path;
  popt.base_vertex = central_vertex(c, r.normals);
  auto end = trace_path(c, r.normals, r.dihedral, alpha(ci, Rational(1)).radians(), popt);
  if (end.event) fail(ErrorCode::EventDetected, "vertex reached infinity after the last truncation");
  detail::note(rep, "to beta", end.steps, end.residual);
  r = make_realization(c, end.normals);
  popt.base_vertex = central_vertex(c, r.normals);
  return detail::follow_to(r, target, popt, rep, "final continuation");
}

// ---------------------------------------------------------------------------
// Decomposition along essential 3-circuits

struct Piece {
  AbstractPolyhedron complex;
  std::vector<int> orig;        // face of the piece -> face of C, or -1 for a filled triangle
  std::map<int, int> label_face;  // circuit label -> filled triangle of this piece
  AngleAssignment angles;
};

struct CompoundPlan {
  AbstractPolyhedron complex;
  AngleAssignment angles;
  std::vector<Circuit> circuits;               // gamma_l, indexed by label
  std::vector<Piece> pieces;
  std::vector<std::array<int, 2>> label_pieces;  // the two pieces carrying each label
};

namespace detail {

// Cuts a piece along one of its prismatic 3-circuits; each side gets a new
// triangle labeled `label`. Filled triangles of earlier cuts stay on their side.
inline std::array<Piece, 2> split_piece(const Piece& pc, const Circuit& g, int label) {
  const auto& c = pc.complex;
  const auto& n = g.dual_nodes;
  std::set<std::pair<int, int>> cut;
  for (int i = 0; i < 3; ++i) cut.insert(ordered(n[i], n[(i + 1) % 3]));
  std::map<std::pair<int, int>, int> tri_of;  // directed dual edge -> triangle
  for (int v = 0; v < c.vertex_count(); ++v) {
    auto t = c.vertex_faces(v);
    for (int i = 0; i < 3; ++i) tri_of[{t[i], t[(i + 1) % 3]}] = v;
  }
  std::vector<int> side(c.vertex_count(), -1);
  for (int sd = 0; sd < 2; ++sd) {
    int seed = sd == 0 ? tri_of.at({n[0], n[1]}) : tri_of.at({n[1], n[0]});
    std::vector<int> stack{seed};
    side[seed] = sd;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      auto t = c.vertex_faces(v);
      for (int i = 0; i < 3; ++i) {
        int a = t[i], b = t[(i + 1) % 3];
        if (cut.count(ordered(a, b))) continue;
        int w = tri_of.at({b, a});
        if (side[w] < 0) {
          side[w] = sd;
          stack.push_back(w);
        } else if (side[w] != sd) {
          fail(ErrorCode::InternalInvariantBroken, "circuit does not separate the dual");
        }
      }
    }
  }
  std::array<Piece, 2> out;
  for (int sd = 0; sd < 2; ++sd) {
    std::set<int> nodes(n.begin(), n.end());
    std::vector<std::array<int, 3>> tris;
    for (int v = 0; v < c.vertex_count(); ++v) {
      if (side[v] < 0) fail(ErrorCode::InternalInvariantBroken, "triangle on neither side of the circuit");
      if (side[v] != sd) continue;
      tris.push_back(c.vertex_faces(v));
      for (int f : c.vertex_faces(v)) nodes.insert(f);
    }
    auto& piece = out[sd];
    std::map<int, int> to_new;
    for (int f : nodes) {
      to_new[f] = static_cast<int>(piece.orig.size());
      piece.orig.push_back(pc.orig[f]);
    }
    const int nn = static_cast<int>(piece.orig.size());
    piece.orig.push_back(-1);
    std::vector<std::array<int, 3>> local;
    for (const auto& t : tris) local.push_back({to_new[t[0]], to_new[t[1]], to_new[t[2]]});
    for (int i = 0; i < 3; ++i) {
      int x = to_new[n[i]], y = to_new[n[(i + 1) % 3]];
      local.push_back(sd == 0 ? std::array<int, 3>{y, x, nn} : std::array<int, 3>{x, y, nn});
    }
    for (const auto& [l, f] : pc.label_face)
      if (to_new.count(f)) piece.label_face[l] = to_new[f];
    piece.label_face[label] = nn;
    piece.complex = primal(DualComplex::from_triangles(static_cast<int>(piece.orig.size()), std::move(local)));
  }
  return out;
}

}  // namespace detail

/// Pieces obtained by cutting along the essential 3-circuits, one at a time.
/// Each cut closes both sides with a new triangle carrying a shared label.
inline CompoundPlan decompose(const AbstractPolyhedron& c, const AngleAssignment& a) {
  if (essential_circuits(c).empty()) fail(ErrorCode::NoEssentialCircuits, "complex has no essential 3-circuit");
  if (a.size() != static_cast<size_t>(c.edge_count())) fail(ErrorCode::SizeMismatch, "one angle per edge is required");
  CompoundPlan plan;
  plan.complex = c;
  plan.angles = a;
  Piece root;
  root.complex = c;
  root.orig.resize(c.face_count());
  std::iota(root.orig.begin(), root.orig.end(), 0);
  std::vector<Piece> work{root};
  while (!work.empty()) {
    Piece pc = std::move(work.front());
    work.erase(work.begin());
    auto ess = essential_circuits(pc.complex);
    if (ess.empty()) {
      plan.pieces.push_back(std::move(pc));
      continue;
    }
    const auto& g = ess.front();
    Circuit orig_g;
    for (int f : g.dual_nodes) {
      if (pc.orig[f] < 0) fail(ErrorCode::InternalInvariantBroken, "circuit runs through a filled triangle");
      orig_g.dual_nodes.push_back(pc.orig[f]);
    }
    for (int i = 0; i < 3; ++i)
      orig_g.crossed_edges.push_back(detail::edge_of(c, orig_g.dual_nodes[i], orig_g.dual_nodes[(i + 1) % 3]));
    const int label = static_cast<int>(plan.circuits.size());
    plan.circuits.push_back(orig_g);
    auto halves = detail::split_piece(pc, g, label);
    work.push_back(std::move(halves[0]));
    work.push_back(std::move(halves[1]));
  }
  plan.label_pieces.assign(plan.circuits.size(), {-1, -1});
  for (int p = 0; p < static_cast<int>(plan.pieces.size()); ++p) {
    auto& piece = plan.pieces[p];
    for (const auto& [l, f] : piece.label_face) {
      auto& lp = plan.label_pieces[l];
      (lp[0] < 0 ? lp[0] : lp[1]) = p;
    }
    for (const auto& e : piece.complex.edges()) {
      int f = piece.orig[e.left], g = piece.orig[e.right];
      piece.angles.values.push_back(f < 0 || g < 0 ? Rational(1, 2) : a[detail::edge_of(c, f, g)]);
    }
    if (!check_conditions(piece.complex, piece.angles).member())
      fail(ErrorCode::InternalInvariantBroken, "piece angles are not in the polytope");
  }
  return plan;
}

/// Corners of a triangular face keyed by the other two faces at each corner
/// (ids mapped through `orig`).
inline std::map<std::pair<int, int>, MVec> triangle_corners(const Realization& r, int face, const std::vector<int>& orig) {
  std::map<std::pair<int, int>, MVec> out;
  for (int v : r.complex.face(face)) {
    std::vector<int> others;
    for (int f : r.complex.vertex_faces(v))
      if (f != face) others.push_back(orig[f]);
    out[detail::ordered(others[0], others[1])] = r.vertices[v];
  }
  return out;
}

/// Isometry carrying triangle face fb of b onto face fa of a, corner to
/// corner as listed, with b landing on the far side of a's face.
inline Lorentz gluing_isometry(const Realization& a, int fa, const std::vector<MVec>& corners_a, const Realization& b,
                               int fb, const std::vector<MVec>& corners_b, double tol = 1e-8) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      double la = std::acosh(std::max(1.0, -inner(corners_a[i], corners_a[j])));
      double lb = std::acosh(std::max(1.0, -inner(corners_b[i], corners_b[j])));
      if (std::abs(la - lb) > tol) fail(ErrorCode::IncongruentTriangles, "triangle sides differ by " + std::to_string(std::abs(la - lb)));
    }
  Lorentz ma, mb;
  for (int i = 0; i < 3; ++i) {
    ma.col(i) = corners_a[i];
    mb.col(i) = corners_b[i];
  }
  ma.col(3) = -a.normals[fa];
  mb.col(3) = b.normals[fb];
  Eigen::FullPivLU<Lorentz> lu(mb);
  if (!lu.isInvertible()) fail(ErrorCode::IsometrySolveFailed, "degenerate triangle frame");
  Lorentz g = ma * lu.inverse();
  if (!is_lorentz(g, 1e-7)) fail(ErrorCode::IsometrySolveFailed, "frame map is not an isometry");
  return g;
}

struct GlueResult {
  Realization result;
  double coplanarity = 0;  // largest normal mismatch over merged faces
};

inline GlueResult glue(const CompoundPlan& plan, const std::vector<Realization>& pieces) {
  const int np = static_cast<int>(plan.pieces.size());
  if (static_cast<int>(pieces.size()) != np) fail(ErrorCode::SizeMismatch, "one realization per piece");
  std::vector<std::vector<MVec>> placed(np);
  std::vector<Realization> moved(np);
  placed[0] = pieces[0].normals;
  moved[0] = pieces[0];
  std::vector<int> queue{0};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int p = queue[qi];
    for (const auto& [l, fp] : plan.pieces[p].label_face) {
      int q = plan.label_pieces[l][0] == p ? plan.label_pieces[l][1] : plan.label_pieces[l][0];
      if (!placed[q].empty()) continue;
      int fq = plan.pieces[q].label_face.at(l);
      auto ca = triangle_corners(moved[p], fp, plan.pieces[p].orig);
      auto cb = triangle_corners(pieces[q], fq, plan.pieces[q].orig);
      std::vector<MVec> va, vb;
      for (const auto& [key, pt] : ca) {
        if (!cb.count(key)) fail(ErrorCode::IncongruentTriangles, "label corners do not correspond");
        va.push_back(pt);
        vb.push_back(cb.at(key));
      }
      auto g = gluing_isometry(moved[p], fp, va, pieces[q], fq, vb);
      moved[q] = transformed(pieces[q], g);
      placed[q] = moved[q].normals;
      queue.push_back(q);
    }
  }
  GlueResult out;
  const auto& c = plan.complex;
  std::vector<MVec> normals(c.face_count());
  std::vector<bool> have(c.face_count(), false);
  for (int p = 0; p < np; ++p) {
    if (placed[p].empty()) fail(ErrorCode::IsometrySolveFailed, "piece " + std::to_string(p) + " is not connected");
    for (size_t f = 0; f < plan.pieces[p].orig.size(); ++f) {
      int o = plan.pieces[p].orig[f];
      if (o < 0) continue;
      if (have[o])
        out.coplanarity = std::max(out.coplanarity, (normals[o] - placed[p][f]).norm());
      else {
        normals[o] = placed[p][f];
        have[o] = true;
      }
    }
  }
  out.result = make_realization(c, normals);
  return out;
}

inline Realization realize_compound(const AbstractPolyhedron& c, const AngleAssignment& target,
                                    const RealizeOptions& opt = {}, RealizeReport* rep = nullptr) {
  auto plan = decompose(c, target);
  std::vector<Realization> pieces;
  for (size_t p = 0; p < plan.pieces.size(); ++p) {
    RealizeReport sub;
    pieces.push_back(realize(plan.pieces[p].complex, plan.pieces[p].angles, opt, rep ? &sub : nullptr));
    if (rep) {
      for (auto& s : sub.stages) rep->stages.push_back({"piece " + std::to_string(p) + ": " + s.name, s.steps, s.residual});
      for (auto& t : sub.events) rep->events.push_back(t);
    }
  }
  auto glued = glue(plan, pieces);
  detail::note(rep, "glue", 0, glued.coplanarity);
  // Polish the glued normals against the requested angles.
  NewtonOptions nopt;
  nopt.max_steps = opt.path.polish_steps;
  nopt.tolerance = opt.path.tolerance;
  return newton_solve(c, target, glued.result.normals, nopt);
}

// ---------------------------------------------------------------------------

inline Realization realize(const AbstractPolyhedron& c, const AngleAssignment& target, const RealizeOptions& opt,
                           RealizeReport* rep) {
  if (!check_conditions(c, target).member()) fail(ErrorCode::InfeasibleAngles, "angles are not in the Andreev polytope");
  const int n = c.face_count();
  if (n <= 4) fail(ErrorCode::Unsupported, "the tetrahedron is outside the theorem");
  Realization out;
  std::string route;
  if (isomorphic(c, catalog::prism(n))) {
    route = "prism";
    out = realize_prism(c, target, opt, rep);
  } else if (is_simple(c)) {
    route = "simple";
    out = realize_simple(c, target, opt, rep);
  } else if (essential_circuits(c).empty()) {
    route = "truncated";
    out = realize_truncated(c, target, opt, rep);
  } else {
    route = "compound";
    out = realize_compound(c, target, opt, rep);
  }
  // Polish at a central vertex, then move to the canonical gauge at vertex 0.
  // When vertex 0 is so far out that rounding there breaks the tolerance,
  // the central gauge is kept.
  NewtonOptions nopt;
  nopt.max_steps = opt.path.polish_steps;
  nopt.tolerance = opt.path.tolerance;
  nopt.base_vertex = central_vertex(c, out.normals);
  out = newton_solve(c, target, out.normals, nopt);
  int gauge = nopt.base_vertex;
  auto canonical = to_gauge(c, out.normals, 0);
  detail::fix_signs(canonical, gauge_faces(c, 0));
  if (gram_residual(c, canonical, target.radians()) < opt.path.tolerance) {
    out = make_realization(c, canonical);
    gauge = 0;
  }
  if (rep) {
    rep->gauge_vertex = gauge;
    rep->route = route;
    rep->residual = gram_residual(c, out.normals, target.radians());
    rep->margin = out.margin();
  }
  return out;
}

}  // namespace andreev
