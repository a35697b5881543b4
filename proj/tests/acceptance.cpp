// Acceptance run: one PASS/FAIL line per criterion, each with a time budget.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "andreev/andreev.hpp"
#include "geometry_oracle.hpp"
#include "oracles.hpp"

using namespace andreev;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Records the first failing check; later ones are skipped in the detail.
struct Checker {
  Outcome out;
  void expect(bool cond, const std::string& what) {
    if (!cond && out.ok) {
      out.ok = false;
      out.detail = what;
    }
  }
};

std::vector<std::pair<std::string, AbstractPolyhedron>> named_catalog() {
  std::vector<std::pair<std::string, AbstractPolyhedron>> out;
  out.push_back({"tetrahedron", catalog::tetrahedron()});
  out.push_back({"cube", catalog::cube()});
  for (int n = 5; n <= 10; ++n) out.push_back({"Pr_" + std::to_string(n), catalog::prism(n)});
  out.push_back({"dodecahedron", catalog::dodecahedron()});
  out.push_back({"truncated tetrahedron", catalog::truncated_tetrahedron()});
  out.push_back({"alternately truncated cube", catalog::alternately_truncated_cube()});
  return out;
}

std::vector<std::pair<std::string, AbstractPolyhedron>> corpus() {
  auto out = named_catalog();
  out.push_back({"cube_sum", catalog::cube_sum()});
  for (int n = 7; n <= 14; ++n) out.push_back({"D_" + std::to_string(n), catalog::split_prism(n)});
  for (std::uint64_t s = 0; s < 12; ++s) {
    int n = 8 + static_cast<int>(s % 7);
    out.push_back({"random " + std::to_string(n) + "/" + std::to_string(s), primal(random_simple(n, 100 + s, 3 * n))});
  }
  return out;
}

double max_angle_error(const Realization& r, const AngleAssignment& a) {
  auto rad = a.radians();
  double worst = 0;
  for (size_t e = 0; e < rad.size(); ++e) worst = std::max(worst, std::abs(r.dihedral[e] - rad[e]));
  auto oracle = test::dihedral_from_vertices(r.complex, r.normals);
  for (size_t e = 0; e < rad.size(); ++e) worst = std::max(worst, std::abs(oracle[e] - rad[e]));
  return worst;
}

std::vector<double> sorted_lengths(const Realization& r) {
  auto l = r.length;
  std::sort(l.begin(), l.end());
  return l;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

AngleAssignment prism_angles(const AbstractPolyhedron& c, const Rational& side, const Rational& cap) {
  const int m = c.face_count() - 2;
  AngleAssignment a;
  for (const auto& e : c.edges()) a.values.push_back(e.left < m && e.right < m ? side : cap);
  return a;
}

// 2/5 everywhere, 3/10 across prismatic 3-circuits.
AngleAssignment circuit_safe(const AbstractPolyhedron& c) {
  auto a = AngleAssignment::uniform(c, Rational(2, 5));
  for (const auto& g : prismatic_circuits(c, 3))
    for (int e : g.crossed_edges) a[e] = Rational(3, 10);
  return a;
}

// ---------------------------------------------------------------------------

Outcome c1() {
  Checker k;
  for (const auto& [name, c] : named_catalog()) {
    const int n = c.face_count(), e = c.edge_count(), v = c.vertex_count();
    k.expect(e == 3 * (n - 2), name + ": E != 3(N-2)");
    k.expect(2 * e == 3 * v && v - e + n == 2, name + ": Euler or trivalence counts");
  }
  k.out.detail = k.out.ok ? std::to_string(named_catalog().size()) + " complexes" : k.out.detail;
  return k.out;
}

Outcome c2() {
  Checker k;
  int checked = 0;
  for (const auto& [name, c] : corpus()) {
    if (c.face_count() > 14) continue;
    for (int len : {3, 4}) {
      std::set<oracle::EdgeSet> got;
      for (const auto& circ : prismatic_circuits(c, len)) got.insert(oracle::edge_set(circ.dual_nodes));
      k.expect(got == oracle::prismatic(c, len), name + ": " + std::to_string(len) + "-circuits differ");
    }
    ++checked;
  }
  if (k.out.ok) k.out.detail = std::to_string(checked) + " complexes";
  return k.out;
}

Outcome c3() {
  Checker k;
  int cycles = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    int n = 8 + static_cast<int>(s % 7);
    auto c = primal(random_simple(n, 3000 + s, 3 * n));
    k.expect(is_simple(c), "generator produced a non-simple complex");
    auto prism4 = oracle::prismatic(c, 4);
    for (const auto& es : oracle::all_cycles(c, 4)) {
      if (prism4.count(es)) continue;
      auto [smaller, pieces] = oracle::split(c, oracle::crossed(c, es));
      k.expect(pieces == 2 && smaller == 2, "non-prismatic 4-cycle does not cut off two vertices");
      ++cycles;
    }
  }
  if (k.out.ok) k.out.detail = "100 complexes, " + std::to_string(cycles) + " non-prismatic 4-cycles";
  return k.out;
}

Outcome c4() {
  Checker k;
  auto empty = feasible(catalog::alternately_truncated_cube());
  k.expect(!empty.nonempty && empty.max_slack <= 0, "alternately truncated cube not certified empty");
  auto d = catalog::dodecahedron();
  k.expect(check_conditions(d, AngleAssignment::uniform(d, Rational(2, 5))).member(), "2pi/5 not a member");
  int simple = 0;
  for (const auto& [name, c] : corpus()) {
    if (!is_simple(c)) continue;
    auto rep = feasible(c);
    k.expect(rep.nonempty && check_conditions(c, rep.witness).member(), name + ": no exact witness");
    ++simple;
  }
  if (k.out.ok) k.out.detail = "max_slack " + format_rational(empty.max_slack) + "; " + std::to_string(simple) + " simple";
  return k.out;
}

// Condition (5) recomputed from raw incidences for each quadrilateral.
bool quad_condition(const AbstractPolyhedron& c, const AngleAssignment& a) {
  for (int f = 0; f < c.face_count(); ++f) {
    const auto& cyc = c.face(f);
    if (cyc.size() != 4) continue;
    Rational entering = 0;
    for (int v : cyc)
      for (int e : c.vertex_edges(v))
        if (!c.edge(e).has_face(f)) entering += a[e];
    Rational s0 = entering + a[*c.edge_index(cyc[0], cyc[1])] + a[*c.edge_index(cyc[2], cyc[3])];
    Rational s1 = entering + a[*c.edge_index(cyc[1], cyc[2])] + a[*c.edge_index(cyc[3], cyc[0])];
    if (s0 >= 3 || s1 >= 3) return false;
  }
  return true;
}

bool first_four(const AbstractPolyhedron& c, const AngleAssignment& a) {
  auto rep = check_conditions(c, a);
  return rep.condition(1) && rep.condition(2) && rep.condition(3) && rep.condition(4) && rep.non_obtuse();
}

Outcome c5() {
  Checker k;
  std::vector<AbstractPolyhedron> pool{catalog::cube(), catalog::prism(7), catalog::prism(8), catalog::prism(10),
                                       catalog::split_prism(8), catalog::split_prism(11), catalog::cube_sum()};
  for (std::uint64_t s = 0; s < 5; ++s) pool.push_back(primal(random_simple(9 + static_cast<int>(s), 500 + s, 20)));
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> num(1, 30);
  // Random walk inside (1)-(4): redraw one edge at a time, keep the draw only
  // when (1)-(4) still hold. Each case is the state after 3E proposals.
  std::vector<AngleAssignment> state;
  for (const auto& c : pool) state.push_back(feasible(c).witness);
  int cases = 0, tight = 0;
  for (; cases < 500; ++cases) {
    const size_t i = cases % pool.size();
    const auto& c = pool[i];
    auto& a = state[i];
    k.expect(first_four(c, a), "walk left the region");
    std::uniform_int_distribution<int> edge(0, c.edge_count() - 1);
    for (int step = 0; step < 3 * c.edge_count(); ++step) {
      auto b = a;
      b[edge(rng)] = make_rational(num(rng), 60);
      if (first_four(c, b)) a = std::move(b);
    }
    k.expect(quad_condition(c, a) && check_conditions(c, a).condition(5), "condition (5) violated");
    for (int v = 0; v < c.vertex_count(); ++v) {
      Rational s = 0;
      for (int e : c.vertex_edges(v)) s += a[e];
      tight += s < Rational(11, 10);
    }
  }
  if (k.out.ok) k.out.detail = "500 cases, " + std::to_string(tight) + " vertex sums below 11pi/10";
  return k.out;
}

Outcome c6() {
  Checker k;
  auto t = reduce_to_dn(dual(catalog::dodecahedron()));
  DualComplex d = t.start;
  for (const auto& st : t.steps) {
    d = apply_move(d, st.move);
    k.expect(oracle::prismatic(primal(d), 3).empty(), "intermediate complex not simple");
  }
  k.expect(d.same_as(t.end), "replay differs from recorded end");
  k.expect(isomorphic(t.end, dn_dual(12)).has_value(), "end is not D_12*");
  if (k.out.ok) k.out.detail = std::to_string(t.steps.size()) + " moves";
  return k.out;
}

Outcome c7() {
  Checker k;
  int done = 0, steps = 0;
  for (std::uint64_t s = 0; done < 100; ++s) {
    int n = 8 + static_cast<int>(s % 7);
    auto d = random_simple(n, 7000 + s, 3 * n);
    if (isomorphic(d, dual(catalog::prism(n)))) continue;
    auto t = reduce_to_dn(d);
    DualComplex x = t.start;
    for (const auto& st : t.steps) {
      x = apply_move(x, st.move);
      k.expect(oracle::prismatic(primal(x), 3).empty(), "prismatic 3-circuit mid-reduction");
    }
    k.expect(isomorphic(x, dn_dual(n)).has_value(), "end is not D_N*");
    for (const auto& ep : t.episodes)
      if (ep.name != "final") k.expect(ep.polygon_after == ep.polygon_before + 1, "episode grew |P| by other than 1");
    steps += static_cast<int>(t.steps.size());
    ++done;
  }
  if (k.out.ok) k.out.detail = "100 complexes, " + std::to_string(steps) + " moves";
  return k.out;
}

Outcome c8() {
  Checker k;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1e-6, kPi / 2);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    auto t = triple_class(u(rng), u(rng), u(rng));
    worst = std::max(worst, std::abs(t.det - t.product));
  }
  k.expect(worst < 1e-12, "determinant vs product " + fmt(worst));
  std::uniform_real_distribution<double> w(0, kPi / 2);
  double boundary = 0;
  for (int done = 0; done < 100;) {
    double a = w(rng), b = w(rng), c = kPi - a - b;
    if (a <= 0 || b <= 0 || c <= 0 || c > kPi / 2) continue;
    boundary = std::max(boundary, std::abs(triple_class(a, b, c).det));
    ++done;
  }
  k.expect(boundary < 1e-12, "|D| at sum pi " + fmt(boundary));
  if (k.out.ok) k.out.detail = "max diff " + fmt(worst) + ", boundary |D| " + fmt(boundary);
  return k.out;
}

Outcome c9() {
  Checker k;
  auto r = build_prism(5, Rational(1, 4), Rational(1, 100));
  for (int e = 0; e < r.complex.edge_count(); ++e) {
    const auto& ed = r.complex.edge(e);
    if (ed.left < 3 && ed.right < 3)
      k.expect(std::abs(r.dihedral[e] - kPi / 4) < 1e-9, "side-side angle off pi/4");
    else
      k.expect(r.dihedral[e] > 0 && r.dihedral[e] < kPi / 2, "cap angle outside (0, pi/2)");
  }
  auto ex = extract_combinatorics(r.normals);
  k.expect(isomorphic(ex.complex, catalog::prism(5)).has_value(), "extracted complex is not Pr_5");
  if (k.out.ok)
    k.out.detail = std::to_string(ex.complex.vertex_count()) + " vertices, " + std::to_string(ex.complex.edge_count()) +
                   " edges, cells match Pr_5";
  return k.out;
}

Outcome c10() {
  Checker k;
  double worst = 0;
  for (int n = 8; n <= 12; ++n) {
    auto s = build_split_prism_parts(n);
    worst = std::max(worst, s.coplanarity);
    k.expect(s.coplanarity < 1e-8, "D_" + std::to_string(n) + " merged faces not coplanar");
    auto ex = extract_combinatorics(s.whole.normals);
    k.expect(isomorphic(ex.complex, catalog::split_prism(n)).has_value(), "D_" + std::to_string(n) + " combinatorics");
  }
  if (k.out.ok) k.out.detail = "coplanarity " + fmt(worst);
  return k.out;
}

struct Case {
  std::string name;
  AbstractPolyhedron complex;
  AngleAssignment angles;
};

std::vector<Case> residual_cases() {
  auto d = catalog::dodecahedron();
  auto p = catalog::prism(5);
  return {{"dodecahedron 2pi/5", d, AngleAssignment::uniform(d, Rational(2, 5))},
          {"dodecahedron pi/2", d, AngleAssignment::uniform(d, Rational(1, 2))},
          {"Pr_5 pi/4, 49pi/100", p, prism_angles(p, Rational(1, 4), Rational(49, 100))}};
}

Outcome c11() {
  Checker k;
  double res = 0, ang = 0;
  for (const auto& cs : residual_cases()) {
    auto r = realize(cs.complex, cs.angles);
    double g = gram_residual(r.complex, r.normals, cs.angles.radians());
    double e = max_angle_error(r, cs.angles);
    res = std::max(res, g);
    ang = std::max(ang, e);
    k.expect(g < 1e-10, cs.name + ": residual " + fmt(g));
    k.expect(e < 1e-9, cs.name + ": angle error " + fmt(e));
  }
  if (k.out.ok) k.out.detail = "residual " + fmt(res) + ", angle error " + fmt(ang);
  return k.out;
}

Outcome c12() {
  Checker k;
  std::mt19937_64 rng(12);
  std::normal_distribution<double> noise(0, 1e-3);
  double worst = 0;
  for (const auto& cs : residual_cases()) {
    auto base = realize(cs.complex, cs.angles);
    auto solve = [&] {
      auto seed = base.normals;
      for (auto& v : seed) v += MVec(noise(rng), noise(rng), noise(rng), noise(rng));
      return newton_solve(cs.complex, cs.angles, seed);
    };
    auto x = sorted_lengths(solve()), y = sorted_lengths(solve());
    for (size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  }
  k.expect(worst < 1e-8, "edge lengths differ by " + fmt(worst));
  if (k.out.ok) k.out.detail = "max length difference " + fmt(worst);
  return k.out;
}

Outcome c13() {
  Checker k;
  auto c = catalog::dodecahedron();
  auto target = AngleAssignment::uniform(c, Rational(2, 5));
  RealizeOptions opt;
  int stages = 0;
  opt.observer = [&](const std::string& name, const Realization& r) {
    ++stages;
    try {
      auto ex = extract_combinatorics(r.normals);
      k.expect(detail::vertex_triples(ex.complex) == detail::vertex_triples(r.complex), name + ": wrong cells");
    } catch (const Error& e) {
      k.expect(false, name + ": " + e.what());
    }
  };
  RealizeReport rep;
  auto r = realize(c, target, opt, &rep);
  const int moves = static_cast<int>(reduce_to_dn(dual(c)).moves().size());
  k.expect(stages == moves + 2, "observer saw " + std::to_string(stages) + " stages");
  double g = gram_residual(c, r.normals, target.radians());
  k.expect(g < 1e-10, "final residual " + fmt(g));
  if (k.out.ok) k.out.detail = std::to_string(moves) + " moves replayed, residual " + fmt(g);
  return k.out;
}

Outcome c14() {
  Checker k;
  auto c = catalog::cube_sum();
  auto a = circuit_safe(c);
  auto plan = decompose(c, a);
  k.expect(plan.circuits.size() == 1 && plan.pieces.size() == 2, "expected one circuit and two pieces");
  std::vector<Realization> pieces;
  for (const auto& p : plan.pieces) pieces.push_back(realize(p.complex, p.angles));
  auto glued = glue(plan, pieces);
  k.expect(glued.coplanarity < 1e-8, "merged faces off by " + fmt(glued.coplanarity));
  k.expect(glued.result.complex == c, "glued complex still has the cut triangles");
  RealizeReport rep;
  auto r = realize(c, a, {}, &rep);
  k.expect(rep.route == "compound", "route " + rep.route);
  auto rad = a.radians();
  auto oracle = test::dihedral_from_vertices(r.complex, r.normals);
  double cross = 0;
  for (const auto& circ : plan.circuits)
    for (int e : circ.crossed_edges)
      cross = std::max({cross, std::abs(r.dihedral[e] - rad[e]), std::abs(oracle[e] - rad[e])});
  k.expect(cross < 1e-8, "cross-circuit angle error " + fmt(cross));
  if (k.out.ok) k.out.detail = "coplanarity " + fmt(glued.coplanarity) + ", cross-circuit error " + fmt(cross);
  return k.out;
}

Outcome c15() {
  Checker k;
  auto c = catalog::dodecahedron();
  auto r = realize(c, AngleAssignment::uniform(c, Rational(2, 5)));
  auto target = AngleAssignment::uniform(c, Rational(2, 5));
  for (int e : c.vertex_edges(0)) target[e] = Rational(1, 3);
  k.expect(!check_conditions(c, target).member(), "target should sit on the boundary");
  PathOptions opt;
  opt.base_vertex = c.vertex_count() - 1;
  auto info = trace_path(c, r.normals, r.dihedral, target.radians(), opt);
  k.expect(info.event && info.event_vertex == 0, "no event at vertex 0");
  k.expect(info.event_det < 1e-7, "event determinant " + fmt(info.event_det));
  bool raised = false;
  try {
    continue_path(r, target);
  } catch (const Error& e) {
    raised = e.code() == ErrorCode::EventDetected || e.code() == ErrorCode::NotMember;
  }
  k.expect(raised, "continuation did not refuse the boundary target");
  // Remaining vertices at the event, in ball coordinates.
  std::vector<Eigen::Vector3d> pts;
  for (int v = 1; v < c.vertex_count(); ++v) {
    const auto& f = c.vertex_faces(v);
    MVec p = cross(info.normals[f[0]], info.normals[f[1]], info.normals[f[2]]);
    p /= std::sqrt(-inner(p, p));
    if (p[0] < 0) p = -p;
    pts.push_back(to_ball(p));
  }
  double sep = 1e9;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) sep = std::min(sep, (pts[i] - pts[j]).norm());
  k.expect(sep > 1e-3, "finite vertices only " + fmt(sep) + " apart");
  if (k.out.ok) k.out.detail = "det " + fmt(info.event_det) + " at t=" + fmt(info.t) + ", separation " + fmt(sep);
  return k.out;
}

}  // namespace

// With no arguments every criterion runs; otherwise only the listed ids.
int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "combinatorial axioms, E = 3(N-2)", 1, c1},
      {2, "circuit enumeration matches brute force", 30, c2},
      {3, "non-prismatic 4-cycles cut off two vertices", 60, c3},
      {4, "feasibility: empty certificate and exact witnesses", 10, c4},
      {5, "condition (5) follows from (1)-(4)", 60, c5},
      {6, "dodecahedron reduces to D_12*", 5, c6},
      {7, "randomized reduction stays simple, |P| +1 per episode", 300, c7},
      {8, "Gram determinant identity", 5, c8},
      {9, "explicit prism Pr_5", 1, c9},
      {10, "split prism D_8..D_12", 5, c10},
      {11, "realization residuals", 120, c11},
      {12, "uniqueness from perturbed seeds", 240, c12},
      {13, "Whitehead replay of the dodecahedron trace", 600, c13},
      {14, "truncation and gluing of cube # cube", 600, c14},
      {15, "degeneration to an ideal vertex", 120, c15},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0, ran = 0;
  for (const auto& cr : all) {
    if (!only.empty() && !only.count(cr.id)) continue;
    ++ran;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.budget) {
      o.ok = false;
      o.detail += " (over budget " + std::to_string(static_cast<int>(cr.budget)) + " s)";
    }
    failed += !o.ok;
    std::printf("[%s] %2d %s (%.2f s): %s\n", o.ok ? "PASS" : "FAIL", cr.id, cr.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no such criterion\n");
    return 2;
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
