#include <gtest/gtest.h>

#include "andreev/catalog.hpp"
#include "andreev/complex.hpp"
#include "oracles.hpp"

using namespace andreev;

namespace {

std::vector<std::pair<std::string, AbstractPolyhedron>> corpus() {
  std::vector<std::pair<std::string, AbstractPolyhedron>> out;
  out.push_back({"tetrahedron", catalog::tetrahedron()});
  for (int n = 5; n <= 12; ++n) out.push_back({"prism" + std::to_string(n), catalog::prism(n)});
  out.push_back({"dodecahedron", catalog::dodecahedron()});
  out.push_back({"truncated_tetrahedron", catalog::truncated_tetrahedron()});
  out.push_back({"alt_truncated_cube", catalog::alternately_truncated_cube()});
  out.push_back({"cube_sum", catalog::cube_sum()});
  for (int n = 7; n <= 14; ++n) out.push_back({"split_prism" + std::to_string(n), catalog::split_prism(n)});
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Unsupported;
}

}  // namespace

TEST(Build, Tetrahedron) {
  auto c = catalog::tetrahedron();
  EXPECT_EQ(c.face_count(), 4);
  EXPECT_EQ(c.edge_count(), 6);
  EXPECT_EQ(c.vertex_count(), 4);
}

TEST(Build, Dodecahedron) {
  auto c = catalog::dodecahedron();
  EXPECT_EQ(c.face_count(), 12);
  EXPECT_EQ(c.edge_count(), 30);
  EXPECT_EQ(c.vertex_count(), 20);
}

TEST(Build, CountsOnCorpus) {
  for (const auto& [name, c] : corpus()) {
    SCOPED_TRACE(name);
    EXPECT_EQ(c.edge_count(), 3 * (c.face_count() - 2));
    EXPECT_EQ(3 * c.vertex_count(), 2 * c.edge_count());
  }
}

TEST(Build, EdgesAreLexicographic) {
  auto c = catalog::dodecahedron();
  for (int e = 1; e < c.edge_count(); ++e) {
    EXPECT_LT(c.edge(e).u, c.edge(e).v);
    EXPECT_LT(std::pair(c.edge(e - 1).u, c.edge(e - 1).v), std::pair(c.edge(e).u, c.edge(e).v));
  }
}

TEST(Build, DuplicateFaceMeetsTwice) {
  auto faces = catalog::cube().faces();
  faces.push_back(faces.front());
  EXPECT_EQ(code_of([&] { AbstractPolyhedron::build(8, faces); }), ErrorCode::FacesMeetTwice);
}

TEST(Build, Rejections) {
  EXPECT_EQ(code_of([] { AbstractPolyhedron::build(3, {{0, 1, 2}, {0, 2, 1}}); }), ErrorCode::EulerViolation);
  EXPECT_EQ(code_of([] { AbstractPolyhedron::build(4, {{0, 1}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}}); }),
            ErrorCode::FaceTooSmall);
  // Wrong orientation of one tetrahedron face.
  EXPECT_EQ(code_of([] { AbstractPolyhedron::build(4, {{0, 1, 2}, {0, 1, 3}, {1, 3, 2}, {0, 2, 3}}); }),
            ErrorCode::EdgeNotInTwoFaces);
  // A vertex of degree four: square pyramid.
  EXPECT_EQ(code_of([] {
              AbstractPolyhedron::build(5, orient_faces({{0, 1, 2, 3}, {0, 4, 1}, {1, 4, 2}, {2, 4, 3}, {3, 4, 0}}));
            }),
            ErrorCode::NotTrivalent);
  // Two disjoint tetrahedra.
  EXPECT_EQ(code_of([] {
              auto t = catalog::tetrahedron().faces();
              auto faces = t;
              for (auto f : t) {
                for (int& v : f) v += 4;
                faces.push_back(f);
              }
              AbstractPolyhedron::build(8, faces);
            }),
            ErrorCode::EulerViolation);
}

TEST(Dual, Counts) {
  auto cube = dual(catalog::cube());
  EXPECT_EQ(cube.node_count(), 6);
  EXPECT_EQ(cube.triangle_count(), 8);
  auto ico = dual(catalog::dodecahedron());
  EXPECT_EQ(ico.node_count(), 12);
  EXPECT_EQ(ico.triangle_count(), 20);
  for (int a = 0; a < 12; ++a) EXPECT_EQ(ico.degree(a), 5);
  auto pr5 = dual(catalog::prism(5));
  EXPECT_EQ(pr5.node_count(), 5);
  EXPECT_EQ(pr5.triangle_count(), 6);
  EXPECT_EQ(pr5.edge_count(), 9);
}

TEST(Dual, RoundTrip) {
  for (const auto& [name, c] : corpus()) {
    SCOPED_TRACE(name);
    auto d = dual(c);
    auto back = primal(d);
    EXPECT_TRUE(isomorphic(c, back).has_value());
    // Vertex i is triangle i, so the faces agree up to rotation.
    for (int f = 0; f < c.face_count(); ++f)
      EXPECT_EQ(detail::rotate_min_first(c.face(f)), back.face(f));
    // Dual edges carry the primal edge index.
    for (const auto& e : d.edges()) {
      const auto& pe = c.edge(e.primal_edge);
      EXPECT_TRUE(pe.has_face(e.a) && pe.has_face(e.b));
    }
  }
}

TEST(Circuits, Examples) {
  EXPECT_TRUE(prismatic_circuits(catalog::dodecahedron(), 3).empty());
  auto pr5 = catalog::prism(5);
  auto c3 = prismatic_circuits(pr5, 3);
  ASSERT_EQ(c3.size(), 1u);
  EXPECT_EQ(c3[0].dual_nodes, (std::vector<int>{0, 1, 2}));
  for (int e : c3[0].crossed_edges) {
    // The lateral edges join top and bottom rings.
    EXPECT_LT(pr5.edge(e).u, 3);
    EXPECT_GE(pr5.edge(e).v, 3);
  }
  auto atc = catalog::alternately_truncated_cube();
  auto circuits = prismatic_circuits(atc, 3);
  ASSERT_EQ(circuits.size(), 4u);
  std::set<int> crossed;
  for (const auto& c : circuits) {
    EXPECT_TRUE(is_truncated_triangle(atc, c));
    crossed.insert(c.crossed_edges.begin(), c.crossed_edges.end());
  }
  EXPECT_EQ(crossed.size(), 12u);
}

TEST(Circuits, SimpleFlags) {
  EXPECT_TRUE(is_simple(catalog::dodecahedron()));
  EXPECT_FALSE(is_simple(catalog::prism(5)));
  EXPECT_TRUE(is_simple(catalog::tetrahedron()));
  EXPECT_FALSE(is_simple(catalog::cube_sum()));
  EXPECT_EQ(essential_circuits(catalog::cube_sum()).size(), 1u);
  EXPECT_TRUE(essential_circuits(catalog::truncated_tetrahedron()).empty());
}

TEST(Circuits, MatchBruteForce) {
  for (const auto& [name, c] : corpus()) {
    if (c.face_count() > 14) continue;
    for (int k : {3, 4}) {
      SCOPED_TRACE(name + " k=" + std::to_string(k));
      auto expect = oracle::prismatic(c, k);
      std::set<oracle::EdgeSet> got;
      auto circuits = prismatic_circuits(c, k);
      for (const auto& circ : circuits) {
        EXPECT_EQ(circ.crossed_edges.size(), static_cast<size_t>(k));
        got.insert(oracle::edge_set(circ.dual_nodes));
      }
      EXPECT_EQ(got.size(), circuits.size());
      EXPECT_EQ(got, expect);
    }
  }
}

TEST(Circuits, NonPrismaticTrianglesShareVertex) {
  for (const auto& [name, c] : corpus()) {
    SCOPED_TRACE(name);
    auto prism3 = oracle::prismatic(c, 3);
    for (const auto& es : oracle::all_cycles(c, 3)) {
      if (prism3.count(es)) continue;
      auto edges = oracle::crossed(c, es);
      std::map<int, int> hits;
      for (int e : edges) {
        ++hits[c.edge(e).u];
        ++hits[c.edge(e).v];
      }
      bool common = false;
      for (auto [v, n] : hits) common |= n == 3;
      EXPECT_TRUE(common);
    }
  }
}

TEST(Circuits, NonPrismaticFourCyclesSeparateTwoVertices) {
  for (const auto& [name, c] : corpus()) {
    if (!is_simple(c)) continue;
    SCOPED_TRACE(name);
    auto prism4 = oracle::prismatic(c, 4);
    for (const auto& es : oracle::all_cycles(c, 4)) {
      if (prism4.count(es)) continue;
      auto [smaller, pieces] = oracle::split(c, oracle::crossed(c, es));
      EXPECT_EQ(pieces, 2);
      EXPECT_EQ(smaller, 2);
    }
  }
}

TEST(Quadrilaterals, Contexts) {
  EXPECT_EQ(quadrilateral_contexts(catalog::prism(5)).size(), 3u);
  EXPECT_TRUE(quadrilateral_contexts(catalog::dodecahedron()).empty());
  auto cube = catalog::cube();
  auto ctx = quadrilateral_contexts(cube);
  ASSERT_EQ(ctx.size(), 6u);
  for (const auto& q : ctx) {
    std::set<int> all(q.sides.begin(), q.sides.end());
    for (int i = 0; i < 4; ++i) {
      all.insert(q.entering[i]);
      // e_{i,i+1} meets both sides i and i+1 at one vertex, and is not on the face.
      const auto& e = cube.edge(q.entering[i]);
      EXPECT_FALSE(e.has_face(q.face));
      for (int s : {q.sides[i], q.sides[(i + 1) % 4]}) {
        const auto& se = cube.edge(s);
        EXPECT_TRUE(se.u == e.u || se.u == e.v || se.v == e.u || se.v == e.v);
      }
    }
    EXPECT_EQ(all.size(), 8u);
  }
}

TEST(Collapse, Cube) {
  auto cube = catalog::cube();
  for (int e = 0; e < cube.edge_count(); ++e) {
    auto cc = collapse_edge(cube, e);
    EXPECT_EQ(cc.vertex_count, 7);
    std::map<int, int> degree;
    for (const auto& f : cc.faces)
      for (int v : f) ++degree[v];
    int four = 0;
    for (auto [v, d] : degree) four += d == 4;
    EXPECT_EQ(four, 1);
    EXPECT_EQ(degree[cc.merged_vertex], 4);
  }
}

TEST(Collapse, Dodecahedron) {
  auto c = catalog::dodecahedron();
  auto cc = collapse_edge(c, 0);
  EXPECT_EQ(cc.vertex_count, 19);
  EXPECT_EQ(cc.faces[cc.around_faces[1]].size(), 4u);
  EXPECT_EQ(cc.faces[cc.around_faces[3]].size(), 4u);
  EXPECT_EQ(cc.faces[cc.around_faces[0]].size(), 5u);
  EXPECT_EQ(cc.faces[cc.around_faces[2]].size(), 5u);
  // e_i lies between f_i and f_{i+1}.
  for (int i = 0; i < 4; ++i) {
    const auto& e = c.edge(cc.around_edges[i]);
    EXPECT_TRUE(e.has_face(cc.around_faces[i]) && e.has_face(cc.around_faces[(i + 1) % 4]));
  }
}

TEST(Collapse, Errors) {
  EXPECT_EQ(code_of([] { collapse_edge(catalog::prism(5), 0); }), ErrorCode::NotSimple);
  EXPECT_EQ(code_of([] { collapse_edge(catalog::tetrahedron(), 0); }), ErrorCode::EdgeOnTriangle);
}

TEST(Isomorphic, Examples) {
  auto cube = catalog::cube();
  // Relabel vertices and faces by reversal.
  std::vector<std::vector<int>> faces;
  for (int f = cube.face_count() - 1; f >= 0; --f) {
    std::vector<int> cyc;
    for (int v : cube.face(f)) cyc.push_back(7 - v);
    faces.push_back(cyc);
  }
  auto relabeled = AbstractPolyhedron::build(8, faces);
  auto m = isomorphic(cube, relabeled);
  ASSERT_TRUE(m.has_value());
  for (int v = 0; v < 8; ++v) {
    auto fs = cube.vertex_faces(v);
    auto w = m->vertex_map[v];
    std::set<int> mapped{m->face_map[fs[0]], m->face_map[fs[1]], m->face_map[fs[2]]};
    auto gs = relabeled.vertex_faces(w);
    EXPECT_EQ(mapped, (std::set<int>(gs.begin(), gs.end())));
  }
  EXPECT_FALSE(isomorphic(catalog::tetrahedron(), cube).has_value());
  EXPECT_FALSE(isomorphic(catalog::prism(8), catalog::split_prism(8)).has_value());
  EXPECT_TRUE(isomorphic(catalog::prism(7), catalog::split_prism(7)).has_value());
}

TEST(Isomorphic, MirrorImage) {
  auto d = catalog::dodecahedron();
  std::vector<std::vector<int>> faces;
  for (auto f : d.faces()) {
    std::reverse(f.begin(), f.end());
    faces.push_back(f);
  }
  auto mirror = AbstractPolyhedron::build(20, faces);
  EXPECT_TRUE(isomorphic(d, mirror).has_value());
  EXPECT_EQ(canonical_code(dual(d)), canonical_code(dual(mirror)));
  EXPECT_NE(canonical_code(dual(catalog::prism(8))), canonical_code(dual(catalog::split_prism(8))));
}
