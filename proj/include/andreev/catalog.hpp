#pragma once

// Named complexes used as fixtures and reduction targets.

#include <array>
#include <vector>

#include "andreev/complex.hpp"

namespace andreev::catalog {

inline AbstractPolyhedron tetrahedron() {
  return AbstractPolyhedron::build(4, orient_faces({{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}}));
}

/// Prism Pr_N over an (N-2)-gon. Faces: laterals 0..M-1, top M, bottom M+1;
/// vertices: top ring 0..M-1, bottom ring M..2M-1.
inline AbstractPolyhedron prism(int n) {
  if (n < 5) fail(ErrorCode::InvalidInput, "prism needs at least five faces");
  const int m = n - 2;
  std::vector<std::vector<int>> faces;
  for (int i = 0; i < m; ++i) faces.push_back({i, m + i, m + (i + 1) % m, (i + 1) % m});
  std::vector<int> top, bottom{m};
  for (int i = 0; i < m; ++i) top.push_back(i);
  for (int i = m - 1; i >= 1; --i) bottom.push_back(m + i);
  faces.push_back(top);
  faces.push_back(bottom);
  return AbstractPolyhedron::build(2 * m, orient_faces(std::move(faces)));
}

/// The cube is the prism over a square.
inline AbstractPolyhedron cube() { return prism(6); }

inline AbstractPolyhedron dodecahedron() {
  // a_i = i, b_i = 5+i, c_i = 10+i, d_i = 15+i.
  auto a = [](int i) { return (i % 5 + 5) % 5; };
  auto b = [&](int i) { return 5 + a(i); };
  auto c = [&](int i) { return 10 + a(i); };
  auto d = [&](int i) { return 15 + a(i); };
  std::vector<std::vector<int>> faces;
  faces.push_back({a(0), a(1), a(2), a(3), a(4)});
  for (int i = 0; i < 5; ++i) faces.push_back({a(i + 1), a(i), b(i), c(i), b(i + 1)});
  for (int i = 0; i < 5; ++i) faces.push_back({c(i), d(i), d(i + 1), c(i + 1), b(i + 1)});
  faces.push_back({d(4), d(3), d(2), d(1), d(0)});
  return AbstractPolyhedron::build(20, orient_faces(std::move(faces)));
}

/// Split prism D_N (N > 6): an (N-1)-prism doubled across one lateral face.
/// Faces: laterals 0..M-1 with M = N-3 (lateral 0 is the split face F), top
/// T = M, opposite cap T' = M+1, the mirror half F' = M+2.
inline AbstractPolyhedron split_prism(int n) {
  if (n < 7) fail(ErrorCode::InvalidInput, "split prism needs at least seven faces");
  const int m = n - 3;
  auto t = [&](int i) { return ((i % m) + m) % m; };
  auto s = [&](int i) { return m + t(i); };
  const int j0 = 2 * m, j1 = 2 * m + 1;
  std::vector<std::vector<int>> faces;
  faces.push_back({t(0), j0, j1, t(1)});
  for (int i = 1; i < m; ++i) {
    std::vector<int> f{t(i)};
    if (i == 1) f.push_back(j1);
    f.push_back(s(i));
    f.push_back(s(i + 1));
    if (i == m - 1) f.push_back(j0);
    f.push_back(t(i + 1));
    faces.push_back(f);
  }
  std::vector<int> top, cap{s(0)};
  for (int i = 0; i < m; ++i) top.push_back(t(i));
  for (int i = m - 1; i >= 1; --i) cap.push_back(s(i));
  faces.push_back(top);
  faces.push_back(cap);
  faces.push_back({j0, s(0), s(1), j1});
  return AbstractPolyhedron::build(2 * m + 2, orient_faces(std::move(faces)));
}

/// Replaces vertex v by a triangular face. The new triangle is the last face;
/// v's id is reused for one corner and two vertices are appended.
inline AbstractPolyhedron truncate_vertex(const AbstractPolyhedron& c, int v) {
  const int base = c.vertex_count();
  // Corner on edge (v, w) for each neighbor w.
  std::array<int, 3> nbr{};
  std::array<int, 3> corner{v, base, base + 1};
  for (int k = 0; k < 3; ++k) nbr[k] = c.edge(c.vertex_edges(v)[k]).other_vertex(v);
  auto corner_of = [&](int w) {
    for (int k = 0; k < 3; ++k)
      if (nbr[k] == w) return corner[k];
    return -1;
  };
  std::vector<std::vector<int>> faces;
  for (int f = 0; f < c.face_count(); ++f) {
    const auto& cyc = c.face(f);
    std::vector<int> out;
    for (size_t i = 0; i < cyc.size(); ++i) {
      if (cyc[i] != v) {
        out.push_back(cyc[i]);
        continue;
      }
      int prev = cyc[(i + cyc.size() - 1) % cyc.size()];
      int next = cyc[(i + 1) % cyc.size()];
      out.push_back(corner_of(prev));
      out.push_back(corner_of(next));
    }
    faces.push_back(out);
  }
  faces.push_back({corner[0], corner[1], corner[2]});
  return AbstractPolyhedron::build(base + 2, orient_faces(std::move(faces)));
}

/// Tetrahedron with all four vertices truncated (N = 8).
inline AbstractPolyhedron truncated_tetrahedron() {
  auto c = tetrahedron();
  for (int v = 0; v < 4; ++v) c = truncate_vertex(c, v);
  return c;
}

/// Cube with four pairwise non-adjacent vertices truncated (N = 10).
inline AbstractPolyhedron alternately_truncated_cube() {
  auto c = cube();
  for (int v : {0, 2, 5, 7}) c = truncate_vertex(c, v);
  return c;
}

/// Connected sum at vertices: the triangles of v1 and v2 are removed from the
/// duals and their boundary nodes identified, leaving an essential 3-circuit.
/// Faces of `a` keep their ids; the rest of `b` follows in order.
inline AbstractPolyhedron connected_sum(const AbstractPolyhedron& a, int v1, const AbstractPolyhedron& b, int v2) {
  const auto fa = a.vertex_faces(v1);
  const auto fb = b.vertex_faces(v2);
  std::vector<int> map(b.face_count(), -1);
  // Reverse orientation across the seam.
  map[fb[0]] = fa[0];
  map[fb[1]] = fa[2];
  map[fb[2]] = fa[1];
  int next = a.face_count();
  for (int f = 0; f < b.face_count(); ++f)
    if (map[f] < 0) map[f] = next++;
  std::vector<std::array<int, 3>> tris;
  for (int v = 0; v < a.vertex_count(); ++v)
    if (v != v1) tris.push_back(a.vertex_faces(v));
  for (int v = 0; v < b.vertex_count(); ++v) {
    if (v == v2) continue;
    auto t = b.vertex_faces(v);
    tris.push_back({map[t[0]], map[t[1]], map[t[2]]});
  }
  return primal(DualComplex::from_triangles(next, std::move(tris)));
}

/// Two cubes joined at a vertex (N = 9, one essential 3-circuit).
inline AbstractPolyhedron cube_sum() { return connected_sum(cube(), 0, cube(), 0); }

}  // namespace andreev::catalog
