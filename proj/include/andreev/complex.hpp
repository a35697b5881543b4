#pragma once

// Combinatorics of abstract polyhedra: trivalent cell complexes on the sphere
// and their dual triangulations.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "andreev/error.hpp"

namespace andreev {

/// Edge of an abstract polyhedron. `u < v`; `left` traverses u->v, `right` v->u.
struct Edge {
  int u = 0;
  int v = 0;
  int left = -1;
  int right = -1;

  bool has_face(int f) const { return left == f || right == f; }
  int other_face(int f) const { return left == f ? right : left; }
  int other_vertex(int w) const { return u == w ? v : u; }
};

namespace detail {

inline std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

// Rotate a cycle so that its smallest element comes first, preserving direction.
template <class Seq>
Seq rotate_min_first(Seq seq) {
  auto it = std::min_element(seq.begin(), seq.end());
  std::rotate(seq.begin(), it, seq.end());
  return seq;
}

inline std::string describe_face(int f) { return "face " + std::to_string(f); }

}  // namespace detail

/// Makes the face orientations of a sphere complex mutually consistent (every
/// edge traversed once in each direction), keeping face 0 as given.
inline std::vector<std::vector<int>> orient_faces(std::vector<std::vector<int>> faces) {
  std::map<std::pair<int, int>, std::vector<int>> by_edge;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    const auto& cyc = faces[f];
    for (size_t i = 0; i < cyc.size(); ++i) by_edge[detail::ordered(cyc[i], cyc[(i + 1) % cyc.size()])].push_back(f);
  }
  auto has_directed = [&](int f, int a, int b) {
    const auto& cyc = faces[f];
    for (size_t i = 0; i < cyc.size(); ++i)
      if (cyc[i] == a && cyc[(i + 1) % cyc.size()] == b) return true;
    return false;
  };
  std::vector<int> state(faces.size(), 0);
  for (size_t root = 0; root < faces.size(); ++root) {
    if (state[root]) continue;
    state[root] = 1;
    std::queue<int> q;
    q.push(static_cast<int>(root));
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      const auto cyc = faces[f];
      for (size_t i = 0; i < cyc.size(); ++i) {
        int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
        for (int g : by_edge[detail::ordered(a, b)]) {
          if (g == f) continue;
          bool agrees = has_directed(g, b, a);
          if (!state[g]) {
            if (!agrees) std::reverse(faces[g].begin(), faces[g].end());
            state[g] = 1;
            q.push(g);
          } else if (!agrees) {
            fail(ErrorCode::EdgeNotInTwoFaces, "face orientations cannot be made consistent");
          }
        }
      }
    }
  }
  return faces;
}

/// A validated trivalent cell complex on the sphere.
class AbstractPolyhedron {
 public:
  AbstractPolyhedron() = default;

  /// Validates the incidence axioms and derives edges. Throws `Error` naming
  /// the first violated axiom.
  static AbstractPolyhedron build(int vertex_count, std::vector<std::vector<int>> faces) {
    AbstractPolyhedron c;
    c.vertex_count_ = vertex_count;
    c.faces_ = std::move(faces);
    c.validate_and_derive();
    return c;
  }

  int vertex_count() const { return vertex_count_; }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const std::vector<int>& face(int f) const { return faces_.at(f); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }

  /// The three incident edges of a vertex, ascending.
  const std::array<int, 3>& vertex_edges(int v) const { return vertex_edges_.at(v); }

  /// The three faces around a vertex in counterclockwise order (seen from
  /// outside), starting from the lowest face id.
  const std::array<int, 3>& vertex_faces(int v) const { return vertex_faces_.at(v); }

  std::optional<int> edge_index(int a, int b) const {
    auto it = edge_by_vertices_.find(detail::ordered(a, b));
    if (it == edge_by_vertices_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<int> edge_between_faces(int f, int g) const {
    auto it = edge_by_faces_.find(detail::ordered(f, g));
    if (it == edge_by_faces_.end()) return std::nullopt;
    return it->second;
  }

  /// Edges bounding face f in cyclic order: entry i joins face(f)[i] and face(f)[i+1].
  std::vector<int> face_edges(int f) const {
    const auto& cyc = faces_.at(f);
    std::vector<int> out;
    out.reserve(cyc.size());
    for (size_t i = 0; i < cyc.size(); ++i) out.push_back(*edge_index(cyc[i], cyc[(i + 1) % cyc.size()]));
    return out;
  }

  /// Vertex of the complex whose three faces are exactly {a, b, c}.
  std::optional<int> vertex_of_faces(int a, int b, int c) const {
    std::array<int, 3> key{a, b, c};
    std::sort(key.begin(), key.end());
    auto it = vertex_by_faces_.find(key);
    if (it == vertex_by_faces_.end()) return std::nullopt;
    return it->second;
  }

  /// Unordered face-adjacency list (dual graph).
  std::vector<std::vector<int>> face_adjacency() const {
    std::vector<std::vector<int>> adj(faces_.size());
    for (const auto& e : edges_) {
      adj[e.left].push_back(e.right);
      adj[e.right].push_back(e.left);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
  }

  friend bool operator==(const AbstractPolyhedron& a, const AbstractPolyhedron& b) {
    return a.vertex_count_ == b.vertex_count_ && a.faces_ == b.faces_;
  }

 private:
  void validate_and_derive();

  int vertex_count_ = 0;
  std::vector<std::vector<int>> faces_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> vertex_edges_;
  std::vector<std::array<int, 3>> vertex_faces_;
  std::map<std::pair<int, int>, int> edge_by_vertices_;
  std::map<std::pair<int, int>, int> edge_by_faces_;
  std::map<std::array<int, 3>, int> vertex_by_faces_;
};

inline void AbstractPolyhedron::validate_and_derive() {
  const int n = face_count();
  const int nv = vertex_count_;
  if (n <= 3 || nv <= 0) fail(ErrorCode::EulerViolation, "degenerate complex with " + std::to_string(n) + " faces");

  std::vector<std::set<int>> face_sets(n);
  for (int f = 0; f < n; ++f) {
    for (int v : faces_[f]) {
      if (v < 0 || v >= nv) fail(ErrorCode::InvalidInput, detail::describe_face(f) + " has vertex id out of range");
    }
    face_sets[f] = std::set<int>(faces_[f].begin(), faces_[f].end());
    if (face_sets[f].size() != faces_[f].size())
      fail(ErrorCode::InvalidInput, detail::describe_face(f) + " repeats a vertex");
  }
  for (int f = 0; f < n; ++f)
    if (faces_[f].size() < 3) fail(ErrorCode::FaceTooSmall, detail::describe_face(f) + " has fewer than three edges");

  // Undirected edge -> faces using it.
  std::map<std::pair<int, int>, std::vector<int>> users;
  for (int f = 0; f < n; ++f) {
    const auto& cyc = faces_[f];
    for (size_t i = 0; i < cyc.size(); ++i) users[detail::ordered(cyc[i], cyc[(i + 1) % cyc.size()])].push_back(f);
  }

  // Two faces meet in nothing, one vertex, or one edge.
  for (int f = 0; f < n; ++f) {
    for (int g = f + 1; g < n; ++g) {
      std::vector<int> common;
      std::set_intersection(face_sets[f].begin(), face_sets[f].end(), face_sets[g].begin(), face_sets[g].end(),
                            std::back_inserter(common));
      if (common.size() <= 1) continue;
      bool one_edge = false;
      if (common.size() == 2) {
        auto it = users.find(detail::ordered(common[0], common[1]));
        if (it != users.end()) {
          const auto& us = it->second;
          one_edge = std::count(us.begin(), us.end(), f) == 1 && std::count(us.begin(), us.end(), g) == 1;
        }
      }
      if (!one_edge)
        fail(ErrorCode::FacesMeetTwice,
             "faces " + std::to_string(f) + " and " + std::to_string(g) + " meet in more than an edge or vertex");
    }
  }

  // Trivalence.
  std::vector<std::set<int>> vertex_nbrs(nv);
  std::vector<int> vertex_face_count(nv, 0);
  for (int f = 0; f < n; ++f)
    for (int v : faces_[f]) ++vertex_face_count[v];
  for (const auto& [key, us] : users) {
    vertex_nbrs[key.first].insert(key.second);
    vertex_nbrs[key.second].insert(key.first);
  }
  for (int v = 0; v < nv; ++v) {
    if (vertex_face_count[v] != 3 || vertex_nbrs[v].size() != 3)
      fail(ErrorCode::NotTrivalent, "vertex " + std::to_string(v) + " is not incident to exactly three edges and faces");
  }

  // Each edge in exactly two faces, traversed once in each direction.
  std::map<std::pair<int, int>, int> directed;
  for (int f = 0; f < n; ++f) {
    const auto& cyc = faces_[f];
    for (size_t i = 0; i < cyc.size(); ++i) {
      auto key = std::pair{cyc[i], cyc[(i + 1) % cyc.size()]};
      if (directed.count(key))
        fail(ErrorCode::EdgeNotInTwoFaces, "edge " + std::to_string(key.first) + "-" + std::to_string(key.second) +
                                               " traversed twice in the same direction");
      directed[key] = f;
    }
  }
  for (const auto& [key, us] : users) {
    if (us.size() != 2 || !directed.count({key.first, key.second}) || !directed.count({key.second, key.first}))
      fail(ErrorCode::EdgeNotInTwoFaces,
           "edge " + std::to_string(key.first) + "-" + std::to_string(key.second) + " does not lie in two faces");
  }

  // Euler characteristic and connectivity of the face graph.
  const int ne = static_cast<int>(users.size());
  if (n - ne + nv != 2 || ne != 3 * (n - 2))
    fail(ErrorCode::EulerViolation, "N - E + V = " + std::to_string(n - ne + nv));

  edges_.clear();
  edges_.reserve(ne);
  for (const auto& [key, us] : users) {
    Edge e;
    e.u = key.first;
    e.v = key.second;
    e.left = directed.at({key.first, key.second});
    e.right = directed.at({key.second, key.first});
    edge_by_vertices_[key] = static_cast<int>(edges_.size());
    edge_by_faces_[detail::ordered(e.left, e.right)] = static_cast<int>(edges_.size());
    edges_.push_back(e);
  }

  {
    std::vector<int> seen(n, 0);
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : edges_) {
      adj[e.left].push_back(e.right);
      adj[e.right].push_back(e.left);
    }
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      for (int g : adj[f])
        if (!seen[g]) {
          seen[g] = 1;
          ++count;
          q.push(g);
        }
    }
    if (count != n) fail(ErrorCode::EulerViolation, "face graph is disconnected");
  }

  vertex_edges_.assign(nv, {-1, -1, -1});
  {
    std::vector<int> fill(nv, 0);
    for (int e = 0; e < ne; ++e) {
      vertex_edges_[edges_[e].u][fill[edges_[e].u]++] = e;
      vertex_edges_[edges_[e].v][fill[edges_[e].v]++] = e;
    }
  }

  // Counterclockwise face order around each vertex: after face f comes the face
  // containing the directed edge v -> prev_f(v).
  vertex_faces_.assign(nv, {-1, -1, -1});
  std::vector<int> first_face(nv, -1);
  for (int f = 0; f < n; ++f)
    for (int v : faces_[f])
      if (first_face[v] < 0 || f < first_face[v]) first_face[v] = f;
  auto prev_in = [&](int f, int v) {
    const auto& cyc = faces_[f];
    auto it = std::find(cyc.begin(), cyc.end(), v);
    size_t i = static_cast<size_t>(it - cyc.begin());
    return cyc[(i + cyc.size() - 1) % cyc.size()];
  };
  for (int v = 0; v < nv; ++v) {
    int f = first_face[v];
    for (int k = 0; k < 3; ++k) {
      vertex_faces_[v][k] = f;
      f = directed.at({v, prev_in(f, v)});
    }
    std::array<int, 3> key = vertex_faces_[v];
    std::sort(key.begin(), key.end());
    vertex_by_faces_[key] = v;
  }
}

// ---------------------------------------------------------------------------
// Dual complex

struct DualEdge {
  int a = 0;  // a < b
  int b = 0;
  int primal_edge = -1;
};

/// Triangulation of the sphere dual to an abstract polyhedron: node = face,
/// triangle = vertex (counterclockwise from outside), edge = edge.
class DualComplex {
 public:
  DualComplex() = default;

  /// Builds from oriented triangles; triangle i becomes primal vertex i.
  static DualComplex from_triangles(int node_count, std::vector<std::array<int, 3>> triangles) {
    DualComplex d;
    d.node_count_ = node_count;
    for (auto& t : triangles) t = detail::rotate_min_first(t);
    d.triangles_ = std::move(triangles);
    d.derive();
    return d;
  }

  int node_count() const { return node_count_; }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<DualEdge>& edges() const { return edges_; }

  bool adjacent(int a, int b) const { return third_.count({a, b}) > 0; }

  /// Third node of the triangle containing the directed edge a->b.
  std::optional<int> apex(int a, int b) const {
    auto it = third_.find({a, b});
    if (it == third_.end()) return std::nullopt;
    return it->second;
  }

  /// Neighbors of a node in counterclockwise rotation order, starting at the
  /// lowest-id neighbor.
  std::vector<int> link(int a) const {
    std::vector<int> out;
    int start = -1;
    for (const auto& [key, third] : third_)
      if (key.first == a && (start < 0 || key.second < start)) start = key.second;
    if (start < 0) return out;
    int cur = start;
    do {
      out.push_back(cur);
      cur = third_.at({a, cur});
    } while (cur != start && out.size() <= static_cast<size_t>(node_count_));
    return out;
  }

  int degree(int a) const { return static_cast<int>(link(a).size()); }

  /// Sorted adjacency lists.
  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(node_count_);
    for (const auto& e : edges_) {
      adj[e.a].push_back(e.b);
      adj[e.b].push_back(e.a);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
  }

  /// Triangles in canonical order (each rotated min-first, list sorted).
  std::vector<std::array<int, 3>> canonical_triangles() const {
    auto t = triangles_;
    std::sort(t.begin(), t.end());
    return t;
  }

  bool same_as(const DualComplex& other) const {
    return node_count_ == other.node_count_ && canonical_triangles() == other.canonical_triangles();
  }

 private:
  void derive() {
    third_.clear();
    for (const auto& t : triangles_) {
      for (int i = 0; i < 3; ++i) {
        auto key = std::pair{t[i], t[(i + 1) % 3]};
        if (third_.count(key)) fail(ErrorCode::InvalidInput, "directed dual edge repeated");
        third_[key] = t[(i + 2) % 3];
      }
    }
    // Primal edge indices follow the lexicographic order of primal vertex
    // (= triangle) pairs, matching AbstractPolyhedron::build on primal().
    std::map<std::pair<int, int>, std::vector<int>> tris_of_edge;
    for (int i = 0; i < static_cast<int>(triangles_.size()); ++i) {
      const auto& t = triangles_[i];
      for (int k = 0; k < 3; ++k) tris_of_edge[detail::ordered(t[k], t[(k + 1) % 3])].push_back(i);
    }
    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> keyed;  // (primal vertex pair, node pair)
    for (const auto& [nodes, tris] : tris_of_edge) {
      if (tris.size() != 2) fail(ErrorCode::InvalidInput, "dual edge not shared by two triangles");
      keyed.push_back({detail::ordered(tris[0], tris[1]), nodes});
    }
    std::sort(keyed.begin(), keyed.end());
    edges_.clear();
    for (int i = 0; i < static_cast<int>(keyed.size()); ++i)
      edges_.push_back(DualEdge{keyed[i].second.first, keyed[i].second.second, i});
    std::sort(edges_.begin(), edges_.end(), [](const DualEdge& x, const DualEdge& y) {
      return std::pair{x.a, x.b} < std::pair{y.a, y.b};
    });
  }

  int node_count_ = 0;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<DualEdge> edges_;
  std::map<std::pair<int, int>, int> third_;
};

/// Dual triangulation; triangle i is vertex i of the complex.
inline DualComplex dual(const AbstractPolyhedron& c) {
  std::vector<std::array<int, 3>> tris;
  tris.reserve(c.vertex_count());
  for (int v = 0; v < c.vertex_count(); ++v) tris.push_back(c.vertex_faces(v));
  return DualComplex::from_triangles(c.face_count(), std::move(tris));
}

/// Abstract polyhedron of a dual triangulation: vertex i = triangle i, face a =
/// the triangles around node a in counterclockwise order.
inline AbstractPolyhedron primal(const DualComplex& d) {
  std::map<std::pair<int, int>, int> tri_of_directed;
  const auto& tris = d.triangles();
  for (int i = 0; i < static_cast<int>(tris.size()); ++i)
    for (int k = 0; k < 3; ++k) tri_of_directed[{tris[i][k], tris[i][(k + 1) % 3]}] = i;
  std::vector<std::vector<int>> faces(d.node_count());
  for (int a = 0; a < d.node_count(); ++a) {
    auto nbrs = d.link(a);
    if (nbrs.empty()) fail(ErrorCode::InvalidInput, "isolated dual node " + std::to_string(a));
    // Triangle containing a->x is followed (ccw around a) by the one containing a->apex.
    std::vector<int> cyc;
    for (int x : nbrs) cyc.push_back(tri_of_directed.at({a, x}));
    faces[a] = detail::rotate_min_first(cyc);
  }
  return AbstractPolyhedron::build(static_cast<int>(tris.size()), std::move(faces));
}

// ---------------------------------------------------------------------------
// Circuits

enum class CircuitKind { Prismatic3, Prismatic4 };

struct Circuit {
  CircuitKind kind = CircuitKind::Prismatic3;
  std::vector<int> dual_nodes;     // cyclic; starts at the smallest node
  std::vector<int> crossed_edges;  // edge between dual_nodes[i] and dual_nodes[i+1]

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

inline std::string_view to_string(CircuitKind k) { return k == CircuitKind::Prismatic3 ? "prismatic3" : "prismatic4"; }

/// True when the primal edges share no endpoint.
inline bool endpoints_distinct(const AbstractPolyhedron& c, const std::vector<int>& edges) {
  std::set<int> ends;
  for (int e : edges) {
    ends.insert(c.edge(e).u);
    ends.insert(c.edge(e).v);
  }
  return ends.size() == 2 * edges.size();
}

/// All k-cycles of the dual (k = 3 or 4) whose crossed edges have pairwise
/// distinct endpoints, ordered by (sorted node tuple, node sequence).
inline std::vector<Circuit> prismatic_circuits(const AbstractPolyhedron& c, int k) {
  if (k != 3 && k != 4) fail(ErrorCode::InvalidInput, "circuit length must be 3 or 4");
  const auto adj = c.face_adjacency();
  const int n = c.face_count();
  auto edge_of = [&](int a, int b) { return *c.edge_between_faces(a, b); };
  std::vector<std::pair<std::vector<int>, Circuit>> found;
  auto consider = [&](std::vector<int> cyc) {
    std::vector<int> crossed;
    for (size_t i = 0; i < cyc.size(); ++i) crossed.push_back(edge_of(cyc[i], cyc[(i + 1) % cyc.size()]));
    if (!endpoints_distinct(c, crossed)) return;
    auto key = cyc;
    std::sort(key.begin(), key.end());
    found.push_back({key, Circuit{k == 3 ? CircuitKind::Prismatic3 : CircuitKind::Prismatic4, cyc, crossed}});
  };
  auto is_adj = [&](int a, int b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };
  for (int a = 0; a < n; ++a) {
    for (int b : adj[a]) {
      if (b <= a) continue;
      if (k == 3) {
        for (int cc : adj[b])
          if (cc > b && is_adj(cc, a)) consider({a, b, cc});
      } else {
        for (int cc : adj[b]) {
          if (cc <= a || cc == b) continue;
          for (int d : adj[cc]) {
            if (d <= a || d == b || d == cc || d < b) continue;
            if (is_adj(d, a) && d != b) consider({a, b, cc, d});
          }
        }
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    return std::tie(x.first, x.second.dual_nodes) < std::tie(y.first, y.second.dual_nodes);
  });
  std::vector<Circuit> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

/// No prismatic 3-circuits.
inline bool is_simple(const AbstractPolyhedron& c) { return prismatic_circuits(c, 3).empty(); }

/// Sizes of the pieces of the dual graph left after deleting `nodes`.
inline std::vector<int> dual_components_without(const AbstractPolyhedron& c, const std::vector<int>& nodes) {
  const auto adj = c.face_adjacency();
  std::vector<int> removed(c.face_count(), 0);
  for (int x : nodes) removed[x] = 1;
  std::vector<int> seen(c.face_count(), 0), sizes;
  for (int s = 0; s < c.face_count(); ++s) {
    if (removed[s] || seen[s]) continue;
    int count = 0;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      ++count;
      for (int g : adj[f])
        if (!removed[g] && !seen[g]) {
          seen[g] = 1;
          q.push(g);
        }
    }
    sizes.push_back(count);
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

/// A prismatic 3-circuit that cuts off a single face (a truncated vertex).
inline bool is_truncated_triangle(const AbstractPolyhedron& c, const Circuit& circuit) {
  auto sizes = dual_components_without(c, circuit.dual_nodes);
  return !sizes.empty() && sizes.front() == 1;
}

/// Prismatic 3-circuits that are not truncated triangles.
inline std::vector<Circuit> essential_circuits(const AbstractPolyhedron& c) {
  std::vector<Circuit> out;
  for (auto& circ : prismatic_circuits(c, 3))
    if (!is_truncated_triangle(c, circ)) out.push_back(circ);
  return out;
}

/// Number of primal vertices on the smaller side after deleting the given edges
/// (and the components count).
inline std::pair<int, int> vertex_split(const AbstractPolyhedron& c, const std::vector<int>& cut_edges) {
  std::vector<std::vector<int>> adj(c.vertex_count());
  std::set<int> cut(cut_edges.begin(), cut_edges.end());
  for (int e = 0; e < c.edge_count(); ++e) {
    if (cut.count(e)) continue;
    adj[c.edge(e).u].push_back(c.edge(e).v);
    adj[c.edge(e).v].push_back(c.edge(e).u);
  }
  std::vector<int> seen(c.vertex_count(), 0), sizes;
  for (int s = 0; s < c.vertex_count(); ++s) {
    if (seen[s]) continue;
    int count = 0;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      ++count;
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
    }
    sizes.push_back(count);
  }
  return {*std::min_element(sizes.begin(), sizes.end()), static_cast<int>(sizes.size())};
}

// ---------------------------------------------------------------------------
// Quadrilateral contexts

/// A four-sided face with its boundary edges e1..e4 (cyclic) and the edges
/// e12, e23, e34, e41 entering its corners.
struct QuadContext {
  int face = -1;
  std::array<int, 4> sides{};
  std::array<int, 4> entering{};
};

inline std::vector<QuadContext> quadrilateral_contexts(const AbstractPolyhedron& c) {
  std::vector<QuadContext> out;
  for (int f = 0; f < c.face_count(); ++f) {
    const auto& cyc = c.face(f);
    if (cyc.size() != 4) continue;
    QuadContext q;
    q.face = f;
    auto sides = c.face_edges(f);  // side i joins corners i and i+1
    for (int i = 0; i < 4; ++i) q.sides[i] = sides[i];
    // e_{i,i+1} enters corner i+1, the common end of sides i and i+1.
    for (int i = 0; i < 4; ++i) {
      int corner = cyc[(i + 1) % 4];
      for (int e : c.vertex_edges(corner))
        if (e != sides[i] && e != sides[(i + 1) % 4]) q.entering[i] = e;
    }
    out.push_back(q);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Edge collapse

/// The complex with one edge contracted to a 4-valent vertex. Faces f1..f4 and
/// edges e1..e4 surround the merged vertex cyclically; e_i lies between f_i and
/// f_{i+1}, f2 and f4 contained the collapsed edge.
struct ContractedComplex {
  int vertex_count = 0;
  std::vector<std::vector<int>> faces;
  int merged_vertex = -1;
  int collapsed_edge = -1;
  std::array<int, 4> around_faces{};
  std::array<int, 4> around_edges{};  // edge indices in the original complex
};

inline ContractedComplex collapse_edge(const AbstractPolyhedron& c, int edge) {
  if (edge < 0 || edge >= c.edge_count()) fail(ErrorCode::InvalidInput, "edge index out of range");
  if (!is_simple(c)) fail(ErrorCode::NotSimple, "edge collapse requires a complex without prismatic 3-circuits");
  const Edge& e = c.edge(edge);
  if (c.face(e.left).size() <= 3 || c.face(e.right).size() <= 3)
    fail(ErrorCode::EdgeOnTriangle, "edge " + std::to_string(edge) + " bounds a triangular face");

  const int v1 = e.u, v2 = e.v;
  auto third_face = [&](int v) {
    for (int f : c.vertex_faces(v))
      if (!e.has_face(f)) return f;
    return -1;
  };
  auto edge_between = [&](int f, int g) { return *c.edge_between_faces(f, g); };
  ContractedComplex out;
  out.collapsed_edge = edge;
  out.merged_vertex = v1;
  // Counterclockwise around the merged vertex: third(v1), the face on the
  // right of v1->v2, third(v2), the face on the left.
  const int g1 = third_face(v1), g2 = third_face(v2);
  // Around v1 (ccw): left -> g1 -> right or left -> right -> g1; pick the ccw cycle g1, a, g2, b.
  const auto& fv1 = c.vertex_faces(v1);
  int idx = static_cast<int>(std::find(fv1.begin(), fv1.end(), g1) - fv1.begin());
  int after_g1 = fv1[(idx + 1) % 3];
  int other = after_g1 == e.left ? e.right : e.left;
  out.around_faces = {g1, after_g1, g2, other};
  for (int i = 0; i < 4; ++i) out.around_edges[i] = edge_between(out.around_faces[i], out.around_faces[(i + 1) % 4]);

  // Relabel: v2 merges into v1, higher ids shift down.
  auto relabel = [&](int v) {
    if (v == v2) return v1;
    return v > v2 ? v - 1 : v;
  };
  out.vertex_count = c.vertex_count() - 1;
  if (out.merged_vertex > v2) --out.merged_vertex;
  for (int f = 0; f < c.face_count(); ++f) {
    std::vector<int> cyc;
    for (int v : c.face(f)) {
      int w = relabel(v);
      if (cyc.empty() || cyc.back() != w) cyc.push_back(w);
    }
    if (cyc.size() > 1 && cyc.front() == cyc.back()) cyc.pop_back();
    out.faces.push_back(cyc);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism

/// Bijections of faces and vertices preserving incidence.
struct Relabeling {
  std::vector<int> face_map;    // face of a -> face of b
  std::vector<int> vertex_map;  // vertex of a -> vertex of b
};

namespace detail {

// Maps nodes by propagating a dart correspondence through the rotation
// systems. `flip` reverses orientation in b.
inline std::optional<std::vector<int>> propagate(const DualComplex& a, const DualComplex& b, int a0, int a1, int b0,
                                                 int b1, bool flip) {
  const int n = a.node_count();
  std::vector<int> map(n, -1), inv(n, -1);
  std::queue<std::array<int, 4>> q;
  auto assign = [&](int x, int y) {
    if (map[x] == -1 && inv[y] == -1) {
      map[x] = y;
      inv[y] = x;
      return true;
    }
    return map[x] == y;
  };
  if (!assign(a0, b0) || !assign(a1, b1)) return std::nullopt;
  q.push({a0, a1, b0, b1});
  std::set<std::pair<int, int>> done;
  while (!q.empty()) {
    auto [x, y, u, w] = q.front();
    q.pop();
    if (!done.insert({x, y}).second) continue;
    // Walk around x in a and around u in b simultaneously.
    int cy = y, cw = w;
    const int deg = a.degree(x);
    if (deg != b.degree(u)) return std::nullopt;
    for (int k = 0; k < deg; ++k) {
      if (!assign(cy, cw)) return std::nullopt;
      q.push({cy, x, cw, u});
      auto ny = a.apex(x, cy);
      auto nw = flip ? b.apex(cw, u) : b.apex(u, cw);
      if (!ny || !nw) return std::nullopt;
      cy = *ny;
      cw = *nw;
    }
    if (cy != y || cw != w) return std::nullopt;
  }
  for (int x = 0; x < n; ++x)
    if (map[x] < 0) return std::nullopt;
  return map;
}

}  // namespace detail

/// Node bijection between two dual triangulations preserving adjacency
/// (orientation may reverse), or nothing.
inline std::optional<std::vector<int>> isomorphic(const DualComplex& a, const DualComplex& b) {
  if (a.node_count() != b.node_count() || a.triangle_count() != b.triangle_count() ||
      a.edge_count() != b.edge_count())
    return std::nullopt;
  {
    std::vector<int> da, db;
    for (int x = 0; x < a.node_count(); ++x) da.push_back(a.degree(x));
    for (int x = 0; x < b.node_count(); ++x) db.push_back(b.degree(x));
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db) return std::nullopt;
  }
  const int a0 = 0;
  const int a1 = a.link(0).front();
  for (const auto& e : b.edges()) {
    for (auto [u, w] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
      for (bool flip : {false, true}) {
        auto m = detail::propagate(a, b, a0, a1, u, w, flip);
        if (!m) continue;
        // Verify adjacency is preserved.
        bool ok = true;
        for (const auto& ea : a.edges())
          if (!b.adjacent((*m)[ea.a], (*m)[ea.b])) ok = false;
        if (ok) return m;
      }
    }
  }
  return std::nullopt;
}

inline std::optional<Relabeling> isomorphic(const AbstractPolyhedron& a, const AbstractPolyhedron& b) {
  if (a.face_count() != b.face_count() || a.vertex_count() != b.vertex_count()) return std::nullopt;
  auto m = isomorphic(dual(a), dual(b));
  if (!m) return std::nullopt;
  Relabeling r;
  r.face_map = *m;
  r.vertex_map.resize(a.vertex_count());
  for (int v = 0; v < a.vertex_count(); ++v) {
    auto f = a.vertex_faces(v);
    auto w = b.vertex_of_faces(r.face_map[f[0]], r.face_map[f[1]], r.face_map[f[2]]);
    if (!w) return std::nullopt;
    r.vertex_map[v] = *w;
  }
  return r;
}

/// Canonical code of a dual triangulation up to relabeling and reflection;
/// equal codes iff isomorphic.
inline std::vector<int> canonical_code(const DualComplex& d) {
  std::vector<int> best;
  const int n = d.node_count();
  for (const auto& e : d.edges()) {
    for (auto [s0, s1] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
      for (bool flip : {false, true}) {
        std::vector<int> num(n, -1), code;
        std::vector<std::pair<int, int>> order;  // (node, entering neighbor)
        int next = 0;
        num[s0] = next++;
        order.push_back({s0, s1});
        for (size_t i = 0; i < order.size(); ++i) {
          auto [x, from] = order[i];
          int cur = from;
          const int deg = d.degree(x);
          code.push_back(-1 - deg);
          for (int k = 0; k < deg; ++k) {
            if (num[cur] < 0) {
              num[cur] = next++;
              order.push_back({cur, x});
            }
            code.push_back(num[cur]);
            cur = flip ? *d.apex(cur, x) : *d.apex(x, cur);
          }
        }
        if (best.empty() || code < best) best = code;
      }
    }
  }
  return best;
}

}  // namespace andreev
