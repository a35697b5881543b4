#pragma once

// Hyperboloid model of H^3 in E^{3,1}: planes are given by unit spacelike
// normals v, with the polyhedron on the side <x, v> <= 0.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "andreev/catalog.hpp"
#include "andreev/complex.hpp"
#include "andreev/error.hpp"
#include "andreev/rational.hpp"

namespace andreev {

using MVec = Eigen::Vector4d;
using Lorentz = Eigen::Matrix4d;

inline constexpr double kPi = std::numbers::pi;

inline double inner(const MVec& a, const MVec& b) { return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

inline MVec flip_time(const MVec& x) { return MVec(-x[0], x[1], x[2], x[3]); }

inline Lorentz eta() { return Eigen::Vector4d(-1, 1, 1, 1).asDiagonal(); }

enum class Causal { Timelike, Lightlike, Spacelike };

inline Causal causal_type(const MVec& x, double tol = 1e-9) {
  double n = inner(x, x);
  if (n < -tol) return Causal::Timelike;
  if (n > tol) return Causal::Spacelike;
  return Causal::Lightlike;
}

inline MVec unit_spacelike(const MVec& v) {
  double n = inner(v, v);
  if (!(n > 0)) fail(ErrorCode::InvalidInput, "normal is not spacelike");
  return v / std::sqrt(n);
}

/// A vector orthogonal to a, b, c in the Minkowski form.
inline MVec cross(const MVec& a, const MVec& b, const MVec& c) {
  MVec e;
  Eigen::Matrix4d m;
  m.row(0) = a.transpose();
  m.row(1) = b.transpose();
  m.row(2) = c.transpose();
  for (int i = 0; i < 4; ++i) {
    m.row(3) = MVec::Unit(i).transpose();
    e[i] = m.determinant();
  }
  return flip_time(e);
}

inline Eigen::Matrix3d gram(const MVec& a, const MVec& b, const MVec& c) {
  const std::array<const MVec*, 3> v{&a, &b, &c};
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = inner(*v[i], *v[j]);
  return g;
}

inline double gram_det(const MVec& a, const MVec& b, const MVec& c) { return gram(a, b, c).determinant(); }

/// Poincare ball coordinates of a point on the upper sheet.
inline Eigen::Vector3d to_ball(const MVec& p) { return p.tail<3>() / (1 + p[0]); }

inline bool is_lorentz(const Lorentz& g, double tol = 1e-9) {
  return (g.transpose() * eta() * g - eta()).cwiseAbs().maxCoeff() < tol && g(0, 0) > 0;
}

// ---------------------------------------------------------------------------
// Angle formulas

inline double dihedral(const MVec& v, const MVec& w) {
  double c = inner(v, w);
  if (!(c * c < 1)) fail(ErrorCode::NotIntersecting, "planes do not meet at a positive angle");
  return std::acos(-c);
}

enum class VertexKind { Finite, Ideal, None };

struct TripleClass {
  VertexKind kind = VertexKind::None;
  double det = 0;      // expanded determinant
  double product = 0;  // four-cosine product form
};

/// Classifies the three planes with pairwise dihedral angles a, b, c by the
/// Gram determinant.
inline TripleClass triple_class(double a, double b, double c, double tol = 1e-12) {
  for (double x : {a, b, c})
    if (!(x > 0) || x > kPi / 2 + tol) fail(ErrorCode::OutOfRange, "angle outside (0, pi/2]");
  const double ca = std::cos(a), cb = std::cos(b), cc = std::cos(c);
  TripleClass t;
  t.det = 1 - 2 * ca * cb * cc - ca * ca - cb * cb - cc * cc;
  t.product = -4 * std::cos((a + b + c) / 2) * std::cos((a - b + c) / 2) * std::cos((a + b - c) / 2) *
              std::cos((-a + b + c) / 2);
  if (t.det > tol)
    t.kind = VertexKind::Finite;
  else if (t.det >= -tol)
    t.kind = VertexKind::Ideal;
  else
    t.kind = VertexKind::None;
  return t;
}

/// Face angle at a vertex with dihedral angles ai, aj, ak, measured in the
/// face that does not contain the edge carrying ai.
inline double face_angle(double ai, double aj, double ak) {
  if (triple_class(ai, aj, ak).kind != VertexKind::Finite)
    fail(ErrorCode::NoFiniteVertex, "angle sum does not exceed pi");
  double x = (std::cos(ai) + std::cos(aj) * std::cos(ak)) / (std::sin(aj) * std::sin(ak));
  return std::acos(std::clamp(x, -1.0, 1.0));
}

/// Legs a1, a2, a3 on the coordinate axes cutting out a triangle with sides
/// s1, s2, s3 (s_i opposite the i-th axis point).
inline std::array<double, 3> normalize_triangle(double s1, double s2, double s3) {
  const std::array<double, 3> c{std::cosh(s1), std::cosh(s2), std::cosh(s3)};
  std::array<double, 3> a{};
  for (int i = 0; i < 3; ++i) {
    double sq = c[(i + 1) % 3] * c[(i + 2) % 3] / c[i];
    if (sq < 1 - 1e-12) fail(ErrorCode::BadParameters, "triangle is obtuse");
    a[i] = std::acosh(std::sqrt(std::max(1.0, sq)));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Points and planes from triples of planes

inline bool pairwise_intersecting(const Eigen::Matrix3d& g) {
  return g(0, 1) * g(0, 1) < 1 && g(0, 2) * g(0, 2) < 1 && g(1, 2) * g(1, 2) < 1;
}

/// Common point of three planes, normalized to <p, p> = -1 with x0 > 0.
inline MVec vertex_point(const MVec& v1, const MVec& v2, const MVec& v3, double tol = 1e-9) {
  auto g = gram(v1, v2, v3);
  if (!pairwise_intersecting(g)) fail(ErrorCode::NoCommonPoint, "two of the planes do not meet");
  double det = g.determinant();
  if (det < -tol) fail(ErrorCode::NoCommonPoint, "Gram matrix is indefinite");
  if (det <= tol) fail(ErrorCode::IdealPoint, "planes meet at infinity");
  MVec p = cross(v1, v2, v3);
  double n = -inner(p, p);
  if (!(n > 0)) fail(ErrorCode::IdealPoint, "common direction is not timelike");
  p /= std::sqrt(n);
  if (p[0] < 0) p = -p;
  return p;
}

/// Plane meeting the three given planes at right angles, oriented so that
/// `interior` lies on its polyhedron side.
inline MVec perp_plane(const MVec& v1, const MVec& v2, const MVec& v3, const MVec& interior, double tol = 1e-9) {
  double det = gram_det(v1, v2, v3);
  if (det >= -tol) fail(ErrorCode::CommonPoint, "planes share a point of the closed ball");
  MVec w = cross(v1, v2, v3);
  double n = inner(w, w);
  if (!(n > 0)) fail(ErrorCode::CommonPoint, "orthogonal direction is not spacelike");
  w /= std::sqrt(n);
  if (inner(interior, w) > 0) w = -w;
  return w;
}

// ---------------------------------------------------------------------------
// Realizations

struct Realization {
  AbstractPolyhedron complex;
  std::vector<MVec> normals;                      // per face
  std::vector<MVec> vertices;                     // per vertex
  std::vector<double> dihedral;                   // per edge, radians
  std::vector<double> length;                     // per edge
  std::vector<std::vector<double>> corner_angle;  // per face, at face(f)[i]
  std::vector<double> vertex_det;                 // Gram determinant of each vertex's planes

  double margin() const { return vertex_det.empty() ? 0 : *std::min_element(vertex_det.begin(), vertex_det.end()); }
};

inline double corner(const MVec& p, const MVec& q1, const MVec& q2) {
  MVec u1 = q1 + inner(q1, p) * p;
  MVec u2 = q2 + inner(q2, p) * p;
  double c = inner(u1, u2) / std::sqrt(inner(u1, u1) * inner(u2, u2));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Derived data for normals already known to realize c.
inline Realization measure(const AbstractPolyhedron& c, const std::vector<MVec>& normals, double tol = 1e-9) {
  if (static_cast<int>(normals.size()) != c.face_count())
    fail(ErrorCode::SizeMismatch, "one normal per face is required");
  Realization r;
  r.complex = c;
  r.normals = normals;
  for (int v = 0; v < c.vertex_count(); ++v) {
    const auto& f = c.vertex_faces(v);
    r.vertex_det.push_back(gram_det(normals[f[0]], normals[f[1]], normals[f[2]]));
    r.vertices.push_back(vertex_point(normals[f[0]], normals[f[1]], normals[f[2]], tol));
  }
  for (const auto& e : c.edges()) {
    r.dihedral.push_back(dihedral(normals[e.left], normals[e.right]));
    r.length.push_back(std::acosh(std::max(1.0, -inner(r.vertices[e.u], r.vertices[e.v]))));
  }
  for (int f = 0; f < c.face_count(); ++f) {
    const auto& cyc = c.face(f);
    const size_t k = cyc.size();
    std::vector<double> ang;
    for (size_t i = 0; i < k; ++i)
      ang.push_back(corner(r.vertices[cyc[i]], r.vertices[cyc[(i + k - 1) % k]], r.vertices[cyc[(i + 1) % k]]));
    r.corner_angle.push_back(std::move(ang));
  }
  return r;
}

namespace detail {

inline std::set<std::array<int, 3>> vertex_triples(const AbstractPolyhedron& c) {
  std::set<std::array<int, 3>> out;
  for (int v = 0; v < c.vertex_count(); ++v) {
    auto t = c.vertex_faces(v);
    std::sort(t.begin(), t.end());
    out.insert(t);
  }
  return out;
}

inline Eigen::Vector3d klein(const MVec& p) { return p.tail<3>() / p[0]; }

}  // namespace detail

/// Rebuilds the cell structure cut out by the half-spaces and measures it.
/// Vertex ids follow the lexicographic order of their face triples.
inline Realization extract_combinatorics(const std::vector<MVec>& normals, double tol = 1e-9) {
  const int n = static_cast<int>(normals.size());
  if (n < 4) fail(ErrorCode::NonCompact, "fewer than four planes");
  std::vector<std::array<int, 3>> triples;
  std::vector<MVec> points;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        auto g = gram(normals[a], normals[b], normals[c]);
        if (!pairwise_intersecting(g) || g.determinant() <= tol) continue;
        MVec p = vertex_point(normals[a], normals[b], normals[c], tol);
        bool inside = true, on_extra = false;
        for (int m = 0; m < n && inside; ++m) {
          if (m == a || m == b || m == c) continue;
          double s = inner(p, normals[m]);
          if (s > tol) inside = false;
          if (std::abs(s) <= tol) on_extra = true;
        }
        if (!inside) continue;
        if (on_extra) fail(ErrorCode::DegenerateFace, "four planes through one vertex");
        triples.push_back({a, b, c});
        points.push_back(p);
      }
  if (triples.empty()) fail(ErrorCode::NonCompact, "no finite vertices");
  const int nv = static_cast<int>(triples.size());

  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  for (const auto& p : points) center += detail::klein(p);
  center /= nv;

  std::vector<std::vector<int>> faces(n);
  for (int f = 0; f < n; ++f) {
    std::vector<int> on;
    for (int v = 0; v < nv; ++v)
      if (std::find(triples[v].begin(), triples[v].end(), f) != triples[v].end()) on.push_back(v);
    if (on.empty()) fail(ErrorCode::DegenerateFace, "plane " + std::to_string(f) + " carries no face");
    if (on.size() < 3) fail(ErrorCode::NonCompact, "face " + std::to_string(f) + " is not closed");
    // Two vertices of f are adjacent when they share a second plane.
    std::map<int, std::vector<int>> by_plane;
    for (int v : on)
      for (int g : triples[v])
        if (g != f) by_plane[g].push_back(v);
    std::map<int, std::vector<int>> nbr;
    for (const auto& [g, vs] : by_plane) {
      if (vs.size() == 1) fail(ErrorCode::NonCompact, "face " + std::to_string(f) + " has an open side");
      if (vs.size() > 2) fail(ErrorCode::DegenerateFace, "collinear vertices on face " + std::to_string(f));
      nbr[vs[0]].push_back(vs[1]);
      nbr[vs[1]].push_back(vs[0]);
    }
    std::vector<int> cyc{on[0]};
    int prev = -1, cur = on[0];
    while (true) {
      const auto& nb = nbr[cur];
      int next = nb[0] != prev ? nb[0] : nb[1];
      if (next == on[0]) break;
      if (cyc.size() > on.size()) fail(ErrorCode::DegenerateFace, "face cycle does not close");
      cyc.push_back(next);
      prev = cur;
      cur = next;
    }
    if (cyc.size() != on.size()) fail(ErrorCode::DegenerateFace, "face " + std::to_string(f) + " is disconnected");
    // Newell normal against the outward direction.
    Eigen::Vector3d normal = Eigen::Vector3d::Zero(), mid = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < cyc.size(); ++i) {
      auto p = detail::klein(points[cyc[i]]);
      auto q = detail::klein(points[cyc[(i + 1) % cyc.size()]]);
      normal += p.cross(q);
      mid += p;
    }
    mid /= static_cast<double>(cyc.size());
    if (normal.dot(mid - center) < 0) std::reverse(cyc.begin(), cyc.end());
    faces[f] = std::move(cyc);
  }
  AbstractPolyhedron c;
  try {
    c = AbstractPolyhedron::build(nv, std::move(faces));
  } catch (const Error& e) {
    fail(ErrorCode::DegenerateFace, std::string("extracted cells are not a polyhedron: ") + e.what());
  }
  return measure(c, normals, tol);
}

/// True when the normals cut out exactly the vertex triples of c.
inline bool same_combinatorics(const AbstractPolyhedron& c, const std::vector<MVec>& normals, double tol = 1e-9) {
  if (static_cast<int>(normals.size()) != c.face_count()) return false;
  try {
    auto got = extract_combinatorics(normals, tol);
    return detail::vertex_triples(got.complex) == detail::vertex_triples(c);
  } catch (const Error&) {
    return false;
  }
}

/// Realization of c by the given normals; the cut-out cells must be c's.
inline Realization make_realization(const AbstractPolyhedron& c, const std::vector<MVec>& normals, double tol = 1e-9) {
  if (static_cast<int>(normals.size()) != c.face_count())
    fail(ErrorCode::SizeMismatch, "one normal per face is required");
  auto got = extract_combinatorics(normals, tol);
  if (detail::vertex_triples(got.complex) != detail::vertex_triples(c))
    fail(ErrorCode::WrongCombinatorics, "normals cut out a different polyhedron");
  return measure(c, normals, tol);
}

/// Applies an isometry to every normal and rederives the measurements.
inline Realization transformed(const Realization& r, const Lorentz& g) {
  std::vector<MVec> ns;
  for (const auto& v : r.normals) ns.push_back(g * v);
  return measure(r.complex, ns);
}

// ---------------------------------------------------------------------------
// Explicit prism

/// Pr_N over a regular (N-2)-gon with dihedral angle polygon_angle*pi between
/// neighboring sides; the caps meet the sides at (1/2 - gap)*pi.
inline Realization build_prism(int n, const Rational& polygon_angle, const Rational& gap) {
  if (n < 5) fail(ErrorCode::BadParameters, "prism needs at least five faces");
  if (polygon_angle <= 0 || polygon_angle >= 1) fail(ErrorCode::BadParameters, "polygon angle outside (0, pi)");
  if (gap <= 0 || 2 * gap >= polygon_angle) fail(ErrorCode::BadParameters, "gap must lie in (0, polygon_angle/2)");
  const int m = n - 2;
  const double theta = to_double(polygon_angle) * kPi;
  const double c = std::cos(2 * kPi / m);
  if (std::cos(theta) + c <= 1e-12) fail(ErrorCode::BadParameters, "no regular polygon with that angle");
  const double r = std::acosh(std::sqrt((1 + std::cos(theta)) / (1 - c)));
  const double h = std::asinh(std::sin(to_double(gap) * kPi) / std::sinh(r));
  std::vector<MVec> normals;
  for (int k = 0; k < m; ++k) {
    // Lateral k lies between vertices k and k+1 of the top ring.
    double phi = 2 * kPi * (k + 0.5) / m;
    normals.emplace_back(std::sinh(r), std::cosh(r) * std::cos(phi), std::cosh(r) * std::sin(phi), 0);
  }
  normals.emplace_back(std::sinh(h), 0, 0, std::cosh(h));
  normals.emplace_back(std::sinh(h), 0, 0, -std::cosh(h));
  return make_realization(catalog::prism(n), normals);
}

// ---------------------------------------------------------------------------
// Export

enum class ExportFormat { Off, Json, BallJson };

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string export_realization(const Realization& r, ExportFormat format) {
  const auto& c = r.complex;
  if (format == ExportFormat::Off) {
    std::string out = "OFF\n" + std::to_string(c.vertex_count()) + " " + std::to_string(c.face_count()) + " " +
                      std::to_string(c.edge_count()) + "\n";
    for (const auto& p : r.vertices) {
      auto b = to_ball(p);
      out += format_double(b[0]) + " " + format_double(b[1]) + " " + format_double(b[2]) + "\n";
    }
    for (const auto& f : c.faces()) {
      out += std::to_string(f.size());
      for (int v : f) out += " " + std::to_string(v);
      out += "\n";
    }
    return out;
  }
  nlohmann::ordered_json j;
  j["vertex_count"] = c.vertex_count();
  j["faces"] = c.faces();
  if (format == ExportFormat::BallJson) {
    auto pts = nlohmann::json::array();
    for (const auto& p : r.vertices) {
      auto b = to_ball(p);
      pts.push_back({b[0], b[1], b[2]});
    }
    j["ball_vertices"] = pts;
    return j.dump(2) + "\n";
  }
  auto vec = [](const MVec& x) {
    return nlohmann::json::array({format_double(x[0]), format_double(x[1]), format_double(x[2]), format_double(x[3])});
  };
  auto normals = nlohmann::json::array();
  for (const auto& v : r.normals) normals.push_back(vec(v));
  auto vertices = nlohmann::json::array();
  for (const auto& p : r.vertices) vertices.push_back(vec(p));
  auto edges = nlohmann::json::array();
  for (int e = 0; e < c.edge_count(); ++e) {
    const auto& ed = c.edge(e);
    nlohmann::json x;
    x["vertices"] = {ed.u, ed.v};
    x["faces"] = {ed.left, ed.right};
    x["dihedral"] = format_double(r.dihedral[e]);
    x["length"] = format_double(r.length[e]);
    edges.push_back(x);
  }
  j["normals"] = normals;
  j["vertices"] = vertices;
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

/// Reads the normals written by the json export.
inline std::vector<MVec> parse_normals(const nlohmann::json& j) {
  std::vector<MVec> out;
  for (const auto& row : j.at("normals")) {
    if (row.size() != 4) fail(ErrorCode::InvalidInput, "normal needs four components");
    MVec v;
    for (int i = 0; i < 4; ++i) v[i] = row[i].is_string() ? std::stod(row[i].get<std::string>()) : row[i].get<double>();
    out.push_back(v);
  }
  return out;
}

}  // namespace andreev
