#pragma once

// Newton iteration on the Gram system and straight-line continuation in
// angle space.
//
// Unknowns: one 4-vector per face. Equations: <v_f, v_f> = 1 per face,
// <v_f, v_g> = -cos(a_e) per edge, and six gauge equations pinning the three
// faces (a, b, c) around a base vertex: v_a = (0,0,0,1), v_b in the x1-x3
// plane, v_c with x0 = 0. That is N + E + 6 = 4N equations.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "andreev/angles.hpp"
#include "andreev/complex.hpp"
#include "andreev/error.hpp"
#include "andreev/minkowski.hpp"

namespace andreev {

struct NewtonOptions {
  int max_steps = 50;
  double tolerance = 1e-10;
  int base_vertex = 0;
  bool check_combinatorics = true;
};

struct NewtonStats {
  int iterations = 0;
  double residual = 0;
};

/// The three faces pinned by the gauge, counterclockwise from the lowest.
inline std::array<int, 3> gauge_faces(const AbstractPolyhedron& c, int base_vertex) {
  if (base_vertex < 0 || base_vertex >= c.vertex_count()) fail(ErrorCode::OutOfRange, "no such base vertex");
  return c.vertex_faces(base_vertex);
}

/// Isometry taking the base vertex of faces (a, b, c) to (1,0,0,0) and the
/// three normals into gauge position.
inline Lorentz gauge_isometry(const MVec& va, const MVec& vb, const MVec& vc) {
  MVec p = vertex_point(va, vb, vc);
  MVec f3 = va / std::sqrt(inner(va, va));
  MVec f1 = vb - inner(vb, f3) * f3;
  f1 /= std::sqrt(inner(f1, f1));
  MVec f2 = vc - inner(vc, f3) * f3 - inner(vc, f1) * f1;
  f2 /= std::sqrt(inner(f2, f2));
  Lorentz frame;
  frame.col(0) = p;
  frame.col(1) = f1;
  frame.col(2) = f2;
  frame.col(3) = f3;
  return eta() * frame.transpose() * eta();
}

inline std::vector<MVec> apply_isometry(const Lorentz& g, const std::vector<MVec>& normals) {
  std::vector<MVec> out;
  out.reserve(normals.size());
  for (const auto& v : normals) out.push_back(g * v);
  return out;
}

inline std::vector<MVec> to_gauge(const AbstractPolyhedron& c, const std::vector<MVec>& normals, int base_vertex) {
  auto f = gauge_faces(c, base_vertex);
  return apply_isometry(gauge_isometry(normals[f[0]], normals[f[1]], normals[f[2]]), normals);
}

namespace detail {

class GramSystem {
 public:
  // cosines[e] is the target value of -<v_left, v_right>.
  GramSystem(const AbstractPolyhedron& c, std::vector<double> cosines, int base_vertex)
      : c_(c), gauge_(gauge_faces(c, base_vertex)), cosines_(std::move(cosines)) {
    if (static_cast<int>(cosines_.size()) != c.edge_count())
      fail(ErrorCode::SizeMismatch, "one angle per edge is required");
  }

  int size() const { return 4 * c_.face_count(); }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
    Eigen::VectorXd r(size());
    int row = 0;
    for (int f = 0; f < c_.face_count(); ++f) r[row++] = inner(v(x, f), v(x, f)) - 1;
    for (int e = 0; e < c_.edge_count(); ++e) {
      const auto& ed = c_.edge(e);
      r[row++] = inner(v(x, ed.left), v(x, ed.right)) + cosines_[e];
    }
    const int a = gauge_[0], b = gauge_[1], g = gauge_[2];
    r[row++] = x[4 * a + 0];
    r[row++] = x[4 * a + 1];
    r[row++] = x[4 * a + 2];
    r[row++] = x[4 * b + 0];
    r[row++] = x[4 * b + 2];
    r[row++] = x[4 * g + 0];
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(size(), size());
    int row = 0;
    for (int f = 0; f < c_.face_count(); ++f) j.block<1, 4>(row++, 4 * f) = 2 * flip_time(v(x, f)).transpose();
    for (int e = 0; e < c_.edge_count(); ++e) {
      const auto& ed = c_.edge(e);
      j.block<1, 4>(row, 4 * ed.left) = flip_time(v(x, ed.right)).transpose();
      j.block<1, 4>(row, 4 * ed.right) = flip_time(v(x, ed.left)).transpose();
      ++row;
    }
    const int a = gauge_[0], b = gauge_[1], g = gauge_[2];
    for (int col : {4 * a + 0, 4 * a + 1, 4 * a + 2, 4 * b + 0, 4 * b + 2, 4 * g + 0}) j(row++, col) = 1;
    return j;
  }

  const std::array<int, 3>& gauge() const { return gauge_; }

  static MVec v(const Eigen::VectorXd& x, int f) { return x.segment<4>(4 * f); }

 private:
  const AbstractPolyhedron& c_;
  std::array<int, 3> gauge_;
  std::vector<double> cosines_;
};

inline Eigen::VectorXd pack(const std::vector<MVec>& normals) {
  Eigen::VectorXd x(4 * normals.size());
  for (size_t f = 0; f < normals.size(); ++f) x.segment<4>(4 * f) = normals[f];
  return x;
}

inline std::vector<double> cosines_of(const std::vector<double>& radians) {
  std::vector<double> out;
  for (double a : radians) out.push_back(std::cos(a));
  return out;
}

inline std::vector<MVec> unpack(const Eigen::VectorXd& x) {
  std::vector<MVec> out(x.size() / 4);
  for (size_t f = 0; f < out.size(); ++f) out[f] = x.segment<4>(4 * f);
  return out;
}

// Reflections in coordinate hyperplanes fix the sign conventions of the gauge.
inline void fix_signs(std::vector<MVec>& normals, const std::array<int, 3>& g) {
  for (auto [face, coord] : {std::pair{g[0], 3}, std::pair{g[1], 1}, std::pair{g[2], 2}})
    if (normals[face][coord] < 0)
      for (auto& v : normals) v[coord] = -v[coord];
}

}  // namespace detail

namespace detail {

inline double cosine_residual(const AbstractPolyhedron& c, const std::vector<MVec>& normals,
                              const std::vector<double>& cosines) {
  double r = 0;
  for (int f = 0; f < c.face_count(); ++f) r = std::max(r, std::abs(inner(normals[f], normals[f]) - 1));
  for (int e = 0; e < c.edge_count(); ++e) {
    const auto& ed = c.edge(e);
    r = std::max(r, std::abs(inner(normals[ed.left], normals[ed.right]) + cosines[e]));
  }
  return r;
}

inline std::vector<MVec> newton_cosines(const AbstractPolyhedron& c, const std::vector<double>& cosines,
                                        const std::vector<MVec>& seed, const NewtonOptions& opt,
                                        NewtonStats* stats) {
  if (static_cast<int>(seed.size()) != c.face_count()) fail(ErrorCode::SizeMismatch, "one seed normal per face");
  GramSystem sys(c, cosines, opt.base_vertex);
  Eigen::VectorXd x;
  try {
    x = pack(to_gauge(c, seed, opt.base_vertex));
  } catch (const Error&) {
    // Base vertex not finite in the seed; start from the raw normals.
    x = pack(seed);
  }
  double res = 0;
  int it = 0;
  for (;; ++it) {
    Eigen::VectorXd f = sys.residual(x);
    res = f.cwiseAbs().maxCoeff();
    if (!std::isfinite(res) || res > 1e6) fail(ErrorCode::Diverged, "Newton iteration blew up");
    if (res < opt.tolerance * 1e-3) break;
    if (it >= opt.max_steps) {
      if (res < opt.tolerance) break;
      fail(ErrorCode::Diverged, "no convergence after " + std::to_string(it) + " steps, residual " + std::to_string(res));
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.jacobian(x));
    if (!(lu.rcond() > 1e-14)) fail(ErrorCode::SingularJacobian, "Jacobian is singular");
    Eigen::VectorXd dx = lu.solve(f);
    x -= dx;
    // Quadratic convergence has stalled at rounding level.
    if (res < opt.tolerance && dx.cwiseAbs().maxCoeff() < 1e-14 * (1 + x.cwiseAbs().maxCoeff())) break;
  }
  auto normals = unpack(x);
  fix_signs(normals, sys.gauge());
  if (stats) {
    stats->iterations = it;
    stats->residual = cosine_residual(c, normals, cosines);
  }
  if (opt.check_combinatorics && !same_combinatorics(c, normals))
    fail(ErrorCode::WrongCombinatorics, "Newton converged to a different polyhedron");
  return normals;
}

}  // namespace detail

/// Largest violation of the Gram equations (gauge excluded).
inline double gram_residual(const AbstractPolyhedron& c, const std::vector<MVec>& normals,
                            const std::vector<double>& radians) {
  return detail::cosine_residual(c, normals, detail::cosines_of(radians));
}

/// Newton's method from `seed` (moved into gauge first). Returns normals in
/// gauge with max residual below the tolerance.
inline std::vector<MVec> newton_normals(const AbstractPolyhedron& c, const std::vector<double>& radians,
                                        const std::vector<MVec>& seed, const NewtonOptions& opt = {},
                                        NewtonStats* stats = nullptr) {
  if (static_cast<int>(radians.size()) != c.edge_count()) fail(ErrorCode::SizeMismatch, "one angle per edge is required");
  return detail::newton_cosines(c, detail::cosines_of(radians), seed, opt, stats);
}

inline Realization newton_solve(const AbstractPolyhedron& c, const AngleAssignment& angles,
                                const std::vector<MVec>& seed, const NewtonOptions& opt = {},
                                NewtonStats* stats = nullptr) {
  return make_realization(c, newton_normals(c, angles.radians(), seed, opt, stats));
}

/// Finite vertex minimizing the largest distance to the other finite
/// vertices. Gauging there keeps coordinates small when part of the
/// polyhedron is far out (long chains, tiny truncation triangles). Vertices in
/// `avoid` are not chosen.
inline int central_vertex(const AbstractPolyhedron& c, const std::vector<MVec>& normals,
                          const std::vector<int>& avoid = {}) {
  std::vector<MVec> pts;
  std::vector<int> ids;
  for (int v = 0; v < c.vertex_count(); ++v) {
    const auto& f = c.vertex_faces(v);
    MVec p = cross(normals[f[0]], normals[f[1]], normals[f[2]]);
    double n = -inner(p, p);
    if (!(n > 0)) continue;
    p /= std::sqrt(n);
    if (p[0] < 0) p = -p;
    pts.push_back(p);
    ids.push_back(v);
  }
  int best = -1;
  double best_d = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (std::count(avoid.begin(), avoid.end(), ids[i])) continue;
    double worst = 0;
    for (const auto& q : pts) worst = std::max(worst, -inner(pts[i], q));
    if (best < 0 || worst < best_d) {
      best = ids[i];
      best_d = worst;
    }
  }
  if (best < 0) fail(ErrorCode::NoFiniteVertex, "no finite vertex to gauge at");
  return best;
}

// ---------------------------------------------------------------------------
// Continuation

struct PathOptions {
  double initial_step = 0.25;
  double max_step = 0.25;
  double step_floor = 1e-6;
  double event_threshold = 1e-7;
  bool detect_events = true;
  bool check_combinatorics = true;
  int newton_steps = 12;             // per tracking step
  int polish_steps = 50;             // final strict solve
  double tolerance = 1e-10;           // final polish
  double tracking_tolerance = 1e-9;   // intermediate steps
  int base_vertex = 0;
  std::vector<int> ideal_at_end;  // vertices allowed to reach infinity at t = 1
};

struct PathResult {
  std::vector<MVec> normals;
  double t = 0;
  int steps = 0;
  int rejected = 0;
  double residual = 0;
  bool event = false;
  int event_vertex = -1;
  double event_det = 0;
};

namespace detail {

inline std::vector<double> lerp(const std::vector<double>& a, const std::vector<double>& b, double t) {
  std::vector<double> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = (1 - t) * a[i] + t * b[i];
  return out;
}

inline std::pair<int, double> lowest_vertex(const AbstractPolyhedron& c, const std::vector<MVec>& normals,
                                            const std::vector<int>& skip) {
  int arg = -1;
  double best = 0;
  for (int v = 0; v < c.vertex_count(); ++v) {
    if (std::find(skip.begin(), skip.end(), v) != skip.end()) continue;
    const auto& f = c.vertex_faces(v);
    double d = gram_det(normals[f[0]], normals[f[1]], normals[f[2]]);
    if (arg < 0 || d < best) {
      arg = v;
      best = d;
    }
  }
  return {arg, best};
}

// Path following for targets cos_at(t), t in [0, 1].
template <class CosAt>
PathResult follow(const AbstractPolyhedron& c, const std::vector<MVec>& start, CosAt cos_at, const PathOptions& opt) {
  NewtonOptions nopt;
  nopt.max_steps = opt.newton_steps;
  nopt.tolerance = std::max(opt.tolerance, opt.tracking_tolerance);
  nopt.base_vertex = opt.base_vertex;
  nopt.check_combinatorics = false;

  PathResult out;
  std::vector<MVec> x, x_prev;
  try {
    x = to_gauge(c, start, opt.base_vertex);
  } catch (const Error&) {
    x = start;
  }
  double t = 0, h = opt.initial_step, h_prev = 0;

  // Empty on Newton failure.
  auto solve_at = [&](double s, const std::vector<MVec>& seed) -> std::vector<MVec> {
    try {
      return newton_cosines(c, cos_at(s), seed, nopt, nullptr);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Diverged || e.code() == ErrorCode::SingularJacobian) return {};
      throw;
    }
  };
  const std::vector<int> none;
  auto skipped = [&](double s) -> const std::vector<int>& { return s >= 1 ? opt.ideal_at_end : none; };

  while (t < 1) {
    h = std::min(h, 1 - t);
    double s = (1 - t - h < 1e-12) ? 1.0 : t + h;
    std::vector<MVec> seed = x;
    if (!x_prev.empty())
      for (size_t f = 0; f < x.size(); ++f) seed[f] = x[f] + (x[f] - x_prev[f]) * ((s - t) / h_prev);
    auto y = solve_at(s, seed);
    bool ok = !y.empty();
    if (ok && opt.detect_events && lowest_vertex(c, y, skipped(s)).second < opt.event_threshold) {
      // Bisect for the first parameter where the threshold is crossed.
      double lo = t, hi = s;
      std::vector<MVec> x_lo = x, x_hi = y;
      for (int k = 0; k < 60 && hi - lo > 1e-13; ++k) {
        double mid = (lo + hi) / 2;
        auto z = solve_at(mid, x_lo);
        if (z.empty()) break;
        if (lowest_vertex(c, z, none).second < opt.event_threshold) {
          hi = mid;
          x_hi = std::move(z);
        } else {
          lo = mid;
          x_lo = std::move(z);
        }
      }
      auto [ev, ev_det] = lowest_vertex(c, x_hi, none);
      out.normals = std::move(x_hi);
      out.t = hi;
      out.event = true;
      out.event_vertex = ev;
      out.event_det = ev_det;
      out.residual = cosine_residual(c, out.normals, cos_at(hi));
      return out;
    }
    if (ok && opt.check_combinatorics && !(s >= 1 && !opt.ideal_at_end.empty())) ok = same_combinatorics(c, y);
    if (!ok) {
      ++out.rejected;
      h /= 2;
      if (h < opt.step_floor)
        fail(ErrorCode::StepFloorReached,
             "continuation step fell below " + std::to_string(opt.step_floor) + " at t = " + std::to_string(t));
      continue;
    }
    x_prev = std::move(x);
    x = std::move(y);
    h_prev = s - t;
    t = s;
    ++out.steps;
    h = std::min(2 * h, opt.max_step);
  }
  NewtonOptions polish = nopt;
  polish.max_steps = opt.polish_steps;
  polish.tolerance = opt.tolerance;
  try {
    out.normals = newton_cosines(c, cos_at(1.0), x, polish, nullptr);
  } catch (const Error& e) {
    // Far-out planes put the rounding floor above the strict tolerance; the
    // tracked point is kept when it meets the tracking tolerance.
    if (e.code() != ErrorCode::Diverged || cosine_residual(c, x, cos_at(1.0)) >= nopt.tolerance) throw;
    out.normals = x;
  }
  out.t = 1;
  out.residual = cosine_residual(c, out.normals, cos_at(1.0));
  return out;
}

}  // namespace detail

/// Follows the solution along the angle segment (1-t) from + t to. Stops
/// early, with `event` set, if a vertex's Gram determinant drops below the
/// threshold; the crossing is then localized by bisection.
inline PathResult trace_path(const AbstractPolyhedron& c, const std::vector<MVec>& start,
                             const std::vector<double>& from, const std::vector<double>& to,
                             const PathOptions& opt = {}) {
  if (from.size() != to.size() || static_cast<int>(to.size()) != c.edge_count())
    fail(ErrorCode::SizeMismatch, "one angle per edge is required");
  return detail::follow(c, start, [&](double t) { return detail::cosines_of(detail::lerp(from, to, t)); }, opt);
}

/// Residual homotopy: moves every inner product from its value in `start`
/// to -cos of the target angle, without watching vertices on the way.
inline PathResult homotopy_path(const AbstractPolyhedron& c, const std::vector<MVec>& start,
                                const std::vector<double>& to, PathOptions opt = {}) {
  std::vector<double> from;
  for (const auto& e : c.edges()) from.push_back(-inner(start[e.left], start[e.right]));
  auto target = detail::cosines_of(to);
  opt.detect_events = false;
  opt.check_combinatorics = false;
  return detail::follow(c, start, [&](double t) { return detail::lerp(from, target, t); }, opt);
}

/// Continues a realization of c to the target angles. The target must lie
/// in the Andreev polytope; the straight path then stays inside it.
inline Realization continue_path(const Realization& start, const AngleAssignment& target, const PathOptions& opt = {},
                                 PathResult* info = nullptr) {
  const auto& c = start.complex;
  if (!check_conditions(c, target).member()) fail(ErrorCode::NotMember, "target angles are not in the Andreev polytope");
  auto res = trace_path(c, start.normals, start.dihedral, target.radians(), opt);
  if (info) *info = res;
  if (res.event)
    fail(ErrorCode::EventDetected, "vertex " + std::to_string(res.event_vertex) + " reached infinity near t = " +
                                       std::to_string(res.t) + " (determinant " + std::to_string(res.event_det) + ")");
  return make_realization(c, res.normals);
}

}  // namespace andreev
