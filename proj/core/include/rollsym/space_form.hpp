#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rollsym/linalg.hpp"

namespace rollsym {

enum class Kind { euclidean, sphere, hyperbolic, warped };

std::string kind_name(Kind k);

// Warp function of a warped product. Each family solves f'' = -K_ref f:
//   cos    a cos(w s + p)   K_ref =  w^2
//   cosh   a cosh(w s + p)  K_ref = -w^2
//   exp    a exp(w s + p)   K_ref = -w^2
//   affine a s + b          K_ref =  0
struct WarpFunction {
  enum class Family { cos, cosh, exp, affine };
  Family family = Family::cos;
  double amplitude = 1.0;
  double rate = 1.0;
  double phase = 0.0;
  double slope = 1.0;
  double intercept = 0.0;

  double value(double s) const;
  double d1(double s) const;
  double d2(double s) const;
  double k_ref() const;
  std::string name() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double s) const { return s > lo && s < hi; }
};

// Result of following a geodesic for time t. T maps frame coordinates at the
// start point to frame coordinates (at the end point) of parallel-transported
// vectors; it is orthogonal.
struct GeodesicFlow {
  Vec point;
  Vec velocity;
  Mat T;
};

// Constant-curvature space form or warped product I x_f N.
//
// Points and tangent vectors use ambient coordinates: R^n for euclidean,
// R^{n+1} for the sphere |x| = r, Minkowski R^{n,1} (time coordinate last,
// <x,x>_L = -r^2, time > 0) for hyperbolic, and (s, fiber coordinates) for
// warped products.
class SpaceForm {
 public:
  static SpaceForm euclidean(int n);
  static SpaceForm sphere(int n, double radius);
  static SpaceForm hyperbolic(int n, double radius);
  static SpaceForm warped(Interval interval, WarpFunction warp, const SpaceForm& fiber);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  int ambient_dim() const;
  double radius() const { return radius_; }
  const WarpFunction& warp() const { return warp_; }
  const Interval& interval() const { return interval_; }
  const SpaceForm& fiber() const;

  bool constant_curvature() const { return kind_ != Kind::warped; }
  // Sectional curvature of a constant-curvature kind.
  double curvature() const;
  std::string describe() const;
  bool operator==(const SpaceForm& other) const;

  double constraint_residual(const Vec& x) const;
  double tangency_residual(const Vec& x, const Vec& v) const;
  bool contains(const Vec& x, double tol = 1e-10) const;
  void check_point(const Vec& x, double tol = 1e-10) const;

  double inner(const Vec& x, const Vec& u, const Vec& v) const;
  double norm(const Vec& x, const Vec& v) const;
  Vec project_tangent(const Vec& x, const Vec& v) const;
  // Nearest-point style retraction of an ambient point onto the manifold.
  Vec project_point(const Vec& x) const;

  // Deterministic orthonormal frame (ambient_dim x n).
  Mat frame(const Vec& x) const;
  // Smallest Gram-Schmidt pivot norm used while building frame(x).
  double frame_quality(const Vec& x) const;
  Vec to_frame(const Vec& x, const Vec& v) const;
  Vec from_frame(const Vec& x, const Vec& c) const;

  // Curvature operator R(xi) on a skew matrix given in frame coordinates.
  Mat curvature_frame(const Vec& x, const Mat& xi) const;
  // R(X^Y)Z for ambient tangent vectors.
  Vec curvature_apply(const Vec& x, const Vec& X, const Vec& Y, const Vec& Z) const;
  double sectional_curvature(const Vec& x, const Vec& X, const Vec& Y) const;

  // Christoffel term G with nabla_t u = du/dt + G(x; w, u) along a curve with
  // velocity w. transport_rhs returns -G.
  Vec connection(const Vec& x, const Vec& w, const Vec& u) const;
  Vec transport_rhs(const Vec& x, const Vec& w, const Vec& u) const { return -connection(x, w, u); }

  // Geodesic through x with initial velocity v followed for time t. Closed
  // form for constant curvature, RK4 with the given step for warped kinds.
  GeodesicFlow geodesic_flow(const Vec& x, const Vec& v, double t, double step = 1e-3) const;
  Vec geodesic(const Vec& x, const Vec& v, double t) const;
  Vec exp(const Vec& x, const Vec& v) const { return geodesic(x, v, 1.0); }
  // Inverse of exp near x; constant-curvature kinds only.
  Vec log_map(const Vec& x, const Vec& y) const;
  // Transport matrix along the minimizing geodesic from x to y.
  Mat transport_between(const Vec& x, const Vec& y) const;

  Vec sample_point(Rng& rng) const;
  Vec sample_point(Rng& rng, double min_quality) const;
  Vec random_tangent(const Vec& x, Rng& rng) const;

 private:
  SpaceForm() = default;
  Mat frame_impl(const Vec& x, double* quality) const;

  Kind kind_ = Kind::euclidean;
  int dim_ = 0;
  double radius_ = 1.0;
  Interval interval_;
  WarpFunction warp_;
  std::shared_ptr<const SpaceForm> fiber_;
};

struct Point {
  Vec coords;
};

struct TangentVector {
  Point base;
  Vec components;
};

// Checked metric on explicit tangent vectors: rejects base-point mismatch and
// tangency violations.
double metric(const SpaceForm& M, const Point& x, const TangentVector& u, const TangentVector& v,
              double tol = 1e-10);

// Parallel transport of v0 along a path, sampled on a uniform grid of the
// path's parameter with RK4 of the given step. Returns one ambient vector per
// grid node, first equal to v0.
class Path;
std::vector<Vec> parallel_transport(const SpaceForm& M, const Path& path, const Vec& v0, double step = 1e-3);

}  // namespace rollsym
