#include "rollsym/path.hpp"

#include <algorithm>
#include <cmath>

#include "rollsym/errors.hpp"

namespace rollsym {

namespace {

struct Hermite {
  Vec p, v;
};

Hermite hermite(const Vec& p0, const Vec& v0, const Vec& p1, const Vec& v1, double h, double tau) {
  const double t2 = tau * tau, t3 = t2 * tau;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + tau;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double d00 = 6 * t2 - 6 * tau, d10 = 3 * t2 - 4 * tau + 1;
  const double d01 = -6 * t2 + 6 * tau, d11 = 3 * t2 - 2 * tau;
  Hermite out;
  out.p = h00 * p0 + h10 * h * v0 + h01 * p1 + h11 * h * v1;
  out.v = (d00 * p0 + d01 * p1) / h + d10 * v0 + d11 * v1;
  return out;
}

}  // namespace

GeodesicPath::GeodesicPath(SpaceForm M, Vec x, Vec v, double duration, double step)
    : M_(std::move(M)), x_(std::move(x)), v_(std::move(v)), duration_(duration), step_(step) {
  if (!(duration_ >= 0.0)) throw InputError("path duration must be non-negative");
  if (!(step_ > 0.0)) throw InputError("path step must be positive");
  M_.check_point(x_, 1e-8);
  if (M_.tangency_residual(x_, v_) > 1e-8) throw InputError("geodesic direction is not tangent");
  if (M_.constant_curvature() || duration_ == 0.0) return;
  const int steps = std::max(1, static_cast<int>(std::ceil(duration_ / step_)));
  const double h = duration_ / steps;
  pts_.push_back(x_);
  vels_.push_back(v_);
  for (int i = 0; i < steps; ++i) {
    const GeodesicFlow g = M_.geodesic_flow(pts_.back(), vels_.back(), h, step_);
    pts_.push_back(g.point);
    vels_.push_back(g.velocity);
  }
}

GeodesicPath GeodesicPath::from_direction(const SpaceForm& M, const Vec& x, const Vec& direction, double length,
                                          double step) {
  const double nv = M.norm(x, direction);
  if (!(nv > 0.0)) {
    if (length != 0.0) throw InputError("geodesic direction must be nonzero");
    return GeodesicPath(M, x, Vec::Zero(x.size()), 0.0, step);
  }
  return GeodesicPath(M, x, direction / nv, length, step);
}

Vec GeodesicPath::point(double t) const {
  if (M_.constant_curvature() || pts_.empty()) return M_.geodesic(x_, v_, t);
  const int steps = static_cast<int>(pts_.size()) - 1;
  const double h = duration_ / steps;
  const int i = std::clamp(static_cast<int>(std::floor(t / h)), 0, steps - 1);
  return M_.project_point(hermite(pts_[i], vels_[i], pts_[i + 1], vels_[i + 1], h, t / h - i).p);
}

Vec GeodesicPath::velocity(double t) const {
  if (M_.constant_curvature() || pts_.empty()) return M_.geodesic_flow(x_, v_, t).velocity;
  const int steps = static_cast<int>(pts_.size()) - 1;
  const double h = duration_ / steps;
  const int i = std::clamp(static_cast<int>(std::floor(t / h)), 0, steps - 1);
  const Hermite H = hermite(pts_[i], vels_[i], pts_[i + 1], vels_[i + 1], h, t / h - i);
  return M_.project_tangent(M_.project_point(H.p), H.v);
}

SampledPath::SampledPath(SpaceForm M, std::vector<double> times, std::vector<Vec> points)
    : M_(std::move(M)), times_(std::move(times)), pts_(std::move(points)) {
  if (times_.size() != pts_.size()) throw InputError("sample times and points differ in count");
  if (times_.size() < 2) throw InputError("a sampled path needs at least two samples");
  for (size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw InputError("non-monotone time grid");
  for (const Vec& p : pts_) M_.check_point(p, 1e-8);
  const size_t N = pts_.size();
  vels_.resize(N);
  for (size_t i = 0; i < N; ++i) {
    Vec m;
    if (N == 2) {
      m = (pts_[1] - pts_[0]) / (times_[1] - times_[0]);
    } else if (i == 0) {
      const double h1 = times_[1] - times_[0], h2 = times_[2] - times_[1];
      m = -(2 * h1 + h2) / (h1 * (h1 + h2)) * pts_[0] + (h1 + h2) / (h1 * h2) * pts_[1] -
          h1 / (h2 * (h1 + h2)) * pts_[2];
    } else if (i == N - 1) {
      const double h1 = times_[N - 2] - times_[N - 3], h2 = times_[N - 1] - times_[N - 2];
      m = h2 / (h1 * (h1 + h2)) * pts_[N - 3] - (h1 + h2) / (h1 * h2) * pts_[N - 2] +
          (2 * h2 + h1) / (h2 * (h1 + h2)) * pts_[N - 1];
    } else {
      const double h1 = times_[i] - times_[i - 1], h2 = times_[i + 1] - times_[i];
      m = -h2 / (h1 * (h1 + h2)) * pts_[i - 1] + (h2 - h1) / (h1 * h2) * pts_[i] +
          h1 / (h2 * (h1 + h2)) * pts_[i + 1];
    }
    vels_[i] = M_.project_tangent(pts_[i], m);
  }
}

int SampledPath::segment(double t) const {
  const double abs_t = times_.front() + t;
  auto it = std::upper_bound(times_.begin(), times_.end(), abs_t);
  const int i = static_cast<int>(it - times_.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(times_.size()) - 2);
}

Vec SampledPath::point(double t) const {
  const int i = segment(t);
  const double h = times_[i + 1] - times_[i];
  const double tau = (times_.front() + t - times_[i]) / h;
  return M_.project_point(hermite(pts_[i], vels_[i], pts_[i + 1], vels_[i + 1], h, tau).p);
}

Vec SampledPath::velocity(double t) const {
  const int i = segment(t);
  const double h = times_[i + 1] - times_[i];
  const double tau = (times_.front() + t - times_[i]) / h;
  const Hermite H = hermite(pts_[i], vels_[i], pts_[i + 1], vels_[i + 1], h, tau);
  return M_.project_tangent(M_.project_point(H.p), H.v);
}

}  // namespace rollsym
