#include "rollsym/space_form.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rollsym/errors.hpp"
#include "rollsym/path.hpp"

namespace rollsym {

namespace {

constexpr double kSkipThreshold = 1e-8;

double minkowski(const Vec& u, const Vec& v) {
  const Eigen::Index n = u.size() - 1;
  return u.head(n).dot(v.head(n)) - u(n) * v(n);
}

}  // namespace

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::euclidean:
      return "euclidean";
    case Kind::sphere:
      return "sphere";
    case Kind::hyperbolic:
      return "hyperbolic";
    case Kind::warped:
      return "warped";
  }
  return "unknown";
}

// ---------------------------------------------------------------- warp

double WarpFunction::value(double s) const {
  switch (family) {
    case Family::cos:
      return amplitude * std::cos(rate * s + phase);
    case Family::cosh:
      return amplitude * std::cosh(rate * s + phase);
    case Family::exp:
      return amplitude * std::exp(rate * s + phase);
    case Family::affine:
      return slope * s + intercept;
  }
  return 0.0;
}

double WarpFunction::d1(double s) const {
  switch (family) {
    case Family::cos:
      return -amplitude * rate * std::sin(rate * s + phase);
    case Family::cosh:
      return amplitude * rate * std::sinh(rate * s + phase);
    case Family::exp:
      return amplitude * rate * std::exp(rate * s + phase);
    case Family::affine:
      return slope;
  }
  return 0.0;
}

double WarpFunction::d2(double s) const {
  switch (family) {
    case Family::cos:
      return -amplitude * rate * rate * std::cos(rate * s + phase);
    case Family::cosh:
      return amplitude * rate * rate * std::cosh(rate * s + phase);
    case Family::exp:
      return amplitude * rate * rate * std::exp(rate * s + phase);
    case Family::affine:
      return 0.0;
  }
  return 0.0;
}

double WarpFunction::k_ref() const {
  switch (family) {
    case Family::cos:
      return rate * rate;
    case Family::cosh:
    case Family::exp:
      return -rate * rate;
    case Family::affine:
      return 0.0;
  }
  return 0.0;
}

std::string WarpFunction::name() const {
  switch (family) {
    case Family::cos:
      return "cos";
    case Family::cosh:
      return "cosh";
    case Family::exp:
      return "exp";
    case Family::affine:
      return "affine";
  }
  return "unknown";
}

// ---------------------------------------------------------------- factories

SpaceForm SpaceForm::euclidean(int n) {
  if (n < 1) throw InputError("dimension must be positive");
  SpaceForm M;
  M.kind_ = Kind::euclidean;
  M.dim_ = n;
  return M;
}

SpaceForm SpaceForm::sphere(int n, double radius) {
  if (n < 1) throw InputError("dimension must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("sphere radius must be positive");
  SpaceForm M;
  M.kind_ = Kind::sphere;
  M.dim_ = n;
  M.radius_ = radius;
  return M;
}

SpaceForm SpaceForm::hyperbolic(int n, double radius) {
  if (n < 1) throw InputError("dimension must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("hyperbolic radius must be positive");
  SpaceForm M;
  M.kind_ = Kind::hyperbolic;
  M.dim_ = n;
  M.radius_ = radius;
  return M;
}

SpaceForm SpaceForm::warped(Interval interval, WarpFunction warp, const SpaceForm& fiber) {
  if (!(interval.lo < interval.hi) || !std::isfinite(interval.lo) || !std::isfinite(interval.hi))
    throw InputError("warped interval must be finite with lo < hi");
  if (!fiber.constant_curvature()) throw InputError("warped fiber must be a space form");
  const int samples = 201;
  for (int i = 0; i < samples; ++i) {
    const double s = interval.lo + (interval.hi - interval.lo) * i / (samples - 1.0);
    const double f = warp.value(s);
    if (i > 0 && i < samples - 1 && !(f > 0.0)) throw InputError("warp function must be positive on the open interval");
    const double scale = std::max(1.0, std::abs(f));
    if (std::abs(warp.d2(s) + warp.k_ref() * f) > 1e-10 * scale)
      throw InputError("warp function violates f'' = -K_ref f");
  }
  SpaceForm M;
  M.kind_ = Kind::warped;
  M.dim_ = fiber.dim() + 1;
  M.interval_ = interval;
  M.warp_ = warp;
  M.fiber_ = std::make_shared<const SpaceForm>(fiber);
  return M;
}

int SpaceForm::ambient_dim() const {
  switch (kind_) {
    case Kind::euclidean:
      return dim_;
    case Kind::sphere:
    case Kind::hyperbolic:
      return dim_ + 1;
    case Kind::warped:
      return 1 + fiber_->ambient_dim();
  }
  return dim_;
}

const SpaceForm& SpaceForm::fiber() const {
  if (!fiber_) throw InputError("manifold has no fiber");
  return *fiber_;
}

double SpaceForm::curvature() const {
  switch (kind_) {
    case Kind::euclidean:
      return 0.0;
    case Kind::sphere:
      return 1.0 / (radius_ * radius_);
    case Kind::hyperbolic:
      return -1.0 / (radius_ * radius_);
    case Kind::warped:
      break;
  }
  throw DomainError("warped product has no single curvature constant");
}

std::string SpaceForm::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::euclidean:
      os << "R^" << dim_;
      break;
    case Kind::sphere:
      os << "S^" << dim_ << "(" << radius_ << ")";
      break;
    case Kind::hyperbolic:
      os << "H^" << dim_ << "(" << radius_ << ")";
      break;
    case Kind::warped:
      os << "(" << interval_.lo << "," << interval_.hi << ") x_" << warp_.name() << "[" << warp_.amplitude << ","
         << warp_.rate << "," << warp_.phase << "," << warp_.slope << "," << warp_.intercept << "] "
         << fiber_->describe();
      break;
  }
  return os.str();
}

bool SpaceForm::operator==(const SpaceForm& other) const { return describe() == other.describe(); }

// ---------------------------------------------------------------- constraints

double SpaceForm::constraint_residual(const Vec& x) const {
  if (x.size() != ambient_dim()) return std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::euclidean:
      return 0.0;
    case Kind::sphere:
      return std::abs(x.norm() - radius_);
    case Kind::hyperbolic:
      if (!(x(dim_) > 0.0)) return std::numeric_limits<double>::infinity();
      return std::abs(minkowski(x, x) + radius_ * radius_);
    case Kind::warped:
      if (!interval_.contains(x(0))) return std::numeric_limits<double>::infinity();
      return fiber_->constraint_residual(x.tail(x.size() - 1));
  }
  return 0.0;
}

double SpaceForm::tangency_residual(const Vec& x, const Vec& v) const {
  if (v.size() != ambient_dim()) return std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::euclidean:
      return 0.0;
    case Kind::sphere:
      return std::abs(x.dot(v)) / radius_;
    case Kind::hyperbolic:
      return std::abs(minkowski(x, v)) / radius_;
    case Kind::warped:
      return fiber_->tangency_residual(x.tail(x.size() - 1), v.tail(v.size() - 1));
  }
  return 0.0;
}

bool SpaceForm::contains(const Vec& x, double tol) const { return constraint_residual(x) <= tol; }

void SpaceForm::check_point(const Vec& x, double tol) const {
  if (x.size() != ambient_dim()) throw InputError("point has wrong number of coordinates for " + describe());
  if (!contains(x, tol)) throw DomainError("point is not on " + describe());
}

// ---------------------------------------------------------------- metric

double SpaceForm::inner(const Vec& x, const Vec& u, const Vec& v) const {
  switch (kind_) {
    case Kind::euclidean:
    case Kind::sphere:
      return u.dot(v);
    case Kind::hyperbolic:
      return minkowski(u, v);
    case Kind::warped: {
      const Eigen::Index m = x.size() - 1;
      const double f = warp_.value(x(0));
      return u(0) * v(0) + f * f * fiber_->inner(x.tail(m), u.tail(m), v.tail(m));
    }
  }
  return 0.0;
}

double SpaceForm::norm(const Vec& x, const Vec& v) const { return std::sqrt(std::max(0.0, inner(x, v, v))); }

Vec SpaceForm::project_tangent(const Vec& x, const Vec& v) const {
  switch (kind_) {
    case Kind::euclidean:
      return v;
    case Kind::sphere:
      return v - (x.dot(v) / x.squaredNorm()) * x;
    case Kind::hyperbolic:
      return v - (minkowski(x, v) / minkowski(x, x)) * x;
    case Kind::warped: {
      Vec out = v;
      const Eigen::Index m = x.size() - 1;
      out.tail(m) = fiber_->project_tangent(x.tail(m), v.tail(m));
      return out;
    }
  }
  return v;
}

Vec SpaceForm::project_point(const Vec& x) const {
  switch (kind_) {
    case Kind::euclidean:
      return x;
    case Kind::sphere:
      return radius_ * x / x.norm();
    case Kind::hyperbolic: {
      Vec y = x;
      y(dim_) = std::sqrt(radius_ * radius_ + x.head(dim_).squaredNorm());
      return y;
    }
    case Kind::warped: {
      Vec y = x;
      const Eigen::Index m = x.size() - 1;
      y.tail(m) = fiber_->project_point(x.tail(m));
      return y;
    }
  }
  return x;
}

double metric(const SpaceForm& M, const Point& x, const TangentVector& u, const TangentVector& v, double tol) {
  if (u.base.coords.size() != x.coords.size() || v.base.coords.size() != x.coords.size() ||
      (u.base.coords - x.coords).norm() > tol || (v.base.coords - x.coords).norm() > tol)
    throw MismatchError("tangent vectors are not based at the given point");
  M.check_point(x.coords, tol);
  if (M.tangency_residual(x.coords, u.components) > tol || M.tangency_residual(x.coords, v.components) > tol)
    throw InputError("vector is not tangent at the given point");
  return M.inner(x.coords, u.components, v.components);
}

// ---------------------------------------------------------------- frames

Mat SpaceForm::frame_impl(const Vec& x, double* quality) const {
  const int N = ambient_dim();
  double q = 1.0;
  Mat E;
  switch (kind_) {
    case Kind::euclidean:
      E = Mat::Identity(N, dim_);
      break;
    case Kind::sphere:
    case Kind::hyperbolic: {
      E.resize(N, dim_);
      int found = 0;
      for (int k = 0; k < N && found < dim_; ++k) {
        Vec v = project_tangent(x, Vec::Unit(N, k));
        for (int j = 0; j < found; ++j) v -= inner(x, E.col(j), v) * E.col(j);
        const double nv = norm(x, v);
        if (nv < kSkipThreshold) continue;
        // Second pass: far out on the hyperboloid one pass leaves O(eps |x|^3) overlap.
        for (int j = 0; j < found; ++j) v -= inner(x, E.col(j), v) * E.col(j);
        v = project_tangent(x, v);
        q = std::min(q, nv);
        E.col(found++) = v / norm(x, v);
      }
      if (found < dim_) throw DomainError("frame construction degenerated");
      Mat ext(N, N);
      ext << E, x;
      if (ext.determinant() < 0) E.col(dim_ - 1) = -E.col(dim_ - 1);
      break;
    }
    case Kind::warped: {
      const Eigen::Index m = N - 1;
      double qf = 1.0;
      Mat F = fiber_->frame_impl(x.tail(m), &qf);
      const double f = warp_.value(x(0));
      E = Mat::Zero(N, dim_);
      E(0, 0) = 1.0;
      E.block(1, 1, m, dim_ - 1) = F / f;
      q = qf;
      break;
    }
  }
  if (quality) *quality = q;
  return E;
}

Mat SpaceForm::frame(const Vec& x) const { return frame_impl(x, nullptr); }

double SpaceForm::frame_quality(const Vec& x) const {
  double q = 0.0;
  frame_impl(x, &q);
  return q;
}

Vec SpaceForm::to_frame(const Vec& x, const Vec& v) const {
  const Mat E = frame(x);
  Vec c(dim_);
  for (int a = 0; a < dim_; ++a) c(a) = inner(x, E.col(a), v);
  return c;
}

Vec SpaceForm::from_frame(const Vec& x, const Vec& c) const {
  if (c.size() != dim_) throw InputError("frame coordinates have wrong size");
  return frame(x) * c;
}

// ---------------------------------------------------------------- curvature

Mat SpaceForm::curvature_frame(const Vec& x, const Mat& xi) const {
  if (xi.rows() != dim_ || xi.cols() != dim_) throw InputError("bivector dimension mismatch");
  if (skew_defect(xi) > 1e-12 * std::max(1.0, xi.norm())) throw InputError("bivector is not skew");
  if (constant_curvature()) return curvature() * xi;
  const double s = x(0);
  const double f = warp_.value(s), f1 = warp_.d1(s), f2 = warp_.d2(s);
  const double k_fiber = fiber_->curvature();
  const double radial = -f2 / f;
  const double planar = (k_fiber - f1 * f1) / (f * f);
  Mat out = xi;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      if (i == j) continue;
      out(i, j) *= (i == 0 || j == 0) ? radial : planar;
    }
  return out;
}

Vec SpaceForm::curvature_apply(const Vec& x, const Vec& X, const Vec& Y, const Vec& Z) const {
  const Mat R = curvature_frame(x, wedge_matrix(to_frame(x, X), to_frame(x, Y)));
  return from_frame(x, R * to_frame(x, Z));
}

double SpaceForm::sectional_curvature(const Vec& x, const Vec& X, const Vec& Y) const {
  const double xx = inner(x, X, X), yy = inner(x, Y, Y), xy = inner(x, X, Y);
  const double den = xx * yy - xy * xy;
  if (!(den > 1e-14 * std::max(1.0, xx * yy))) throw InputError("degenerate plane");
  return inner(x, curvature_apply(x, X, Y, Y), X) / den;
}

// ---------------------------------------------------------------- connection

Vec SpaceForm::connection(const Vec& x, const Vec& w, const Vec& u) const {
  switch (kind_) {
    case Kind::euclidean:
      return Vec::Zero(u.size());
    case Kind::sphere:
      return (w.dot(u) / (radius_ * radius_)) * x;
    case Kind::hyperbolic:
      return (-minkowski(w, u) / (radius_ * radius_)) * x;
    case Kind::warped: {
      const Eigen::Index m = x.size() - 1;
      const double s = x(0);
      const double f = warp_.value(s), f1 = warp_.d1(s);
      const Vec y = x.tail(m), wf = w.tail(m), uf = u.tail(m);
      Vec G(u.size());
      G(0) = -f * f1 * fiber_->inner(y, wf, uf);
      G.tail(m) = fiber_->connection(y, wf, uf) + (f1 / f) * (w(0) * uf + u(0) * wf);
      return G;
    }
  }
  return Vec::Zero(u.size());
}

// ---------------------------------------------------------------- geodesics

GeodesicFlow SpaceForm::geodesic_flow(const Vec& x, const Vec& v, double t, double step) const {
  GeodesicFlow g;
  const int n = dim_;
  switch (kind_) {
    case Kind::euclidean:
      g.point = x + t * v;
      g.velocity = v;
      g.T = Mat::Identity(n, n);
      return g;
    case Kind::sphere:
    case Kind::hyperbolic: {
      const bool sph = kind_ == Kind::sphere;
      const double speed = norm(x, v);
      if (speed == 0.0 || t == 0.0) {
        g.point = x;
        g.velocity = v;
        g.T = Mat::Identity(n, n);
        return g;
      }
      const Vec u = v / speed;
      const double th = speed * t / radius_;
      const double c = sph ? std::cos(th) : std::cosh(th);
      const double sn = sph ? std::sin(th) : std::sinh(th);
      g.point = c * x + radius_ * sn * u;
      const Vec u_t = (sph ? -sn : sn) * x / radius_ + c * u;
      g.velocity = speed * u_t;
      const Mat E0 = frame(x);
      const Mat E1 = frame(g.point);
      Mat P(E0.rows(), n);
      for (int k = 0; k < n; ++k) P.col(k) = E0.col(k) + inner(x, u, E0.col(k)) * (u_t - u);
      g.T.resize(n, n);
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a) g.T(a, k) = inner(g.point, E1.col(a), P.col(k));
      return g;
    }
    case Kind::warped:
      break;
  }

  // Warped products: RK4 on (point, velocity, transported frame).
  const int N = ambient_dim();
  const double speed = std::max(1.0, norm(x, v));
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * speed / step)));
  const double h = t / steps;
  Mat S(N, n + 2);  // columns: point, velocity, frame
  S.col(0) = x;
  S.col(1) = v;
  S.rightCols(n) = frame(x);
  auto rhs = [&](const Mat& Y) {
    if (!interval_.contains(Y(0, 0))) throw DomainError("geodesic left the warped interval");
    Mat D(N, n + 2);
    const Vec p = Y.col(0), w = Y.col(1);
    D.col(0) = w;
    D.col(1) = -connection(p, w, w);
    for (int k = 0; k < n; ++k) D.col(2 + k) = -connection(p, w, Y.col(2 + k));
    return D;
  };
  for (int i = 0; i < steps; ++i) {
    const Mat k1 = rhs(S);
    const Mat k2 = rhs(S + 0.5 * h * k1);
    const Mat k3 = rhs(S + 0.5 * h * k2);
    const Mat k4 = rhs(S + h * k3);
    S += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!interval_.contains(S(0, 0))) throw DomainError("geodesic left the warped interval");
  g.point = S.col(0);
  g.velocity = S.col(1);
  const Mat E1 = frame(g.point);
  g.T.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a) g.T(a, k) = inner(g.point, E1.col(a), S.col(2 + k));
  return g;
}

Vec SpaceForm::geodesic(const Vec& x, const Vec& v, double t) const {
  switch (kind_) {
    case Kind::euclidean:
      return x + t * v;
    case Kind::sphere:
    case Kind::hyperbolic: {
      const double speed = norm(x, v);
      if (speed == 0.0) return x;
      const double th = speed * t / radius_;
      const Vec u = v / speed;
      if (kind_ == Kind::sphere) return std::cos(th) * x + radius_ * std::sin(th) * u;
      return std::cosh(th) * x + radius_ * std::sinh(th) * u;
    }
    case Kind::warped:
      break;
  }
  return geodesic_flow(x, v, t).point;
}

Vec SpaceForm::log_map(const Vec& x, const Vec& y) const {
  switch (kind_) {
    case Kind::euclidean:
      return y - x;
    case Kind::sphere: {
      const double r2 = radius_ * radius_;
      const double c = std::clamp(x.dot(y) / r2, -1.0, 1.0);
      const Vec w = y - c * x;
      const double nw = w.norm();
      if (nw == 0.0) {
        if (c < 0) throw DomainError("log map undefined at the antipode");
        return Vec::Zero(x.size());
      }
      return (std::acos(c) * radius_ / nw) * w;
    }
    case Kind::hyperbolic: {
      const double r2 = radius_ * radius_;
      const double c = std::max(1.0, -minkowski(x, y) / r2);
      const Vec w = y - c * x;
      const double nw = std::sqrt(std::max(0.0, minkowski(w, w)));
      if (nw == 0.0) return Vec::Zero(x.size());
      return (std::acosh(c) * radius_ / nw) * w;
    }
    case Kind::warped:
      break;
  }
  throw DomainError("log map is only available for constant-curvature kinds");
}

Mat SpaceForm::transport_between(const Vec& x, const Vec& y) const {
  return geodesic_flow(x, log_map(x, y), 1.0).T;
}

// ---------------------------------------------------------------- sampling

Vec SpaceForm::sample_point(Rng& rng) const {
  switch (kind_) {
    case Kind::euclidean:
      return gaussian_vector(dim_, rng);
    case Kind::sphere: {
      Vec g = gaussian_vector(dim_ + 1, rng);
      return radius_ * g / g.norm();
    }
    case Kind::hyperbolic: {
      Vec x(dim_ + 1);
      x.head(dim_) = 0.8 * radius_ * gaussian_vector(dim_, rng);
      x(dim_) = std::sqrt(radius_ * radius_ + x.head(dim_).squaredNorm());
      return x;
    }
    case Kind::warped: {
      std::uniform_real_distribution<double> U(0.1, 0.9);
      Vec x(ambient_dim());
      x(0) = interval_.lo + U(rng) * (interval_.hi - interval_.lo);
      x.tail(x.size() - 1) = fiber_->sample_point(rng);
      return x;
    }
  }
  return Vec();
}

Vec SpaceForm::sample_point(Rng& rng, double min_quality) const {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vec x = sample_point(rng);
    if (frame_quality(x) >= min_quality) return x;
  }
  throw DomainError("could not sample a point with the requested frame quality");
}

Vec SpaceForm::random_tangent(const Vec& x, Rng& rng) const { return from_frame(x, gaussian_vector(dim_, rng)); }

// ---------------------------------------------------------------- transport

std::vector<Vec> parallel_transport(const SpaceForm& M, const Path& path, const Vec& v0, double step) {
  if (!(step > 0.0)) throw InputError("transport step must be positive");
  const double T = path.duration();
  M.check_point(path.point(0.0), 1e-8);
  if (M.tangency_residual(path.point(0.0), v0) > 1e-8) throw InputError("initial vector is not tangent");
  std::vector<Vec> out{v0};
  if (T == 0.0) return out;
  const int steps = std::max(1, static_cast<int>(std::ceil(T / step)));
  const double h = T / steps;

  if (const auto* geo = dynamic_cast<const GeodesicPath*>(&path); geo && M.constant_curvature()) {
    const Vec& x = geo->start();
    const Vec c0 = M.to_frame(x, v0);
    for (int i = 1; i <= steps; ++i) {
      const GeodesicFlow g = M.geodesic_flow(x, geo->initial_velocity(), i * h);
      out.push_back(M.from_frame(g.point, g.T * c0));
    }
    return out;
  }

  Vec v = v0;
  auto rhs = [&](double t, const Vec& u) { return M.transport_rhs(path.point(t), path.velocity(t), u); };
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const Vec k1 = rhs(t, v);
    const Vec k2 = rhs(t + 0.5 * h, v + 0.5 * h * k1);
    const Vec k3 = rhs(t + 0.5 * h, v + 0.5 * h * k2);
    const Vec k4 = rhs(t + h, v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(v);
  }
  return out;
}

}  // namespace rollsym
