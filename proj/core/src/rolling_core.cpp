#include "rollsym/rolling_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "rollsym/errors.hpp"

namespace rollsym {

namespace {

using Flow = NoSpinFlow;

Flow flow_with_transport(const RollingModel& model, const RollingState& q, const TangentOfQ& V, double t) {
  const int n = model.n();
  Flow out;
  if (V.X.isZero(0.0)) {
    out.q.x = q.x;
    out.T = Mat::Identity(n, n);
  } else {
    GeodesicFlow g = model.M.geodesic_flow(q.x, model.M.from_frame(q.x, V.X), t);
    out.q.x = std::move(g.point);
    out.T = std::move(g.T);
  }
  if (V.X_hat.isZero(0.0)) {
    out.q.x_hat = q.x_hat;
    out.T_hat = Mat::Identity(n, n);
  } else {
    GeodesicFlow g = model.M_hat.geodesic_flow(q.x_hat, model.M_hat.from_frame(q.x_hat, V.X_hat), t);
    out.q.x_hat = std::move(g.point);
    out.T_hat = std::move(g.T);
  }
  Mat turned = V.C.isZero(0.0) ? q.A : Mat(q.A * expm_skew(t * V.C));
  out.q.A = out.T_hat * turned * out.T.transpose();
  return out;
}

Mat transport_back(ValueKind kind, const Mat& d, const Mat& T, const Mat& Th) {
  switch (kind) {
    case ValueKind::scalar:
      return d;
    case ValueKind::vec_m:
      return T.transpose() * d;
    case ValueKind::vec_mhat:
      return Th.transpose() * d;
    case ValueKind::map_m_mhat:
      return Th.transpose() * d * T;
    case ValueKind::end_m:
      return T.transpose() * d * T;
    case ValueKind::end_mhat:
      return Th.transpose() * d * Th;
  }
  return d;
}

// Connection form of the deterministic frame: w(v)_ab = <E_a, nabla_v E_b>.
Mat connection_form(const SpaceForm& M, const Vec& x, const Vec& v) {
  const double eps = 1e-5;
  const Mat Ep = M.frame(M.project_point(x + eps * v));
  const Mat Em = M.frame(M.project_point(x - eps * v));
  const Mat E = M.frame(x);
  const Mat dE = (Ep - Em) / (2 * eps);
  const int n = M.dim();
  Mat w(n, n);
  for (int b = 0; b < n; ++b) {
    const Vec cov = dE.col(b) + M.connection(x, v, E.col(b));
    for (int a = 0; a < n; ++a) w(a, b) = M.inner(x, E.col(a), cov);
  }
  return w;
}

Mat orthonormalize(const SpaceForm& M, const Vec& x, const Mat& P) {
  Mat Q = P;
  for (int k = 0; k < Q.cols(); ++k) {
    Vec v = M.project_tangent(x, Q.col(k));
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < k; ++j) v -= M.inner(x, Q.col(j), v) * Q.col(j);
    Q.col(k) = v / M.norm(x, v);
  }
  return Q;
}

Mat frame_coords(const SpaceForm& M, const Vec& x, const Mat& P) {
  const Mat E = M.frame(x);
  Mat C(P.cols(), P.cols());
  for (int k = 0; k < P.cols(); ++k)
    for (int a = 0; a < P.cols(); ++a) C(a, k) = M.inner(x, E.col(a), P.col(k));
  return C;
}

void check_domain(const SpaceForm& M, const Vec& x, const char* what) {
  if (M.kind() == Kind::warped && !M.interval().contains(x(0)))
    throw DomainError(std::string(what) + " left the warped interval");
}

}  // namespace

// ---------------------------------------------------------------- model

RollingModel::RollingModel(SpaceForm M_, SpaceForm M_hat_) : M(std::move(M_)), M_hat(std::move(M_hat_)) {
  if (M.dim() != M_hat.dim()) throw MismatchError("rolling manifolds must have equal dimension");
  if (M.dim() < 2) throw InputError("rolling requires dimension at least 2");
}

double RollingModel::kappa() const { return -M.curvature() + M_hat.curvature(); }

TangentOfQ TangentOfQ::zero(int n) { return {Vec::Zero(n), Vec::Zero(n), Mat::Zero(n, n)}; }

Vec TangentOfQ::to_vector() const {
  const int n = static_cast<int>(X.size());
  Vec v(2 * n + bivector_dim(n));
  v << X, X_hat, skew_to_coeffs(C);
  return v;
}

TangentOfQ TangentOfQ::from_vector(const Vec& v, int n) {
  if (v.size() != 2 * n + bivector_dim(n)) throw InputError("tangent vector of Q has wrong size");
  return {v.head(n), v.segment(n, n), coeffs_to_skew(v.tail(bivector_dim(n)), n)};
}

TangentOfQ operator+(const TangentOfQ& a, const TangentOfQ& b) { return {a.X + b.X, a.X_hat + b.X_hat, a.C + b.C}; }
TangentOfQ operator-(const TangentOfQ& a, const TangentOfQ& b) { return {a.X - b.X, a.X_hat - b.X_hat, a.C - b.C}; }
TangentOfQ operator*(double s, const TangentOfQ& a) { return {s * a.X, s * a.X_hat, s * a.C}; }

// ---------------------------------------------------------------- states

void check_state(const RollingModel& model, const RollingState& q, double tol) {
  model.M.check_point(q.x, std::max(tol, 1e-9));
  model.M_hat.check_point(q.x_hat, std::max(tol, 1e-9));
  const int n = model.n();
  if (q.A.rows() != n || q.A.cols() != n) throw InputError("A must be n x n");
  if (orthogonality_defect(q.A) > tol) throw InputError("A is not an isometry");
  if (!(q.A.determinant() > 0)) throw InputError("A must preserve orientation");
}

RollingState make_state(const RollingModel& model, const Vec& x, const Vec& x_hat, const Mat& A) {
  RollingState q{x, x_hat, A};
  check_state(model, q);
  return q;
}

RollingState sample_state(const RollingModel& model, Rng& rng, double min_quality) {
  RollingState q;
  q.x = model.M.sample_point(rng, min_quality);
  q.x_hat = model.M_hat.sample_point(rng, min_quality);
  q.A = random_rotation(model.n(), rng);
  return q;
}

TangentOfQ rolling_lift(const RollingState& q, const Vec& X) {
  if (X.size() != q.A.cols()) throw MismatchError("vector is not in the tangent space at x");
  return {X, q.A * X, Mat::Zero(X.size(), X.size())};
}

RollingState flow_no_spin(const RollingModel& model, const RollingState& q, const TangentOfQ& V, double t) {
  return flow_with_transport(model, q, V, t).q;
}

NoSpinFlow flow_no_spin_transport(const RollingModel& model, const RollingState& q, const TangentOfQ& V, double t) {
  return flow_with_transport(model, q, V, t);
}

// ---------------------------------------------------------------- rolling curves

double RollingCurve::max_isometry_residual() const {
  double m = 0.0;
  for (double r : isometry_residual) m = std::max(m, r);
  return m;
}

double RollingCurve::min_det() const {
  double m = std::numeric_limits<double>::infinity();
  for (const RollingState& s : states) m = std::min(m, s.A.determinant());
  return m;
}

RollingCurve roll_along(const RollingModel& model, const RollingState& q0, const Path& gamma, const RollOptions& opts) {
  if (!(opts.step > 0.0)) throw InputError("integration step must be positive");
  check_state(model, q0, 1e-9);
  const SpaceForm& M = model.M;
  const SpaceForm& Mh = model.M_hat;
  if ((gamma.point(0.0) - q0.x).norm() > 1e-8) throw InputError("path does not start at x of the initial state");
  const int n = model.n();
  const double T = gamma.duration();

  RollingCurve curve;
  curve.times.push_back(0.0);
  curve.states.push_back(q0);
  curve.base_curve.push_back(q0.x);
  curve.isometry_residual.push_back(orthogonality_defect(q0.A));
  if (T == 0.0) return curve;

  const int steps = std::max(1, static_cast<int>(std::ceil(T / opts.step)));
  const double h = T / steps;
  const int N = M.ambient_dim(), Nh = Mh.ambient_dim();

  // Parallel frame along gamma, rolled point, parallel frame along the rolled curve.
  struct S {
    Mat P;
    Vec xh;
    Mat Ph;
  };
  auto axpy = [](const S& a, double s, const S& d) { return S{a.P + s * d.P, a.xh + s * d.xh, a.Ph + s * d.Ph}; };
  auto rhs = [&](double t, const S& y) {
    const Vec g = gamma.point(t), gd = gamma.velocity(t);
    check_domain(M, g, "driving path");
    check_domain(Mh, y.xh, "rolled curve");
    S d{Mat(N, n), Vec(Nh), Mat(Nh, n)};
    Vec c(n);
    for (int k = 0; k < n; ++k) {
      d.P.col(k) = M.transport_rhs(g, gd, y.P.col(k));
      c(k) = M.inner(g, y.P.col(k), gd);
    }
    d.xh = y.Ph * c;
    for (int k = 0; k < n; ++k) d.Ph.col(k) = Mh.transport_rhs(y.xh, d.xh, y.Ph.col(k));
    return d;
  };

  S y{M.frame(q0.x), q0.x_hat, Mh.frame(q0.x_hat) * q0.A};
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const S k1 = rhs(t, y);
    const S k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const S k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const S k4 = rhs(t + h, axpy(y, h, k3));
    y.P += (h / 6.0) * (k1.P + 2.0 * k2.P + 2.0 * k3.P + k4.P);
    y.xh += (h / 6.0) * (k1.xh + 2.0 * k2.xh + 2.0 * k3.xh + k4.xh);
    y.Ph += (h / 6.0) * (k1.Ph + 2.0 * k2.Ph + 2.0 * k3.Ph + k4.Ph);
    const double t1 = (i + 1) * h;
    const Vec g = gamma.point(t1);
    check_domain(Mh, y.xh, "rolled curve");
    if (opts.project) {
      y.xh = Mh.project_point(y.xh);
      y.P = orthonormalize(M, g, y.P);
      y.Ph = orthonormalize(Mh, y.xh, y.Ph);
    }
    RollingState q;
    q.x = g;
    q.x_hat = y.xh;
    q.A = frame_coords(Mh, y.xh, y.Ph) * frame_coords(M, g, y.P).transpose();
    curve.times.push_back(t1);
    curve.base_curve.push_back(g);
    curve.isometry_residual.push_back(orthogonality_defect(q.A));
    curve.states.push_back(std::move(q));
  }
  return curve;
}

TangentOfQ decompose_velocity(const RollingModel& model, const RollingCurve& curve, int i) {
  const int last = static_cast<int>(curve.states.size()) - 1;
  if (i <= 0 || i >= last) throw InputError("velocity decomposition needs an interior sample");
  const RollingState& q = curve.states[i];
  const auto& ts = curve.times;
  const double h = ts[i + 1] - ts[i];
  // Five-point stencil (centred, or shifted by one at the ends) on uniform runs; three-point otherwise.
  static constexpr double centred[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
  static constexpr double forward[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
  static constexpr double backward[5] = {-1.0, 6.0, -18.0, 10.0, 3.0};
  int first = -1;
  const double* weights = nullptr;
  if (last >= 4) {
    if (i >= 2 && i <= last - 2) {
      first = i - 2, weights = centred;
    } else if (i == 1) {
      first = 0, weights = forward;
    } else {
      first = i - 3, weights = backward;
    }
    for (int k = first; k < first + 4; ++k)
      if (std::abs(ts[k + 1] - ts[k] - h) > 1e-9 * h) weights = nullptr;
  }
  auto diff = [&](auto get) {
    using T = std::decay_t<decltype(get(q))>;
    if (weights) {
      T acc = weights[0] * get(curve.states[first]);
      for (int k = 1; k < 5; ++k) acc += weights[k] * get(curve.states[first + k]);
      return T(acc / (12.0 * h));
    }
    return T((get(curve.states[i + 1]) - get(curve.states[i - 1])) / (ts[i + 1] - ts[i - 1]));
  };
  const Vec dx = model.M.project_tangent(q.x, diff([](const RollingState& r) -> Vec { return r.x; }));
  const Vec dxh = model.M_hat.project_tangent(q.x_hat, diff([](const RollingState& r) -> Vec { return r.x_hat; }));
  const Mat dA = diff([](const RollingState& r) -> Mat { return r.A; });
  const Mat w = connection_form(model.M, q.x, dx);
  const Mat wh = connection_form(model.M_hat, q.x_hat, dxh);
  const Mat nablaA = dA + wh * q.A - q.A * w;
  return {model.M.to_frame(q.x, dx), model.M_hat.to_frame(q.x_hat, dxh), q.A.transpose() * nablaA};
}

// ---------------------------------------------------------------- derivatives

Mat directional_derivative(const RollingModel& model, const BundleMap& F, const RollingState& q, const TangentOfQ& V,
                           const StencilOptions& opts) {
  if (!(opts.h > 0.0)) throw InputError("stencil step must be positive");
  if (opts.order != 2 && opts.order != 4) throw InputError("stencil order must be 2 or 4");
  auto sample = [&](double s) -> Mat {
    const Flow f = flow_with_transport(model, q, V, s);
    return transport_back(F.kind, F.eval(f.q), f.T, f.T_hat);
  };
  return central_difference(sample, opts.h, opts.order);
}

Mat lr_derivative(const RollingModel& model, const BundleMap& F, const RollingState& q, const Vec& X,
                  const StencilOptions& opts) {
  return directional_derivative(model, F, q, rolling_lift(q, X), opts);
}

Mat vertical_derivative(const RollingModel& model, const BundleMap& F, const RollingState& q, const Mat& C,
                        const StencilOptions& opts) {
  if (C.rows() != model.n() || C.cols() != model.n()) throw InputError("fiber direction has wrong size");
  if (skew_defect(C) > 1e-12 * std::max(1.0, C.norm())) throw InputError("fiber direction is not skew");
  return directional_derivative(model, F, q, {Vec::Zero(model.n()), Vec::Zero(model.n()), C}, opts);
}

}  // namespace rollsym
