#include "rollsym/symmetry.hpp"

#include <cmath>

#include "rollsym/errors.hpp"

namespace rollsym {

std::string candidate_kind_name(CandidateKind k) {
  switch (k) {
    case CandidateKind::general:
      return "general";
    case CandidateKind::sym0:
      return "sym0";
    case CandidateKind::inner:
      return "inner";
    case CandidateKind::killing_induced:
      return "killing-induced";
  }
  return "unknown";
}

std::string killing_type_name(KillingType t) {
  switch (t) {
    case KillingType::translation:
      return "translation";
    case KillingType::rotation:
      return "rotation";
    case KillingType::boost:
      return "boost";
    case KillingType::hopf:
      return "hopf";
  }
  return "unknown";
}

SymmetryCandidate zero_candidate(int n) {
  SymmetryCandidate S;
  S.kind = CandidateKind::sym0;
  S.Z = [n](const RollingState&) { return Vec::Zero(n); };
  S.Z_hat = [n](const RollingState&) { return Vec::Zero(n); };
  S.U = [n](const RollingState&) { return Mat::Zero(n, n); };
  S.label = "zero";
  return S;
}

// ---------------------------------------------------------------- Killing fields

KillingField::KillingField(SpaceForm M, KillingGenerator gen) : M_(std::move(M)), gen_(gen) {
  const int N = M_.ambient_dim();
  const int n = M_.dim();
  J_ = Mat::Zero(N, N);
  b_ = Vec::Zero(N);
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw MismatchError(what);
  };
  switch (M_.kind()) {
    case Kind::warped:
      throw InputError("Killing catalog does not cover warped products");
    case Kind::euclidean:
      need(gen.type == KillingType::translation || gen.type == KillingType::rotation,
           "only translations and rotations act on euclidean space");
      break;
    case Kind::sphere:
      need(gen.type == KillingType::rotation || gen.type == KillingType::hopf, "only rotations act on spheres");
      break;
    case Kind::hyperbolic:
      need(gen.type == KillingType::rotation || gen.type == KillingType::boost,
           "only rotations and boosts act on hyperbolic space");
      break;
  }
  switch (gen.type) {
    case KillingType::translation:
      need(0 <= gen.i && gen.i < n, "translation axis out of range");
      b_(gen.i) = 1.0;
      break;
    case KillingType::rotation: {
      const int limit = M_.kind() == Kind::hyperbolic ? n : N;
      need(0 <= gen.i && gen.i < gen.j && gen.j < limit, "rotation plane out of range");
      J_(gen.i, gen.j) = 1.0;
      J_(gen.j, gen.i) = -1.0;
      break;
    }
    case KillingType::boost:
      need(0 <= gen.i && gen.i < n, "boost axis out of range");
      J_(gen.i, n) = 1.0;
      J_(n, gen.i) = 1.0;
      break;
    case KillingType::hopf:
      need(N % 2 == 0, "hopf field needs an odd-dimensional sphere");
      for (int k = 0; k < N; k += 2) {
        J_(k, k + 1) = -1.0;
        J_(k + 1, k) = 1.0;
      }
      break;
  }
}

std::string KillingField::label() const {
  switch (gen_.type) {
    case KillingType::translation:
    case KillingType::boost:
      return killing_type_name(gen_.type) + "[" + std::to_string(gen_.i) + "]";
    case KillingType::rotation:
      return "rotation[" + std::to_string(gen_.i) + "," + std::to_string(gen_.j) + "]";
    case KillingType::hopf:
      return "hopf";
  }
  return "unknown";
}

Vec KillingField::value(const Vec& x) const { return J_ * x + b_; }

Vec KillingField::value_frame(const Vec& x) const { return M_.to_frame(x, value(x)); }

Mat KillingField::derivative_frame(const Vec& x) const {
  const Mat E = M_.frame(x);
  const int n = M_.dim();
  Mat D(n, n);
  for (int b = 0; b < n; ++b) {
    const Vec JE = J_ * E.col(b);
    for (int a = 0; a < n; ++a) D(a, b) = M_.inner(x, E.col(a), JE);
  }
  return D;
}

std::vector<KillingField> killing_catalog(const SpaceForm& M) {
  const int n = M.dim();
  std::vector<KillingField> out;
  switch (M.kind()) {
    case Kind::warped:
      throw InputError("Killing catalog does not cover warped products");
    case Kind::euclidean:
      for (int i = 0; i < n; ++i) out.emplace_back(M, KillingGenerator{KillingType::translation, i, 0});
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.emplace_back(M, KillingGenerator{KillingType::rotation, i, j});
      break;
    case Kind::sphere:
      for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) out.emplace_back(M, KillingGenerator{KillingType::rotation, i, j});
      break;
    case Kind::hyperbolic:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.emplace_back(M, KillingGenerator{KillingType::rotation, i, j});
      for (int i = 0; i < n; ++i) out.emplace_back(M, KillingGenerator{KillingType::boost, i, 0});
      break;
  }
  return out;
}

double killing_skew_defect(const KillingField& K, const Vec& x) { return skew_defect(K.derivative_frame(x)); }

double killing_ode_residual(const KillingField& K, const Vec& x, const Vec& X, const StencilOptions& opts) {
  const SpaceForm& M = K.manifold();
  const Vec v = M.from_frame(x, X);
  auto sample = [&](double s) -> Mat {
    const GeodesicFlow g = M.geodesic_flow(x, v, s);
    return g.T.transpose() * K.derivative_frame(g.point) * g.T;
  };
  const Mat lhs = central_difference(sample, opts.h, opts.order);
  const Mat rhs = M.curvature_frame(x, wedge_matrix(X, K.value_frame(x)));
  return (lhs - rhs).norm();
}

SymmetryCandidate killing_to_symmetry(const RollingModel& model, const KillingField& K) {
  if (!(K.manifold() == model.M_hat)) throw MismatchError("Killing field does not live on the rolled-on manifold");
  const int n = model.n();
  SymmetryCandidate S;
  S.kind = CandidateKind::sym0;
  S.Z = [n](const RollingState&) { return Vec::Zero(n); };
  S.Z_hat = [K](const RollingState& q) { return K.value_frame(q.x_hat); };
  S.U = [K](const RollingState& q) { return Mat(K.derivative_frame(q.x_hat) * q.A); };
  S.label = "killing:" + K.label();
  return S;
}

SymmetryCandidate perturb_candidate(const SymmetryCandidate& S, const Mat& E) {
  if (skew_defect(E) > 1e-12 * std::max(1.0, E.norm())) throw InputError("perturbation must be skew");
  SymmetryCandidate P = S;
  const auto U = S.U;
  P.U = [U, E](const RollingState& q) { return Mat(U(q) + q.A * E); };
  P.label = S.label + "+perturbed";
  return P;
}

// ---------------------------------------------------------------- residuals

namespace {

BundleMap vec_map(ValueKind kind, std::function<Vec(const RollingState&)> f) {
  return {kind, [f](const RollingState& q) { return Mat(f(q)); }};
}

ResidualPair residual_impl(const RollingModel& model, const SymmetryCandidate& S, const RollingState& q, const Vec& X,
                           const StencilOptions& opts, bool with_z) {
  if (X.size() != model.n()) throw MismatchError("vector is not in the tangent space at x");
  const Mat& A = q.A;
  const Vec dZhat = lr_derivative(model, vec_map(ValueKind::vec_mhat, S.Z_hat), q, X, opts);
  const Mat dU = lr_derivative(model, {ValueKind::map_m_mhat, S.U}, q, X, opts);
  const Vec Zhat = S.Z_hat(q);
  Vec rhs1 = dZhat;
  Mat rhs2 = model.M_hat.curvature_frame(q.x_hat, wedge_matrix(A * X, Zhat)) * A;
  if (with_z) {
    const Vec dZ = lr_derivative(model, vec_map(ValueKind::vec_m, S.Z), q, X, opts);
    rhs1 -= A * dZ;
    rhs2 -= A * model.M.curvature_frame(q.x, wedge_matrix(X, S.Z(q)));
  }
  ResidualPair r;
  r.eq1 = (S.U(q) * X - rhs1).norm();
  r.eq2 = (dU - rhs2).norm();
  return r;
}

}  // namespace

ResidualPair symmetry_residual(const RollingModel& model, const SymmetryCandidate& S, const RollingState& q,
                               const Vec& X, const StencilOptions& opts) {
  return residual_impl(model, S, q, X, opts, true);
}

ResidualPair sym0_residual(const RollingModel& model, const SymmetryCandidate& S, const RollingState& q, const Vec& X,
                           const StencilOptions& opts) {
  if (S.kind != CandidateKind::sym0) throw MismatchError("sym0 residual needs a sym0 candidate");
  return residual_impl(model, S, q, X, opts, false);
}

double inner_symmetry_residual(const RollingModel& model, const std::function<Vec(const RollingState&)>& Z,
                               const RollingState& q) {
  const int n = model.n();
  const Vec z = Z(q);
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, rol(model, q, wedge_matrix(Vec::Unit(n, i), z)).norm());
  return m;
}

double vertz_residual(const RollingModel& model, const SymmetryCandidate& S, const RollingState& q, const Vec& X,
                      const Vec& Y, const StencilOptions& opts) {
  const Mat B = rol(model, q, wedge_matrix(X, Y));
  const Mat C = q.A.transpose() * B;
  if (skew_defect(C) > 1e-9 * std::max(1.0, C.norm())) throw DomainError("Rol_q(X^Y) is not tangent to the fiber");
  const Mat Cs = skew_part(C);
  const Vec lhs = q.A * vertical_derivative(model, vec_map(ValueKind::vec_m, S.Z), q, Cs, opts);
  const Vec rhs = vertical_derivative(model, vec_map(ValueKind::vec_mhat, S.Z_hat), q, Cs, opts);
  return (lhs - rhs).norm();
}

// ---------------------------------------------------------------- propagation

std::vector<double> uniform_grid(double length, int intervals) {
  if (intervals < 1) throw InputError("grid needs at least one interval");
  std::vector<double> t(intervals + 1);
  for (int i = 0; i <= intervals; ++i) t[i] = length * i / intervals;
  return t;
}

std::vector<Sym0Sample> propagate_sym0(const RollingModel& model, const RollingState& q1, const Vec& X,
                                       const Vec& Z_hat_0, const Mat& U_0, const std::vector<double>& t_grid) {
  const int n = model.n();
  if (t_grid.size() < 2 || t_grid.front() != 0.0) throw InputError("time grid must start at 0 with two or more nodes");
  const int N = static_cast<int>(t_grid.size()) - 1;
  const double h = t_grid.back() / N;
  for (int i = 0; i <= N; ++i)
    if (std::abs(t_grid[i] - i * h) > 1e-9 * std::max(1.0, std::abs(t_grid.back())))
      throw InputError("time grid must be uniform");
  if (X.size() != n || Z_hat_0.size() != n || U_0.rows() != n || U_0.cols() != n)
    throw MismatchError("initial data has wrong dimension");

  const TangentOfQ V = rolling_lift(q1, X);
  const Vec vh = q1.A * X;
  // Curvature of M_hat pulled back to x_hat(0) by parallel transport.
  auto curv = [&](double t, const Mat& xi) -> Mat {
    const NoSpinFlow f = flow_no_spin_transport(model, q1, V, t);
    return f.T_hat.transpose() * model.M_hat.curvature_frame(f.q.x_hat, f.T_hat * xi * f.T_hat.transpose()) *
           f.T_hat;
  };
  auto accel = [&](double t, const Vec& y) -> Vec { return curv(t, wedge_matrix(vh, y)) * vh; };

  std::vector<Vec> y(N + 1), dy(N + 1);
  y[0] = Z_hat_0;
  dy[0] = U_0 * X;
  for (int i = 0; i < N; ++i) {
    const double t = i * h;
    const Vec k1y = dy[i], k1v = accel(t, y[i]);
    const Vec k2y = dy[i] + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, y[i] + 0.5 * h * k1y);
    const Vec k3y = dy[i] + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, y[i] + 0.5 * h * k2y);
    const Vec k4y = dy[i] + h * k3v, k4v = accel(t + h, y[i] + h * k3y);
    y[i + 1] = y[i] + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    dy[i + 1] = dy[i] + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }

  std::vector<Mat> f(N + 1);
  for (int i = 0; i <= N; ++i) f[i] = curv(i * h, wedge_matrix(vh, y[i]));
  std::vector<Mat> J(N + 1, Mat::Zero(n, n));
  for (int i = 0; i < N; ++i) {
    if (i % 2 == 0 && i + 2 <= N) {
      J[i + 1] = J[i] + h * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]) / 12.0;
      J[i + 2] = J[i] + h * (f[i] + 4.0 * f[i + 1] + f[i + 2]) / 3.0;
      ++i;
    } else if (i >= 1) {
      J[i + 1] = J[i] + h * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]) / 12.0;
    } else {
      J[i + 1] = J[i] + 0.5 * h * (f[i] + f[i + 1]);
    }
  }

  std::vector<Sym0Sample> out;
  out.reserve(N + 1);
  for (int i = 0; i <= N; ++i) {
    const NoSpinFlow fl = flow_no_spin_transport(model, q1, V, i * h);
    Sym0Sample s;
    s.t = i * h;
    s.q = fl.q;
    s.Z_hat = fl.T_hat * y[i];
    s.U = fl.T_hat * (U_0 + J[i] * q1.A) * fl.T.transpose();
    out.push_back(std::move(s));
  }
  return out;
}

RankReport sym0_dimension_probe(const RollingModel& model, const RollingState& q0,
                                const std::vector<SymmetryCandidate>& candidates, double tol) {
  const int n = model.n();
  Mat V(n + bivector_dim(n), candidates.size());
  for (size_t k = 0; k < candidates.size(); ++k) {
    const SymmetryCandidate& S = candidates[k];
    if (S.kind != CandidateKind::sym0) throw MismatchError("dimension probe needs sym0 candidates");
    V.col(k) << S.Z_hat(q0), skew_to_coeffs(q0.A.transpose() * S.U(q0));
  }
  return numerical_rank(V, tol);
}

}  // namespace rollsym
