#include "rollsym/lie_engine.hpp"

#include <algorithm>
#include <limits>

#include "rollsym/errors.hpp"

namespace rollsym {

TangentOfQ field_value(const RollingState& q, const FieldSample& s) { return {s.T, s.T_hat, q.A.transpose() * s.U}; }

FieldSample field_derivative(const RollingModel& model, const StructuredField& F, const RollingState& q,
                             const TangentOfQ& V) {
  if (F.derivative) return F.derivative(q, V);
  const int n = model.n();
  auto sample = [&](double s) -> Mat {
    const NoSpinFlow f = flow_no_spin_transport(model, q, V, s);
    const FieldSample v = F.eval(f.q);
    Mat packed(n, n + 2);
    packed.col(0) = f.T.transpose() * v.T;
    packed.col(1) = f.T_hat.transpose() * v.T_hat;
    packed.rightCols(n) = f.T_hat.transpose() * v.U * f.T;
    return packed;
  };
  const Mat d = central_difference(sample, F.stencil.h, F.stencil.order);
  return {d.col(0), d.col(1), d.rightCols(n)};
}

FrameField constant_frame_field(const Vec& c) {
  return [c](const Vec&) { return c; };
}

FrameField normal_extension(const SpaceForm& M, const Vec& x0, const Vec& X0) {
  if (!M.constant_curvature()) throw InputError("normal extension requires a constant-curvature manifold");
  return [M, x0, X0](const Vec& x) -> Vec { return M.transport_between(x0, x) * X0; };
}

Vec covariant_derivative(const SpaceForm& M, const FrameField& Y, const Vec& x, const Vec& X,
                         const StencilOptions& opts) {
  if (X.isZero(0.0)) return Vec::Zero(M.dim());
  const Vec v = M.from_frame(x, X);
  auto sample = [&](double s) -> Mat {
    const GeodesicFlow g = M.geodesic_flow(x, v, s);
    return g.T.transpose() * Y(g.point);
  };
  return central_difference(sample, opts.h, opts.order);
}

StructuredField rolling_lift_field(const RollingModel& model, FrameField Y, StencilOptions inner) {
  StructuredField F;
  const int n = model.n();
  F.eval = [Y, n](const RollingState& q) {
    const Vec y = Y(q.x);
    return FieldSample{y, q.A * y, Mat::Zero(n, n)};
  };
  const SpaceForm M = model.M;
  F.derivative = [Y, M, n, inner](const RollingState& q, const TangentOfQ& V) {
    const Vec y = Y(q.x);
    const Vec dy = covariant_derivative(M, Y, q.x, V.X, inner);
    return FieldSample{dy, q.A * (V.C * y) + q.A * dy, Mat::Zero(n, n)};
  };
  return F;
}

TangentOfQ bracket_structured(const RollingModel& model, const StructuredField& X, const StructuredField& Y,
                              const RollingState& q) {
  const FieldSample x = X.eval(q);
  const FieldSample y = Y.eval(q);
  const FieldSample dY = field_derivative(model, Y, q, field_value(q, x));
  const FieldSample dX = field_derivative(model, X, q, field_value(q, y));
  const Mat& A = q.A;
  const Mat curv = A * model.M.curvature_frame(q.x, wedge_matrix(x.T, y.T)) -
                   model.M_hat.curvature_frame(q.x_hat, wedge_matrix(x.T_hat, y.T_hat)) * A;
  const Mat U = dY.U - dX.U + curv;
  return {dY.T - dX.T, dY.T_hat - dX.T_hat, skew_part(A.transpose() * U)};
}

StructuredField bracket_field(const RollingModel& model, StructuredField X, StructuredField Y, StencilOptions nested) {
  StructuredField F;
  F.eval = [model, X, Y](const RollingState& q) {
    const TangentOfQ b = bracket_structured(model, X, Y, q);
    return FieldSample{b.X, b.X_hat, q.A * b.C};
  };
  F.stencil = nested;
  return F;
}

// ---------------------------------------------------------------- fd oracle

namespace {

struct Chart {
  const RollingModel& model;
  RollingState q;
  int n;

  RollingState phi(const Vec& z) const {
    TangentOfQ V = TangentOfQ::from_vector(z, n);
    V.C = Mat::Zero(n, n);
    const NoSpinFlow f = flow_no_spin_transport(model, q, V, 1.0);
    RollingState out = f.q;
    out.A = f.T_hat * q.A * expm_skew(coeffs_to_skew(z.tail(bivector_dim(n)), n)) * f.T.transpose();
    return out;
  }

  Vec psi(const RollingState& p) const {
    const SpaceForm& M = model.M;
    const SpaceForm& Mh = model.M_hat;
    const Vec lx = M.log_map(q.x, p.x);
    const Vec lxh = Mh.log_map(q.x_hat, p.x_hat);
    const Mat T = M.geodesic_flow(q.x, lx, 1.0).T;
    const Mat Th = Mh.geodesic_flow(q.x_hat, lxh, 1.0).T;
    const Mat W = logm_rotation(q.A.transpose() * Th.transpose() * p.A * T);
    Vec z(2 * n + bivector_dim(n));
    z << M.to_frame(q.x, lx), Mh.to_frame(q.x_hat, lxh), skew_to_coeffs(W);
    return z;
  }

  // Components of a field in the chart at phi(z).
  Vec components(const StructuredField& F, const Vec& z, double h) const {
    const RollingState p = phi(z);
    const TangentOfQ V = field_value(p, F.eval(p));
    auto sample = [&](double s) -> Mat { return psi(flow_no_spin(model, p, V, s)); };
    return central_difference(sample, h, 4);
  }
};

}  // namespace

TangentOfQ bracket_fd(const RollingModel& model, const StructuredField& X, const StructuredField& Y,
                      const RollingState& q, const BracketFdOptions& opts) {
  if (!model.constant_curvature()) throw InputError("bracket_fd requires a constant-curvature pair");
  const int n = model.n();
  const Chart chart{model, q, n};
  const Vec z0 = Vec::Zero(model.dim_q());
  const Vec cX = chart.components(X, z0, opts.h_field);
  const Vec cY = chart.components(Y, z0, opts.h_field);
  auto dY = [&](double s) -> Mat { return chart.components(Y, s * cX, opts.h_field); };
  auto dX = [&](double s) -> Mat { return chart.components(X, s * cY, opts.h_field); };
  const Vec b = central_difference(dY, opts.h_coord, 4) - central_difference(dX, opts.h_coord, 4);
  return TangentOfQ::from_vector(b, n);
}

// ---------------------------------------------------------------- flags

double FlagReport::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (double v : gaps) g = std::min(g, v);
  return g;
}

std::vector<int> predicted_growth(int n, bool kappa_zero) {
  if (kappa_zero) return {n, n, n};
  return {n, n * (n + 1) / 2, 2 * n + bivector_dim(n)};
}

FlagReport flag_ranks(const RollingModel& model, const RollingState& q, int depth, const FlagOptions& opts) {
  if (depth < 1 || depth > 6) throw InputError("flag depth must lie in [1, 6]");
  if (!(opts.tol > 0.0)) throw InputError("rank tolerance must be positive");
  const int n = model.n();
  const int D = model.dim_q();
  Mat R = opts.frame_rotation.size() ? opts.frame_rotation : Mat(Mat::Identity(n, n));
  if (R.rows() != n || R.cols() != n) throw InputError("frame rotation must be n x n");

  std::vector<StructuredField> gens;
  for (int i = 0; i < n; ++i) gens.push_back(rolling_lift_field(model, constant_frame_field(R.col(i))));

  FlagReport rep;
  rep.point = q;
  rep.tolerance = opts.tol;
  rep.dim_q = D;

  std::vector<Vec> kept;
  std::vector<StructuredField> frontier;
  auto stack = [&](const std::vector<Vec>& extra) {
    Mat V(D, kept.size() + extra.size());
    int c = 0;
    for (const Vec& v : kept) V.col(c++) = v;
    for (const Vec& v : extra) V.col(c++) = v;
    return V;
  };

  for (int level = 1; level <= depth; ++level) {
    std::vector<StructuredField> cands;
    if (level == 1) {
      cands = gens;
    } else if (level == 2) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) cands.push_back(bracket_field(model, gens[i], gens[j], opts.nested));
    } else {
      for (const StructuredField& g : gens)
        for (const StructuredField& f : frontier) cands.push_back(bracket_field(model, g, f, opts.nested));
    }
    std::vector<Vec> vals;
    for (const StructuredField& c : cands) vals.push_back(field_value(q, c.eval(q)).to_vector());

    const RankReport rr = numerical_rank(stack(vals), opts.tol);
    rep.ranks.push_back(rr.rank);
    rep.singular_values.push_back(rr.singular_values);
    rep.gaps.push_back(rr.gap);

    // Keep only candidates that enlarge the span; at equiregular points
    // brackets with dependent candidates add nothing new.
    frontier.clear();
    for (size_t k = 0; k < vals.size(); ++k) {
      const int before = numerical_rank(stack({}), opts.tol).rank;
      const int after = numerical_rank(stack({vals[k]}), opts.tol).rank;
      if (after > before) {
        kept.push_back(vals[k]);
        frontier.push_back(cands[k]);
      }
    }
  }
  return rep;
}

bool controllability_verdict(const RollingModel& model, const RollingState& q, const FlagOptions& opts) {
  const FlagReport rep = flag_ranks(model, q, 6, opts);
  return rep.ranks.back() == rep.dim_q;
}

DoubleBracketReport double_bracket_identity_residual(const RollingModel& model, const RollingState& q, const Vec& X,
                                                     const Vec& Y, const Vec& Z) {
  if (!model.constant_curvature()) throw InputError("double bracket identity requires a constant-curvature pair");
  const StructuredField LX = rolling_lift_field(model, normal_extension(model.M, q.x, X));
  const StructuredField LY = rolling_lift_field(model, normal_extension(model.M, q.x, Y));
  const StructuredField LZ = rolling_lift_field(model, normal_extension(model.M, q.x, Z));
  const TangentOfQ b = bracket_structured(model, LX, bracket_field(model, LY, LZ), q);
  const double kappa = model.kappa();
  DoubleBracketReport r;
  r.projected = b.X - q.A.transpose() * b.X_hat;
  r.expected = -kappa * Z.dot(X) * Y + kappa * Y.dot(X) * Z;
  r.residual = (r.projected - r.expected).norm();
  return r;
}

}  // namespace rollsym
