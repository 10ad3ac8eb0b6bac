#include "rollsym/curvature.hpp"

#include <algorithm>
#include <limits>

#include "rollsym/errors.hpp"

namespace rollsym {

Bivector::Bivector(int n) : n_(n), c_(Vec::Zero(bivector_dim(n))) {
  if (n < 1) throw InputError("bivector dimension must be positive");
}

Bivector Bivector::from_matrix(const Mat& S, double tol) {
  if (S.rows() != S.cols()) throw InputError("bivector matrix must be square");
  if (skew_defect(S) > tol * std::max(1.0, S.norm())) throw InputError("bivector matrix is not skew");
  Bivector b(static_cast<int>(S.rows()));
  b.c_ = skew_to_coeffs(S);
  return b;
}

Bivector Bivector::wedge(const Vec& X, const Vec& Y) {
  if (X.size() != Y.size()) throw MismatchError("wedge of vectors of different dimension");
  Bivector b(static_cast<int>(X.size()));
  b.c_ = skew_to_coeffs(wedge_matrix(X, Y));
  return b;
}

Bivector Bivector::basis(int n, int i, int j) {
  if (!(0 <= i && i < j && j < n)) throw InputError("basis bivector needs 0 <= i < j < n");
  return wedge(Vec::Unit(n, i), Vec::Unit(n, j));
}

Vec wedge_action(const SpaceForm& M, const Vec& x, const Vec& X, const Vec& Y, const Vec& Z) {
  if (X.size() != M.ambient_dim() || Y.size() != X.size() || Z.size() != X.size())
    throw MismatchError("wedge_action vectors do not share a tangent space");
  return M.inner(x, Z, Y) * X - M.inner(x, Z, X) * Y;
}

Mat rol(const RollingModel& model, const RollingState& q, const Mat& xi) {
  if (xi.rows() != model.n() || xi.cols() != model.n()) throw MismatchError("bivector dimension mismatch");
  const Mat& A = q.A;
  return A * model.M.curvature_frame(q.x, xi) - model.M_hat.curvature_frame(q.x_hat, A * xi * A.transpose()) * A;
}

Mat rol(const RollingModel& model, const RollingState& q, const Bivector& xi) { return rol(model, q, xi.matrix()); }

Mat tilde_rol(const RollingModel& model, const RollingState& q, const Mat& xi) {
  return q.A.transpose() * rol(model, q, xi);
}

Mat tilde_rol_matrix(const RollingModel& model, const RollingState& q) {
  const int n = model.n();
  const int m = bivector_dim(n);
  Mat out(m, m);
  int col = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.col(col++) = skew_to_coeffs(tilde_rol(model, q, Bivector::basis(n, i, j).matrix()));
  return out;
}

InvertibilityReport is_tilde_rol_invertible(const RollingModel& model, const RollingState& q, double tol) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  Eigen::JacobiSVD<Mat> svd(tilde_rol_matrix(model, q));
  InvertibilityReport r;
  r.singular_values = svd.singularValues();
  const double smax = r.singular_values(0);
  const double smin = r.singular_values(r.singular_values.size() - 1);
  r.invertible = smin > tol * std::max(smax, 1.0);
  r.condition_number = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace rollsym
