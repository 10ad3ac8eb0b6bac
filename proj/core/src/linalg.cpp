#include "rollsym/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

#include "rollsym/errors.hpp"

namespace rollsym {

Vec skew_to_coeffs(const Mat& S) {
  const int n = static_cast<int>(S.rows());
  Vec c(bivector_dim(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c(k++) = S(i, j);
  return c;
}

Mat coeffs_to_skew(const Vec& c, int n) {
  if (c.size() != bivector_dim(n)) throw InputError("bivector coefficient count does not match dimension");
  Mat S = Mat::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      S(i, j) = c(k);
      S(j, i) = -c(k);
      ++k;
    }
  return S;
}

Mat wedge_matrix(const Vec& X, const Vec& Y) { return X * Y.transpose() - Y * X.transpose(); }

Mat skew_part(const Mat& M) { return 0.5 * (M - M.transpose()); }

double skew_defect(const Mat& M) { return (M + M.transpose()).norm(); }

double orthogonality_defect(const Mat& A) {
  return (A.transpose() * A - Mat::Identity(A.cols(), A.cols())).norm();
}

Mat expm_skew(const Mat& C) { return C.exp(); }

Mat logm_rotation(const Mat& R) {
  Mat L = R.log();
  return skew_part(L);
}

Vec gaussian_vector(int n, Rng& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = N(rng);
  return v;
}

Mat random_rotation(int n, Rng& rng) {
  Mat G(n, n);
  for (int j = 0; j < n; ++j) G.col(j) = gaussian_vector(n, rng);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ() * Mat::Identity(n, n);
  Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  if (Q.determinant() < 0) Q.col(n - 1) = -Q.col(n - 1);
  return Q;
}

Mat random_skew(int n, Rng& rng) { return coeffs_to_skew(gaussian_vector(bivector_dim(n), rng), n); }

RankReport numerical_rank(const Mat& V, double tol) {
  RankReport r;
  r.tolerance = tol;
  if (V.size() == 0) {
    r.singular_values = Vec(0);
    r.gap = std::numeric_limits<double>::infinity();
    return r;
  }
  Eigen::JacobiSVD<Mat> svd(V);
  r.singular_values = svd.singularValues();
  const Vec& s = r.singular_values;
  const double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) {
    r.gap = std::numeric_limits<double>::infinity();
    return r;
  }
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * smax) ++r.rank;
  if (r.rank >= s.size() || s(r.rank) == 0.0)
    r.gap = std::numeric_limits<double>::infinity();
  else
    r.gap = s(r.rank - 1) / s(r.rank);
  return r;
}

}  // namespace rollsym
