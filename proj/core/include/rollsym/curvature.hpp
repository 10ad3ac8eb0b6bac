#pragma once

#include "rollsym/rolling_core.hpp"

namespace rollsym {

// Element of Lambda^2 T_x M in frame coordinates, stored as the strictly upper
// triangular coefficients in lexicographic (i<j) order.
class Bivector {
 public:
  explicit Bivector(int n);
  static Bivector from_matrix(const Mat& S, double tol = 1e-12);
  static Bivector wedge(const Vec& X, const Vec& Y);
  static Bivector basis(int n, int i, int j);

  int dim() const { return n_; }
  const Vec& coeffs() const { return c_; }
  Mat matrix() const { return coeffs_to_skew(c_, n_); }

 private:
  int n_;
  Vec c_;
};

// (X^Y)Z = g(Z,Y)X - g(Z,X)Y for ambient tangent vectors at x.
Vec wedge_action(const SpaceForm& M, const Vec& x, const Vec& X, const Vec& Y, const Vec& Z);

// Rol_q(xi) = A R(xi) - R_hat(A xi A^T) A, as a matrix from frame
// coordinates at x to frame coordinates at x_hat.
Mat rol(const RollingModel& model, const RollingState& q, const Bivector& xi);
Mat rol(const RollingModel& model, const RollingState& q, const Mat& xi);

// A^T Rol_q(xi), an element of so(n).
Mat tilde_rol(const RollingModel& model, const RollingState& q, const Mat& xi);

// Matrix of tilde Rol_q on the lexicographic bivector basis.
Mat tilde_rol_matrix(const RollingModel& model, const RollingState& q);

struct InvertibilityReport {
  bool invertible = false;
  double condition_number = 0.0;
  Vec singular_values;
};

// Invertible iff sigma_min > tol * max(sigma_max, 1).
InvertibilityReport is_tilde_rol_invertible(const RollingModel& model, const RollingState& q, double tol = 1e-8);

}  // namespace rollsym
