#pragma once

#include <functional>
#include <vector>

#include "rollsym/path.hpp"
#include "rollsym/space_form.hpp"

namespace rollsym {

// A pair of equal-dimensional manifolds rolling on each other.
struct RollingModel {
  RollingModel(SpaceForm M_, SpaceForm M_hat_);

  SpaceForm M;
  SpaceForm M_hat;

  int n() const { return M.dim(); }
  // Dimension of Q: 2n + n(n-1)/2.
  int dim_q() const { return 2 * n() + bivector_dim(n()); }
  bool constant_curvature() const { return M.constant_curvature() && M_hat.constant_curvature(); }
  // kappa = -K + K_hat for constant-curvature pairs.
  double kappa() const;
};

// q = (x, x_hat; A). A maps frame coordinates at x to frame coordinates at
// x_hat, both in the deterministic frames of the two manifolds.
struct RollingState {
  Vec x;
  Vec x_hat;
  Mat A;
};

// Tangent of Q written as L_NS(X, X_hat) + nu(A C). X and X_hat are frame
// coordinates at x and x_hat; C is skew.
struct TangentOfQ {
  Vec X;
  Vec X_hat;
  Mat C;

  static TangentOfQ zero(int n);
  // Flattened coordinates (X, X_hat, upper coefficients of C).
  Vec to_vector() const;
  static TangentOfQ from_vector(const Vec& v, int n);
};

TangentOfQ operator+(const TangentOfQ& a, const TangentOfQ& b);
TangentOfQ operator-(const TangentOfQ& a, const TangentOfQ& b);
TangentOfQ operator*(double s, const TangentOfQ& a);

// Validates a state; throws DomainError/InputError.
void check_state(const RollingModel& model, const RollingState& q, double tol = 1e-9);
RollingState make_state(const RollingModel& model, const Vec& x, const Vec& x_hat, const Mat& A);
// Random state with both frame qualities at least min_quality.
RollingState sample_state(const RollingModel& model, Rng& rng, double min_quality = 0.2);

// L_R(X)|_q = (X, A X, 0) for X in frame coordinates at x.
TangentOfQ rolling_lift(const RollingState& q, const Vec& X);

// Curve through q with velocity V: geodesics in each factor, A carried by
// parallel transport and turned by expm(t C).
RollingState flow_no_spin(const RollingModel& model, const RollingState& q, const TangentOfQ& V, double t);

// flow_no_spin together with the frame-coordinate transport matrices of the
// two base geodesics.
struct NoSpinFlow {
  RollingState q;
  Mat T, T_hat;
};
NoSpinFlow flow_no_spin_transport(const RollingModel& model, const RollingState& q, const TangentOfQ& V, double t);

struct RollOptions {
  double step = 1e-3;
  // Re-orthonormalize the transported frames after each step.
  bool project = false;
};

struct RollingCurve {
  std::vector<double> times;
  std::vector<RollingState> states;
  std::vector<Vec> base_curve;
  std::vector<double> isometry_residual;

  double max_isometry_residual() const;
  double min_det() const;
};

// Integrates q' = L_R(gamma')|_q along gamma with RK4, co-transporting
// parallel frames on both manifolds.
RollingCurve roll_along(const RollingModel& model, const RollingState& q0, const Path& gamma,
                        const RollOptions& opts = {});

// Velocity of a sampled rolling curve at sample i, decomposed as TangentOfQ
// (central differences).
TangentOfQ decompose_velocity(const RollingModel& model, const RollingCurve& curve, int i);

// Tensor-valued maps on Q. Values are frame-coordinate matrices (vectors as
// single columns).
enum class ValueKind { scalar, vec_m, vec_mhat, map_m_mhat, end_m, end_mhat };

struct BundleMap {
  ValueKind kind = ValueKind::scalar;
  std::function<Mat(const RollingState&)> eval;
};

struct StencilOptions {
  double h = 1e-4;
  int order = 2;
};

// Derivative of F along the no-spin curve with velocity V, with values
// parallel-transported back to (x, x_hat) before differencing.
Mat directional_derivative(const RollingModel& model, const BundleMap& F, const RollingState& q,
                           const TangentOfQ& V, const StencilOptions& opts = {});

// L_R(X)|_q F.
Mat lr_derivative(const RollingModel& model, const BundleMap& F, const RollingState& q, const Vec& X,
                  const StencilOptions& opts = {});

// nu(A C)|_q F, differentiating along A expm(t C).
Mat vertical_derivative(const RollingModel& model, const BundleMap& F, const RollingState& q, const Mat& C,
                        const StencilOptions& opts = {1e-5, 2});

}  // namespace rollsym
