#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rollsym/curvature.hpp"
#include "rollsym/rolling_core.hpp"

namespace rollsym {

// Value of a structured field at q: horizontal part (T, T_hat) in frame
// coordinates and vertical part U with A^T U skew.
struct FieldSample {
  Vec T;
  Vec T_hat;
  Mat U;
};

TangentOfQ field_value(const RollingState& q, const FieldSample& s);

// X|_q = L_NS(T(q), T_hat(q)) + nu(U(q)).
struct StructuredField {
  std::function<FieldSample(const RollingState&)> eval;
  // Optional closed-form derivative of (T, T_hat, U) along V, with values
  // transported back to q. Stencils with `stencil` are used when empty.
  std::function<FieldSample(const RollingState&, const TangentOfQ&)> derivative;
  StencilOptions stencil{1e-3, 4};
};

// Derivative of the field components along V (analytic when available).
FieldSample field_derivative(const RollingModel& model, const StructuredField& F, const RollingState& q,
                             const TangentOfQ& V);

// Vector field on M given in frame coordinates.
using FrameField = std::function<Vec(const Vec& x)>;

// Constant frame coordinates c, i.e. the field sum_i c_i E_i.
FrameField constant_frame_field(const Vec& c);
// Parallel transport of X0 (frame coordinates at x0) along radial geodesics;
// its covariant derivative vanishes at x0. Constant-curvature kinds only.
FrameField normal_extension(const SpaceForm& M, const Vec& x0, const Vec& X0);
// nabla_X Y at x, all in frame coordinates.
Vec covariant_derivative(const SpaceForm& M, const FrameField& Y, const Vec& x, const Vec& X,
                         const StencilOptions& opts = {1e-3, 4});

// q -> L_R(Y(x))|_q, with closed-form derivative
//   d(T, T_hat, U)[V] = (nabla_X Y, A C Y + A nabla_X Y, 0).
StructuredField rolling_lift_field(const RollingModel& model, FrameField Y, StencilOptions inner = {1e-3, 4});

// Bracket from the structured formula:
//   [X, Y] = L_NS(X S - Y T) + nu(X V - Y U) + nu(A R(T^S) - R_hat(T_hat^S_hat) A).
TangentOfQ bracket_structured(const RollingModel& model, const StructuredField& X, const StructuredField& Y,
                              const RollingState& q);

// The bracket as a field, differentiated by stencils when nested.
StructuredField bracket_field(const RollingModel& model, StructuredField X, StructuredField Y,
                              StencilOptions nested = {1e-3, 4});

struct BracketFdOptions {
  double h_field = 1e-3;
  double h_coord = 1e-2;
};

// Coordinate bracket in the chart
//   (u, u_hat, w) -> (exp_x(E u), exp_x_hat(E_hat u_hat), T_hat A expm(w) T^T),
// whose differential at 0 is the identity in TangentOfQ coordinates.
// Constant-curvature pairs only.
TangentOfQ bracket_fd(const RollingModel& model, const StructuredField& X, const StructuredField& Y,
                      const RollingState& q, const BracketFdOptions& opts = {});

struct FlagOptions {
  double tol = 1e-8;
  // Optional rotation R: generators are L_R of the frame E R.
  Mat frame_rotation;
  StencilOptions nested{1e-3, 4};
};

struct FlagReport {
  RollingState point;
  std::vector<int> ranks;
  std::vector<Vec> singular_values;
  // sigma_r / sigma_{r+1} per step; infinity when nothing was rejected.
  std::vector<double> gaps;
  double tolerance = 0.0;
  int dim_q = 0;

  double min_gap() const;
};

// Ranks of D, D + [D, D], ... evaluated at q, generated by rolling lifts of
// the deterministic frame. depth must lie in [1, 6].
FlagReport flag_ranks(const RollingModel& model, const RollingState& q, int depth, const FlagOptions& opts = {});

// Growth vector prediction (n, n(n+1)/2, 2n + n(n-1)/2) for kappa != 0.
std::vector<int> predicted_growth(int n, bool kappa_zero);

// Lie-algebra rank condition at q.
bool controllability_verdict(const RollingModel& model, const RollingState& q, const FlagOptions& opts = {});

struct DoubleBracketReport {
  double residual = 0.0;
  // L_NS(W, 0)-representative of the double bracket modulo L_R and nu.
  Vec projected;
  // -kappa g(Z,X) Y + kappa g(Y,X) Z.
  Vec expected;
};

// [L_R(X), [L_R(Y), L_R(Z)]] modulo (L_R, nu) with X, Y, Z extended by
// normal_extension. Constant-curvature pairs only.
DoubleBracketReport double_bracket_identity_residual(const RollingModel& model, const RollingState& q, const Vec& X,
                                                     const Vec& Y, const Vec& Z);

}  // namespace rollsym
