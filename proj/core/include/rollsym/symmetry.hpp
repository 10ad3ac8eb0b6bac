#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rollsym/curvature.hpp"
#include "rollsym/rolling_core.hpp"

namespace rollsym {

enum class CandidateKind { general, sym0, inner, killing_induced };

std::string candidate_kind_name(CandidateKind k);

// S|_q = L_NS(Z(q), Z_hat(q)) + nu(U(q)). Z and Z_hat return frame
// coordinates at x and x_hat; A^T U(q) must be skew.
struct SymmetryCandidate {
  CandidateKind kind = CandidateKind::general;
  std::function<Vec(const RollingState&)> Z;
  std::function<Vec(const RollingState&)> Z_hat;
  std::function<Mat(const RollingState&)> U;
  std::string label;
};

SymmetryCandidate zero_candidate(int n);

enum class KillingType { translation, rotation, boost, hopf };

std::string killing_type_name(KillingType t);

struct KillingGenerator {
  KillingType type = KillingType::rotation;
  // Translation: direction i. Rotation: plane (i, j). Boost: spatial axis i.
  int i = 0;
  int j = 1;
};

// Killing field x -> J x + b of a space form in ambient coordinates.
class KillingField {
 public:
  KillingField(SpaceForm M, KillingGenerator gen);

  const SpaceForm& manifold() const { return M_; }
  const KillingGenerator& generator() const { return gen_; }
  std::string label() const;

  Vec value(const Vec& x) const;
  Vec value_frame(const Vec& x) const;
  // nabla K in frame coordinates, (nabla K)_ab = <E_a, nabla_{E_b} K>.
  Mat derivative_frame(const Vec& x) const;

 private:
  SpaceForm M_;
  KillingGenerator gen_;
  Mat J_;
  Vec b_;
};

// Translations then rotations (euclidean), rotations (sphere), rotations then
// boosts (hyperbolic): n(n+1)/2 fields. Warped kinds are rejected.
std::vector<KillingField> killing_catalog(const SpaceForm& M_hat);

// Skew defect of nabla K at x.
double killing_skew_defect(const KillingField& K, const Vec& x);
// |nabla_X (nabla K) - R(X ^ K)| at x, X in frame coordinates.
double killing_ode_residual(const KillingField& K, const Vec& x, const Vec& X, const StencilOptions& opts = {1e-4, 4});

// Z = 0, Z_hat(q) = K(x_hat), U(q) = nabla K|_x_hat A.
SymmetryCandidate killing_to_symmetry(const RollingModel& model, const KillingField& K);

// Adds A E to U for a fixed skew E.
SymmetryCandidate perturb_candidate(const SymmetryCandidate& S, const Mat& E);

struct ResidualPair {
  double eq1 = 0.0;
  double eq2 = 0.0;
  double max() const { return eq1 > eq2 ? eq1 : eq2; }
};

// eq1: U X = -A L_R(X) Z + L_R(X) Z_hat
// eq2: L_R(X) U = -A R(X ^ Z) + R_hat(A X ^ Z_hat) A
ResidualPair symmetry_residual(const RollingModel& model, const SymmetryCandidate& S, const RollingState& q,
                               const Vec& X, const StencilOptions& opts = {});

// The same with Z = 0; requires kind sym0.
ResidualPair sym0_residual(const RollingModel& model, const SymmetryCandidate& S, const RollingState& q,
                           const Vec& X, const StencilOptions& opts = {});

// max_i |Rol_q(E_i ^ Z(q))|.
double inner_symmetry_residual(const RollingModel& model, const std::function<Vec(const RollingState&)>& Z,
                               const RollingState& q);

// |A nu(Rol_q(X^Y)) Z - nu(Rol_q(X^Y)) Z_hat|.
double vertz_residual(const RollingModel& model, const SymmetryCandidate& S, const RollingState& q, const Vec& X,
                      const Vec& Y, const StencilOptions& opts = {1e-5, 2});

struct Sym0Sample {
  double t = 0.0;
  RollingState q;
  Vec Z_hat;
  Mat U;
};

// Propagates (Z_hat, U) along the rolling curve over the geodesic from x of
// q1 with velocity X: Z_hat is the Jacobi field with Z_hat(0) = Z_hat_0 and
// initial derivative U_0 X (RK4 on the grid), U follows the transported
// integral formula (cumulative Simpson on the grid). t_grid must be uniform
// and start at 0.
std::vector<Sym0Sample> propagate_sym0(const RollingModel& model, const RollingState& q1, const Vec& X,
                                       const Vec& Z_hat_0, const Mat& U_0, const std::vector<double>& t_grid);

std::vector<double> uniform_grid(double length, int intervals);

// Rank of the evaluation data (Z_hat(q0), A0^T U(q0)) in R^n x so(n).
RankReport sym0_dimension_probe(const RollingModel& model, const RollingState& q0,
                                const std::vector<SymmetryCandidate>& candidates, double tol = 1e-8);

}  // namespace rollsym
