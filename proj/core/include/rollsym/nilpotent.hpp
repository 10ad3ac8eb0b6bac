#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "rollsym/errors.hpp"
#include "rollsym/rolling_core.hpp"

namespace rollsym {

using Rational = boost::rational<std::int64_t>;
using BigRational = boost::multiprecision::cpp_rational;

// Element (a, B, c) of R^n + so(n) + R^n. B is stored as its strictly upper
// triangular coefficients in lexicographic order, so B + B^T = 0 exactly.
template <class Scalar>
struct GradedVector {
  int n = 0;
  std::vector<Scalar> a, b, c;

  static GradedVector zero(int n) {
    GradedVector v;
    v.n = n;
    v.a.assign(n, Scalar(0));
    v.b.assign(n * (n - 1) / 2, Scalar(0));
    v.c.assign(n, Scalar(0));
    return v;
  }
  // N_i = (e_i, 0, 0).
  static GradedVector N(int n, int i) {
    GradedVector v = zero(n);
    v.a.at(i) = Scalar(1);
    return v;
  }
  // (0, e_i ^ e_j, 0).
  static GradedVector D(int n, int i, int j) {
    GradedVector v = zero(n);
    if (i == j) return v;
    if (i < j)
      v.b.at(index(n, i, j)) = Scalar(1);
    else
      v.b.at(index(n, j, i)) = Scalar(-1);
    return v;
  }
  // Z_i = (0, 0, e_i).
  static GradedVector Z(int n, int i) {
    GradedVector v = zero(n);
    v.c.at(i) = Scalar(1);
    return v;
  }

  static int index(int n, int i, int j) { return i * n - i * (i + 1) / 2 + (j - i - 1); }

  Scalar B(int i, int j) const {
    if (i == j) return Scalar(0);
    return i < j ? b[index(n, i, j)] : Scalar(-b[index(n, j, i)]);
  }

  bool is_zero() const {
    for (const auto* layer : {&a, &b, &c})
      for (const Scalar& s : *layer)
        if (s != Scalar(0)) return false;
    return true;
  }

  // Highest layer with a nonzero entry (1, 2, 3), or 0 for the zero vector.
  int top_layer() const {
    auto nz = [](const std::vector<Scalar>& v) {
      for (const Scalar& s : v)
        if (s != Scalar(0)) return true;
      return false;
    };
    return nz(c) ? 3 : nz(b) ? 2 : nz(a) ? 1 : 0;
  }
  int bottom_layer() const {
    auto nz = [](const std::vector<Scalar>& v) {
      for (const Scalar& s : v)
        if (s != Scalar(0)) return true;
      return false;
    };
    return nz(a) ? 1 : nz(b) ? 2 : nz(c) ? 3 : 0;
  }

  friend bool operator==(const GradedVector& u, const GradedVector& v) {
    return u.n == v.n && u.a == v.a && u.b == v.b && u.c == v.c;
  }
  friend GradedVector operator+(GradedVector u, const GradedVector& v) {
    check_same(u, v);
    for (size_t k = 0; k < u.a.size(); ++k) u.a[k] += v.a[k];
    for (size_t k = 0; k < u.b.size(); ++k) u.b[k] += v.b[k];
    for (size_t k = 0; k < u.c.size(); ++k) u.c[k] += v.c[k];
    return u;
  }
  friend GradedVector operator-(GradedVector u, const GradedVector& v) {
    check_same(u, v);
    for (size_t k = 0; k < u.a.size(); ++k) u.a[k] -= v.a[k];
    for (size_t k = 0; k < u.b.size(); ++k) u.b[k] -= v.b[k];
    for (size_t k = 0; k < u.c.size(); ++k) u.c[k] -= v.c[k];
    return u;
  }
  friend GradedVector operator*(const Scalar& s, GradedVector u) {
    for (auto& x : u.a) x *= s;
    for (auto& x : u.b) x *= s;
    for (auto& x : u.c) x *= s;
    return u;
  }

  static void check_same(const GradedVector& u, const GradedVector& v) {
    if (u.n != v.n) throw MismatchError("graded vectors of different dimension");
  }
};

// [(a,B,c), (a',B',c')] = (0, a a'^T - a' a^T, B a' - B' a).
template <class Scalar>
GradedVector<Scalar> nil_bracket(const GradedVector<Scalar>& u, const GradedVector<Scalar>& v) {
  GradedVector<Scalar>::check_same(u, v);
  const int n = u.n;
  GradedVector<Scalar> w = GradedVector<Scalar>::zero(n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w.b[k++] = u.a[i] * v.a[j] - v.a[i] * u.a[j];
  for (int r = 0; r < n; ++r) {
    Scalar s(0);
    for (int t = 0; t < n; ++t) {
      if (t == r) continue;
      s += u.B(r, t) * v.a[t] - v.B(r, t) * u.a[t];
    }
    w.c[r] = s;
  }
  return w;
}

// (n, n(n-1)/2, n).
std::array<int, 3> graded_dims(int n);
std::array<int, 3> cumulative_dims(int n);

// Basis N_1..N_n, (e_i ^ e_j)_{i<j}, Z_1..Z_n.
template <class Scalar>
std::vector<GradedVector<Scalar>> graded_basis(int n) {
  std::vector<GradedVector<Scalar>> out;
  for (int i = 0; i < n; ++i) out.push_back(GradedVector<Scalar>::N(n, i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back(GradedVector<Scalar>::D(n, i, j));
  for (int i = 0; i < n; ++i) out.push_back(GradedVector<Scalar>::Z(n, i));
  return out;
}

struct StructureReport {
  int n = 0;
  std::array<int, 3> dims{};
  bool dims_ok = false;
  long identity_checks = 0, identity_failures = 0;
  long antisymmetry_checks = 0, antisymmetry_failures = 0;
  long grading_checks = 0, grading_failures = 0;
  long jacobi_checks = 0, jacobi_failures = 0;
  long nilpotency_checks = 0, nilpotency_failures = 0;
  // Some triple bracket is nonzero, so the step is exactly three.
  bool step_three = false;

  bool passed() const {
    return dims_ok && identity_failures == 0 && antisymmetry_failures == 0 && grading_failures == 0 &&
           jacobi_failures == 0 && nilpotency_failures == 0 && step_three;
  }
};

// Exhaustive exact checks on the basis:
//   [N_i, [N_j, N_k]] = -d_ik Z_j + d_ij Z_k, antisymmetry, grading, Jacobi,
//   vanishing of all 4-fold brackets, and the layer dimensions.
template <class Scalar>
StructureReport verify_structure(int n) {
  if (n < 2) throw InputError("nilpotent structure needs n >= 2");
  using G = GradedVector<Scalar>;
  StructureReport r;
  r.n = n;
  r.dims = graded_dims(n);
  const auto basis = graded_basis<Scalar>(n);
  const int D = static_cast<int>(basis.size());
  int counts[4] = {0, 0, 0, 0};
  for (const G& e : basis) counts[e.top_layer()]++;
  r.dims_ok = counts[1] == r.dims[0] && counts[2] == r.dims[1] && counts[3] == r.dims[2] &&
              D == r.dims[0] + r.dims[1] + r.dims[2];

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const G lhs = nil_bracket(G::N(n, i), nil_bracket(G::N(n, j), G::N(n, k)));
        G rhs = G::zero(n);
        if (i == k) rhs = rhs - G::Z(n, j);
        if (i == j) rhs = rhs + G::Z(n, k);
        ++r.identity_checks;
        if (!(lhs == rhs)) ++r.identity_failures;
      }

  std::vector<std::vector<G>> L2(D, std::vector<G>(D));
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y) L2[x][y] = nil_bracket(basis[x], basis[y]);

  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y) {
      ++r.antisymmetry_checks;
      if (!(L2[x][y] + L2[y][x]).is_zero()) ++r.antisymmetry_failures;
      ++r.grading_checks;
      const int target = basis[x].top_layer() + basis[y].top_layer();
      const G& br = L2[x][y];
      const bool ok = br.is_zero() || (target <= 3 && br.top_layer() == target && br.bottom_layer() == target);
      if (!ok) ++r.grading_failures;
    }

  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y)
      for (int z = 0; z < D; ++z) {
        const G j = nil_bracket(basis[x], L2[y][z]) + nil_bracket(basis[y], L2[z][x]) + nil_bracket(basis[z], L2[x][y]);
        ++r.jacobi_checks;
        if (!j.is_zero()) ++r.jacobi_failures;
      }

  for (int y = 0; y < D; ++y)
    for (int z = 0; z < D; ++z)
      for (int x = 0; x < D; ++x) {
        const G l3 = nil_bracket(basis[x], L2[y][z]);
        if (!l3.is_zero()) r.step_three = true;
        for (int w = 0; w < D; ++w) {
          ++r.nilpotency_checks;
          if (l3.is_zero()) continue;
          if (!nil_bracket(basis[w], l3).is_zero()) ++r.nilpotency_failures;
        }
      }
  return r;
}

enum class FlatnessVerdict { not_flat, inconclusive };
std::string verdict_name(FlatnessVerdict v);

template <class Scalar>
struct ObstructionReport {
  Scalar K, K_hat, kappa, beta;
  Scalar obstruction_M, obstruction_M_hat;
  int n = 0;
  FlatnessVerdict verdict = FlatnessVerdict::inconclusive;
};

// kappa = -K + K_hat must be nonzero and beta positive. obstruction_M =
// (beta K / kappa)^2 and obstruction_M_hat = (beta K_hat / kappa)^2; the
// verdict is not_flat when n >= 3 and either is nonzero, inconclusive for n = 2.
template <class Scalar>
ObstructionReport<Scalar> flatness_obstruction(const Scalar& K, const Scalar& K_hat, const Scalar& beta, int n) {
  if (n < 2) throw InputError("flatness obstruction needs n >= 2");
  ObstructionReport<Scalar> r;
  r.K = K;
  r.K_hat = K_hat;
  r.beta = beta;
  r.n = n;
  r.kappa = K_hat - K;
  if (r.kappa == Scalar(0)) throw InputError("kappa = 0: K and K_hat must differ");
  if (!(beta > Scalar(0))) throw InputError("beta must be positive");
  const Scalar m = beta * K / r.kappa;
  const Scalar mh = beta * K_hat / r.kappa;
  r.obstruction_M = m * m;
  r.obstruction_M_hat = mh * mh;
  if (n >= 3 && (r.obstruction_M > Scalar(0) || r.obstruction_M_hat > Scalar(0)))
    r.verdict = FlatnessVerdict::not_flat;
  return r;
}

// Parses "p", "p/q" or a terminating decimal such as "0.25" exactly.
BigRational parse_rational(const std::string& text);
std::string rational_to_string(const BigRational& r);
double rational_to_double(const BigRational& r);

enum class WMode { frame, pulled_back };

struct VerticalActionReport {
  // max |L_R(W_i) L_R(W_j) W_k - L_R(W_j) L_R(W_i) W_k
  //      - L_R(L_R(W_i) W_j - L_R(W_j) W_i) W_k
  //      + kappa nu(A(W_i ^ W_j)) W_k - K (W_i ^ W_j) W_k|
  double commutator_residual = 0.0;
  // max |kappa nu(A(W_i ^ W_j)) W_k - K (W_i ^ W_j) W_k|; vanishes only for
  // frames with L_R(W_i) W_j = 0.
  double lemma_defect = 0.0;
};

// W_i = sqrt(beta) E_i (frame mode, independent of A) or
// W_i = sqrt(beta) A^T E_hat_i (pulled_back mode). Constant-curvature pairs
// with kappa != 0 only.
VerticalActionReport vertical_action_consistency(const RollingModel& model, const RollingState& q, double beta,
                                                 WMode mode = WMode::frame);

}  // namespace rollsym
