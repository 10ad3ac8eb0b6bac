#pragma once

#include <cmath>
#include <vector>

#include "rollsym/space_form.hpp"

namespace testsupport {

using rollsym::Interval;
using rollsym::Mat;
using rollsym::SpaceForm;
using rollsym::Vec;
using rollsym::WarpFunction;

inline WarpFunction warp(WarpFunction::Family fam, double rate = 1.0) {
  WarpFunction w;
  w.family = fam;
  w.rate = rate;
  return w;
}

// cos-warped product over S^{n-1}(1); a chart of S^n(1).
inline SpaceForm warped_cos_sphere(int n) {
  return SpaceForm::warped({-1.4, 1.4}, warp(WarpFunction::Family::cos), SpaceForm::sphere(n - 1, 1.0));
}

inline SpaceForm warped_cosh_flat(int n) {
  return SpaceForm::warped({-1.5, 1.5}, warp(WarpFunction::Family::cosh), SpaceForm::euclidean(n - 1));
}

inline std::vector<SpaceForm> catalog(int n) {
  std::vector<SpaceForm> out{SpaceForm::euclidean(n), SpaceForm::sphere(n, 1.0), SpaceForm::sphere(n, 2.5),
                             SpaceForm::hyperbolic(n, 1.0), SpaceForm::hyperbolic(n, 0.7)};
  out.push_back(warped_cos_sphere(n));
  out.push_back(warped_cosh_flat(n));
  if (n >= 3)
    out.push_back(SpaceForm::warped({-1.0, 1.0}, warp(WarpFunction::Family::exp, 0.5), SpaceForm::hyperbolic(n - 1, 1.0)));
  return out;
}

inline std::vector<SpaceForm> constant_catalog(int n) {
  std::vector<SpaceForm> out;
  for (const SpaceForm& M : catalog(n))
    if (M.constant_curvature()) out.push_back(M);
  return out;
}

// Minkowski or Euclidean ambient inner product of a constant-curvature kind.
inline double ambient_dot(const SpaceForm& M, const Vec& u, const Vec& v) {
  double s = u.dot(v);
  if (M.kind() == rollsym::Kind::hyperbolic) s -= 2.0 * u(u.size() - 1) * v(v.size() - 1);
  return s;
}

// Geodesic by RK4 on the second-order ambient equation x'' = -eps <x',x'> x / r^2,
// eps = +1 on spheres and -1 on hyperboloids. Independent of the closed forms.
inline Vec geodesic_oracle(const SpaceForm& M, Vec x, Vec v, double t, int steps = 20000) {
  const double r2 = M.radius() * M.radius();
  const double eps = M.kind() == rollsym::Kind::sphere ? 1.0 : M.kind() == rollsym::Kind::hyperbolic ? -1.0 : 0.0;
  auto acc = [&](const Vec& p, const Vec& w) -> Vec { return -eps * ambient_dot(M, w, w) / r2 * p; };
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const Vec k1x = v, k1v = acc(x, v);
    const Vec k2x = v + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
    const Vec k3x = v + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
    const Vec k4x = v + h * k3v, k4v = acc(x + h * k3x, v + h * k3v);
    x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return x;
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace testsupport
