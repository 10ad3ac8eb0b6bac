#pragma once

#include <vector>

#include "rollsym/space_form.hpp"

namespace rollsym {

// A driving curve on a manifold, parametrized on [0, duration()].
class Path {
 public:
  virtual ~Path() = default;
  virtual double duration() const = 0;
  virtual Vec point(double t) const = 0;
  virtual Vec velocity(double t) const = 0;
  virtual const SpaceForm& manifold() const = 0;
};

// Geodesic with initial point and velocity. Warped kinds are integrated once
// with RK4 and read back through cubic Hermite interpolation.
class GeodesicPath : public Path {
 public:
  GeodesicPath(SpaceForm M, Vec x, Vec v, double duration, double step = 1e-3);
  // Unit-speed geodesic of the given length in the given direction.
  static GeodesicPath from_direction(const SpaceForm& M, const Vec& x, const Vec& direction, double length,
                                     double step = 1e-3);

  double duration() const override { return duration_; }
  Vec point(double t) const override;
  Vec velocity(double t) const override;
  const SpaceForm& manifold() const override { return M_; }

  const Vec& start() const { return x_; }
  const Vec& initial_velocity() const { return v_; }

 private:
  SpaceForm M_;
  Vec x_, v_;
  double duration_;
  double step_;
  std::vector<Vec> pts_, vels_;
};

// Path through dense samples. Velocities at the samples come from three-point
// finite differences; positions between samples are cubic Hermite, retracted
// back onto the manifold.
class SampledPath : public Path {
 public:
  SampledPath(SpaceForm M, std::vector<double> times, std::vector<Vec> points);

  double duration() const override { return times_.back() - times_.front(); }
  Vec point(double t) const override;
  Vec velocity(double t) const override;
  const SpaceForm& manifold() const override { return M_; }

 private:
  int segment(double t) const;
  SpaceForm M_;
  std::vector<double> times_;
  std::vector<Vec> pts_, vels_;
};

}  // namespace rollsym
