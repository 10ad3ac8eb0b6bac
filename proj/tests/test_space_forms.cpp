#include <doctest.h>

#include <numbers>

#include "rollsym/curvature.hpp"
#include "rollsym/errors.hpp"
#include "rollsym/path.hpp"
#include "support.hpp"

using namespace rollsym;
using namespace testsupport;

namespace {

Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

// Circle of constant polar angle theta on S^2(1), traversed once with unit
// angular speed in the azimuth.
class LatitudeCircle : public Path {
 public:
  explicit LatitudeCircle(double theta) : M_(SpaceForm::sphere(2, 1.0)), th_(theta) {}
  double duration() const override { return 2.0 * std::numbers::pi; }
  Vec point(double t) const override {
    return v3(std::sin(th_) * std::cos(t), std::sin(th_) * std::sin(t), std::cos(th_));
  }
  Vec velocity(double t) const override { return v3(-std::sin(th_) * std::sin(t), std::sin(th_) * std::cos(t), 0.0); }
  const SpaceForm& manifold() const override { return M_; }

 private:
  SpaceForm M_;
  double th_;
};

// Orthonormal pair at x from two random tangent vectors.
std::pair<Vec, Vec> orthonormal_pair(const SpaceForm& M, const Vec& x, Rng& rng) {
  Vec X = M.random_tangent(x, rng);
  X /= M.norm(x, X);
  Vec Y = M.random_tangent(x, rng);
  Y -= M.inner(x, X, Y) * X;
  Y /= M.norm(x, Y);
  return {X, Y};
}

}  // namespace

TEST_SUITE("space_forms") {
  TEST_CASE("metric examples") {
    const SpaceForm R2 = SpaceForm::euclidean(2);
    const Point o{Vec::Zero(2)};
    CHECK(metric(R2, o, {o, Vec::Unit(2, 0)}, {o, Vec::Unit(2, 1)}) == 0.0);

    const SpaceForm S2 = SpaceForm::sphere(2, 1.0);
    const Point north{v3(0, 0, 1)};
    CHECK(metric(S2, north, {north, v3(1, 0, 0)}, {north, v3(1, 0, 0)}) == doctest::Approx(1.0));

    // cosh warp at s = 0 over the unit circle: f(0)^2 h(u, u) = 1.
    const SpaceForm W = SpaceForm::warped({-1, 1}, warp(WarpFunction::Family::cosh), SpaceForm::sphere(1, 1.0));
    const Point p{v3(0.0, 1.0, 0.0)};
    const Vec u = v3(0.0, 0.0, 1.0);
    CHECK(metric(W, p, {p, u}, {p, u}) == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("metric rejects foreign base points and non-tangent vectors") {
    const SpaceForm S2 = SpaceForm::sphere(2, 1.0);
    const Point north{v3(0, 0, 1)}, east{v3(1, 0, 0)};
    CHECK_THROWS_AS(metric(S2, north, {east, v3(0, 1, 0)}, {north, v3(1, 0, 0)}), MismatchError);
    CHECK_THROWS_AS(metric(S2, north, {north, v3(0, 0, 1)}, {north, v3(1, 0, 0)}), InputError);
    CHECK_THROWS(metric(S2, Point{v3(0, 0, 2)}, {Point{v3(0, 0, 2)}, v3(1, 0, 0)}, {Point{v3(0, 0, 2)}, v3(1, 0, 0)}));
  }

  TEST_CASE("construction validates parameters") {
    CHECK_THROWS_AS(SpaceForm::sphere(2, 0.0), InputError);
    CHECK_THROWS_AS(SpaceForm::hyperbolic(2, -1.0), InputError);
    CHECK_THROWS_AS(SpaceForm::euclidean(0), InputError);
    // cos vanishes at pi/2, so f > 0 fails on this interval.
    CHECK_THROWS_AS(SpaceForm::warped({-2.0, 2.0}, warp(WarpFunction::Family::cos), SpaceForm::sphere(1, 1.0)),
                    InputError);
    CHECK_THROWS_AS(SpaceForm::warped({1.0, -1.0}, warp(WarpFunction::Family::cosh), SpaceForm::euclidean(1)),
                    InputError);
    CHECK_THROWS_AS(SpaceForm::warped({-1.0, 1.0}, warp(WarpFunction::Family::cosh), SpaceForm::euclidean(1)).curvature(),
                    DomainError);
  }

  TEST_CASE("warp families solve their reference equation") {
    for (auto fam : {WarpFunction::Family::cos, WarpFunction::Family::cosh, WarpFunction::Family::exp,
                     WarpFunction::Family::affine}) {
      WarpFunction w = warp(fam, 0.8);
      w.amplitude = 1.3;
      w.phase = 0.1;
      w.slope = 0.4;
      w.intercept = 2.0;
      for (double s = -1.0; s <= 1.0; s += 0.05) {
        CHECK(std::abs(w.d2(s) + w.k_ref() * w.value(s)) < 1e-12);
        const double h = 1e-5;
        CHECK(std::abs((w.value(s + h) - w.value(s - h)) / (2 * h) - w.d1(s)) < 1e-8);
      }
    }
  }

  TEST_CASE("frames are orthonormal, deterministic and positively oriented") {
    Rng rng(11);
    for (int n : {2, 3, 4})
      for (const SpaceForm& M : catalog(n))
        for (int k = 0; k < 10; ++k) {
          const Vec x = M.sample_point(rng);
          const Mat E = M.frame(x);
          Mat G(n, n);
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) G(a, b) = M.inner(x, E.col(a), E.col(b));
          CHECK(max_abs(G - Mat::Identity(n, n)) < 1e-12);
          CHECK(max_abs(M.frame(x) - E) == 0.0);
          for (int a = 0; a < n; ++a) CHECK(M.tangency_residual(x, E.col(a)) < 1e-12);
          if (M.kind() == Kind::sphere || M.kind() == Kind::hyperbolic) {
            Mat ext(n + 1, n + 1);
            ext << E, x;
            CHECK(ext.determinant() > 0.0);
          }
        }
  }

  TEST_CASE("frames stay orthonormal far out on the hyperboloid") {
    const SpaceForm H = SpaceForm::hyperbolic(3, 1.0);
    for (double s : {10.0, 100.0, 1000.0}) {
      Vec x(4);
      x << 0.6 * s, -0.48 * s, 0.64 * s, 0.0;
      x(3) = std::sqrt(1.0 + x.head(3).squaredNorm());
      const Mat E = H.frame(x);
      double worst = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) worst = std::max(worst, std::abs(H.inner(x, E.col(a), E.col(b)) - (a == b)));
      CHECK(worst < 1e-9);
    }
  }

  TEST_CASE("curvature examples") {
    Rng rng(3);
    const SpaceForm S3 = SpaceForm::sphere(3, 1.0);
    const Vec x = S3.sample_point(rng);
    const Vec X = Vec::Unit(3, 0), Y = Vec::Unit(3, 1);
    CHECK(max_abs(S3.curvature_frame(x, wedge_matrix(X, Y)) - wedge_matrix(X, Y)) < 1e-14);

    const SpaceForm R3 = SpaceForm::euclidean(3);
    CHECK(max_abs(R3.curvature_frame(Vec::Zero(3), wedge_matrix(X, Y))) == 0.0);

    // cosh warp: R(Y ^ d_r) d_r = -(f''/f) Y = -Y at s = 0.
    const SpaceForm W = warped_cosh_flat(2);
    const Vec p = (Vec(2) << 0.0, 0.3).finished();
    const Vec dr = (Vec(2) << 1.0, 0.0).finished();
    const Vec Yf = (Vec(2) << 0.0, 1.0).finished();
    CHECK((W.curvature_apply(p, Yf, dr, dr) + Yf).norm() < 1e-14);
  }

  TEST_CASE("sectional curvature of the catalog") {
    Rng rng(5);
    const SpaceForm R2 = SpaceForm::euclidean(2);
    CHECK(R2.sectional_curvature(Vec::Zero(2), Vec::Unit(2, 0), Vec::Unit(2, 1)) == 0.0);
    for (double r : {0.5, 1.0, 3.0}) {
      const SpaceForm S = SpaceForm::sphere(3, r), H = SpaceForm::hyperbolic(3, r);
      for (int k = 0; k < 5; ++k) {
        Vec x = S.sample_point(rng);
        auto [X, Y] = orthonormal_pair(S, x, rng);
        CHECK(S.sectional_curvature(x, X, Y) == doctest::Approx(1.0 / (r * r)).epsilon(1e-12));
        x = H.sample_point(rng);
        std::tie(X, Y) = orthonormal_pair(H, x, rng);
        CHECK(H.sectional_curvature(x, X, Y) == doctest::Approx(-1.0 / (r * r)).epsilon(1e-12));
      }
    }
    const SpaceForm W = warped_cosh_flat(3);
    for (double s : {-1.2, -0.3, 0.0, 0.9}) {
      const Vec p = (Vec(3) << s, 0.2, -0.4).finished();
      const Vec dr = Vec::Unit(3, 0);
      const Vec y = Vec::Unit(3, 1) / std::cosh(s);
      CHECK(W.sectional_curvature(p, dr, y) == doctest::Approx(-1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("curvature operator agrees with sectional curvature") {
    Rng rng(7);
    for (int n : {2, 3, 4})
      for (const SpaceForm& M : catalog(n))
        for (int k = 0; k < 10; ++k) {
          const Vec x = M.sample_point(rng);
          auto [X, Y] = orthonormal_pair(M, x, rng);
          const double via_op = M.inner(x, M.curvature_apply(x, X, Y, Y), X);
          CHECK(std::abs(via_op - M.sectional_curvature(x, X, Y)) < 1e-9);
        }
  }

  TEST_CASE("first Bianchi identity") {
    Rng rng(8);
    for (int n : {3, 4})
      for (const SpaceForm& M : catalog(n))
        for (int k = 0; k < 5; ++k) {
          const Vec x = M.sample_point(rng);
          const Vec X = M.random_tangent(x, rng), Y = M.random_tangent(x, rng), Z = M.random_tangent(x, rng);
          const Vec s = M.curvature_apply(x, X, Y, Z) + M.curvature_apply(x, Y, Z, X) + M.curvature_apply(x, Z, X, Y);
          CHECK(s.norm() < 1e-9);
        }
  }

  TEST_CASE("cos-warped sphere reproduces unit curvature") {
    Rng rng(9);
    for (int n : {2, 3}) {
      const SpaceForm W = warped_cos_sphere(n);
      for (int k = 0; k < 10; ++k) {
        const Vec x = W.sample_point(rng);
        auto [X, Y] = orthonormal_pair(W, x, rng);
        CHECK(std::abs(W.sectional_curvature(x, X, Y) - 1.0) < 1e-9);
        const Mat xi = wedge_matrix(Vec::Unit(n, 0), Vec::Unit(n, n - 1));
        CHECK(max_abs(W.curvature_frame(x, xi) - xi) < 1e-9);
      }
    }
  }

  TEST_CASE("geodesic examples") {
    const SpaceForm R2 = SpaceForm::euclidean(2);
    const Vec x = (Vec(2) << 1.0, 2.0).finished(), v = (Vec(2) << -0.5, 0.25).finished();
    CHECK((R2.geodesic(x, v, 3.0) - (x + 3.0 * v)).norm() < 1e-15);

    const SpaceForm S2 = SpaceForm::sphere(2, 1.0);
    const Vec south = S2.geodesic(v3(0, 0, 1), v3(0.6, 0.8, 0), std::numbers::pi);
    CHECK((south - v3(0, 0, -1)).norm() < 1e-9);
    CHECK((geodesic_oracle(S2, v3(0, 0, 1), v3(0.6, 0.8, 0), std::numbers::pi) - v3(0, 0, -1)).norm() < 1e-9);

    Rng rng(13);
    const SpaceForm H2 = SpaceForm::hyperbolic(2, 1.0);
    for (int k = 0; k < 5; ++k) {
      const Vec p = H2.sample_point(rng);
      Vec w = H2.random_tangent(p, rng);
      w /= H2.norm(p, w);
      const Vec y = H2.geodesic(p, w, 2.0);
      CHECK(std::abs(ambient_dot(H2, y, y) + 1.0) < 1e-9);
      CHECK(y(2) > 0.0);
    }
  }

  TEST_CASE("closed-form geodesics match an ambient RK4 oracle") {
    Rng rng(17);
    for (const SpaceForm& M : {SpaceForm::sphere(3, 1.7), SpaceForm::hyperbolic(3, 0.8)})
      for (int k = 0; k < 4; ++k) {
        const Vec x = M.sample_point(rng);
        const Vec v = M.random_tangent(x, rng);
        CHECK((M.geodesic(x, v, 1.3) - geodesic_oracle(M, x, v, 1.3)).norm() < 1e-9);
      }
  }

  TEST_CASE("geodesic flow composes") {
    Rng rng(19);
    for (const SpaceForm& M : catalog(3))
      for (int k = 0; k < 3; ++k) {
        const Vec x = M.sample_point(rng, 0.3);
        Vec v = M.random_tangent(x, rng);
        v *= 0.4 / M.norm(x, v);
        const double s = 0.6, t = 0.5;
        const GeodesicFlow first = M.geodesic_flow(x, v, s);
        const Vec direct = M.geodesic_flow(x, v, s + t).point;
        const Vec composed = M.geodesic_flow(first.point, first.velocity, t).point;
        CHECK((direct - composed).norm() < 1e-7);
      }
  }

  TEST_CASE("log map inverts exp") {
    Rng rng(23);
    for (const SpaceForm& M : constant_catalog(3))
      for (int k = 0; k < 5; ++k) {
        const Vec x = M.sample_point(rng);
        Vec v = M.random_tangent(x, rng);
        v *= 0.9 / M.norm(x, v);
        CHECK((M.log_map(x, M.exp(x, v)) - v).norm() < 1e-10);
      }
  }

  TEST_CASE("euclidean transport is the identity") {
    const SpaceForm R3 = SpaceForm::euclidean(3);
    const Vec x = v3(0.1, 0.2, 0.3), v0 = v3(1, -2, 0.5);
    const GeodesicPath g(R3, x, v3(0.3, 0.1, -1), 2.0);
    for (const Vec& v : parallel_transport(R3, g, v0)) CHECK((v - v0).norm() == 0.0);
  }

  TEST_CASE("latitude holonomy") {
    const double theta = std::numbers::pi / 4;
    const LatitudeCircle c(theta);
    const SpaceForm& S2 = c.manifold();
    const Vec v0 = v3(std::cos(theta), 0.0, -std::sin(theta));
    const double expected = 2 * std::numbers::pi * (1 - std::cos(theta));

    const std::vector<Vec> vs = parallel_transport(S2, c, v0, 1e-3);
    const double cos_angle = S2.inner(c.point(0), vs.back(), v0);
    CHECK(std::abs(cos_angle - std::cos(expected)) < 1e-9);

    // Brute-force oracle: tiny explicit steps of the tangential projection.
    Vec w = v0;
    const int steps = 400000;
    const double h = c.duration() / steps;
    for (int i = 0; i < steps; ++i) {
      const double t = (i + 1) * h;
      w = S2.project_tangent(c.point(t), w);
      w /= w.norm();
    }
    CHECK(std::abs(w.dot(v0) - std::cos(expected)) < 1e-4);
  }

  TEST_CASE("parallel transport is an isometry") {
    Rng rng(29);
    for (const SpaceForm& M : catalog(3)) {
      const Vec x = M.sample_point(rng, 0.3);
      Vec d = M.random_tangent(x, rng);
      d /= M.norm(x, d);
      const GeodesicPath g = GeodesicPath::from_direction(M, x, d, 0.8);
      const Vec v = M.random_tangent(x, rng), w = M.random_tangent(x, rng);
      const auto tv = parallel_transport(M, g, v);
      const auto tw = parallel_transport(M, g, w);
      const double g0 = M.inner(x, v, w);
      for (size_t i = 0; i < tv.size(); i += 100) {
        const double t = g.duration() * static_cast<double>(i) / static_cast<double>(tv.size() - 1);
        CHECK(std::abs(M.inner(g.point(t), tv[i], tw[i]) - g0) < 1e-7);
      }
    }
  }

  TEST_CASE("transport along sampled and geodesic paths agree") {
    const SpaceForm S2 = SpaceForm::sphere(2, 1.0);
    const Vec x = v3(0, 0, 1), d = v3(1, 0, 0);
    const GeodesicPath g(S2, x, d, 1.2);
    std::vector<double> t;
    std::vector<Vec> pts;
    for (int i = 0; i <= 1200; ++i) {
      t.push_back(i * 1e-3);
      pts.push_back(g.point(i * 1e-3));
    }
    const SampledPath sp(S2, t, pts);
    const Vec v0 = v3(0, 1, 0);
    const Vec a = parallel_transport(S2, g, v0).back();
    const Vec b = parallel_transport(S2, sp, v0).back();
    CHECK((a - b).norm() < 1e-6);
  }
}
