#include <doctest.h>

#include <numbers>

#include "rollsym/curvature.hpp"
#include "rollsym/errors.hpp"
#include "rollsym/path.hpp"
#include "rollsym/symmetry.hpp"
#include "support.hpp"

using namespace rollsym;
using namespace testsupport;

namespace {

Vec unit(int n, Rng& rng) {
  Vec v = gaussian_vector(n, rng);
  return v / v.norm();
}

Mat normalized_skew(int n, Rng& rng) {
  Mat E = random_skew(n, rng);
  return E / E.norm();
}

}  // namespace

TEST_SUITE("symmetry") {
  TEST_CASE("catalog sizes") {
    CHECK(killing_catalog(SpaceForm::euclidean(2)).size() == 3);
    CHECK(killing_catalog(SpaceForm::sphere(3, 1.0)).size() == 6);
    CHECK(killing_catalog(SpaceForm::hyperbolic(2, 1.0)).size() == 3);
    CHECK(killing_catalog(SpaceForm::euclidean(4)).size() == 10);
    CHECK_THROWS_AS(killing_catalog(warped_cos_sphere(2)), InputError);
    const auto e2 = killing_catalog(SpaceForm::euclidean(2));
    CHECK(e2[0].generator().type == KillingType::translation);
    CHECK(e2[1].generator().type == KillingType::translation);
    CHECK(e2[2].generator().type == KillingType::rotation);
  }

  TEST_CASE("generator validation") {
    CHECK_THROWS_AS(KillingField(SpaceForm::sphere(2, 1.0), {KillingType::boost, 0, 1}), MismatchError);
    CHECK_THROWS_AS(KillingField(SpaceForm::euclidean(2), {KillingType::rotation, 0, 5}), MismatchError);
    CHECK_THROWS_AS(KillingField(SpaceForm::sphere(2, 1.0), {KillingType::hopf, 0, 1}), MismatchError);
    CHECK_NOTHROW(KillingField(SpaceForm::sphere(3, 1.0), {KillingType::hopf, 0, 1}));
    const RollingModel m(SpaceForm::sphere(2, 1.0), SpaceForm::euclidean(2));
    CHECK_THROWS_AS(killing_to_symmetry(m, KillingField(SpaceForm::sphere(2, 1.0), {KillingType::rotation, 0, 1})),
                    MismatchError);
  }

  TEST_CASE("catalog fields are Killing") {
    Rng rng(1);
    for (const SpaceForm& M : constant_catalog(3)) {
      auto cat = killing_catalog(M);
      if (M.kind() == Kind::sphere) cat.emplace_back(M, KillingGenerator{KillingType::hopf, 0, 1});
      for (const KillingField& K : cat)
        for (int k = 0; k < 3; ++k) {
          const Vec x = M.sample_point(rng);
          CHECK(M.tangency_residual(x, K.value(x)) < 1e-12);
          CHECK(killing_skew_defect(K, x) < 1e-12);
          CHECK(killing_ode_residual(K, x, unit(3, rng)) < 1e-7);
        }
    }
  }

  TEST_CASE("plane rotation gives U = J A") {
    const SpaceForm R2 = SpaceForm::euclidean(2);
    const KillingField K(R2, {KillingType::rotation, 0, 1});
    // J from the field itself: column b is K(e_b) - K(0).
    Mat J(2, 2);
    for (int b = 0; b < 2; ++b) J.col(b) = K.value(Vec::Unit(2, b)) - K.value(Vec::Zero(2));
    CHECK(skew_defect(J) == 0.0);
    CHECK(J.norm() == doctest::Approx(std::sqrt(2.0)));
    const RollingModel m(SpaceForm::sphere(2, 1.0), R2);
    const SymmetryCandidate S = killing_to_symmetry(m, K);
    CHECK(S.kind == CandidateKind::sym0);
    Rng rng(2);
    for (int k = 0; k < 5; ++k) {
      const RollingState q = sample_state(m, rng);
      CHECK(max_abs(S.U(q) - J * q.A) < 1e-14);
      CHECK(S.Z(q).norm() == 0.0);
    }
  }

  TEST_CASE("induced candidates satisfy the symmetry equations") {
    Rng rng(3);
    for (const RollingModel& m : {RollingModel(SpaceForm::hyperbolic(2, 1.0), SpaceForm::sphere(2, 1.0)),
                                  RollingModel(SpaceForm::sphere(3, 1.0), SpaceForm::sphere(3, 1.0)),
                                  RollingModel(warped_cosh_flat(3), SpaceForm::sphere(3, 1.0)),
                                  RollingModel(SpaceForm::euclidean(2), SpaceForm::hyperbolic(2, 1.0))}) {
      for (const KillingField& K : killing_catalog(m.M_hat)) {
        const SymmetryCandidate S = killing_to_symmetry(m, K);
        for (int k = 0; k < 3; ++k) {
          const RollingState q = sample_state(m, rng);
          const Vec X = unit(m.n(), rng);
          CHECK(symmetry_residual(m, S, q, X).max() < 1e-6);
          CHECK(sym0_residual(m, S, q, X).max() < 1e-6);
        }
      }
    }
  }

  TEST_CASE("hopf field on the unit 3-sphere") {
    Rng rng(4);
    const RollingModel m(SpaceForm::euclidean(3), SpaceForm::sphere(3, 1.0));
    const SymmetryCandidate S = killing_to_symmetry(m, KillingField(m.M_hat, {KillingType::hopf, 0, 1}));
    for (int k = 0; k < 5; ++k) {
      const RollingState q = sample_state(m, rng);
      CHECK(S.Z_hat(q).norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(symmetry_residual(m, S, q, unit(3, rng)).max() < 1e-6);
    }
  }

  TEST_CASE("vertz residual") {
    Rng rng(5);
    const RollingModel m(SpaceForm::sphere(2, 1.0), SpaceForm::sphere(2, 3.0));
    for (const KillingField& K : killing_catalog(m.M_hat)) {
      const SymmetryCandidate S = killing_to_symmetry(m, K);
      for (int k = 0; k < 5; ++k) {
        const RollingState q = sample_state(m, rng);
        CHECK(vertz_residual(m, S, q, unit(2, rng), unit(2, rng)) < 1e-6);
      }
    }
  }

  TEST_CASE("perturbed and trivial candidates") {
    Rng rng(6);
    const RollingModel m(SpaceForm::sphere(2, 1.0), SpaceForm::hyperbolic(2, 1.0));
    const SymmetryCandidate Z = zero_candidate(2);
    for (int k = 0; k < 5; ++k) {
      const RollingState q = sample_state(m, rng);
      CHECK(symmetry_residual(m, Z, q, unit(2, rng)).max() == 0.0);
    }
    CHECK_THROWS_AS(perturb_candidate(Z, Mat::Identity(2, 2)), InputError);

    for (const KillingField& K : killing_catalog(m.M_hat)) {
      const SymmetryCandidate P = perturb_candidate(killing_to_symmetry(m, K), 1e-3 * normalized_skew(2, rng));
      const RollingState q = sample_state(m, rng);
      double worst = 0.0;
      for (int a = 0; a < 2; ++a) worst = std::max(worst, symmetry_residual(m, P, q, Vec::Unit(2, a)).max());
      CHECK(worst > 1e-4);
      CHECK(worst < 2e-3);
    }
  }

  TEST_CASE("fiber independence of the reconstructed derivative") {
    Rng rng(7);
    const RollingModel m(SpaceForm::hyperbolic(3, 1.0), SpaceForm::sphere(3, 1.0));
    for (const KillingField& K : killing_catalog(m.M_hat)) {
      const SymmetryCandidate S = killing_to_symmetry(m, K);
      const RollingState q = sample_state(m, rng);
      const Mat D = S.U(q) * q.A.transpose();
      CHECK(max_abs(D - K.derivative_frame(q.x_hat)) < 1e-12);
      for (int k = 0; k < 3; ++k) {
        const RollingState p = make_state(m, q.x, q.x_hat, random_rotation(3, rng));
        CHECK(max_abs(S.U(p) * p.A.transpose() - D) < 1e-9);
      }
    }
  }

  TEST_CASE("inner symmetry of the radial field") {
    Rng rng(8);
    for (int n : {2, 3}) {
      const RollingModel m(warped_cos_sphere(n), SpaceForm::sphere(n, 1.0));
      const auto radial = [](const RollingState& q) { return Vec(Vec::Unit(q.A.rows(), 0)); };
      for (int k = 0; k < 10; ++k) CHECK(inner_symmetry_residual(m, radial, sample_state(m, rng)) < 1e-8);
    }
    const RollingModel flat(SpaceForm::sphere(2, 1.0), SpaceForm::euclidean(2));
    for (int k = 0; k < 5; ++k) {
      const Vec Z = gaussian_vector(2, rng);
      const auto field = [&](const RollingState&) { return Z; };
      CHECK(inner_symmetry_residual(flat, field, sample_state(flat, rng)) >= Z.norm() * (1 - 1e-6));
    }
  }

  TEST_CASE("inner symmetry matches sectional curvatures") {
    Rng rng(9);
    const RollingModel m(warped_cos_sphere(3), SpaceForm::sphere(3, 1.0));
    const Vec x1 = m.M.sample_point(rng, 0.3);
    const Vec Zf = Vec::Unit(3, 0);
    for (int k = 0; k < 5; ++k) {
      const RollingState q = make_state(m, x1, m.M_hat.sample_point(rng), random_rotation(3, rng));
      CHECK(inner_symmetry_residual(m, [&](const RollingState&) { return Zf; }, q) < 1e-8);
      Vec X = unit(3, rng);
      X -= X.dot(Zf) * Zf;
      X /= X.norm();
      const double s = m.M.sectional_curvature(x1, m.M.from_frame(x1, X), m.M.from_frame(x1, Zf));
      const double sh = m.M_hat.sectional_curvature(q.x_hat, m.M_hat.from_frame(q.x_hat, q.A * X),
                                                    m.M_hat.from_frame(q.x_hat, q.A * Zf));
      CHECK(std::abs(s - sh) < 1e-7);
    }
  }

  TEST_CASE("Jacobi propagation reproduces sin(t) E(t)") {
    const RollingModel m(SpaceForm::euclidean(2), SpaceForm::sphere(2, 1.0));
    Rng rng(10);
    const RollingState q = sample_state(m, rng);
    const Vec X = unit(2, rng);
    const Vec AX = q.A * X;
    const Vec E = (Vec(2) << -AX(1), AX(0)).finished();
    const Mat U0 = q.A * wedge_matrix(q.A.transpose() * E, X);
    CHECK((U0 * X - E).norm() < 1e-14);
    const auto grid = uniform_grid(2.0, 400);
    const auto out = propagate_sym0(m, q, X, Vec::Zero(2), U0, grid);
    const Vec vh = m.M_hat.from_frame(q.x_hat, AX);
    for (size_t i = 0; i < out.size(); i += 50) {
      const double t = out[i].t;
      const GeodesicFlow g = m.M_hat.geodesic_flow(q.x_hat, vh, t);
      CHECK((out[i].q.x_hat - g.point).norm() < 1e-9);
      CHECK((out[i].Z_hat - std::sin(t) * g.T * E).norm() < 1e-9);
    }
  }

  TEST_CASE("propagation can be reversed") {
    const RollingModel m(SpaceForm::hyperbolic(2, 1.0), SpaceForm::sphere(2, 1.0));
    Rng rng(11);
    const RollingState q = sample_state(m, rng);
    const Vec X = unit(2, rng);
    const Vec Z0 = gaussian_vector(2, rng);
    const Mat U0 = q.A * random_skew(2, rng);
    const auto fwd = propagate_sym0(m, q, X, Z0, U0, uniform_grid(1.2, 240));
    const Sym0Sample& e = fwd.back();
    const Vec Xe = m.M.to_frame(e.q.x, m.M.geodesic_flow(q.x, m.M.from_frame(q.x, X), 1.2).velocity);
    const auto back = propagate_sym0(m, e.q, -Xe, e.Z_hat, e.U, uniform_grid(1.2, 240));
    CHECK((back.back().Z_hat - Z0).norm() < 1e-5);
    CHECK(max_abs(back.back().U - U0) < 1e-5);
    CHECK_THROWS_AS(propagate_sym0(m, q, X, Z0, U0, {0.0, 0.1, 0.3}), InputError);
  }

  TEST_CASE("propagation along a broken geodesic matches the Killing field") {
    Rng rng(12);
    for (const RollingModel& m : {RollingModel(SpaceForm::sphere(2, 1.0), SpaceForm::sphere(2, 1.0)),
                                  RollingModel(SpaceForm::euclidean(2), SpaceForm::euclidean(2)),
                                  RollingModel(SpaceForm::hyperbolic(2, 1.0), SpaceForm::sphere(2, 1.0))}) {
      for (const KillingField& K : killing_catalog(m.M_hat)) {
        const SymmetryCandidate S = killing_to_symmetry(m, K);
        RollingState q = sample_state(m, rng);
        Vec Z = S.Z_hat(q);
        Mat U = S.U(q);
        for (int seg = 0; seg < 3; ++seg) {
          const auto out = propagate_sym0(m, q, unit(2, rng), Z, U, uniform_grid(0.7, 140));
          q = out.back().q;
          Z = out.back().Z_hat;
          U = out.back().U;
        }
        CHECK((Z - S.Z_hat(q)).norm() < 1e-5);
        CHECK(max_abs(U - S.U(q)) < 1e-5);
      }
    }
  }

  TEST_CASE("dimension probe") {
    Rng rng(13);
    for (int n : {2, 3}) {
      const RollingModel m(SpaceForm::hyperbolic(n, 1.0), SpaceForm::sphere(n, 1.0));
      std::vector<SymmetryCandidate> cands;
      for (const KillingField& K : killing_catalog(m.M_hat)) cands.push_back(killing_to_symmetry(m, K));
      const RankReport r = sym0_dimension_probe(m, sample_state(m, rng), cands);
      CHECK(r.rank == n * (n + 1) / 2);
      CHECK(r.gap >= 1e4);
      SymmetryCandidate general = zero_candidate(n);
      general.kind = CandidateKind::general;
      cands.push_back(general);
      CHECK_THROWS_AS(sym0_dimension_probe(m, sample_state(m, rng), cands), MismatchError);
    }
  }
}
