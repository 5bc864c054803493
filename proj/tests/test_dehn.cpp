#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "seqlab/dehn.hpp"
#include "seqlab/errors.hpp"

using namespace seqlab;

namespace {

const double kPi = 3.14159265358979323846;

double dist(const CotangentPoint& a, const CotangentPoint& b) {
  return std::max((a.u - b.u).cwiseAbs().maxCoeff(), (a.v - b.v).cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("sigma endpoints and composition") {
  std::mt19937_64 rng(31);
  for (int n : {1, 2, 3}) {
    for (int i = 0; i < 50; ++i) {
      auto p = random_cotangent_point(n, 0.05, 2.0, rng);
      CHECK(dist(sigma_t(p, 0.0), p) <= 1e-12);
      CHECK(dist(sigma_t(p, kPi), antipode(p)) <= 1e-12);
      std::uniform_real_distribution<double> ang(-4.0, 4.0);
      double s = ang(rng), t = ang(rng);
      CHECK(dist(sigma_t(sigma_t(p, t), s), sigma_t(p, s + t)) <= 1e-9);
    }
  }
  CotangentPoint zero{Eigen::VectorXd::Zero(3), Eigen::VectorXd::Unit(3, 0)};
  CHECK(dist(sigma_t(zero, kPi), antipode(zero)) == 0);
  CHECK_THROWS_AS(sigma_t(zero, 1.0), ZeroSection);
}

TEST_CASE("default profile: shape conditions") {
  for (double lambda : {1.0, 0.5, 0.1}) {
    auto prof = default_profile(lambda);
    std::vector<double> ts;
    for (int i = 0; i < 100; ++i) ts.push_back(-lambda / 2 + lambda * i / 99.0);
    CHECK(functional_equation_residual(prof, ts) <= 1e-12);
    CHECK(prof.dr_lambda(0) == doctest::Approx(0.5));
    CHECK(prof.dr_lambda(lambda) == 0);
    CHECK(prof.r_lambda(2 * lambda) == 0);
    CHECK(prof.r_lambda(-2 * lambda) == 0);
    for (double mu : {0.1, 0.37, 0.8})
      CHECK(prof.dr_lambda(mu * lambda) == doctest::Approx(prof.dr(mu)).epsilon(1e-15));
    CHECK(wobble_check(prof));
  }
  CHECK_THROWS_AS(default_profile(1.5), DomainError);
  CHECK_THROWS_AS(default_profile(0.0), DomainError);
}

TEST_CASE("profile derivatives are consistent") {
  auto prof = default_profile(1.0);
  const double h = 1e-6;
  for (double t = -1.2; t <= 1.2; t += 0.013) {
    CHECK(prof.dr(t) == doctest::Approx((prof.r(t + h) - prof.r(t - h)) / (2 * h)).epsilon(1e-6));
    CHECK(prof.ddr(t) == doctest::Approx((prof.dr(t + h) - prof.dr(t - h)) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("wobble check") {
  auto flat = default_profile(1.0, 0.1);
  // R' = 2 delta on a stretch, so R'' vanishes where R' >= delta.
  flat.dr = [](double t) { return t >= 0 && t <= 1 ? 0.2 : 0.0; };
  flat.ddr = [](double) { return 0.0; };
  CHECK_FALSE(wobble_check(flat));
  auto sentinel = flat;
  sentinel.delta = std::numeric_limits<double>::infinity();
  CHECK(wobble_check(sentinel));
  sentinel.dr = [](double t) { return -t; };
  CHECK_FALSE(wobble_check(sentinel));
}

TEST_CASE("twist: fixed outside, antipodal on the zero section") {
  std::mt19937_64 rng(32);
  for (double lambda : {1.0, 0.5}) {
    auto prof = default_profile(lambda);
    for (int i = 0; i < 50; ++i) {
      auto far = random_cotangent_point(2, lambda, 3 * lambda, rng);
      CHECK(dist(model_dehn_twist(far, prof), far) == 0);
      auto z = random_cotangent_point(2, 0.0, 0.0, rng);
      CHECK(dist(model_dehn_twist(z, prof), antipode(z)) == 0);
      // Rotation angle is 2 pi R'_lambda(mu).
      auto p = random_cotangent_point(2, 0.05 * lambda, 0.95 * lambda, rng);
      CHECK(dist(model_dehn_twist(p, prof), sigma_t(p, 2 * kPi * prof.dr_lambda(p.length()))) <= 1e-12);
      // Continuity at the zero section.
      auto tiny = random_cotangent_point(2, 1e-9, 2e-9, rng);
      CHECK(dist(model_dehn_twist(tiny, prof), antipode(tiny)) <= 1e-6);
    }
  }
}

TEST_CASE("symplecticity and exactness") {
  std::mt19937_64 rng(33);
  for (int n : {1, 2})
    for (double lambda : {1.0, 0.5}) {
      auto prof = default_profile(lambda);
      std::vector<CotangentPoint> pts;
      for (int i = 0; i < 40; ++i) pts.push_back(random_cotangent_point(n, 0.02 * lambda, 1.2 * lambda, rng));
      for (const auto& p : pts) CHECK(symplecticity_residual(p, prof) <= 1e-6);
      CHECK(exactness_check(prof, pts) <= 1e-4);
    }
}

TEST_CASE("the uncorrected primitive is not a primitive") {
  std::mt19937_64 rng(34);
  auto prof = default_profile(1.0);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    auto p = random_cotangent_point(1, 0.1, 0.9, rng);
    worst = std::max(worst, exactness_residual(p, prof, 1e-5, true));
  }
  CHECK(worst > 1e-2);
}

TEST_CASE("exactness residual converges under denser sampling") {
  std::mt19937_64 rng(35);
  auto prof = default_profile(1.0);
  std::vector<CotangentPoint> pts;
  for (int i = 0; i < 60; ++i) pts.push_back(random_cotangent_point(2, 0.02, 1.2, rng));
  std::vector<CotangentPoint> half(pts.begin(), pts.begin() + 30);
  double r1 = exactness_check(prof, half), r2 = exactness_check(prof, pts);
  CHECK(r2 <= 2 * r1 + 1e-12);
  // Outside the support the residual vanishes.
  std::vector<CotangentPoint> far;
  for (int i = 0; i < 10; ++i) far.push_back(random_cotangent_point(2, 1.1, 2.0, rng));
  CHECK(exactness_check(prof, far) <= 1e-9);
}

TEST_CASE("Lefschetz model map") {
  std::mt19937_64 rng(36);
  for (int n : {1, 2, 3})
    for (int i = 0; i < 30; ++i) {
      auto x = random_zero_fiber_point(n, rng);
      CHECK(x.consistent());
      auto y = phi_map(x);
      CHECK(std::abs(y.v.norm() - 1) <= 1e-12);
      CHECK(std::abs(y.u.dot(y.v)) <= 1e-12);
      CHECK(phi_equivariance_residual(x, random_orthogonal(n + 1, rng)) <= 1e-10);
      CHECK(phi_pullback_residual(x) <= 1e-4);
      auto p = random_cotangent_point(n, 0.05, 0.9, rng);
      CHECK(twist_equivariance_residual(p, default_profile(1.0), random_orthogonal(n + 1, rng)) <= 1e-10);
    }
  auto zero = FibrationPoint::make({0.0, 0.0});
  CHECK_THROWS_AS(phi_map(zero), OnSingularity);
  auto off = FibrationPoint::make({1.0, 0.0});
  CHECK_THROWS_AS(phi_map(off), DomainError);
  auto x = random_zero_fiber_point(2, rng);
  auto near = x.x;
  near[0] += std::complex<double>(1e-3, -2e-3);
  auto r = zero_fiber_retraction(near);
  CHECK(std::abs(q_value(r)) <= 1e-12 * 10);
  auto same = zero_fiber_retraction(x.x);
  for (std::size_t k = 0; k < same.size(); ++k) CHECK(std::abs(same[k] - x.x[k]) <= 1e-12);
}

TEST_CASE("report at the acceptance tolerances") {
  for (int n : {1, 2})
    for (double lambda : {1.0, 0.5}) {
      auto rep = dehn_report(n, lambda, 0.1, 200, 7);
      CHECK(rep.within_tolerance);
      CHECK(rep.wobbly);
      CHECK(rep.sigma_identity <= 1e-12);
      CHECK(rep.sigma_antipode <= 1e-12);
      CHECK(rep.symplecticity <= 1e-6);
      CHECK(rep.exactness <= 1e-4);
      CHECK(rep.functional_equation <= 1e-12);
      CHECK(rep.phi_equivariance <= 1e-10);
      CHECK(rep.phi_pullback <= 1e-4);
      CHECK(rep.fixed_outside == 0);
      CHECK(rep.zero_section == 0);
      CHECK(rep.exactness_printed > 1e-2);
    }
}
