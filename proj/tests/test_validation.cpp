#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rmte/validation.hpp"

using namespace rmte;

TEST_CASE("V-element variance at (2,2): pi^2/27 both off-diagonal") {
  const SubsystemDims dims(2, 2);
  MomentReport r = v_element_variance(dims, PairType::BothOff, 30000, 17);
  CHECK(r.analytic == doctest::Approx(kPi * kPi / 27.0).epsilon(1e-14));
  CHECK(r.pass());
}

TEST_CASE("diagonal variance is four times the generic off-diagonal one") {
  const SubsystemDims dims(6, 6);
  MomentReport off = v_element_variance(dims, PairType::BothOff, 20000, 18);
  MomentReport diag = v_element_variance(dims, PairType::Diagonal, 20000, 19);
  CHECK(diag.analytic == doctest::Approx(4.0 * off.analytic).epsilon(1e-14));
  CHECK(off.pass());
  CHECK(diag.pass());
  MomentReport jeq = v_element_variance(dims, PairType::JEqual, 20000, 20);
  CHECK(jeq.analytic == doctest::Approx(2.0 * off.analytic).epsilon(1e-14));
  CHECK(jeq.pass());
}

TEST_CASE("rescaled diagonal covariances") {
  const SubsystemDims dims(8, 8);
  auto reports = diag_covariance(dims, 30000, 21);
  REQUIRE(reports.size() == 4);
  CHECK(reports[0].analytic == 1.0);
  CHECK(reports[1].analytic == 0.5);
  CHECK(reports[2].analytic == 0.5);
  CHECK(reports[3].analytic == 0.25);
  for (const auto& r : reports) {
    INFO(r.quantity, " mc=", r.monte_carlo, " sigmas=", r.deviation_sigmas());
    CHECK(r.pass());
  }
}

TEST_CASE("haar eigenvector moments") {
  SUBCASE("n = 1 normalization") {
    auto reports = haar_moments(1, 2000, 22);
    CHECK(reports[0].analytic == 1.0);
    CHECK(reports[0].monte_carlo == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("n = 2 and n = 4 finite-N formulas") {
    for (int n : {2, 4}) {
      auto reports = haar_moments(n, 50000, 23 + n);
      for (const auto& r : reports) {
        INFO("N=", n, " ", r.quantity, " sigmas=", r.deviation_sigmas());
        CHECK(r.pass());
      }
    }
    auto r4 = haar_moments(4, 50000, 27);
    CHECK(r4[3].analytic == doctest::Approx(1.0 / 210.0).epsilon(1e-14));
  }
}

TEST_CASE("off-diagonal intensities follow the unit exponential") {
  // the exponential law is a large-N statement; at N = 50 the second moment
  // carries a genuine ~ 3.7/N correction, so 1e4 samples is the resolution
  // at which the asymptotic law holds
  const SubsystemDims dims(50, 50);
  ExponentialCheck check = off_diagonal_exponential_check(dims, 10000, 32);
  CHECK(check.mean_report.pass());
  CHECK(check.var_report.pass());
  CHECK(check.ks_statistic < check.ks_threshold_95);
}

TEST_CASE("reports are deterministic under fixed seeds") {
  const SubsystemDims dims(3, 4);
  MomentReport a = v_element_variance(dims, PairType::BothOff, 2000, 31);
  MomentReport b = v_element_variance(dims, PairType::BothOff, 2000, 31);
  CHECK(a.monte_carlo == b.monte_carlo);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("sample-count preconditions") {
  const SubsystemDims dims(2, 2);
  CHECK_THROWS_AS(v_element_variance(dims, PairType::BothOff, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(diag_covariance(dims, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(off_diagonal_exponential_check(dims, 100, 1), std::invalid_argument);
}
