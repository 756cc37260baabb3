#include <cmath>

#include <gtest/gtest.h>

#include "hwbarrier/errors.hpp"
#include "hwbarrier/hw_model.hpp"
#include "oracles.hpp"

namespace {

using hwb::HullWhiteModel;

TEST(HwModel, Table1Defaults) {
  const HullWhiteModel m = hwb::table1_model();
  EXPECT_DOUBLE_EQ(m.r0, 0.07);
  EXPECT_DOUBLE_EQ(m.kappa0, 1.0);
  EXPECT_DOUBLE_EQ(m.theta0, 0.08);
  EXPECT_DOUBLE_EQ(m.theta_k, 0.3);
  EXPECT_DOUBLE_EQ(m.sigma0, 0.2);
  EXPECT_DOUBLE_EQ(m.sigma_k, 0.2);
  EXPECT_DOUBLE_EQ(m.bond_maturity, 7.0);
  EXPECT_DOUBLE_EQ(hwb::kTable1BarrierLevel, 0.8);
  EXPECT_NEAR(m.theta(1.0), 0.08 * std::exp(-0.3), 1e-15);
  EXPECT_NEAR(m.sigma(2.0), 0.2 * std::exp(-0.4), 1e-15);
}

TEST(HwModel, ValidateRejectsBadParameters) {
  HullWhiteModel m;
  EXPECT_NO_THROW(m.validate());
  m.kappa0 = 0.0;
  EXPECT_THROW(m.validate(), hwb::ConfigError);
  m = HullWhiteModel{};
  m.sigma0 = -0.1;
  EXPECT_THROW(m.validate(), hwb::ConfigError);
  m = HullWhiteModel{};
  m.bond_maturity = 0.0;
  EXPECT_THROW(m.validate(), hwb::ConfigError);
}

TEST(HwModel, BondCoefficientsMatchQuadrature) {
  const HullWhiteModel m = hwb::table1_model();
  for (double t : {0.0, 0.25, 0.5, 1.0, 3.0, 6.5}) {
    EXPECT_NEAR(hwb::bond_B(m, t, 7.0), oracle::B(m, t, 7.0), 1e-15);
    EXPECT_NEAR(hwb::bond_log_A(m, t, 7.0), oracle::log_A(m, t, 7.0), 1e-12);
  }
  EXPECT_NEAR(hwb::bond_B(m, 0.0, 7.0), -0.9990881, 1e-7);
  EXPECT_NEAR(hwb::bond_A(m, 0.0, 7.0), 0.8382873, 1e-7);
}

TEST(HwModel, TerminalValues) {
  const HullWhiteModel m = hwb::table1_model();
  EXPECT_EQ(hwb::bond_B(m, 7.0, 7.0), 0.0);
  EXPECT_EQ(hwb::bond_log_A(m, 7.0, 7.0), 0.0);
  EXPECT_DOUBLE_EQ(hwb::zcb_price(m, 0.3, 7.0, 7.0), 1.0);
}

TEST(HwModel, ZeroKappaLimit) {
  HullWhiteModel m;
  m.kappa0 = 0.0;
  EXPECT_DOUBLE_EQ(hwb::bond_B(m, 1.0, 7.0), -6.0);
  m.kappa0 = 1e-9;
  EXPECT_NEAR(hwb::bond_B(m, 1.0, 7.0), -6.0, 1e-7);
}

TEST(HwModel, DerivativesMatchFiniteDifferences) {
  const HullWhiteModel m = hwb::table1_model();
  const double h = 1e-5;
  for (double t : {0.1, 0.7, 2.0}) {
    const double fd_b = (hwb::bond_B(m, t + h, 7.0) - hwb::bond_B(m, t - h, 7.0)) / (2 * h);
    const double fd_a =
        (hwb::bond_log_A(m, t + h, 7.0) - hwb::bond_log_A(m, t - h, 7.0)) / (2 * h);
    EXPECT_NEAR(hwb::bond_B_dt(m, t, 7.0), fd_b, 1e-8);
    EXPECT_NEAR(hwb::bond_log_A_dt(m, t, 7.0), fd_a, 1e-8);
  }
}

// F = A e^{B r} solves F_t + 1/2 sigma^2 F_rr + kappa (theta - r) F_r = r F.
TEST(HwModel, BondPriceSolvesPricingPde) {
  const HullWhiteModel m = hwb::table1_model();
  const double h = 1e-4;
  for (double r : {-0.05, 0.05, 0.2}) {
    for (double t : {0.3, 1.5, 4.0}) {
      auto F = [&](double rr, double tt) { return hwb::zcb_price(m, rr, tt, 7.0); };
      const double ft = (F(r, t + h) - F(r, t - h)) / (2 * h);
      const double fr = (F(r + h, t) - F(r - h, t)) / (2 * h);
      const double frr = (F(r + h, t) - 2 * F(r, t) + F(r - h, t)) / (h * h);
      const double s = m.sigma(t);
      const double res = ft + 0.5 * s * s * frr + m.kappa0 * (m.theta(t) - r) * fr - r * F(r, t);
      EXPECT_NEAR(res, 0.0, 1e-6) << "r=" << r << " t=" << t;
    }
  }
}

TEST(HwModel, RateBarrierRoundTrip) {
  const HullWhiteModel m = hwb::table1_model();
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    const double L = hwb::barrier_to_rate(m, 0.8, t, 7.0);
    EXPECT_NEAR(hwb::zcb_price(m, L, t, 7.0), 0.8, 1e-14);
  }
  EXPECT_NEAR(hwb::barrier_to_rate(m, 0.8, 0.0, 7.0), 0.04679, 1e-5);
  EXPECT_NEAR(hwb::barrier_to_rate(m, 0.8, 0.25, 7.0), 0.06132, 1e-5);
  EXPECT_NEAR(hwb::barrier_to_rate(m, 0.8, 0.5, 7.0), 0.07492, 1e-5);
  EXPECT_NEAR(hwb::barrier_to_rate(m, 0.8, 1.0, 7.0), 0.09957, 1e-5);
}

TEST(HwModel, RateBarrierRisesWithTime) {
  const HullWhiteModel m = hwb::table1_model();
  double prev = hwb::barrier_to_rate(m, 0.8, 0.0, 7.0);
  for (int i = 1; i <= 20; ++i) {
    const double L = hwb::barrier_to_rate(m, 0.8, 0.05 * i, 7.0);
    EXPECT_GT(L, prev);
    prev = L;
  }
}

TEST(HwModel, RateBarrierErrors) {
  const HullWhiteModel m = hwb::table1_model();
  EXPECT_THROW(hwb::barrier_to_rate(m, 0.0, 0.5, 7.0), hwb::DomainError);
  EXPECT_THROW(hwb::barrier_to_rate(m, 0.8, 8.0, 7.0), hwb::DomainError);
  EXPECT_THROW(hwb::barrier_to_rate(m, 0.8, 7.0, 7.0), hwb::SingularityError);
  EXPECT_NO_THROW(hwb::barrier_to_rate(m, 1.0, 7.0, 7.0));
}

TEST(HwModel, BondPriceMonotoneDecreasingInRate) {
  const HullWhiteModel m = hwb::table1_model();
  double prev = hwb::zcb_price(m, -0.5, 1.0, 7.0);
  for (int i = 1; i < 50; ++i) {
    const double f = hwb::zcb_price(m, -0.5 + 0.05 * i, 1.0, 7.0);
    EXPECT_LT(f, prev);
    prev = f;
  }
}

}  // namespace
