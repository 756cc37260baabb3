#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hwbarrier/erf_convolution.hpp"
#include "hwbarrier/errors.hpp"
#include "hwbarrier/hp_pricer.hpp"
#include "oracles.hpp"

namespace {

using hwb::HeatPotentialSolver;

const hwb::HullWhiteModel kModel = hwb::table1_model();
constexpr double kLevel = 0.8;
// Down-and-out reference prices from a converged front-fixed finite-difference
// solver, cross-checked by Monte Carlo.
constexpr double kRefT1K03 = 0.0130834;
constexpr double kRefT05K01 = 0.0494160;

double direct_convolution(const hwb::HeatTransform& tr, double K, double lo, double x, double tau) {
  const double T = tr.maturity();
  const double xk = tr.xi(T) + tr.psi(T) / tr.bond_B(T) * (std::log(K) - tr.bond_log_A(T));
  const double s = 2.0 * std::sqrt(tau);
  auto f = [&](double z) {
    return tr.initial_condition(K, z) * std::exp(-(x - z) * (x - z) / (s * s));
  };
  const double hi = xk;
  if (!(hi > lo)) return 0.0;
  return oracle::integrate_split(f, lo, hi, {x - 8 * s, x, x + 8 * s}) /
         (std::sqrt(M_PI) * s);
}

TEST(ErfConvolution, ParamInvariants) {
  const hwb::HeatTransform tr(kModel, 1.0);
  const auto y = hwb::BarrierPath::from_bond_level(tr, kLevel);
  for (double K : {0.06, 0.3, 0.79, 0.9}) {
    const auto p = hwb::make_call_params(tr, K, y(0.0));
    EXPECT_GE(p.K1(), y(0.0));
    EXPECT_NEAR(p.A2() - p.B2(), tr.bond_B(1.0) / tr.psi(1.0), 1e-15);
  }
  EXPECT_TRUE(hwb::make_call_params(tr, 0.9, y(0.0)).empty());
}

TEST(ErfConvolution, MatchesDirectQuadrature) {
  const hwb::HeatTransform tr(kModel, 1.0);
  const auto y = hwb::BarrierPath::from_bond_level(tr, kLevel);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ux(-0.2, 0.6);
  std::uniform_real_distribution<double> ut(0.02, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double x = ux(rng);
    const double tau = ut(rng) * tr.horizon();
    for (double K : {0.1, 0.3}) {
      const auto p = hwb::make_call_params(tr, K, y(0.0));
      const double ref = direct_convolution(tr, K, y(0.0), x, tau);
      const double got = hwb::gaussian_convolution(p, x, tau);
      EXPECT_NEAR(got, ref, 1e-8 * std::max(std::abs(ref), 1e-6)) << "x=" << x << " tau=" << tau;
    }
  }
}

TEST(ErfConvolution, DerivativeMatchesFiniteDifference) {
  const hwb::HeatTransform tr(kModel, 0.5);
  const auto p = hwb::make_call_params(tr, 0.1, 0.02);
  const double h = 1e-6;
  for (double x : {0.0, 0.05, 0.2}) {
    const double tau = 0.5 * tr.horizon();
    const double fd = (hwb::gaussian_convolution(p, x + h, tau) -
                       hwb::gaussian_convolution(p, x - h, tau)) / (2 * h);
    EXPECT_NEAR(hwb::gaussian_convolution_dx(p, x, tau), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(ErfConvolution, LimitsAndSymmetry) {
  const hwb::HeatTransform tr(kModel, 1.0);
  const auto p = hwb::make_call_params(tr, 0.3, 0.05);
  EXPECT_EQ(hwb::gaussian_convolution(p, 50.0, 0.01), 0.0);
  EXPECT_NEAR(hwb::gaussian_convolution(p, 0.1, 0.0), tr.initial_condition(0.3, 0.1), 1e-14);
  EXPECT_NEAR(hwb::gaussian_convolution(p, 0.1, 1e-12), tr.initial_condition(0.3, 0.1), 1e-9);
  const auto q = p.reflected();
  EXPECT_NEAR(hwb::gaussian_convolution(q, -0.1, 0.01), hwb::gaussian_convolution(p, 0.1, 0.01),
              1e-15);
}

TEST(HpPricer, BoundaryPhi) {
  const hwb::HeatTransform tr(kModel, 1.0);
  const auto y = hwb::BarrierPath::from_bond_level(tr, kLevel);
  const auto zero = hwb::make_call_params(tr, 0.9, y(0.0));
  EXPECT_EQ(hwb::boundary_phi(zero, y, 0.3 * tr.horizon()), 0.0);
  EXPECT_EQ(hwb::boundary_phi(zero, y, 0.0), 0.0);

  const auto p = hwb::make_call_params(tr, 0.1, y(0.0));
  const double tau = 0.5 * tr.horizon();
  const double ref = -direct_convolution(tr, 0.1, y(0.0), y(tau), tau);
  EXPECT_NEAR(hwb::boundary_phi(p, y, tau), ref, 1e-8 * std::abs(ref));
  // tau = 0: half the one-sided boundary value of the data.
  EXPECT_NEAR(hwb::boundary_phi(p, y, 0.0), -0.5 * tr.initial_condition(0.1, y(0.0) + 1e-12),
              1e-9);
}

TEST(HpPricer, DensityVanishesForStrikeAboveLevel) {
  const auto d = hwb::solve_density(kModel, kLevel, 1.0, 0.8);
  for (double v : d.psi_values) EXPECT_EQ(v, 0.0);
}

TEST(HpPricer, FlatBoundaryDensityIsTwicePhi) {
  const hwb::HeatTransform tr(kModel, 1.0);
  const auto y = hwb::BarrierPath::linear(0.05, 0.0, tr.horizon());
  const auto g = hwb::VolterraGrid::uniform(tr.horizon(), 20);
  const auto p = hwb::make_call_params(tr, 0.3, 0.05);
  std::vector<double> rhs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = 2.0 * hwb::boundary_phi(p, y, g.nodes[i]);
  const auto d = hwb::solve_second_kind(g, rhs, hwb::make_hp_kernel(y, g), 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(d.psi_values[i], rhs[i]);
}

TEST(HpPricer, BoundaryConditionHolds) {
  const HeatPotentialSolver s(kModel, kLevel, 0.5);
  const auto p = s.params(0.1);
  const auto d = s.solve_density(0.1);
  const double scale = hwb::gaussian_convolution(p, s.path()(0.0) + 0.01, 0.0);
  for (double f : {0.25, 0.5, 0.8, 1.0}) {
    const double tau = f * s.transform().horizon();
    const double u = hwb::evaluate_u(d, p, s.path(), s.path()(tau), tau);
    EXPECT_LE(std::abs(u), 1e-3 * scale) << "tau=" << tau;
  }
}

TEST(HpPricer, EvaluateWithZeroDensityIsConvolution) {
  const HeatPotentialSolver s(kModel, kLevel, 0.5);
  auto d = s.solve_density(0.1);
  std::fill(d.psi_values.begin(), d.psi_values.end(), 0.0);
  const auto p = s.params(0.1);
  const double tau = s.transform().horizon();
  EXPECT_DOUBLE_EQ(hwb::evaluate_u(d, p, s.path(), 0.2, tau), hwb::gaussian_convolution(p, 0.2, tau));
  EXPECT_NEAR(hwb::evaluate_u(s.solve_density(0.1), p, s.path(), 30.0, tau), 0.0, 1e-300);
  EXPECT_THROW(hwb::evaluate_u(d, p, s.path(), s.path()(tau) - 0.01, tau), hwb::DomainError);
}

TEST(HpPricer, MatchesReferencePrices) {
  EXPECT_LE(oracle::rel(hwb::price_hp(kModel, kLevel, 1.0, 0.3).price, kRefT1K03), 3e-3);
  EXPECT_LE(oracle::rel(hwb::price_hp(kModel, kLevel, 0.5, 0.1).price, kRefT05K01), 1e-3);
}

TEST(HpPricer, TrivialCases) {
  EXPECT_EQ(hwb::price_hp(kModel, kLevel, 1.0, 0.8).price, 0.0);
  EXPECT_EQ(hwb::price_hp(kModel, kLevel, 1.0, 0.95).price, 0.0);
  auto m = kModel;
  m.r0 = hwb::barrier_to_rate(m, kLevel, 0.0, 7.0);
  const auto at = hwb::price_hp(m, kLevel, 1.0, 0.3);
  EXPECT_EQ(at.price, 0.0);
  EXPECT_TRUE(at.knocked_out);
  EXPECT_THROW(hwb::price_hp(kModel, kLevel, 1.0, 0.0), hwb::DomainError);
}

TEST(HpPricer, SurfaceMatchesSinglePricesAndIsMonotone) {
  const std::vector<double> K{0.06, 0.08, 0.1, 0.15, 0.2, 0.3, 0.8};
  const std::vector<double> T{1.0 / 12.0, 0.3, 0.5, 1.0};
  const auto grid = hwb::price_surface(kModel, kLevel, K, T);
  ASSERT_EQ(grid.values.size(), T.size());
  for (std::size_t j = 0; j < T.size(); ++j) {
    for (std::size_t i = 0; i < K.size(); ++i) {
      EXPECT_GE(grid.values[j][i].price, 0.0);
      if (i > 0) EXPECT_LE(grid.values[j][i].price, grid.values[j][i - 1].price);
      EXPECT_LE(grid.values[j][i].price, hwb::vanilla_price(kModel, T[j], K[i]));
    }
    EXPECT_EQ(grid.values[j].back().price, 0.0);
  }
  EXPECT_EQ(grid.values[3][5].price, hwb::price_hp(kModel, kLevel, 1.0, 0.3).price);
  EXPECT_THROW(hwb::price_surface(kModel, kLevel, {}, T), hwb::ConfigError);
}

TEST(HpPricer, DensitySelfConvergence) {
  const HeatPotentialSolver s20(kModel, kLevel, 0.5, {20});
  const HeatPotentialSolver s40(kModel, kLevel, 0.5, {40});
  const HeatPotentialSolver s80(kModel, kLevel, 0.5, {80});
  const double p20 = s20.price(0.1).price;
  const double p40 = s40.price(0.1).price;
  const double p80 = s80.price(0.1).price;
  EXPECT_GE(std::log2(std::abs(p20 - p40) / std::abs(p40 - p80)), 1.0);
}

TEST(HpPricer, VanillaMatchesGaussianClosedForm) {
  for (double T : {1.0 / 12.0, 0.5, 1.0}) {
    for (double K : {0.06, 0.3, 0.7}) {
      EXPECT_NEAR(hwb::vanilla_price(kModel, T, K), oracle::bond_call(kModel, T, K), 1e-10)
          << "T=" << T << " K=" << K;
    }
  }
  // Rates can go negative, so even a strike of 1 keeps some value.
  EXPECT_NEAR(hwb::vanilla_price(kModel, 1.0, 1.0), oracle::bond_call(kModel, 1.0, 1.0), 1e-12);
}

TEST(HpPricer, FarBarrierApproachesVanilla) {
  // Bond level 2.5 maps to a rate barrier near -1.
  const double far = hwb::price_hp(kModel, 2.5, 1.0, 0.3).price;
  EXPECT_LE(oracle::rel(far, hwb::vanilla_price(kModel, 1.0, 0.3)), 1e-3);
  EXPECT_LE(hwb::down_and_in_price(kModel, 2.5, 1.0, 0.3).price, 1e-3 * far);
}

TEST(HpPricer, InOutParity) {
  for (double K : {0.1, 0.3, 0.9}) {
    const double out = hwb::price_hp(kModel, kLevel, 0.5, K).price;
    const double in = hwb::down_and_in_price(kModel, kLevel, 0.5, K).price;
    EXPECT_NEAR(out + in, hwb::vanilla_price(kModel, 0.5, K), 1e-12);
    EXPECT_GE(in, 0.0);
  }
  EXPECT_EQ(hwb::down_and_in_price(kModel, kLevel, 0.5, 0.9).price,
            hwb::vanilla_price(kModel, 0.5, 0.9));
}

TEST(HpPricer, UpAndOut) {
  const double van = hwb::vanilla_price(kModel, 1.0, 0.3);
  EXPECT_LE(oracle::rel(hwb::up_and_out_price(kModel, 1e-4, 1.0, 0.3).price, van), 1e-3);
  // Bond level 0.7 keeps the rate below about 0.14; the payoff needs F > K.
  const double uo = hwb::up_and_out_price(kModel, 0.7, 0.5, 0.1).price;
  EXPECT_GT(uo, 0.0);
  EXPECT_LT(uo, hwb::vanilla_price(kModel, 0.5, 0.1));
  // The alive region F > 0.7 is unbounded above, so high strikes keep value.
  const double high = hwb::up_and_out_price(kModel, 0.7, 0.5, 0.95).price;
  EXPECT_GT(high, 0.0);
  EXPECT_LT(high, hwb::vanilla_price(kModel, 0.5, 0.95));
  auto m = kModel;
  m.r0 = 1.0;
  EXPECT_TRUE(hwb::up_and_out_price(m, 0.7, 0.5, 0.1).knocked_out);
}

// Reflecting the lower problem twice returns the original boundary, data and
// point, so the price is reproduced.
TEST(HpPricer, DoubleReflectionIsIdentity) {
  const HeatPotentialSolver s(kModel, kLevel, 0.5);
  const auto path = s.path().reflected().reflected();
  const auto p = s.params(0.1).reflected().reflected();
  const auto g = s.grid();
  const auto A = hwb::assemble_second_kind(g, hwb::make_hp_kernel(path, g), 1.0);
  std::vector<double> rhs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = 2.0 * hwb::boundary_phi(p, path, g.nodes[i]);
  hwb::DensitySolution d{g, A.solve(rhs), std::nullopt};
  const double tau = s.transform().horizon();
  const double u = hwb::evaluate_u(d, p, path, kModel.r0, tau);
  EXPECT_NEAR(u, s.price(0.1).price, 1e-12);
}

TEST(HpPricer, DeltaMatchesBumpAndReprice) {
  for (double K : {0.06, 0.1, 0.3}) {
    const double h = 1e-4;
    auto up = kModel;
    auto dn = kModel;
    up.r0 += h;
    dn.r0 -= h;
    const double bump =
        (hwb::price_hp(up, kLevel, 0.5, K).price - hwb::price_hp(dn, kLevel, 0.5, K).price) / (2 * h);
    EXPECT_LE(oracle::rel(hwb::delta_hp(kModel, kLevel, 0.5, K), bump), 5e-3) << "K=" << K;
  }
  EXPECT_EQ(hwb::delta_hp(kModel, kLevel, 0.5, 0.85), 0.0);
}

TEST(HpPricer, FarBarrierDeltaMatchesVanillaDelta) {
  const double h = 1e-4;
  auto up = kModel;
  auto dn = kModel;
  up.r0 += h;
  dn.r0 -= h;
  const double bump =
      (hwb::vanilla_price(up, 1.0, 0.3) - hwb::vanilla_price(dn, 1.0, 0.3)) / (2 * h);
  EXPECT_LE(oracle::rel(hwb::delta_hp(kModel, 2.5, 1.0, 0.3), bump), 5e-3);
  EXPECT_LE(oracle::rel(hwb::vanilla_delta(kModel, 1.0, 0.3), bump), 1e-6);
}

TEST(HpPricer, PriceVanishesLinearlyAtBarrier) {
  const double L0 = hwb::barrier_to_rate(kModel, kLevel, 0.0, 7.0);
  double prev_ratio = 0.0;
  for (double eps : {1e-3, 5e-4}) {
    auto m = kModel;
    m.r0 = L0 + eps;
    const double p = hwb::price_hp(m, kLevel, 0.5, 0.1).price;
    EXPECT_GT(p, 0.0);
    const double ratio = p / eps;
    if (prev_ratio > 0.0) EXPECT_LE(oracle::rel(ratio, prev_ratio), 0.05);
    prev_ratio = ratio;
  }
}

TEST(HpPricer, PlainTrapezoidRuleConvergesToSameLimit) {
  const double a = hwb::price_hp(kModel, kLevel, 0.5, 0.1, {400, hwb::QuadratureRule::kTrapezoid}).price;
  EXPECT_LE(oracle::rel(a, kRefT05K01), 0.03);
}

}  // namespace
