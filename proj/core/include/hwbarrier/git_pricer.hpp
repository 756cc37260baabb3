#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hwbarrier/erf_convolution.hpp"
#include "hwbarrier/heat_transform.hpp"
#include "hwbarrier/hp_pricer.hpp"
#include "hwbarrier/volterra.hpp"

namespace hwb {

// Boundary gradient Upsilon(tau) = -du/dx at x = y(tau), stored as the
// smooth remainder W = Upsilon - free_term on the grid. free_term is kept
// analytic because it blows up like tau^{-1/2} whenever the payoff is
// nonzero at the barrier.
struct GradientSolution {
  VolterraGrid grid;
  std::vector<double> remainder_values;  // W at the nodes, W(0) = 0
  ErfConvolutionParams params;
  BarrierPath path;

  // Upsilon(tau) for tau > 0.
  double upsilon(double tau) const;
  double remainder(double tau) const;
};

// 1/(2 sqrt(pi tau^3)) int u(z,0) (y(tau) - z) e^{-(z - y(tau))^2/(4 tau)} dz
// = -2 dG/dx at x = y(tau). For tau = 0 returns the limit, finite only when
// the initial datum vanishes at the boundary.
double free_term(const ErfConvolutionParams& params, const BarrierPath& y, double tau);

// u(x,tau) = 1/(2 sqrt(pi)) int_0^tau Upsilon(s)/sqrt(tau-s)
//              (e^{-(x-y(s))^2/(4(tau-s))} - e^{-(x-2y(tau)+y(s))^2/(4(tau-s))}) ds
//            + G(x,tau) - G(2 y(tau) - x, tau).
// Vanishes identically at x = y(tau). DomainError for x < y(tau).
double evaluate_u_git(const GradientSolution& grad, double x, double tau);

// Down-and-out call priced through the boundary gradient. Shares the
// strike-independent setup like HeatPotentialSolver.
class GradientSolver {
 public:
  GradientSolver(const HullWhiteModel& model, double barrier_level, double maturity,
                 PricingOptions options = {});

  const HeatTransform& transform() const { return *transform_; }
  const BarrierPath& path() const { return path_; }
  const VolterraGrid& grid() const { return grid_; }
  bool knocked_out() const;

  ErfConvolutionParams params(double strike) const;
  GradientSolution solve_gradient(double strike) const;
  PriceResult price(double strike) const;
  std::vector<PriceResult> price(std::span<const double> strikes) const;

 private:
  HullWhiteModel model_;
  double level_ = 0.0;
  PricingOptions options_;
  std::shared_ptr<const HeatTransform> transform_;
  BarrierPath path_;
  VolterraGrid grid_;
  LowerTriangularSystem matrix_;
};

GradientSolution solve_gradient(const HullWhiteModel& model, double barrier_level,
                                double maturity, double strike, PricingOptions options = {});

PriceResult price_git(const HullWhiteModel& model, double barrier_level, double maturity,
                      double strike, PricingOptions options = {});

}  // namespace hwb
