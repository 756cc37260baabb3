#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "hwbarrier/erf_convolution.hpp"
#include "hwbarrier/heat_transform.hpp"
#include "hwbarrier/hw_model.hpp"
#include "hwbarrier/volterra.hpp"

namespace hwb {

struct PricingOptions {
  std::size_t steps = 20;  // Volterra steps M (M + 1 nodes)
  QuadratureRule rule = QuadratureRule::kProductTrapezoid;
};

struct PriceResult {
  double price = 0.0;
  bool knocked_out = false;  // r0 already outside the alive region
};

// Prices indexed [maturity][strike].
struct PriceGrid {
  std::vector<double> strikes;
  std::vector<double> maturities;
  std::vector<std::vector<PriceResult>> values;
};

// phi(tau) = -G(y(tau), tau), G the free-space Gaussian convolution of the
// initial datum. At tau = 0 this is -u(y(0)+, 0) / 2.
double boundary_phi(const ErfConvolutionParams& params, const BarrierPath& y, double tau);

// u(x,tau) = 1/(4 sqrt(pi)) int_0^tau Psi(k) (x - y(k))/(tau - k)^{3/2} e^{-(x-y(k))^2/(4(tau-k))} dk
//            + G(x, tau)
// with Psi linear between nodes. On x == y(tau) the limiting value from the
// alive side is returned (jump Psi(tau)/2). DomainError for x < y(tau).
double evaluate_u(const DensitySolution& density, const ErfConvolutionParams& params,
                  const BarrierPath& y, double x, double tau);
// du/dx for x > y(tau).
double evaluate_u_dx(const DensitySolution& density, const ErfConvolutionParams& params,
                     const BarrierPath& y, double x, double tau);

// Down-and-out call on the bond F(., T, S): alive while r >= L(t), the rate
// image of the bond level `barrier_level`. Everything that does not depend on
// the strike (transform, heat boundary, kernel matrix) is built once, so one
// solver serves any number of strikes. Immutable after construction.
class HeatPotentialSolver {
 public:
  HeatPotentialSolver(const HullWhiteModel& model, double barrier_level, double maturity,
                      PricingOptions options = {});

  const HeatTransform& transform() const { return *transform_; }
  const BarrierPath& path() const { return path_; }
  const VolterraGrid& grid() const { return grid_; }
  double barrier_level() const { return level_; }
  // r0 <= L(0).
  bool knocked_out() const;

  ErfConvolutionParams params(double strike) const;
  std::vector<double> rhs(const ErfConvolutionParams& params) const;  // 2 phi(tau_i)
  DensitySolution solve_density(double strike) const;

  PriceResult price(double strike) const;
  std::vector<PriceResult> price(std::span<const double> strikes) const;
  // dC/dr at (r0, 0).
  double delta(double strike) const;

 private:
  HullWhiteModel model_;
  double level_ = 0.0;
  PricingOptions options_;
  std::shared_ptr<const HeatTransform> transform_;
  BarrierPath path_;
  VolterraGrid grid_;
  LowerTriangularSystem matrix_;
};

DensitySolution solve_density(const HullWhiteModel& model, double barrier_level, double maturity,
                              double strike, PricingOptions options = {});

PriceResult price_hp(const HullWhiteModel& model, double barrier_level, double maturity,
                     double strike, PricingOptions options = {});

// One solver per maturity, all strikes against its matrix.
PriceGrid price_surface(const HullWhiteModel& model, double barrier_level,
                        std::span<const double> strikes, std::span<const double> maturities,
                        PricingOptions options = {});

// Barrier-free call on the bond in closed form.
double vanilla_price(const HullWhiteModel& model, double maturity, double strike);
// d/dr0 of vanilla_price.
double vanilla_delta(const HullWhiteModel& model, double maturity, double strike);

// vanilla - down-and-out.
PriceResult down_and_in_price(const HullWhiteModel& model, double barrier_level, double maturity,
                              double strike, PricingOptions options = {});

// Up-and-out call: alive while r <= U(t), the rate image of `barrier_level`
// (bond prices above the level). Solved as a down-and-out problem in the
// reflected coordinate -x.
PriceResult up_and_out_price(const HullWhiteModel& model, double barrier_level, double maturity,
                             double strike, PricingOptions options = {});

double delta_hp(const HullWhiteModel& model, double barrier_level, double maturity, double strike,
                PricingOptions options = {});

}  // namespace hwb
