#pragma once

#include <utility>

#include "hwbarrier/erf_convolution.hpp"
#include "hwbarrier/heat_transform.hpp"
#include "hwbarrier/hp_pricer.hpp"
#include "hwbarrier/volterra.hpp"

namespace hwb {

// Heat problem between a lower boundary y(tau) and an upper boundary z(tau),
// initial data supported on [y(0), z(0)].
struct DoubleBarrierProblem {
  BarrierPath y;
  BarrierPath z;
  ErfConvolutionParams params;
  double tau0 = 0.0;
};

// Builds the problem for a call with strike K alive while L(t) < r < H(t),
// where L and H are the rate images of the bond levels lf > hf.
DoubleBarrierProblem make_double_problem(const HeatTransform& tr, double lower_level,
                                         double upper_level, double strike);

// (phi2, psi2) = (-G(y(tau), tau), -G(z(tau), tau)) for the truncated data.
std::pair<double, double> boundary_pair(const DoubleBarrierProblem& problem, double tau);

// Densities Psi on y (psi_values) and Phi on z (phi_values) of
//   u = 1/(4 sqrt(pi)) int Psi(k) (x - y(k))/(tau-k)^{3/2} e^{..} dk
//     + 1/(4 sqrt(pi)) int Phi(k) (x - z(k))/(tau-k)^{3/2} e^{..} dk + G.
DensitySolution solve_densities(const DoubleBarrierProblem& problem, std::size_t steps,
                                QuadratureRule rule = QuadratureRule::kProductTrapezoid);

// u(x,tau) for y(tau) <= x <= z(tau), one-sided limits on the boundaries.
double evaluate_u_double(const DensitySolution& densities, const DoubleBarrierProblem& problem,
                         double x, double tau);

PriceResult price_double(const HullWhiteModel& model, double lower_level, double upper_level,
                         double maturity, double strike, PricingOptions options = {});

}  // namespace hwb
