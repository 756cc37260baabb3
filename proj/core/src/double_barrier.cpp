#include "hwbarrier/double_barrier.hpp"

#include <algorithm>
#include <cmath>

#include "hwbarrier/errors.hpp"
#include "hwbarrier/numerics.hpp"

namespace hwb {

namespace {

constexpr double kQuadTol = 1e-10;

double layer_weight(double d, double gap) {
  return d / (gap * std::sqrt(gap)) * std::exp(-d * d / (4.0 * gap));
}

double layer(const VolterraGrid& grid, const std::vector<double>& density, const BarrierPath& b,
             double x, double tau) {
  const auto& nodes = grid.nodes;
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size() && nodes[j] < tau; ++j) {
    const double lo = nodes[j];
    const double f0 = density[j];
    const double slope = (density[j + 1] - density[j]) / (nodes[j + 1] - nodes[j]);
    if (f0 == 0.0 && slope == 0.0) continue;
    auto f = [&](double k) {
      const double gap = tau - k;
      if (!(gap > 0.0)) return 0.0;
      return (f0 + slope * (k - lo)) * layer_weight(x - b(k), gap);
    };
    sum += numerics::tanh_sinh(f, lo, std::min(nodes[j + 1], tau), kQuadTol);
  }
  return sum;
}

}  // namespace

DoubleBarrierProblem make_double_problem(const HeatTransform& tr, double lower_level,
                                         double upper_level, double strike) {
  if (!(upper_level > 0.0 && upper_level < lower_level))
    throw DomainError("double barrier: need 0 < upper level < lower level");
  if (!(strike > 0.0)) throw DomainError("strike must be > 0");
  DoubleBarrierProblem p{BarrierPath::from_bond_level(tr, lower_level),
                         BarrierPath::from_bond_level(tr, upper_level), {}, tr.horizon()};
  p.params = make_call_params(tr, strike, p.y(0.0), p.z(0.0));
  return p;
}

std::pair<double, double> boundary_pair(const DoubleBarrierProblem& problem, double tau) {
  if (tau < 0.0) throw DomainError("boundary_pair: tau must be >= 0");
  if (tau == 0.0) {
    const auto& p = problem.params;
    const double y0 = problem.y(0.0);
    const double z0 = problem.z(0.0);
    const double lo = p.empty() ? 0.0 : p.initial_value(std::nextafter(y0, HUGE_VAL));
    const double hi = p.empty() ? 0.0 : p.initial_value(std::nextafter(z0, -HUGE_VAL));
    return {-0.5 * lo, -0.5 * hi};
  }
  return {-gaussian_convolution(problem.params, problem.y(tau), tau),
          -gaussian_convolution(problem.params, problem.z(tau), tau)};
}

DensitySolution solve_densities(const DoubleBarrierProblem& problem, std::size_t steps,
                                QuadratureRule rule) {
  const VolterraGrid grid = VolterraGrid::uniform(problem.tau0, steps);
  std::vector<double> rhs1(grid.size());
  std::vector<double> rhs2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [phi2, psi2] = boundary_pair(problem, grid.nodes[i]);
    rhs1[i] = 2.0 * phi2;
    rhs2[i] = 2.0 * psi2;
  }
  const BlockKernels kernels{make_hp_kernel(problem.y, grid),
                             make_cross_kernel(problem.y, problem.z, grid),
                             make_cross_kernel(problem.z, problem.y, grid),
                             make_hp_kernel(problem.z, grid)};
  return solve_block_2x2(grid, rhs1, rhs2, kernels, rule);
}

double evaluate_u_double(const DensitySolution& densities, const DoubleBarrierProblem& problem,
                         double x, double tau) {
  const double yt = problem.y(tau);
  const double zt = problem.z(tau);
  if (x < yt || x > zt) throw DomainError("evaluate_u_double: point outside the corridor");
  const double g = gaussian_convolution(problem.params, x, tau);
  if (tau == 0.0) return g;
  const auto& phi = densities.phi_values.value();
  double u = (layer(densities.grid, densities.psi_values, problem.y, x, tau) +
              layer(densities.grid, phi, problem.z, x, tau)) /
                 (4.0 * numerics::kSqrtPi) +
             g;
  if (x == yt) u += 0.5 * densities.psi(tau);
  if (x == zt) u -= 0.5 * densities.phi(tau);
  return u;
}

PriceResult price_double(const HullWhiteModel& model, double lower_level, double upper_level,
                         double maturity, double strike, PricingOptions options) {
  const HeatTransform tr(model, maturity);
  const DoubleBarrierProblem problem = make_double_problem(tr, lower_level, upper_level, strike);
  const double r0 = model.r0;
  if (!(r0 > tr.rate_barrier(lower_level, 0.0) && r0 < tr.rate_barrier(upper_level, 0.0)))
    return {0.0, true};
  if (problem.params.empty()) return {0.0, false};
  const auto densities = solve_densities(problem, options.steps, options.rule);
  const HeatPoint h = tr.to_heat(r0, 0.0);
  return {tr.from_heat(evaluate_u_double(densities, problem, h.x, h.tau), r0, 0.0), false};
}

}  // namespace hwb
