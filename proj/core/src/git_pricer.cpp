#include "hwbarrier/git_pricer.hpp"

#include <algorithm>
#include <cmath>

#include "hwbarrier/errors.hpp"
#include "hwbarrier/numerics.hpp"

namespace hwb {

namespace {

constexpr double kQuadTol = 1e-10;

double interp_nodes(const VolterraGrid& grid, const std::vector<double>& v, double tau) {
  const auto& t = grid.nodes;
  if (tau <= t.front()) return v.front();
  if (tau >= t.back()) return v.back();
  const auto it = std::upper_bound(t.begin(), t.end(), tau);
  const std::size_t j = static_cast<std::size_t>(it - t.begin()) - 1;
  const double w = (tau - t[j]) / (t[j + 1] - t[j]);
  return (1.0 - w) * v[j] + w * v[j + 1];
}

// Integrates f over [0, tau] split at the grid nodes.
template <class F>
double integrate_cells(const VolterraGrid& grid, double tau, F f) {
  const auto& nodes = grid.nodes;
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size() && nodes[j] < tau; ++j)
    sum += numerics::tanh_sinh(f, nodes[j], std::min(nodes[j + 1], tau), kQuadTol);
  return sum;
}

}  // namespace

double GradientSolution::remainder(double tau) const {
  return interp_nodes(grid, remainder_values, tau);
}

double GradientSolution::upsilon(double tau) const {
  return remainder(tau) + free_term(params, path, tau);
}

double free_term(const ErfConvolutionParams& params, const BarrierPath& y, double tau) {
  if (params.empty()) return 0.0;
  if (tau < 0.0) throw DomainError("free_term: tau must be >= 0");
  if (tau == 0.0) {
    const double y0 = y(0.0);
    if (params.initial_value(std::nextafter(y0, HUGE_VAL)) != 0.0)
      throw SingularityError("free_term: unbounded at tau = 0 for a payoff nonzero at the barrier");
    // -du/dx at the boundary, one-sided from the alive side.
    const double h = 1e-7 * std::max(1.0, std::abs(y0));
    return -(params.initial_value(y0 + h) - params.initial_value(y0)) / h;
  }
  return -2.0 * gaussian_convolution_dx(params, y(tau), tau);
}

double evaluate_u_git(const GradientSolution& grad, double x, double tau) {
  const BarrierPath& y = grad.path;
  const double yt = y(tau);
  if (x < yt) throw DomainError("evaluate_u_git: point below the boundary");
  const double image = gaussian_convolution(grad.params, x, tau) -
                       gaussian_convolution(grad.params, 2.0 * yt - x, tau);
  if (tau == 0.0) return image;
  auto f = [&](double s) {
    const double gap = tau - s;
    if (!(gap > 0.0) || !(s > 0.0)) return 0.0;
    const double ys = y(s);
    const double a = x - ys;
    // With b = x - 2 yt + ys, b^2 - a^2 = -4 (x - yt)(yt - ys), so
    // e^{-a^2/4g} - e^{-b^2/4g} = -e^{-a^2/4g} expm1((x - yt)(yt - ys)/g).
    const double diff =
        -std::exp(-a * a / (4.0 * gap)) * std::expm1((x - yt) * (yt - ys) / gap);
    return grad.upsilon(s) / std::sqrt(gap) * diff;
  };
  const double layer = integrate_cells(grad.grid, tau, f);
  return layer / (2.0 * numerics::kSqrtPi) + image;
}

// ---------------------------------------------------------------------------

GradientSolver::GradientSolver(const HullWhiteModel& model, double barrier_level,
                               double maturity, PricingOptions options)
    : model_(model),
      level_(barrier_level),
      options_(options),
      transform_(std::make_shared<const HeatTransform>(model, maturity)),
      path_(BarrierPath::from_bond_level(*transform_, barrier_level)),
      grid_(VolterraGrid::uniform(transform_->horizon(), options.steps)),
      matrix_(assemble_second_kind(grid_, make_hp_kernel(path_, grid_), -1.0, options.rule)) {}

bool GradientSolver::knocked_out() const {
  return !(model_.r0 > transform_->rate_barrier(level_, 0.0));
}

ErfConvolutionParams GradientSolver::params(double strike) const {
  if (!(strike > 0.0)) throw DomainError("strike must be > 0");
  return make_call_params(*transform_, strike, path_(0.0));
}

GradientSolution GradientSolver::solve_gradient(double strike) const {
  GradientSolution g{grid_, std::vector<double>(grid_.size(), 0.0), params(strike), path_};
  if (g.params.empty()) return g;
  // W - c int W H = c int free H, c = 1/(2 sqrt(pi)).
  const double c = 0.5 / numerics::kSqrtPi;
  std::vector<double> rhs(grid_.size(), 0.0);
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    const double tau = grid_.nodes[i];
    auto f = [&](double s) {
      const double gap = tau - s;
      if (!(gap > 0.0) || !(s > 0.0)) return 0.0;
      return free_term(g.params, path_, s) * kernel_hp_regular(path_, tau, s) / std::sqrt(gap);
    };
    rhs[i] = c * integrate_cells(grid_, tau, f);
  }
  g.remainder_values = matrix_.solve(rhs);
  return g;
}

PriceResult GradientSolver::price(double strike) const {
  if (knocked_out()) return {0.0, true};
  const auto g = solve_gradient(strike);
  if (g.params.empty()) return {0.0, false};
  const HeatPoint h = transform_->to_heat(model_.r0, 0.0);
  return {transform_->from_heat(evaluate_u_git(g, h.x, h.tau), model_.r0, 0.0), false};
}

std::vector<PriceResult> GradientSolver::price(std::span<const double> strikes) const {
  std::vector<PriceResult> out;
  out.reserve(strikes.size());
  for (double k : strikes) out.push_back(price(k));
  return out;
}

GradientSolution solve_gradient(const HullWhiteModel& model, double barrier_level,
                                double maturity, double strike, PricingOptions options) {
  return GradientSolver(model, barrier_level, maturity, options).solve_gradient(strike);
}

PriceResult price_git(const HullWhiteModel& model, double barrier_level, double maturity,
                      double strike, PricingOptions options) {
  return GradientSolver(model, barrier_level, maturity, options).price(strike);
}

}  // namespace hwb
