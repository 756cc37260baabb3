#include "hwbarrier/hp_pricer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hwbarrier/errors.hpp"
#include "hwbarrier/numerics.hpp"

namespace hwb {

namespace {

constexpr double kQuadTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

// int_0^tau Psi(k) w(x - y(k), tau - k) dk with Psi piecewise linear; one
// adaptive rule per grid cell so the integrand is smooth inside each.
template <class Weight>
double potential_integral(const DensitySolution& density, const BarrierPath& y, double x,
                          double tau, Weight weight) {
  const auto& nodes = density.grid.nodes;
  const auto& values = density.psi_values;
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size() && nodes[j] < tau; ++j) {
    const double lo = nodes[j];
    const double hi = std::min(nodes[j + 1], tau);
    const double f0 = values[j];
    const double slope = (values[j + 1] - values[j]) / (nodes[j + 1] - nodes[j]);
    if (f0 == 0.0 && slope == 0.0) continue;
    auto f = [&](double k) {
      const double gap = tau - k;
      if (!(gap > 0.0)) return 0.0;
      return (f0 + slope * (k - lo)) * weight(x - y(k), gap);
    };
    sum += numerics::tanh_sinh(f, lo, hi, kQuadTol);
  }
  return sum;
}

double layer_weight(double d, double gap) {
  return d / (gap * std::sqrt(gap)) * std::exp(-d * d / (4.0 * gap));
}

double layer_weight_dx(double d, double gap) {
  const double s32 = gap * std::sqrt(gap);
  return (1.0 / s32 - d * d / (2.0 * gap * s32)) * std::exp(-d * d / (4.0 * gap));
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return a == 0.0; });
}

void check_strike(double strike) {
  if (!(strike > 0.0)) throw DomainError("strike must be > 0");
}

// Single-boundary heat-potential problem on a prepared boundary and matrix.
struct SingleBoundary {
  const BarrierPath& path;
  const VolterraGrid& grid;
  const LowerTriangularSystem& matrix;

  std::vector<double> rhs(const ErfConvolutionParams& p) const {
    std::vector<double> b(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      b[i] = 2.0 * boundary_phi(p, path, grid.nodes[i]);
    return b;
  }

  DensitySolution solve(const ErfConvolutionParams& p) const {
    DensitySolution d;
    d.grid = grid;
    auto b = rhs(p);
    d.psi_values = all_zero(b) ? b : matrix.solve(b);
    return d;
  }
};

}  // namespace

double boundary_phi(const ErfConvolutionParams& params, const BarrierPath& y, double tau) {
  if (tau < 0.0) throw DomainError("boundary_phi: tau must be >= 0");
  if (tau == 0.0) {
    // Half of the one-sided limit of the initial datum at the boundary.
    const double y0 = y(0.0);
    const double edge = (params.lower <= y0 && y0 < params.upper)
                            ? params.initial_value(std::nextafter(y0, kInf))
                            : 0.0;
    return -0.5 * edge;
  }
  return -gaussian_convolution(params, y(tau), tau);
}

double evaluate_u(const DensitySolution& density, const ErfConvolutionParams& params,
                  const BarrierPath& y, double x, double tau) {
  const double yt = y(tau);
  if (x < yt) throw DomainError("evaluate_u: point below the boundary");
  const double g = gaussian_convolution(params, x, tau);
  if (tau == 0.0) return g;
  const double layer = potential_integral(density, y, x, tau, layer_weight);
  double u = layer / (4.0 * numerics::kSqrtPi) + g;
  if (x == yt) u += 0.5 * density.psi(tau);
  return u;
}

double evaluate_u_dx(const DensitySolution& density, const ErfConvolutionParams& params,
                     const BarrierPath& y, double x, double tau) {
  if (!(x > y(tau))) throw DomainError("evaluate_u_dx: point must lie above the boundary");
  if (!(tau > 0.0)) throw DomainError("evaluate_u_dx: tau must be > 0");
  const double layer = potential_integral(density, y, x, tau, layer_weight_dx);
  return layer / (4.0 * numerics::kSqrtPi) + gaussian_convolution_dx(params, x, tau);
}

// ---------------------------------------------------------------------------

HeatPotentialSolver::HeatPotentialSolver(const HullWhiteModel& model, double barrier_level,
                                         double maturity, PricingOptions options)
    : model_(model),
      level_(barrier_level),
      options_(options),
      transform_(std::make_shared<const HeatTransform>(model, maturity)),
      path_(BarrierPath::from_bond_level(*transform_, barrier_level)),
      grid_(VolterraGrid::uniform(transform_->horizon(), options.steps)),
      matrix_(assemble_second_kind(grid_, make_hp_kernel(path_, grid_), 1.0, options.rule)) {}

bool HeatPotentialSolver::knocked_out() const {
  return !(model_.r0 > transform_->rate_barrier(level_, 0.0));
}

ErfConvolutionParams HeatPotentialSolver::params(double strike) const {
  return make_call_params(*transform_, strike, path_(0.0));
}

std::vector<double> HeatPotentialSolver::rhs(const ErfConvolutionParams& p) const {
  return SingleBoundary{path_, grid_, matrix_}.rhs(p);
}

DensitySolution HeatPotentialSolver::solve_density(double strike) const {
  check_strike(strike);
  return SingleBoundary{path_, grid_, matrix_}.solve(params(strike));
}

PriceResult HeatPotentialSolver::price(double strike) const {
  check_strike(strike);
  if (knocked_out()) return {0.0, true};
  const auto p = params(strike);
  if (p.empty()) return {0.0, false};
  const auto density = SingleBoundary{path_, grid_, matrix_}.solve(p);
  const HeatPoint h = transform_->to_heat(model_.r0, 0.0);
  const double u = evaluate_u(density, p, path_, h.x, h.tau);
  return {transform_->from_heat(u, model_.r0, 0.0), false};
}

std::vector<PriceResult> HeatPotentialSolver::price(std::span<const double> strikes) const {
  std::vector<PriceResult> out;
  out.reserve(strikes.size());
  for (double k : strikes) out.push_back(price(k));
  return out;
}

double HeatPotentialSolver::delta(double strike) const {
  check_strike(strike);
  if (knocked_out()) return 0.0;
  const auto p = params(strike);
  if (p.empty()) return 0.0;
  const auto density = SingleBoundary{path_, grid_, matrix_}.solve(p);
  const HeatTransform& tr = *transform_;
  const double r0 = model_.r0;
  const HeatPoint h = tr.to_heat(r0, 0.0);
  const double u = evaluate_u(density, p, path_, h.x, h.tau);
  const double ux = evaluate_u_dx(density, p, path_, h.x, h.tau);
  return std::exp(tr.alpha(0.0) * r0 + tr.beta(0.0)) * (tr.alpha(0.0) * u + tr.psi(0.0) * ux);
}

// ---------------------------------------------------------------------------

DensitySolution solve_density(const HullWhiteModel& model, double barrier_level, double maturity,
                              double strike, PricingOptions options) {
  return HeatPotentialSolver(model, barrier_level, maturity, options).solve_density(strike);
}

PriceResult price_hp(const HullWhiteModel& model, double barrier_level, double maturity,
                     double strike, PricingOptions options) {
  return HeatPotentialSolver(model, barrier_level, maturity, options).price(strike);
}

PriceGrid price_surface(const HullWhiteModel& model, double barrier_level,
                        std::span<const double> strikes, std::span<const double> maturities,
                        PricingOptions options) {
  if (strikes.empty() || maturities.empty())
    throw ConfigError("price_surface: strikes and maturities must be nonempty");
  PriceGrid grid;
  grid.strikes.assign(strikes.begin(), strikes.end());
  grid.maturities.assign(maturities.begin(), maturities.end());
  for (double T : maturities)
    grid.values.push_back(HeatPotentialSolver(model, barrier_level, T, options).price(strikes));
  return grid;
}

double vanilla_price(const HullWhiteModel& model, double maturity, double strike) {
  check_strike(strike);
  const HeatTransform tr(model, maturity);
  const auto p = make_call_params(tr, strike, -kInf);
  const HeatPoint h = tr.to_heat(model.r0, 0.0);
  return tr.from_heat(gaussian_convolution(p, h.x, h.tau), model.r0, 0.0);
}

double vanilla_delta(const HullWhiteModel& model, double maturity, double strike) {
  check_strike(strike);
  const HeatTransform tr(model, maturity);
  const auto p = make_call_params(tr, strike, -kInf);
  const double r0 = model.r0;
  const HeatPoint h = tr.to_heat(r0, 0.0);
  const double u = gaussian_convolution(p, h.x, h.tau);
  const double ux = gaussian_convolution_dx(p, h.x, h.tau);
  return std::exp(tr.alpha(0.0) * r0 + tr.beta(0.0)) * (tr.alpha(0.0) * u + tr.psi(0.0) * ux);
}

PriceResult down_and_in_price(const HullWhiteModel& model, double barrier_level, double maturity,
                              double strike, PricingOptions options) {
  const double van = vanilla_price(model, maturity, strike);
  const PriceResult out = price_hp(model, barrier_level, maturity, strike, options);
  return {van - out.price, false};
}

PriceResult up_and_out_price(const HullWhiteModel& model, double barrier_level, double maturity,
                             double strike, PricingOptions options) {
  check_strike(strike);
  const HeatTransform tr(model, maturity);
  if (!(model.r0 < tr.rate_barrier(barrier_level, 0.0))) return {0.0, true};
  const BarrierPath upper = BarrierPath::from_bond_level(tr, barrier_level);
  const BarrierPath path = upper.reflected();
  const auto p = make_call_params(tr, strike, -kInf, upper(0.0)).reflected();
  if (p.empty()) return {0.0, false};
  const VolterraGrid grid = VolterraGrid::uniform(tr.horizon(), options.steps);
  const auto matrix = assemble_second_kind(grid, make_hp_kernel(path, grid), 1.0, options.rule);
  const auto density = SingleBoundary{path, grid, matrix}.solve(p);
  const HeatPoint h = tr.to_heat(model.r0, 0.0);
  const double u = evaluate_u(density, p, path, -h.x, h.tau);
  return {tr.from_heat(u, model.r0, 0.0), false};
}

double delta_hp(const HullWhiteModel& model, double barrier_level, double maturity, double strike,
                PricingOptions options) {
  return HeatPotentialSolver(model, barrier_level, maturity, options).delta(strike);
}

}  // namespace hwb
