#include "hwbarrier/fd_reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "hwbarrier/errors.hpp"
#include "hwbarrier/numerics.hpp"

namespace hwb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RateBand {
  double lo = -kInf;
  double hi = kInf;
  bool alive(double r) const { return r > lo && r < hi; }
};

RateBand band_at(const HullWhiteModel& m, const FdContract& c, double t) {
  const double S = m.bond_maturity;
  RateBand b;
  if (c.lower_level) b.lo = barrier_to_rate(m, *c.lower_level, t, S);
  if (c.upper_level) b.hi = barrier_to_rate(m, *c.upper_level, t, S);
  return b;
}

// Value of the contract beyond the grid edge with no barrier there: the
// forward value of the payoff, floored at zero.
double edge_value(const HullWhiteModel& m, double r, double t, double T, double strike) {
  const double S = m.bond_maturity;
  return std::max(zcb_price(m, r, t, S) - strike * zcb_price(m, r, t, T), 0.0);
}

// Tridiagonal discretization of D C_rr + kappa (theta - r) C_r - r C at time t.
// Inactive rows are Dirichlet rows.
struct Operator {
  std::vector<double> lo;
  std::vector<double> di;
  std::vector<double> up;
  std::vector<char> active;
};

Operator build_operator(const HullWhiteModel& m, const std::vector<double>& r, double t,
                        const RateBand& band, BarrierTreatment treatment) {
  const std::size_t n = r.size();
  Operator op{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
              std::vector<double>(n, 0.0), std::vector<char>(n, 0)};
  const double d = 0.5 * m.sigma(t) * m.sigma(t);
  const double kappa = m.kappa(t);
  const double theta = m.theta(t);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!band.alive(r[i])) continue;
    double hm = r[i] - r[i - 1];
    double hp = r[i + 1] - r[i];
    bool drop_lo = false;
    bool drop_up = false;
    if (treatment == BarrierTreatment::kEmbedded) {
      if (band.lo >= r[i - 1]) {
        hm = r[i] - band.lo;
        drop_lo = true;
      }
      if (band.hi <= r[i + 1]) {
        hp = band.hi - r[i];
        drop_up = true;
      }
    }
    const double c = kappa * (theta - r[i]);
    const double s = hm + hp;
    op.lo[i] = drop_lo ? 0.0 : 2.0 * d / (hm * s) - c * hp / (hm * s);
    op.up[i] = drop_up ? 0.0 : 2.0 * d / (hp * s) + c * hm / (hp * s);
    op.di[i] = -2.0 * d / (hm * hp) + c * (hp - hm) / (hm * hp) - r[i];
    op.active[i] = 1;
  }
  return op;
}

class BackwardSolver {
 public:
  BackwardSolver(const HullWhiteModel& m, const FdContract& c, double T, double strike,
                 const FdGrid& g, BarrierTreatment treatment)
      : m_(m), c_(c), T_(T), strike_(strike), g_(g), treatment_(treatment) {}

  std::vector<double> run() const {
    std::vector<double> v = terminal();
    const auto& t = g_.t_nodes;
    const std::size_t damped = (g_.n_rannacher + 1) / 2;
    std::size_t done = 0;
    for (std::size_t k = t.size() - 1; k > 0; --k, ++done) {
      const double t1 = t[k];
      const double t0 = t[k - 1];
      if (done < damped) {
        const double tm = 0.5 * (t0 + t1);
        step(v, tm, t1, 1.0);
        step(v, t0, tm, 1.0);
      } else {
        step(v, t0, t1, 0.5);
      }
    }
    return v;
  }

  std::vector<double> terminal() const {
    const auto& r = g_.r_nodes;
    std::vector<double> v(r.size(), 0.0);
    const RateBand end = band_at(m_, c_, T_);
    const double S = m_.bond_maturity;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (end.alive(r[i])) v[i] = std::max(zcb_price(m_, r[i], T_, S) - strike_, 0.0);
    set_edges(v, T_, end);
    return v;
  }

 private:
  void set_edges(std::vector<double>& v, double t, const RateBand& band) const {
    const auto& r = g_.r_nodes;
    v.front() = band.alive(r.front()) ? edge_value(m_, r.front(), t, T_, strike_) : 0.0;
    v.back() = band.alive(r.back()) ? edge_value(m_, r.back(), t, T_, strike_) : 0.0;
  }

  // One theta-step from t1 back to t0.
  void step(std::vector<double>& v, double t0, double t1, double theta) const {
    const auto& r = g_.r_nodes;
    const std::size_t n = r.size();
    const double dt = t1 - t0;
    const RateBand b1 = band_at(m_, c_, t1);
    const RateBand b0 = band_at(m_, c_, t0);
    const Operator op1 = build_operator(m_, r, t1, b1, treatment_);
    const Operator op0 = build_operator(m_, r, t0, b0, treatment_);

    std::vector<double> rhs(v);
    if (theta < 1.0) {
      for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!op1.active[i]) continue;
        const double lv = op1.lo[i] * v[i - 1] + op1.di[i] * v[i] + op1.up[i] * v[i + 1];
        rhs[i] = v[i] + (1.0 - theta) * dt * lv;
      }
    }
    std::vector<double> lower(n, 0.0);
    std::vector<double> diag(n, 1.0);
    std::vector<double> upper(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (op0.active[i]) {
        lower[i] = -theta * dt * op0.lo[i];
        diag[i] = 1.0 - theta * dt * op0.di[i];
        upper[i] = -theta * dt * op0.up[i];
      } else {
        rhs[i] = 0.0;
      }
    }
    std::vector<double> edges(n, 0.0);
    set_edges(edges, t0, b0);
    rhs.front() = edges.front();
    rhs.back() = edges.back();
    numerics::solve_tridiagonal(lower, diag, upper, rhs);
    if (treatment_ == BarrierTreatment::kProjection) {
      for (std::size_t i = 1; i + 1 < n; ++i)
        if (!b0.alive(r[i])) rhs[i] = 0.0;
    }
    v = std::move(rhs);
  }

  const HullWhiteModel& m_;
  const FdContract& c_;
  double T_;
  double strike_;
  const FdGrid& g_;
  BarrierTreatment treatment_;
};

// Value and first derivative at x of the cubic through four points.
std::pair<double, double> lagrange4(const double* xs, const double* ys, double x) {
  double value = 0.0;
  double slope = 0.0;
  for (int j = 0; j < 4; ++j) {
    double basis = 1.0;
    double dbasis = 0.0;
    for (int k = 0; k < 4; ++k) {
      if (k == j) continue;
      const double f = 1.0 / (xs[j] - xs[k]);
      dbasis = dbasis * (x - xs[k]) * f + basis * f;
      basis *= (x - xs[k]) * f;
    }
    value += ys[j] * basis;
    slope += ys[j] * dbasis;
  }
  return {value, slope};
}

}  // namespace

FdGrid make_fd_grid(const HullWhiteModel& model, const FdContract& contract, double maturity,
                    const FdOptions& options) {
  model.validate();
  if (!(maturity > 0.0 && maturity < model.bond_maturity))
    throw ConfigError("fd grid: maturity must lie in (0, S)");
  if (options.r_nodes < 5) throw ConfigError("fd grid: need at least 5 rate nodes");
  if (options.t_steps < 1) throw ConfigError("fd grid: need at least one time step");
  if (!(options.cluster_width > 0.0)) throw ConfigError("fd grid: cluster width must be > 0");

  FdGrid g;
  g.r_max = options.r_max;
  g.n_rannacher = options.n_rannacher;
  g.t_nodes.resize(options.t_steps + 1);
  for (std::size_t k = 0; k <= options.t_steps; ++k)
    g.t_nodes[k] = maturity * static_cast<double>(k) / static_cast<double>(options.t_steps);
  g.t_nodes.back() = maturity;

  double lo_min = kInf;
  double hi_max = -kInf;
  for (double t : g.t_nodes) {
    const RateBand b = band_at(model, contract, t);
    lo_min = std::min(lo_min, b.lo);
    hi_max = std::max(hi_max, b.hi);
  }
  const double r_min =
      contract.lower_level ? lo_min - options.margin : model.r0 - options.vanilla_reach;
  const double centre = contract.lower_level ? band_at(model, contract, 0.0).lo : model.r0;
  if (!(r_min < centre && centre < options.r_max))
    throw RangeError("fd grid: clustering centre outside [r_min, r_max]");
  if (contract.upper_level && !(hi_max < options.r_max))
    throw RangeError("fd grid: upper barrier leaves the grid");

  const double a = options.cluster_width;
  const double u0 = std::asinh((r_min - centre) / a);
  const double u1 = std::asinh((options.r_max - centre) / a);
  const std::size_t n = options.r_nodes;
  g.r_nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n - 1);
    g.r_nodes[i] = centre + a * std::sinh(u0 + (u1 - u0) * s);
  }
  g.r_nodes.front() = r_min;
  g.r_nodes.back() = options.r_max;
  return g;
}

std::vector<double> terminal_values(const HullWhiteModel& model, const FdContract& contract,
                                    double maturity, double strike, const FdGrid& grid) {
  return BackwardSolver(model, contract, maturity, strike, grid, BarrierTreatment::kEmbedded)
      .terminal();
}

std::vector<double> solve_backward(const HullWhiteModel& model, const FdContract& contract,
                                   double maturity, double strike, const FdGrid& grid,
                                   BarrierTreatment treatment) {
  if (strike < 0.0) throw DomainError("fd: strike must be >= 0");
  for (std::size_t i = 1; i < grid.r_nodes.size(); ++i)
    if (!(grid.r_nodes[i] > grid.r_nodes[i - 1]))
      throw ConfigError("fd grid: rate nodes must increase strictly");
  for (double t : grid.t_nodes) {
    const RateBand b = band_at(model, contract, t);
    if ((contract.lower_level && !(b.lo > grid.r_nodes.front() && b.lo < grid.r_max)) ||
        (contract.upper_level && !(b.hi > grid.r_nodes.front() && b.hi < grid.r_max)))
      throw RangeError("fd: barrier leaves the grid");
  }
  return BackwardSolver(model, contract, maturity, strike, grid, treatment).run();
}

FdResult price_fd(const HullWhiteModel& model, const FdContract& contract, double maturity,
                  double strike, const FdOptions& options) {
  const double r0 = model.r0;
  const FdGrid grid = make_fd_grid(model, contract, maturity, options);
  const RateBand band = band_at(model, contract, 0.0);
  if (!band.alive(r0)) return {0.0, 0.0, true};
  const auto v = solve_backward(model, contract, maturity, strike, grid, options.treatment);

  // Alive nodes plus the barrier points, where the value is zero.
  const auto& r = grid.r_nodes;
  std::vector<std::pair<double, double>> pts;
  if (contract.lower_level) pts.emplace_back(band.lo, 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!contract.lower_level && !contract.upper_level) {
      pts.emplace_back(r[i], v[i]);
      continue;
    }
    if (!band.alive(r[i])) continue;
    const double gap = std::min(r[i] - band.lo, band.hi - r[i]);
    if (gap < 1e-9) continue;
    pts.emplace_back(r[i], v[i]);
  }
  if (contract.upper_level) pts.emplace_back(band.hi, 0.0);
  if (pts.size() < 4) throw RangeError("fd: too few alive nodes to interpolate");

  std::size_t k = 0;
  while (k + 1 < pts.size() && pts[k + 1].first <= r0) ++k;
  const std::size_t start = std::min(k > 0 ? k - 1 : 0, pts.size() - 4);
  double xs[4];
  double ys[4];
  for (int j = 0; j < 4; ++j) {
    xs[j] = pts[start + j].first;
    ys[j] = pts[start + j].second;
  }
  const auto [value, slope] = lagrange4(xs, ys, r0);
  return {value, slope, false};
}

}  // namespace hwb
