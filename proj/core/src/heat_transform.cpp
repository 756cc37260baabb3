#include "hwbarrier/heat_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "hwbarrier/errors.hpp"

namespace hwb {

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>>;

}  // namespace

HeatTransform::HeatTransform(const HullWhiteModel& model, double maturity, std::size_t cells)
    : model_(model), maturity_(maturity) {
  if (!(maturity > 0.0)) throw ConfigError("heat transform: maturity T must be > 0");
  if (!(maturity <= model.bond_maturity)) {
    throw ConfigError("heat transform: option maturity T must not exceed bond maturity S");
  }
  const double S = model.bond_maturity;
  const auto& m = model_;

  beta_ = numerics::CumulativeTable([this](double q) { return beta_dt(q); }, 0.0, maturity, cells);
  xi_ = numerics::CumulativeTable([this](double q) { return xi_dt(q); }, 0.0, maturity, cells);
  half_var_ = numerics::CumulativeTable([this](double q) { return -tau_dt(q); }, 0.0, maturity,
                                        cells);
  log_a_ = numerics::CumulativeTable([&m, S](double q) { return bond_log_A_dt(m, q, S); }, 0.0,
                                     maturity, cells, hwb::bond_log_A(m, 0.0, S));
  horizon_ = half_var_.back();
}

double HeatTransform::psi(double t) const { return std::exp(model_.kappa0 * t); }

double HeatTransform::alpha(double t) const {
  const double k = model_.kappa0;
  if (k == 0.0) return t;
  return std::expm1(k * t) / k;
}

double HeatTransform::psi_dt(double t) const { return model_.kappa(t) * psi(t); }

double HeatTransform::alpha_dt(double t) const { return model_.kappa(t) * alpha(t) + 1.0; }

double HeatTransform::beta_dt(double t) const {
  const double a = alpha(t);
  const double s = model_.sigma(t);
  return -0.5 * a * (2.0 * model_.kappa(t) * model_.theta(t) + s * s * a);
}

double HeatTransform::xi_dt(double t) const {
  const double s = model_.sigma(t);
  return -(model_.kappa(t) * model_.theta(t) + s * s * alpha(t)) * psi(t);
}

double HeatTransform::tau_dt(double t) const {
  const double s = model_.sigma(t) * psi(t);
  return -0.5 * s * s;
}

double HeatTransform::tau_of_t(double t) const { return horizon_ - half_var_(t); }

double HeatTransform::t_of_tau(double tau) const {
  const double slack = 1e-13 * std::max(1.0, horizon_);
  if (tau < -slack || tau > horizon_ + slack) {
    throw RangeError("t_of_tau: heat time outside [0, tau(0)]");
  }
  if (tau <= 0.0) return maturity_;
  if (tau >= horizon_) return 0.0;
  const double target = horizon_ - tau;  // half_var(t) = target, half_var increasing
  const auto values = half_var_.nodes_values();
  const std::size_t cells = values.size() - 1;
  const double dx = maturity_ / static_cast<double>(cells);
  const auto it = std::upper_bound(values.begin(), values.end(), target);
  std::size_t cell = static_cast<std::size_t>(std::distance(values.begin(), it));
  cell = std::clamp<std::size_t>(cell, 1, cells) - 1;
  double lo = dx * static_cast<double>(cell);
  double hi = (cell + 1 == cells) ? maturity_ : lo + dx;
  auto f = [&](double t) { return half_var_(t) - target; };
  double flo = f(lo);
  double fhi = f(hi);
  if (flo >= 0.0) return lo;
  if (fhi <= 0.0) return hi;
  boost::uintmax_t iters = 100;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

double HeatTransform::bond_B(double t) const { return hwb::bond_B(model_, t, model_.bond_maturity); }

double HeatTransform::rate_barrier(double level, double t) const {
  if (!(level > 0.0)) throw DomainError("rate_barrier: bond barrier level must be > 0");
  const double b = bond_B(t);
  if (b == 0.0) throw SingularityError("rate_barrier: B(t,S) = 0");
  return (std::log(level) - bond_log_A(t)) / b;
}

double HeatTransform::rate_barrier_dt(double level, double t) const {
  const double b = bond_B(t);
  const double l = rate_barrier(level, t);
  const double b_dt = hwb::bond_B_dt(model_, t, model_.bond_maturity);
  return -(log_a_.derivative(t) + l * b_dt) / b;
}

HeatPoint HeatTransform::to_heat(double r, double t) const {
  if (t < 0.0 || t > maturity_) throw DomainError("to_heat: t outside [0, T]");
  return {r * psi(t) + xi(t), tau_of_t(t)};
}

double HeatTransform::from_heat(double u_value, double r, double t) const {
  if (u_value == 0.0) return 0.0;
  return std::exp(alpha(t) * r + beta(t)) * u_value;
}

double HeatTransform::bond_in_heat(double x) const {
  const double T = maturity_;
  return std::exp(log_a_.back() + bond_B(T) / psi(T) * (x - xi_.back()));
}

double HeatTransform::initial_condition(double strike, double x) const {
  const double payoff = bond_in_heat(x) - strike;
  if (payoff <= 0.0) return 0.0;
  const double T = maturity_;
  return std::exp(-alpha(T) / psi(T) * (x - xi_.back()) - beta_.back()) * payoff;
}

HeatTransform build_transform(const HullWhiteModel& model, double maturity) {
  return HeatTransform(model, maturity);
}

double t_of_tau(const HeatTransform& tr, double tau) { return tr.t_of_tau(tau); }

HeatPoint to_heat(const HeatTransform& tr, double r, double t) { return tr.to_heat(r, t); }

double from_heat(const HeatTransform& tr, double u_value, double r, double t) {
  return tr.from_heat(u_value, r, t);
}

double initial_condition(const HeatTransform& tr, double strike, double x) {
  return tr.initial_condition(strike, x);
}

// ---------------------------------------------------------------------------

BarrierPath BarrierPath::from_bond_level(const HeatTransform& tr, double level, std::size_t cells) {
  if (!(level > 0.0)) throw DomainError("barrier path: bond barrier level must be > 0");
  if (cells < 2) cells = 2;
  const double horizon = tr.horizon();
  const double dtau = horizon / static_cast<double>(cells);
  std::vector<double> y(cells + 1);
  std::vector<double> dy(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    const double tau = (j == cells) ? horizon : dtau * static_cast<double>(j);
    const double t = tr.t_of_tau(tau);
    const double l = tr.rate_barrier(level, t);
    const double dy_dt = tr.rate_barrier_dt(level, t) * tr.psi(t) + l * tr.psi_dt(t) + tr.xi_dt(t);
    y[j] = l * tr.psi(t) + tr.xi(t);
    dy[j] = dy_dt / tr.tau_dt(t);
  }
  const double y_end = y.back();
  const double dy_end = dy.back();
  auto spline = std::make_shared<Spline>(std::move(y), std::move(dy), 0.0, dtau);
  auto value = [spline, horizon, y_end](double tau) {
    if (tau >= horizon) return y_end;
    return (*spline)(std::max(tau, 0.0));
  };
  auto slope = [spline, horizon, dy_end](double tau) {
    if (tau >= horizon) return dy_end;
    return spline->prime(std::max(tau, 0.0));
  };
  return BarrierPath(value, slope, horizon, 1.0);
}

BarrierPath BarrierPath::from_functions(std::function<double(double)> y,
                                        std::function<double(double)> slope, double horizon) {
  if (!(horizon > 0.0)) throw DomainError("barrier path: horizon must be > 0");
  return BarrierPath(std::move(y), std::move(slope), horizon, 1.0);
}

BarrierPath BarrierPath::linear(double a, double b, double horizon) {
  return from_functions([a, b](double tau) { return a + b * tau; }, [b](double) { return b; },
                        horizon);
}

BarrierPath BarrierPath::reflected() const { return BarrierPath(y_, slope_, horizon_, -sign_); }

// ---------------------------------------------------------------------------

ReductionReport verify_reduction(const HeatTransform& tr, const HeatField& field, double r_lo,
                                 double r_hi) {
  const double horizon = tr.horizon();
  const double x_center = 0.5 * (r_lo + r_hi);
  const HeatField gaussian = [horizon, x_center](double x, double tau) {
    const double w = tau + horizon;
    const double d = x - x_center;
    return std::exp(-d * d / (4.0 * w)) / std::sqrt(w);
  };
  const HeatField& u = field ? field : gaussian;
  const auto& m = tr.model();
  const double T = tr.maturity();

  auto price = [&](double r, double t) {
    const HeatPoint p = tr.to_heat(r, t);
    return std::exp(tr.alpha(t) * r + tr.beta(t)) * u(p.x, p.tau);
  };

  constexpr int kPoints = 11;
  const double hr = 1e-3;
  const double ht = 1e-3 * T;
  ReductionReport report;
  for (int i = 0; i < kPoints; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / (kPoints - 1);
    for (int j = 0; j < kPoints; ++j) {
      const double t = T * (0.1 + 0.8 * j / (kPoints - 1));
      const double c0 = price(r, t);
      const double crp = price(r + hr, t), crm = price(r - hr, t);
      const double crp2 = price(r + 2 * hr, t), crm2 = price(r - 2 * hr, t);
      const double ctp = price(r, t + ht), ctm = price(r, t - ht);
      const double ctp2 = price(r, t + 2 * ht), ctm2 = price(r, t - 2 * ht);
      const double c_r = (-crp2 + 8 * crp - 8 * crm + crm2) / (12 * hr);
      const double c_rr = (-crp2 + 16 * crp - 30 * c0 + 16 * crm - crm2) / (12 * hr * hr);
      const double c_t = (-ctp2 + 8 * ctp - 8 * ctm + ctm2) / (12 * ht);
      const double sg = m.sigma(t);
      const double diffusion = 0.5 * sg * sg * c_rr;
      const double drift = m.kappa(t) * (m.theta(t) - r) * c_r;
      const double discount = r * c0;
      const double residual = c_t + diffusion + drift - discount;
      const double scale = std::abs(c_t) + std::abs(diffusion) + std::abs(drift) + std::abs(discount);
      report.max_abs_residual = std::max(report.max_abs_residual, std::abs(residual));
      if (scale > 0.0) {
        report.max_relative_residual =
            std::max(report.max_relative_residual, std::abs(residual) / scale);
      }
      ++report.points;
    }
  }
  return report;
}

}  // namespace hwb
