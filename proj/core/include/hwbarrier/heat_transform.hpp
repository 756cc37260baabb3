#pragma once

#include <cstddef>
#include <functional>
#include <memory>

#include "hwbarrier/hw_model.hpp"
#include "hwbarrier/numerics.hpp"

namespace hwb {

struct HeatPoint {
  double x = 0.0;
  double tau = 0.0;
};

// Change of variables
//   C(r,t) = exp(alpha(t) r + beta(t)) u(x, tau),  x = r psi(t) + xi(t),  tau = tau(t)
// that turns the bond-option pricing PDE
//   C_t + 1/2 sigma^2 C_rr + kappa (theta - r) C_r = r C
// into u_tau = u_xx. With the integration constants fixed by psi(0) = 1 and
// alpha(0) = beta(0) = xi(0) = 0:
//   psi(t)   = exp(int_0^t kappa)
//   tau(t)   = 1/2 int_t^T sigma^2 psi^2            (tau(T) = 0, decreasing in t)
//   alpha(t) = psi(t) int_0^t 1/psi
//   beta(t)  = -1/2 int_0^t alpha (2 kappa theta + sigma^2 alpha)
//   xi(t)    = -int_0^t (kappa theta + sigma^2 alpha) psi
// psi and alpha are closed form for constant kappa. beta, xi, tau and
// log A(t,S) are tabulated on [0,T] (cubic Hermite with exact slopes).
//
// The sign conventions above were re-derived by substitution and are checked
// by verify_reduction().
//
// Immutable after construction.
class HeatTransform {
 public:
  static constexpr std::size_t kDefaultCells = 2048;

  // Throws ConfigError unless 0 < T <= S.
  HeatTransform(const HullWhiteModel& model, double maturity,
                std::size_t cells = kDefaultCells);

  const HullWhiteModel& model() const { return model_; }
  double maturity() const { return maturity_; }
  double bond_maturity() const { return model_.bond_maturity; }

  double psi(double t) const;
  double alpha(double t) const;
  double beta(double t) const { return beta_(t); }
  double xi(double t) const { return xi_(t); }

  double psi_dt(double t) const;
  double alpha_dt(double t) const;
  double beta_dt(double t) const;
  double xi_dt(double t) const;

  double tau_of_t(double t) const;
  double tau_dt(double t) const;  // -1/2 sigma^2 psi^2
  // Inverse time map; RangeError outside [0, horizon()].
  double t_of_tau(double tau) const;
  // tau(0), the pricing horizon in heat time.
  double horizon() const { return horizon_; }

  // Tabulated bond coefficients on [0,T].
  double bond_log_A(double t) const { return log_a_(t); }
  double bond_B(double t) const;

  // Rate barrier L(t) = log(level / A(t,S)) / B(t,S) and its t-derivative.
  double rate_barrier(double level, double t) const;
  double rate_barrier_dt(double level, double t) const;

  HeatPoint to_heat(double r, double t) const;
  double from_heat(double u_value, double r, double t) const;

  // Bond price at maturity T written in heat coordinates:
  //   Fbar(x) = A(T,S) exp(B(T,S)/psi(T) (x - xi(T))).
  double bond_in_heat(double x) const;
  // u(x,0) = exp(-alpha(T)/psi(T) (x - xi(T)) - beta(T)) (Fbar(x) - K)^+.
  double initial_condition(double strike, double x) const;

 private:
  HullWhiteModel model_;
  double maturity_ = 0.0;
  double horizon_ = 0.0;
  numerics::CumulativeTable beta_;
  numerics::CumulativeTable xi_;
  numerics::CumulativeTable half_var_;  // 1/2 int_0^t sigma^2 psi^2
  numerics::CumulativeTable log_a_;
};

// Free-function spellings of the transform operations.
HeatTransform build_transform(const HullWhiteModel& model, double maturity);
double t_of_tau(const HeatTransform& tr, double tau);
HeatPoint to_heat(const HeatTransform& tr, double r, double t);
double from_heat(const HeatTransform& tr, double u_value, double r, double t);
double initial_condition(const HeatTransform& tr, double strike, double x);

// Moving boundary in heat coordinates, tau in [0, horizon].
// Built from a bond-price level, y(tau) = L(t(tau)) psi(t(tau)) + xi(t(tau)) is
// tabulated on a dense tau grid with exact slopes.
class BarrierPath {
 public:
  static constexpr std::size_t kDefaultCells = 1024;

  static BarrierPath from_bond_level(const HeatTransform& tr, double level,
                                     std::size_t cells = kDefaultCells);
  static BarrierPath from_functions(std::function<double(double)> y,
                                    std::function<double(double)> slope, double horizon);
  // Boundary with y(tau) = a + b tau.
  static BarrierPath linear(double a, double b, double horizon);

  // x -> -x image of this boundary.
  BarrierPath reflected() const;

  double operator()(double tau) const { return sign_ * y_(tau); }
  double slope(double tau) const { return sign_ * slope_(tau); }
  double horizon() const { return horizon_; }

 private:
  BarrierPath(std::function<double(double)> y, std::function<double(double)> slope,
              double horizon, double sign)
      : y_(std::move(y)), slope_(std::move(slope)), horizon_(horizon), sign_(sign) {}

  std::function<double(double)> y_;
  std::function<double(double)> slope_;
  double horizon_ = 0.0;
  double sign_ = 1.0;
};

struct ReductionReport {
  double max_relative_residual = 0.0;
  double max_abs_residual = 0.0;
  std::size_t points = 0;
};

// Manufactured heat solution u(x, tau) used by verify_reduction.
using HeatField = std::function<double(double x, double tau)>;

// Maps a smooth heat solution back through the transform and measures the
// residual of the bond-option PDE with fourth-order central differences on
// an (r,t) grid inside [r_lo, r_hi] x (0, T). The relative residual divides
// by the sum of magnitudes of the PDE's terms at each point. With no field
// given, a spreading Gaussian is used.
ReductionReport verify_reduction(const HeatTransform& tr, const HeatField& field = {},
                                 double r_lo = -0.1, double r_hi = 0.3);

}  // namespace hwb
