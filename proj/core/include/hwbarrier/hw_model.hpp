#pragma once

#include <optional>

namespace hwb {

// Hull-White short rate
//   dr = kappa(t) (theta(t) - r) dt + sigma(t) dW,  r(0) = r0
// in the exponential family
//   kappa(t) = kappa0, theta(t) = theta0 e^{-theta_k t}, sigma(t) = sigma0 e^{-sigma_k t},
// together with the maturity S of the zero-coupon bond the options are written on.
struct HullWhiteModel {
  double r0 = 0.07;
  double kappa0 = 1.0;
  double theta0 = 0.08;
  double theta_k = 0.3;
  double sigma0 = 0.2;
  double sigma_k = 0.2;
  double bond_maturity = 7.0;

  double kappa(double /*t*/) const { return kappa0; }
  double theta(double t) const;
  double sigma(double t) const;

  // Throws ConfigError unless kappa0 > 0, sigma0 > 0 and S > 0.
  void validate() const;

  bool operator==(const HullWhiteModel&) const = default;
};

// The parameter set used throughout the numerical experiments.
HullWhiteModel table1_model();
inline constexpr double kTable1BarrierLevel = 0.8;

// Barrier levels set on the bond price. `lower` is L_F; `upper`, when
// present, is the second level H_F of a double-barrier contract (0 < H_F < L_F
// so that the mapped rate barrier from H_F lies above the one from L_F).
struct BarrierSpec {
  double lower = kTable1BarrierLevel;
  std::optional<double> upper;

  bool operator==(const BarrierSpec&) const = default;
};

// Affine zero-coupon bond coefficients, F(r,t,S) = A(t,S) exp(B(t,S) r).
//
// B(t,S) = (e^{-kappa0 (S-t)} - 1) / kappa0 (closed form for constant kappa,
// with the kappa0 -> 0 limit t - S). A(t,S) uses composite Gauss-Legendre
// quadrature of log A = 1/2 int_t^S B (2 theta kappa + B sigma^2) dx.
double bond_B(const HullWhiteModel& m, double t, double S);
double bond_log_A(const HullWhiteModel& m, double t, double S);
double bond_A(const HullWhiteModel& m, double t, double S);

// d/dt of B(t,S) and log A(t,S) straight from the affine ODEs.
double bond_B_dt(const HullWhiteModel& m, double t, double S);
double bond_log_A_dt(const HullWhiteModel& m, double t, double S);

double zcb_price(const HullWhiteModel& m, double r, double t, double S);

// Rate level L(t) at which the bond price equals `lf`:
//   L(t) = log(lf / A(t,S)) / B(t,S).
// Throws DomainError for lf <= 0 or t > S, SingularityError at t = S unless
// lf equals A(S,S) = 1.
double barrier_to_rate(const HullWhiteModel& m, double lf, double t, double S);

}  // namespace hwb
