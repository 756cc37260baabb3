#include "hwbarrier/erf_convolution.hpp"

#include <cmath>

#include "hwbarrier/errors.hpp"
#include "hwbarrier/numerics.hpp"

namespace hwb {

double ErfConvolutionParams::initial_value(double x) const {
  if (x < lower || x > upper || empty()) return 0.0;
  double v = 0.0;
  for (const auto& t : terms) v += t.sign * std::exp(t.log_coef + t.rate * x);
  return std::max(v, 0.0);
}

ErfConvolutionParams ErfConvolutionParams::reflected() const {
  ErfConvolutionParams r = *this;
  for (auto& t : r.terms) t.rate = -t.rate;
  r.lower = -upper;
  r.upper = -lower;
  r.xi_T = -xi_T;
  return r;
}

ErfConvolutionParams make_call_params(const HeatTransform& tr, double strike, double lower,
                                      double upper) {
  if (strike < 0.0) throw DomainError("call params: strike must be >= 0");
  const double T = tr.maturity();
  const double psi = tr.psi(T);
  const double alpha = tr.alpha(T);
  const double beta = tr.beta(T);
  const double xi = tr.xi(T);
  const double b = tr.bond_B(T);
  const double log_a = tr.bond_log_A(T);

  ErfConvolutionParams p;
  p.xi_T = xi;
  const double a2 = (b - alpha) / psi;
  const double b2 = -alpha / psi;
  p.terms[0] = {1.0, log_a - beta - a2 * xi, a2};
  if (strike > 0.0) {
    p.terms[1] = {-1.0, std::log(strike) - beta - b2 * xi, b2};
  } else {
    p.terms[1] = {0.0, 0.0, b2};
  }
  // Fbar(x) > K  <=>  x < xi + psi/B log(K/A)  (B < 0).
  double strike_edge = std::numeric_limits<double>::infinity();
  if (strike > 0.0) {
    if (b == 0.0) throw SingularityError("call params: B(T,S) = 0");
    strike_edge = xi + psi / b * (std::log(strike) - log_a);
  }
  // A strike equal to the barrier level puts the edge on the boundary up to
  // rounding; treat that support as empty.
  if (strike_edge <= lower + 1e-12 * std::max(1.0, std::abs(lower))) strike_edge = lower;
  p.lower = lower;
  p.upper = std::max(std::min(upper, strike_edge), lower);
  return p;
}

namespace {

// Convolution of sign*exp(log_coef + rate x') over [lo, hi]:
//   1/2 sign exp(log_coef + rate x + rate^2 tau) (erf(a) - erf(b)),
//   a = (x - lo + 2 rate tau)/(2 sqrt(tau)),  b = (x - hi + 2 rate tau)/(2 sqrt(tau)).
double term_convolution(const ErfConvolutionParams::Term& t, double lo, double hi, double x,
                        double tau) {
  if (t.sign == 0.0) return 0.0;
  const double s = 2.0 * std::sqrt(tau);
  const double shift = x + 2.0 * t.rate * tau;
  const double a = std::isinf(lo) ? (lo < 0 ? HUGE_VAL : -HUGE_VAL) : (shift - lo) / s;
  const double b = std::isinf(hi) ? (hi > 0 ? -HUGE_VAL : HUGE_VAL) : (shift - hi) / s;
  const double e = t.log_coef + t.rate * x + t.rate * t.rate * tau;
  return 0.5 * t.sign * numerics::exp_erf_diff(e, a, b);
}

// d/dx of term_convolution.
double term_convolution_dx(const ErfConvolutionParams::Term& t, double lo, double hi, double x,
                           double tau) {
  if (t.sign == 0.0) return 0.0;
  const double s = 2.0 * std::sqrt(tau);
  const double shift = x + 2.0 * t.rate * tau;
  const double e = t.log_coef + t.rate * x + t.rate * t.rate * tau;
  double gauss = 0.0;  // exp(e) * (exp(-a^2) - exp(-b^2)) * 2/(sqrt(pi) s)
  if (!std::isinf(lo)) {
    const double a = (shift - lo) / s;
    gauss += std::exp(e - a * a);
  }
  if (!std::isinf(hi)) {
    const double b = (shift - hi) / s;
    gauss -= std::exp(e - b * b);
  }
  gauss *= 2.0 / (numerics::kSqrtPi * s);
  return t.rate * term_convolution(t, lo, hi, x, tau) + 0.5 * t.sign * gauss;
}

}  // namespace

double gaussian_convolution(const ErfConvolutionParams& p, double x, double tau) {
  if (p.empty()) return 0.0;
  if (tau < 0.0) throw DomainError("gaussian_convolution: tau must be >= 0");
  if (tau == 0.0) return p.initial_value(x);
  double v = 0.0;
  for (const auto& t : p.terms) v += term_convolution(t, p.lower, p.upper, x, tau);
  return v;
}

double gaussian_convolution_dx(const ErfConvolutionParams& p, double x, double tau) {
  if (p.empty()) return 0.0;
  if (!(tau > 0.0)) throw DomainError("gaussian_convolution_dx: tau must be > 0");
  double v = 0.0;
  for (const auto& t : p.terms) v += term_convolution_dx(t, p.lower, p.upper, x, tau);
  return v;
}

}  // namespace hwb
