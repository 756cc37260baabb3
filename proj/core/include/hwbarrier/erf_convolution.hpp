#pragma once

#include <array>
#include <limits>

#include "hwbarrier/heat_transform.hpp"

namespace hwb {

// Heat-coordinate initial data
//   u(x,0) = sum_k sign_k exp(log_coef_k + rate_k x)   for lower <= x <= upper
// and zero elsewhere. For the bond call the two terms are
//   A(T,S) e^{-beta(T)} e^{A2 (x - xi(T))}   and   -K e^{-beta(T)} e^{B2 (x - xi(T))}
// with A2 = (B(T,S) - alpha(T))/psi(T), B2 = -alpha(T)/psi(T), and the support
// is [y(0), K1] where K1 = max(xi(T) + psi(T)/B(T,S) log(K/A(T,S)), y(0)).
// Limits may be infinite.
struct ErfConvolutionParams {
  struct Term {
    double sign = 1.0;
    double log_coef = 0.0;
    double rate = 0.0;
  };

  std::array<Term, 2> terms{};
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double xi_T = 0.0;

  // Constants of the closed-form convolution in their conventional names.
  double A2() const { return terms[0].rate; }
  double B2() const { return terms[1].rate; }
  double A1(double tau) const { return A2() * (tau * A2() - xi_T); }
  double B1(double tau) const { return B2() * (tau * B2() - xi_T); }
  double K1() const { return upper; }

  bool empty() const { return !(upper > lower); }

  // Initial datum at x (zero outside the support).
  double initial_value(double x) const;

  // Image under x -> -x.
  ErfConvolutionParams reflected() const;
};

// Initial data of a call with strike K restricted to [lower, upper] intersected
// with the region where the bond price at T exceeds K.
ErfConvolutionParams make_call_params(const HeatTransform& tr, double strike, double lower,
                                      double upper = std::numeric_limits<double>::infinity());

// (1/(2 sqrt(pi tau))) int_lower^upper u(x',0) exp(-(x-x')^2/(4 tau)) dx' in
// closed Erf form. For tau = 0 returns the initial datum.
double gaussian_convolution(const ErfConvolutionParams& p, double x, double tau);

// d/dx of gaussian_convolution (tau > 0).
double gaussian_convolution_dx(const ErfConvolutionParams& p, double x, double tau);

}  // namespace hwb
