#include "hwbarrier/hw_model.hpp"

#include <cmath>
#include <string>

#include "hwbarrier/errors.hpp"
#include "hwbarrier/numerics.hpp"

namespace hwb {

namespace {

// Panels for the log A quadrature; doubling them moves A(0,7) by < 1e-15
// for the test parameters (pinned by a unit test).
constexpr int kLogAPanels = 16;

void require_t_le_S(double t, double S, const char* who) {
  if (!(t <= S)) throw DomainError(std::string(who) + ": requires t <= S");
}

}  // namespace

double HullWhiteModel::theta(double t) const { return theta0 * std::exp(-theta_k * t); }

double HullWhiteModel::sigma(double t) const { return sigma0 * std::exp(-sigma_k * t); }

void HullWhiteModel::validate() const {
  if (!(kappa0 > 0.0)) throw ConfigError("model: kappa0 must be > 0");
  if (!(sigma0 > 0.0)) throw ConfigError("model: sigma0 must be > 0");
  if (!(bond_maturity > 0.0)) throw ConfigError("model: bond maturity S must be > 0");
  if (!std::isfinite(r0) || !std::isfinite(theta0) || !std::isfinite(theta_k) ||
      !std::isfinite(sigma_k)) {
    throw ConfigError("model: parameters must be finite");
  }
}

HullWhiteModel table1_model() { return HullWhiteModel{}; }

double bond_B(const HullWhiteModel& m, double t, double S) {
  require_t_le_S(t, S, "bond_B");
  const double k = m.kappa0;
  const double x = -k * (S - t);
  if (k == 0.0) return t - S;
  return std::expm1(x) / k;
}

double bond_B_dt(const HullWhiteModel& m, double t, double S) {
  return m.kappa(t) * bond_B(m, t, S) + 1.0;
}

double bond_log_A_dt(const HullWhiteModel& m, double t, double S) {
  const double b = bond_B(m, t, S);
  const double sg = m.sigma(t);
  return -0.5 * b * (2.0 * m.theta(t) * m.kappa(t) + b * sg * sg);
}

double bond_log_A(const HullWhiteModel& m, double t, double S) {
  require_t_le_S(t, S, "bond_A");
  // log A(t,S) = -int_t^S d(log A)/dx dx, since log A(S,S) = 0.
  return -numerics::gauss_legendre([&](double x) { return bond_log_A_dt(m, x, S); }, t, S,
                                   kLogAPanels);
}

double bond_A(const HullWhiteModel& m, double t, double S) { return std::exp(bond_log_A(m, t, S)); }

double zcb_price(const HullWhiteModel& m, double r, double t, double S) {
  require_t_le_S(t, S, "zcb_price");
  return std::exp(bond_log_A(m, t, S) + bond_B(m, t, S) * r);
}

double barrier_to_rate(const HullWhiteModel& m, double lf, double t, double S) {
  if (!(lf > 0.0)) throw DomainError("barrier_to_rate: bond barrier level must be > 0");
  require_t_le_S(t, S, "barrier_to_rate");
  const double b = bond_B(m, t, S);
  const double log_ratio = std::log(lf) - bond_log_A(m, t, S);
  if (b == 0.0) {
    if (log_ratio == 0.0) return 0.0;
    throw SingularityError("barrier_to_rate: B(t,S) = 0 at t = S");
  }
  return log_ratio / b;
}

}  // namespace hwb
