// Acceptance suite: one PASS/FAIL line per criterion. With an argument N only
// criterion N runs; the exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "hwbarrier/double_barrier.hpp"
#include "hwbarrier/fd_reference.hpp"
#include "hwbarrier/git_pricer.hpp"
#include "hwbarrier/heat_transform.hpp"
#include "hwbarrier/hp_pricer.hpp"
#include "hwbarrier/volterra.hpp"
#include "run_config.hpp"
#include "surface.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

const hwb::HullWhiteModel kModel = hwb::table1_model();
constexpr double kLevel = hwb::kTable1BarrierLevel;
const std::vector<double> kStrikes{0.06, 0.08, 0.1, 0.15, 0.2, 0.3};
const std::vector<double> kMaturities{1.0 / 12.0, 0.3, 0.5, 1.0};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

hwb::FdOptions fd_sized(std::size_t n) {
  hwb::FdOptions o;
  o.r_nodes = n;
  o.t_steps = n;
  return o;
}

Outcome anchor_prices() {
  const auto t0 = Clock::now();
  const double fd = hwb::price_fd(kModel, hwb::FdContract::down_and_out(kLevel), 1.0, 0.3).price;
  const double hp = hwb::price_hp(kModel, kLevel, 1.0, 0.3).price;
  const double secs = seconds_since(t0);
  const bool fd_ok = fd >= 0.0146 && fd <= 0.0178;
  const bool hp_ok = hp >= 0.0173 && hp <= 0.0211;

  // Informational only: the plain trapezoid rule for the density and the
  // projection barrier treatment for the grid.
  const double hp_trap =
      hwb::price_hp(kModel, kLevel, 1.0, 0.3, {20, hwb::QuadratureRule::kTrapezoid}).price;
  auto proj = hwb::FdOptions{};
  proj.treatment = hwb::BarrierTreatment::kProjection;
  const double fd_proj =
      hwb::price_fd(kModel, hwb::FdContract::down_and_out(kLevel), 1.0, 0.3, proj).price;
  const double fd_fine =
      hwb::price_fd(kModel, hwb::FdContract::down_and_out(kLevel), 1.0, 0.3, fd_sized(801)).price;

  return {fd_ok && hp_ok && secs < 5.0,
          fmt::format("FD201={:.6f} in [0.0146,0.0178]: {}; HP(M=20)={:.6f} in [0.0173,0.0211]: "
                      "{}; time={:.2f}s | info: FD801={:.6f} FD201-projection={:.6f} "
                      "HP-plain-trapezoid={:.6f}",
                      fd, fd_ok ? "yes" : "no", hp, hp_ok ? "yes" : "no", secs, fd_fine, fd_proj,
                      hp_trap)};
}

Outcome hp_vs_fine_fd() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string where;
  for (double T : kMaturities) {
    if (T > 0.5) continue;
    const hwb::HeatPotentialSolver hp(kModel, kLevel, T);
    for (double K : kStrikes) {
      if (K > 0.15) continue;
      const double fd =
          hwb::price_fd(kModel, hwb::FdContract::down_and_out(kLevel), T, K, fd_sized(801)).price;
      const double e = rel(hp.price(K).price, fd);
      if (e > worst) {
        worst = e;
        where = fmt::format("T={:.4f} K={}", T, K);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 0.03 && secs < 60.0,
          fmt::format("max |HP-FD801|/FD = {:.4f}% at {}; time={:.2f}s", 100.0 * worst, where,
                      secs)};
}

Outcome hp_vs_git() {
  double worst = 0.0;
  std::size_t cells = 0;
  double worst_boundary = 0.0;
  for (double T : kMaturities) {
    const hwb::HeatPotentialSolver hp(kModel, kLevel, T);
    const hwb::GradientSolver git(kModel, kLevel, T);
    for (double K : kStrikes) {
      const double a = hp.price(K).price;
      if (a < 0.01) continue;
      ++cells;
      worst = std::max(worst, rel(git.price(K).price, a));
      const auto grad = git.solve_gradient(K);
      double scale = 0.0;
      for (std::size_t i = 0; i <= 50; ++i) {
        const double x =
            grad.params.lower + (std::min(grad.params.upper, grad.params.lower + 5.0) -
                                 grad.params.lower) * i / 50.0;
        scale = std::max(scale, std::abs(grad.params.initial_value(x)));
      }
      for (double tau : grad.grid.nodes) {
        if (tau == 0.0) continue;
        const double u = hwb::evaluate_u_git(grad, grad.path(tau), tau);
        worst_boundary = std::max(worst_boundary, std::abs(u) / scale);
      }
    }
  }
  const bool boundary_ok = worst_boundary <= 4.0 * std::numeric_limits<double>::epsilon();
  return {worst <= 0.01 && boundary_ok && cells > 0,
          fmt::format("max |HP-GIT|/HP = {:.4f}% over {} cells; max |u_GIT(y(tau),tau)|/max|u0| "
                      "= {:.3g}",
                      100.0 * worst, cells, worst_boundary)};
}

Outcome trivial_knock_out() {
  double worst = 0.0;
  for (double T : kMaturities) {
    for (double K : {kLevel, 0.9, 1.2}) {
      worst = std::max(worst, hwb::price_hp(kModel, kLevel, T, K).price);
      worst = std::max(worst, hwb::price_git(kModel, kLevel, T, K).price);
      worst = std::max(worst,
                       hwb::price_fd(kModel, hwb::FdContract::down_and_out(kLevel), T, K).price);
    }
  }
  return {worst <= 1e-12, fmt::format("max price for K >= L_F over HP, GIT, FD = {:.3g}", worst)};
}

Outcome reduction() {
  auto constant = kModel;
  constant.theta_k = 0.0;
  constant.sigma_k = 0.0;
  double worst_const = 0.0;
  double worst_t1 = 0.0;
  for (double T : kMaturities) {
    worst_const = std::max(
        worst_const, hwb::verify_reduction(hwb::HeatTransform(constant, T)).max_relative_residual);
    worst_t1 = std::max(
        worst_t1, hwb::verify_reduction(hwb::HeatTransform(kModel, T)).max_relative_residual);
  }
  return {worst_const <= 1e-6 && worst_t1 <= 1e-6,
          fmt::format("relative residual: constant model {:.3g}, reference model {:.3g}",
                      worst_const, worst_t1)};
}

double abel_gap(double b, std::size_t M) {
  const auto g = hwb::VolterraGrid::uniform(1.0, M);
  const auto y = hwb::BarrierPath::linear(0.1, b, 1.0);
  auto phi = [](double t) { return std::sin(t); };
  std::vector<double> rhs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = 2.0 * phi(g.nodes[i]);
  const auto num = hwb::solve_second_kind(g, rhs, hwb::make_hp_kernel(y, g), 1.0);
  const auto ref = hwb::abel_closed_form(0.1, b, phi, g);
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    diff = std::max(diff, std::abs(num.psi_values[i] - ref.psi_values[i]));
    scale = std::max(scale, std::abs(ref.psi_values[i]));
  }
  return diff / scale;
}

Outcome volterra_oracle() {
  double worst = 0.0;
  for (double b : {-1.0, 0.5, 2.0}) worst = std::max(worst, abel_gap(b, 200));

  const hwb::HeatPotentialSolver s20(kModel, kLevel, 0.5, {20});
  const hwb::HeatPotentialSolver s40(kModel, kLevel, 0.5, {40});
  const hwb::HeatPotentialSolver s80(kModel, kLevel, 0.5, {80});
  const auto d20 = s20.solve_density(0.1);
  const auto d40 = s40.solve_density(0.1);
  const auto d80 = s80.solve_density(0.1);
  double e1 = 0.0;
  double e2 = 0.0;
  for (std::size_t i = 0; i < d20.psi_values.size(); ++i) {
    e1 = std::max(e1, std::abs(d20.psi_values[i] - d40.psi_values[2 * i]));
    e2 = std::max(e2, std::abs(d40.psi_values[2 * i] - d80.psi_values[4 * i]));
  }
  const double order = std::log2(e1 / e2);
  return {worst <= 5e-3 && order >= 1.0,
          fmt::format("max relative gap to the Abel closed form at M=200 = {:.3g}; reference "
                      "density self-convergence order = {:.2f}",
                      worst, order)};
}

Outcome vanilla_parity() {
  double far_gap = 0.0;
  double parity_gap = 0.0;
  double fd_gap = 0.0;
  for (double T : {0.5, 1.0}) {
    for (double K : {0.1, 0.3}) {
      const double van = hwb::vanilla_price(kModel, T, K);
      // Bond level 1.6 maps to L(0) near -0.65: the layer potential is small, not zero.
      far_gap = std::max(far_gap, rel(hwb::price_hp(kModel, 1.6, T, K).price, van));
      const double out = hwb::price_hp(kModel, kLevel, T, K).price;
      const double in = hwb::down_and_in_price(kModel, kLevel, T, K).price;
      parity_gap = std::max(parity_gap, std::abs(out + in - van));
      const double fd =
          hwb::price_fd(kModel, hwb::FdContract::vanilla(), T, K, fd_sized(801)).price;
      fd_gap = std::max(fd_gap, rel(van, fd));
    }
  }
  return {far_gap <= 1e-3 && parity_gap <= 1e-12 && fd_gap <= 1e-3,
          fmt::format("far barrier vs vanilla {:.3g}; |out + in - vanilla| = {:.3g}; vanilla vs "
                      "FD801 {:.3g}",
                      far_gap, parity_gap, fd_gap)};
}

Outcome double_limit() {
  const double single = hwb::price_hp(kModel, kLevel, 0.5, 0.1).price;
  const double dbl = hwb::price_double(kModel, kLevel, 1e-3, 0.5, 0.1).price;
  const double e = rel(dbl, single);
  return {e <= 5e-3,
          fmt::format("double(hf=1e-3)={:.8f} single={:.8f} relative gap {:.3g}", dbl, single, e)};
}

Outcome delta_check() {
  constexpr double h = 1e-4;
  double worst = 0.0;
  std::size_t cells = 0;
  for (double T : kMaturities) {
    for (double K : kStrikes) {
      if (cells == 10) break;
      if (hwb::price_hp(kModel, kLevel, T, K).price < 0.01) continue;
      auto up = kModel;
      auto dn = kModel;
      up.r0 += h;
      dn.r0 -= h;
      const double bump = (hwb::price_hp(up, kLevel, T, K).price -
                           hwb::price_hp(dn, kLevel, T, K).price) /
                          (2.0 * h);
      worst = std::max(worst, rel(hwb::delta_hp(kModel, kLevel, T, K), bump));
      ++cells;
    }
  }
  return {cells == 10 && worst <= 5e-3,
          fmt::format("max |delta - bump|/|bump| = {:.3g} over {} cells", worst, cells)};
}

Outcome performance() {
  hwb::app::RunConfig config;
  const std::vector<hwb::app::Method> methods{hwb::app::Method::kHp, hwb::app::Method::kFd};
  double hp = 0.0;
  double fd = 0.0;
  for (const auto& r : hwb::app::bench(config, methods, 5))
    (r.method == hwb::app::Method::kHp ? hp : fd) = r.median_ms;
  return {hp < fd,
          fmt::format("24-cell surface median: HP(M=20) {:.1f} ms, FD(201x201) {:.1f} ms", hp, fd)};
}

const std::vector<std::function<Outcome()>> kCriteria{
    anchor_prices, hp_vs_fine_fd, hp_vs_git,      trivial_knock_out, reduction,
    volterra_oracle, vanilla_parity, double_limit, delta_check,       performance,
};

}  // namespace

int main(int argc, char** argv) {
  std::size_t first = 1;
  std::size_t last = kCriteria.size();
  if (argc > 1) {
    const long n = std::strtol(argv[1], nullptr, 10);
    if (n < 1 || n > static_cast<long>(kCriteria.size())) {
      fmt::print(stderr, "usage: hwb_acceptance [1-{}]\n", kCriteria.size());
      return 2;
    }
    first = last = static_cast<std::size_t>(n);
  }
  bool all = true;
  for (std::size_t n = first; n <= last; ++n) {
    Outcome o;
    try {
      o = kCriteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    fmt::print("criterion {:2}: {} | {}\n", n, o.pass ? "PASS" : "FAIL", o.detail);
  }
  return all ? 0 : 1;
}
