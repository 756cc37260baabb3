#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hwbarrier/hp_pricer.hpp"
#include "hwbarrier/hw_model.hpp"

namespace hwb {

// Which rate barriers are active. Each level is a bond price; the lower level
// maps to a rising rate barrier L(t) (alive above), the upper level to H(t)
// (alive below). No levels gives the plain call.
struct FdContract {
  std::optional<double> lower_level;
  std::optional<double> upper_level;

  static FdContract down_and_out(double level) { return {level, std::nullopt}; }
  static FdContract up_and_out(double level) { return {std::nullopt, level}; }
  static FdContract double_barrier(double lower, double upper) { return {lower, upper}; }
  static FdContract vanilla() { return {}; }
};

enum class BarrierTreatment {
  // The barrier point enters the stencil of the first alive node as a
  // Dirichlet neighbour at distance r_i - L(t).
  kEmbedded,
  // Standard stencils, then every node beyond the barrier is reset to zero
  // after each step.
  kProjection,
};

struct FdOptions {
  std::size_t r_nodes = 201;
  std::size_t t_steps = 201;
  double r_max = 3.0;
  std::size_t n_rannacher = 4;  // implicit Euler half-steps at the start
  double margin = 0.1;          // grid reach beyond the barrier range
  double cluster_width = 0.05;  // sinh stretching scale around the centre
  double vanilla_reach = 2.0;   // r0 - vanilla_reach is the lower edge without a lower barrier
  BarrierTreatment treatment = BarrierTreatment::kEmbedded;
};

// Fixed rate grid clustered around L(0) (or r0 without a lower barrier) and
// uniform time levels, t_nodes.front() = 0, t_nodes.back() = T.
struct FdGrid {
  std::vector<double> r_nodes;
  std::vector<double> t_nodes;
  double r_max = 3.0;
  std::size_t n_rannacher = 4;
};

// RangeError if a barrier leaves (r_nodes.front(), r_max) on [0,T];
// ConfigError for fewer than 5 nodes or no time steps.
FdGrid make_fd_grid(const HullWhiteModel& model, const FdContract& contract, double maturity,
                    const FdOptions& options = {});

// Payoff (F(r,T,S) - K)^+ on the nodes strictly inside the alive band at T,
// forward values on barrier-free grid edges, zero elsewhere.
std::vector<double> terminal_values(const HullWhiteModel& model, const FdContract& contract,
                                    double maturity, double strike, const FdGrid& grid);

// Option values at t = 0 on grid.r_nodes, zero outside the alive region.
std::vector<double> solve_backward(const HullWhiteModel& model, const FdContract& contract,
                                   double maturity, double strike, const FdGrid& grid,
                                   BarrierTreatment treatment = BarrierTreatment::kEmbedded);

struct FdResult {
  double price = 0.0;
  double delta = 0.0;
  bool knocked_out = false;
};

// Cubic Lagrange interpolation at r0 through the nearest alive nodes, with
// the barrier point (value 0) included as a node when it is adjacent.
FdResult price_fd(const HullWhiteModel& model, const FdContract& contract, double maturity,
                  double strike, const FdOptions& options = {});

}  // namespace hwb
