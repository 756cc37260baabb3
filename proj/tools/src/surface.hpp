#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace hwb::app {

enum class Method { kFd, kGit, kHp };

std::string to_string(Method method);
// ConfigError for names other than hp, git, fd.
Method method_from_string(const std::string& name);
// Comma-separated list, order and duplicates preserved.
std::vector<Method> parse_methods(const std::string& list);

struct PriceRow {
  double strike = 0.0;
  double maturity = 0.0;
  Method method = Method::kHp;
  double price = 0.0;
  std::optional<double> delta;
  double runtime_ms = 0.0;
  bool knocked_out = false;
};

struct PriceSurface {
  std::vector<PriceRow> rows;
};

struct SurfaceOptions {
  bool with_delta = true;
  unsigned jobs = 0;  // 0: one worker per hardware thread
};

// ConfigError when `method` cannot price the configured option kind.
void check_supported(OptionKind kind, Method method);

// One row per (maturity, strike, distinct method). Work is split by
// (maturity, method) across a worker pool; strike-independent setup is shared
// inside each task. Rows come back sorted by maturity, strike, method name.
PriceSurface compute_surface(const RunConfig& config, std::span<const Method> methods,
                             const SurfaceOptions& options = {});

// strike,maturity,method,price,delta,runtime_ms with 10 significant digits.
std::string to_csv(const PriceSurface& surface, bool include_runtime = true);
// ConfigError naming the path on I/O failure.
void write_text(const std::string& path, const std::string& text);

struct ComparisonCell {
  double strike = 0.0;
  double maturity = 0.0;
  double reference_price = 0.0;
  std::vector<double> percent;  // 100 (a - ref) / ref per compared method
};

struct Comparison {
  Method reference = Method::kFd;
  std::vector<Method> compared;
  std::vector<ComparisonCell> cells;
  double min_price = 0.01;
  // Per compared method, over cells with reference price >= min_price.
  std::vector<double> max_abs_percent;
  std::vector<double> mean_abs_percent;
};

// Reference is fd when requested, otherwise the last listed method. Needs at
// least two methods (ConfigError otherwise).
Comparison compare(const PriceSurface& surface, std::span<const Method> methods,
                   double min_price = 0.01);
std::string format_comparison(const Comparison& comparison);

struct BenchResult {
  Method method = Method::kHp;
  std::vector<double> wall_ms;
  double median_ms = 0.0;
};

// Wall time of the full surface per method, single worker, no deltas.
std::vector<BenchResult> bench(const RunConfig& config, std::span<const Method> methods,
                               std::size_t repetitions);
std::string format_bench(const std::vector<BenchResult>& results);

}  // namespace hwb::app
