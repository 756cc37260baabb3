#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hwbarrier/errors.hpp"
#include "run_config.hpp"
#include "surface.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::string methods;
  std::optional<double> strike;
  std::optional<double> maturity;
  std::optional<std::size_t> m;
  unsigned jobs = 0;
  bool no_runtime = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, const std::string& default_methods) {
  f.methods = default_methods;
  cmd->add_option("--config", f.config_path, "YAML run configuration (reference defaults if omitted)");
  cmd->add_option("--out", f.out_path, "Output path (overrides output.path)");
  cmd->add_option("--methods,--method", f.methods, "Comma-separated methods: hp, git, fd")
      ->capture_default_str();
  cmd->add_option("--strike", f.strike, "Single strike (overrides contract.strikes)");
  cmd->add_option("--maturity", f.maturity, "Single maturity (overrides contract.maturities)");
  cmd->add_option("--m", f.m, "Volterra steps M (overrides numerics.M)");
  cmd->add_option("--jobs", f.jobs, "Worker threads (0: hardware concurrency)");
  cmd->add_flag("--no-runtime", f.no_runtime, "Leave runtime_ms empty for reproducible output");
}

hwb::app::RunConfig resolve(const CommonFlags& f) {
  hwb::app::RunConfig c = f.config_path.empty() ? hwb::app::RunConfig{}
                                                : hwb::app::load_config(f.config_path);
  if (!f.out_path.empty()) c.output.path = f.out_path;
  if (f.strike) c.contract.strikes = {*f.strike};
  if (f.maturity) c.contract.maturities = {*f.maturity};
  if (f.m) c.numerics.M = *f.m;
  if (f.no_runtime) c.output.include_runtime = false;
  c.validate();
  return c;
}

int run_price(const CommonFlags& f) {
  const auto cfg = resolve(f);
  const auto methods = hwb::app::parse_methods(f.methods);
  const auto surface = hwb::app::compute_surface(cfg, methods, {true, f.jobs});
  for (const auto& r : surface.rows) {
    std::string line = fmt::format("method={} strike={:.10g} maturity={:.10g} price={:.10g}",
                                   hwb::app::to_string(r.method), r.strike, r.maturity, r.price);
    if (r.delta) line += fmt::format(" delta={:.10g}", *r.delta);
    line += fmt::format(" runtime_ms={:.4f}", r.runtime_ms);
    if (r.knocked_out) {
      line += " flag=knocked_out";
    } else if (r.price == 0.0) {
      line += " flag=zero_payoff";
    }
    std::cout << line << '\n';
  }
  return 0;
}

int run_surface(const CommonFlags& f) {
  const auto cfg = resolve(f);
  const auto methods = hwb::app::parse_methods(f.methods);
  const auto surface = hwb::app::compute_surface(cfg, methods, {true, f.jobs});
  hwb::app::write_text(cfg.output.path, hwb::app::to_csv(surface, cfg.output.include_runtime));
  std::cout << fmt::format("wrote {} rows to {}\n", surface.rows.size(), cfg.output.path);
  return 0;
}

int run_compare(const CommonFlags& f) {
  const auto cfg = resolve(f);
  const auto methods = hwb::app::parse_methods(f.methods);
  if (methods.size() < 2) throw hwb::ConfigError("compare needs at least two methods");
  const auto surface = hwb::app::compute_surface(cfg, methods, {false, f.jobs});
  const auto text = hwb::app::format_comparison(hwb::app::compare(surface, methods));
  std::cout << text;
  if (!f.out_path.empty()) hwb::app::write_text(f.out_path, text);
  return 0;
}

int run_bench(const CommonFlags& f, std::size_t reps) {
  const auto cfg = resolve(f);
  const auto methods = hwb::app::parse_methods(f.methods);
  const auto text = hwb::app::format_bench(hwb::app::bench(cfg, methods, reps));
  std::cout << text;
  if (!f.out_path.empty()) hwb::app::write_text(f.out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barrier options on zero-coupon bonds under Hull-White"};
  app.require_subcommand(1);

  CommonFlags price_flags, surface_flags, compare_flags, bench_flags;
  std::size_t reps = 5;
  auto* price = app.add_subcommand("price", "Price single cells and print them");
  add_common(price, price_flags, "hp");
  auto* surface = app.add_subcommand("surface", "Write the strike x maturity surface as CSV");
  add_common(surface, surface_flags, "hp,git,fd");
  auto* compare = app.add_subcommand("compare", "Percent differences against a reference method");
  add_common(compare, compare_flags, "hp,git,fd");
  auto* bench = app.add_subcommand("bench", "Median wall time of the full surface per method");
  add_common(bench, bench_flags, "hp,git,fd");
  bench->add_option("--reps", reps, "Repetitions (>= 5 recommended)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*price) return run_price(price_flags);
    if (*surface) return run_surface(surface_flags);
    if (*compare) return run_compare(compare_flags);
    if (*bench) return run_bench(bench_flags, reps);
  } catch (const hwb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hwb::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitDomain;
  }
  return 0;
}
