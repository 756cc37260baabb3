#include "surface.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "hwbarrier/double_barrier.hpp"
#include "hwbarrier/errors.hpp"
#include "hwbarrier/fd_reference.hpp"
#include "hwbarrier/git_pricer.hpp"
#include "hwbarrier/hp_pricer.hpp"

namespace hwb::app {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

struct CellValue {
  double price = 0.0;
  std::optional<double> delta;
  bool knocked_out = false;
};

FdOptions fd_options(const NumericsConfig& n) {
  FdOptions o;
  o.r_nodes = n.fd_nr;
  o.t_steps = n.fd_nt;
  o.r_max = n.r_max;
  o.n_rannacher = n.n_rannacher;
  return o;
}

// Prices every strike of one maturity with one method; runtime_ms carries an
// equal share of the strike-independent setup.
std::vector<PriceRow> price_maturity(const RunConfig& cfg, Method method, double T,
                                     bool with_delta) {
  const auto& m = cfg.model;
  const auto& k = cfg.contract;
  const PricingOptions opts{cfg.numerics.M, QuadratureRule::kProductTrapezoid};
  const FdOptions fdo = fd_options(cfg.numerics);
  const std::size_t n = k.strikes.size();
  std::vector<PriceRow> rows(n);

  const auto setup_start = Clock::now();
  std::optional<HeatPotentialSolver> hp;
  std::optional<GradientSolver> git;
  const bool lower_family =
      k.option_kind == OptionKind::kDownAndOut || k.option_kind == OptionKind::kDownAndIn;
  if (lower_family && method == Method::kHp) hp.emplace(m, k.lf, T, opts);
  if (lower_family && method == Method::kGit) git.emplace(m, k.lf, T, opts);
  const double setup_share = elapsed_ms(setup_start) / static_cast<double>(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double K = k.strikes[i];
    CellValue v;
    const auto start = Clock::now();
    switch (k.option_kind) {
      case OptionKind::kDownAndOut:
      case OptionKind::kDownAndIn: {
        const bool in = k.option_kind == OptionKind::kDownAndIn;
        if (method == Method::kFd) {
          const auto out = price_fd(m, FdContract::down_and_out(k.lf), T, K, fdo);
          v = {out.price, out.delta, out.knocked_out};
          if (in) {
            const auto van = price_fd(m, FdContract::vanilla(), T, K, fdo);
            v = {van.price - out.price, van.delta - out.delta, false};
          }
        } else {
          const PriceResult out = hp ? hp->price(K) : git->price(K);
          v = {out.price, std::nullopt, out.knocked_out};
          if (in) v = {vanilla_price(m, T, K) - out.price, std::nullopt, false};
        }
        break;
      }
      case OptionKind::kUpAndOut:
        if (method == Method::kFd) {
          const auto out = price_fd(m, FdContract::up_and_out(*k.hf), T, K, fdo);
          v = {out.price, out.delta, out.knocked_out};
        } else {
          const auto out = up_and_out_price(m, *k.hf, T, K, opts);
          v = {out.price, std::nullopt, out.knocked_out};
        }
        break;
      case OptionKind::kDouble:
        if (method == Method::kFd) {
          const auto out = price_fd(m, FdContract::double_barrier(k.lf, *k.hf), T, K, fdo);
          v = {out.price, out.delta, out.knocked_out};
        } else {
          const auto out = price_double(m, k.lf, *k.hf, T, K, opts);
          v = {out.price, std::nullopt, out.knocked_out};
        }
        break;
      case OptionKind::kVanilla:
        if (method == Method::kFd) {
          const auto out = price_fd(m, FdContract::vanilla(), T, K, fdo);
          v = {out.price, out.delta, false};
        } else {
          v = {vanilla_price(m, T, K), std::nullopt, false};
        }
        break;
    }
    const double runtime = elapsed_ms(start) + setup_share;

    // Analytic deltas for the heat-potential route, outside the timing.
    if (with_delta && method == Method::kHp && !v.knocked_out) {
      if (k.option_kind == OptionKind::kDownAndOut) {
        v.delta = hp->delta(K);
      } else if (k.option_kind == OptionKind::kDownAndIn) {
        v.delta = vanilla_delta(m, T, K) - hp->delta(K);
      } else if (k.option_kind == OptionKind::kVanilla) {
        v.delta = vanilla_delta(m, T, K);
      }
    }
    if (!with_delta) v.delta.reset();
    rows[i] = {K, T, method, v.price, v.delta, runtime, v.knocked_out};
  }
  return rows;
}

std::vector<Method> distinct(std::span<const Method> methods) {
  std::vector<Method> out(methods.begin(), methods.end());
  std::sort(out.begin(), out.end(),
            [](Method a, Method b) { return to_string(a) < to_string(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::kFd: return "fd";
    case Method::kGit: return "git";
    case Method::kHp: return "hp";
  }
  return "hp";
}

Method method_from_string(const std::string& name) {
  for (auto m : {Method::kFd, Method::kGit, Method::kHp})
    if (to_string(m) == name) return m;
  throw ConfigError("unknown method '" + name + "' (expected hp, git or fd)");
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(method_from_string(item));
  }
  if (out.empty()) throw ConfigError("no methods given");
  return out;
}

void check_supported(OptionKind kind, Method method) {
  if (method == Method::kGit && (kind == OptionKind::kUpAndOut || kind == OptionKind::kDouble))
    throw ConfigError("method git does not price option_kind " + to_string(kind));
}

PriceSurface compute_surface(const RunConfig& config, std::span<const Method> methods,
                             const SurfaceOptions& options) {
  config.validate();
  const auto ms = distinct(methods);
  if (ms.empty()) throw ConfigError("no methods given");
  for (auto m : ms) check_supported(config.contract.option_kind, m);

  struct Task {
    Method method;
    double maturity;
  };
  std::vector<Task> tasks;
  for (double T : config.contract.maturities)
    for (auto m : ms) tasks.push_back({m, T});
  std::vector<std::vector<PriceRow>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = price_maturity(config, tasks[i].method, tasks[i].maturity, options.with_delta);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, tasks.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  PriceSurface s;
  for (auto& r : results) s.rows.insert(s.rows.end(), r.begin(), r.end());
  std::stable_sort(s.rows.begin(), s.rows.end(), [](const PriceRow& a, const PriceRow& b) {
    if (a.maturity != b.maturity) return a.maturity < b.maturity;
    if (a.strike != b.strike) return a.strike < b.strike;
    return to_string(a.method) < to_string(b.method);
  });
  return s;
}

std::string to_csv(const PriceSurface& surface, bool include_runtime) {
  std::string out = "strike,maturity,method,price,delta,runtime_ms\n";
  for (const auto& r : surface.rows) {
    out += fmt::format("{:.10g},{:.10g},{},{:.10g},", r.strike, r.maturity, to_string(r.method),
                       r.price);
    if (r.delta) out += fmt::format("{:.10g}", *r.delta);
    out += ',';
    if (include_runtime) out += fmt::format("{:.10g}", r.runtime_ms);
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw ConfigError("cannot write output file '" + path + "'");
}

Comparison compare(const PriceSurface& surface, std::span<const Method> methods,
                   double min_price) {
  if (methods.size() < 2) throw ConfigError("compare needs at least two methods");
  Comparison c;
  c.min_price = min_price;
  const bool has_fd = std::find(methods.begin(), methods.end(), Method::kFd) != methods.end();
  c.reference = has_fd ? Method::kFd : methods.back();
  bool skipped_reference = false;
  for (auto m : methods) {
    if (m == c.reference && !skipped_reference) {
      skipped_reference = true;
      continue;
    }
    c.compared.push_back(m);
  }

  auto find = [&](double K, double T, Method m) -> const PriceRow* {
    for (const auto& r : surface.rows)
      if (r.strike == K && r.maturity == T && r.method == m) return &r;
    return nullptr;
  };
  const std::size_t nm = c.compared.size();
  c.max_abs_percent.assign(nm, 0.0);
  c.mean_abs_percent.assign(nm, 0.0);
  std::size_t counted = 0;
  for (const auto& r : surface.rows) {
    if (r.method != c.reference) continue;
    ComparisonCell cell{r.strike, r.maturity, r.price, {}};
    for (auto m : c.compared) {
      const PriceRow* other = find(r.strike, r.maturity, m);
      if (!other) throw Error("compare: missing row for method " + to_string(m));
      cell.percent.push_back(r.price != 0.0 ? 100.0 * (other->price - r.price) / r.price
                             : (other->price == 0.0 ? 0.0 : NAN));
    }
    if (r.price >= min_price) {
      ++counted;
      for (std::size_t j = 0; j < nm; ++j) {
        c.max_abs_percent[j] = std::max(c.max_abs_percent[j], std::abs(cell.percent[j]));
        c.mean_abs_percent[j] += std::abs(cell.percent[j]);
      }
    }
    c.cells.push_back(std::move(cell));
  }
  if (counted > 0)
    for (auto& v : c.mean_abs_percent) v /= static_cast<double>(counted);
  return c;
}

std::string format_comparison(const Comparison& c) {
  std::string out = "strike,maturity," + to_string(c.reference) + "_price";
  for (auto m : c.compared)
    out += "," + to_string(m) + "_vs_" + to_string(c.reference) + "_pct";
  out += '\n';
  for (const auto& cell : c.cells) {
    out += fmt::format("{:.10g},{:.10g},{:.10g}", cell.strike, cell.maturity, cell.reference_price);
    for (double p : cell.percent) out += fmt::format(",{:.6f}", p);
    out += '\n';
  }
  for (std::size_t j = 0; j < c.compared.size(); ++j)
    out += fmt::format("# {} vs {} (cells with {} price >= {}): max |diff| {:.6f}%, mean |diff| {:.6f}%\n",
                       to_string(c.compared[j]), to_string(c.reference), to_string(c.reference),
                       c.min_price, c.max_abs_percent[j], c.mean_abs_percent[j]);
  return out;
}

std::vector<BenchResult> bench(const RunConfig& config, std::span<const Method> methods,
                               std::size_t repetitions) {
  config.validate();
  if (repetitions < 1) throw ConfigError("bench: repetitions must be >= 1");
  std::vector<BenchResult> out;
  for (auto m : distinct(methods)) {
    BenchResult b;
    b.method = m;
    const Method one[] = {m};
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const auto start = Clock::now();
      const auto s = compute_surface(config, one, {false, 1});
      b.wall_ms.push_back(elapsed_ms(start));
      if (s.rows.empty()) throw Error("bench: empty surface");
    }
    auto sorted = b.wall_ms;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t h = sorted.size() / 2;
    b.median_ms = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
    out.push_back(std::move(b));
  }
  return out;
}

std::string format_bench(const std::vector<BenchResult>& results) {
  std::string out = "method,repetitions,median_ms,min_ms,max_ms\n";
  for (const auto& b : results) {
    const auto [lo, hi] = std::minmax_element(b.wall_ms.begin(), b.wall_ms.end());
    out += fmt::format("{},{},{:.4f},{:.4f},{:.4f}\n", to_string(b.method), b.wall_ms.size(),
                       b.median_ms, *lo, *hi);
  }
  return out;
}

}  // namespace hwb::app
