#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hwbarrier/hw_model.hpp"

namespace hwb::app {

enum class OptionKind { kDownAndOut, kDownAndIn, kUpAndOut, kDouble, kVanilla };

struct ContractConfig {
  double lf = kTable1BarrierLevel;
  std::optional<double> hf;
  std::vector<double> strikes{0.06, 0.08, 0.1, 0.15, 0.2, 0.3};
  std::vector<double> maturities{1.0 / 12.0, 0.3, 0.5, 1.0};
  OptionKind option_kind = OptionKind::kDownAndOut;

  bool operator==(const ContractConfig&) const = default;
};

struct NumericsConfig {
  std::size_t M = 20;
  std::size_t fd_nr = 201;
  std::size_t fd_nt = 201;
  double r_max = 3.0;
  std::size_t n_rannacher = 4;

  bool operator==(const NumericsConfig&) const = default;
};

struct OutputConfig {
  std::string path = "surface.csv";
  std::string format = "csv";
  bool include_runtime = true;  // false leaves runtime_ms empty for reproducible files

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  HullWhiteModel model = table1_model();
  ContractConfig contract;
  NumericsConfig numerics;
  OutputConfig output;

  // ConfigError on the first violated rule.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

std::string to_string(OptionKind kind);
OptionKind option_kind_from_string(const std::string& name);

// YAML with sections model, contract, numerics, output. Missing keys keep
// their defaults; unknown keys, wrong types and invalid values raise
// ConfigError. The result is validated.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& config);

}  // namespace hwb::app
