#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hwbarrier/errors.hpp"

namespace hwb::app {

namespace {

void check_keys(const YAML::Node& node, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError("config: section '" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("config: unknown key '" + section + "." + key + "'");
  }
}

template <class T>
void read(const YAML::Node& node, const std::string& section, const char* key, T& out) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config: bad value for '" + section + "." + key + "'");
  }
}

void read_size(const YAML::Node& node, const std::string& section, const char* key,
               std::size_t& out) {
  long long v = static_cast<long long>(out);
  read(node, section, key, v);
  if (v < 0) throw ConfigError("config: '" + section + "." + key + "' must be >= 0");
  out = static_cast<std::size_t>(v);
}

}  // namespace

std::string to_string(OptionKind kind) {
  switch (kind) {
    case OptionKind::kDownAndOut: return "down_and_out";
    case OptionKind::kDownAndIn: return "down_and_in";
    case OptionKind::kUpAndOut: return "up_and_out";
    case OptionKind::kDouble: return "double";
    case OptionKind::kVanilla: return "vanilla";
  }
  return "down_and_out";
}

OptionKind option_kind_from_string(const std::string& name) {
  for (auto k : {OptionKind::kDownAndOut, OptionKind::kDownAndIn, OptionKind::kUpAndOut,
                 OptionKind::kDouble, OptionKind::kVanilla})
    if (to_string(k) == name) return k;
  throw ConfigError("config: unknown option_kind '" + name + "'");
}

void RunConfig::validate() const {
  model.validate();
  if (!(contract.lf > 0.0)) throw ConfigError("config: contract.lf must be > 0");
  if (contract.hf && !(*contract.hf > 0.0)) throw ConfigError("config: contract.hf must be > 0");
  const auto kind = contract.option_kind;
  if ((kind == OptionKind::kUpAndOut || kind == OptionKind::kDouble) && !contract.hf)
    throw ConfigError("config: option_kind " + to_string(kind) + " needs contract.hf");
  if (kind == OptionKind::kDouble && !(*contract.hf < contract.lf))
    throw ConfigError("config: double barrier needs hf < lf");
  if (contract.strikes.empty()) throw ConfigError("config: contract.strikes is empty");
  if (contract.maturities.empty()) throw ConfigError("config: contract.maturities is empty");
  for (double k : contract.strikes)
    if (!(k > 0.0)) throw ConfigError("config: strikes must be > 0");
  for (double t : contract.maturities)
    if (!(t > 0.0 && t < model.bond_maturity))
      throw ConfigError("config: maturities must lie in (0, S)");
  if (numerics.M < 1) throw ConfigError("config: numerics.M must be >= 1");
  if (numerics.fd_nr < 5) throw ConfigError("config: numerics.fd_nr must be >= 5");
  if (numerics.fd_nt < 1) throw ConfigError("config: numerics.fd_nt must be >= 1");
  if (!(numerics.r_max > model.r0)) throw ConfigError("config: numerics.r_max must exceed r0");
  if (output.format != "csv") throw ConfigError("config: output.format must be 'csv'");
  if (output.path.empty()) throw ConfigError("config: output.path is empty");
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: YAML parse error: ") + e.what());
  }
  RunConfig c;
  if (root.IsNull()) {
    c.validate();
    return c;
  }
  check_keys(root, "<root>", {"model", "contract", "numerics", "output"});

  if (const auto m = root["model"]) {
    check_keys(m, "model", {"r0", "kappa0", "theta0", "theta_k", "sigma0", "sigma_k", "S"});
    read(m, "model", "r0", c.model.r0);
    read(m, "model", "kappa0", c.model.kappa0);
    read(m, "model", "theta0", c.model.theta0);
    read(m, "model", "theta_k", c.model.theta_k);
    read(m, "model", "sigma0", c.model.sigma0);
    read(m, "model", "sigma_k", c.model.sigma_k);
    read(m, "model", "S", c.model.bond_maturity);
  }
  if (const auto k = root["contract"]) {
    check_keys(k, "contract", {"lf", "hf", "strikes", "maturities", "option_kind"});
    read(k, "contract", "lf", c.contract.lf);
    if (k["hf"] && !k["hf"].IsNull()) {
      double hf = 0.0;
      read(k, "contract", "hf", hf);
      c.contract.hf = hf;
    }
    read(k, "contract", "strikes", c.contract.strikes);
    read(k, "contract", "maturities", c.contract.maturities);
    std::string kind = to_string(c.contract.option_kind);
    read(k, "contract", "option_kind", kind);
    c.contract.option_kind = option_kind_from_string(kind);
  }
  if (const auto n = root["numerics"]) {
    check_keys(n, "numerics", {"M", "fd_nr", "fd_nt", "r_max", "n_rannacher"});
    read_size(n, "numerics", "M", c.numerics.M);
    read_size(n, "numerics", "fd_nr", c.numerics.fd_nr);
    read_size(n, "numerics", "fd_nt", c.numerics.fd_nt);
    read(n, "numerics", "r_max", c.numerics.r_max);
    read_size(n, "numerics", "n_rannacher", c.numerics.n_rannacher);
  }
  if (const auto o = root["output"]) {
    check_keys(o, "output", {"path", "format", "include_runtime"});
    read(o, "output", "path", c.output.path);
    read(o, "output", "format", c.output.format);
    read(o, "output", "include_runtime", c.output.include_runtime);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "r0" << YAML::Value << c.model.r0;
  out << YAML::Key << "kappa0" << YAML::Value << c.model.kappa0;
  out << YAML::Key << "theta0" << YAML::Value << c.model.theta0;
  out << YAML::Key << "theta_k" << YAML::Value << c.model.theta_k;
  out << YAML::Key << "sigma0" << YAML::Value << c.model.sigma0;
  out << YAML::Key << "sigma_k" << YAML::Value << c.model.sigma_k;
  out << YAML::Key << "S" << YAML::Value << c.model.bond_maturity;
  out << YAML::EndMap;

  out << YAML::Key << "contract" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lf" << YAML::Value << c.contract.lf;
  if (c.contract.hf) out << YAML::Key << "hf" << YAML::Value << *c.contract.hf;
  out << YAML::Key << "strikes" << YAML::Value << YAML::Flow << c.contract.strikes;
  out << YAML::Key << "maturities" << YAML::Value << YAML::Flow << c.contract.maturities;
  out << YAML::Key << "option_kind" << YAML::Value << to_string(c.contract.option_kind);
  out << YAML::EndMap;

  out << YAML::Key << "numerics" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "M" << YAML::Value << c.numerics.M;
  out << YAML::Key << "fd_nr" << YAML::Value << c.numerics.fd_nr;
  out << YAML::Key << "fd_nt" << YAML::Value << c.numerics.fd_nt;
  out << YAML::Key << "r_max" << YAML::Value << c.numerics.r_max;
  out << YAML::Key << "n_rannacher" << YAML::Value << c.numerics.n_rannacher;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "path" << YAML::Value << c.output.path;
  out << YAML::Key << "format" << YAML::Value << c.output.format;
  out << YAML::Key << "include_runtime" << YAML::Value << c.output.include_runtime;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace hwb::app
