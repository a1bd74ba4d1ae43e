#include "relkit/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "relkit/errors.hpp"

namespace relkit {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& j, const std::set<std::string>& allowed,
                           const std::string& scope) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw InvalidArgument(scope + ": unknown field '" + item.key() + "'");
    }
  }
}

int get_int(const json& j, const char* field, int fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number_integer()) {
    throw InvalidArgument(std::string(field) + ": expected an integer");
  }
  return j[field].get<int>();
}

double get_double(const json& j, const char* field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number()) {
    throw InvalidArgument(std::string(field) + ": expected a number");
  }
  return j[field].get<double>();
}

std::string get_string(const json& j, const char* field, const std::string& fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_string()) {
    throw InvalidArgument(std::string(field) + ": expected a string");
  }
  return j[field].get<std::string>();
}

SmootherConfig parse_smoother(const json& j) {
  reject_unknown_fields(j, {"method", "span", "k", "kernel"}, "smoother");
  SmootherConfig cfg;
  const std::string method = get_string(j, "method", "local-linear");
  if (method == "local-linear") {
    cfg.method = SmootherConfig::Method::kLocalLinear;
  } else if (method == "k-nn-mean") {
    cfg.method = SmootherConfig::Method::kKnnMean;
  } else {
    throw InvalidArgument("smoother.method: unknown value '" + method +
                          "' (expected local-linear or k-nn-mean)");
  }
  cfg.span = get_double(j, "span", cfg.span);
  cfg.k = get_int(j, "k", cfg.k);
  const std::string kernel = get_string(j, "kernel", "tricube");
  if (kernel == "tricube") {
    cfg.kernel = SmootherConfig::Kernel::kTricube;
  } else if (kernel == "uniform") {
    cfg.kernel = SmootherConfig::Kernel::kUniform;
  } else {
    throw InvalidArgument("smoother.kernel: unknown value '" + kernel +
                          "' (expected tricube or uniform)");
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config: expected a JSON object");

  // A run manifest embeds the config it was produced from; accept it directly.
  if (j.contains("tool") && j["tool"].is_string() && j["tool"] == "relkit" &&
      j.contains("config")) {
    j = j["config"];
    if (!j.is_object()) throw InvalidArgument("config: manifest 'config' is not an object");
  }

  reject_unknown_fields(j,
                        {"m_grid", "n_mc", "replications", "latent_transform", "master_seed",
                         "smoother", "mi_k", "quadrature_nodes"},
                        "config");

  ExperimentConfig cfg;
  if (j.contains("m_grid")) {
    if (!j["m_grid"].is_array()) throw InvalidArgument("m_grid: expected an array of integers");
    cfg.m_grid.clear();
    for (const auto& item : j["m_grid"]) {
      if (!item.is_number_integer()) {
        throw InvalidArgument("m_grid: expected an array of integers");
      }
      cfg.m_grid.push_back(item.get<int>());
    }
  }
  cfg.n_mc = get_int(j, "n_mc", cfg.n_mc);
  cfg.replications = get_int(j, "replications", cfg.replications);
  cfg.latent_transform =
      transform_mode_from_string(get_string(j, "latent_transform", "both"));
  if (j.contains("master_seed")) {
    if (!j["master_seed"].is_number_integer() && !j["master_seed"].is_number_unsigned()) {
      throw InvalidArgument("master_seed: expected an integer");
    }
    cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  }
  if (j.contains("smoother")) {
    if (!j["smoother"].is_object()) throw InvalidArgument("smoother: expected an object");
    cfg.smoother = parse_smoother(j["smoother"]);
  }
  cfg.mi_k = get_int(j, "mi_k", cfg.mi_k);
  cfg.quadrature_nodes = get_int(j, "quadrature_nodes", cfg.quadrature_nodes);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file: " + path);
  std::ostringstream oss;
  oss << in.rdbuf();
  return parse_experiment_config(oss.str());
}

std::string experiment_config_to_json(const ExperimentConfig& config, int indent) {
  json j;
  j["m_grid"] = config.m_grid;
  j["n_mc"] = config.n_mc;
  j["replications"] = config.replications;
  j["latent_transform"] = to_string(config.latent_transform);
  j["master_seed"] = config.master_seed;
  json sm;
  sm["method"] = config.smoother.method == SmootherConfig::Method::kLocalLinear
                     ? "local-linear"
                     : "k-nn-mean";
  sm["span"] = config.smoother.span;
  sm["k"] = config.smoother.k;
  sm["kernel"] =
      config.smoother.kernel == SmootherConfig::Kernel::kTricube ? "tricube" : "uniform";
  j["smoother"] = sm;
  j["mi_k"] = config.mi_k;
  j["quadrature_nodes"] = config.quadrature_nodes;
  return j.dump(indent);
}

}  // namespace relkit
