#include "dasr/cli/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>

namespace dasr::cli {

using nlohmann::json;

json default_tree(training::Phase phase) {
  const training::TrainConfig t = phase == training::Phase::dsn ? training::TrainConfig::dsn_defaults()
                                                                : training::TrainConfig::srn_defaults();
  json tree = t;
  data::DegradationSpec deg;
  deg.blur_sigma = 1.2;
  deg.noise_sigma = 0.02;
  tree["degradation"] = deg;
  const SimulateConfig sim;
  tree["simulate"] = {{"train_hr", sim.train_hr}, {"train_lr", sim.train_lr}, {"test", sim.test},
                      {"size", sim.size},         {"channels", sim.channels}};
  tree["paths"] = {{"data_root", ""},       {"out_dir", ""},        {"dsn_checkpoint", ""},
                   {"pairs_dir", ""},       {"srn_checkpoint", ""}, {"resume", ""},
                   {"input_dir", ""},       {"sr_dir", ""},         {"gt_dir", ""}};
  tree["eval"] = {{"perceptual", "none"}};
  tree["workers"] = 1;
  tree["deterministic"] = false;
  return tree;
}

std::map<std::string, json> flatten(const json& tree) {
  std::map<std::string, json> out;
  std::function<void(const json&, const std::string&)> walk = [&](const json& j, const std::string& pre) {
    if (j.is_object() && !j.empty()) {
      for (auto it = j.begin(); it != j.end(); ++it) walk(it.value(), pre.empty() ? it.key() : pre + "." + it.key());
    } else {
      out[pre] = j;
    }
  };
  walk(tree, "");
  return out;
}

namespace {

std::string type_name(const json& j) {
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  if (j.is_object()) return "object";
  return "null";
}

bool type_ok(const json& schema, const json& value) {
  if (schema.is_boolean()) return value.is_boolean();
  if (schema.is_number_integer()) return value.is_number_integer();
  if (schema.is_number()) return value.is_number();
  if (schema.is_string()) return value.is_string();
  if (schema.is_array()) {
    if (!value.is_array()) return false;
    if (schema.empty()) return true;
    for (const auto& v : value)
      if (!type_ok(schema.front(), v)) return false;
    return true;
  }
  return false;
}

json::json_pointer pointer(const std::string& dotted) {
  std::string p = "/" + dotted;
  for (char& c : p)
    if (c == '.') c = '/';
  return json::json_pointer(p);
}

using Flat = std::map<std::string, json>;

void apply_layer(Flat& merged, const Flat& schema, const Flat& layer, const std::string& origin,
                 std::map<std::string, std::string>& provenance) {
  for (const auto& [key, value] : layer) {
    if (value.is_object() && value.empty()) continue;
    auto it = schema.find(key);
    if (it == schema.end()) throw ConfigError("unknown config key '" + key + "' (" + origin + ")");
    if (!type_ok(it->second, value))
      throw ConfigError("config key '" + key + "' expects " + type_name(it->second) + ", got " +
                        type_name(value) + " (" + origin + ")");
    merged[key] = value;
    provenance[key] = origin;
  }
}

json read_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  try {
    json j = json::parse(f, nullptr, true, true);
    if (!j.is_object()) throw ConfigError("config file " + path.string() + " must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
}

Flat parse_overrides(const std::vector<std::string>& overrides, const Flat& schema) {
  Flat out;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' must be key=value");
    const std::string key = o.substr(0, eq);
    const std::string raw = o.substr(eq + 1);
    auto it = schema.find(key);
    if (it == schema.end()) throw ConfigError("unknown config key '" + key + "' (override)");
    if (it->second.is_string()) {
      out[key] = raw;
      continue;
    }
    try {
      out[key] = json::parse(raw);
    } catch (const json::parse_error&) {
      throw ConfigError("override '" + o + "': value is not a valid " + type_name(it->second));
    }
  }
  return out;
}

std::optional<std::string> phase_in(const Flat& layer) {
  auto it = layer.find("phase");
  if (it == layer.end()) return std::nullopt;
  if (!it->second.is_string()) throw ConfigError("config key 'phase' expects string");
  return it->second.get<std::string>();
}

}  // namespace

RunConfig parse_config(const std::vector<fs::path>& files, const std::vector<std::string>& overrides,
                       std::optional<training::Phase> command_phase) {
  std::vector<std::pair<std::string, Flat>> layers;
  for (const auto& f : files) layers.emplace_back("file:" + f.string(), flatten(read_file(f)));
  const Flat schema = flatten(default_tree(training::Phase::dsn));
  layers.emplace_back("override", parse_overrides(overrides, schema));

  training::Phase phase = command_phase.value_or(training::Phase::dsn);
  for (const auto& [origin, layer] : layers)
    if (auto p = phase_in(layer)) {
      try {
        phase = training::phase_from_string(*p);
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string(e.what()) + " (" + origin + ")");
      }
    }
  if (command_phase && phase != *command_phase)
    throw ConfigError("this command needs phase '" + training::to_string(*command_phase) +
                      "' but the configuration selects '" + training::to_string(phase) + "'");

  RunConfig rc;
  Flat merged = flatten(default_tree(phase));
  const Flat dsn_defaults = schema;
  for (const auto& [key, v] : merged)
    rc.provenance_[key] = dsn_defaults.at(key) == v ? "default" : "phase:" + training::to_string(phase);
  if (command_phase) rc.provenance_["phase"] = "command";
  for (const auto& [origin, layer] : layers) apply_layer(merged, schema, layer, origin, rc.provenance_);

  if (merged["paths.data_root"].get<std::string>().empty())
    if (const char* env = std::getenv("DASR_DATA_ROOT"); env && *env) {
      merged["paths.data_root"] = std::string(env);
      rc.provenance_["paths.data_root"] = "env:DASR_DATA_ROOT";
    }

  rc.tree_ = json::object();
  for (const auto& [key, v] : merged) rc.tree_[pointer(key)] = v;

  try {
    rc.train().validate();
    rc.degradation().validate();
    const SimulateConfig sim = rc.simulate();
    DASR_REQUIRE(sim.train_hr >= 1 && sim.train_lr >= 1 && sim.test >= 0, "simulate counts must be positive");
    DASR_REQUIRE(sim.size >= 2, "simulate.size must be >= 2");
    DASR_REQUIRE(sim.channels == 1 || sim.channels == 3, "simulate.channels must be 1 or 3");
    DASR_REQUIRE(rc.workers() >= 1, "workers must be >= 1");
    const std::string perceptual = rc.tree_.at("eval").at("perceptual").get<std::string>();
    DASR_REQUIRE(perceptual == "none" || perceptual == "feature",
                 "eval.perceptual must be 'none' or 'feature'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return rc;
}

training::TrainConfig RunConfig::train() const {
  json t = tree_;
  for (const char* k : {"degradation", "simulate", "paths", "eval", "workers", "deterministic"}) t.erase(k);
  try {
    return t.get<training::TrainConfig>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("training config: ") + e.what());
  }
}

data::DegradationSpec RunConfig::degradation() const {
  try {
    return tree_.at("degradation").get<data::DegradationSpec>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("degradation config: ") + e.what());
  }
}

SimulateConfig RunConfig::simulate() const {
  const json& s = tree_.at("simulate");
  SimulateConfig c;
  s.at("train_hr").get_to(c.train_hr);
  s.at("train_lr").get_to(c.train_lr);
  s.at("test").get_to(c.test);
  s.at("size").get_to(c.size);
  s.at("channels").get_to(c.channels);
  return c;
}

bool RunConfig::deterministic() const { return tree_.at("deterministic").get<bool>(); }

int RunConfig::workers() const { return deterministic() ? 1 : tree_.at("workers").get<int>(); }

std::string RunConfig::path(const std::string& key) const {
  return tree_.at("paths").at(key).get<std::string>();
}

std::string RunConfig::require_path(const std::string& key, const std::string& command) const {
  std::string p = path(key);
  if (p.empty()) throw ConfigError(command + " requires paths." + key);
  return p;
}

double RunConfig::get_double(const std::string& dotted) const {
  return tree_.at(pointer(dotted)).get<double>();
}

json RunConfig::with_provenance() const {
  json p = json::object();
  for (const auto& [k, v] : provenance_) p[k] = v;
  return {{"config", tree_}, {"provenance", p}};
}

void RunConfig::write(const fs::path& dir) const {
  fs::create_directories(dir);
  std::ofstream f(dir / "resolved_config.json");
  if (!f) throw IoError("cannot write resolved config in " + dir.string());
  f << tree_.dump(2) << "\n";
  std::ofstream g(dir / "config_provenance.json");
  if (!g) throw IoError("cannot write config provenance in " + dir.string());
  g << with_provenance().at("provenance").dump(2) << "\n";
}

}  // namespace dasr::cli
