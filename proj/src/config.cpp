#include "masp/config.hpp"

#include <cctype>
#include <climits>
#include <fstream>
#include <sstream>

namespace masp {
namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

KeyValueFile KeyValueFile::parse_string(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");
    if (!kv.values_.emplace(key, value).second)
      throw ConfigError("config: duplicate key '" + key + "'");
    kv.consumed_[key] = false;
  }
  return kv;
}

bool KeyValueFile::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string KeyValueFile::raw(const std::string& key) {
  consumed_[key] = true;
  return values_.at(key);
}

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) {
  return has(key) ? raw(key) : fallback;
}

double KeyValueFile::get_double(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  const std::string s = raw(key);
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: " + s);
  }
  if (pos != s.size())
    throw ConfigError("config key '" + key + "': trailing characters in " + s);
  return v;
}

int KeyValueFile::get_int(const std::string& key, int fallback) {
  if (!has(key)) return fallback;
  const std::string s = raw(key);
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not an integer: " + s);
  }
  if (pos != s.size() || v < INT_MIN || v > INT_MAX)
    throw ConfigError("config key '" + key + "': not an integer: " + s);
  return static_cast<int>(v);
}

std::uint64_t KeyValueFile::get_u64(const std::string& key,
                                    std::uint64_t fallback) {
  if (!has(key)) return fallback;
  const std::string s = raw(key);
  size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not an unsigned integer: " + s);
  }
  if (pos != s.size())
    throw ConfigError("config key '" + key + "': not an unsigned integer: " + s);
  return static_cast<std::uint64_t>(v);
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const std::string s = raw(key);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got " + s);
}

void KeyValueFile::finalize() const {
  std::string unknown;
  for (const auto& [key, used] : consumed_)
    if (!used) unknown += (unknown.empty() ? "" : ", ") + key;
  if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);
}

void ExperimentConfig::validate() const {
  if (task_of(loss) != task)
    throw ConfigError("loss '" + to_string(loss) + "' does not apply to task");
  if (n < 0) throw ConfigError("n must be >= 0");
  if (dict_size < 1) throw ConfigError("dict_size must be >= 1");
  if (sparsity < 0 || sparsity > dict_size)
    throw ConfigError("sparsity must lie in [0, dict_size]");
  if (task == Task::Density && sparsity > dict_size - 1)
    throw ConfigError("density sparsity must leave room for the constant");
  if (noise_sigma < 0) throw ConfigError("noise_sigma must be >= 0");
  if (signal_l1 < 0) throw ConfigError("signal_l1 must be >= 0");
  if (coef_magnitude < 0) throw ConfigError("coef_magnitude must be >= 0");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (eval_points < 1) throw ConfigError("eval_points must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (radius < 0 || beta < 0 || tau < 0)
    throw ConfigError("radius, beta, tau must be >= 0 (0 = rule default)");
  if (alpha < 0) throw ConfigError("alpha must be >= 0");
  if (alpha > 0 && method != FitMethod::Langevin)
    throw ConfigError("alpha > 0 requires method = langevin");
  if (task == Task::Classification && method == FitMethod::Langevin && alpha <= 0)
    throw ConfigError(
        "classification chains need alpha > 0: margin-loss drift grows "
        "linearly and outruns the polynomial prior tails");
  if (sparsity_hat < 0) throw ConfigError("sparsity_hat must be >= 0");
  if (hinge_eps <= 0) throw ConfigError("hinge_eps must be > 0");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (grid_points < 2) throw ConfigError("grid_points must be >= 2");
  if (step < 0) throw ConfigError("step must be >= 0 (0 = default)");
  if (chain_steps < 10) throw ConfigError("chain_steps must be >= 10");
  if (burn_in < 0 || burn_in >= 1) throw ConfigError("burn_in must lie in [0, 1)");
  if (method == FitMethod::Quadrature && dict_size > 2)
    throw ConfigError("quadrature supports dict_size <= 2");
  if (method == FitMethod::Rejection && dict_size > 8)
    throw ConfigError("rejection sampling supports dict_size <= 8");
}

ExperimentConfig load_experiment_config(
    const std::string& path, const std::map<std::string, std::string>& overrides) {
  KeyValueFile kv =
      path.empty() ? KeyValueFile::parse_string("") : KeyValueFile::parse_file(path);
  ExperimentConfig cfg;

  auto str = [&](const char* key, const std::string& fallback) {
    auto it = overrides.find(key);
    if (it != overrides.end()) {
      if (kv.has(key)) (void)kv.get_string(key, "");  // mark consumed
      return it->second;
    }
    return kv.get_string(key, fallback);
  };
  auto num = [&](const char* key, double fallback) {
    auto it = overrides.find(key);
    if (it != overrides.end()) {
      if (kv.has(key)) (void)kv.get_string(key, "");
      try {
        return std::stod(it->second);
      } catch (const std::exception&) {
        throw ConfigError(std::string("override '") + key + "': not a number");
      }
    }
    return kv.get_double(key, fallback);
  };
  auto integer = [&](const char* key, int fallback) {
    auto it = overrides.find(key);
    if (it != overrides.end()) {
      if (kv.has(key)) (void)kv.get_string(key, "");
      try {
        return std::stoi(it->second);
      } catch (const std::exception&) {
        throw ConfigError(std::string("override '") + key + "': not an integer");
      }
    }
    return kv.get_int(key, fallback);
  };
  auto boolean = [&](const char* key, bool fallback) {
    auto it = overrides.find(key);
    if (it != overrides.end()) {
      if (kv.has(key)) (void)kv.get_string(key, "");
      if (it->second == "true" || it->second == "1") return true;
      if (it->second == "false" || it->second == "0") return false;
      throw ConfigError(std::string("override '") + key + "': expected true/false");
    }
    return kv.get_bool(key, fallback);
  };

  const std::string task_s = str("task", "regression");
  if (task_s == "regression") cfg.task = Task::Regression;
  else if (task_s == "density") cfg.task = Task::Density;
  else if (task_s == "classification") cfg.task = Task::Classification;
  else throw ConfigError("unknown task: " + task_s);

  const char* default_loss = cfg.task == Task::Regression   ? "reg-squared"
                             : cfg.task == Task::Density    ? "density-l2"
                                                            : "phi-logit";
  try {
    cfg.loss = loss_kind_from_string(str("loss", default_loss));
    cfg.method = fit_method_from_string(str("method", "rejection"));
    if (kv.has("design") || overrides.count("design"))
      cfg.design = design_from_string(str("design", "rademacher"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  cfg.label = str("label", cfg.label);
  cfg.ewa_only = boolean("ewa_only", cfg.ewa_only);
  cfg.n = integer("n", cfg.n);
  cfg.dict_size = integer("dict_size", cfg.dict_size);
  cfg.sparsity = integer("sparsity", cfg.sparsity);
  cfg.noise_sigma = num("noise_sigma", cfg.noise_sigma);
  cfg.signal_l1 = num("signal_l1", cfg.signal_l1);
  cfg.coef_magnitude = num("coef_magnitude", cfg.coef_magnitude);
  cfg.replications = integer("replications", cfg.replications);
  {
    auto it = overrides.find("seed");
    if (it != overrides.end()) {
      if (kv.has("seed")) (void)kv.get_string("seed", "");
      try {
        cfg.seed = std::stoull(it->second);
      } catch (const std::exception&) {
        throw ConfigError("override 'seed': not an unsigned integer");
      }
    } else {
      cfg.seed = kv.get_u64("seed", cfg.seed);
    }
  }
  cfg.eval_points = integer("eval_points", cfg.eval_points);
  cfg.threads = integer("threads", cfg.threads);
  cfg.radius = num("radius", cfg.radius);
  cfg.beta = num("beta", cfg.beta);
  cfg.tau = num("tau", cfg.tau);
  cfg.alpha = num("alpha", cfg.alpha);
  cfg.sparsity_hat = integer("sparsity_hat", cfg.sparsity_hat);
  cfg.tau_trace = boolean("tau_trace", cfg.tau_trace);
  cfg.density_beta_shortcut = boolean("density_beta_shortcut", cfg.density_beta_shortcut);
  cfg.hinge_eps = num("hinge_eps", cfg.hinge_eps);
  cfg.samples = integer("samples", cfg.samples);
  cfg.grid_points = integer("grid_points", cfg.grid_points);
  cfg.step = num("step", cfg.step);
  cfg.chain_steps = integer("chain_steps", cfg.chain_steps);
  cfg.burn_in = num("burn_in", cfg.burn_in);

  if (cfg.coef_magnitude == 0.0)
    cfg.coef_magnitude = cfg.task == Task::Density ? 0.1 : 0.4;

  kv.finalize();
  cfg.validate();
  return cfg;
}

}  // namespace masp
